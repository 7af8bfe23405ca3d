#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "loihi/fixedpoint.hpp"
#include "loihi/random.hpp"

using namespace loihi;

TEST_SUITE("round_away_from_zero") {
    TEST_CASE("examples") {
        CHECK(round_away_from_zero(0.0) == 0);
        CHECK(round_away_from_zero(2.3) == 3);
        CHECK(round_away_from_zero(-2.3) == -3);
        CHECK(round_away_from_zero(4.0) == 4);
        CHECK(round_away_from_zero(-0.0001) == -1);
    }

    TEST_CASE("odd over a value sweep") {
        for (int i = -20000; i <= 20000; ++i) {
            const double x = i * 0.0137;
            CHECK(round_away_from_zero(-x) == -round_away_from_zero(x));
        }
    }

    TEST_CASE("shifted form agrees with the real form") {
        RandomStream rng(3);
        for (int i = 0; i < 20000; ++i) {
            const std::int64_t n = rng.uniform_int(-1'000'000, 1'000'000);
            const int shift = static_cast<int>(rng.uniform_int(0, 16));
            CHECK(round_away_from_zero_shifted(n, shift) == round_away_from_zero(std::ldexp(static_cast<double>(n), -shift)));
        }
    }
}

TEST_SUITE("decay_step") {
    TEST_CASE("examples") {
        CHECK(decay_step(100, DecayFactor(0)) == 100);
        CHECK(decay_step(100, DecayFactor(4096)) == 0);
        CHECK(decay_step(100, DecayFactor(2048)) == 50);
        CHECK(decay_step(-5, DecayFactor(410)) == -4);
    }

    TEST_CASE("invariants") {
        RandomStream rng(9);
        for (std::int64_t raw = 0; raw <= 4096; raw += 7) {
            CHECK(decay_step(0, DecayFactor(raw)) == 0);
        }
        for (int i = 0; i < 50000; ++i) {
            const std::int64_t s = rng.uniform_int(-(std::int64_t{1} << 40), std::int64_t{1} << 40);
            const DecayFactor d(rng.uniform_int(0, 4096));
            const std::int64_t r = decay_step(s, d);
            CHECK(std::abs(r) <= std::abs(s));
            CHECK((r == 0 || (r > 0) == (s > 0)));
        }
    }

    TEST_CASE("range and overflow errors") {
        CHECK_THROWS_AS(DecayFactor(-1), RangeError);
        CHECK_THROWS_AS(DecayFactor(4097), RangeError);
        CHECK_THROWS_AS(decay_step(std::numeric_limits<std::int64_t>::max(), DecayFactor(4096)), OverflowError);
    }
}

TEST_SUITE("stochastic_round") {
    TEST_CASE("on-grid values are exact and draw nothing") {
        RandomStream a(1);
        RandomStream b(1);
        CHECK(stochastic_round(8.0, 1, a) == 8);
        CHECK(stochastic_round(-12.0, 4, a) == -12);
        CHECK(a.next_u64() == b.next_u64());
    }

    TEST_CASE("101 with step 2 lands on 100 or 102 evenly") {
        RandomStream rng(7);
        int up = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const auto r = stochastic_round(101.0, 2, rng);
            REQUIRE((r == 100 || r == 102));
            up += r == 102;
        }
        CHECK(std::abs(up / double(n) - 0.5) < 4 * 0.5 / std::sqrt(double(n)));
    }

    TEST_CASE("-3 with step 4 lands on 0 w.p. 1/4 and -4 w.p. 3/4") {
        RandomStream rng(8);
        int zero = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const auto r = stochastic_round(-3.0, 4, rng);
            REQUIRE((r == 0 || r == -4));
            zero += r == 0;
        }
        CHECK(std::abs(zero / double(n) - 0.25) < 4 * std::sqrt(0.25 * 0.75 / n));
    }

    TEST_CASE("unbiased within 4 step / sqrt(N) at N = 1e5") {
        const int n = 100000;
        RandomStream rng(11);
        for (const std::int64_t step : {1, 2, 4, 16, 256}) {
            for (const double x : {0.3, 5.75, -7.1, 100.5, -250.9}) {
                double sum = 0.0;
                for (int i = 0; i < n; ++i) {
                    const auto r = stochastic_round(x, step, rng);
                    REQUIRE(r % step == 0);
                    sum += static_cast<double>(r);
                }
                CHECK(std::abs(sum / n - x) <= 4.0 * static_cast<double>(step) / std::sqrt(double(n)));
            }
        }
    }

    TEST_CASE("step must be a power of two") {
        RandomStream rng(1);
        CHECK_THROWS_AS(stochastic_round(1.5, 3, rng), RangeError);
        CHECK_THROWS_AS(stochastic_round(1.5, 0, rng), RangeError);
    }

    TEST_CASE("unit rounding") {
        RandomStream rng(5);
        CHECK(stochastic_round_unit(5.0, rng) == 5);
        int ones = 0;
        int near = 0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) {
            const auto half = stochastic_round_unit(0.5, rng);
            REQUIRE((half == 0 || half == 1));
            ones += static_cast<int>(half);
            const auto r = stochastic_round_unit(104.99, rng);
            REQUIRE((r == 104 || r == 105));
            near += r == 105;
        }
        CHECK(std::abs(ones / double(n) - 0.5) < 0.01);
        CHECK(std::abs(near / double(n) - 0.99) < 0.002);
    }
}

TEST_SUITE("RandomStream") {
    TEST_CASE("equal seeds give equal first 1e6 draws") {
        RandomStream a(123456789);
        RandomStream b(123456789);
        bool same = true;
        for (int i = 0; i < 1'000'000; ++i) same = same && a.next_u64() == b.next_u64();
        CHECK(same);
    }

    TEST_CASE("pinned output") {
        RandomStream zero(0);
        CHECK(zero.next_u64() == 0x99EC5F36CB75F2B4ULL);
        CHECK(zero.next_u64() == 0xBF6E1F784956452AULL);
        CHECK(zero.next_u64() == 0x1A5F849D4933E6E0ULL);
        RandomStream other(2024);
        CHECK(other.next_u64() == 0x0E48715A13D7772EULL);
        CHECK(derive_seed(1, 0, "traces") == 0x5A474EECBC249D60ULL);
    }

    TEST_CASE("uniform lies in [0, 1) and has mean 1/2") {
        RandomStream rng(42);
        double sum = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = rng.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
        }
        CHECK(std::abs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));
    }

    TEST_CASE("normal has mean 0 and variance 1") {
        RandomStream rng(43);
        double s = 0.0;
        double s2 = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double z = rng.normal();
            s += z;
            s2 += z * z;
        }
        CHECK(std::abs(s / n) < 0.01);
        CHECK(std::abs(s2 / n - 1.0) < 0.02);
    }

    TEST_CASE("uniform_int covers its closed range evenly") {
        RandomStream rng(44);
        std::vector<int> counts(7, 0);
        for (int i = 0; i < 70000; ++i) {
            const auto v = rng.uniform_int(-3, 3);
            REQUIRE(v >= -3);
            REQUIRE(v <= 3);
            counts[static_cast<std::size_t>(v + 3)]++;
        }
        for (const int c : counts) CHECK(std::abs(c - 10000) < 500);
        CHECK(rng.uniform_int(5, 5) == 5);
    }

    TEST_CASE("substreams differ by entity and purpose") {
        CHECK(derive_seed(1, 0, "traces") != derive_seed(1, 1, "traces"));
        CHECK(derive_seed(1, 0, "traces") != derive_seed(1, 0, "weights"));
        CHECK(derive_seed(1, 0, "traces") != derive_seed(2, 0, "traces"));
        CHECK(derive_seed(1, 0, "traces") == derive_seed(1, 0, "traces"));
        auto a = RandomStream::substream(9, 3, "generator");
        auto b = RandomStream::substream(9, 3, "generator");
        CHECK(a.next_u64() == b.next_u64());
    }

    TEST_CASE("fnv1a64 reference values") {
        CHECK(fnv1a64("") == 0xCBF29CE484222325ULL);
        CHECK(fnv1a64("a") == 0xAF63DC4C8601EC8CULL);
    }
}
