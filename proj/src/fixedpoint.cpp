#include "loihi/fixedpoint.hpp"

#include <cmath>
#include <string>

namespace loihi {

DecayFactor::DecayFactor(std::int64_t raw) : raw_(raw) {
    if (raw < 0 || raw > kMax) {
        throw RangeError("decay factor " + std::to_string(raw) + " outside [0, 4096]");
    }
}

std::int64_t round_away_from_zero(double x) {
    if (!std::isfinite(x)) {
        throw RangeError("round_away_from_zero: non-finite input");
    }
    const double magnitude = std::ceil(std::fabs(x));
    if (magnitude >= 0x1.0p63) {
        throw OverflowError("round_away_from_zero: result exceeds 64-bit range");
    }
    const auto m = static_cast<std::int64_t>(magnitude);
    return x < 0 ? -m : m;
}

std::int64_t round_away_from_zero_shifted(std::int64_t numerator, int shift) noexcept {
    // ceil(|n| / 2^shift) computed on the unsigned magnitude; exact for all n.
    const std::uint64_t magnitude =
        numerator < 0 ? 0 - static_cast<std::uint64_t>(numerator) : static_cast<std::uint64_t>(numerator);
    const std::uint64_t mask = (std::uint64_t{1} << shift) - 1;
    const std::uint64_t quotient = (magnitude >> shift) + ((magnitude & mask) != 0 ? 1 : 0);
    const auto q = static_cast<std::int64_t>(quotient);
    return numerator < 0 ? -q : q;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what) {
    std::int64_t out;
    if (__builtin_add_overflow(a, b, &out)) {
        throw OverflowError(std::string(what) + ": addition overflow");
    }
    return out;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
    std::int64_t out;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw OverflowError(std::string(what) + ": multiplication overflow");
    }
    return out;
}

std::int64_t decay_step(std::int64_t state, DecayFactor delta) {
    const std::int64_t product = checked_mul(state, delta.raw(), "decay");
    return state - round_away_from_zero_shifted(product, 12);
}

std::int64_t stochastic_round(double x, std::int64_t step, RandomStream& rng) {
    if (step <= 0 || (step & (step - 1)) != 0) {
        throw RangeError("stochastic_round: step " + std::to_string(step) +
                         " is not a positive power of two");
    }
    if (!std::isfinite(x)) {
        throw RangeError("stochastic_round: non-finite input");
    }
    const double magnitude = std::fabs(x);
    const double grid = static_cast<double>(step);
    const double lower = std::floor(magnitude / grid) * grid;
    if (lower >= 0x1.0p62) {
        throw OverflowError("stochastic_round: result exceeds 64-bit range");
    }
    auto rounded = static_cast<std::int64_t>(lower);
    const double leftover = magnitude - lower;
    if (leftover > 0.0 && rng.uniform() < leftover / grid) {
        rounded += step;
    }
    return x < 0 ? -rounded : rounded;
}

std::int64_t stochastic_round_unit(double x, RandomStream& rng) {
    if (x < 0) {
        throw RangeError("stochastic_round_unit: negative input");
    }
    return stochastic_round(x, 1, rng);
}

}  // namespace loihi
