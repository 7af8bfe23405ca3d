#pragma once

#include <cstdint>

#include "loihi/errors.hpp"
#include "loihi/random.hpp"

namespace loihi {

/// Decay constant of the synaptic input or voltage. The associated time
/// constant is tau = 2^12 / raw; raw = 0 disables decay, raw = 4096 zeroes the
/// state every step.
class DecayFactor {
public:
    static constexpr std::int64_t kMax = 4096;

    constexpr DecayFactor() = default;

    /// Throws RangeError outside [0, 4096].
    explicit DecayFactor(std::int64_t raw);

    constexpr std::int64_t raw() const noexcept { return raw_; }

    friend constexpr bool operator==(DecayFactor, DecayFactor) = default;

private:
    std::int64_t raw_ = 0;
};

/// sign(x) * ceil(|x|). Odd, and zero only at zero.
std::int64_t round_away_from_zero(double x);

/// Exact integer form of round_away_from_zero(numerator / 2^shift).
std::int64_t round_away_from_zero_shifted(std::int64_t numerator, int shift) noexcept;

/// state - round_away_from_zero(state * raw / 2^12). Throws OverflowError if
/// the intermediate product leaves the 64-bit range.
std::int64_t decay_step(std::int64_t state, DecayFactor delta);

/// Unbiased rounding of `x` to a multiple of `step` (a power of two): rounds
/// |x| down to the grid, then steps one grid unit away from zero with
/// probability equal to the leftover fraction of a step. Consumes one draw
/// only when x is off the grid.
std::int64_t stochastic_round(double x, std::int64_t step, RandomStream& rng);

/// stochastic_round with step 1 for nonnegative input.
std::int64_t stochastic_round_unit(double x, RandomStream& rng);

/// Overflow-checked helpers. Throw OverflowError naming `what`.
std::int64_t checked_add(std::int64_t a, std::int64_t b, const char* what);
std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what);

}  // namespace loihi
