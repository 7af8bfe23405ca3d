#pragma once

#include <cstdint>

#include "loihi/errors.hpp"
#include "loihi/random.hpp"

namespace loihi {

inline constexpr std::int64_t kTraceMax = 127;

/// Impulse added on a spike and decay time constant of one trace.
struct TraceParams {
    std::int64_t impulse = 0;
    std::int64_t tau = 1;

    /// Throws RangeError unless impulse is in [0, 127] and tau >= 1.
    void validate() const;

    /// alpha = 1 - 1/tau.
    double decay() const noexcept { return 1.0 - 1.0 / static_cast<double>(tau); }
};

/// Trace values of one synapse: x1, x2 follow the presynaptic unit, y1..y3
/// the postsynaptic one. All lie in [0, 127].
struct TraceState {
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;
    std::int64_t y1 = 0;
    std::int64_t y2 = 0;
    std::int64_t y3 = 0;

    friend bool operator==(const TraceState&, const TraceState&) = default;
};

struct TraceParamSet {
    TraceParams x1;
    TraceParams x2;
    TraceParams y1;
    TraceParams y2;
    TraceParams y3;

    void validate() const;
};

/// Stochastically rounded decay, then (on a spike) the impulse, saturating at
/// 127. Draws one uniform only when the decayed value is fractional.
std::int64_t decay_and_impulse(std::int64_t trace, const TraceParams& params, bool spiked,
                               RandomStream& rng);

/// Advances all five traces. Draw order is x1, x2, y1, y2, y3.
void update_traces(TraceState& state, const TraceParamSet& params, bool pre_spiked,
                   bool post_spiked, RandomStream& rng);

}  // namespace loihi
