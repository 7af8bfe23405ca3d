#include "loihi/traces.hpp"

#include <algorithm>
#include <string>

#include "loihi/errors.hpp"
#include "loihi/fixedpoint.hpp"

namespace loihi {

void TraceParams::validate() const {
    if (impulse < 0 || impulse > kTraceMax) {
        throw RangeError("trace impulse " + std::to_string(impulse) + " outside [0, 127]");
    }
    if (tau < 1) {
        throw RangeError("trace time constant " + std::to_string(tau) + " must be >= 1");
    }
}

void TraceParamSet::validate() const {
    x1.validate();
    x2.validate();
    y1.validate();
    y2.validate();
    y3.validate();
}

std::int64_t decay_and_impulse(std::int64_t trace, const TraceParams& params, bool spiked,
                               RandomStream& rng) {
    std::int64_t next = stochastic_round_unit(static_cast<double>(trace) * params.decay(), rng);
    if (spiked) {
        next = std::min(next + params.impulse, kTraceMax);
    }
    return next;
}

void update_traces(TraceState& state, const TraceParamSet& params, bool pre_spiked,
                   bool post_spiked, RandomStream& rng) {
    state.x1 = decay_and_impulse(state.x1, params.x1, pre_spiked, rng);
    state.x2 = decay_and_impulse(state.x2, params.x2, pre_spiked, rng);
    state.y1 = decay_and_impulse(state.y1, params.y1, post_spiked, rng);
    state.y2 = decay_and_impulse(state.y2, params.y2, post_spiked, rng);
    state.y3 = decay_and_impulse(state.y3, params.y3, post_spiked, rng);
}

}  // namespace loihi
