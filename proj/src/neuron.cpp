#include "loihi/neuron.hpp"

#include <string>

namespace loihi {

void CompartmentParams::validate() const {
    if (threshold_mantissa < 0 || threshold_mantissa > kMaxThresholdMantissa) {
        throw RangeError("threshold mantissa " + std::to_string(threshold_mantissa) +
                         " outside [0, 131071]");
    }
    if (refractory < 0) {
        throw RangeError("refractory period " + std::to_string(refractory) + " is negative");
    }
}

void update_current(CompartmentState& state, const CompartmentParams& params,
                    std::int64_t weighted_input) {
    state.current = checked_add(decay_step(state.current, params.current_decay), weighted_input,
                                "synaptic input");
}

void update_voltage(CompartmentState& state, const CompartmentParams& params) {
    if (state.refractory_left > 0) {
        state.voltage = 0;
        --state.refractory_left;
        return;
    }
    const std::int64_t decayed = decay_step(state.voltage, params.voltage_decay);
    state.voltage = checked_add(checked_add(decayed, state.current, "voltage"), params.bias, "voltage");
}

StepResult step_compartment(const CompartmentState& state, const CompartmentParams& params,
                            std::int64_t weighted_input) {
    StepResult result{state, false};
    update_current(result.state, params, weighted_input);
    update_voltage(result.state, params);
    if (crosses_threshold(result.state, params)) {
        result.spiked = true;
        reset_after_spike(result.state, params);
    }
    return result;
}

}  // namespace loihi
