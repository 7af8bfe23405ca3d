#pragma once

#include <cstdint>

#include "loihi/fixedpoint.hpp"

namespace loihi {

struct CompartmentParams {
    static constexpr std::int64_t kMaxThresholdMantissa = 131071;

    DecayFactor current_decay;  // delta_I
    DecayFactor voltage_decay;  // delta_v
    std::int64_t threshold_mantissa = 0;
    std::int64_t bias = 0;
    std::int64_t refractory = 0;

    /// v_th = threshold_mantissa * 2^6.
    std::int64_t threshold() const noexcept { return threshold_mantissa << 6; }

    /// Throws RangeError on an out-of-range mantissa or negative refractory.
    void validate() const;
};

struct CompartmentState {
    std::int64_t current = 0;   // I
    std::int64_t voltage = 0;   // v
    std::int64_t refractory_left = 0;

    friend bool operator==(const CompartmentState&, const CompartmentState&) = default;
};

struct StepResult {
    CompartmentState state;
    bool spiked = false;
};

// The phases below are what the simulation schedule calls; step_compartment
// chains them in order.

/// I <- decay(I) + weighted_input.
void update_current(CompartmentState& state, const CompartmentParams& params,
                    std::int64_t weighted_input);

/// Refractory units are clamped to v = 0 and count down. Otherwise
/// v <- decay(v) + I + bias.
void update_voltage(CompartmentState& state, const CompartmentParams& params);

/// Strict comparison: v > v_th. A refractory unit holds v = 0 <= v_th.
inline bool crosses_threshold(const CompartmentState& state, const CompartmentParams& params) {
    return state.voltage > params.threshold();
}

/// Zero the voltage and arm the refractory counter.
inline void reset_after_spike(CompartmentState& state, const CompartmentParams& params) {
    state.voltage = 0;
    state.refractory_left = params.refractory;
}

/// One full timestep of a single compartment. `weighted_input` is the sum of
/// J_ij over the synapses whose spikes arrive this step.
StepResult step_compartment(const CompartmentState& state, const CompartmentParams& params,
                            std::int64_t weighted_input);

}  // namespace loihi
