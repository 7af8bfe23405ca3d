#pragma once

// Reference models used to check the emulator. Nothing here includes or links
// the emulator library: every formula is restated from scratch so that a bug
// in the library cannot hide itself by being shared with its check.

#include <cstdint>
#include <span>
#include <vector>

namespace loihi_ref {

struct LifParams {
    std::int64_t current_decay = 0;       // delta_I in [0, 4096]
    std::int64_t voltage_decay = 0;       // delta_v in [0, 4096]
    std::int64_t threshold_mantissa = 0;  // v_th = mantissa * 64
    std::int64_t bias = 0;
    std::int64_t refractory = 0;
};

struct LifSeries {
    std::vector<std::int64_t> current;
    std::vector<std::int64_t> voltage;
    std::vector<std::uint8_t> spikes;
    bool overflow = false;
    std::int64_t overflow_step = -1;
};

/// Loop-level single-unit LIF: for each step, decay-and-accumulate I, then
/// either hold v at zero (refractory) or decay v and add I and the bias, then
/// compare v > v_th and reset. Decays round away from zero. `input[t]` is the
/// summed synaptic weight arriving at step t. Arithmetic runs in 128 bits;
/// the run stops with `overflow` set when I or v leaves the 64-bit range.
LifSeries scalar_algorithm1(const LifParams& params, std::span<const std::int64_t> input);

/// sum_k J * exp((t_k - t) / tau) over spikes with t_k <= t.
double closed_form_current(std::span<const double> spike_times, double weight, double tau, double t);

/// m_0 = start, m_t = m_{t-1} * (1 - 1/tau), for t in [0, steps).
std::vector<double> trace_expectation(double start, double tau, std::int64_t steps);

/// P(X = k) for a geometric variable on {1, 2, ...} with success probability p.
double geometric_pmf(double p, std::int64_t k);

/// P(X >= k) for the same variable.
double geometric_tail(double p, std::int64_t k);

}  // namespace loihi_ref
