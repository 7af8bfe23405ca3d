#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "loihi/network.hpp"

namespace loihi {

/// Samples recorded by one monitor. `values` holds integer variables;
/// `real_values` is used instead for dw.
struct MonitorRecord {
    std::string name;
    std::string target;
    MonitorVariable variable = MonitorVariable::spikes;
    Phase phase = Phase::end;
    std::vector<std::int64_t> steps;
    std::vector<std::int64_t> ids;
    std::vector<std::int64_t> values;
    std::vector<double> real_values;

    bool is_real() const noexcept { return variable == MonitorVariable::dw; }
    bool is_spikes() const noexcept { return variable == MonitorVariable::spikes; }
    std::size_t size() const noexcept { return steps.size(); }
};

struct StepEvents {
    std::int64_t step = 0;
    std::int64_t neuron_spikes = 0;
    std::int64_t generator_spikes = 0;
};

/// Clock-driven network simulator. Each step runs the phases
///
///   start       generators fire
///   synapses    arriving spikes are summed into I, traces decay and take
///               impulses, learning rules update plastic weights
///   groups      v <- decay(v) + I + bias, or the refractory clamp
///   thresholds  v > v_th marks a spike
///   resets      v <- 0, refractory counter armed
///   end         v, weights and spikes are probed
///
/// Spike latency: a generator spike at step t reaches its targets at
/// t + delay; a neuron spike at step t reaches them at t + 1 + delay. The
/// postsynaptic factor y0 of a plastic synapse sees the target's spike one
/// step after it fired.
class Simulation {
public:
    /// Validates and compiles `def`. Throws ValidationError listing every
    /// problem.
    explicit Simulation(const NetworkDef& def);

    Simulation(Simulation&&) noexcept;
    Simulation& operator=(Simulation&&) noexcept;
    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;
    ~Simulation();

    /// Advances one step. Throws OverflowError with group, unit and step.
    StepEvents step();

    /// Advances `steps` steps and returns all records collected so far.
    const std::vector<MonitorRecord>& run(std::int64_t steps);

    std::int64_t current_step() const noexcept;
    const std::vector<MonitorRecord>& records() const noexcept;

    std::size_t group_index(const std::string& name) const;
    std::size_t generator_index(const std::string& name) const;
    std::size_t synapse_index(const std::string& name) const;

    std::span<const CompartmentState> compartments(std::size_t group) const;
    std::span<const SynapticWeight> weights(std::size_t synapse_group) const;
    std::span<const TraceState> traces(std::size_t synapse_group) const;

    /// Spike flags (0/1 per unit) produced in the most recent step.
    std::span<const std::uint8_t> last_spikes(std::size_t group) const;
    std::span<const std::uint8_t> last_generator_spikes(std::size_t generator) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Builds a simulation; alias for the constructor.
inline Simulation build(const NetworkDef& def) { return Simulation(def); }

}  // namespace loihi
