#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "loihi/learning_rule.hpp"
#include "loihi/neuron.hpp"
#include "loihi/random.hpp"
#include "loihi/traces.hpp"
#include "loihi/weights.hpp"

namespace loihi {

struct NeuronGroupDef {
    std::string name;
    std::int64_t size = 0;
    CompartmentParams params;
};

struct GeneratorSpike {
    std::int64_t step = 0;
    std::int64_t id = 0;
};

/// Spike sources. Either replays an explicit spike list or fires each unit
/// independently with probability `rate` per step.
struct GeneratorGroupDef {
    enum class Kind { explicit_spikes, bernoulli };

    std::string name;
    std::int64_t size = 0;
    Kind kind = Kind::explicit_spikes;
    std::vector<GeneratorSpike> spikes;
    double rate = 0.0;
};

/// Maximum extra delay (in steps) accepted on a connection.
inline constexpr std::int64_t kMaxDelay = 1 << 16;

struct Connection {
    std::int64_t source = 0;
    std::int64_t target = 0;
    std::int64_t mantissa = 0;
    int exponent = 0;
    std::int64_t delay = 0;
};

struct SynapseGroupDef {
    std::string name;
    std::string source;  // neuron or generator group
    std::string target;  // neuron group
    WeightConfig weights;
    std::vector<Connection> connections;
    bool plastic = false;
    std::optional<LearningRule> rule;
    TraceParamSet traces;
};

enum class MonitorVariable { current, voltage, spikes, mantissa, actual, x1, x2, y1, y2, y3, dw };

std::string_view to_string(MonitorVariable variable) noexcept;
std::optional<MonitorVariable> parse_monitor_variable(std::string_view text) noexcept;

/// Schedule phase in which a variable is probed. I, traces and dw are read
/// in the synapses phase; v, weights and spikes at the end of the step.
enum class Phase { start, synapses, groups, thresholds, resets, end };

std::string_view to_string(Phase phase) noexcept;
Phase sample_phase(MonitorVariable variable) noexcept;

struct MonitorDef {
    std::string name;
    std::string target;
    MonitorVariable variable = MonitorVariable::spikes;
    std::vector<std::int64_t> ids;  // empty: every unit or connection
};

struct NetworkDef {
    std::vector<NeuronGroupDef> groups;
    std::vector<GeneratorGroupDef> generators;
    std::vector<SynapseGroupDef> synapses;
    std::vector<MonitorDef> monitors;
    std::uint64_t seed = 0;
};

/// Every problem found in `def`; empty when the network is valid.
std::vector<std::string> validate_network(const NetworkDef& def);

/// Random connectivity used by the demo networks. Each (source, target) pair
/// is connected with `probability`; the mantissa magnitude is
/// clip(round(exp(mu + sigma * N(0,1))), 0, max) with the sign of the mode.
struct RandomConnectivity {
    double probability = 0.0;
    double lognormal_mu = 0.0;
    double lognormal_sigma = 0.0;
    int exponent = 0;
    std::int64_t delay = 0;
    bool allow_self = true;
    std::int64_t source_offset = 0;  // first source index used
    std::int64_t source_count = -1;  // -1: up to the end of the source group
};

std::vector<Connection> random_connections(const RandomConnectivity& spec, std::int64_t source_size,
                                           std::int64_t target_size, const WeightConfig& weights,
                                           bool same_group, RandomStream& rng);

}  // namespace loihi
