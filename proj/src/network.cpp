#include "loihi/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "loihi/errors.hpp"

namespace loihi {

namespace {

constexpr std::pair<MonitorVariable, std::string_view> kMonitorNames[] = {
    {MonitorVariable::current, "I"},     {MonitorVariable::voltage, "v"},
    {MonitorVariable::spikes, "spikes"}, {MonitorVariable::mantissa, "w"},
    {MonitorVariable::actual, "J"},      {MonitorVariable::x1, "x1"},
    {MonitorVariable::x2, "x2"},         {MonitorVariable::y1, "y1"},
    {MonitorVariable::y2, "y2"},         {MonitorVariable::y3, "y3"},
    {MonitorVariable::dw, "dw"},
};

enum class TargetKind { neurons, generators, synapses };

bool is_synapse_variable(MonitorVariable v) {
    switch (v) {
        case MonitorVariable::mantissa:
        case MonitorVariable::actual:
        case MonitorVariable::x1:
        case MonitorVariable::x2:
        case MonitorVariable::y1:
        case MonitorVariable::y2:
        case MonitorVariable::y3:
        case MonitorVariable::dw:
            return true;
        default:
            return false;
    }
}

bool is_plasticity_variable(MonitorVariable v) {
    return is_synapse_variable(v) && v != MonitorVariable::mantissa && v != MonitorVariable::actual;
}

template <typename Check>
void capture(std::vector<std::string>& problems, const std::string& prefix, Check&& check) {
    try {
        check();
    } catch (const Error& e) {
        problems.push_back(prefix + e.what());
    }
}

}  // namespace

std::string_view to_string(MonitorVariable variable) noexcept {
    for (const auto& [v, name] : kMonitorNames) {
        if (v == variable) return name;
    }
    return "?";
}

std::optional<MonitorVariable> parse_monitor_variable(std::string_view text) noexcept {
    for (const auto& [v, name] : kMonitorNames) {
        if (name == text) return v;
    }
    return std::nullopt;
}

std::string_view to_string(Phase phase) noexcept {
    switch (phase) {
        case Phase::start: return "start";
        case Phase::synapses: return "synapses";
        case Phase::groups: return "groups";
        case Phase::thresholds: return "thresholds";
        case Phase::resets: return "resets";
        case Phase::end: return "end";
    }
    return "?";
}

Phase sample_phase(MonitorVariable variable) noexcept {
    switch (variable) {
        case MonitorVariable::current:
        case MonitorVariable::x1:
        case MonitorVariable::x2:
        case MonitorVariable::y1:
        case MonitorVariable::y2:
        case MonitorVariable::y3:
        case MonitorVariable::dw:
            return Phase::synapses;
        default:
            return Phase::end;
    }
}

std::vector<std::string> validate_network(const NetworkDef& def) {
    std::vector<std::string> problems;
    std::map<std::string, std::pair<TargetKind, std::size_t>> names;

    auto register_name = [&](const std::string& name, TargetKind kind, std::size_t index,
                             const char* what) {
        if (name.empty()) {
            problems.push_back(std::string(what) + " #" + std::to_string(index) + " has no name");
            return;
        }
        if (!names.emplace(name, std::make_pair(kind, index)).second) {
            problems.push_back("duplicate name '" + name + "'");
        }
    };

    for (std::size_t i = 0; i < def.groups.size(); ++i) {
        const auto& g = def.groups[i];
        register_name(g.name, TargetKind::neurons, i, "neuron group");
        const std::string prefix = "neuron group '" + g.name + "': ";
        if (g.size < 0) problems.push_back(prefix + "negative size");
        capture(problems, prefix, [&] { g.params.validate(); });
    }

    for (std::size_t i = 0; i < def.generators.size(); ++i) {
        const auto& g = def.generators[i];
        register_name(g.name, TargetKind::generators, i, "generator group");
        const std::string prefix = "generator group '" + g.name + "': ";
        if (g.size < 0) problems.push_back(prefix + "negative size");
        if (g.kind == GeneratorGroupDef::Kind::bernoulli) {
            if (!(g.rate >= 0.0 && g.rate <= 1.0)) {
                problems.push_back(prefix + "rate " + std::to_string(g.rate) + " outside [0, 1]");
            }
        } else {
            for (const auto& s : g.spikes) {
                if (s.id < 0 || s.id >= g.size) {
                    problems.push_back(prefix + "spike id " + std::to_string(s.id) +
                                       " out of range [0, " + std::to_string(g.size) + ")");
                }
                if (s.step < 0) {
                    problems.push_back(prefix + "negative spike step " + std::to_string(s.step));
                }
            }
        }
    }

    for (std::size_t i = 0; i < def.synapses.size(); ++i) {
        const auto& s = def.synapses[i];
        register_name(s.name, TargetKind::synapses, i, "synapse group");
    }

    auto group_size = [&](const std::string& name, bool allow_generator) -> std::optional<std::int64_t> {
        const auto it = names.find(name);
        if (it == names.end()) return std::nullopt;
        if (it->second.first == TargetKind::neurons) return def.groups[it->second.second].size;
        if (allow_generator && it->second.first == TargetKind::generators) {
            return def.generators[it->second.second].size;
        }
        return std::nullopt;
    };

    for (const auto& s : def.synapses) {
        const std::string prefix = "synapse group '" + s.name + "': ";
        const auto source_size = group_size(s.source, true);
        const auto target_size = group_size(s.target, false);
        if (!source_size) problems.push_back(prefix + "unknown source group '" + s.source + "'");
        if (!target_size) problems.push_back(prefix + "unknown target neuron group '" + s.target + "'");

        bool config_ok = true;
        capture(problems, prefix, [&] {
            try {
                s.weights.validate();
            } catch (...) {
                config_ok = false;
                throw;
            }
        });

        if (s.plastic) {
            if (!s.rule) problems.push_back(prefix + "plastic synapse group has no learning rule");
            capture(problems, prefix, [&] { s.traces.validate(); });
        } else if (s.rule) {
            problems.push_back(prefix + "learning rule given for a static synapse group");
        }

        auto report = [&](std::size_t index, const std::string& what) {
            problems.push_back(prefix + "connection " + std::to_string(index) + ": " + what);
        };
        for (std::size_t c = 0; c < s.connections.size(); ++c) {
            const auto& conn = s.connections[c];
            if (source_size && (conn.source < 0 || conn.source >= *source_size)) {
                report(c, "source index " + std::to_string(conn.source) + " out of range [0, " +
                              std::to_string(*source_size) + ")");
            }
            if (target_size && (conn.target < 0 || conn.target >= *target_size)) {
                report(c, "target index " + std::to_string(conn.target) + " out of range [0, " +
                              std::to_string(*target_size) + ")");
            }
            if (conn.delay < 0 || conn.delay > kMaxDelay) {
                report(c, "delay " + std::to_string(conn.delay) + " outside [0, " +
                              std::to_string(kMaxDelay) + "]");
            }
            if (config_ok) {
                try {
                    (void)encode_weight(conn.mantissa, conn.exponent, s.weights);
                } catch (const Error& e) {
                    report(c, e.what());
                }
            }
        }
    }

    for (const auto& m : def.monitors) {
        const std::string prefix = "monitor '" + m.name + "': ";
        const auto it = names.find(m.target);
        if (it == names.end()) {
            problems.push_back(prefix + "unknown target '" + m.target + "'");
            continue;
        }
        const auto [kind, index] = it->second;
        std::int64_t size = 0;
        bool compatible = false;
        switch (kind) {
            case TargetKind::neurons:
                size = def.groups[index].size;
                compatible = m.variable == MonitorVariable::current ||
                             m.variable == MonitorVariable::voltage ||
                             m.variable == MonitorVariable::spikes;
                break;
            case TargetKind::generators:
                size = def.generators[index].size;
                compatible = m.variable == MonitorVariable::spikes;
                break;
            case TargetKind::synapses: {
                const auto& s = def.synapses[index];
                size = static_cast<std::int64_t>(s.connections.size());
                compatible = is_synapse_variable(m.variable) &&
                             (s.plastic || !is_plasticity_variable(m.variable));
                break;
            }
        }
        if (!compatible) {
            problems.push_back(prefix + "variable '" + std::string(to_string(m.variable)) +
                               "' cannot be recorded from '" + m.target + "'");
        }
        std::set<std::int64_t> seen;
        for (const auto id : m.ids) {
            if (id < 0 || id >= size) {
                problems.push_back(prefix + "id " + std::to_string(id) + " out of range [0, " +
                                   std::to_string(size) + ")");
            } else if (!seen.insert(id).second) {
                problems.push_back(prefix + "duplicate id " + std::to_string(id));
            }
        }
    }

    return problems;
}

std::vector<Connection> random_connections(const RandomConnectivity& spec, std::int64_t source_size,
                                           std::int64_t target_size, const WeightConfig& weights,
                                           bool same_group, RandomStream& rng) {
    if (!(spec.probability >= 0.0 && spec.probability <= 1.0)) {
        throw RangeError("connection probability outside [0, 1]");
    }
    if (!(spec.lognormal_sigma >= 0.0) || !std::isfinite(spec.lognormal_mu)) {
        throw RangeError("log-normal parameters must be finite with sigma >= 0");
    }
    weights.validate();
    const std::int64_t first = spec.source_offset;
    const std::int64_t count = spec.source_count < 0 ? source_size - first : spec.source_count;
    if (first < 0 || count < 0 || first + count > source_size) {
        throw RangeError("random connectivity source range outside the source group");
    }

    const std::int64_t sign = weights.sign_mode == SignMode::inhibitory ? -1 : 1;
    const std::int64_t max_magnitude = sign > 0 ? weights.mantissa_max() : -weights.mantissa_min();

    std::vector<Connection> out;
    for (std::int64_t src = first; src < first + count; ++src) {
        for (std::int64_t dst = 0; dst < target_size; ++dst) {
            if (same_group && !spec.allow_self && src == dst) continue;
            if (!rng.bernoulli(spec.probability)) continue;
            const double magnitude = std::exp(spec.lognormal_mu + spec.lognormal_sigma * rng.normal());
            const std::int64_t rounded =
                std::clamp<std::int64_t>(std::llround(std::min(magnitude, 1e6)), 0, max_magnitude);
            out.push_back(Connection{src, dst, sign * rounded, spec.exponent, spec.delay});
        }
    }
    return out;
}

}  // namespace loihi
