#include "loihi/simulation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "loihi/errors.hpp"
#include "loihi/fixedpoint.hpp"

namespace loihi {

namespace {

/// Ring of per-step spike flags, deep enough for the longest delay read.
class SpikeHistory {
public:
    SpikeHistory() = default;
    SpikeHistory(std::int64_t size, std::int64_t depth)
        : size_(size), depth_(depth), flags_(static_cast<std::size_t>(size * depth), 0) {}

    std::uint8_t* slot(std::int64_t step) {
        return flags_.data() + static_cast<std::size_t>((step % depth_) * size_);
    }
    const std::uint8_t* slot(std::int64_t step) const {
        return flags_.data() + static_cast<std::size_t>((step % depth_) * size_);
    }
    void clear(std::int64_t step) { std::fill_n(slot(step), size_, std::uint8_t{0}); }

    std::int64_t depth() const noexcept { return depth_; }
    std::int64_t size() const noexcept { return size_; }

private:
    std::int64_t size_ = 0;
    std::int64_t depth_ = 1;
    std::vector<std::uint8_t> flags_;
};

struct SourceRef {
    bool generator = false;
    std::size_t index = 0;
};

struct NeuronGroup {
    std::string name;
    CompartmentParams params;
    std::vector<CompartmentState> state;
    std::vector<std::int64_t> input;
    SpikeHistory history;
    std::int64_t required_depth = 2;
};

struct GeneratorGroup {
    std::string name;
    GeneratorGroupDef::Kind kind;
    std::int64_t size = 0;
    std::vector<GeneratorSpike> spikes;  // sorted by step
    std::size_t next_spike = 0;
    double rate = 0.0;
    RandomStream rng;
    SpikeHistory history;
    std::int64_t required_depth = 1;
};

/// Connections sharing one delay, indexed by source unit (CSR layout).
struct DelayBucket {
    std::int64_t delay = 0;
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> connections;
};

struct SynapseGroup {
    std::string name;
    SourceRef source;
    std::size_t target = 0;
    std::int64_t latency = 0;
    WeightConfig config;

    std::vector<std::int64_t> sources;
    std::vector<std::int64_t> targets;
    std::vector<std::int64_t> delays;
    std::vector<SynapticWeight> weights;
    std::vector<DelayBucket> buckets;

    bool plastic = false;
    LearningRule rule;
    TraceParamSet trace_params;
    std::vector<TraceState> traces;
    std::vector<double> last_dw;
    RandomStream trace_rng;
    RandomStream weight_rng;
};

enum class MonitorTarget { neurons, generators, synapses };

struct Monitor {
    MonitorTarget kind;
    std::size_t index = 0;
    std::vector<std::int64_t> ids;
    std::vector<std::uint8_t> mask;  // spike monitors: which ids to keep
    Phase phase = Phase::end;
    MonitorVariable variable = MonitorVariable::spikes;
};

}  // namespace

struct Simulation::Impl {
    std::int64_t step = 0;
    std::vector<NeuronGroup> groups;
    std::vector<GeneratorGroup> generators;
    std::vector<SynapseGroup> synapses;
    std::vector<Monitor> monitors;
    std::vector<MonitorRecord> records;
    std::map<std::string, std::size_t> group_names;
    std::map<std::string, std::size_t> generator_names;
    std::map<std::string, std::size_t> synapse_names;

    explicit Impl(const NetworkDef& def);

    const SpikeHistory& history_of(SourceRef ref) const {
        return ref.generator ? generators[ref.index].history : groups[ref.index].history;
    }

    void phase_start();
    void phase_synapses();
    void phase_groups();
    std::int64_t phase_thresholds_and_resets();
    void sample(Phase phase);
};

Simulation::Impl::Impl(const NetworkDef& def) {
    if (auto problems = validate_network(def); !problems.empty()) {
        throw ValidationError(std::move(problems));
    }

    for (std::size_t i = 0; i < def.groups.size(); ++i) {
        const auto& g = def.groups[i];
        NeuronGroup group;
        group.name = g.name;
        group.params = g.params;
        group.state.assign(static_cast<std::size_t>(g.size), CompartmentState{});
        group.input.assign(static_cast<std::size_t>(g.size), 0);
        groups.push_back(std::move(group));
        group_names[g.name] = i;
    }

    for (std::size_t i = 0; i < def.generators.size(); ++i) {
        const auto& g = def.generators[i];
        GeneratorGroup gen;
        gen.name = g.name;
        gen.kind = g.kind;
        gen.size = g.size;
        gen.spikes = g.spikes;
        std::stable_sort(gen.spikes.begin(), gen.spikes.end(),
                         [](const GeneratorSpike& a, const GeneratorSpike& b) { return a.step < b.step; });
        gen.rate = g.rate;
        gen.rng = RandomStream::substream(def.seed, i, "generator");
        generators.push_back(std::move(gen));
        generator_names[g.name] = i;
    }

    for (std::size_t i = 0; i < def.synapses.size(); ++i) {
        const auto& s = def.synapses[i];
        SynapseGroup syn;
        syn.name = s.name;
        if (auto it = group_names.find(s.source); it != group_names.end()) {
            syn.source = SourceRef{false, it->second};
            syn.latency = 1;
        } else {
            syn.source = SourceRef{true, generator_names.at(s.source)};
            syn.latency = 0;
        }
        syn.target = group_names.at(s.target);
        syn.config = s.weights;

        const std::size_t n = s.connections.size();
        syn.sources.reserve(n);
        syn.targets.reserve(n);
        syn.delays.reserve(n);
        syn.weights.reserve(n);
        std::int64_t max_delay = 0;
        for (const auto& c : s.connections) {
            syn.sources.push_back(c.source);
            syn.targets.push_back(c.target);
            syn.delays.push_back(c.delay);
            syn.weights.push_back(make_weight(c.mantissa, c.exponent, s.weights, s.plastic));
            max_delay = std::max(max_delay, c.delay);
        }

        const std::int64_t source_size = syn.source.generator
                                             ? generators[syn.source.index].size
                                             : static_cast<std::int64_t>(groups[syn.source.index].state.size());
        std::map<std::int64_t, std::vector<std::size_t>> by_delay;
        for (std::size_t c = 0; c < n; ++c) {
            by_delay[syn.delays[c]].push_back(c);
        }
        for (auto& [delay, members] : by_delay) {
            DelayBucket bucket;
            bucket.delay = delay;
            bucket.offsets.assign(static_cast<std::size_t>(source_size) + 1, 0);
            for (const std::size_t c : members) {
                ++bucket.offsets[static_cast<std::size_t>(syn.sources[c]) + 1];
            }
            for (std::size_t k = 1; k < bucket.offsets.size(); ++k) {
                bucket.offsets[k] += bucket.offsets[k - 1];
            }
            bucket.connections.resize(members.size());
            std::vector<std::size_t> cursor(bucket.offsets.begin(), bucket.offsets.end() - 1);
            for (const std::size_t c : members) {
                bucket.connections[cursor[static_cast<std::size_t>(syn.sources[c])]++] = c;
            }
            syn.buckets.push_back(std::move(bucket));
        }

        const std::int64_t depth = syn.latency + max_delay + 1;
        if (syn.source.generator) {
            auto& gen = generators[syn.source.index];
            gen.required_depth = std::max(gen.required_depth, depth);
        } else {
            auto& src = groups[syn.source.index];
            src.required_depth = std::max(src.required_depth, depth);
        }

        syn.plastic = s.plastic;
        if (s.plastic) {
            syn.rule = *s.rule;
            syn.trace_params = s.traces;
            syn.traces.assign(n, TraceState{});
            syn.last_dw.assign(n, 0.0);
            syn.trace_rng = RandomStream::substream(def.seed, i, "traces");
            syn.weight_rng = RandomStream::substream(def.seed, i, "weights");
        }
        synapses.push_back(std::move(syn));
        synapse_names[s.name] = i;
    }

    for (auto& g : groups) {
        g.history = SpikeHistory(static_cast<std::int64_t>(g.state.size()), g.required_depth);
    }
    for (auto& g : generators) {
        g.history = SpikeHistory(g.size, g.required_depth);
    }

    for (const auto& m : def.monitors) {
        Monitor mon;
        std::int64_t size = 0;
        if (auto it = group_names.find(m.target); it != group_names.end()) {
            mon.kind = MonitorTarget::neurons;
            mon.index = it->second;
            size = static_cast<std::int64_t>(groups[it->second].state.size());
        } else if (auto git = generator_names.find(m.target); git != generator_names.end()) {
            mon.kind = MonitorTarget::generators;
            mon.index = git->second;
            size = generators[git->second].size;
        } else {
            mon.kind = MonitorTarget::synapses;
            mon.index = synapse_names.at(m.target);
            size = static_cast<std::int64_t>(synapses[mon.index].weights.size());
        }
        mon.ids = m.ids;
        if (mon.ids.empty()) {
            for (std::int64_t id = 0; id < size; ++id) mon.ids.push_back(id);
        }
        std::sort(mon.ids.begin(), mon.ids.end());
        mon.mask.assign(static_cast<std::size_t>(size), 0);
        for (const auto id : mon.ids) mon.mask[static_cast<std::size_t>(id)] = 1;
        mon.variable = m.variable;
        mon.phase = sample_phase(m.variable);
        monitors.push_back(std::move(mon));

        MonitorRecord rec;
        rec.name = m.name;
        rec.target = m.target;
        rec.variable = m.variable;
        rec.phase = sample_phase(m.variable);
        records.push_back(std::move(rec));
    }
}

void Simulation::Impl::phase_start() {
    for (auto& gen : generators) {
        gen.history.clear(step);
        std::uint8_t* flags = gen.history.slot(step);
        if (gen.kind == GeneratorGroupDef::Kind::bernoulli) {
            for (std::int64_t u = 0; u < gen.size; ++u) {
                flags[u] = gen.rng.bernoulli(gen.rate) ? 1 : 0;
            }
        } else {
            while (gen.next_spike < gen.spikes.size() && gen.spikes[gen.next_spike].step < step) {
                ++gen.next_spike;
            }
            while (gen.next_spike < gen.spikes.size() && gen.spikes[gen.next_spike].step == step) {
                flags[gen.spikes[gen.next_spike].id] = 1;
                ++gen.next_spike;
            }
        }
    }
}

void Simulation::Impl::phase_synapses() {
    for (auto& g : groups) {
        std::fill(g.input.begin(), g.input.end(), 0);
    }

    for (auto& syn : synapses) {
        const SpikeHistory& history = history_of(syn.source);
        NeuronGroup& target = groups[syn.target];

        // Spikes arriving now carry the weight held before this step's
        // learning update.
        for (const auto& bucket : syn.buckets) {
            const std::int64_t emitted = step - syn.latency - bucket.delay;
            if (emitted < 0) continue;
            const std::uint8_t* flags = history.slot(emitted);
            for (std::int64_t src = 0; src < history.size(); ++src) {
                if (!flags[src]) continue;
                for (std::size_t k = bucket.offsets[src]; k < bucket.offsets[src + 1]; ++k) {
                    const std::size_t c = bucket.connections[k];
                    auto& slot = target.input[static_cast<std::size_t>(syn.targets[c])];
                    if (__builtin_add_overflow(slot, syn.weights[c].actual, &slot)) {
                        throw OverflowError("synaptic input overflow", target.name, syn.targets[c], step);
                    }
                }
            }
        }

        if (!syn.plastic) continue;
        const bool have_post = step >= 1;
        const std::uint8_t* post_flags = have_post ? target.history.slot(step - 1) : nullptr;
        for (std::size_t c = 0; c < syn.weights.size(); ++c) {
            const std::int64_t emitted = step - syn.latency - syn.delays[c];
            const bool x0 = emitted >= 0 && history.slot(emitted)[syn.sources[c]] != 0;
            const bool y0 = have_post && post_flags[syn.targets[c]] != 0;

            TraceState& tr = syn.traces[c];
            update_traces(tr, syn.trace_params, x0, y0, syn.trace_rng);

            const RuleEnv env{x0, y0, tr.x1, tr.x2, tr.y1, tr.y2, tr.y3, syn.weights[c].mantissa, step};
            const double dw = eval_rule(syn.rule, env);
            syn.last_dw[c] = dw;
            if (dw != 0.0) {
                syn.weights[c] = apply_weight_delta(syn.weights[c], dw, syn.config, syn.weight_rng);
            }
        }
    }

    for (auto& g : groups) {
        for (std::size_t u = 0; u < g.state.size(); ++u) {
            try {
                update_current(g.state[u], g.params, g.input[u]);
            } catch (const OverflowError& e) {
                throw OverflowError(e.what(), g.name, static_cast<std::int64_t>(u), step);
            }
        }
    }
}

void Simulation::Impl::phase_groups() {
    for (auto& g : groups) {
        for (std::size_t u = 0; u < g.state.size(); ++u) {
            try {
                update_voltage(g.state[u], g.params);
            } catch (const OverflowError& e) {
                throw OverflowError(e.what(), g.name, static_cast<std::int64_t>(u), step);
            }
        }
    }
}

std::int64_t Simulation::Impl::phase_thresholds_and_resets() {
    std::int64_t count = 0;
    for (auto& g : groups) {
        g.history.clear(step);
        std::uint8_t* flags = g.history.slot(step);
        for (std::size_t u = 0; u < g.state.size(); ++u) {
            if (crosses_threshold(g.state[u], g.params)) {
                flags[u] = 1;
                ++count;
            }
        }
    }
    for (auto& g : groups) {
        const std::uint8_t* flags = g.history.slot(step);
        for (std::size_t u = 0; u < g.state.size(); ++u) {
            if (flags[u]) reset_after_spike(g.state[u], g.params);
        }
    }
    return count;
}

void Simulation::Impl::sample(Phase phase) {
    for (std::size_t m = 0; m < monitors.size(); ++m) {
        const Monitor& mon = monitors[m];
        if (mon.phase != phase) continue;
        MonitorRecord& rec = records[m];

        if (rec.variable == MonitorVariable::spikes) {
            const SpikeHistory& h = mon.kind == MonitorTarget::generators ? generators[mon.index].history
                                                                          : groups[mon.index].history;
            const std::uint8_t* flags = h.slot(step);
            for (std::int64_t u = 0; u < h.size(); ++u) {
                if (flags[u] && mon.mask[static_cast<std::size_t>(u)]) {
                    rec.steps.push_back(step);
                    rec.ids.push_back(u);
                }
            }
            continue;
        }

        for (const std::int64_t id : mon.ids) {
            const auto i = static_cast<std::size_t>(id);
            rec.steps.push_back(step);
            rec.ids.push_back(id);
            if (mon.kind == MonitorTarget::neurons) {
                const CompartmentState& s = groups[mon.index].state[i];
                rec.values.push_back(rec.variable == MonitorVariable::current ? s.current : s.voltage);
                continue;
            }
            const SynapseGroup& syn = synapses[mon.index];
            switch (rec.variable) {
                case MonitorVariable::mantissa: rec.values.push_back(syn.weights[i].mantissa); break;
                case MonitorVariable::actual: rec.values.push_back(syn.weights[i].actual); break;
                case MonitorVariable::x1: rec.values.push_back(syn.traces[i].x1); break;
                case MonitorVariable::x2: rec.values.push_back(syn.traces[i].x2); break;
                case MonitorVariable::y1: rec.values.push_back(syn.traces[i].y1); break;
                case MonitorVariable::y2: rec.values.push_back(syn.traces[i].y2); break;
                case MonitorVariable::y3: rec.values.push_back(syn.traces[i].y3); break;
                case MonitorVariable::dw: rec.real_values.push_back(syn.last_dw[i]); break;
                default: break;
            }
        }
    }
}

Simulation::Simulation(const NetworkDef& def) : impl_(std::make_unique<Impl>(def)) {}
Simulation::Simulation(Simulation&&) noexcept = default;
Simulation& Simulation::operator=(Simulation&&) noexcept = default;
Simulation::~Simulation() = default;

StepEvents Simulation::step() {
    Impl& s = *impl_;
    StepEvents events;
    events.step = s.step;

    s.phase_start();
    for (const auto& gen : s.generators) {
        const std::uint8_t* flags = gen.history.slot(s.step);
        events.generator_spikes += std::count(flags, flags + gen.size, std::uint8_t{1});
    }
    s.sample(Phase::start);
    s.phase_synapses();
    s.sample(Phase::synapses);
    s.phase_groups();
    s.sample(Phase::groups);
    events.neuron_spikes = s.phase_thresholds_and_resets();
    s.sample(Phase::end);

    ++s.step;
    return events;
}

const std::vector<MonitorRecord>& Simulation::run(std::int64_t steps) {
    if (steps < 0) {
        throw RangeError("run: negative step count");
    }
    for (std::int64_t i = 0; i < steps; ++i) {
        step();
    }
    return impl_->records;
}

std::int64_t Simulation::current_step() const noexcept { return impl_->step; }

const std::vector<MonitorRecord>& Simulation::records() const noexcept { return impl_->records; }

namespace {

std::size_t find_index(const std::map<std::string, std::size_t>& names, const std::string& name,
                       const char* what) {
    const auto it = names.find(name);
    if (it == names.end()) {
        throw std::out_of_range(std::string("no ") + what + " named '" + name + "'");
    }
    return it->second;
}

}  // namespace

std::size_t Simulation::group_index(const std::string& name) const {
    return find_index(impl_->group_names, name, "neuron group");
}

std::size_t Simulation::generator_index(const std::string& name) const {
    return find_index(impl_->generator_names, name, "generator group");
}

std::size_t Simulation::synapse_index(const std::string& name) const {
    return find_index(impl_->synapse_names, name, "synapse group");
}

std::span<const CompartmentState> Simulation::compartments(std::size_t group) const {
    return impl_->groups.at(group).state;
}

std::span<const SynapticWeight> Simulation::weights(std::size_t synapse_group) const {
    return impl_->synapses.at(synapse_group).weights;
}

std::span<const TraceState> Simulation::traces(std::size_t synapse_group) const {
    return impl_->synapses.at(synapse_group).traces;
}

std::span<const std::uint8_t> Simulation::last_spikes(std::size_t group) const {
    const auto& g = impl_->groups.at(group);
    if (impl_->step == 0) return {};
    return {g.history.slot(impl_->step - 1), g.state.size()};
}

std::span<const std::uint8_t> Simulation::last_generator_spikes(std::size_t generator) const {
    const auto& g = impl_->generators.at(generator);
    if (impl_->step == 0) return {};
    return {g.history.slot(impl_->step - 1), static_cast<std::size_t>(g.size)};
}

}  // namespace loihi
