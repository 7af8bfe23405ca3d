#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "loihi/simulation.hpp"

using namespace loihi;

namespace {

NeuronGroupDef group(std::string name, std::int64_t size, std::int64_t d_i, std::int64_t d_v, std::int64_t mant,
                     std::int64_t bias = 0, std::int64_t refractory = 0) {
    NeuronGroupDef g;
    g.name = std::move(name);
    g.size = size;
    g.params.current_decay = DecayFactor(d_i);
    g.params.voltage_decay = DecayFactor(d_v);
    g.params.threshold_mantissa = mant;
    g.params.bias = bias;
    g.params.refractory = refractory;
    return g;
}

GeneratorGroupDef spikes_at(std::string name, std::int64_t size, std::vector<GeneratorSpike> spikes) {
    GeneratorGroupDef g;
    g.name = std::move(name);
    g.size = size;
    g.spikes = std::move(spikes);
    return g;
}

GeneratorGroupDef bernoulli(std::string name, std::int64_t size, double rate) {
    GeneratorGroupDef g;
    g.name = std::move(name);
    g.size = size;
    g.kind = GeneratorGroupDef::Kind::bernoulli;
    g.rate = rate;
    return g;
}

SynapseGroupDef synapses(std::string name, std::string source, std::string target, std::vector<Connection> conns,
                         WeightConfig weights = {8, SignMode::excitatory}) {
    SynapseGroupDef s;
    s.name = std::move(name);
    s.source = std::move(source);
    s.target = std::move(target);
    s.weights = weights;
    s.connections = std::move(conns);
    return s;
}

const MonitorRecord& record(const Simulation& sim, const std::string& name) {
    for (const auto& r : sim.records()) {
        if (r.name == name) return r;
    }
    throw std::runtime_error("no record " + name);
}

std::vector<std::int64_t> series(const MonitorRecord& r, std::int64_t id = 0) {
    std::vector<std::int64_t> out;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r.ids[i] == id) out.push_back(r.values[i]);
    }
    return out;
}

}  // namespace

TEST_CASE("empty network runs as a no-op") {
    Simulation sim(NetworkDef{});
    CHECK(sim.run(10).empty());
    CHECK(sim.current_step() == 10);
}

TEST_CASE("steps = 0 gives empty records") {
    NetworkDef net;
    net.groups.push_back(group("n", 1, 0, 0, 10));
    net.monitors.push_back({"v", "n", MonitorVariable::voltage, {}});
    Simulation sim(net);
    const auto& records = sim.run(0);
    REQUIRE(records.size() == 1);
    CHECK(records[0].size() == 0);
}

TEST_CASE("generator input reaches I in the same step") {
    NetworkDef net;
    net.groups.push_back(group("n", 1, 2048, 4096, 131071));
    net.generators.push_back(spikes_at("g", 1, {{0, 0}}));
    net.synapses.push_back(synapses("s", "g", "n", {{0, 0, 254, 0, 0}}));
    net.monitors.push_back({"I", "n", MonitorVariable::current, {}});
    net.monitors.push_back({"v", "n", MonitorVariable::voltage, {}});
    Simulation sim(net);
    sim.run(3);
    CHECK(series(record(sim, "I")) == std::vector<std::int64_t>{16256, 8128, 4064});
    CHECK(series(record(sim, "v")) == std::vector<std::int64_t>{16256, 8128, 4064});
    CHECK(record(sim, "I").phase == Phase::synapses);
    CHECK(record(sim, "v").phase == Phase::end);
}

TEST_CASE("recurrent spikes arrive one step later") {
    // B is driven to fire at step 3; A only listens to B.
    NetworkDef net;
    net.groups.push_back(group("A", 1, 4096, 4096, 131071));
    net.groups.push_back(group("B", 1, 4096, 4096, 1));
    net.generators.push_back(spikes_at("drive", 1, {{3, 0}}));
    net.synapses.push_back(synapses("drive_b", "drive", "B", {{0, 0, 100, 0, 0}}));
    net.synapses.push_back(synapses("b_a", "B", "A", {{0, 0, 10, 0, 0}}));
    net.monitors.push_back({"IA", "A", MonitorVariable::current, {}});
    net.monitors.push_back({"sB", "B", MonitorVariable::spikes, {}});
    Simulation sim(net);
    sim.run(8);
    CHECK(record(sim, "sB").steps == std::vector<std::int64_t>{3});
    const auto ia = series(record(sim, "IA"));
    for (std::int64_t t = 0; t < 8; ++t) {
        CHECK(ia[static_cast<std::size_t>(t)] == (t == 4 ? 640 : 0));
    }
}

TEST_CASE("extra delay is added after the intrinsic latency") {
    NetworkDef net;
    net.groups.push_back(group("src", 1, 4096, 4096, 1));
    net.groups.push_back(group("dst", 1, 4096, 4096, 131071));
    net.generators.push_back(spikes_at("g", 1, {{2, 0}}));
    net.synapses.push_back(synapses("gd", "g", "dst", {{0, 0, 1, 0, 3}}));
    net.synapses.push_back(synapses("gs", "g", "src", {{0, 0, 100, 0, 0}}));
    net.synapses.push_back(synapses("sd", "src", "dst", {{0, 0, 2, 0, 5}}));
    net.monitors.push_back({"I", "dst", MonitorVariable::current, {}});
    Simulation sim(net);
    sim.run(12);
    const auto i = series(record(sim, "I"));
    for (std::int64_t t = 0; t < 12; ++t) {
        std::int64_t expected = 0;
        if (t == 2 + 3) expected += 64;       // generator: t + delay
        if (t == 2 + 1 + 5) expected += 128;  // neuron: t + 1 + delay
        CHECK(i[static_cast<std::size_t>(t)] == expected);
    }
}

TEST_CASE("silent network stays at zero") {
    NetworkDef net;
    net.groups.push_back(group("n", 20, 100, 100, 10));
    net.synapses.push_back(synapses("rec", "n", "n", {{0, 1, 200, 3, 0}, {5, 7, 255, 7, 2}}));
    net.monitors.push_back({"I", "n", MonitorVariable::current, {}});
    net.monitors.push_back({"v", "n", MonitorVariable::voltage, {}});
    net.monitors.push_back({"s", "n", MonitorVariable::spikes, {}});
    Simulation sim(net);
    sim.run(500);
    for (const auto v : record(sim, "I").values) CHECK(v == 0);
    for (const auto v : record(sim, "v").values) CHECK(v == 0);
    CHECK(record(sim, "s").size() == 0);
}

namespace {

NetworkDef busy_network(std::uint64_t seed) {
    NetworkDef net;
    net.seed = seed;
    net.groups.push_back(group("n", 30, 1024, 256, 40, 0, 2));
    net.generators.push_back(bernoulli("g", 10, 0.1));
    RandomStream rng(seed);
    std::vector<Connection> in;
    std::vector<Connection> rec;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 30; ++j) {
            if (rng.bernoulli(0.3)) in.push_back({i, j, rng.uniform_int(50, 255), 0, rng.uniform_int(0, 2)});
        }
    }
    for (int i = 0; i < 30; ++i) {
        for (int j = 0; j < 30; ++j) {
            if (i != j && rng.bernoulli(0.1)) rec.push_back({i, j, rng.uniform_int(-200, 200) & ~1, -2, 0});
        }
    }
    net.synapses.push_back(synapses("in", "g", "n", in));
    net.synapses.push_back(synapses("rec", "n", "n", rec, {8, SignMode::mixed}));
    net.monitors.push_back({"I", "n", MonitorVariable::current, {}});
    net.monitors.push_back({"v", "n", MonitorVariable::voltage, {}});
    net.monitors.push_back({"s", "n", MonitorVariable::spikes, {}});
    return net;
}

}  // namespace

TEST_CASE("an all-zero synapse group changes nothing") {
    auto base = busy_network(5);
    auto extra = base;
    std::vector<Connection> zeros;
    for (int i = 0; i < 30; ++i) zeros.push_back({i, (i * 7) % 30, 0, 7, i % 3});
    extra.synapses.push_back(synapses("zero", "n", "n", zeros, {8, SignMode::mixed}));
    std::vector<Connection> zeros_gen;
    for (int i = 0; i < 10; ++i) zeros_gen.push_back({i, i, 0, -8, 0});
    extra.synapses.push_back(synapses("zero_gen", "g", "n", zeros_gen));

    Simulation a(base);
    Simulation b(extra);
    a.run(2000);
    b.run(2000);
    REQUIRE(record(a, "s").size() > 0);
    for (const char* name : {"I", "v", "s"}) {
        CHECK(record(a, name).steps == record(b, name).steps);
        CHECK(record(a, name).values == record(b, name).values);
    }
}

TEST_CASE("same seed, same records; different seed, different records") {
    Simulation a(busy_network(9));
    Simulation b(busy_network(9));
    a.run(3000);
    b.run(3000);
    CHECK(record(a, "s").steps == record(b, "s").steps);
    CHECK(record(a, "s").ids == record(b, "s").ids);
    CHECK(record(a, "v").values == record(b, "v").values);

    auto other = busy_network(9);
    other.seed = 10;
    Simulation c(other);
    c.run(3000);
    CHECK(record(a, "s").steps != record(c, "s").steps);
}

TEST_CASE("bernoulli generators") {
    NetworkDef net;
    net.seed = 77;
    net.generators.push_back(bernoulli("never", 1, 0.0));
    net.generators.push_back(bernoulli("always", 1, 1.0));
    net.generators.push_back(bernoulli("tenth", 1, 0.1));
    net.monitors.push_back({"never", "never", MonitorVariable::spikes, {}});
    net.monitors.push_back({"always", "always", MonitorVariable::spikes, {}});
    net.monitors.push_back({"tenth", "tenth", MonitorVariable::spikes, {}});
    Simulation sim(net);
    const std::int64_t steps = 100000;
    sim.run(steps);
    CHECK(record(sim, "never").size() == 0);
    CHECK(static_cast<std::int64_t>(record(sim, "always").size()) == steps);
    const double rate = static_cast<double>(record(sim, "tenth").size()) / steps;
    CHECK(std::abs(rate - 0.1) <= 0.005);
}

TEST_CASE("validation lists every problem") {
    NetworkDef net;
    net.groups.push_back(group("n", 500, 0, 0, 10));
    net.groups.push_back(group("n", 1, 0, 0, 10));
    net.synapses.push_back(synapses("s", "n", "n", {{0, 500, 10, 0, 0}}));
    auto plastic = synapses("p", "n", "n", {{0, 1, 10, 0, 0}});
    plastic.plastic = true;
    net.synapses.push_back(plastic);
    net.monitors.push_back({"m", "missing", MonitorVariable::voltage, {}});
    try {
        Simulation sim(net);
        FAIL("expected validation error");
    } catch (const ValidationError& e) {
        const auto& p = e.problems();
        CHECK(p.size() >= 4);
        auto has = [&](const std::string& needle) {
            return std::any_of(p.begin(), p.end(), [&](const std::string& s) { return s.find(needle) != std::string::npos; });
        };
        CHECK(has("duplicate name 'n'"));
        CHECK(has("500"));
        CHECK(has("no learning rule"));
        CHECK(has("missing"));
    }
}

TEST_CASE("other validation errors") {
    auto expect_invalid = [](const NetworkDef& def) { CHECK_THROWS_AS(Simulation{def}, ValidationError); };

    NetworkDef rate;
    rate.generators.push_back(bernoulli("g", 1, 1.5));
    expect_invalid(rate);

    NetworkDef weight;
    weight.groups.push_back(group("n", 2, 0, 0, 10));
    weight.synapses.push_back(synapses("s", "n", "n", {{0, 1, -5, 0, 0}}));
    expect_invalid(weight);

    NetworkDef delay;
    delay.groups.push_back(group("n", 2, 0, 0, 10));
    delay.synapses.push_back(synapses("s", "n", "n", {{0, 1, 5, 0, -1}}));
    expect_invalid(delay);

    NetworkDef static_rule;
    static_rule.groups.push_back(group("n", 2, 0, 0, 10));
    static_rule.synapses.push_back(synapses("s", "n", "n", {{0, 1, 5, 0, 0}}));
    static_rule.synapses[0].rule = parse_rule("x1*y0");
    expect_invalid(static_rule);

    NetworkDef monitor;
    monitor.groups.push_back(group("n", 2, 0, 0, 10));
    monitor.monitors.push_back({"m", "n", MonitorVariable::x1, {}});
    expect_invalid(monitor);

    NetworkDef ids;
    ids.groups.push_back(group("n", 2, 0, 0, 10));
    ids.monitors.push_back({"m", "n", MonitorVariable::voltage, {0, 2}});
    expect_invalid(ids);
}

TEST_CASE("plastic synapse: schedule of x0, y0 and dw") {
    // Pre arrives at step 10, post fires at 12 and is seen by the synapse at 13.
    NetworkDef net;
    net.seed = 3;
    net.groups.push_back(group("post", 1, 4096, 4096, 100));
    net.generators.push_back(spikes_at("pre", 1, {{10, 0}}));
    net.generators.push_back(spikes_at("noise", 1, {{12, 0}}));
    auto plastic = synapses("plastic", "pre", "post", {{0, 0, 128, -6, 0}});
    plastic.plastic = true;
    plastic.rule = parse_rule("2^-2*x1*y0 - 2^-2*y1*x0");
    plastic.traces.x1 = {120, 8};
    plastic.traces.y1 = {120, 8};
    net.synapses.push_back(plastic);
    net.synapses.push_back(synapses("noise_in", "noise", "post", {{0, 0, 254, 0, 0}}));
    net.monitors.push_back({"dw", "plastic", MonitorVariable::dw, {}});
    net.monitors.push_back({"x1", "plastic", MonitorVariable::x1, {}});
    net.monitors.push_back({"y1", "plastic", MonitorVariable::y1, {}});
    net.monitors.push_back({"w", "plastic", MonitorVariable::mantissa, {}});
    net.monitors.push_back({"J", "plastic", MonitorVariable::actual, {}});
    Simulation sim(net);
    sim.run(16);

    const auto& dw = record(sim, "dw");
    const auto x1 = series(record(sim, "x1"));
    const auto y1 = series(record(sim, "y1"));
    CHECK(x1[10] == 120);
    CHECK(x1[11] == 105);
    CHECK(y1[12] == 0);
    CHECK(y1[13] == 120);
    for (std::size_t t = 0; t < dw.size(); ++t) {
        if (t == 13) {
            CHECK(dw.real_values[t] == doctest::Approx(0.25 * static_cast<double>(x1[13])));
            CHECK(dw.real_values[t] > 0.0);
        } else {
            CHECK(dw.real_values[t] == 0.0);
        }
    }
    const auto w = series(record(sim, "w"));
    const auto j = series(record(sim, "J"));
    CHECK(w[12] == 128);
    CHECK(w[13] > 128);
    CHECK(j[13] == w[13] / 64 * 64);
}

TEST_CASE("post before pre gives depression at the pre arrival") {
    NetworkDef net;
    net.seed = 4;
    net.groups.push_back(group("post", 1, 4096, 4096, 100));
    net.generators.push_back(spikes_at("pre", 1, {{15, 0}}));
    net.generators.push_back(spikes_at("noise", 1, {{11, 0}}));
    auto plastic = synapses("plastic", "pre", "post", {{0, 0, 128, -6, 0}});
    plastic.plastic = true;
    plastic.rule = parse_rule("2^-2*x1*y0 - 2^-2*y1*x0");
    plastic.traces.x1 = {120, 8};
    plastic.traces.y1 = {120, 8};
    net.synapses.push_back(plastic);
    net.synapses.push_back(synapses("noise_in", "noise", "post", {{0, 0, 254, 0, 0}}));
    net.monitors.push_back({"dw", "plastic", MonitorVariable::dw, {}});
    Simulation sim(net);
    sim.run(20);
    const auto& dw = record(sim, "dw");
    for (std::size_t t = 0; t < dw.size(); ++t) {
        if (t == 15) {
            CHECK(dw.real_values[t] < 0.0);
        } else {
            CHECK(dw.real_values[t] == 0.0);
        }
    }
}

TEST_CASE("overflow carries group, unit and step") {
    NetworkDef net;
    net.groups.push_back(group("n", 2, 0, 4096, 131071, std::numeric_limits<std::int64_t>::max() - 100));
    net.generators.push_back(spikes_at("g", 1, {{5, 0}}));
    net.synapses.push_back(synapses("s", "g", "n", {{0, 1, 255, 0, 0}}));
    Simulation sim(net);
    try {
        sim.run(10);
        FAIL("expected overflow");
    } catch (const OverflowError& e) {
        CHECK(e.group() == "n");
        CHECK(e.unit() == 1);
        CHECK(e.step() == 5);
    }
}

TEST_CASE("state accessors") {
    NetworkDef net;
    net.groups.push_back(group("n", 3, 4096, 4096, 1));
    net.generators.push_back(spikes_at("g", 1, {{0, 0}}));
    net.synapses.push_back(synapses("s", "g", "n", {{0, 2, 10, 0, 0}}));
    Simulation sim(net);
    const auto ev = sim.step();
    CHECK(ev.step == 0);
    CHECK(ev.generator_spikes == 1);
    CHECK(ev.neuron_spikes == 1);
    const auto gi = sim.group_index("n");
    CHECK(sim.last_spikes(gi)[2] == 1);
    CHECK(sim.last_spikes(gi)[0] == 0);
    CHECK(sim.compartments(gi)[2].voltage == 0);
    CHECK(sim.compartments(gi)[2].current == 640);
    CHECK(sim.last_generator_spikes(sim.generator_index("g"))[0] == 1);
    CHECK(sim.weights(sim.synapse_index("s"))[0].actual == 640);
    CHECK_THROWS(sim.group_index("nope"));
}
