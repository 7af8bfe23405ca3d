#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "loihi/config.hpp"
#include "loihi/output.hpp"
#include "loihi/simulation.hpp"

using namespace loihi;
namespace fs = std::filesystem;

namespace {

const char* kBasic = R"({
  "seed": 7,
  "steps": 50,
  "neuron_groups": [{"name": "n", "size": 2, "current_decay": 2048, "voltage_decay": 4096,
                     "threshold_mantissa": 1000, "bias": 0, "refractory": 1}],
  "generators": [{"name": "g", "size": 1, "spikes": [[0, 0], [3, 0]]},
                 {"name": "p", "size": 4, "rate": 0.5}],
  "synapses": [{"name": "s", "source": "g", "target": "n", "sign_mode": "excitatory",
                "weight_bits": 8, "connections": [[0, 0, 254, 0, 0], [0, 1, 10, -2, 1]]}],
  "monitors": [{"name": "I", "target": "n", "variable": "I", "ids": [0]},
               {"name": "spikes", "target": "g", "variable": "spikes"}]
})";

fs::path temp_dir(const std::string& leaf) {
    const auto dir = fs::temp_directory_path() / ("loihiemu_test_" + leaf);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("basic config") {
    const auto cfg = parse_config(kBasic, ".");
    CHECK(cfg.steps == 50);
    CHECK(cfg.network.seed == 7);
    REQUIRE(cfg.network.groups.size() == 1);
    CHECK(cfg.network.groups[0].params.current_decay.raw() == 2048);
    CHECK(cfg.network.groups[0].params.refractory == 1);
    REQUIRE(cfg.network.generators.size() == 2);
    CHECK(cfg.network.generators[0].kind == GeneratorGroupDef::Kind::explicit_spikes);
    CHECK(cfg.network.generators[0].spikes.size() == 2);
    CHECK(cfg.network.generators[1].kind == GeneratorGroupDef::Kind::bernoulli);
    CHECK(cfg.network.generators[1].rate == 0.5);
    REQUIRE(cfg.network.synapses[0].connections.size() == 2);
    CHECK(cfg.network.synapses[0].connections[1].exponent == -2);
    CHECK(cfg.network.synapses[0].connections[1].delay == 1);
    CHECK(cfg.network.monitors[0].variable == MonitorVariable::current);
    CHECK(cfg.hash.size() == 16);
    CHECK(cfg.hash == hex64(fnv1a64(cfg.resolved_json)));

    Simulation sim(cfg.network);
    sim.run(cfg.steps);
    CHECK(sim.records()[0].values[0] == 16256);
}

TEST_CASE("overrides change the resolved config and its hash") {
    const auto base = parse_config(kBasic, ".");
    const auto seeded = parse_config(kBasic, ".", 99);
    const auto longer = parse_config(kBasic, ".", std::nullopt, 10);
    CHECK(seeded.network.seed == 99);
    CHECK(longer.steps == 10);
    CHECK(seeded.hash != base.hash);
    CHECK(longer.hash != base.hash);
    CHECK(parse_config(kBasic, ".").hash == base.hash);
}

TEST_CASE("schema errors") {
    CHECK_THROWS_AS(parse_config("{", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": 1, "colour": 2})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"seed": -1})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"steps": -1})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"neuron_groups": [{"name": "n", "size": 1, "current_decay": 5000,
        "voltage_decay": 0, "threshold_mantissa": 1}]})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"generators": [{"name": "g", "size": 1, "rate": 0.1,
        "spikes": [[0, 0]]}]})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"neuron_groups": [{"name": "n", "size": 1, "current_decay": 0,
        "voltage_decay": 0, "threshold_mantissa": 1}],
        "synapses": [{"name": "s", "source": "n", "target": "n", "sign_mode": "excitatory", "weight_bits": 8,
        "connections": [[0, 0, 1, 0, 0]], "plastic": true, "rule": "x1*q"}]})", "."), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"neuron_groups": [{"name": "n", "size": 1, "current_decay": 0,
        "voltage_decay": 0, "threshold_mantissa": 1}],
        "monitors": [{"name": "m", "target": "n", "variable": "voltage"}]})", "."), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("connection CSV") {
    const auto rows = parse_connection_csv("src,dst,mantissa,exponent,delay\n# comment\n\n0,1,254,0,0\n2, 3, -10, -2, 4\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].source == 2);
    CHECK(rows[1].target == 3);
    CHECK(rows[1].mantissa == -10);
    CHECK(rows[1].exponent == -2);
    CHECK(rows[1].delay == 4);
    CHECK_THROWS_AS(parse_connection_csv("0,1,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_connection_csv("0,1,x,0,0\n"), ConfigError);
    CHECK_THROWS_AS(parse_connection_csv("a,b,c\n"), ConfigError);
    CHECK_THROWS_AS(parse_connection_csv("0,1,2,3,4\nsrc,dst,mantissa,exponent,delay\n"), ConfigError);
}

TEST_CASE("connections from a CSV file are inlined into the resolved config") {
    const auto dir = temp_dir("csv");
    std::ofstream(dir / "conn.csv") << "src,dst,mantissa,exponent,delay\n0,0,100,1,2\n";
    const std::string text = R"({
      "neuron_groups": [{"name": "n", "size": 1, "current_decay": 0, "voltage_decay": 0, "threshold_mantissa": 1}],
      "generators": [{"name": "g", "size": 1, "spikes": []}],
      "synapses": [{"name": "s", "source": "g", "target": "n", "sign_mode": "excitatory", "weight_bits": 8,
                    "connections_csv": "conn.csv"}]})";
    std::ofstream(dir / "net.json") << text;
    const auto cfg = load_config(dir / "net.json");
    REQUIRE(cfg.network.synapses[0].connections.size() == 1);
    CHECK(cfg.network.synapses[0].connections[0].mantissa == 100);
    CHECK(cfg.resolved_json.find("conn.csv") == std::string::npos);
    CHECK(cfg.resolved_json.find("100") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("random connectivity is seeded and respects its options") {
    const std::string text = R"({
      "seed": 3,
      "neuron_groups": [{"name": "net", "size": 50, "current_decay": 0, "voltage_decay": 0, "threshold_mantissa": 1}],
      "synapses": [{"name": "inh", "source": "net", "target": "net", "sign_mode": "inhibitory", "weight_bits": 8,
                    "random": {"probability": 0.2, "mu": 4.0, "sigma": 1.0, "exponent": 1, "delay": 2,
                               "allow_self": false, "source_offset": 0, "source_count": 10}}]})";
    const auto a = parse_config(text, ".");
    const auto b = parse_config(text, ".");
    const auto& conns = a.network.synapses[0].connections;
    REQUIRE_FALSE(conns.empty());
    CHECK(conns.size() == b.network.synapses[0].connections.size());
    for (const auto& c : conns) {
        CHECK(c.source < 10);
        CHECK(c.source != c.target);
        CHECK(c.mantissa <= 0);
        CHECK(c.mantissa >= -255);
        CHECK(c.exponent == 1);
        CHECK(c.delay == 2);
    }
    const double density = static_cast<double>(conns.size()) / (10.0 * 49.0);
    CHECK(std::abs(density - 0.2) < 0.06);
    CHECK(parse_config(text, ".", 4).network.synapses[0].connections.size() != 0);
}

TEST_CASE("random mixed-mode mantissas stay in range") {
    RandomStream rng(1);
    const WeightConfig mixed{8, SignMode::mixed};
    RandomConnectivity spec;
    spec.probability = 1.0;
    spec.lognormal_mu = 8.0;
    spec.lognormal_sigma = 1.0;
    const auto conns = random_connections(spec, 20, 20, mixed, false, rng);
    CHECK(conns.size() == 400);
    for (const auto& c : conns) {
        CHECK(c.mantissa >= mixed.mantissa_min());
        CHECK(c.mantissa <= mixed.mantissa_max());
    }
}

TEST_CASE("format_real round-trips") {
    CHECK(format_real(0.25) == "0.25");
    CHECK(format_real(-26.25) == "-26.25");
    CHECK(format_real(0.0) == "0");
    CHECK(std::stod(format_real(0.1)) == 0.1);
    CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("monitor CSV layout") {
    MonitorRecord v;
    v.variable = MonitorVariable::voltage;
    v.steps = {0, 0, 1};
    v.ids = {0, 1, 0};
    v.values = {5, -6, 7};
    std::ostringstream out;
    write_monitor_csv(v, out);
    CHECK(out.str() == "step,id,value\n0,0,5\n0,1,-6\n1,0,7\n");

    MonitorRecord s;
    s.variable = MonitorVariable::spikes;
    s.steps = {4};
    s.ids = {2};
    std::ostringstream spikes;
    write_monitor_csv(s, spikes);
    CHECK(spikes.str() == "step,id\n4,2\n");

    MonitorRecord dw;
    dw.variable = MonitorVariable::dw;
    dw.steps = {1};
    dw.ids = {0};
    dw.real_values = {-0.75};
    std::ostringstream reals;
    write_monitor_csv(dw, reals);
    CHECK(reals.str() == "step,id,value\n1,0,-0.75\n");
}

TEST_CASE("monitor files") {
    const auto dir = temp_dir("files");
    MonitorRecord s;
    s.name = "spk";
    s.variable = MonitorVariable::spikes;
    const auto paths = write_monitor_files({s}, dir);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == dir / "spk.csv");
    CHECK(fs::exists(paths[0]));
    fs::remove_all(dir);
}

TEST_CASE("STDP window pairing") {
    MonitorRecord pre;
    pre.variable = MonitorVariable::spikes;
    pre.steps = {10, 30};
    pre.ids = {0, 0};
    MonitorRecord post;
    post.variable = MonitorVariable::spikes;
    post.steps = {12, 25};
    post.ids = {0, 0};
    MonitorRecord dw;
    dw.variable = MonitorVariable::dw;
    for (std::int64_t t = 0; t < 40; ++t) {
        dw.steps.push_back(t);
        dw.ids.push_back(0);
        // Post seen at 13 and 26 (latency 1); pre seen at 10 and 30 (latency 0).
        dw.real_values.push_back(t == 13 ? 20.0 : t == 30 ? -15.0 : 0.0);
    }
    const auto samples = stdp_window(pre, post, dw, 0, 1, 64);
    REQUIRE(samples.size() == 2);
    CHECK(samples[0].step == 13);
    CHECK(samples[0].dt == 3);
    CHECK(samples[0].dw == 20.0);
    CHECK(samples[1].step == 30);
    CHECK(samples[1].dt == -4);
    CHECK(stdp_window(pre, post, dw, 0, 1, 3).size() == 1);

    std::ostringstream out;
    write_stdp_csv(samples, out);
    CHECK(out.str() == "step,dt,dw\n13,3,20\n30,-4,-15\n");
    CHECK_THROWS_AS(stdp_window(dw, post, dw, 0, 1, 3), Error);
}
