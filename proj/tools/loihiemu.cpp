// loihiemu: batch front-end for the emulator.
//
//   loihiemu run --config net.json [--seed N] [--steps N] [--out DIR]
//   loihiemu weight-table --sign-mode mixed --weight-bits 8 [--out FILE]
//   loihiemu validate [--suite all] [--seed N] [--out DIR]
//   loihiemu validate-rule "2^-2*x1*y0 - 2^-2*y1*x0"
//
// Output directories default to $LOIHIEMU_OUT_DIR, then ./out.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "loihi/config.hpp"
#include "loihi/output.hpp"
#include "loihi/simulation.hpp"
#include "loihi/weights.hpp"
#include "loihi_val/validation.hpp"

#ifndef LOIHIEMU_VERSION
#define LOIHIEMU_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitOverflow = 3;

fs::path default_out_dir(const std::string& leaf) {
    if (const char* env = std::getenv("LOIHIEMU_OUT_DIR"); env != nullptr && *env != '\0') {
        return fs::path(env) / leaf;
    }
    return fs::path("out") / leaf;
}

void write_json(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump(2) << '\n';
}

// Errors go to stderr as one JSON object so scripts can parse them.
int report_error(int code, std::string_view kind, const std::string& message,
                 const std::vector<std::string>& problems = {}) {
    json doc{{"error", kind}, {"message", message}, {"exit_code", code}};
    if (!problems.empty()) doc["problems"] = problems;
    std::cerr << doc.dump() << '\n';
    return code;
}

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> steps;
    std::string out;
};

int cmd_run(const RunOptions& opt) {
    loihi::RunConfig cfg;
    try {
        cfg = loihi::load_config(opt.config, opt.seed, opt.steps);
    } catch (const loihi::ValidationError& e) {
        return report_error(kExitInvalid, "validation", e.what(), e.problems());
    } catch (const loihi::Error& e) {
        return report_error(kExitInvalid, "config", e.what());
    }

    const fs::path out_dir = opt.out.empty() ? default_out_dir(fs::path(opt.config).stem().string()) : fs::path(opt.out);
    std::optional<loihi::Simulation> sim;
    try {
        sim.emplace(cfg.network);
    } catch (const loihi::ValidationError& e) {
        return report_error(kExitInvalid, "validation", e.what(), e.problems());
    }

    fs::create_directories(out_dir);
    write_json(out_dir / "manifest.json", json{{"config_path", opt.config},
                                               {"seed", cfg.network.seed},
                                               {"steps", cfg.steps},
                                               {"output_dir", out_dir.string()},
                                               {"config_hash", cfg.hash},
                                               {"tool_version", LOIHIEMU_VERSION},
                                               {"resolved_config", json::parse(cfg.resolved_json)}});

    const auto started = std::chrono::steady_clock::now();
    std::int64_t neuron_spikes = 0;
    std::int64_t generator_spikes = 0;
    try {
        for (std::int64_t t = 0; t < cfg.steps; ++t) {
            const auto events = sim->step();
            neuron_spikes += events.neuron_spikes;
            generator_spikes += events.generator_spikes;
        }
    } catch (const loihi::OverflowError& e) {
        loihi::write_monitor_files(sim->records(), out_dir);
        std::cerr << json{{"error", "overflow"},
                          {"message", e.what()},
                          {"group", e.group()},
                          {"unit", e.unit()},
                          {"step", e.step()},
                          {"exit_code", kExitOverflow}}
                         .dump()
                  << '\n';
        return kExitOverflow;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const auto& records = sim->records();
    const auto files = loihi::write_monitor_files(records, out_dir);

    json summary{{"steps", cfg.steps},
                 {"seed", cfg.network.seed},
                 {"config_hash", cfg.hash},
                 {"neuron_spikes", neuron_spikes},
                 {"generator_spikes", generator_spikes},
                 {"wall_seconds", wall},
                 {"monitors", json::array()}};
    for (std::size_t i = 0; i < records.size(); ++i) {
        summary["monitors"].push_back(
            {{"name", records[i].name}, {"rows", records[i].size()}, {"file", files[i].filename().string()}});
    }

    if (cfg.stdp_window) {
        const auto& w = *cfg.stdp_window;
        auto find = [&](const std::string& name) -> const loihi::MonitorRecord& {
            for (const auto& r : records) {
                if (r.name == name) return r;
            }
            throw loihi::ConfigError("analysis refers to unknown monitor '" + name + "'");
        };
        auto latency = [&](const loihi::MonitorRecord& r) -> std::int64_t {
            for (const auto& g : cfg.network.generators) {
                if (g.name == r.target) return 0;
            }
            return 1;
        };
        try {
            const auto& pre = find(w.pre_monitor);
            const auto& post = find(w.post_monitor);
            const auto samples = loihi::stdp_window(pre, post, find(w.dw_monitor), latency(pre), latency(post), w.max_dt);
            std::ofstream out(out_dir / "stdp_window.csv", std::ios::binary);
            loihi::write_stdp_csv(samples, out);
            summary["stdp_window_rows"] = samples.size();
        } catch (const loihi::Error& e) {
            return report_error(kExitInvalid, "analysis", e.what());
        }
    }
    write_json(out_dir / "summary.json", summary);
    std::cout << "wrote " << files.size() << " monitor files to " << out_dir.string() << " (" << cfg.steps
              << " steps, " << neuron_spikes << " neuron spikes, " << wall << " s)\n";
    return 0;
}

int cmd_weight_table(const std::string& sign_mode, int weight_bits, const std::string& out) {
    std::string csv;
    try {
        csv = loihi::weight_table_csv(loihi::weight_table(loihi::parse_sign_mode(sign_mode), weight_bits));
    } catch (const loihi::Error& e) {
        return report_error(kExitInvalid, "range", e.what());
    }
    if (out.empty() || out == "-") {
        std::cout << csv;
        return 0;
    }
    std::ofstream file(out, std::ios::binary);
    if (!file) return report_error(kExitFailure, "io", "cannot write " + out);
    file << csv;
    return 0;
}

int cmd_validate(const std::string& suite, std::uint64_t seed, const std::string& out) {
    std::vector<loihi_val::ValidationReport> reports;
    try {
        reports = loihi_val::run_suite(suite, seed);
    } catch (const std::invalid_argument& e) {
        return report_error(kExitInvalid, "usage", e.what());
    }
    const fs::path dir = out.empty() ? default_out_dir("validation") : fs::path(out);
    loihi_val::write_reports(reports, dir);
    bool all_passed = true;
    for (const auto& r : reports) {
        std::cout << r.to_text() << '\n';
        all_passed = all_passed && r.passed();
    }
    std::cout << (all_passed ? "all experiments passed" : "some experiments FAILED") << "; reports in "
              << dir.string() << '\n';
    return all_passed ? 0 : kExitFailure;
}

int cmd_validate_rule(const std::string& text) {
    try {
        const auto rule = loihi::parse_rule(text);
        std::cout << rule.to_string() << '\n' << rule.describe();
        return 0;
    } catch (const loihi::RuleSyntaxError& e) {
        std::cerr << "rejected at " << e.position() << ": " << e.what() << '\n';
    } catch (const loihi::UnsupportedSymbolError& e) {
        std::cerr << "rejected at " << e.position() << ": " << e.what() << '\n';
    } catch (const loihi::RuleScaleError& e) {
        std::cerr << "rejected at " << e.position() << ": " << e.what() << '\n';
    }
    return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bit-exact emulator of the Loihi neuromorphic core"};
    app.set_version_flag("--version", LOIHIEMU_VERSION);
    app.require_subcommand(1);

    RunOptions run_opt;
    auto* run = app.add_subcommand("run", "Simulate a network config and write monitor CSVs");
    run->add_option("--config", run_opt.config, "Network config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", run_opt.seed, "Override the master seed");
    run->add_option("--steps", run_opt.steps, "Override the number of steps")->check(CLI::NonNegativeNumber);
    run->add_option("--out", run_opt.out, "Output directory");

    std::string sign_mode = "excitatory";
    int weight_bits = 8;
    std::string table_out;
    auto* table = app.add_subcommand("weight-table", "Print all 4096 weights of one precision setting");
    table->add_option("--sign-mode", sign_mode, "excitatory, inhibitory or mixed");
    table->add_option("--weight-bits", weight_bits, "1..8");
    table->add_option("--out", table_out, "CSV file (default: stdout)");

    std::string suite = "all";
    std::uint64_t seed = 1;
    std::string validate_out;
    auto* validate = app.add_subcommand("validate", "Run validation experiments");
    validate->add_option("--suite", suite, "weights, traces, oracle, stdp or all");
    validate->add_option("--seed", seed, "Master seed");
    validate->add_option("--out", validate_out, "Report directory");

    std::string rule_text;
    auto* validate_rule = app.add_subcommand("validate-rule", "Parse a learning rule and print its normal form");
    validate_rule->add_option("rule", rule_text, "Rule text")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(run_opt);
        if (*table) return cmd_weight_table(sign_mode, weight_bits, table_out);
        if (*validate) return cmd_validate(suite, seed, validate_out);
        if (*validate_rule) return cmd_validate_rule(rule_text);
    } catch (const std::exception& e) {
        return report_error(kExitFailure, "internal", e.what());
    }
    return kExitFailure;
}
