#pragma once

// Statistical and bit-exactness experiments that check the emulator against
// the reference models in loihi_ref.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "loihi/learning_rule.hpp"
#include "loihi/traces.hpp"
#include "loihi/weights.hpp"

namespace loihi_val {

struct Metric {
    enum class Check { absolute, relative, at_least, at_most };

    std::string name;
    double observed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    Check check = Check::absolute;
    bool pass = false;
};

/// absolute: |observed - expected| <= tolerance
/// relative: |observed - expected| <= tolerance * |expected|
/// at_least: observed >= expected - tolerance
/// at_most:  observed <= expected + tolerance
Metric make_metric(std::string name, double observed, double expected, double tolerance,
                   Metric::Check check = Metric::Check::absolute);

/// One CSV artefact attached to a report (histograms, per-step means).
struct Table {
    std::string name;
    std::string csv;
};

struct ValidationReport {
    std::string experiment;
    std::uint64_t seed = 0;
    std::int64_t samples = 0;
    std::vector<Metric> metrics;
    std::vector<std::string> notes;
    std::vector<Table> tables;

    bool passed() const noexcept;
    std::string to_text() const;
};

/// Drives a plastic weight with dw = +1 per step from the lowest mantissa,
/// counting steps between changes of J until `samples` intervals are seen.
/// Checks the mean against 2^n_s (3%) and a chi-square goodness of fit
/// against the geometric law with p = 2^-n_s (p-value > 0.01).
ValidationReport weight_interval_experiment(int weight_bits, loihi::SignMode sign_mode,
                                            std::int64_t samples, std::uint64_t seed);

/// For each tau: `trials` traces receive one impulse at t = 0 and then decay
/// freely. The mean is compared with the recursion m_t = m_{t-1}(1 - 1/tau)
/// for t <= 5 tau (within 2 units) and over `horizon` steps (no drift).
ValidationReport trace_experiment(const std::vector<std::int64_t>& taus, std::int64_t trials,
                                  std::uint64_t seed, std::int64_t impulse = 120,
                                  std::int64_t horizon = 10000);

/// Runs isolated pre/post spike pairs through a one-synapse network for every
/// dt in [-max_dt, max_dt] \ {0} and records the total dw of each pair. `x`
/// parameterises the presynaptic traces, `y` the postsynaptic ones.
ValidationReport stdp_window_experiment(const loihi::LearningRule& rule, std::int64_t max_dt,
                                        std::int64_t trials, std::uint64_t seed,
                                        loihi::TraceParams x = {120, 8},
                                        loihi::TraceParams y = {120, 8});

/// Random single-unit networks driven by random spike trains, simulated by
/// the engine and by loihi_ref::scalar_algorithm1; every step of I, v and the
/// spike flag must agree.
ValidationReport oracle_equivalence_experiment(std::int64_t instances, std::int64_t steps,
                                               std::uint64_t seed);

/// Integer current under large weights against the exponential closed form,
/// for tau_I in {16, 32, 64}, within one time constant after each spike.
ValidationReport float_sanity_experiment(std::uint64_t seed);

/// Suites: "weights", "traces", "oracle", "stdp" or "all". Throws
/// std::invalid_argument on an unknown name.
std::vector<ValidationReport> run_suite(std::string_view suite, std::uint64_t seed);

/// Writes `<dir>/report.txt` and one `<experiment>_<table>.csv` per table.
void write_reports(const std::vector<ValidationReport>& reports, const std::filesystem::path& dir);

}  // namespace loihi_val
