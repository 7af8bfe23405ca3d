#include "loihi_val/validation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

#include "loihi/fixedpoint.hpp"
#include "loihi/output.hpp"
#include "loihi/random.hpp"
#include "loihi/simulation.hpp"
#include "loihi_ref/reference.hpp"

namespace loihi_val {

using loihi::format_real;

Metric make_metric(std::string name, double observed, double expected, double tolerance,
                   Metric::Check check) {
    Metric m{std::move(name), observed, expected, tolerance, check, false};
    switch (check) {
        case Metric::Check::absolute:
            m.pass = std::abs(observed - expected) <= tolerance;
            break;
        case Metric::Check::relative:
            m.pass = std::abs(observed - expected) <= tolerance * std::abs(expected);
            break;
        case Metric::Check::at_least:
            m.pass = observed >= expected - tolerance;
            break;
        case Metric::Check::at_most:
            m.pass = observed <= expected + tolerance;
            break;
    }
    if (std::isnan(observed)) m.pass = false;
    return m;
}

bool ValidationReport::passed() const noexcept {
    return std::all_of(metrics.begin(), metrics.end(), [](const Metric& m) { return m.pass; });
}

namespace {

std::string_view check_text(Metric::Check check) {
    switch (check) {
        case Metric::Check::absolute: return "abs";
        case Metric::Check::relative: return "rel";
        case Metric::Check::at_least: return "min";
        case Metric::Check::at_most: return "max";
    }
    return "?";
}

}  // namespace

std::string ValidationReport::to_text() const {
    std::ostringstream out;
    out << "experiment: " << experiment << '\n';
    out << "seed: " << seed << '\n';
    out << "samples: " << samples << '\n';
    for (const auto& m : metrics) {
        out << "  " << (m.pass ? "PASS " : "FAIL ") << m.name << " observed=" << format_real(m.observed)
            << " expected=" << format_real(m.expected) << " tolerance=" << format_real(m.tolerance) << " ("
            << check_text(m.check) << ")\n";
    }
    for (const auto& note : notes) {
        out << "  note: " << note << '\n';
    }
    out << "result: " << (passed() ? "PASS" : "FAIL") << '\n';
    return out.str();
}

namespace {

// Chi-square goodness of fit of positive integer samples to a geometric law.
// Bins follow the geometric quantiles and are merged until every expected
// count is at least 5.
struct ChiSquare {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

ChiSquare geometric_chi_square(const std::vector<std::int64_t>& samples, double p) {
    ChiSquare result;
    const double n = static_cast<double>(samples.size());
    if (p >= 1.0) {
        const bool all_one = std::all_of(samples.begin(), samples.end(), [](std::int64_t s) { return s == 1; });
        result.p_value = all_one ? 1.0 : 0.0;
        return result;
    }

    constexpr int kQuantiles = 20;
    std::vector<std::int64_t> edges;
    for (int j = 0; j < kQuantiles; ++j) {
        const double q = static_cast<double>(j) / kQuantiles;
        const auto k = 1 + static_cast<std::int64_t>(std::ceil(std::log1p(-q) / std::log1p(-p) - 1e-12));
        if (edges.empty() || k > edges.back()) edges.push_back(k);
    }

    // Bin i covers [edges[i], edges[i+1]); the last bin is open-ended.
    auto expected_in = [&](std::size_t i) {
        const double lo = loihi_ref::geometric_tail(p, edges[i]);
        const double hi = i + 1 < edges.size() ? loihi_ref::geometric_tail(p, edges[i + 1]) : 0.0;
        return n * (lo - hi);
    };
    while (edges.size() > 1 && expected_in(edges.size() - 1) < 5.0) {
        edges.pop_back();
    }
    for (std::size_t i = 0; i + 1 < edges.size();) {
        if (expected_in(i) < 5.0) {
            edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        } else {
            ++i;
        }
    }
    if (edges.size() < 2) return result;

    std::vector<double> observed(edges.size(), 0.0);
    for (const auto s : samples) {
        const auto it = std::upper_bound(edges.begin(), edges.end(), s);
        if (it == edges.begin()) continue;
        observed[static_cast<std::size_t>(it - edges.begin() - 1)] += 1.0;
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double e = expected_in(i);
        result.statistic += (observed[i] - e) * (observed[i] - e) / e;
    }
    result.dof = static_cast<int>(edges.size()) - 1;
    const boost::math::chi_squared dist(result.dof);
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
    return result;
}

}  // namespace

ValidationReport weight_interval_experiment(int weight_bits, loihi::SignMode sign_mode,
                                            std::int64_t samples, std::uint64_t seed) {
    const loihi::WeightConfig config{weight_bits, sign_mode};
    config.validate();
    const int ns = config.precision_exponent();
    const double mean_expected = std::ldexp(1.0, ns);

    ValidationReport report;
    report.experiment = "weight_interval_" + std::string(loihi::to_string(sign_mode)) + "_nwb" +
                        std::to_string(weight_bits);
    report.seed = seed;
    report.samples = samples;

    const auto rule = loihi::parse_rule("u0");
    auto rng = loihi::RandomStream::substream(seed, static_cast<std::uint64_t>(weight_bits) * 4 +
                                                        static_cast<std::uint64_t>(sign_mode),
                                              "weight_interval");
    const auto start = loihi::make_weight(config.plastic_low(), 0, config, true);
    auto weight = start;
    std::vector<std::int64_t> intervals;
    intervals.reserve(static_cast<std::size_t>(samples));
    std::int64_t since_change = 0;
    for (std::int64_t t = 0; static_cast<std::int64_t>(intervals.size()) < samples; ++t) {
        loihi::RuleEnv env;
        env.t = t;
        env.w = weight.mantissa;
        const auto next = loihi::apply_weight_delta(weight, loihi::eval_rule(rule, env), config, rng);
        ++since_change;
        if (next.actual != weight.actual) {
            intervals.push_back(since_change);
            since_change = 0;
        }
        weight = next.mantissa >= config.plastic_high() ? start : next;
    }

    double sum = 0.0;
    std::map<std::int64_t, std::int64_t> histogram;
    for (const auto k : intervals) {
        sum += static_cast<double>(k);
        histogram[k] += 1;
    }
    const double mean = sum / static_cast<double>(intervals.size());
    report.metrics.push_back(
        make_metric("mean_interval", mean, mean_expected, 0.03, Metric::Check::relative));

    const double p = 1.0 / mean_expected;
    const auto chi = geometric_chi_square(intervals, p);
    report.metrics.push_back(make_metric("chi_square_p_value", chi.p_value, 0.01, 0.0, Metric::Check::at_least));
    report.notes.push_back("n_s=" + std::to_string(ns) + " chi2=" + format_real(chi.statistic) +
                           " dof=" + std::to_string(chi.dof));
    report.notes.push_back("tolerance 3%: the standard error of the mean of 8000 geometric intervals is at most 1.1%");

    std::ostringstream csv;
    csv << "interval,count,expected\n";
    for (const auto& [k, count] : histogram) {
        csv << k << ',' << count << ','
            << format_real(static_cast<double>(samples) * loihi_ref::geometric_pmf(p, k)) << '\n';
    }
    report.tables.push_back({"histogram", csv.str()});
    return report;
}

ValidationReport trace_experiment(const std::vector<std::int64_t>& taus, std::int64_t trials,
                                  std::uint64_t seed, std::int64_t impulse, std::int64_t horizon) {
    ValidationReport report;
    report.experiment = "trace_statistics";
    report.seed = seed;
    report.samples = trials * static_cast<std::int64_t>(taus.size());

    for (const auto tau : taus) {
        const loihi::TraceParams params{impulse, tau};
        params.validate();
        const std::int64_t steps = std::max<std::int64_t>(horizon, 5 * tau + 1);
        std::vector<double> sum(static_cast<std::size_t>(steps), 0.0);
        std::vector<double> sum_sq(static_cast<std::size_t>(steps), 0.0);
        auto rng = loihi::RandomStream::substream(seed, static_cast<std::uint64_t>(tau), "trace_experiment");
        for (std::int64_t trial = 0; trial < trials; ++trial) {
            std::int64_t trace = 0;
            for (std::int64_t t = 0; t < steps; ++t) {
                trace = loihi::decay_and_impulse(trace, params, t == 0, rng);
                const auto value = static_cast<double>(trace);
                sum[static_cast<std::size_t>(t)] += value;
                sum_sq[static_cast<std::size_t>(t)] += value * value;
            }
        }

        const auto recursion = loihi_ref::trace_expectation(static_cast<double>(impulse),
                                                            static_cast<double>(tau), steps);
        const auto n = static_cast<double>(trials);
        const std::string prefix = "tau" + std::to_string(tau) + "_";
        double max_dev_window = 0.0;
        double signed_dev_window = 0.0;
        double max_dev_horizon = 0.0;
        std::ostringstream csv;
        csv << "t,mean,std,recursion\n";
        for (std::int64_t t = 0; t < steps; ++t) {
            const auto i = static_cast<std::size_t>(t);
            const double mean = sum[i] / n;
            const double dev = mean - recursion[i];
            max_dev_horizon = std::max(max_dev_horizon, std::abs(dev));
            if (t <= 5 * tau) {
                max_dev_window = std::max(max_dev_window, std::abs(dev));
                signed_dev_window += dev;
                const double var = std::max(0.0, sum_sq[i] / n - mean * mean);
                csv << t << ',' << format_real(mean) << ',' << format_real(std::sqrt(var)) << ','
                    << format_real(recursion[i]) << '\n';
            }
        }
        signed_dev_window /= static_cast<double>(5 * tau + 1);

        if ((impulse * (tau - 1)) % tau == 0 && steps > 1) {
            report.metrics.push_back(make_metric(prefix + "t1_mean", sum[1] / n,
                                                 static_cast<double>(impulse * (tau - 1) / tau), 0.0));
        }
        report.metrics.push_back(make_metric(prefix + "max_abs_deviation_5tau", max_dev_window, 0.0, 2.0,
                                             Metric::Check::at_most));
        report.metrics.push_back(make_metric(prefix + "mean_signed_deviation_5tau", signed_dev_window, 0.0, 2.0));
        report.metrics.push_back(make_metric(prefix + "max_abs_deviation_horizon", max_dev_horizon, 0.0, 2.0,
                                             Metric::Check::at_most));
        report.tables.push_back({"tau" + std::to_string(tau), csv.str()});
    }
    report.notes.push_back("tolerance 2 trace units: with 400 trials the standard error of the mean stays below 0.5 units");
    report.notes.push_back("horizon " + std::to_string(horizon) + " steps");
    return report;
}

namespace {

loihi::NeuronGroupDef single_unit(std::string name, const loihi::CompartmentParams& params) {
    loihi::NeuronGroupDef group;
    group.name = std::move(name);
    group.size = 1;
    group.params = params;
    return group;
}

loihi::GeneratorGroupDef explicit_generator(std::string name, std::int64_t size,
                                            std::vector<loihi::GeneratorSpike> spikes) {
    loihi::GeneratorGroupDef gen;
    gen.name = std::move(name);
    gen.size = size;
    gen.kind = loihi::GeneratorGroupDef::Kind::explicit_spikes;
    gen.spikes = std::move(spikes);
    return gen;
}

const loihi::MonitorRecord& find_record(const std::vector<loihi::MonitorRecord>& records, std::string_view name) {
    for (const auto& r : records) {
        if (r.name == name) return r;
    }
    throw std::logic_error("missing monitor " + std::string(name));
}

struct PairStats {
    std::vector<double> dw;
    double mean() const {
        double s = 0.0;
        for (const double v : dw) s += v;
        return s / static_cast<double>(dw.size());
    }
    double mean_abs() const {
        double s = 0.0;
        for (const double v : dw) s += std::abs(v);
        return s / static_cast<double>(dw.size());
    }
    double se_abs() const {
        const double m = mean_abs();
        double s = 0.0;
        for (const double v : dw) s += (std::abs(v) - m) * (std::abs(v) - m);
        const auto n = static_cast<double>(dw.size());
        return n > 1 ? std::sqrt(s / (n - 1) / n) : 0.0;
    }
};

}  // namespace

ValidationReport stdp_window_experiment(const loihi::LearningRule& rule, std::int64_t max_dt,
                                        std::int64_t trials, std::uint64_t seed, loihi::TraceParams x,
                                        loihi::TraceParams y) {
    ValidationReport report;
    report.experiment = "stdp_window";
    report.seed = seed;

    // The postsynaptic unit copies its input: I and v are fully replaced each
    // step, so only the strong noise input makes it fire.
    loihi::CompartmentParams post_params;
    post_params.current_decay = loihi::DecayFactor(4096);
    post_params.voltage_decay = loihi::DecayFactor(4096);
    post_params.threshold_mantissa = 100;

    const std::int64_t far_dt = std::max(5 * max_dt, 10 * std::max(x.tau, y.tau));
    const std::int64_t base = far_dt + 2;

    // pre arrives at `base`; post fires at base + dt - 1 and arrives at base + dt.
    auto run_pair = [&](std::int64_t dt, std::uint64_t trial_seed) {
        loihi::NetworkDef net;
        net.seed = trial_seed;
        net.groups.push_back(single_unit("post", post_params));
        net.generators.push_back(explicit_generator("pre", 1, {{base, 0}}));
        net.generators.push_back(explicit_generator("noise", 1, {{base + dt - 1, 0}}));

        loihi::SynapseGroupDef plastic;
        plastic.name = "plastic";
        plastic.source = "pre";
        plastic.target = "post";
        plastic.weights = {8, loihi::SignMode::excitatory};
        plastic.connections = {{0, 0, 128, -6, 0}};
        plastic.plastic = true;
        plastic.rule = rule;
        plastic.traces = {x, x, y, y, y};
        net.synapses.push_back(plastic);

        loihi::SynapseGroupDef noise;
        noise.name = "noise_input";
        noise.source = "noise";
        noise.target = "post";
        noise.weights = {8, loihi::SignMode::excitatory};
        noise.connections = {{0, 0, 254, 0, 0}};
        net.synapses.push_back(noise);

        net.monitors.push_back({"dw", "plastic", loihi::MonitorVariable::dw, {}});
        net.monitors.push_back({"post_spikes", "post", loihi::MonitorVariable::spikes, {}});

        loihi::Simulation sim(net);
        const auto& records = sim.run(std::max(base, base + dt) + 1);
        const auto& post_spikes = find_record(records, "post_spikes");
        if (post_spikes.size() != 1 || post_spikes.steps[0] != base + dt - 1) {
            throw std::logic_error("stdp_window_experiment: postsynaptic unit did not fire as scheduled");
        }
        double total = 0.0;
        for (const double v : find_record(records, "dw").real_values) total += v;
        return total;
    };

    std::vector<std::int64_t> dts;
    for (std::int64_t dt = -max_dt; dt <= max_dt; ++dt) {
        if (dt != 0) dts.push_back(dt);
    }
    dts.push_back(-far_dt);
    dts.push_back(far_dt);

    std::map<std::int64_t, PairStats> stats;
    for (const auto dt : dts) {
        auto& s = stats[dt];
        for (std::int64_t trial = 0; trial < trials; ++trial) {
            const auto key = static_cast<std::uint64_t>(dt + 1'000'000) * 100'000 + static_cast<std::uint64_t>(trial);
            s.dw.push_back(run_pair(dt, loihi::derive_seed(seed, key, "stdp_pair")));
        }
    }
    report.samples = trials * static_cast<std::int64_t>(dts.size());

    std::int64_t wrong_sign_ltp = 0;
    std::int64_t wrong_sign_ltd = 0;
    for (std::int64_t dt = 1; dt <= max_dt; ++dt) {
        for (const double v : stats[dt].dw) wrong_sign_ltp += v > 0.0 ? 0 : 1;
        for (const double v : stats[-dt].dw) wrong_sign_ltd += v < 0.0 ? 0 : 1;
    }
    report.metrics.push_back(make_metric("pre_before_post_pairs_with_dw_le_0", static_cast<double>(wrong_sign_ltp), 0.0, 0.0));
    report.metrics.push_back(make_metric("post_before_pre_pairs_with_dw_ge_0", static_cast<double>(wrong_sign_ltd), 0.0, 0.0));

    // Monotone decay of the mean magnitude, allowing ties within 3 standard errors.
    for (const int side : {1, -1}) {
        std::int64_t violations = 0;
        for (std::int64_t k = 1; k < max_dt; ++k) {
            const auto& a = stats[side * k];
            const auto& b = stats[side * (k + 1)];
            const double slack = 3.0 * std::hypot(a.se_abs(), b.se_abs());
            if (b.mean_abs() > a.mean_abs() + slack) ++violations;
        }
        report.metrics.push_back(make_metric(side > 0 ? "ltp_monotonicity_violations" : "ltd_monotonicity_violations",
                                             static_cast<double>(violations), 0.0, 0.0));
    }

    for (const int side : {1, -1}) {
        const double near = stats[side].mean_abs();
        const double far = stats[side * far_dt].mean_abs();
        report.metrics.push_back(make_metric(std::string(side > 0 ? "ltp" : "ltd") + "_far_mean_abs_dw", far, 0.0,
                                             0.01 * near, Metric::Check::at_most));
    }
    report.notes.push_back("rule: " + rule.to_string());
    report.notes.push_back("far probe at |dt| = " + std::to_string(far_dt) + "; tolerance 1% of |dw| at |dt| = 1");

    std::ostringstream csv;
    csv << "dt,trials,mean_dw,mean_abs_dw,se_abs_dw\n";
    for (const auto& [dt, s] : stats) {
        csv << dt << ',' << s.dw.size() << ',' << format_real(s.mean()) << ',' << format_real(s.mean_abs()) << ','
            << format_real(s.se_abs()) << '\n';
    }
    report.tables.push_back({"window", csv.str()});
    return report;
}

ValidationReport oracle_equivalence_experiment(std::int64_t instances, std::int64_t steps, std::uint64_t seed) {
    ValidationReport report;
    report.experiment = "oracle_equivalence";
    report.seed = seed;
    report.samples = instances * steps;

    std::int64_t mismatched_steps = 0;
    std::int64_t mismatched_instances = 0;
    std::int64_t overflow_disagreements = 0;
    std::int64_t total_spikes = 0;
    std::ostringstream csv;
    csv << "instance,current_decay,voltage_decay,threshold_mantissa,bias,refractory,inputs,spikes,mismatches\n";

    for (std::int64_t inst = 0; inst < instances; ++inst) {
        auto rng = loihi::RandomStream::substream(seed, static_cast<std::uint64_t>(inst), "oracle_instance");

        loihi::CompartmentParams params;
        params.current_decay = loihi::DecayFactor(rng.uniform_int(0, 4096));
        params.voltage_decay = loihi::DecayFactor(rng.uniform_int(0, 4096));
        params.threshold_mantissa = rng.bernoulli(0.1) ? rng.uniform_int(0, 131071) : rng.uniform_int(0, 500);
        params.bias = rng.uniform_int(-params.threshold() / 4, 2 * params.threshold() + 64);
        params.refractory = rng.uniform_int(0, 8);

        loihi::NetworkDef net;
        net.seed = seed;
        net.groups.push_back(single_unit("n", params));

        const auto n_inputs = rng.uniform_int(1, 4);
        std::vector<std::int64_t> input(static_cast<std::size_t>(steps), 0);
        std::vector<loihi::GeneratorSpike> spikes;
        for (std::int64_t k = 0; k < n_inputs; ++k) {
            const auto mode = static_cast<loihi::SignMode>(rng.uniform_int(0, 2));
            const loihi::WeightConfig config{static_cast<int>(rng.uniform_int(1, 8)), mode};
            const auto mantissa = rng.uniform_int(config.mantissa_min(), config.mantissa_max());
            const auto exponent = static_cast<int>(rng.uniform_int(loihi::kMinWeightExponent, loihi::kMaxWeightExponent));
            const auto delay = rng.uniform_int(0, 4);
            const double rate = 0.005 + 0.2 * rng.uniform();
            const auto weight = loihi::encode_weight(mantissa, exponent, config);

            loihi::SynapseGroupDef syn;
            syn.name = "in" + std::to_string(k);
            syn.source = "drive";
            syn.target = "n";
            syn.weights = config;
            syn.connections = {{k, 0, mantissa, exponent, delay}};
            net.synapses.push_back(syn);

            for (std::int64_t t = 0; t < steps; ++t) {
                if (!rng.bernoulli(rate)) continue;
                spikes.push_back({t, k});
                if (t + delay < steps) input[static_cast<std::size_t>(t + delay)] += weight;
            }
        }
        std::stable_sort(spikes.begin(), spikes.end(),
                         [](const auto& a, const auto& b) { return a.step < b.step; });
        net.generators.push_back(explicit_generator("drive", n_inputs, std::move(spikes)));
        net.monitors.push_back({"I", "n", loihi::MonitorVariable::current, {}});
        net.monitors.push_back({"v", "n", loihi::MonitorVariable::voltage, {}});
        net.monitors.push_back({"s", "n", loihi::MonitorVariable::spikes, {}});

        const loihi_ref::LifParams ref_params{params.current_decay.raw(), params.voltage_decay.raw(),
                                              params.threshold_mantissa, params.bias, params.refractory};
        const auto expected = loihi_ref::scalar_algorithm1(ref_params, input);

        loihi::Simulation sim(net);
        bool engine_overflow = false;
        try {
            sim.run(steps);
        } catch (const loihi::OverflowError&) {
            engine_overflow = true;
        }
        if (engine_overflow != expected.overflow) ++overflow_disagreements;

        const auto& records = sim.records();
        const auto& rec_i = find_record(records, "I");
        const auto& rec_v = find_record(records, "v");
        const auto& rec_s = find_record(records, "s");
        std::vector<std::uint8_t> engine_spikes(static_cast<std::size_t>(steps), 0);
        for (const auto t : rec_s.steps) engine_spikes[static_cast<std::size_t>(t)] = 1;

        const auto compared = static_cast<std::int64_t>(expected.current.size());
        std::int64_t mismatches = 0;
        if (static_cast<std::int64_t>(rec_v.size()) < compared || static_cast<std::int64_t>(rec_i.size()) < compared) {
            mismatches = compared;
        } else {
            for (std::int64_t t = 0; t < compared; ++t) {
                const auto i = static_cast<std::size_t>(t);
                if (rec_i.values[i] != expected.current[i] || rec_v.values[i] != expected.voltage[i] ||
                    engine_spikes[i] != expected.spikes[i]) {
                    if (mismatches == 0) {
                        report.notes.push_back("instance " + std::to_string(inst) + " first mismatch at step " +
                                               std::to_string(t));
                    }
                    ++mismatches;
                }
            }
        }
        std::int64_t n_spikes = 0;
        for (const auto s : expected.spikes) n_spikes += s;
        total_spikes += n_spikes;
        mismatched_steps += mismatches;
        if (mismatches > 0) ++mismatched_instances;

        csv << inst << ',' << params.current_decay.raw() << ',' << params.voltage_decay.raw() << ','
            << params.threshold_mantissa << ',' << params.bias << ',' << params.refractory << ',' << n_inputs << ','
            << n_spikes << ',' << mismatches << '\n';
    }

    report.metrics.push_back(make_metric("mismatched_steps", static_cast<double>(mismatched_steps), 0.0, 0.0));
    report.metrics.push_back(make_metric("mismatched_instances", static_cast<double>(mismatched_instances), 0.0, 0.0));
    report.metrics.push_back(make_metric("overflow_disagreements", static_cast<double>(overflow_disagreements), 0.0, 0.0));
    report.notes.push_back("reference spikes across all instances: " + std::to_string(total_spikes));
    report.tables.push_back({"instances", csv.str()});
    return report;
}

ValidationReport float_sanity_experiment(std::uint64_t seed) {
    ValidationReport report;
    report.experiment = "float_sanity";
    report.seed = seed;

    const loihi::WeightConfig config{8, loihi::SignMode::excitatory};
    const std::int64_t mantissa = 255;
    const int exponent = 7;
    const auto weight = static_cast<double>(loihi::encode_weight(mantissa, exponent, config));

    std::ostringstream csv;
    csv << "tau,t,integer,closed_form\n";
    for (const std::int64_t tau : {16, 32, 64}) {
        auto rng = loihi::RandomStream::substream(seed, static_cast<std::uint64_t>(tau), "float_sanity");
        std::vector<loihi::GeneratorSpike> spikes;
        std::vector<double> times;
        std::int64_t t = 0;
        for (int k = 0; k < 40; ++k) {
            spikes.push_back({t, 0});
            times.push_back(static_cast<double>(t));
            t += rng.uniform_int(tau, 3 * tau);
        }
        const std::int64_t steps = t;

        loihi::CompartmentParams params;
        params.current_decay = loihi::DecayFactor(4096 / tau);
        params.voltage_decay = loihi::DecayFactor(4096);
        params.threshold_mantissa = loihi::CompartmentParams::kMaxThresholdMantissa;

        loihi::NetworkDef net;
        net.seed = seed;
        net.groups.push_back(single_unit("n", params));
        net.generators.push_back(explicit_generator("drive", 1, spikes));
        loihi::SynapseGroupDef syn;
        syn.name = "in";
        syn.source = "drive";
        syn.target = "n";
        syn.weights = config;
        syn.connections = {{0, 0, mantissa, exponent, 0}};
        net.synapses.push_back(syn);
        net.monitors.push_back({"I", "n", loihi::MonitorVariable::current, {}});

        loihi::Simulation sim(net);
        const auto& current = find_record(sim.run(steps), "I");

        double worst = 0.0;
        std::size_t last = 0;
        for (std::int64_t step = 0; step < steps; ++step) {
            while (last + 1 < times.size() && times[last + 1] <= static_cast<double>(step)) ++last;
            const auto age = step - static_cast<std::int64_t>(times[last]);
            const double exact = loihi_ref::closed_form_current(times, weight, static_cast<double>(tau),
                                                                static_cast<double>(step));
            const double value = static_cast<double>(current.values[static_cast<std::size_t>(step)]);
            if (age >= 1 && age <= tau) {
                worst = std::max(worst, std::abs(value - exact) / exact);
            }
            if (step < 6 * tau) {
                csv << tau << ',' << step << ',' << format_real(value) << ',' << format_real(exact) << '\n';
            }
        }
        report.samples += steps;
        report.metrics.push_back(make_metric("tau" + std::to_string(tau) + "_max_relative_error", worst, 0.0, 0.05,
                                             Metric::Check::at_most));
    }
    report.notes.push_back("J = " + format_real(weight) + "; compared at 1..tau steps after each input spike");
    report.tables.push_back({"current", csv.str()});
    return report;
}

std::vector<ValidationReport> run_suite(std::string_view suite, std::uint64_t seed) {
    const bool all = suite == "all";
    if (!all && suite != "weights" && suite != "traces" && suite != "oracle" && suite != "stdp") {
        throw std::invalid_argument("unknown suite '" + std::string(suite) +
                                    "' (expected weights, traces, oracle, stdp or all)");
    }
    std::vector<ValidationReport> reports;
    if (all || suite == "weights") {
        for (const auto mode : {loihi::SignMode::excitatory, loihi::SignMode::mixed}) {
            for (int bits = 1; bits <= 8; ++bits) {
                reports.push_back(weight_interval_experiment(bits, mode, 8000, seed));
            }
        }
    }
    if (all || suite == "traces") {
        reports.push_back(trace_experiment({4, 8, 16, 32}, 400, seed));
    }
    if (all || suite == "oracle") {
        reports.push_back(oracle_equivalence_experiment(100, 100'000, seed));
        reports.push_back(float_sanity_experiment(seed));
    }
    if (all || suite == "stdp") {
        reports.push_back(stdp_window_experiment(loihi::parse_rule("2^-2*x1*y0 - 2^-2*y1*x0"), 16, 400, seed));
    }
    return reports;
}

void write_reports(const std::vector<ValidationReport>& reports, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream text(dir / "report.txt", std::ios::binary);
    if (!text) throw std::runtime_error("cannot write " + (dir / "report.txt").string());
    for (const auto& r : reports) {
        text << r.to_text() << '\n';
        for (const auto& table : r.tables) {
            const auto path = dir / (r.experiment + "_" + table.name + ".csv");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path.string());
            out << table.csv;
        }
    }
}

}  // namespace loihi_val
