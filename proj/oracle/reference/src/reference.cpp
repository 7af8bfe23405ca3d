#include "loihi_ref/reference.hpp"

#include <cmath>
#include <limits>

namespace loihi_ref {

namespace {

using wide = __int128;

// sign(p) * ceil(|p| / 4096) via truncating division and a remainder fixup.
wide rnd_div4096(wide p) {
    wide q = p / 4096;
    if (p % 4096 != 0) {
        q += p > 0 ? 1 : -1;
    }
    return q;
}

bool fits64(wide x) {
    return x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max();
}

}  // namespace

LifSeries scalar_algorithm1(const LifParams& params, std::span<const std::int64_t> input) {
    LifSeries out;
    const std::size_t steps = input.size();
    out.current.assign(steps, 0);
    out.voltage.assign(steps, 0);
    out.spikes.assign(steps, 0);

    const wide v_th = static_cast<wide>(params.threshold_mantissa) * 64;
    wide I = 0;
    wide v = 0;
    std::int64_t refractory_left = 0;

    for (std::size_t t = 0; t < steps; ++t) {
        I = I - rnd_div4096(I * params.current_decay) + input[t];

        if (refractory_left > 0) {
            v = 0;
            refractory_left -= 1;
        } else {
            v = v - rnd_div4096(v * params.voltage_decay) + I + params.bias;
        }

        if (!fits64(I) || !fits64(v)) {
            out.overflow = true;
            out.overflow_step = static_cast<std::int64_t>(t);
            out.current.resize(t);
            out.voltage.resize(t);
            out.spikes.resize(t);
            return out;
        }

        if (v > v_th) {
            out.spikes[t] = 1;
            v = 0;
            refractory_left = params.refractory;
        }
        out.current[t] = static_cast<std::int64_t>(I);
        out.voltage[t] = static_cast<std::int64_t>(v);
    }
    return out;
}

double closed_form_current(std::span<const double> spike_times, double weight, double tau, double t) {
    double total = 0.0;
    for (const double tk : spike_times) {
        if (t >= tk) {
            total += weight * std::exp((tk - t) / tau);
        }
    }
    return total;
}

std::vector<double> trace_expectation(double start, double tau, std::int64_t steps) {
    std::vector<double> m;
    if (steps <= 0) return m;
    m.reserve(static_cast<std::size_t>(steps));
    m.push_back(start);
    for (std::int64_t t = 1; t < steps; ++t) {
        m.push_back(m.back() * (1.0 - 1.0 / tau));
    }
    return m;
}

double geometric_pmf(double p, std::int64_t k) {
    if (k < 1) return 0.0;
    return p * std::pow(1.0 - p, static_cast<double>(k - 1));
}

double geometric_tail(double p, std::int64_t k) {
    if (k <= 1) return 1.0;
    return std::pow(1.0 - p, static_cast<double>(k - 1));
}

}  // namespace loihi_ref
