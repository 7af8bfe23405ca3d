#include "loihi/output.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>

#include "loihi/errors.hpp"

namespace loihi {

std::string format_real(double value) {
    std::array<char, 64> buffer{};
    const auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) {
        throw Error("format_real: conversion failed");
    }
    return std::string(buffer.data(), ptr);
}

void write_monitor_csv(const MonitorRecord& record, std::ostream& out) {
    if (record.is_spikes()) {
        out << "step,id\n";
        for (std::size_t i = 0; i < record.size(); ++i) {
            out << record.steps[i] << ',' << record.ids[i] << '\n';
        }
        return;
    }
    out << "step,id,value\n";
    for (std::size_t i = 0; i < record.size(); ++i) {
        out << record.steps[i] << ',' << record.ids[i] << ',';
        if (record.is_real()) {
            out << format_real(record.real_values[i]);
        } else {
            out << record.values[i];
        }
        out << '\n';
    }
}

std::vector<std::filesystem::path> write_monitor_files(const std::vector<MonitorRecord>& records,
                                                       const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    for (const auto& record : records) {
        const auto path = dir / (record.name + ".csv");
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw Error("cannot write '" + path.string() + "'");
        }
        write_monitor_csv(record, out);
        paths.push_back(path);
    }
    return paths;
}

std::vector<StdpSample> stdp_window(const MonitorRecord& pre_spikes, const MonitorRecord& post_spikes,
                                    const MonitorRecord& dw, std::int64_t pre_latency,
                                    std::int64_t post_latency, std::int64_t max_dt) {
    if (!pre_spikes.is_spikes() || !post_spikes.is_spikes() || !dw.is_real()) {
        throw Error("stdp_window: expects two spike monitors and one dw monitor");
    }
    auto arrivals = [](const MonitorRecord& rec, std::int64_t latency) {
        std::vector<std::int64_t> out;
        out.reserve(rec.size());
        for (const auto s : rec.steps) out.push_back(s + latency);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    const auto pre = arrivals(pre_spikes, pre_latency);
    const auto post = arrivals(post_spikes, post_latency);

    // Most recent arrival at or before `t`, if any.
    auto latest = [](const std::vector<std::int64_t>& times, std::int64_t t) -> std::int64_t {
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        return it == times.begin() ? -1 : *(it - 1);
    };
    auto contains = [](const std::vector<std::int64_t>& times, std::int64_t t) {
        return std::binary_search(times.begin(), times.end(), t);
    };

    std::vector<StdpSample> out;
    for (std::size_t i = 0; i < dw.size(); ++i) {
        const double value = dw.real_values[i];
        if (value == 0.0) continue;
        const std::int64_t t = dw.steps[i];
        const bool pre_now = contains(pre, t);
        const bool post_now = contains(post, t);
        std::int64_t dt = 0;
        if (post_now && pre_now) {
            dt = 0;
        } else if (post_now) {
            const std::int64_t a = latest(pre, t);
            if (a < 0) continue;
            dt = t - a;
        } else if (pre_now) {
            const std::int64_t b = latest(post, t);
            if (b < 0) continue;
            dt = -(t - b);
        } else {
            continue;
        }
        if (dt > max_dt || dt < -max_dt) continue;
        out.push_back(StdpSample{t, dt, value});
    }
    return out;
}

void write_stdp_csv(const std::vector<StdpSample>& samples, std::ostream& out) {
    out << "step,dt,dw\n";
    for (const auto& s : samples) {
        out << s.step << ',' << s.dt << ',' << format_real(s.dw) << '\n';
    }
}

}  // namespace loihi
