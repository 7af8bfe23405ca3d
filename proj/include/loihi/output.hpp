#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "loihi/simulation.hpp"

namespace loihi {

/// Shortest decimal that round-trips to the same double.
std::string format_real(double value);

/// `step,id,value` rows, or `step,id` for spike monitors.
void write_monitor_csv(const MonitorRecord& record, std::ostream& out);

/// Writes `<dir>/<record.name>.csv` for every record; returns the paths.
std::vector<std::filesystem::path> write_monitor_files(const std::vector<MonitorRecord>& records,
                                                       const std::filesystem::path& dir);

/// Pairs each nonzero weight change with the spike-time difference that
/// caused it. dt > 0: the presynaptic spike arrived dt steps before the
/// postsynaptic one; dt < 0: the reverse.
struct StdpSample {
    std::int64_t step = 0;
    std::int64_t dt = 0;
    double dw = 0.0;
};

/// Builds the window from a presynaptic spike monitor, a postsynaptic spike
/// monitor and a dw monitor on a single plastic connection. `pre_latency`
/// and `post_latency` are the steps between a spike and the moment the
/// synapse sees it (0 for a generator source, 1 for neurons).
std::vector<StdpSample> stdp_window(const MonitorRecord& pre_spikes, const MonitorRecord& post_spikes,
                                    const MonitorRecord& dw, std::int64_t pre_latency,
                                    std::int64_t post_latency, std::int64_t max_dt);

void write_stdp_csv(const std::vector<StdpSample>& samples, std::ostream& out);

}  // namespace loihi
