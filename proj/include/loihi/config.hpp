#pragma once

// Network configuration files (JSON).
//
//   {
//     "seed": 7,                       master seed, unsigned 64-bit
//     "steps": 1000,                   default run length
//     "neuron_groups": [
//       {"name": "n", "size": 1, "current_decay": 2048, "voltage_decay": 256,
//        "threshold_mantissa": 100, "bias": 0, "refractory": 1}
//     ],
//     "generators": [
//       {"name": "poisson", "size": 40, "rate": 0.05},
//       {"name": "fixed", "size": 2, "spikes": [[0, 1], [5, 0]]}      [step, id]
//     ],
//     "synapses": [
//       {"name": "s", "source": "poisson", "target": "n",
//        "sign_mode": "excitatory", "weight_bits": 8,
//        "connections": [[0, 0, 254, 0, 0]],         [src, dst, mantissa, exponent, delay]
//        "connections_csv": "conn.csv",              same rows, relative to the config file
//        "random": {"probability": 0.05, "mu": 3.0, "sigma": 0.5, "exponent": 0,
//                   "delay": 0, "allow_self": false, "source_offset": 0, "source_count": -1},
//        "plastic": true, "rule": "2^-2*x1*y0 - 2^-2*y1*x0",
//        "traces": {"x1": {"impulse": 120, "tau": 8}, "y1": {"impulse": 120, "tau": 8}}}
//     ],
//     "monitors": [{"name": "v", "target": "n", "variable": "v", "ids": [0]}],
//     "analysis": {"stdp_window": {"pre": "pre_spikes", "post": "post_spikes",
//                                  "dw": "dw", "max_dt": 40}}
//   }
//
// Exactly one of connections / connections_csv / random may be given per
// synapse group. Unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "loihi/errors.hpp"
#include "loihi/network.hpp"

namespace loihi {

/// The config file could not be read or does not match the schema.
class ConfigError : public Error {
public:
    using Error::Error;
};

struct StdpWindowSpec {
    std::string pre_monitor;
    std::string post_monitor;
    std::string dw_monitor;
    std::int64_t max_dt = 64;
};

struct RunConfig {
    NetworkDef network;
    std::int64_t steps = 0;
    std::optional<StdpWindowSpec> stdp_window;

    /// The configuration after overrides and CSV inclusion, serialised as
    /// canonical JSON (sorted keys).
    std::string resolved_json;

    /// FNV-1a 64 of resolved_json, 16 hex digits.
    std::string hash;
};

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir,
                       std::optional<std::uint64_t> seed_override = std::nullopt,
                       std::optional<std::int64_t> steps_override = std::nullopt);

RunConfig load_config(const std::filesystem::path& path,
                      std::optional<std::uint64_t> seed_override = std::nullopt,
                      std::optional<std::int64_t> steps_override = std::nullopt);

/// Parses `src,dst,mantissa,exponent,delay` rows. Blank lines, lines starting
/// with '#' and a non-numeric header row are skipped.
std::vector<Connection> parse_connection_csv(const std::string& text);

std::string hex64(std::uint64_t value);

}  // namespace loihi
