#include "loihi/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace loihi {

namespace {

using nlohmann::json;

void require_object(const json& node, const std::string& where) {
    if (!node.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
}

void check_keys(const json& node, const std::string& where, std::initializer_list<const char*> allowed) {
    require_object(node, where);
    const std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto& [key, value] : node.items()) {
        if (!known.count(key)) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get(const json& node, const char* key, const std::string& where) {
    if (!node.contains(key)) {
        throw ConfigError(where + ": missing required key '" + key + "'");
    }
    try {
        return node.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": key '" + key + "' has the wrong type");
    }
}

template <typename T>
T get_or(const json& node, const char* key, T fallback, const std::string& where) {
    if (!node.contains(key)) {
        return fallback;
    }
    return get<T>(node, key, where);
}

std::int64_t get_int(const json& node, const char* key, const std::string& where) {
    const json& v = node.contains(key) ? node.at(key) : json();
    if (!v.is_number_integer()) {
        throw ConfigError(where + ": key '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

std::int64_t get_int_or(const json& node, const char* key, std::int64_t fallback, const std::string& where) {
    return node.contains(key) ? get_int(node, key, where) : fallback;
}

double get_number_or(const json& node, const char* key, double fallback, const std::string& where) {
    if (!node.contains(key)) return fallback;
    if (!node.at(key).is_number()) {
        throw ConfigError(where + ": key '" + key + "' must be a number");
    }
    return node.at(key).get<double>();
}

// Range errors from the library become config errors naming the location.
template <typename Fn>
auto in_context(const std::string& where, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

Connection connection_from_row(const json& row, const std::string& where) {
    if (!row.is_array() || row.size() != 5) {
        throw ConfigError(where + ": connection rows must be [src, dst, mantissa, exponent, delay]");
    }
    for (const auto& v : row) {
        if (!v.is_number_integer()) {
            throw ConfigError(where + ": connection fields must be integers");
        }
    }
    return Connection{row[0].get<std::int64_t>(), row[1].get<std::int64_t>(), row[2].get<std::int64_t>(),
                      row[3].get<int>(), row[4].get<std::int64_t>()};
}

json connections_to_json(const std::vector<Connection>& connections) {
    json rows = json::array();
    for (const auto& c : connections) {
        rows.push_back(json::array({c.source, c.target, c.mantissa, c.exponent, c.delay}));
    }
    return rows;
}

TraceParams trace_from_json(const json& node, const std::string& where) {
    check_keys(node, where, {"impulse", "tau"});
    TraceParams p;
    p.impulse = get_int_or(node, "impulse", 0, where);
    p.tau = get_int_or(node, "tau", 1, where);
    return p;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

bool parse_i64(std::string_view text, std::int64_t& out) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) {
        text.remove_suffix(1);
    }
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

std::string hex64(std::uint64_t value) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::vector<Connection> parse_connection_csv(const std::string& text) {
    std::vector<Connection> out;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') {
            continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        std::int64_t values[5] = {};
        bool numeric = fields.size() == 5;
        for (std::size_t i = 0; numeric && i < 5; ++i) {
            numeric = parse_i64(fields[i], values[i]);
        }
        if (!numeric) {
            std::int64_t ignored = 0;
            const bool header = first_data_line && fields.size() == 5 && !parse_i64(fields[0], ignored);
            first_data_line = false;
            if (header) continue;
            throw ConfigError("connection CSV line " + std::to_string(line_no) +
                              ": expected five integers src,dst,mantissa,exponent,delay");
        }
        first_data_line = false;
        if (values[3] < std::numeric_limits<int>::min() || values[3] > std::numeric_limits<int>::max()) {
            throw ConfigError("connection CSV line " + std::to_string(line_no) + ": exponent does not fit an int");
        }
        out.push_back(Connection{values[0], values[1], values[2], static_cast<int>(values[3]), values[4]});
    }
    return out;
}

RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir,
                       std::optional<std::uint64_t> seed_override,
                       std::optional<std::int64_t> steps_override) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc, "config",
               {"seed", "steps", "neuron_groups", "generators", "synapses", "monitors", "analysis", "comment"});

    RunConfig out;
    NetworkDef& net = out.network;

    if (seed_override) {
        net.seed = *seed_override;
    } else if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            throw ConfigError("config: 'seed' must be a nonnegative integer");
        }
        if (doc["seed"].is_number_integer() && !doc["seed"].is_number_unsigned() &&
            doc["seed"].get<std::int64_t>() < 0) {
            throw ConfigError("config: 'seed' must be a nonnegative integer");
        }
        net.seed = doc["seed"].get<std::uint64_t>();
    }
    out.steps = steps_override ? *steps_override : get_int_or(doc, "steps", 0, "config");
    if (out.steps < 0) {
        throw ConfigError("config: 'steps' must be >= 0");
    }

    json resolved = doc;
    resolved["seed"] = net.seed;
    resolved["steps"] = out.steps;

    for (const auto& g : doc.value("neuron_groups", json::array())) {
        const std::string where = "neuron group '" + g.value("name", std::string("?")) + "'";
        check_keys(g, where,
                   {"name", "size", "current_decay", "voltage_decay", "threshold_mantissa", "bias", "refractory"});
        NeuronGroupDef def;
        def.name = get<std::string>(g, "name", where);
        def.size = get_int(g, "size", where);
        in_context(where, [&] {
            def.params.current_decay = DecayFactor(get_int_or(g, "current_decay", 0, where));
            def.params.voltage_decay = DecayFactor(get_int_or(g, "voltage_decay", 0, where));
            return 0;
        });
        def.params.threshold_mantissa = get_int_or(g, "threshold_mantissa", 0, where);
        def.params.bias = get_int_or(g, "bias", 0, where);
        def.params.refractory = get_int_or(g, "refractory", 0, where);
        net.groups.push_back(std::move(def));
    }

    for (const auto& g : doc.value("generators", json::array())) {
        const std::string where = "generator '" + g.value("name", std::string("?")) + "'";
        check_keys(g, where, {"name", "size", "rate", "spikes"});
        GeneratorGroupDef def;
        def.name = get<std::string>(g, "name", where);
        def.size = get_int(g, "size", where);
        const bool has_rate = g.contains("rate");
        const bool has_spikes = g.contains("spikes");
        if (has_rate == has_spikes) {
            throw ConfigError(where + ": give exactly one of 'rate' or 'spikes'");
        }
        if (has_rate) {
            def.kind = GeneratorGroupDef::Kind::bernoulli;
            def.rate = get_number_or(g, "rate", 0.0, where);
        } else {
            def.kind = GeneratorGroupDef::Kind::explicit_spikes;
            if (!g["spikes"].is_array()) throw ConfigError(where + ": 'spikes' must be an array");
            for (const auto& s : g["spikes"]) {
                if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
                    throw ConfigError(where + ": spikes must be [step, id] integer pairs");
                }
                def.spikes.push_back(GeneratorSpike{s[0].get<std::int64_t>(), s[1].get<std::int64_t>()});
            }
        }
        net.generators.push_back(std::move(def));
    }

    auto size_of = [&](const std::string& name) -> std::optional<std::int64_t> {
        for (const auto& g : net.groups) if (g.name == name) return g.size;
        for (const auto& g : net.generators) if (g.name == name) return g.size;
        return std::nullopt;
    };

    const json synapse_list = doc.value("synapses", json::array());
    for (std::size_t i = 0; i < synapse_list.size(); ++i) {
        const json& s = synapse_list[i];
        const std::string where = "synapse group '" + s.value("name", std::string("?")) + "'";
        check_keys(s, where,
                   {"name", "source", "target", "sign_mode", "weight_bits", "connections", "connections_csv",
                    "random", "plastic", "rule", "traces"});
        SynapseGroupDef def;
        def.name = get<std::string>(s, "name", where);
        def.source = get<std::string>(s, "source", where);
        def.target = get<std::string>(s, "target", where);
        def.weights.weight_bits = static_cast<int>(get_int_or(s, "weight_bits", 8, where));
        def.weights.sign_mode = in_context(where, [&] {
            return parse_sign_mode(get_or<std::string>(s, "sign_mode", "excitatory", where));
        });
        def.plastic = get_or<bool>(s, "plastic", false, where);

        const int sources = (s.contains("connections") ? 1 : 0) + (s.contains("connections_csv") ? 1 : 0) +
                            (s.contains("random") ? 1 : 0);
        if (sources > 1) {
            throw ConfigError(where + ": give at most one of 'connections', 'connections_csv', 'random'");
        }
        if (s.contains("connections")) {
            if (!s["connections"].is_array()) throw ConfigError(where + ": 'connections' must be an array");
            for (const auto& row : s["connections"]) def.connections.push_back(connection_from_row(row, where));
        } else if (s.contains("connections_csv")) {
            const auto file = base_dir / get<std::string>(s, "connections_csv", where);
            def.connections = in_context(where, [&] { return parse_connection_csv(read_file(file)); });
            resolved["synapses"][i].erase("connections_csv");
            resolved["synapses"][i]["connections"] = connections_to_json(def.connections);
        } else if (s.contains("random")) {
            const json& r = s["random"];
            const std::string rwhere = where + " random";
            check_keys(r, rwhere,
                       {"probability", "mu", "sigma", "exponent", "delay", "allow_self", "source_offset",
                        "source_count"});
            RandomConnectivity spec;
            spec.probability = get_number_or(r, "probability", 0.0, rwhere);
            spec.lognormal_mu = get_number_or(r, "mu", 0.0, rwhere);
            spec.lognormal_sigma = get_number_or(r, "sigma", 0.0, rwhere);
            spec.exponent = static_cast<int>(get_int_or(r, "exponent", 0, rwhere));
            spec.delay = get_int_or(r, "delay", 0, rwhere);
            spec.allow_self = get_or<bool>(r, "allow_self", true, rwhere);
            spec.source_offset = get_int_or(r, "source_offset", 0, rwhere);
            spec.source_count = get_int_or(r, "source_count", -1, rwhere);
            const auto src_size = size_of(def.source);
            const auto dst_size = size_of(def.target);
            if (!src_size || !dst_size) {
                throw ConfigError(where + ": random connectivity needs known source and target groups");
            }
            RandomStream rng = RandomStream::substream(net.seed, i, "connectivity");
            def.connections = in_context(where, [&] {
                return random_connections(spec, *src_size, *dst_size, def.weights, def.source == def.target, rng);
            });
        }

        if (s.contains("rule")) {
            def.rule = in_context(where, [&] { return parse_rule(get<std::string>(s, "rule", where)); });
        }
        if (s.contains("traces")) {
            const json& t = s["traces"];
            const std::string twhere = where + " traces";
            check_keys(t, twhere, {"x1", "x2", "y1", "y2", "y3"});
            if (t.contains("x1")) def.traces.x1 = trace_from_json(t["x1"], twhere + ".x1");
            if (t.contains("x2")) def.traces.x2 = trace_from_json(t["x2"], twhere + ".x2");
            if (t.contains("y1")) def.traces.y1 = trace_from_json(t["y1"], twhere + ".y1");
            if (t.contains("y2")) def.traces.y2 = trace_from_json(t["y2"], twhere + ".y2");
            if (t.contains("y3")) def.traces.y3 = trace_from_json(t["y3"], twhere + ".y3");
        }
        net.synapses.push_back(std::move(def));
    }

    for (const auto& m : doc.value("monitors", json::array())) {
        const std::string where = "monitor '" + m.value("name", std::string("?")) + "'";
        check_keys(m, where, {"name", "target", "variable", "ids"});
        MonitorDef def;
        def.name = get<std::string>(m, "name", where);
        def.target = get<std::string>(m, "target", where);
        const auto variable_name = get<std::string>(m, "variable", where);
        const auto variable = parse_monitor_variable(variable_name);
        if (!variable) {
            throw ConfigError(where + ": unknown variable '" + variable_name +
                              "' (expected I, v, spikes, w, J, x1, x2, y1, y2, y3 or dw)");
        }
        def.variable = *variable;
        if (m.contains("ids")) {
            def.ids = get<std::vector<std::int64_t>>(m, "ids", where);
        }
        net.monitors.push_back(std::move(def));
    }

    if (doc.contains("analysis")) {
        const json& a = doc["analysis"];
        check_keys(a, "analysis", {"stdp_window"});
        if (a.contains("stdp_window")) {
            const json& w = a["stdp_window"];
            const std::string where = "analysis.stdp_window";
            check_keys(w, where, {"pre", "post", "dw", "max_dt"});
            StdpWindowSpec spec;
            spec.pre_monitor = get<std::string>(w, "pre", where);
            spec.post_monitor = get<std::string>(w, "post", where);
            spec.dw_monitor = get<std::string>(w, "dw", where);
            spec.max_dt = get_int_or(w, "max_dt", 64, where);
            out.stdp_window = spec;
        }
    }

    out.resolved_json = resolved.dump(2);
    out.hash = hex64(fnv1a64(out.resolved_json));
    return out;
}

RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override,
                      std::optional<std::int64_t> steps_override) {
    return parse_config(read_file(path), path.parent_path(), seed_override, steps_override);
}

}  // namespace loihi
