#include "ctdsim/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <set>
#include <sstream>

namespace ctdsim {

namespace {

const std::set<std::string> kScenarioKeys = {
    "protocol",        "n_nodes",
    "n_senders",       "duration_s",
    "t0_s",            "seed",
    "event.category",  "event.location",
    "sender_cluster_radius_m",
    "trace.file",      "area.width_m",
    "area.height_m",   "speed.min_mps",
    "speed.max_mps",   "radio.range_m",
    "radio.hop_latency_ms",
    "ctd.T_ms",        "ctd.W_ms",
    "ctd.S_min",       "ctd.pa",
    "hello.interval_ms",
    "hello.expiry_intervals",
    "identity.policy", "identity.cell_m",
};

const std::set<std::string> kSweepKeys = {
    "sweep.protocols", "sweep.n_nodes", "sweep.n_senders", "sweep.pa", "sweep.seeds",
};

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw SimError("config key '" + key + "': malformed number '" + value + "'");
    return v;
}

long long to_int(const std::string& key, const std::string& value)
{
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw SimError("config key '" + key + "': malformed integer '" + value + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value)
{
    const long long v = to_int(key, value);
    if (v < 0)
        throw SimError("config key '" + key + "': must be non-negative");
    return static_cast<std::uint64_t>(v);
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(value);
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty())
            out.push_back(tok);
    }
    return out;
}

}  // namespace

ConfigMap parse_flat_config(std::istream& in)
{
    ConfigMap cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw SimError("config line " + std::to_string(line_no) +
                           ": expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw SimError("config line " + std::to_string(line_no) +
                           ": empty key or value");
        if (!cfg.emplace(key, value).second)
            throw SimError("config line " + std::to_string(line_no) + ": duplicate key '" +
                           key + "'");
    }
    return cfg;
}

ScenarioConfig scenario_from_config(const ConfigMap& cfg)
{
    for (const auto& [key, value] : cfg) {
        if (kScenarioKeys.count(key) == 0 && kSweepKeys.count(key) == 0)
            throw SimError("unknown config key '" + key + "'");
    }

    ScenarioConfig out;
    const auto get = [&](const char* key) -> const std::string* {
        auto it = cfg.find(key);
        return it == cfg.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("protocol"))
        out.protocol.protocol = parse_protocol(*v);
    if (const auto* v = get("n_nodes"))
        out.n_nodes = static_cast<std::size_t>(to_u64("n_nodes", *v));
    if (const auto* v = get("n_senders"))
        out.n_senders = static_cast<std::size_t>(to_u64("n_senders", *v));
    if (const auto* v = get("duration_s"))
        out.duration = ms_from_seconds(to_double("duration_s", *v));
    if (const auto* v = get("t0_s"))
        out.t0 = ms_from_seconds(to_double("t0_s", *v));
    if (const auto* v = get("seed"))
        out.seed = to_u64("seed", *v);
    if (const auto* v = get("event.category"))
        out.event_category = parse_category(*v);
    if (const auto* v = get("event.location")) {
        if (*v != "auto") {
            std::istringstream in(*v);
            Position pos;
            in >> pos.x >> pos.y;
            if (in.fail())
                throw SimError("config key 'event.location': expected 'auto' or '<x> <y>'");
            out.event_location = pos;
        }
    }
    if (const auto* v = get("sender_cluster_radius_m"))
        out.sender_cluster_radius_m = to_double("sender_cluster_radius_m", *v);
    if (const auto* v = get("trace.file"))
        out.trace_file = *v;
    if (const auto* v = get("area.width_m"))
        out.gen.width_m = to_double("area.width_m", *v);
    if (const auto* v = get("area.height_m"))
        out.gen.height_m = to_double("area.height_m", *v);
    if (const auto* v = get("speed.min_mps"))
        out.gen.speed_min = to_double("speed.min_mps", *v);
    if (const auto* v = get("speed.max_mps"))
        out.gen.speed_max = to_double("speed.max_mps", *v);
    if (const auto* v = get("radio.range_m"))
        out.radio.range_m = to_double("radio.range_m", *v);
    if (const auto* v = get("radio.hop_latency_ms"))
        out.radio.hop_latency = to_int("radio.hop_latency_ms", *v);
    if (const auto* v = get("ctd.T_ms"))
        out.inter_alert_interval = to_int("ctd.T_ms", *v);
    if (const auto* v = get("ctd.W_ms"))
        out.protocol.assess_window = to_int("ctd.W_ms", *v);
    if (const auto* v = get("ctd.S_min"))
        out.protocol.seen_window = static_cast<SimTime>(to_double("ctd.S_min", *v) * kMinute);
    if (const auto* v = get("ctd.pa"))
        out.protocol.pa = to_double("ctd.pa", *v);
    if (const auto* v = get("hello.interval_ms"))
        out.protocol.hello_interval = to_int("hello.interval_ms", *v);
    if (const auto* v = get("hello.expiry_intervals"))
        out.protocol.hello_expiry_intervals =
            static_cast<int>(to_int("hello.expiry_intervals", *v));
    if (const auto* v = get("identity.policy")) {
        if (*v == "category")
            out.protocol.identity.policy = IdentityPolicy::Category;
        else if (*v == "category_cell")
            out.protocol.identity.policy = IdentityPolicy::CategoryCell;
        else
            throw SimError("config key 'identity.policy': unknown value '" + *v +
                           "' (valid: category, category_cell)");
    }
    if (const auto* v = get("identity.cell_m"))
        out.protocol.identity.cell_size_m = to_double("identity.cell_m", *v);
    return out;
}

SweepSpec sweep_from_config(const ConfigMap& cfg)
{
    SweepSpec spec;
    spec.base = scenario_from_config(cfg);

    const auto get = [&](const char* key) -> const std::string* {
        auto it = cfg.find(key);
        return it == cfg.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("sweep.protocols"))
        for (const auto& tok : split_list(*v))
            spec.protocols.push_back(parse_protocol(tok));
    else
        spec.protocols.push_back(spec.base.protocol.protocol);

    if (const auto* v = get("sweep.n_nodes"))
        for (const auto& tok : split_list(*v))
            spec.n_nodes.push_back(static_cast<std::size_t>(to_u64("sweep.n_nodes", tok)));
    else
        spec.n_nodes.push_back(spec.base.n_nodes);

    if (const auto* v = get("sweep.n_senders"))
        for (const auto& tok : split_list(*v))
            spec.n_senders.push_back(static_cast<std::size_t>(to_u64("sweep.n_senders", tok)));
    else
        spec.n_senders.push_back(spec.base.n_senders);

    if (const auto* v = get("sweep.pa"))
        for (const auto& tok : split_list(*v))
            spec.pa.push_back(to_double("sweep.pa", tok));
    else
        spec.pa.push_back(spec.base.protocol.pa);

    if (const auto* v = get("sweep.seeds"))
        for (const auto& tok : split_list(*v))
            spec.seeds.push_back(to_u64("sweep.seeds", tok));
    else
        spec.seeds.push_back(spec.base.seed);

    if (spec.protocols.empty() || spec.n_nodes.empty() || spec.n_senders.empty() ||
        spec.pa.empty() || spec.seeds.empty())
        throw SimError("sweep: every axis needs at least one value");
    return spec;
}

}  // namespace ctdsim
