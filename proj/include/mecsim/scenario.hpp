#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "app.hpp"
#include "epc.hpp"
#include "orchestrator.hpp"
#include "radio.hpp"

namespace mecsim {

struct ServiceConfig {
    std::string name;
    HostId initial_host = 0;

    friend bool operator==(const ServiceConfig&, const ServiceConfig&) = default;
};

struct UeConfig {
    int ue_id = 1;
    CellId serving_cell = 0;
    std::string service;  // session binding
    MobilityTrace mobility;

    friend bool operator==(const UeConfig&, const UeConfig&) = default;
};

struct RadioConfig {
    PathLossModel path_loss;
    double rsrq_offset_db = 0.0;
    double tick_interval_s = 0.2;  // LTE measurement-report cadence
    Metric metric = Metric::Rsrp;
    double ttt_s = 0.0;

    friend bool operator==(const RadioConfig&, const RadioConfig&) = default;
};

struct OrchestratorConfig {
    StartLatencyModel start_latency = default_start_latency_model();
    double dns_propagation_s = 0.5;
    double termination_grace_s = 0.0;

    friend bool operator==(const OrchestratorConfig&, const OrchestratorConfig&) = default;
};

struct AppConfig {
    double frame_interval_s = 1.0;
    double poll_interval_s = 1.0;
    LatencyModel latency = default_latency_model();

    friend bool operator==(const AppConfig&, const AppConfig&) = default;
};

// A complete declarative run description. Everything that affects results
// lives here (plus the seed); environment variables are never consulted.
struct Scenario {
    std::uint64_t seed = 1;
    double duration_s = 0.0;
    std::vector<BaseStation> base_stations;
    std::vector<MecHost> mec_hosts;
    std::vector<ServiceConfig> services;
    UeConfig ue;
    RadioConfig radio;
    S1Delays epc;
    double migration_cooldown_s = 5.0;
    OrchestratorConfig orchestrator;
    AppConfig app;
    EnergyProfile energy;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ScenarioError : std::runtime_error {
    int line;
    ScenarioError(int line_no, const std::string& msg)
        : std::runtime_error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg),
          line(line_no) {}
};

namespace scenario_detail {

inline bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
    return true;
}

inline double to_double(std::string_view s, int line) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ScenarioError(line, "expected a number, got '" + std::string(s) + "'");
    return v;
}

inline std::int64_t to_int(std::string_view s, int line) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ScenarioError(line, "expected an integer, got '" + std::string(s) + "'");
    return v;
}

inline std::uint64_t to_u64(std::string_view s, int line) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw ScenarioError(line, "expected an unsigned integer, got '" + std::string(s) + "'");
    return v;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline DistSpec to_dist(std::string_view s, int line) {
    auto parts = split_ws(s);
    if (parts.empty()) throw ScenarioError(line, "expected a distribution spec");
    if (parts[0] == "fixed") {
        if (parts.size() != 2) throw ScenarioError(line, "fixed takes one value");
        return fixed_dist(to_double(parts[1], line));
    }
    if (parts[0] == "uniform") {
        if (parts.size() != 3) throw ScenarioError(line, "uniform takes lo hi");
        return uniform_dist(to_double(parts[1], line), to_double(parts[2], line));
    }
    if (parts[0] == "lognormal") {
        if (parts.size() != 3) throw ScenarioError(line, "lognormal takes mean sigma_log");
        return lognormal_dist(to_double(parts[1], line), to_double(parts[2], line));
    }
    throw ScenarioError(line, "unknown distribution kind '" + std::string(parts[0]) +
                                  "' (expected fixed | uniform | lognormal)");
}

// Shortest representation that round-trips exactly.
inline std::string dtos(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

inline std::string dist_str(const DistSpec& d) {
    switch (d.kind) {
        case DistSpec::Kind::Fixed: return "fixed " + dtos(d.a);
        case DistSpec::Kind::Uniform: return "uniform " + dtos(d.a) + " " + dtos(d.b);
        case DistSpec::Kind::Lognormal: return "lognormal " + dtos(d.a) + " " + dtos(d.b);
    }
    return "";
}

}  // namespace scenario_detail

// Cross-field checks; parse errors are caught line-by-line, these are the
// semantic ones.
inline void validate_scenario(const Scenario& s) {
    auto fail = [](const std::string& msg) { throw ScenarioError(0, "scenario: " + msg); };

    if (!(s.duration_s > 0.0)) fail("duration_s must be > 0");
    if (s.base_stations.empty()) fail("at least one [[base_station]] is required");
    if (s.mec_hosts.empty()) fail("at least one [[mec_host]] is required");
    if (s.services.empty()) fail("at least one [[service]] is required");

    std::set<CellId> cells;
    for (const auto& bs : s.base_stations) {
        if (!cells.insert(bs.cell_id).second)
            fail("duplicate cell_id " + std::to_string(bs.cell_id));
        if (bs.ho_margin_db < 0.0) fail("ho_margin_db must be >= 0");
    }
    std::set<HostId> hosts;
    for (const auto& h : s.mec_hosts) {
        if (!hosts.insert(h.host_id).second)
            fail("duplicate host_id " + std::to_string(h.host_id));
        if (!cells.count(h.colocated_cell))
            fail("mec_host " + std::to_string(h.host_id) + " references unknown cell " +
                 std::to_string(h.colocated_cell));
    }
    std::set<std::string> names;
    for (const auto& svc : s.services) {
        if (!scenario_detail::is_identifier(svc.name))
            fail("service name '" + svc.name + "' must be [A-Za-z0-9_-]+");
        if (!names.insert(svc.name).second) fail("duplicate service '" + svc.name + "'");
        if (!hosts.count(svc.initial_host))
            fail("service '" + svc.name + "' references unknown host " +
                 std::to_string(svc.initial_host));
    }

    if (!cells.count(s.ue.serving_cell))
        fail("ue serving_cell " + std::to_string(s.ue.serving_cell) + " is not a configured cell");
    if (!names.count(s.ue.service)) fail("ue service '" + s.ue.service + "' is not configured");
    if (s.ue.mobility.waypoints.empty()) fail("ue needs at least one waypoint");
    for (std::size_t i = 1; i < s.ue.mobility.waypoints.size(); ++i)
        if (!(s.ue.mobility.waypoints[i - 1].t < s.ue.mobility.waypoints[i].t))
            fail("waypoint times must be strictly increasing");

    if (!(s.radio.path_loss.d0_m > 0.0)) fail("d0_m must be > 0");
    if (s.radio.path_loss.shadow_sigma_db < 0.0) fail("shadow_sigma_db must be >= 0");
    if (!(s.radio.tick_interval_s > 0.0)) fail("tick_interval_s must be > 0");
    if (s.radio.ttt_s < 0.0) fail("ttt_s must be >= 0");

    if (s.epc.request_to_command_s < 0.0 || s.epc.command_to_path_switch_s < 0.0 ||
        s.epc.path_switch_to_end_marker_s < 0.0)
        fail("S1 stage delays must be >= 0");
    if (s.migration_cooldown_s < 0.0) fail("cooldown_s must be >= 0");
    if (s.orchestrator.dns_propagation_s < 0.0) fail("dns_propagation_s must be >= 0");
    if (s.orchestrator.termination_grace_s < 0.0) fail("termination_grace_s must be >= 0");
    if (!(s.app.frame_interval_s > 0.0)) fail("frame_interval_s must be > 0");
    if (!(s.app.poll_interval_s > 0.0)) fail("poll_interval_s must be > 0");
    if (s.energy.idle_w < 0.0 || s.energy.encode_w < 0.0 || s.energy.offload_w < 0.0)
        fail("power draws must be >= 0");
    if (s.energy.offload_w > s.energy.encode_w) fail("offload_w must be <= encode_w");

    try {
        s.orchestrator.start_latency.validate();
        s.app.latency.validate();
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
}

// Strict key/value parser: unknown sections or keys are errors, so a typo
// can never silently fall back to a default.
inline Scenario parse_scenario(std::istream& is) {
    using namespace scenario_detail;

    Scenario s;
    std::string section;       // current singular section, or element kind
    bool in_repeated = false;  // current section came from [[...]]
    std::set<std::string> seen_sections;
    bool seen_duration = false;

    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string_view line{raw};
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.remove_suffix(1);
        while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
            line.remove_prefix(1);
        if (line.empty()) continue;

        if (line.front() == '[') {
            bool repeated = line.size() > 1 && line[1] == '[';
            std::string_view name = line;
            name.remove_prefix(repeated ? 2 : 1);
            if (name.size() < (repeated ? 2u : 1u) ||
                name.substr(name.size() - (repeated ? 2 : 1)) != (repeated ? "]]" : "]"))
                throw ScenarioError(line_no, "malformed section header");
            name.remove_suffix(repeated ? 2 : 1);

            if (repeated) {
                if (name == "base_station") s.base_stations.emplace_back();
                else if (name == "mec_host") s.mec_hosts.emplace_back();
                else if (name == "service") s.services.emplace_back();
                else
                    throw ScenarioError(line_no, "unknown repeated section [[" + std::string(name) + "]]");
            } else {
                static const std::set<std::string, std::less<>> kSingular{
                    "ue", "radio", "epc", "migration", "orchestrator", "app", "energy"};
                if (!kSingular.count(name))
                    throw ScenarioError(line_no, "unknown section [" + std::string(name) + "]");
                if (!seen_sections.insert(std::string(name)).second)
                    throw ScenarioError(line_no, "duplicate section [" + std::string(name) + "]");
            }
            section = std::string(name);
            in_repeated = repeated;
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ScenarioError(line_no, "expected 'key = value' or a section header");
        std::string_view key = line.substr(0, eq);
        std::string_view value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
        while (!value.empty() && value.front() == ' ') value.remove_prefix(1);
        if (key.empty()) throw ScenarioError(line_no, "empty key");
        if (value.empty()) throw ScenarioError(line_no, "empty value for '" + std::string(key) + "'");

        auto unknown = [&]() -> ScenarioError {
            std::string where = section.empty() ? "top level" : "[" + section + "]";
            return ScenarioError(line_no,
                                 "unknown key '" + std::string(key) + "' in " + where);
        };

        if (section.empty()) {
            if (key == "seed") s.seed = to_u64(value, line_no);
            else if (key == "duration_s") { s.duration_s = to_double(value, line_no); seen_duration = true; }
            else throw unknown();
        } else if (in_repeated && section == "base_station") {
            auto& bs = s.base_stations.back();
            if (key == "cell_id") bs.cell_id = static_cast<CellId>(to_int(value, line_no));
            else if (key == "position_m") {
                auto parts = split_ws(value);
                if (parts.size() != 2) throw ScenarioError(line_no, "position_m takes x y");
                bs.position = Position{to_double(parts[0], line_no), to_double(parts[1], line_no)};
            }
            else if (key == "tx_power_dbm") bs.tx_power_dbm = to_double(value, line_no);
            else if (key == "ho_margin_db") bs.ho_margin_db = to_double(value, line_no);
            else throw unknown();
        } else if (in_repeated && section == "mec_host") {
            auto& h = s.mec_hosts.back();
            if (key == "host_id") h.host_id = static_cast<HostId>(to_int(value, line_no));
            else if (key == "colocated_cell") h.colocated_cell = static_cast<CellId>(to_int(value, line_no));
            else throw unknown();
        } else if (in_repeated && section == "service") {
            auto& svc = s.services.back();
            if (key == "name") svc.name = std::string(value);
            else if (key == "initial_host") svc.initial_host = static_cast<HostId>(to_int(value, line_no));
            else throw unknown();
        } else if (section == "ue") {
            if (key == "ue_id") s.ue.ue_id = static_cast<int>(to_int(value, line_no));
            else if (key == "serving_cell") s.ue.serving_cell = static_cast<CellId>(to_int(value, line_no));
            else if (key == "service") s.ue.service = std::string(value);
            else if (key == "waypoint") {
                auto parts = split_ws(value);
                if (parts.size() != 3) throw ScenarioError(line_no, "waypoint takes t x y");
                s.ue.mobility.waypoints.push_back(
                    {SimTime{to_double(parts[0], line_no)},
                     Position{to_double(parts[1], line_no), to_double(parts[2], line_no)}});
            }
            else throw unknown();
        } else if (section == "radio") {
            if (key == "pl0_db") s.radio.path_loss.pl0_db = to_double(value, line_no);
            else if (key == "exponent") s.radio.path_loss.exponent = to_double(value, line_no);
            else if (key == "d0_m") s.radio.path_loss.d0_m = to_double(value, line_no);
            else if (key == "shadow_sigma_db") s.radio.path_loss.shadow_sigma_db = to_double(value, line_no);
            else if (key == "rsrq_offset_db") s.radio.rsrq_offset_db = to_double(value, line_no);
            else if (key == "tick_interval_s") s.radio.tick_interval_s = to_double(value, line_no);
            else if (key == "ttt_s") s.radio.ttt_s = to_double(value, line_no);
            else if (key == "metric") {
                if (value == "rsrp") s.radio.metric = Metric::Rsrp;
                else if (value == "rsrq") s.radio.metric = Metric::Rsrq;
                else throw ScenarioError(line_no, "metric must be rsrp or rsrq");
            }
            else throw unknown();
        } else if (section == "epc") {
            if (key == "request_to_command_s") s.epc.request_to_command_s = to_double(value, line_no);
            else if (key == "command_to_path_switch_s") s.epc.command_to_path_switch_s = to_double(value, line_no);
            else if (key == "path_switch_to_end_marker_s") s.epc.path_switch_to_end_marker_s = to_double(value, line_no);
            else throw unknown();
        } else if (section == "migration") {
            if (key == "cooldown_s") s.migration_cooldown_s = to_double(value, line_no);
            else throw unknown();
        } else if (section == "orchestrator") {
            if (key == "scheduler_delay") s.orchestrator.start_latency.scheduler_delay = to_dist(value, line_no);
            else if (key == "fabric_delay") s.orchestrator.start_latency.fabric_delay = to_dist(value, line_no);
            else if (key == "container_start_delay") s.orchestrator.start_latency.container_start_delay = to_dist(value, line_no);
            else if (key == "app_init_delay") s.orchestrator.start_latency.app_init_delay = to_dist(value, line_no);
            else if (key == "dns_propagation_s") s.orchestrator.dns_propagation_s = to_double(value, line_no);
            else if (key == "termination_grace_s") s.orchestrator.termination_grace_s = to_double(value, line_no);
            else throw unknown();
        } else if (section == "app") {
            if (key == "frame_interval_s") s.app.frame_interval_s = to_double(value, line_no);
            else if (key == "poll_interval_s") s.app.poll_interval_s = to_double(value, line_no);
            else if (key == "uplink_delay") s.app.latency.uplink_delay = to_dist(value, line_no);
            else if (key == "processing_delay") s.app.latency.processing_delay = to_dist(value, line_no);
            else if (key == "downlink_delay") s.app.latency.downlink_delay = to_dist(value, line_no);
            else if (key == "e2e_clip_min_s") s.app.latency.clip_min_s = to_double(value, line_no);
            else if (key == "e2e_clip_max_s") s.app.latency.clip_max_s = to_double(value, line_no);
            else throw unknown();
        } else if (section == "energy") {
            if (key == "idle_w") s.energy.idle_w = to_double(value, line_no);
            else if (key == "encode_w") s.energy.encode_w = to_double(value, line_no);
            else if (key == "offload_w") s.energy.offload_w = to_double(value, line_no);
            else throw unknown();
        } else {
            throw unknown();
        }
    }

    if (!seen_duration) throw ScenarioError(0, "scenario: duration_s is required");
    if (!seen_sections.count("ue")) throw ScenarioError(0, "scenario: [ue] section is required");
    validate_scenario(s);
    return s;
}

inline Scenario parse_scenario(const std::string& text) {
    std::istringstream iss(text);
    return parse_scenario(iss);
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ScenarioError(0, "cannot open scenario file '" + path + "'");
    return parse_scenario(f);
}

// Canonical serialization; load(serialize(s)) == s.
inline std::string serialize_scenario(const Scenario& s) {
    using scenario_detail::dist_str;
    using scenario_detail::dtos;
    std::ostringstream o;
    o << "seed = " << s.seed << "\n";
    o << "duration_s = " << dtos(s.duration_s) << "\n";
    for (const auto& bs : s.base_stations) {
        o << "\n[[base_station]]\n";
        o << "cell_id = " << bs.cell_id << "\n";
        o << "position_m = " << dtos(bs.position.x) << " " << dtos(bs.position.y) << "\n";
        o << "tx_power_dbm = " << dtos(bs.tx_power_dbm) << "\n";
        o << "ho_margin_db = " << dtos(bs.ho_margin_db) << "\n";
    }
    for (const auto& h : s.mec_hosts) {
        o << "\n[[mec_host]]\n";
        o << "host_id = " << h.host_id << "\n";
        o << "colocated_cell = " << h.colocated_cell << "\n";
    }
    for (const auto& svc : s.services) {
        o << "\n[[service]]\n";
        o << "name = " << svc.name << "\n";
        o << "initial_host = " << svc.initial_host << "\n";
    }
    o << "\n[ue]\n";
    o << "ue_id = " << s.ue.ue_id << "\n";
    o << "serving_cell = " << s.ue.serving_cell << "\n";
    o << "service = " << s.ue.service << "\n";
    for (const auto& wp : s.ue.mobility.waypoints)
        o << "waypoint = " << dtos(wp.t.secs) << " " << dtos(wp.pos.x) << " " << dtos(wp.pos.y)
          << "\n";
    o << "\n[radio]\n";
    o << "pl0_db = " << dtos(s.radio.path_loss.pl0_db) << "\n";
    o << "exponent = " << dtos(s.radio.path_loss.exponent) << "\n";
    o << "d0_m = " << dtos(s.radio.path_loss.d0_m) << "\n";
    o << "shadow_sigma_db = " << dtos(s.radio.path_loss.shadow_sigma_db) << "\n";
    o << "rsrq_offset_db = " << dtos(s.radio.rsrq_offset_db) << "\n";
    o << "tick_interval_s = " << dtos(s.radio.tick_interval_s) << "\n";
    o << "metric = " << (s.radio.metric == Metric::Rsrp ? "rsrp" : "rsrq") << "\n";
    o << "ttt_s = " << dtos(s.radio.ttt_s) << "\n";
    o << "\n[epc]\n";
    o << "request_to_command_s = " << dtos(s.epc.request_to_command_s) << "\n";
    o << "command_to_path_switch_s = " << dtos(s.epc.command_to_path_switch_s) << "\n";
    o << "path_switch_to_end_marker_s = " << dtos(s.epc.path_switch_to_end_marker_s) << "\n";
    o << "\n[migration]\n";
    o << "cooldown_s = " << dtos(s.migration_cooldown_s) << "\n";
    o << "\n[orchestrator]\n";
    o << "scheduler_delay = " << dist_str(s.orchestrator.start_latency.scheduler_delay) << "\n";
    o << "fabric_delay = " << dist_str(s.orchestrator.start_latency.fabric_delay) << "\n";
    o << "container_start_delay = " << dist_str(s.orchestrator.start_latency.container_start_delay)
      << "\n";
    o << "app_init_delay = " << dist_str(s.orchestrator.start_latency.app_init_delay) << "\n";
    o << "dns_propagation_s = " << dtos(s.orchestrator.dns_propagation_s) << "\n";
    o << "termination_grace_s = " << dtos(s.orchestrator.termination_grace_s) << "\n";
    o << "\n[app]\n";
    o << "frame_interval_s = " << dtos(s.app.frame_interval_s) << "\n";
    o << "poll_interval_s = " << dtos(s.app.poll_interval_s) << "\n";
    o << "uplink_delay = " << dist_str(s.app.latency.uplink_delay) << "\n";
    o << "processing_delay = " << dist_str(s.app.latency.processing_delay) << "\n";
    o << "downlink_delay = " << dist_str(s.app.latency.downlink_delay) << "\n";
    o << "e2e_clip_min_s = " << dtos(s.app.latency.clip_min_s) << "\n";
    o << "e2e_clip_max_s = " << dtos(s.app.latency.clip_max_s) << "\n";
    o << "\n[energy]\n";
    o << "idle_w = " << dtos(s.energy.idle_w) << "\n";
    o << "encode_w = " << dtos(s.energy.encode_w) << "\n";
    o << "offload_w = " << dtos(s.energy.offload_w) << "\n";
    return o.str();
}

}  // namespace mecsim
