#include "thzsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "thzsim/errors.hpp"

namespace thzsim {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // round-trip exact, but prefer the shortest representation that survives
    for (int prec = 1; prec < 17; ++prec) {
        char s[64];
        std::snprintf(s, sizeof(s), "%.*g", prec, v);
        if (std::strtod(s, nullptr) == v) return s;
    }
    return buf;
}

struct Line {
    int number;
    std::string text;
};

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const Line& ln, const std::string& v) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        if (!std::isfinite(x)) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(ln.number, "expected a number, got '" + v + "'");
    }
}

std::int64_t parse_int(const Line& ln, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::int64_t x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(ln.number, "expected an integer, got '" + v + "'");
    }
}

std::uint64_t parse_uint(const Line& ln, const std::string& v) {
    try {
        std::size_t pos = 0;
        std::uint64_t x = std::stoull(v, &pos);
        if (pos != v.size() || v[0] == '-') throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        fail(ln.number, "expected a non-negative integer, got '" + v + "'");
    }
}

std::vector<double> parse_doubles(const Line& ln, const std::string& v, std::size_t n) {
    std::istringstream is(v);
    std::vector<double> out;
    std::string tok;
    while (is >> tok) out.push_back(parse_double(ln, tok));
    if (out.size() != n) {
        fail(ln.number, "expected " + std::to_string(n) + " numbers, got '" + v + "'");
    }
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
    auto machines_eq = [&] {
        if (machines.size() != o.machines.size()) return false;
        for (std::size_t i = 0; i < machines.size(); ++i) {
            if (machines[i].cx != o.machines[i].cx || machines[i].cy != o.machines[i].cy ||
                machines[i].side != o.machines[i].side) {
                return false;
            }
        }
        return true;
    };
    const RadioParams& r = radio;
    const RadioParams& q = o.radio;
    const MacParams& m = mac;
    const MacParams& n = o.mac;
    return plant_dims == o.plant_dims && machines_eq() && n_ues == o.n_ues &&
           dynamic == o.dynamic && t_move_s == o.t_move_s && p_move == o.p_move &&
           r.fc_ghz == q.fc_ghz && r.bandwidth_hz == q.bandwidth_hz &&
           r.modulation_order == q.modulation_order && r.ptx_ue_dbm == q.ptx_ue_dbm &&
           r.ptx_bs_dbm == q.ptx_bs_dbm && r.eta_ue_db == q.eta_ue_db &&
           r.eta_bs_db == q.eta_bs_db && r.gain_ue_db == q.gain_ue_db &&
           r.gain_bs_db == q.gain_bs_db && r.nf_ue_db == q.nf_ue_db &&
           r.nf_bs_db == q.nf_bs_db && r.temperature_k == q.temperature_k &&
           r.snr_threshold_db == q.snr_threshold_db &&
           m.contention_base == n.contention_base && m.max_retries == n.max_retries &&
           m.max_hops == n.max_hops && m.data_bytes == n.data_bytes &&
           m.ack_bytes == n.ack_bytes && m.queue_capacity == n.queue_capacity &&
           m.neighbor_ttl == n.neighbor_ttl && m.backoff_slot == n.backoff_slot &&
           protocol == o.protocol && seed_base == o.seed_base && runs == o.runs &&
           t_sim_s == o.t_sim_s;
}

const char* routing_mode_name(RoutingMode m) {
    switch (m) {
        case RoutingMode::Ualoha: return "ualoha";
        case RoutingMode::TableLess: return "tl";
        case RoutingMode::TableBased: return "tb";
    }
    return "?";
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool machines_reset = false;
    bool protocol_set = false;

    std::istringstream is(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const Line ln{lineno, line};

        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "scenario" && section != "radio" && section != "mac" &&
                section != "run") {
                fail(lineno, "unknown section [" + section + "]");
            }
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (section.empty()) fail(lineno, "key '" + key + "' outside any section");
        if (val.empty()) fail(lineno, "empty value for key '" + key + "'");

        if (section == "scenario") {
            if (key == "plant_dims") {
                auto v = parse_doubles(ln, val, 3);
                cfg.plant_dims = {v[0], v[1], v[2]};
            } else if (key == "machine") {
                if (!machines_reset) {
                    cfg.machines.clear();
                    machines_reset = true;
                }
                auto v = parse_doubles(ln, val, 3);
                cfg.machines.push_back({v[0], v[1], v[2]});
            } else if (key == "n_ues") {
                cfg.n_ues = static_cast<int>(parse_int(ln, val));
                if (cfg.n_ues < 2 || cfg.n_ues % 2 != 0) {
                    fail(lineno, "n_ues must be even and >= 2");
                }
            } else if (key == "mobility") {
                if (val == "static") cfg.dynamic = false;
                else if (val == "dynamic") cfg.dynamic = true;
                else fail(lineno, "mobility must be 'static' or 'dynamic'");
            } else if (key == "t_move_s") {
                cfg.t_move_s = parse_double(ln, val);
                if (cfg.t_move_s < 0) fail(lineno, "t_move_s must be >= 0");
            } else if (key == "p_move") {
                cfg.p_move = parse_double(ln, val);
                if (cfg.p_move < 0 || cfg.p_move > 1) fail(lineno, "p_move must be in [0, 1]");
            } else {
                fail(lineno, "unknown key '" + key + "' in [scenario]");
            }
        } else if (section == "radio") {
            RadioParams& r = cfg.radio;
            if (key == "fc_ghz") r.fc_ghz = parse_double(ln, val);
            else if (key == "bandwidth_hz") r.bandwidth_hz = parse_double(ln, val);
            else if (key == "modulation_order") {
                r.modulation_order = static_cast<int>(parse_int(ln, val));
                const int m = r.modulation_order;
                if (m < 2 || (m & (m - 1)) != 0) {
                    fail(lineno, "modulation_order must be a power of two >= 2");
                }
            } else if (key == "ptx_ue_dbm") r.ptx_ue_dbm = parse_double(ln, val);
            else if (key == "ptx_bs_dbm") r.ptx_bs_dbm = parse_double(ln, val);
            else if (key == "eta_ue_db") r.eta_ue_db = parse_double(ln, val);
            else if (key == "eta_bs_db") r.eta_bs_db = parse_double(ln, val);
            else if (key == "gain_ue_db") r.gain_ue_db = parse_double(ln, val);
            else if (key == "gain_bs_db") r.gain_bs_db = parse_double(ln, val);
            else if (key == "nf_ue_db") r.nf_ue_db = parse_double(ln, val);
            else if (key == "nf_bs_db") r.nf_bs_db = parse_double(ln, val);
            else if (key == "temperature_k") r.temperature_k = parse_double(ln, val);
            else if (key == "snr_threshold_db") r.snr_threshold_db = parse_double(ln, val);
            else fail(lineno, "unknown key '" + key + "' in [radio]");
            if (r.bandwidth_hz <= 0) fail(lineno, "bandwidth_hz must be > 0");
        } else if (section == "mac") {
            MacParams& m = cfg.mac;
            auto positive = [&](const char* what, std::int64_t v) {
                if (v <= 0) fail(lineno, std::string(what) + " must be > 0");
                return static_cast<int>(v);
            };
            if (key == "contention_base") m.contention_base = positive(key.c_str(), parse_int(ln, val));
            else if (key == "max_retries") m.max_retries = positive(key.c_str(), parse_int(ln, val));
            else if (key == "max_hops") m.max_hops = positive(key.c_str(), parse_int(ln, val));
            else if (key == "data_bytes") m.data_bytes = positive(key.c_str(), parse_int(ln, val));
            else if (key == "ack_bytes") m.ack_bytes = positive(key.c_str(), parse_int(ln, val));
            else if (key == "queue_capacity") m.queue_capacity = positive(key.c_str(), parse_int(ln, val));
            else if (key == "neighbor_ttl") m.neighbor_ttl = positive(key.c_str(), parse_int(ln, val));
            else if (key == "backoff_slot_ps") m.backoff_slot = positive(key.c_str(), parse_int(ln, val));
            else fail(lineno, "unknown key '" + key + "' in [mac]");
        } else {  // [run]
            if (key == "protocol") {
                if (val == "ualoha") cfg.protocol = RoutingMode::Ualoha;
                else if (val == "tl") cfg.protocol = RoutingMode::TableLess;
                else if (val == "tb") cfg.protocol = RoutingMode::TableBased;
                else fail(lineno, "unknown protocol '" + val + "' (expected ualoha, tl, or tb)");
                protocol_set = true;
            } else if (key == "seed_base") {
                cfg.seed_base = parse_uint(ln, val);
            } else if (key == "runs") {
                cfg.runs = static_cast<int>(parse_int(ln, val));
                if (cfg.runs < 1) fail(lineno, "runs must be >= 1");
            } else if (key == "t_sim_s") {
                cfg.t_sim_s = parse_double(ln, val);
                if (cfg.t_sim_s <= 0) fail(lineno, "t_sim_s must be > 0");
            } else {
                fail(lineno, "unknown key '" + key + "' in [run]");
            }
        }
    }

    if (!protocol_set) throw ConfigError("missing mandatory key 'protocol' in [run]");
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return parse_config(os.str());
}

std::string print_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "[scenario]\n";
    os << "plant_dims = " << fmt_double(cfg.plant_dims.x) << ' '
       << fmt_double(cfg.plant_dims.y) << ' ' << fmt_double(cfg.plant_dims.z) << '\n';
    for (const MachineSpec& m : cfg.machines) {
        os << "machine = " << fmt_double(m.cx) << ' ' << fmt_double(m.cy) << ' '
           << fmt_double(m.side) << '\n';
    }
    os << "n_ues = " << cfg.n_ues << '\n';
    os << "mobility = " << (cfg.dynamic ? "dynamic" : "static") << '\n';
    os << "t_move_s = " << fmt_double(cfg.t_move_s) << '\n';
    os << "p_move = " << fmt_double(cfg.p_move) << '\n';
    os << "\n[radio]\n";
    const RadioParams& r = cfg.radio;
    os << "fc_ghz = " << fmt_double(r.fc_ghz) << '\n';
    os << "bandwidth_hz = " << fmt_double(r.bandwidth_hz) << '\n';
    os << "modulation_order = " << r.modulation_order << '\n';
    os << "ptx_ue_dbm = " << fmt_double(r.ptx_ue_dbm) << '\n';
    os << "ptx_bs_dbm = " << fmt_double(r.ptx_bs_dbm) << '\n';
    os << "eta_ue_db = " << fmt_double(r.eta_ue_db) << '\n';
    os << "eta_bs_db = " << fmt_double(r.eta_bs_db) << '\n';
    os << "gain_ue_db = " << fmt_double(r.gain_ue_db) << '\n';
    os << "gain_bs_db = " << fmt_double(r.gain_bs_db) << '\n';
    os << "nf_ue_db = " << fmt_double(r.nf_ue_db) << '\n';
    os << "nf_bs_db = " << fmt_double(r.nf_bs_db) << '\n';
    os << "temperature_k = " << fmt_double(r.temperature_k) << '\n';
    os << "snr_threshold_db = " << fmt_double(r.snr_threshold_db) << '\n';
    os << "\n[mac]\n";
    const MacParams& m = cfg.mac;
    os << "contention_base = " << m.contention_base << '\n';
    os << "max_retries = " << m.max_retries << '\n';
    os << "max_hops = " << m.max_hops << '\n';
    os << "data_bytes = " << m.data_bytes << '\n';
    os << "ack_bytes = " << m.ack_bytes << '\n';
    os << "queue_capacity = " << m.queue_capacity << '\n';
    os << "neighbor_ttl = " << m.neighbor_ttl << '\n';
    os << "backoff_slot_ps = " << m.backoff_slot << '\n';
    os << "\n[run]\n";
    os << "protocol = " << routing_mode_name(cfg.protocol) << '\n';
    os << "seed_base = " << cfg.seed_base << '\n';
    os << "runs = " << cfg.runs << '\n';
    os << "t_sim_s = " << fmt_double(cfg.t_sim_s) << '\n';
    return os.str();
}

SimConfig to_sim_config(const RunConfig& cfg, std::uint64_t seed) {
    SimConfig sc;
    sc.plant = build_plant(cfg.plant_dims, cfg.machines);
    sc.radio = cfg.radio;
    sc.mac = cfg.mac;
    sc.mode = cfg.protocol;
    sc.n_ues = cfg.n_ues;
    sc.dynamic = cfg.dynamic;
    sc.p_move = cfg.p_move;
    sc.t_sim = seconds_to_ticks(cfg.t_sim_s);
    sc.t_move = seconds_to_ticks(cfg.t_move_s);
    sc.seed = seed;
    return sc;
}

}  // namespace thzsim
