#include "rfwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rfwave {
namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

double to_number(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (...) {
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    throw std::invalid_argument("config: key '" + key + "' expects true/false, got '" + v + "'");
}

void store(RawConfig& raw, const std::string& key, const std::string& value) {
    ConfigValue cv;
    std::string v = trim(value);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw std::invalid_argument("config: unterminated list for '" + key + "'");
        cv.is_list = true;
        std::string body = v.substr(1, v.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty()) cv.list.push_back(unquote(item));
        }
        if (cv.list.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
        if (cv.list.size() == 1) {  // single-element list behaves like a scalar
            cv.is_list = false;
            cv.text = cv.list.front();
            cv.list.clear();
        }
    } else {
        cv.text = unquote(v);
    }
    raw[key] = cv;
}

// inline table: nonlinearity = { kind = "cubic", a = 0.3 }
void store_table(RawConfig& raw, const std::string& prefix, const std::string& body) {
    std::stringstream ss(body);
    std::string item;
    // split on commas that are not inside brackets
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : body) {
        if (c == '[') ++depth;
        if (c == ']') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    for (const std::string& part : parts) {
        size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: malformed table entry '" + trim(part) + "'");
        store(raw, prefix + "." + trim(part.substr(0, eq)), trim(part.substr(eq + 1)));
    }
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "operation", "alpha", "theta",
        "nonlinearity.kind", "nonlinearity.a", "nonlinearity.coeffs",
        "nonlinearity.u_minus", "nonlinearity.u_plus",
        "grid.L", "grid.n",
        "solver.dt", "solver.T", "solver.stride", "solver.scheme", "solver.clamp",
        "certify.kind", "certify.delta", "stability.bump",
        "out", "seed", "jobs"};
    return keys;
}

std::string env_name(const std::string& key) {
    std::string name = "RFWAVE_";
    for (char c : key) name += (c == '.') ? '_' : static_cast<char>(std::toupper(c));
    return name;
}

}  // namespace

Operation parse_operation(const std::string& name) {
    if (name == "kernel") return Operation::kernel;
    if (name == "opcheck") return Operation::opcheck;
    if (name == "evolve") return Operation::evolve;
    if (name == "wave") return Operation::wave;
    if (name == "sweep") return Operation::sweep;
    if (name == "certify") return Operation::certify;
    if (name == "stability") return Operation::stability;
    throw std::invalid_argument("config: unknown operation '" + name + "'");
}

std::string operation_name(Operation op) {
    switch (op) {
        case Operation::kernel: return "kernel";
        case Operation::opcheck: return "opcheck";
        case Operation::evolve: return "evolve";
        case Operation::wave: return "wave";
        case Operation::sweep: return "sweep";
        case Operation::certify: return "certify";
        case Operation::stability: return "stability";
    }
    return "?";
}

RawConfig parse_raw_config(const std::string& text) {
    RawConfig raw;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!value.empty() && value.front() == '{') {
            if (value.back() != '}')
                throw std::invalid_argument("config: unterminated table for '" + key + "'");
            store_table(raw, key, value.substr(1, value.size() - 2));
        } else {
            store(raw, key, value);
        }
    }
    // environment overrides for any known key
    for (const std::string& key : known_keys()) {
        if (const char* v = std::getenv(env_name(key).c_str())) store(raw, key, v);
    }
    return raw;
}

std::vector<std::pair<std::string, RawConfig>> expand_sweep(const RawConfig& raw) {
    std::vector<std::pair<std::string, RawConfig>> out;
    out.emplace_back("", raw);
    for (const auto& [key, cv] : raw) {
        if (!cv.is_list) continue;
        std::vector<std::pair<std::string, RawConfig>> next;
        for (const auto& [suffix, cfg] : out) {
            for (const std::string& item : cv.list) {
                RawConfig child = cfg;
                ConfigValue scalar;
                scalar.text = item;
                child[key] = scalar;
                std::string tag = key.substr(key.find('.') == std::string::npos
                                                 ? 0
                                                 : key.find('.') + 1);
                next.emplace_back(suffix + "/" + tag + "=" + item, child);
            }
        }
        out = std::move(next);
    }
    return out;
}

ExperimentConfig build_config(const RawConfig& raw) {
    for (const auto& [key, cv] : raw) {
        if (!known_keys().count(key))
            throw std::invalid_argument("config: unknown key '" + key + "'");
        if (cv.is_list)
            throw std::invalid_argument("config: key '" + key +
                                        "' is a list; expand the sweep first");
    }
    ExperimentConfig c;
    auto get = [&](const char* key) -> const ConfigValue* {
        auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };
    if (auto* v = get("operation")) c.operation = parse_operation(v->text);
    if (auto* v = get("alpha")) c.alpha = to_number("alpha", v->text);
    if (auto* v = get("theta")) c.theta = to_number("theta", v->text);
    if (auto* v = get("nonlinearity.kind")) c.kind = v->text;
    if (auto* v = get("nonlinearity.a")) c.a = to_number("nonlinearity.a", v->text);
    if (auto* v = get("nonlinearity.u_minus")) c.u_minus = to_number("nonlinearity.u_minus", v->text);
    if (auto* v = get("nonlinearity.u_plus")) c.u_plus = to_number("nonlinearity.u_plus", v->text);
    if (auto* v = get("nonlinearity.coeffs")) {
        if (v->is_list)
            for (const std::string& s : v->list) c.coeffs.push_back(to_number("coeffs", s));
        else
            c.coeffs.push_back(to_number("coeffs", v->text));
    }
    if (auto* v = get("grid.L")) c.L = to_number("grid.L", v->text);
    if (auto* v = get("grid.n")) c.n = static_cast<int>(to_number("grid.n", v->text));
    if (auto* v = get("solver.dt")) c.dt = to_number("solver.dt", v->text);
    if (auto* v = get("solver.T")) c.T = to_number("solver.T", v->text);
    if (auto* v = get("solver.stride")) c.snapshot_stride = static_cast<int>(to_number("solver.stride", v->text));
    if (auto* v = get("solver.scheme")) c.scheme = v->text;
    if (auto* v = get("solver.clamp")) c.clamp_reaction = to_bool("solver.clamp", v->text);
    if (auto* v = get("certify.kind")) c.certify_kind = v->text;
    if (auto* v = get("certify.delta")) c.delta = to_number("certify.delta", v->text);
    if (auto* v = get("stability.bump")) c.bump_amplitude = to_number("stability.bump", v->text);
    if (auto* v = get("out")) c.out_dir = v->text;
    if (auto* v = get("seed")) c.seed = static_cast<unsigned long long>(to_number("seed", v->text));
    if (auto* v = get("jobs")) c.jobs = static_cast<int>(to_number("jobs", v->text));

    // admissibility, with the violated inequality spelled out
    if (!(c.alpha > 0.0 && c.alpha <= 2.0))
        throw std::invalid_argument("config: alpha must satisfy 0 < alpha <= 2");
    const double tmax = std::min(c.alpha, 2.0 - c.alpha);
    if (!(std::abs(c.theta) <= tmax + 1e-15)) {
        std::ostringstream os;
        os << "config: theta = " << c.theta << " violates |theta| <= min(alpha, 2-alpha) = "
           << tmax;
        throw std::invalid_argument(os.str());
    }
    if (c.operation != Operation::kernel && c.operation != Operation::opcheck &&
        !(c.alpha > 1.0))
        throw std::invalid_argument(
            "config: the traveling-wave suite needs alpha > 1 (kernel/opcheck allow any admissible alpha)");
    if (c.kind != "cubic" && c.kind != "quintic" && c.kind != "polynomial")
        throw std::invalid_argument("config: nonlinearity.kind must be cubic, quintic or polynomial");
    if (c.scheme != "etd1" && c.scheme != "etd2rk")
        throw std::invalid_argument("config: solver.scheme must be etd1 or etd2rk");
    if (c.certify_kind != "profile" && c.certify_kind != "ramp")
        throw std::invalid_argument("config: certify.kind must be profile or ramp");
    if (!(c.dt > 0.0) || !(c.T >= c.dt)) throw std::invalid_argument("config: need 0 < dt <= T");
    if (c.n < 16) throw std::invalid_argument("config: grid.n must be >= 16");
    if (c.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
    c.reaction();  // validates kind/coeffs/roots
    return c;
}

ExperimentConfig parse_config(const std::string& text) {
    return build_config(parse_raw_config(text));
}

Bistable ExperimentConfig::reaction() const {
    if (kind == "cubic") return make_cubic(a);
    if (kind == "quintic") return make_quintic(a);
    return make_polynomial(coeffs, u_minus, a, u_plus);
}

RFParams ExperimentConfig::params() const { return make_rf_params(alpha, theta); }

SolverConfig ExperimentConfig::solver() const {
    SolverConfig s;
    s.dt = dt;
    s.T = T;
    s.snapshot_stride =
        snapshot_stride > 0 ? snapshot_stride
                            : std::max(1, static_cast<int>(std::llround(0.1 / dt)));
    s.scheme = (scheme == "etd1") ? Scheme::etd1 : Scheme::etd2rk;
    s.clamp_reaction = clamp_reaction;
    return s;
}

double ExperimentConfig::grid_half_width() const {
    if (L > 0.0) return L;
    return (alpha <= 1.3) ? 160.0 : 80.0;
}

}  // namespace rfwave
