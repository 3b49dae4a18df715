#include "marrm/config.hpp"

#include "marrm/csv.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace marrm::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool is_index(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool known_key(const std::string& key) {
    static const std::set<std::string> exact = {
        "seed",
        "market.d",
        "market.T",
        "market.r",
        "loss.mu",
        "loss.sigma",
        "criterion.kind",
        "criterion.level",
        "grid",
        "mc.n_paths",
        "opt.max_iter",
        "opt.x_tol",
        "opt.f_tol",
        "opt.restarts",
        "opt.pi_bounds",
        "sweep.include_marm",
        "sensitivity.param",
        "empirical.calib_start",
        "empirical.calib_end",
        "empirical.forecast_start",
        "empirical.forecast_end",
        "garch.phi",
        "garch.alpha0",
        "garch.alpha1",
        "garch.beta",
        "simulate.n_days",
        "simulate.start_date",
        "simulate.start_price",
        "properties.trials",
        "properties.triples",
        "properties.n_paths",
        "properties.inject_es_log_overflow",
    };
    if (exact.count(key)) return true;
    const auto parts = split(key, '.');
    if (parts.size() == 3 && parts[0] == "market" && parts[1] == "b" && is_index(parts[2]))
        return true;
    if (parts.size() == 4 && parts[0] == "market" && parts[1] == "sigma" && is_index(parts[2]) &&
        is_index(parts[3]))
        return true;
    return false;
}

double parse_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size())
        throw ConfigError("config key `" + key + "`: invalid real `" + value + "`");
    return v;
}

} // namespace

RunConfig RunConfig::from_string(const std::string& text, const std::string& name) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    long line_no = 0;
    std::vector<std::string> errors;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back(name + ":" + std::to_string(line_no) + ": expected key=value");
            continue;
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!known_key(key)) {
            errors.push_back(name + ":" + std::to_string(line_no) + ": unknown key `" + key + "`");
            continue;
        }
        if (cfg.kv_.count(key)) {
            errors.push_back(name + ":" + std::to_string(line_no) + ": duplicate key `" + key + "`");
            continue;
        }
        cfg.kv_[key] = value;
    }
    if (!errors.empty()) {
        std::string msg = "config errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config `" + path + "`");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str(), path);
}

void RunConfig::override_key(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw ConfigError("unknown key `" + key + "`");
    kv_[key] = value;
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string RunConfig::raw(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    const std::string value = it == kv_.end() ? fallback : it->second;
    used_[key] = value;
    return value;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    return raw(key, fallback);
}

std::string RunConfig::require_string(const std::string& key) const {
    if (!has(key)) throw ConfigError("missing required config key `" + key + "`");
    return raw(key, "");
}

double RunConfig::get_real(const std::string& key, double fallback) const {
    return parse_real(key, raw(key, format_real(fallback)));
}

long RunConfig::get_int(const std::string& key, long fallback) const {
    const std::string v = raw(key, std::to_string(fallback));
    try {
        std::size_t pos = 0;
        const long out = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key `" + key + "`: invalid integer `" + v + "`");
    }
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    const std::string v = raw(key, fallback ? "true" : "false");
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key `" + key + "`: expected true/false, got `" + v + "`");
}

std::uint64_t RunConfig::get_uint(const std::string& key, std::uint64_t fallback) const {
    const std::string v = raw(key, std::to_string(fallback));
    try {
        std::size_t pos = 0;
        const unsigned long long out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key `" + key + "`: invalid unsigned integer `" + v + "`");
    }
}

std::vector<double> RunConfig::grid(const std::string& key) const {
    const std::string v = require_string(key);
    std::vector<double> out;
    if (trim(v).empty()) return out;
    if (v.find(':') != std::string::npos) {
        const auto parts = split(v, ':');
        if (parts.size() != 3)
            throw ConfigError("config key `" + key + "`: expected start:stop:step");
        const double start = parse_real(key, trim(parts[0]));
        const double stop = parse_real(key, trim(parts[1]));
        const double step = parse_real(key, trim(parts[2]));
        if (!(step > 0.0)) throw ConfigError("config key `" + key + "`: step must be > 0");
        for (double x = start; x <= stop + 1e-9 * step; x += step) out.push_back(x);
        return out;
    }
    for (const auto& piece : split(v, ',')) out.push_back(parse_real(key, trim(piece)));
    return out;
}

std::uint64_t RunConfig::seed() const { return get_uint("seed", 12345); }

MarketParams RunConfig::market() const {
    MarketParams m;
    m.d = static_cast<int>(get_int("market.d", 2));
    m.T = get_real("market.T", 1.0);
    m.r = get_real("market.r", 0.01);
    const bool two_stock_defaults = m.d == 2;
    static const double default_b[2] = {0.04, 0.08};
    static const double default_sigma[4] = {0.15, -0.1, -0.1, 0.25};
    m.b.resize(m.d);
    for (int i = 0; i < m.d; ++i) {
        const std::string key = "market.b." + std::to_string(i + 1);
        if (!two_stock_defaults && !has(key))
            throw ConfigError("missing required config key `" + key + "` (d != 2 has no defaults)");
        m.b[i] = get_real(key, two_stock_defaults ? default_b[i] : 0.0);
    }
    m.sigma.resize(static_cast<std::size_t>(m.d) * m.d);
    for (int i = 0; i < m.d; ++i)
        for (int j = 0; j < m.d; ++j) {
            const std::string key =
                "market.sigma." + std::to_string(i + 1) + "." + std::to_string(j + 1);
            if (!two_stock_defaults && !has(key))
                throw ConfigError("missing required config key `" + key +
                                  "` (d != 2 has no defaults)");
            m.sigma[static_cast<std::size_t>(i) * m.d + j] =
                get_real(key, two_stock_defaults ? default_sigma[i * 2 + j] : 0.0);
        }
    ensure_valid(m, "config market");
    return m;
}

LognormalLaw RunConfig::loss() const {
    const double mu = get_real("loss.mu", 1.5);
    const double sigma = get_real("loss.sigma", 0.2);
    if (!(sigma >= 0.0)) throw ConfigError("loss.sigma must be >= 0");
    LognormalLaw law{mu, sigma * sigma};
    ensure_valid(law, "config loss");
    return law;
}

Criterion RunConfig::criterion() const {
    const std::string kind = get_string("criterion.kind", "arar");
    const double level = get_real("criterion.level", 0.95);
    Criterion c;
    if (kind == "var")
        c = Criterion::var(level);
    else if (kind == "arar")
        c = Criterion::arar(level);
    else if (kind == "lnorm")
        c = Criterion::lnorm(level);
    else if (kind == "entropic")
        c = Criterion::entropic(level);
    else
        throw ConfigError("criterion.kind must be var|arar|lnorm|entropic, got `" + kind + "`");
    ensure_valid(c, "config criterion");
    return c;
}

McConfig RunConfig::mc() const {
    McConfig mc;
    mc.n_paths = static_cast<std::size_t>(get_int("mc.n_paths", 200000));
    mc.seed = seed();
    ensure_valid(mc, "config mc");
    return mc;
}

OptConfig RunConfig::opt() const {
    OptConfig o;
    o.max_iter = static_cast<int>(get_int("opt.max_iter", o.max_iter));
    o.x_tol = get_real("opt.x_tol", o.x_tol);
    o.f_tol = get_real("opt.f_tol", o.f_tol);
    o.restarts = static_cast<int>(get_int("opt.restarts", o.restarts));
    o.pi_bounds = get_real("opt.pi_bounds", o.pi_bounds);
    ensure_valid(o, "config opt");
    return o;
}

GarchParams RunConfig::garch_params() const {
    GarchParams p;
    p.phi = get_real("garch.phi", 0.0340);
    p.alpha0 = get_real("garch.alpha0", 2.8718e-6);
    p.alpha1 = get_real("garch.alpha1", 0.0746);
    p.beta = get_real("garch.beta", 0.9067);
    ensure_valid(p, "config garch");
    return p;
}

std::vector<std::string> RunConfig::resolved_lines() const {
    std::map<std::string, std::string> all = used_;
    for (const auto& [k, v] : kv_) all[k] = v;
    std::vector<std::string> out;
    out.reserve(all.size());
    for (const auto& [k, v] : all) out.push_back(k + "=" + v);
    return out;
}

} // namespace marrm::cli
