// SPDX-License-Identifier: Apache-2.0
#include "spde/config.hpp"

#include "spde/control.hpp"
#include "spde/error.hpp"
#include "spde/persist.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace spde {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    require(!v.empty() && end && *end == '\0' && !std::isnan(d), ErrorCode::Config,
            "key '" + key + "': '" + v + "' is not a number");
    return d;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    char* end = nullptr;
    errno = 0;
    const unsigned long long u = std::strtoull(v.c_str(), &end, 10);
    require(!v.empty() && v[0] != '-' && end && *end == '\0' && errno == 0, ErrorCode::Config,
            "key '" + key + "': '" + v + "' is not an unsigned integer");
    return u;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text, const std::string& source) {
    ConfigMap map;
    map.source_ = source;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, ErrorCode::Config,
                source + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        require(!key.empty(), ErrorCode::Config, source + ":" + std::to_string(lineno) + ": empty key");
        require(!map.has(key), ErrorCode::Config,
                source + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        map.values_[key] = value;
    }
    return map;
}

ConfigMap ConfigMap::load(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void ConfigMap::set(const std::string& key, const std::string& value) {
    require(!trim(key).empty(), ErrorCode::Config, "empty config key");
    values_[trim(key)] = trim(value);
}

const std::string& ConfigMap::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    require(it != values_.end(), ErrorCode::Config, "missing required key '" + key + "'");
    return it->second;
}

double ConfigMap::get_double(const std::string& key) const { return parse_double(key, get_string(key)); }

std::uint64_t ConfigMap::get_u64(const std::string& key) const { return parse_u64(key, get_string(key)); }

std::vector<double> ConfigMap::get_doubles(const std::string& key) const {
    std::vector<double> out;
    for (const auto& s : split_list(get_string(key))) out.push_back(parse_double(key, s));
    return out;
}

std::vector<std::uint64_t> ConfigMap::get_u64s(const std::string& key) const {
    std::vector<std::uint64_t> out;
    for (const auto& s : split_list(get_string(key))) out.push_back(parse_u64(key, s));
    return out;
}

std::string ConfigMap::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::uint64_t ConfigMap::get_u64(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
}

std::string ConfigMap::echo() const {
    std::string out;
    for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
    return out;
}

double EventSpec::functional(const Field& u) const {
    switch (kind) {
        case EventKind::L2: return lp_norm(u, 2.0);
        case EventKind::Lrho: return lp_norm(u, rho);
        case EventKind::Mode: {
            require(mode >= 1 && mode <= u.size(), ErrorCode::Config, "event_mode out of range");
            return sine_transform(u)[mode - 1];
        }
        case EventKind::Point: {
            const auto j = static_cast<std::size_t>(std::lround(point * u.nx()));
            require(j >= 1 && j <= u.size(), ErrorCode::Config, "event_point must be interior");
            return u[j - 1];
        }
    }
    return 0.0;
}

double EventSpec::target_amplitude(std::uint32_t nx, std::size_t k) const {
    const Field phi = sample_field(nx, [k](double x) { return basis::eigenfunction(k, x); });
    const EventSpec probe = *this;
    const double unit = probe.functional(phi);
    require(std::abs(unit) > 0.0, ErrorCode::Config,
            "tilt_mode " + std::to_string(k) + " does not move the event functional");
    return threshold / unit;
}

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{"simulate",   "skeleton",   "minimize-action",
                                                "mc-scaling", "importance", "convergence",
                                                "validate"};
    return kinds;
}

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "kind", "nx", "nt", "T", "family", "K_modes", "K_noise", "R", "truncation_level", "delta",
        "picard_tol", "picard_max_iter", "rho", "coupling", "scheme",
        "eta", "eta_modes", "eta_amplitudes", "eta_file",
        "target", "target_modes", "target_amplitudes", "target_file",
        "control", "control_modes", "control_amplitudes", "control_file",
        "eps", "eps_list", "replicas", "event", "event_threshold", "event_mode", "event_point",
        "event_rho", "sampling", "tilt", "tilt_mode", "reference_action", "master_seed", "out",
        "threads", "action.mu0", "action.mu_growth", "action.residual_tol", "action.grad_tol",
        "action.max_iter", "action.stall_window", "galerkin_levels", "galerkin_seeds",
        "moment_scalings", "moment_replicas", "sigma_min", "validate_samples"};
    return keys;
}

ProfileSpec read_profile(const ConfigMap& map, const std::string& prefix) {
    ProfileSpec p;
    p.kind = map.get_string(prefix, "zero");
    if (p.kind == "zero") return p;
    if (p.kind == "modes") {
        for (auto k : map.get_u64s(prefix + "_modes")) {
            require(k >= 1, ErrorCode::Config, "key '" + prefix + "_modes': modes start at 1");
            p.modes.push_back(static_cast<std::size_t>(k));
        }
        p.amplitudes = map.get_doubles(prefix + "_amplitudes");
        require(p.modes.size() == p.amplitudes.size() && !p.modes.empty(), ErrorCode::Config,
                "keys '" + prefix + "_modes' and '" + prefix +
                    "_amplitudes' must be non-empty lists of equal length");
        return p;
    }
    if (p.kind == "file") {
        p.file = map.get_string(prefix + "_file");
        return p;
    }
    fail(ErrorCode::Config, "key '" + prefix + "': '" + p.kind + "' is not one of zero, modes, file");
}

template <class E>
E pick(const ConfigMap& map, const std::string& key, const std::string& fallback,
       const std::vector<std::pair<std::string, E>>& options) {
    const std::string v = map.get_string(key, fallback);
    std::string names;
    for (const auto& [name, e] : options) {
        if (v == name) return e;
        names += (names.empty() ? "" : ", ") + name;
    }
    fail(ErrorCode::Config, "key '" + key + "': '" + v + "' is not one of " + names);
}

}  // namespace

CoefficientSet ExperimentConfig::coefficients() const { return make_coefficients(family, coef_params); }

ExperimentConfig ExperimentConfig::from_map(const ConfigMap& map) {
    for (const auto& [k, v] : map.entries()) {
        require(known_keys().count(k) || k.rfind("coef.", 0) == 0, ErrorCode::Config,
                "unknown key '" + k + "'");
    }
    ExperimentConfig c;
    c.source = map;
    c.kind = map.get_string("kind");
    {
        const auto& kinds = experiment_kinds();
        if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) {
            std::string names;
            for (const auto& k : kinds) names += (names.empty() ? "" : ", ") + k;
            fail(ErrorCode::Config, "unknown experiment kind '" + c.kind + "'; valid kinds: " + names);
        }
    }
    const auto nx = map.get_u64("nx", 64);
    const auto nt = map.get_u64("nt", 512);
    require(nx <= 1u << 20 && nt <= 1u << 26, ErrorCode::Config, "keys 'nx'/'nt' are too large");
    c.nx = static_cast<std::uint32_t>(nx);
    c.nt = static_cast<std::uint32_t>(nt);
    c.T = map.get_double("T", 0.5);
    try {
        (void)c.grid();
    } catch (const Error& e) {
        fail(ErrorCode::Config, std::string("keys 'nx', 'nt', 'T': ") + e.what());
    }

    c.family = map.get_string("family", "linear");
    for (const auto& [k, v] : map.entries()) {
        if (k.rfind("coef.", 0) == 0) c.coef_params[k.substr(5)] = map.get_double(k);
    }
    try {
        (void)c.coefficients();
    } catch (const Error& e) {
        fail(e.code() == ErrorCode::UnknownFamily ? ErrorCode::UnknownFamily : ErrorCode::Config,
             std::string("key 'family' / 'coef.*': ") + e.what());
    }

    SolverConfig& s = c.solver;
    s.K_modes = map.get_u64("K_modes", 0);
    if (map.has("K_noise")) s.K_noise = map.get_u64("K_noise");
    if (map.has("R")) s.R = map.get_double("R");
    if (map.has("truncation_level")) s.truncation_level = static_cast<unsigned>(map.get_u64("truncation_level"));
    s.delta = map.get_double("delta", s.delta);
    s.picard_tol = map.get_double("picard_tol", s.picard_tol);
    s.picard_max_iter = static_cast<unsigned>(map.get_u64("picard_max_iter", s.picard_max_iter));
    s.rho = map.get_double("rho", s.rho);
    s.coupling = pick<Coupling>(map, "coupling", "standard",
                                {{"standard", Coupling::Standard}, {"integrated", Coupling::Integrated}});
    s.scheme = pick<Scheme>(map, "scheme", "etd", {{"etd", Scheme::Etd}, {"picard", Scheme::Picard}});
    s.validate(c.grid(), c.coefficients());

    c.eta = read_profile(map, "eta");
    c.target = read_profile(map, "target");
    c.control = read_profile(map, "control");

    c.eps = map.get_double("eps", c.eps);
    require(c.eps >= 0.0 && std::isfinite(c.eps), ErrorCode::Config, "key 'eps' must be >= 0");
    const bool needs_eps_list = c.kind == "mc-scaling" || c.kind == "convergence";
    if (needs_eps_list || map.has("eps_list")) {
        require(map.has("eps_list") && !map.get_doubles("eps_list").empty(), ErrorCode::Config,
                "missing required key 'eps_list' (non-empty comma separated list)");
        c.eps_list = map.get_doubles("eps_list");
        for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
            require(c.eps_list[i] > 0.0 && std::isfinite(c.eps_list[i]), ErrorCode::Config,
                    "key 'eps_list': values must be positive");
            require(i == 0 || c.eps_list[i] < c.eps_list[i - 1], ErrorCode::Config,
                    "key 'eps_list': values must be strictly decreasing");
        }
    }
    c.replicas = map.get_u64("replicas", c.replicas);
    require(c.replicas >= 1, ErrorCode::Config, "key 'replicas' must be >= 1");

    c.event.kind = pick<EventKind>(map, "event", "l2",
                                   {{"l2", EventKind::L2}, {"lrho", EventKind::Lrho},
                                    {"mode", EventKind::Mode}, {"point", EventKind::Point}});
    c.event.threshold = map.get_double("event_threshold", 0.0);
    require(c.event.threshold < std::numeric_limits<double>::infinity(), ErrorCode::Config,
            "key 'event_threshold' must be finite or -inf");
    c.event.mode = map.get_u64("event_mode", 1);
    require(c.event.mode >= 1 && c.event.mode < c.nx, ErrorCode::Config,
            "key 'event_mode' must be in 1..nx-1");
    c.event.point = map.get_double("event_point", 0.5);
    require(c.event.point > 0.0 && c.event.point < 1.0, ErrorCode::Config,
            "key 'event_point' must be in (0, 1)");
    c.event.rho = map.get_double("event_rho", s.rho);
    require(c.event.rho >= 1.0, ErrorCode::Config, "key 'event_rho' must be >= 1");

    c.sampling = pick<Sampling>(map, "sampling", c.kind == "importance" ? "tilted" : "plain",
                                {{"plain", Sampling::Plain}, {"tilted", Sampling::Tilted}});
    const bool symmetric = c.event.kind == EventKind::L2 || c.event.kind == EventKind::Lrho;
    c.tilt = pick<TiltKind>(map, "tilt", symmetric ? "mixture" : "single",
                            {{"mixture", TiltKind::Mixture}, {"single", TiltKind::Single}});
    c.tilt_mode = map.get_u64("tilt_mode", 1);
    require(c.tilt_mode >= 1 && c.tilt_mode < c.nx, ErrorCode::Config, "key 'tilt_mode' must be in 1..nx-1");
    if (map.has("reference_action")) c.reference_action = map.get_double("reference_action");

    if (c.kind != "validate") c.master_seed = map.get_u64("master_seed");
    else c.master_seed = map.get_u64("master_seed", 0);
    c.out_dir = map.get_string("out", c.out_dir);
    c.threads = static_cast<unsigned>(map.get_u64("threads", 1));
    require(c.threads >= 1, ErrorCode::Config, "key 'threads' must be >= 1");

    c.action.mu0 = map.get_double("action.mu0", c.action.mu0);
    c.action.mu_growth = map.get_double("action.mu_growth", c.action.mu_growth);
    c.action.residual_tol = map.get_double("action.residual_tol", c.action.residual_tol);
    c.action.grad_tol = map.get_double("action.grad_tol", c.action.grad_tol);
    c.action.max_iter = static_cast<unsigned>(map.get_u64("action.max_iter", c.action.max_iter));
    c.action.stall_window = static_cast<unsigned>(map.get_u64("action.stall_window", c.action.stall_window));

    if (map.has("galerkin_levels")) {
        c.galerkin_levels.clear();
        for (auto k : map.get_u64s("galerkin_levels")) c.galerkin_levels.push_back(k);
    }
    if (c.kind == "convergence") {
        for (auto k : c.galerkin_levels) {
            require(k >= 1 && k <= c.nx - 1, ErrorCode::Config,
                    "key 'galerkin_levels': levels must be in [1, nx-1]");
        }
    }
    c.galerkin_seeds = map.get_u64("galerkin_seeds", c.galerkin_seeds);
    if (map.has("moment_scalings")) c.moment_scalings = map.get_doubles("moment_scalings");
    c.moment_replicas = map.get_u64("moment_replicas", c.moment_replicas);
    c.sigma_min = map.get_double("sigma_min", c.sigma_min);
    c.validate_samples = map.get_u64("validate_samples", c.validate_samples);
    return c;
}

Field make_profile(const ProfileSpec& spec, const GridSpec& grid) {
    if (spec.kind == "zero") return Field(grid.nx);
    if (spec.kind == "file") {
        const Snapshot s = read_snapshot(spec.file);
        require(s.nx == grid.nx && s.rows >= 1, ErrorCode::Dimension,
                "profile file '" + spec.file + "' does not match nx");
        // last row: a saved path provides its terminal state
        const std::size_t n = grid.interior();
        return Field(grid.nx, std::vector<double>(s.data.end() - static_cast<std::ptrdiff_t>(n), s.data.end()));
    }
    Field out(grid.nx);
    for (std::size_t i = 0; i < spec.modes.size(); ++i) {
        const std::size_t k = spec.modes[i];
        require(k >= 1 && k <= grid.interior(), ErrorCode::Config, "profile mode out of range 1..nx-1");
        for (std::size_t j = 0; j < out.size(); ++j) {
            out[j] += spec.amplitudes[i] * basis::eigenfunction(k, grid.node(j + 1));
        }
    }
    return out;
}

Control make_control(const ProfileSpec& spec, const GridSpec& grid) {
    if (spec.kind == "file") {
        Control c = load_control(spec.file);
        require(c.grid() == grid, ErrorCode::Dimension,
                "control file '" + spec.file + "' is on a different grid");
        return c;
    }
    const Field profile = make_profile(spec, grid);
    const std::size_t n = grid.interior();
    std::vector<double> v(static_cast<std::size_t>(grid.nt) * n);
    for (std::size_t m = 0; m < grid.nt; ++m) std::copy(profile.storage().begin(), profile.storage().end(), v.begin() + m * n);
    return Control(grid, std::move(v));
}

}  // namespace spde
