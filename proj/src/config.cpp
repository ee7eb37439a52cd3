#include "fkpp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fkpp {

OperatorSpec RunConfig::operator_spec() const {
    OperatorSpec spec;
    spec.s = s;
    spec.c = c;
    spec.normalization = normalization;
    spec.drift_scheme = drift;
    spec.dense_cap = dense_cap;
    spec.fft_threshold = fft_threshold;
    return spec;
}

Field RunConfig::potential(const Grid& g) const {
    return make_patch_potential(g, patch_shape, a0, nu, 0.5 * patch_width, patch_edge);
}

Nonlinearity RunConfig::nonlinearity(const Grid& g) const {
    return Nonlinearity::model_kpp(potential(g), p, nu, patch_radius(), S);
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    double d = parse_double(key, v);
    if (d != std::floor(d))
        throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
    return int(d);
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, item));
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

} // namespace

void apply_override(RunConfig& cfg, const std::string& section,
                    const std::string& key, const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;
    auto is = [&](const char* sec, const char* k) {
        return section == sec && key == k;
    };
    if (is("grid", "L")) cfg.L = parse_double(full, value);
    else if (is("grid", "N")) cfg.N = parse_int(full, value);
    else if (is("operator", "s")) cfg.s = parse_double(full, value);
    else if (is("operator", "c")) cfg.c = parse_double(full, value);
    else if (is("operator", "normalization")) {
        if (value == "unit") cfg.normalization = Normalization::Unit;
        else if (value == "exact") cfg.normalization = Normalization::Exact;
        else throw ConfigError("config key 'operator.normalization': unit or exact");
    } else if (is("operator", "dense_cap")) {
        cfg.dense_cap = parse_int(full, value);
    } else if (is("operator", "fft_threshold")) {
        cfg.fft_threshold = parse_int(full, value);
    } else if (is("operator", "drift")) {
        if (value == "central") cfg.drift = DriftScheme::Central;
        else if (value == "upwind") cfg.drift = DriftScheme::Upwind;
        else throw ConfigError("config key 'operator.drift': central or upwind");
    }
    else if (is("model", "kind")) {
        if (value != "kpp") throw ConfigError("config key 'model.kind': only 'kpp'");
        cfg.kind = value;
    }
    else if (is("model", "a0")) cfg.a0 = parse_double(full, value);
    else if (is("model", "patch_width")) cfg.patch_width = parse_double(full, value);
    else if (is("model", "patch_edge")) cfg.patch_edge = parse_double(full, value);
    else if (is("model", "patch_shape")) {
        if (value == "box-smoothed") cfg.patch_shape = PatchShape::BoxSmoothed;
        else if (value == "gaussian") cfg.patch_shape = PatchShape::Gaussian;
        else throw ConfigError("config key 'model.patch_shape': box-smoothed or gaussian");
    }
    else if (is("model", "nu")) cfg.nu = parse_double(full, value);
    else if (is("model", "p")) cfg.p = parse_double(full, value);
    else if (is("model", "M")) cfg.M = parse_double(full, value);
    else if (is("model", "S")) cfg.S = parse_double(full, value);
    else if (is("sim", "dt")) cfg.sim.dt = parse_double(full, value);
    else if (is("sim", "t_max")) cfg.sim.t_max = parse_double(full, value);
    else if (is("sim", "steady_tol")) cfg.sim.steady_tol = parse_double(full, value);
    else if (is("sim", "extinction_tol")) cfg.sim.extinction_tol = parse_double(full, value);
    else if (is("sim", "snapshot_stride")) cfg.sim.snapshot_stride = parse_int(full, value);
    else if (is("eigen", "R_schedule")) cfg.R_schedule = parse_list(full, value);
    else if (is("eigen", "tol")) cfg.eigen_tol = parse_double(full, value);
    else if (is("eigen", "line_tol")) cfg.line_tol = parse_double(full, value);
    else if (is("eigen", "max_iter")) cfg.max_iter = parse_int(full, value);
    else if (is("eigen", "R")) cfg.eigen_R = parse_double(full, value);
    else if (is("evolve", "u0_kind")) {
        if (value != "bump" && value != "constant" && value != "eigenfunction")
            throw ConfigError("config key 'evolve.u0_kind': bump, constant or eigenfunction");
        cfg.u0_kind = value;
    }
    else if (is("evolve", "u0_amplitude")) cfg.u0_amplitude = parse_double(full, value);
    else if (is("evolve", "u0_width")) cfg.u0_width = parse_double(full, value);
    else if (is("thresholds", "c_max")) cfg.c_max = parse_double(full, value);
    else if (is("thresholds", "n_scan")) cfg.n_scan = parse_int(full, value);
    else if (is("thresholds", "bisect_tol")) cfg.bisect_tol = parse_double(full, value);
    else if (is("barrier", "kappa")) cfg.kappa = parse_double(full, value);
    else if (is("barrier", "beta")) cfg.beta = parse_double(full, value);
    else if (is("barrier", "sample_lo")) cfg.sample_lo = parse_double(full, value);
    else if (is("barrier", "sample_hi")) cfg.sample_hi = parse_double(full, value);
    else if (is("barrier", "sample_count")) cfg.sample_count = parse_int(full, value);
    else if (is("tail", "window_lo_factor")) cfg.window_lo_factor = parse_double(full, value);
    else if (is("tail", "window_hi_factor")) cfg.window_hi_factor = parse_double(full, value);
    else if (is("output", "directory")) cfg.directory = value;
    else if (is("output", "precision")) cfg.precision = parse_int(full, value);
    else throw ConfigError("unknown config key '" + full + "'");
}

namespace {

void validate(const RunConfig& cfg) {
    if (!(cfg.L > 0.0)) throw ConfigError("grid.L must be positive");
    if (cfg.N < 3) throw ConfigError("grid.N must be >= 3");
    if (!(cfg.s > 0.5 && cfg.s < 1.0))
        throw ConfigError("operator.s must lie in (0.5, 1)");
    if (!(cfg.p >= 1.0)) throw ConfigError("model.p must satisfy p >= 1");
    if (!(cfg.nu > 0.0)) throw ConfigError("model.nu must be positive");
    if (!(cfg.sim.dt > 0.0)) throw ConfigError("sim.dt must be positive");
    if (!(cfg.sim.steady_tol > 0.0)) throw ConfigError("sim.steady_tol must be positive");
    if (!(cfg.sim.extinction_tol > 0.0))
        throw ConfigError("sim.extinction_tol must be positive");
    if (cfg.sim.snapshot_stride < 1)
        throw ConfigError("sim.snapshot_stride must be >= 1");
    if (!(cfg.eigen_tol > 0.0)) throw ConfigError("eigen.tol must be positive");
    if (cfg.max_iter < 1) throw ConfigError("eigen.max_iter must be >= 1");
    if (cfg.dense_cap < 3) throw ConfigError("operator.dense_cap must be >= 3");
    if (cfg.fft_threshold < 1) throw ConfigError("operator.fft_threshold must be >= 1");
    for (double R : cfg.R_schedule)
        if (!(R > 0.0)) throw ConfigError("eigen.R_schedule entries must be positive");
    if (!(cfg.c_max > 0.0)) throw ConfigError("thresholds.c_max must be positive");
    if (cfg.n_scan < 2) throw ConfigError("thresholds.n_scan must be >= 2");
    if (!(cfg.bisect_tol > 0.0)) throw ConfigError("thresholds.bisect_tol must be positive");
    if (!(cfg.kappa > 0.0)) throw ConfigError("barrier.kappa must be positive");
    if (cfg.beta != 0.0 && !(cfg.beta > 1.0 && cfg.beta <= 1.0 + 2.0 * cfg.s))
        throw ConfigError("barrier.beta must lie in (1, 1+2s]");
    if (!(cfg.window_lo_factor > 0.0) || !(cfg.window_hi_factor > 0.0) ||
        cfg.window_hi_factor > 1.0)
        throw ConfigError("tail window factors must satisfy lo > 0, 0 < hi <= 1");
    if (cfg.precision < 6 || cfg.precision > 17)
        throw ConfigError("output.precision must lie in [6, 17]");
}

} // namespace

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    RunConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        apply_override(cfg, section, key, value);
    }
    if (const char* env = std::getenv("FKPP_OUTPUT_DIR"))
        cfg.directory = env;
    validate(cfg);
    return cfg;
}

void write_effective_config(const RunConfig& cfg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open for writing: " + path);
    out.precision(17);
    out << "[grid]\nL = " << cfg.L << "\nN = " << cfg.N << "\n\n";
    out << "[operator]\ns = " << cfg.s << "\nc = " << cfg.c << "\nnormalization = "
        << (cfg.normalization == Normalization::Unit ? "unit" : "exact")
        << "\ndrift = " << (cfg.drift == DriftScheme::Central ? "central" : "upwind")
        << "\ndense_cap = " << cfg.dense_cap
        << "\nfft_threshold = " << cfg.fft_threshold << "\n\n";
    out << "[model]\nkind = " << cfg.kind << "\na0 = " << cfg.a0
        << "\npatch_width = " << cfg.patch_width << "\npatch_edge = " << cfg.patch_edge
        << "\npatch_shape = "
        << (cfg.patch_shape == PatchShape::BoxSmoothed ? "box-smoothed" : "gaussian")
        << "\nnu = " << cfg.nu << "\np = " << cfg.p << "\nM = " << cfg.M
        << "\nS = " << cfg.S << "\n\n";
    out << "[sim]\ndt = " << cfg.sim.dt << "\nt_max = " << cfg.sim.t_max
        << "\nsteady_tol = " << cfg.sim.steady_tol
        << "\nextinction_tol = " << cfg.sim.extinction_tol
        << "\nsnapshot_stride = " << cfg.sim.snapshot_stride << "\n\n";
    out << "[eigen]\nR_schedule = ";
    for (size_t i = 0; i < cfg.R_schedule.size(); ++i)
        out << (i ? "," : "") << cfg.R_schedule[i];
    out << "\ntol = " << cfg.eigen_tol << "\nline_tol = " << cfg.line_tol
        << "\nmax_iter = " << cfg.max_iter << "\nR = " << cfg.eigen_R << "\n\n";
    out << "[evolve]\nu0_kind = " << cfg.u0_kind
        << "\nu0_amplitude = " << cfg.u0_amplitude << "\nu0_width = " << cfg.u0_width
        << "\n\n";
    out << "[thresholds]\nc_max = " << cfg.c_max << "\nn_scan = " << cfg.n_scan
        << "\nbisect_tol = " << cfg.bisect_tol << "\n\n";
    out << "[barrier]\nkappa = " << cfg.kappa << "\nbeta = " << cfg.beta
        << "\nsample_lo = " << cfg.sample_lo << "\nsample_hi = " << cfg.sample_hi
        << "\nsample_count = " << cfg.sample_count << "\n\n";
    out << "[tail]\nwindow_lo_factor = " << cfg.window_lo_factor
        << "\nwindow_hi_factor = " << cfg.window_hi_factor << "\n\n";
    out << "[output]\ndirectory = " << cfg.directory
        << "\nprecision = " << cfg.precision << "\n";
}

} // namespace fkpp
