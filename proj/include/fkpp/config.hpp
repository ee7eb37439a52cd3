#pragma once

#include <string>
#include <vector>

#include "fkpp/dynamics.hpp"
#include "fkpp/kpp.hpp"
#include "fkpp/operator.hpp"

namespace fkpp {

/// Flat INI-style run configuration. Every key is validated against the
/// owning module's preconditions at load time; unknown keys are rejected.
struct RunConfig {
    // [grid]
    double L = 48.0;
    int N = 1537;
    // [operator]
    double s = 0.75;
    double c = 0.0;
    Normalization normalization = Normalization::Unit;
    DriftScheme drift = DriftScheme::Central;
    int dense_cap = 4096;
    int fft_threshold = 512;
    // [model]
    std::string kind = "kpp";
    double a0 = 2.0;
    double patch_width = 2.0;   ///< plateau width; H2 radius R0 = width/2 + edge
    double patch_edge = 0.25;
    PatchShape patch_shape = PatchShape::BoxSmoothed;
    double nu = 1.0;
    double p = 1.0;
    double M = 3.0;             ///< supersolution level for wave runs
    double S = 3.0;             ///< saturation
    // [sim]
    SimConfig sim{0.05, 300.0, 1e-8, 1e-6, 50};
    // [eigen]
    std::vector<double> R_schedule = {4.0, 8.0, 16.0, 32.0};
    double eigen_tol = 1e-9;
    double line_tol = 1e-6;
    int max_iter = 10000;
    double eigen_R = 0.0;       ///< 0: full grid
    // [evolve]
    std::string u0_kind = "bump";  ///< bump | constant | eigenfunction
    double u0_amplitude = 0.5;
    double u0_width = 2.0;
    // [thresholds]
    double c_max = 10.0;
    int n_scan = 21;
    double bisect_tol = 1e-2;
    // [barrier]
    double kappa = 0.05;
    double beta = 0.0;          ///< 0: use 1 + 2s
    double sample_lo = 1.5;     ///< in units of r_kappa
    double sample_hi = 200.0;
    int sample_count = 40;
    // [tail]
    double window_lo_factor = 4.0;   ///< times patch radius R0
    double window_hi_factor = 0.5;   ///< times L
    // [output]
    std::string directory = "out";
    int precision = 17;

    double patch_radius() const { return 0.5 * patch_width + patch_edge; }
    Grid grid() const { return make_grid(L, N); }
    OperatorSpec operator_spec() const;
    Field potential(const Grid& g) const;
    Nonlinearity nonlinearity(const Grid& g) const;
};

/// Parses the flat key=value file with [section] headers. Unknown key, type
/// mismatch, or constraint violation raise ConfigError naming the key.
RunConfig parse_config(const std::string& path);

/// Applies `key=value` override strings (same names as the file).
void apply_override(RunConfig& cfg, const std::string& section,
                    const std::string& key, const std::string& value);

/// Writes the fully-resolved configuration (all defaults applied).
void write_effective_config(const RunConfig& cfg, const std::string& path);

} // namespace fkpp
