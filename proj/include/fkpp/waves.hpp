#pragma once

#include <optional>

#include "fkpp/dynamics.hpp"
#include "fkpp/spectral.hpp"

namespace fkpp {

enum class TailSide { Left, Right };
enum class WaveProvenance { FromSubsolution, FromSupersolution };

struct TailFit {
    double x_lo = 0.0;
    double x_hi = 0.0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    TailSide side = TailSide::Right;
    int n_points = 0;
};

/// Least-squares slope of log u against log |x| on window nodes.
TailFit fit_tail_exponent(const Field& profile, double x_lo, double x_hi,
                          TailSide side);

struct WaveProfile {
    Field profile;
    double residual = 0.0;  ///< ||Delta^s u + c u' + f(.,u)||_inf
    WaveProvenance provenance = WaveProvenance::FromSubsolution;
    Outcome outcome = Outcome::HorizonReached;
    Monotonicity monotone_flag = Monotonicity::Neither;
};

struct WaveOptions {
    double eigen_R = 0.0;     ///< 0: use half the grid
    double supersolution_level = 0.0;  ///< 0: use the nonlinearity's saturation
    double epsilon_start = 1.0;
    int epsilon_ladder = 40;
    EigenOptions eigen_opts;
};

struct WaveResult {
    WaveProfile from_below;
    WaveProfile from_above;
    double gap = 0.0;             ///< sup |below - above|
    double lambda1 = 0.0;         ///< lambda1 on (-eigen_R, eigen_R)
    bool partial = false;         ///< a run hit the horizon
    bool uniqueness_flag = false; ///< gap > 100 * steady_tol
};

/// Monotone relaxation to the traveling-wave profile from eps*phi_R (below)
/// and from the constant supersolution (above). `spec` carries s and c; the
/// reaction supplies a(x).
WaveResult solve_wave(const Grid& grid, OperatorSpec spec, const Nonlinearity& nl,
                      const SimConfig& cfg, const WaveOptions& wopts = {});

} // namespace fkpp
