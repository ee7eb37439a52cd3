#pragma once

#include <functional>
#include <vector>

namespace fkpp {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

/// Adaptive Simpson on [a, b].
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol, int max_depth = 48);

/// Adaptive Simpson with interior split points (kinks, crossovers).
QuadResult integrate_with_splits(const std::function<double(double)>& f, double a,
                                 double b, const std::vector<double>& splits,
                                 double abs_tol);

/// Integral of f over [a, inf) for f with |f(z)| <= envelope * z^{-p}, p > 1.
/// Geometric blocks [a*2^j, a*2^{j+1}] until the analytic remainder bound
/// envelope * Z^{1-p}/(p-1) drops under abs_tol.
QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 double p, double envelope, double abs_tol);

/// Composite Gauss-Legendre(7) with panels no wider than panel_width; for
/// integrands whose oscillation adaptive bisection would alias.
QuadResult integrate_resolved(const std::function<double(double)>& f, double a,
                              double b, double panel_width);

/// Oscillatory decaying tail: f = g(z) z^{-p} with g oscillating at wavelength
/// `scale` and |g| <= envelope. Resolved panels to the radius where the
/// integration-by-parts remainder bound envelope*scale*Z^{-p} drops under
/// abs_tol.
QuadResult integrate_oscillatory_tail(const std::function<double(double)>& f,
                                      double a, double p, double envelope,
                                      double scale, double abs_tol);

} // namespace fkpp
