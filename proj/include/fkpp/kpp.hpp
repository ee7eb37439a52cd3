#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/grid.hpp"
#include "fkpp/operator.hpp"

namespace fkpp {

enum class PatchShape { BoxSmoothed, Gaussian };

/// Model reaction f(x,u) = u (a(x) - u^p) with a bounded favorable patch and
/// far-field death rate nu, or a user-supplied reaction.
class Nonlinearity {
public:
    /// Model KPP with a given sampled linearization a(x).
    static Nonlinearity model_kpp(Field a, double p, double nu, double R0,
                                  double saturation);

    /// Custom reaction; du_f = df/du. a(x) is derived as du_f(x, 0).
    static Nonlinearity custom(std::function<double(double, double)> f,
                               std::function<double(double, double)> du_f,
                               const Grid& grid, double nu, double R0,
                               double saturation);

    double f(double x, double u) const;
    double du_f(double x, double u) const;
    double f_at(int i, double u) const;    ///< uses the sampled a on model KPP

    const Field& linearization() const { return a_; }  ///< a(x) = df/du(x, 0)
    double saturation() const { return S_; }
    double nu() const { return nu_; }
    double patch_radius() const { return R0_; }
    double p_exponent() const { return p_; }
    bool is_model() const { return model_; }

    /// Lipschitz bound of u -> f(x,u) over u in [0, B], x on the grid.
    double lipschitz_bound(double B) const;

private:
    bool model_ = true;
    Field a_;
    double p_ = 1.0;
    double nu_ = 1.0;
    double R0_ = 1.0;
    double S_ = 1.0;
    std::function<double(double, double)> f_fn_;
    std::function<double(double, double)> duf_fn_;
};

/// Smoothstep patch a(x): a0 on |x| <= half, smooth drop to -nu over
/// [half, half+edge]; Gaussian variant a0 exp(-x^2/(2 half^2)) - shifted.
Field make_patch_potential(const Grid& g, PatchShape shape, double a0, double nu,
                           double half_width, double edge);

struct HypothesisClause {
    std::string name;
    bool passed = true;
    std::string witness;  ///< node/value on failure
};

struct HypothesesReport {
    std::vector<HypothesisClause> clauses;
    bool all_passed() const {
        for (const auto& c : clauses)
            if (!c.passed) return false;
        return true;
    }
};

/// KPP hypotheses checked on the sampled grid x a ladder u in {0.1..10}.
HypothesesReport check_hypotheses(const Nonlinearity& nl, const Grid& grid);

/// Explicit barrier Phi(x) = min(kappa |x|^{2s-1}, |x|^{-beta}).
struct Barrier {
    double kappa = 1.0;
    double s = 0.75;
    double beta = 2.5;          ///< in (1, 1+2s]
    double epsilon = 0.0;       ///< mollification radius (0 = none), < r_kappa/2

    double r_kappa() const { return std::pow(kappa, -1.0 / (2.0 * s - 1.0 + beta)); }
    double theta() const { return 2.0 * s / (2.0 * s - 1.0 + beta); }

    double value(double x) const;
    double derivative(double x) const;   ///< away from 0, r_kappa
    double second_derivative(double x) const;
    double fourth_derivative(double x) const;
};

Barrier make_barrier(double kappa, double s, double beta);

/// Phi sampled on positions; mollified with the bump (1-(t/eps)^2)^3 when
/// barrier.epsilon > 0.
std::vector<double> barrier_values(const Barrier& b, const std::vector<double>& xs);

/// Delta^s Phi(x) (Unit normalization) by adaptive quadrature on the exact
/// piecewise-power Phi. x must avoid {0, +-r_kappa} by a safety margin.
double barrier_frac_laplacian(const Barrier& b, double x, double abs_tol = 1e-10);

struct BarrierPointCheck {
    double x = 0.0;
    double value = 0.0;   ///< Delta^s Phi + c Phi' - nu Phi
    bool passed = false;  ///< value <= 0
};

struct BarrierCertificate {
    std::vector<BarrierPointCheck> points;
    double c_beta_empirical = 0.0;  ///< sup of Delta^s Phi |x|^{2s} / Phi over the sample
    double R_nu = std::numeric_limits<double>::infinity();
    ///< smallest sampled radius beyond which all sampled points pass (inf if none)
    bool certified = false;         ///< some radius works
};

/// Pointwise certificate for Delta^s Phi + c Phi' - nu Phi <= 0 on the sample.
BarrierCertificate certify_barrier(const Barrier& b, double c, double nu,
                                   const std::vector<double>& sample,
                                   double quad_tol = 1e-10);

} // namespace fkpp
