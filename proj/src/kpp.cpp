#include "fkpp/kpp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fkpp/quadrature.hpp"

namespace fkpp {

Nonlinearity Nonlinearity::model_kpp(Field a, double p, double nu, double R0,
                                     double saturation) {
    if (!(p >= 1.0)) throw ConfigError("model KPP: p must satisfy p >= 1");
    if (!(nu > 0.0)) throw ConfigError("model KPP: nu must be positive");
    validate_field(a);
    Nonlinearity nl;
    nl.model_ = true;
    nl.a_ = std::move(a);
    nl.p_ = p;
    nl.nu_ = nu;
    nl.R0_ = R0;
    nl.S_ = saturation;
    return nl;
}

Nonlinearity Nonlinearity::custom(std::function<double(double, double)> f,
                                  std::function<double(double, double)> du_f,
                                  const Grid& grid, double nu, double R0,
                                  double saturation) {
    Nonlinearity nl;
    nl.model_ = false;
    nl.f_fn_ = std::move(f);
    nl.duf_fn_ = std::move(du_f);
    nl.nu_ = nu;
    nl.R0_ = R0;
    nl.S_ = saturation;
    nl.a_ = Field(grid, 0.0);
    for (int i = 0; i < grid.N; ++i) nl.a_[i] = nl.duf_fn_(grid.x(i), 0.0);
    nl.a_.extension = ConstantExt{-nu, -nu};
    return nl;
}

double Nonlinearity::f(double x, double u) const {
    if (!model_) return f_fn_(x, u);
    // sampled a is authoritative on-grid; off-grid callers use the far value
    double a_val;
    const Grid& g = a_.grid;
    if (x <= -g.L || x >= g.L) {
        a_val = a_.exterior_value(x);
    } else {
        double t = (x + g.L) / g.h;
        int i = std::clamp(int(std::floor(t)), 0, g.N - 2);
        double w = t - i;
        a_val = (1.0 - w) * a_[i] + w * a_[i + 1];
    }
    return u * (a_val - std::pow(std::max(u, 0.0), p_));
}

double Nonlinearity::du_f(double x, double u) const {
    if (!model_) return duf_fn_(x, u);
    double eps = 1e-7 * std::max(1.0, std::abs(u));
    return (f(x, u + eps) - f(x, u - eps)) / (2.0 * eps);
}

double Nonlinearity::f_at(int i, double u) const {
    if (!model_) return f_fn_(a_.grid.x(i), u);
    return u * (a_[i] - std::pow(std::max(u, 0.0), p_));
}

double Nonlinearity::lipschitz_bound(double B) const {
    double m = 0.0;
    const Grid& g = a_.grid;
    for (int i = 0; i < g.N; ++i) {
        for (double u : {0.0, 0.25 * B, 0.5 * B, 0.75 * B, B}) {
            m = std::max(m, std::abs(du_f(g.x(i), u)));
        }
    }
    return m;
}

Field make_patch_potential(const Grid& g, PatchShape shape, double a0, double nu,
                           double half_width, double edge) {
    if (!(nu > 0.0)) throw ConfigError("patch potential: nu must be positive");
    Field a(g);
    if (shape == PatchShape::BoxSmoothed) {
        for (int i = 0; i < g.N; ++i) {
            double t = (std::abs(g.x(i)) - half_width) / edge;
            t = std::clamp(t, 0.0, 1.0);
            double ss = 1.0 - (3.0 * t * t - 2.0 * t * t * t);
            a[i] = -nu + (a0 + nu) * ss;
        }
    } else {
        for (int i = 0; i < g.N; ++i) {
            double x = g.x(i);
            a[i] = -nu + (a0 + nu) * std::exp(-x * x / (2.0 * half_width * half_width));
        }
    }
    a.extension = ConstantExt{-nu, -nu};
    return a;
}

HypothesesReport check_hypotheses(const Nonlinearity& nl, const Grid& grid) {
    HypothesesReport rep;
    const std::vector<double> ladder = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};

    auto witness = [](double x, double v) {
        std::ostringstream os;
        os << "x=" << x << " value=" << v;
        return os.str();
    };

    {  // f(x, 0) == 0
        HypothesisClause c{"f(.,0) == 0", true, ""};
        for (int i = 0; i < grid.N; ++i) {
            double v = nl.f(grid.x(i), 0.0);
            if (std::abs(v) > 1e-12) {
                c.passed = false;
                c.witness = witness(grid.x(i), v);
                break;
            }
        }
        rep.clauses.push_back(c);
    }
    {  // u -> f(x,u)/u strictly decreasing on the ladder
        HypothesisClause c{"f(x,u)/u decreasing in u", true, ""};
        for (int i = 0; i < grid.N && c.passed; ++i) {
            double x = grid.x(i);
            double prev = nl.f(x, ladder.front()) / ladder.front();
            for (size_t j = 1; j < ladder.size(); ++j) {
                double cur = nl.f(x, ladder[j]) / ladder[j];
                if (!(cur < prev)) {
                    c.passed = false;
                    c.witness = witness(x, ladder[j]);
                    break;
                }
                prev = cur;
            }
        }
        rep.clauses.push_back(c);
    }
    {  // f(x, S(x)) <= 0
        HypothesisClause c{"f(x, S) <= 0", true, ""};
        for (int i = 0; i < grid.N; ++i) {
            double v = nl.f(grid.x(i), nl.saturation());
            if (v > 1e-12) {
                c.passed = false;
                c.witness = witness(grid.x(i), v);
                break;
            }
        }
        rep.clauses.push_back(c);
    }
    {  // a(x) <= -nu for |x| >= R0
        HypothesisClause c{"a(x) <= -nu beyond the patch", true, ""};
        for (int i = 0; i < grid.N; ++i) {
            if (std::abs(grid.x(i)) < nl.patch_radius()) continue;
            double v = nl.linearization()[i];
            if (v > -nl.nu() + 1e-12) {
                c.passed = false;
                c.witness = witness(grid.x(i), v);
                break;
            }
        }
        rep.clauses.push_back(c);
    }
    {  // finite Lipschitz estimate of du_f over the ladder
        HypothesisClause c{"du_f Lipschitz in u (finite estimate)", true, ""};
        double worst = 0.0;
        for (int i = 0; i < grid.N; ++i) {
            double x = grid.x(i);
            for (size_t j = 0; j + 1 < ladder.size(); ++j) {
                double num = std::abs(nl.du_f(x, ladder[j + 1]) - nl.du_f(x, ladder[j]));
                double q = num / (ladder[j + 1] - ladder[j]);
                if (!std::isfinite(q)) {
                    c.passed = false;
                    c.witness = witness(x, ladder[j]);
                    break;
                }
                worst = std::max(worst, q);
            }
            if (!c.passed) break;
        }
        if (c.passed) {
            std::ostringstream os;
            os << "estimate=" << worst;
            c.witness = os.str();
        }
        rep.clauses.push_back(c);
    }
    return rep;
}

double Barrier::value(double x) const {
    double ax = std::abs(x);
    if (ax == 0.0) return 0.0;
    return std::min(kappa * std::pow(ax, 2.0 * s - 1.0), std::pow(ax, -beta));
}

double Barrier::derivative(double x) const {
    double ax = std::abs(x);
    double sg = x >= 0 ? 1.0 : -1.0;
    if (ax < r_kappa()) return sg * kappa * (2.0 * s - 1.0) * std::pow(ax, 2.0 * s - 2.0);
    return -sg * beta * std::pow(ax, -beta - 1.0);
}

double Barrier::second_derivative(double x) const {
    double ax = std::abs(x);
    if (ax < r_kappa())
        return kappa * (2.0 * s - 1.0) * (2.0 * s - 2.0) * std::pow(ax, 2.0 * s - 3.0);
    return beta * (beta + 1.0) * std::pow(ax, -beta - 2.0);
}

double Barrier::fourth_derivative(double x) const {
    double ax = std::abs(x);
    if (ax < r_kappa())
        return kappa * (2.0 * s - 1.0) * (2.0 * s - 2.0) * (2.0 * s - 3.0) *
               (2.0 * s - 4.0) * std::pow(ax, 2.0 * s - 5.0);
    return beta * (beta + 1.0) * (beta + 2.0) * (beta + 3.0) * std::pow(ax, -beta - 4.0);
}

Barrier make_barrier(double kappa, double s, double beta) {
    if (!(kappa > 0.0)) throw ConfigError("barrier: kappa must be positive");
    if (!(s > 0.5 && s < 1.0)) throw ConfigError("barrier: s must lie in (0.5, 1)");
    if (!(beta > 1.0 && beta <= 1.0 + 2.0 * s))
        throw ConfigError("barrier: beta must lie in (1, 1+2s]");
    Barrier b;
    b.kappa = kappa;
    b.s = s;
    b.beta = beta;
    return b;
}

std::vector<double> barrier_values(const Barrier& b, const std::vector<double>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    if (b.epsilon <= 0.0) {
        for (double x : xs) out.push_back(b.value(x));
        return out;
    }
    // mollifier (1-(t/eps)^2)^3 normalized to unit mass: integral over [-eps,eps]
    // of (1-t^2)^3 dt = 32/35 * eps
    const double eps = b.epsilon;
    const double norm = 35.0 / (32.0 * eps);
    for (double x : xs) {
        auto integrand = [&](double t) {
            double w = 1.0 - (t / eps) * (t / eps);
            return norm * w * w * w * b.value(x - t);
        };
        std::vector<double> splits;
        for (double kink : {0.0, b.r_kappa(), -b.r_kappa()}) {
            double t = x - kink;
            if (t > -eps && t < eps) splits.push_back(t);
        }
        out.push_back(integrate_with_splits(integrand, -eps, eps, splits, 1e-12).value);
    }
    return out;
}

double barrier_frac_laplacian(const Barrier& b, double x, double abs_tol) {
    const double s = b.s;
    const double rk = b.r_kappa();
    const double ax = std::abs(x);
    if (ax == 0.0 || std::abs(ax - rk) < 1e-12)
        throw ConfigError("barrier_frac_laplacian: x must avoid 0 and r_kappa");
    const double px = b.value(ax);

    // kinks of z -> Phi(x+z), Phi(x-z) for z > 0
    std::vector<double> kinks;
    for (double k : {-rk, 0.0, rk}) {
        double zp = k - ax;
        double zm = ax - k;
        if (zp > 0.0) kinks.push_back(zp);
        if (zm > 0.0) kinks.push_back(zm);
    }
    std::sort(kinks.begin(), kinks.end());

    double nearest = kinks.empty() ? 0.5 * ax : kinks.front();
    double z0 = 0.25 * std::min(nearest, ax);
    // Taylor on the singular cell: delta ~ Phi'' z^2 + Phi'''' z^4/12
    double val = b.second_derivative(ax) * std::pow(z0, 2.0 - 2.0 * s) / (2.0 - 2.0 * s) +
                 (b.fourth_derivative(ax) / 12.0) * std::pow(z0, 4.0 - 2.0 * s) /
                     (4.0 - 2.0 * s);

    auto integrand = [&](double z) {
        return (b.value(ax + z) + b.value(ax - z) - 2.0 * px) *
               std::pow(z, -1.0 - 2.0 * s);
    };
    double zfar = std::max(4.0 * ax, 4.0 * rk);
    for (double k : kinks) zfar = std::max(zfar, 2.0 * k);
    QuadResult head = integrate_with_splits(integrand, z0, zfar, kinks, 0.5 * abs_tol);
    // beyond zfar both branches are power tails ~ z^{-beta}; envelope covers them
    double env = 2.0 * b.value(zfar - ax) + 2.0 * px;
    QuadResult tail =
        integrate_to_infinity(integrand, zfar, 1.0 + 2.0 * s, env, 0.5 * abs_tol);
    if (!head.converged || !tail.converged)
        throw NumericError("barrier_frac_laplacian: quadrature failed to reach tolerance");
    return val + head.value + tail.value;
}

BarrierCertificate certify_barrier(const Barrier& b, double c, double nu,
                                   const std::vector<double>& sample,
                                   double quad_tol) {
    BarrierCertificate cert;
    const double rk = b.r_kappa();
    double cbeta = -std::numeric_limits<double>::infinity();
    for (double x : sample) {
        double ds = barrier_frac_laplacian(b, x, quad_tol);
        BarrierPointCheck pc;
        pc.x = x;
        pc.value = ds + c * b.derivative(x) - nu * b.value(x);
        pc.passed = pc.value <= 0.0;
        cert.points.push_back(pc);
        if (std::abs(x) > rk)
            cbeta = std::max(cbeta, ds * std::pow(std::abs(x), 2.0 * b.s) / b.value(x));
    }
    cert.c_beta_empirical = cbeta;
    // smallest sampled radius beyond which every sampled point passes
    std::vector<BarrierPointCheck> sorted = cert.points;
    std::sort(sorted.begin(), sorted.end(),
              [](const BarrierPointCheck& l, const BarrierPointCheck& r) {
                  return std::abs(l.x) < std::abs(r.x);
              });
    double rnu = std::numeric_limits<double>::infinity();
    double worst_fail = 0.0;
    for (const auto& p : sorted)
        if (!p.passed) worst_fail = std::max(worst_fail, std::abs(p.x));
    bool any_pass_beyond = false;
    for (const auto& p : sorted)
        if (std::abs(p.x) > worst_fail) any_pass_beyond = true;
    if (any_pass_beyond) {
        for (const auto& p : sorted)
            if (std::abs(p.x) > worst_fail) {
                rnu = std::abs(p.x);
                break;
            }
        cert.R_nu = rnu;
        cert.certified = true;
    }
    return cert;
}

} // namespace fkpp
