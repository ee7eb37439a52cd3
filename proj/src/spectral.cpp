#include "fkpp/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace fkpp {

std::vector<int> interior_indices(const Grid& g, double R) {
    std::vector<int> idx;
    for (int i = 0; i < g.N; ++i)
        if (std::abs(g.x(i)) < R - 0.5 * g.h) idx.push_back(i);
    return idx;
}

EigenResult principal_eigen(const NonlocalOperator& op, double R,
                            const EigenOptions& opts) {
    const Grid& g = op.grid();
    if (R > g.L + 0.5 * g.h) throw ConfigError("principal_eigen: R exceeds grid half-width");
    std::vector<int> idx = interior_indices(g, R);
    const int n = int(idx.size());
    if (n < 1) throw ConfigError("principal_eigen: empty interior for this R");

    Eigen::MatrixXd M_full = op.to_dense();
    Eigen::MatrixXd M(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) M(r, c) = M_full(idx[size_t(r)], idx[size_t(c)]);

    double sup_a = -std::numeric_limits<double>::infinity();
    for (int i : idx) sup_a = std::max(sup_a, op.potential()[i]);
    const double sigma = sup_a + 1.0;

    Eigen::MatrixXd B = sigma * Eigen::MatrixXd::Identity(n, n) - M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);

    // positive start: bump (1 - (x/R)^2)
    Eigen::VectorXd v(n);
    for (int r = 0; r < n; ++r) {
        double x = g.x(idx[size_t(r)]);
        v(r) = 1.0 - (x / R) * (x / R);
    }
    v /= v.norm();

    double rho = 0.0, lambda = 0.0, lambda_prev = 0.0;
    int it = 0;
    double resid = std::numeric_limits<double>::infinity();
    for (; it < opts.max_iterations; ++it) {
        Eigen::VectorXd w = lu.solve(v);
        rho = v.dot(w);  // Rayleigh estimate for B^{-1}
        double nw = w.norm();
        if (!(nw > 0.0) || !std::isfinite(nw))
            throw NumericError("principal_eigen: linear solve failed");
        v = w / nw;
        lambda = 1.0 / rho - sigma;  // L phi = -lambda1 phi
        Eigen::VectorXd r_vec = M * v + lambda * v;
        resid = r_vec.lpNorm<Eigen::Infinity>() / v.lpNorm<Eigen::Infinity>();
        bool value_settled =
            it > 0 && std::abs(lambda - lambda_prev) <= opts.value_tol * std::max(1.0, std::abs(lambda));
        lambda_prev = lambda;
        if (value_settled && resid <= opts.residual_tol) break;
    }
    if (resid > opts.residual_tol)
        throw IterationError("principal_eigen: no convergence after max iterations", resid);

    if (v.maxCoeff() < std::abs(v.minCoeff())) v = -v;
    double vmax = v.maxCoeff();
    if (v.minCoeff() <= 0.0)
        throw StructuralError(
            "principal_eigen: eigenfunction lost interior positivity "
            "(discretization violates the M-matrix property; try Upwind drift)");
    EigenResult res;
    res.lambda1 = lambda;
    res.residual = resid;
    res.iterations = it + 1;
    res.R = R;
    res.eigenfunction = Field(g, 0.0);
    for (int r = 0; r < n; ++r) res.eigenfunction[idx[size_t(r)]] = v(r) / vmax;
    return res;
}

LineEigenResult principal_eigen_line(const NonlocalOperator& op,
                                     const std::vector<double>& R_schedule,
                                     double tol, const EigenOptions& opts) {
    LineEigenResult out;
    double prev = 0.0;
    bool have_prev = false;
    for (double R : R_schedule) {
        EigenResult er = principal_eigen(op, std::min(R, op.grid().L), opts);
        out.sequence.emplace_back(R, er.lambda1);
        out.lambda1_line = er.lambda1;
        if (have_prev) {
            out.tail_gap = std::abs(er.lambda1 - prev);
            if (out.tail_gap < tol) {
                out.converged = true;
                return out;
            }
        }
        prev = er.lambda1;
        have_prev = true;
    }
    return out;  // converged stays false: schedule exhausted
}

DriftSymmetry drift_symmetry_check(const Grid& grid, OperatorSpec spec,
                                   const Field& a, double c, double R,
                                   const EigenOptions& opts) {
    DriftSymmetry d;
    spec.c = c;
    NonlocalOperator op_p(grid, spec, a);
    d.lambda_plus = principal_eigen(op_p, R, opts).lambda1;
    spec.c = -c;
    NonlocalOperator op_m(grid, spec, a);
    d.lambda_minus = principal_eigen(op_m, R, opts).lambda1;
    d.gap = std::abs(d.lambda_plus - d.lambda_minus);
    return d;
}

std::vector<CPoint> lambda_of_c_profile(const Grid& grid, OperatorSpec spec,
                                        const Field& a,
                                        const std::vector<double>& c_values,
                                        double R, const EigenOptions& opts) {
    std::vector<CPoint> out;
    out.reserve(c_values.size());
    for (double c : c_values) {
        CPoint p;
        p.c = c;
        try {
            spec.c = c;
            NonlocalOperator op(grid, spec, a);
            p.lambda1 = principal_eigen(op, R, opts).lambda1;
            p.ok = true;
        } catch (const std::exception& e) {
            p.ok = false;
            p.error = e.what();
        }
        out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end(),
              [](const CPoint& l, const CPoint& r) { return l.c < r.c; });
    return out;
}

} // namespace fkpp
