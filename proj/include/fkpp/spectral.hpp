#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fkpp/operator.hpp"

namespace fkpp {

struct EigenOptions {
    double residual_tol = 1e-9;   ///< sup-norm residual of the eigenpair
    double value_tol = 1e-12;     ///< relative eigenvalue stagnation
    int max_iterations = 10000;
};

/// Principal eigenpair of L_{c,a} on (-R, R) with zero exterior.
/// Sign convention: L phi = -lambda1 phi, so persistence <=> lambda1 < 0.
struct EigenResult {
    double lambda1 = 0.0;
    Field eigenfunction;   ///< max-normalized, zero outside (-R, R)
    double residual = 0.0; ///< ||L phi + lambda1 phi||_inf / ||phi||_inf
    int iterations = 0;
    double R = 0.0;
};

struct LineEigenResult {
    double lambda1_line = 0.0;
    std::vector<std::pair<double, double>> sequence;  ///< (R_n, lambda1(R_n))
    bool converged = false;
    double tail_gap = 0.0;  ///< |lambda_{n} - lambda_{n-1}| at the last step
};

/// Interior Dirichlet restriction: indices i with |x_i| < R - h/2.
std::vector<int> interior_indices(const Grid& g, double R);

/// Inverse power iteration on (sigma I - L)^{-1}, sigma = sup a + 1.
EigenResult principal_eigen(const NonlocalOperator& op, double R,
                            const EigenOptions& opts = {});

/// Whole-line eigenvalue via the increasing-domain limit on a fixed grid.
LineEigenResult principal_eigen_line(const NonlocalOperator& op,
                                     const std::vector<double>& R_schedule,
                                     double tol, const EigenOptions& opts = {});

struct DriftSymmetry {
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    double gap = 0.0;
};

/// lambda1 for drift +c and -c on (-R, R); the continuum identity is
/// lambda1^c == lambda1^{-c}.
DriftSymmetry drift_symmetry_check(const Grid& grid, OperatorSpec spec,
                                   const Field& a, double c, double R,
                                   const EigenOptions& opts = {});

struct CPoint {
    double c = 0.0;
    double lambda1 = 0.0;
    bool ok = false;
    std::string error;
};

/// lambda1(R) per drift value, independent solves, sorted by c.
std::vector<CPoint> lambda_of_c_profile(const Grid& grid, OperatorSpec spec,
                                        const Field& a,
                                        const std::vector<double>& c_values,
                                        double R, const EigenOptions& opts = {});

} // namespace fkpp
