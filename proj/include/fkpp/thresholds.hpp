#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fkpp/spectral.hpp"

namespace fkpp {

/// Sign profile of c -> lambda1 with brackets for the critical speeds.
/// Persistence radius c* (lambda1 < 0 inside), extinction radius c**
/// (lambda1 > 0 beyond); the brackets coincide when exactly one sign change
/// is observed. No monotonicity in |c| is assumed.
struct ThresholdReport {
    std::vector<double> c_grid;
    std::vector<double> lambda_values;

    struct Bracket {
        double c_lo = 0.0, c_hi = 0.0;
        double lambda_lo = 0.0, lambda_hi = 0.0;
    };
    std::optional<Bracket> c_star_bracket;       ///< first change from negative
    std::optional<Bracket> c_star_star_bracket;  ///< last change to positive
    bool monotone_observed = false;
    bool outer_open = false;  ///< no sign change up to c_max
    std::string warning;
};

struct ThresholdOptions {
    double c_max = 10.0;
    int n_scan = 21;
    double bisect_tol = 1e-2;
    std::vector<double> R_schedule;  ///< e.g. {4, 8, 16, 32}
    double line_tol = 1e-6;
    EigenOptions eigen_opts;
};

ThresholdReport scan_and_bisect(const Grid& grid, OperatorSpec spec,
                                const Field& a, const ThresholdOptions& topts);

} // namespace fkpp
