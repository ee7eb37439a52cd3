#include "fkpp/thresholds.hpp"

#include <algorithm>
#include <cmath>

namespace fkpp {

namespace {

double lambda_line_at(const Grid& grid, OperatorSpec spec, const Field& a, double c,
                      const ThresholdOptions& topts) {
    spec.c = c;
    NonlocalOperator op(grid, spec, a);
    LineEigenResult r =
        principal_eigen_line(op, topts.R_schedule, topts.line_tol, topts.eigen_opts);
    return r.lambda1_line;
}

} // namespace

ThresholdReport scan_and_bisect(const Grid& grid, OperatorSpec spec, const Field& a,
                                const ThresholdOptions& topts) {
    if (topts.R_schedule.empty())
        throw ConfigError("thresholds: empty R schedule");
    if (!(topts.c_max > 0.0) || topts.n_scan < 2)
        throw ConfigError("thresholds: need c_max > 0 and n_scan >= 2");

    ThresholdReport rep;
    auto lam = [&](double c) { return lambda_line_at(grid, spec, a, c, topts); };

    double lam0 = lam(0.0);
    if (lam0 >= 0.0)
        throw ConfigError(
            "thresholds: lambda1(c=0) >= 0; the scan requires a persistent "
            "patch at rest (lambda1(L_{0,a}) < 0)");

    for (int j = 0; j < topts.n_scan; ++j) {
        double c = topts.c_max * double(j) / double(topts.n_scan - 1);
        rep.c_grid.push_back(c);
        rep.lambda_values.push_back(j == 0 ? lam0 : lam(c));
    }

    rep.monotone_observed = true;
    for (size_t j = 0; j + 1 < rep.lambda_values.size(); ++j)
        if (rep.lambda_values[j + 1] < rep.lambda_values[j] - 1e-9)
            rep.monotone_observed = false;

    // sign-change intervals on the scan
    std::vector<size_t> changes;
    for (size_t j = 0; j + 1 < rep.lambda_values.size(); ++j)
        if (rep.lambda_values[j] < 0.0 && rep.lambda_values[j + 1] >= 0.0)
            changes.push_back(j);
    // also negative-going re-entries count as structure between c* and c**
    std::vector<size_t> neg_entries;
    for (size_t j = 0; j + 1 < rep.lambda_values.size(); ++j)
        if (rep.lambda_values[j] >= 0.0 && rep.lambda_values[j + 1] < 0.0)
            neg_entries.push_back(j);

    if (changes.empty()) {
        rep.outer_open = true;
        rep.warning = "no sign change up to c_max; raise c_max";
        return rep;
    }

    auto bisect = [&](double lo, double hi, double flo, double fhi) {
        while (hi - lo > topts.bisect_tol) {
            double mid = 0.5 * (lo + hi);
            double fm = lam(mid);
            if (fm < 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
        }
        ThresholdReport::Bracket b;
        b.c_lo = lo;
        b.c_hi = hi;
        b.lambda_lo = flo;
        b.lambda_hi = fhi;
        return b;
    };

    size_t first = changes.front();
    rep.c_star_bracket = bisect(rep.c_grid[first], rep.c_grid[first + 1],
                                rep.lambda_values[first], rep.lambda_values[first + 1]);
    size_t last = changes.back();
    if (last == first && neg_entries.empty()) {
        rep.c_star_star_bracket = rep.c_star_bracket;
    } else {
        rep.c_star_star_bracket =
            bisect(rep.c_grid[last], rep.c_grid[last + 1], rep.lambda_values[last],
                   rep.lambda_values[last + 1]);
    }
    return rep;
}

} // namespace fkpp
