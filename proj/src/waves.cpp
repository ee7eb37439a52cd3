#include "fkpp/waves.hpp"

#include <algorithm>
#include <cmath>

namespace fkpp {

TailFit fit_tail_exponent(const Field& profile, double x_lo, double x_hi,
                          TailSide side) {
    if (!(x_lo > 0.0 && x_lo < x_hi))
        throw ConfigError("fit_tail_exponent: need 0 < x_lo < x_hi");
    const Grid& g = profile.grid;
    if (x_hi > g.L) throw ConfigError("fit_tail_exponent: window outside the grid");

    std::vector<double> X, Y;
    for (int i = 0; i < g.N; ++i) {
        double x = g.x(i);
        double ax = std::abs(x);
        bool in_side = side == TailSide::Right ? x > 0 : x < 0;
        if (!in_side || ax < x_lo || ax > x_hi) continue;
        double u = profile[i];
        if (u <= 0.0)
            throw NumericError("fit_tail_exponent: nonpositive value in window "
                               "(window touches the extinction floor)");
        X.push_back(std::log(ax));
        Y.push_back(std::log(u));
    }
    const int n = int(X.size());
    if (n < 3) throw ConfigError("fit_tail_exponent: fewer than 3 nodes in window");
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) { mx += X[size_t(i)]; my += Y[size_t(i)]; }
    mx /= n; my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (X[size_t(i)] - mx) * (X[size_t(i)] - mx);
        sxy += (X[size_t(i)] - mx) * (Y[size_t(i)] - my);
    }
    double slope = sxy / sxx;
    double intercept = my - slope * mx;
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        double r = Y[size_t(i)] - (intercept + slope * X[size_t(i)]);
        ss += r * r;
    }
    TailFit fit;
    fit.x_lo = x_lo;
    fit.x_hi = x_hi;
    fit.side = side;
    fit.n_points = n;
    fit.slope = slope;
    fit.slope_stderr = n > 2 ? std::sqrt(ss / double(n - 2) / sxx) : 0.0;
    return fit;
}

WaveResult solve_wave(const Grid& grid, OperatorSpec spec, const Nonlinearity& nl,
                      const SimConfig& cfg, const WaveOptions& wopts) {
    WaveResult res;
    double R = wopts.eigen_R > 0.0 ? wopts.eigen_R : 0.5 * grid.L;

    NonlocalOperator op_a(grid, spec, nl.linearization());
    EigenResult er = principal_eigen(op_a, R, wopts.eigen_opts);
    res.lambda1 = er.lambda1;

    NonlocalOperator op_lin(grid, spec, Field(grid, 0.0));
    ImexStepper stepper(op_lin, nl, cfg.dt);

    // from below: largest eps in the ladder whose first step does not decrease;
    // with lambda1 >= 0 no scale works (the only nonnegative steady state is
    // zero), so run from the first ladder entry and let it go extinct
    Field phi = er.eigenfunction;
    double eps = wopts.epsilon_start;
    Field u_lo(grid, 0.0);
    bool found = false;
    if (er.lambda1 >= -1e-12) {
        for (int i = 0; i < grid.N; ++i) u_lo[i] = eps * phi[i];
        found = true;
    }
    for (int t = 0; !found && t < wopts.epsilon_ladder; ++t, eps *= 0.5) {
        Field cand(grid, 0.0);
        for (int i = 0; i < grid.N; ++i) cand[i] = eps * phi[i];
        Field one = stepper.step(cand);
        double worst = 0.0;
        for (int i = 0; i < grid.N; ++i)
            worst = std::min(worst, one[i] - cand[i]);
        if (worst >= -1e-13 * std::max(1.0, eps)) {
            u_lo = cand;
            found = true;
            break;
        }
    }
    if (!found)
        throw NumericError("solve_wave: no subsolution scale found "
                           "(is lambda1 < 0 on the chosen R?)");

    double M = wopts.supersolution_level > 0.0 ? wopts.supersolution_level
                                               : nl.saturation();
    for (int i = 0; i < grid.N; ++i) {
        double fx = nl.f_at(i, M);
        if (fx > 1e-12)
            throw ConfigError("solve_wave: supersolution level M has f(x,M) > 0");
    }
    Field u_hi(grid, M);

    Trajectory below = evolve(op_lin, nl, u_lo, cfg);
    Trajectory above = evolve(op_lin, nl, u_hi, cfg);

    auto pack = [&](const Trajectory& t, WaveProvenance prov) {
        WaveProfile w;
        w.profile = t.final_state;
        w.provenance = prov;
        w.outcome = t.outcome;
        w.monotone_flag = t.monotone_flag;
        Field lin = op_lin.apply_linear(t.final_state);
        double r = 0.0;
        for (int i = 0; i < grid.N; ++i)
            r = std::max(r, std::abs(lin[i] + nl.f_at(i, t.final_state[i])));
        w.residual = r;
        return w;
    };
    res.from_below = pack(below, WaveProvenance::FromSubsolution);
    res.from_above = pack(above, WaveProvenance::FromSupersolution);
    res.partial = below.outcome == Outcome::HorizonReached ||
                  above.outcome == Outcome::HorizonReached;
    double gap = 0.0;
    for (int i = 0; i < grid.N; ++i)
        gap = std::max(gap,
                       std::abs(res.from_below.profile[i] - res.from_above.profile[i]));
    res.gap = gap;
    res.uniqueness_flag = gap > 100.0 * cfg.steady_tol;
    return res;
}

} // namespace fkpp
