#include "fkpp/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace fkpp {

struct ImexStepper::Impl {
    const NonlocalOperator* op;
    const Nonlinearity* nl;
    double dt;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    // a Constant exterior tracks the boundary values during evolution; the
    // tracked coupling enters the implicit matrix through two extra columns
    mutable std::unique_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_tracked;
    Eigen::MatrixXd lin;  // I - dt * transport, kept for the tracked variant

    // with a Constant exterior the far field tracks the boundary node values
    // (the truncation of a spatially uniform state must stay uniform); the
    // coupling is linear in u[0], u[N-1] and goes into the implicit matrix
    const Eigen::PartialPivLU<Eigen::MatrixXd>& tracked_lu() const {
        if (!lu_tracked) {
            const Grid& g = op->grid();
            const KernelWeights& K = op->kernel();
            double scale = op->cs_factor() * K.hpow;
            Eigen::MatrixXd M = lin;
            for (int i = 0; i < g.N; ++i) {
                M(i, 0) -= dt * scale * K.mass_beyond(i);
                M(i, g.N - 1) -= dt * scale * K.mass_beyond(g.N - 1 - i);
            }
            double c = op->spec().c;
            if (c != 0.0) {
                if (op->effective_drift() == DriftScheme::Central) {
                    M(0, 0) -= dt * (-c / (2.0 * g.h));
                    M(g.N - 1, g.N - 1) -= dt * (c / (2.0 * g.h));
                } else if (c > 0.0) {
                    M(g.N - 1, g.N - 1) -= dt * (c / g.h);
                } else {
                    M(0, 0) -= dt * (-c / g.h);
                }
            }
            lu_tracked = std::make_unique<Eigen::PartialPivLU<Eigen::MatrixXd>>(M);
        }
        return *lu_tracked;
    }
};

ImexStepper::ImexStepper(const NonlocalOperator& op, const Nonlinearity& nl,
                         double dt)
    : impl_(std::make_unique<Impl>()) {
    if (!(dt > 0.0)) throw ConfigError("ImexStepper: dt must be positive");
    impl_->op = &op;
    impl_->nl = &nl;
    impl_->dt = dt;
    Eigen::MatrixXd lin = op.to_dense();
    const int N = op.grid().N;
    for (int i = 0; i < N; ++i) lin(i, i) -= op.potential()[i];
    impl_->lin = Eigen::MatrixXd::Identity(N, N) - dt * lin;
    impl_->lu.compute(impl_->lin);
}

ImexStepper::~ImexStepper() = default;
ImexStepper::ImexStepper(ImexStepper&&) noexcept = default;

Field ImexStepper::step(const Field& u, int coeff_shift) const {
    const Grid& g = impl_->op->grid();
    const int N = g.N;
    const Nonlinearity& nl = *impl_->nl;
    const bool tracked = std::holds_alternative<ConstantExt>(u.extension);
    if (!tracked && !std::holds_alternative<ZeroExt>(u.extension))
        throw ConfigError("evolution supports Zero or Constant exteriors only");
    Eigen::VectorXd rhs(N);
    if (coeff_shift == 0) {
        for (int i = 0; i < N; ++i)
            rhs(i) = u[i] + impl_->dt * nl.f_at(i, u[i]);
    } else if (nl.is_model()) {
        // reaction coefficient sampled at x - shift*h; outside the grid the
        // linearization takes its far-field value
        const Field& a = nl.linearization();
        for (int i = 0; i < N; ++i) {
            int j = i - coeff_shift;
            double ai = (j >= 0 && j < N)
                            ? a[j]
                            : a.exterior_value(j < 0 ? -g.L - g.h : g.L + g.h);
            double fi = u[i] * (ai - std::pow(std::max(u[i], 0.0),
                                              nl.p_exponent()));
            rhs(i) = u[i] + impl_->dt * fi;
        }
    } else {
        for (int i = 0; i < N; ++i) {
            double x_shifted = g.x(i) - double(coeff_shift) * g.h;
            rhs(i) = u[i] + impl_->dt * nl.f(x_shifted, u[i]);
        }
    }
    Eigen::VectorXd next =
        tracked ? impl_->tracked_lu().solve(rhs) : impl_->lu.solve(rhs);
    if (!next.allFinite()) throw NumericError("ImexStepper: linear solve produced non-finite values");
    Field out(g);
    for (int i = 0; i < N; ++i) out[i] = next(i);
    out.extension = u.extension;
    if (tracked) out.extension = ConstantExt{out[0], out[N - 1]};
    return out;
}

double ImexStepper::dt() const { return impl_->dt; }

namespace {

Monotonicity classify_monotonicity(const std::vector<Field>& snaps, double tol) {
    if (snaps.size() < 2) return Monotonicity::Neither;
    bool noninc = true, nondec = true;
    for (size_t k = 0; k + 1 < snaps.size(); ++k) {
        for (size_t i = 0; i < snaps[k].values.size(); ++i) {
            double d = snaps[k + 1].values[i] - snaps[k].values[i];
            if (d > tol) noninc = false;
            if (d < -tol) nondec = false;
        }
        if (!noninc && !nondec) return Monotonicity::Neither;
    }
    if (noninc) return Monotonicity::Nonincreasing;
    if (nondec) return Monotonicity::Nondecreasing;
    return Monotonicity::Neither;
}

} // namespace

Trajectory evolve(const NonlocalOperator& op, const Nonlinearity& nl,
                  const Field& u0, const SimConfig& cfg) {
    validate_field(u0);
    if (u0.min() < 0.0)
        throw ConfigError("evolve: initial datum must be nonnegative");
    double B = std::max(u0.max(), nl.saturation()) + 1.0;
    if (cfg.dt * nl.lipschitz_bound(B) > 0.5)
        throw ConfigError("evolve: dt exceeds the reaction stability budget "
                          "(dt * Lip(f) must stay below 0.5)");

    ImexStepper stepper(op, nl, cfg.dt);
    Trajectory traj;
    Field u = u0;
    traj.times.push_back(0.0);
    traj.snapshots.push_back(u);

    const long max_steps = long(std::ceil(cfg.t_max / cfg.dt));
    int steady_streak = 0;
    bool neg_warned = false;
    double t = 0.0;
    for (long n = 1; n <= max_steps; ++n) {
        Field next;
        try {
            next = stepper.step(u);
        } catch (const NumericError& e) {
            throw NumericError(std::string(e.what()) + " (blow-up at t=" +
                               std::to_string(double(n - 1) * cfg.dt) +
                               "; last valid snapshot at t=" +
                               std::to_string(traj.times.back()) + ")");
        }
        t = double(n) * cfg.dt;
        if (!neg_warned && next.min() < -1e-12) {
            traj.warnings.push_back(
                "negative values from nonnegative data (comparison-principle "
                "violation: reduce dt or use Upwind drift)");
            neg_warned = true;
        }
        double rate = 0.0;
        for (size_t i = 0; i < next.values.size(); ++i)
            rate = std::max(rate, std::abs(next.values[i] - u.values[i]));
        rate /= cfg.dt;
        u = std::move(next);
        if (n % cfg.snapshot_stride == 0) {
            traj.times.push_back(t);
            traj.snapshots.push_back(u);
        }
        if (u.max_abs() < cfg.extinction_tol) {
            traj.outcome = Outcome::Extinct;
            break;
        }
        steady_streak = rate < cfg.steady_tol ? steady_streak + 1 : 0;
        if (steady_streak >= 10) {
            traj.outcome = Outcome::Steady;
            break;
        }
        if (n == max_steps) traj.outcome = Outcome::HorizonReached;
    }
    if (traj.times.back() != t) {
        traj.times.push_back(t);
        traj.snapshots.push_back(u);
    }
    traj.final_state = u;
    traj.final_time = t;
    traj.monotone_flag = classify_monotonicity(traj.snapshots, 1e-10);
    if (traj.outcome == Outcome::Steady) {
        Field lin = op.apply_linear(u);
        double r = 0.0;
        for (int i = 0; i < op.grid().N; ++i)
            r = std::max(r, std::abs(lin[i] + nl.f_at(i, u[i])));
        traj.steady_residual = r;
    }
    return traj;
}

FrameCheck frame_equivalence_check(const Grid& grid, OperatorSpec spec,
                                   const Nonlinearity& nl, const Field& u0,
                                   double c, double T, int edge_margin) {
    FrameCheck fc;
    if (c == 0.0) {
        fc.dt = grid.h;
    } else {
        fc.dt = grid.h / std::abs(c);
    }
    double steps_exact = T / fc.dt;
    fc.steps = int(std::lround(steps_exact));
    if (std::abs(steps_exact - double(fc.steps)) > 1e-9)
        throw ConfigError("frame_equivalence_check: horizon not commensurate "
                          "with c dt = h stepping");

    // moving frame: drift c, static coefficient
    spec.c = c;
    NonlocalOperator op_mov(grid, spec, Field(grid, 0.0));
    ImexStepper mov(op_mov, nl, fc.dt);
    // fixed frame: no drift, coefficient shifted one node per step
    OperatorSpec spec0 = spec;
    spec0.c = 0.0;
    NonlocalOperator op_fix(grid, spec0, Field(grid, 0.0));
    ImexStepper fix(op_fix, nl, fc.dt);

    Field u = u0, v = u0;
    u.extension = ZeroExt{};
    v.extension = ZeroExt{};
    const int N = grid.N;
    const int dir = c > 0.0 ? 1 : (c < 0.0 ? -1 : 0);
    double gap = 0.0;
    for (int n = 1; n <= fc.steps; ++n) {
        u = mov.step(u);
        v = fix.step(v, dir * n);
        // compare v(x + c t) with u(x) on the overlap
        int shift = dir * n;
        for (int i = edge_margin; i < N - edge_margin; ++i) {
            int j = i + shift;
            if (j < 0 || j >= N) continue;
            gap = std::max(gap, std::abs(v[j] - u[i]));
        }
    }
    fc.gap = gap;
    return fc;
}

} // namespace fkpp
