#include "fkpp/operator.hpp"

#include <algorithm>
#include <cmath>

#include "fkpp/quadrature.hpp"
#include "fft_conv.hpp"

namespace fkpp {

namespace {

// integral of the rising ramp times z^{-1-2s} over [z0, z0+h] plus the pure
// kernel mass beyond z0+h (physical units); the hat-consistent continuum mass
double ramped_kernel_mass(double z0, double h, double s) {
    double t0 = z0 / h;
    double I1 = (std::pow(t0, 1.0 - 2.0 * s) - std::pow(t0 + 1.0, 1.0 - 2.0 * s)) /
                (2.0 * s - 1.0);
    double I0 = (std::pow(t0, -2.0 * s) - std::pow(t0 + 1.0, -2.0 * s)) / (2.0 * s);
    return std::pow(h, -2.0 * s) *
           (I1 - t0 * I0 + std::pow(t0 + 1.0, -2.0 * s) / (2.0 * s));
}

// integral of ramp(z) fn(xi + side z) z^{-1-2s} over [z0, inf); the ramp rises
// over [z0, z0+h]. Oscillatory callbacks are integrated on resolved panels.
double analytic_fn_tail(const AnalyticExt& ae, double xi, int side, double z0,
                        double h, double s, double abs_tol) {
    if (!(ae.envelope_power < 2.0 * s))
        throw ConfigError("Analytic extension: envelope_power must stay below 2s");
    auto integrand = [&](double z) {
        double ramp = std::min(1.0, std::max(0.0, (z - z0) / h));
        return ramp * ae.fn(xi + side * z) * std::pow(z, -1.0 - 2.0 * s);
    };
    std::vector<double> splits;
    splits.push_back(z0 + h);
    for (double kink : ae.kinks) {
        double zk = side * (kink - xi);
        if (zk > z0) splits.push_back(zk);
    }
    double zfar = z0 + h;
    for (double sp : splits) zfar = std::max(zfar, sp);
    zfar = std::max(2.0 * zfar, 2.0 * z0);
    const double q = ae.envelope_power;
    const double p_eff = 1.0 + 2.0 * s - q;
    const double env = std::max(std::abs(ae.envelope), 1e-300) *
                       std::pow(1.0 + std::abs(xi) / z0, std::abs(q));
    double head = 0.0;
    if (ae.oscillation_scale > 0.0) {
        std::sort(splits.begin(), splits.end());
        double lo = z0;
        for (double sp : splits) {
            if (sp > lo && sp < zfar) {
                head += integrate_resolved(integrand, lo, sp,
                                           ae.oscillation_scale / 3.0).value;
                lo = sp;
            }
        }
        head += integrate_resolved(integrand, lo, zfar, ae.oscillation_scale / 3.0)
                    .value;
        head += integrate_oscillatory_tail(integrand, zfar, p_eff, env,
                                           ae.oscillation_scale, 0.5 * abs_tol)
                    .value;
    } else {
        head = integrate_with_splits(integrand, z0, zfar, splits, 0.5 * abs_tol).value;
        head += integrate_to_infinity(integrand, zfar, p_eff, env, 0.5 * abs_tol).value;
    }
    return head;
}

int pad_width(const Field& u) {
    // Zero/Constant exteriors are handled in closed form; sampled ghosts are
    // only needed for PowerTail/Analytic. Pad by N so the series remainder
    // parameter |x_i| / z* stays <= 1/2 at every node.
    if (std::holds_alternative<PowerTailExt>(u.extension) ||
        std::holds_alternative<AnalyticExt>(u.extension))
        return u.grid.N;
    return 0;
}

} // namespace

NonlocalOperator::NonlocalOperator(const Grid& grid, const OperatorSpec& spec,
                                   Field potential)
    : grid_(grid), spec_(spec), a_(std::move(potential)) {
    if (!(spec.s > 0.5 && spec.s < 1.0))
        throw ConfigError("operator: s must lie in (0.5, 1)");
    if (a_.values.empty()) a_ = Field(grid, 0.0);
    if (!(a_.grid == grid)) throw ShapeError("potential grid mismatch");
    validate_field(a_);
    kernel_ = build_kernel(grid, spec.s, grid.N + 1);
    cs_ = spec.normalization == Normalization::Exact ? c_s_constant(spec.s) : 1.0;

    // Central keeps the nearest-neighbour coupling nonnegative iff
    // |c|/(2h) <= cs * h^{-2s} * w_1; otherwise fall back to Upwind.
    drift_ = spec.drift_scheme;
    if (drift_ == DriftScheme::Central && spec.c != 0.0) {
        double coupling = cs_ * kernel_.hpow * kernel_.w[1];
        if (std::abs(spec.c) / (2.0 * grid.h) > coupling) drift_ = DriftScheme::Upwind;
    }
    fft_ = std::make_unique<FftConvolver>(kernel_.w, grid.N - 1, grid.N);
}

NonlocalOperator::~NonlocalOperator() = default;
NonlocalOperator::NonlocalOperator(NonlocalOperator&&) noexcept = default;

NonlocalOperator make_frac_operator(const Grid& grid, const OperatorSpec& spec) {
    return NonlocalOperator(grid, spec, Field(grid, 0.0));
}

std::vector<double> NonlocalOperator::frac_values(const std::vector<double>& padded,
                                                  int pad, bool use_fft) const {
    const int N = grid_.N;
    const int n = N + 2 * pad;
    std::vector<double> conv(static_cast<size_t>(N), 0.0);
    if (use_fft && pad == 0) {
        fft_->convolve(padded.data(), conv.data());
    } else if (use_fft) {
        FftConvolver big(kernel_.w, n - 1, n);
        std::vector<double> out(static_cast<size_t>(n), 0.0);
        big.convolve(padded.data(), out.data());
        for (int i = 0; i < N; ++i)
            conv[static_cast<size_t>(i)] = out[static_cast<size_t>(i + pad)];
    } else {
        for (int i = 0; i < N; ++i) {
            const int ip = i + pad;
            double acc = 0.0;
            const int kmax = std::max(ip, n - 1 - ip);
            for (int k = 1; k <= kmax; ++k) {
                double pair = 0.0;
                if (ip - k >= 0) pair += padded[static_cast<size_t>(ip - k)];
                if (ip + k < n) pair += padded[static_cast<size_t>(ip + k)];
                acc += kernel_.w[static_cast<size_t>(k)] * pair;
            }
            conv[static_cast<size_t>(i)] = acc;
        }
    }
    return conv;
}

double NonlocalOperator::exterior_tail(const Field& u, int i, int side,
                                       int k_used) const {
    // integral of u_ext(x_i + side*z) * z^{-1-2s} over z > k_used*h (physical units)
    const double s = spec_.s;
    const double z0 = double(k_used) * grid_.h;
    const double xi = grid_.x(i);
    if (std::holds_alternative<ZeroExt>(u.extension)) return 0.0;
    if (const auto* ce = std::get_if<ConstantExt>(&u.extension)) {
        double g = side < 0 ? ce->left : ce->right;
        return g * kernel_.hpow * kernel_.mass_beyond(k_used);
    }
    if (const auto* pt = std::get_if<PowerTailExt>(&u.extension)) {
        // int_{z0}^inf A |x_i + side z|^{-beta} z^{-1-2s} dz, |x_i|/z0 < 1:
        // = A z0^{-beta-2s} sum_n binom(-beta, n) q^n / (beta + 2s + n), q = side*x_i/z0
        double A = side < 0 ? pt->amplitude_left : pt->amplitude_right;
        if (A == 0.0) return 0.0;
        double beta = pt->exponent;
        double q = side * xi / z0;
        double term = 1.0, sum = 0.0, binom = 1.0;
        for (int n = 0; n < 200; ++n) {
            double piece = binom * term / (beta + 2.0 * s + double(n));
            sum += piece;
            if (std::abs(piece) < 1e-16 * std::abs(sum) && n > 2) break;
            binom *= (-beta - double(n)) / double(n + 1);
            term *= q;
        }
        return A * std::pow(z0, -beta - 2.0 * s) * sum;
    }
    const auto& ae = std::get<AnalyticExt>(u.extension);
    return analytic_fn_tail(ae, xi, side, z0, grid_.h, s, spec_.analytic_tail_tol);
}

Field NonlocalOperator::frac_apply(const Field& u, bool force_dense) const {
    if (!(u.grid == grid_)) throw ShapeError("frac_apply: field grid mismatch");
    for (double v : u.values)
        if (!std::isfinite(v)) throw NumericError("frac_apply: NaN in input field");

    const int N = grid_.N;
    const int pad = pad_width(u);
    std::vector<double> padded(static_cast<size_t>(N + 2 * pad));
    for (int i = 0; i < N; ++i) padded[static_cast<size_t>(i + pad)] = u[i];
    for (int p = 1; p <= pad; ++p) {
        padded[static_cast<size_t>(pad - p)] = u.exterior_value(-grid_.L - p * grid_.h);
        padded[static_cast<size_t>(pad + N - 1 + p)] =
            u.exterior_value(grid_.L + p * grid_.h);
    }
    const bool use_fft = !force_dense && N >= spec_.fft_threshold;
    std::vector<double> conv = frac_values(padded, pad, use_fft);

    Field out(grid_);
    const double scale = cs_ * kernel_.hpow;
    for (int i = 0; i < N; ++i) {
        double v = conv[static_cast<size_t>(i)] - 2.0 * kernel_.total_mass * u[i];
        double tails = 0.0;  // row units
        if (pad == 0) {
            if (const auto* ce = std::get_if<ConstantExt>(&u.extension)) {
                tails += ce->left * kernel_.mass_beyond(i);
                tails += ce->right * kernel_.mass_beyond(N - 1 - i);
            }
        } else {
            tails += exterior_tail(u, i, -1, i + pad) / kernel_.hpow;
            tails += exterior_tail(u, i, +1, N - 1 - i + pad) / kernel_.hpow;
        }
        out[i] = scale * (v + tails);
    }
    return out;
}

double NonlocalOperator::drift_at(const Field& u, int i) const {
    const int N = grid_.N;
    auto val = [&](int j) {
        if (j < 0) return u.exterior_value(-grid_.L - grid_.h);
        if (j >= N) return u.exterior_value(grid_.L + grid_.h);
        return u[j];
    };
    if (drift_ == DriftScheme::Central)
        return (val(i + 1) - val(i - 1)) / (2.0 * grid_.h);
    if (spec_.c > 0.0) return (val(i + 1) - u[i]) / grid_.h;
    return (u[i] - val(i - 1)) / grid_.h;
}

Field NonlocalOperator::apply_linear(const Field& u) const {
    Field out = frac_apply(u);
    if (spec_.c != 0.0)
        for (int i = 0; i < grid_.N; ++i) out[i] += spec_.c * drift_at(u, i);
    return out;
}

Field NonlocalOperator::apply(const Field& u) const {
    Field out = apply_linear(u);
    for (int i = 0; i < grid_.N; ++i) out[i] += a_[i] * u[i];
    return out;
}

double NonlocalOperator::apply_at(const Field& u, int i, double window) const {
    if (!(u.grid == grid_)) throw ShapeError("apply_at: field grid mismatch");
    const int N = grid_.N;
    const double s = spec_.s;
    const double xi = grid_.x(i);
    const bool analytic = std::holds_alternative<AnalyticExt>(u.extension);
    if (std::isfinite(window) && !analytic)
        throw ConfigError("apply_at: windowed evaluation requires an Analytic extension");
    const int k_win = std::isfinite(window)
                          ? std::max(1, int(std::floor(window / grid_.h)))
                          : kernel_.k_store;

    double acc = 0.0;  // row units
    int used[2];
    for (int side : {-1, +1}) {
        int on_grid = side < 0 ? i : N - 1 - i;
        int k_used = std::min(on_grid, k_win);
        for (int k = 1; k <= k_used; ++k)
            acc += kernel_.w[static_cast<size_t>(k)] * (u[i + side * k] - u[i]);
        if (k_used == 0) {  // boundary node: singular-cell neighbour is a ghost
            double ghost = u.exterior_value(xi + side * grid_.h);
            acc += kernel_.w[1] * (ghost - u[i]);
            k_used = 1;
        }
        used[side < 0 ? 0 : 1] = k_used;
    }
    double frac = kernel_.hpow * acc;  // physical units from here on

    for (int side : {-1, +1}) {
        int k_used = used[side < 0 ? 0 : 1];
        double z0 = double(k_used) * grid_.h;
        if (analytic) {
            const auto& ae = std::get<AnalyticExt>(u.extension);
            frac += analytic_fn_tail(ae, xi, side, z0, grid_.h, s,
                                     spec_.analytic_tail_tol);
            frac -= u[i] * ramped_kernel_mass(z0, grid_.h, s);
        } else {
            frac -= u[i] * kernel_.hpow * kernel_.mass_beyond(k_used);
            if (!std::holds_alternative<ZeroExt>(u.extension))
                frac += exterior_tail(u, i, side, k_used);
        }
    }
    frac *= cs_;

    double result = frac + a_[i] * u[i];
    if (spec_.c != 0.0) result += spec_.c * drift_at(u, i);
    return result;
}

Eigen::MatrixXd NonlocalOperator::to_dense() const {
    const int N = grid_.N;
    if (N > spec_.dense_cap)
        throw NumericError("to_dense: N exceeds dense cap (raise dense_cap)");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
    const double scale = cs_ * kernel_.hpow;
    for (int i = 0; i < N; ++i) {
        for (int k = 1; k <= std::max(i, N - 1 - i); ++k) {
            double wk = scale * kernel_.w[static_cast<size_t>(k)];
            if (i - k >= 0) M(i, i - k) += wk;
            if (i + k <= N - 1) M(i, i + k) += wk;
        }
        M(i, i) -= scale * 2.0 * kernel_.total_mass;
        M(i, i) += a_[i];
    }
    const double c = spec_.c;
    if (c != 0.0) {
        for (int i = 0; i < N; ++i) {
            if (drift_ == DriftScheme::Central) {
                if (i + 1 < N) M(i, i + 1) += c / (2.0 * grid_.h);
                if (i - 1 >= 0) M(i, i - 1) -= c / (2.0 * grid_.h);
            } else if (c > 0.0) {
                if (i + 1 < N) M(i, i + 1) += c / grid_.h;
                M(i, i) -= c / grid_.h;
            } else {
                M(i, i) += c / grid_.h;
                if (i - 1 >= 0) M(i, i - 1) -= c / grid_.h;
            }
        }
    }
    return M;
}

} // namespace fkpp
