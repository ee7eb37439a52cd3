#include "fkpp/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace fkpp {

double c_s_constant(double s) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("c_s_constant: s must lie in (0,1)");
    return std::pow(2.0, 2.0 * s) * s * std::tgamma(0.5 + s) /
           (std::sqrt(M_PI) * std::tgamma(1.0 - s));
}

namespace {

// elementary cell integrals in k-units, k >= 1
// I0(k) = int_k^{k+1} t^{-1-2s} dt,  I1(k) = int_k^{k+1} t^{-2s} dt
double cell_I0(double k, double s) {
    return (std::pow(k, -2.0 * s) - std::pow(k + 1.0, -2.0 * s)) / (2.0 * s);
}
double cell_I1(double k, double s) {
    return (std::pow(k, 1.0 - 2.0 * s) - std::pow(k + 1.0, 1.0 - 2.0 * s)) /
           (2.0 * s - 1.0);
}
double hat_rise(int k, double s) {  // ramp up over [k-1, k]
    return cell_I1(k - 1.0, s) - (k - 1.0) * cell_I0(k - 1.0, s);
}
double hat_fall(int k, double s) {  // ramp down over [k, k+1]
    return (k + 1.0) * cell_I0(double(k), s) - cell_I1(double(k), s);
}
double hat_full(int k, double s) { return hat_rise(k, s) + hat_fall(k, s); }

// sum_{j > K} of full hat weights, closed form
double hat_tail_sum(int K, double s) {
    return cell_I1(double(K), s) - double(K) * cell_I0(double(K), s) +
           std::pow(K + 1.0, -2.0 * s) / (2.0 * s);
}

} // namespace

KernelWeights build_kernel(const Grid& grid, double s, int extra_offsets) {
    if (!(s > 0.5 && s < 1.0)) throw ConfigError("build_kernel: s must lie in (0.5, 1)");
    KernelWeights K;
    K.grid = grid;
    K.s = s;
    K.hpow = std::pow(grid.h, -2.0 * s);
    K.k_store = grid.N - 1 + std::max(1, extra_offsets);
    const int ks = K.k_store;

    // base hat row (one extra entry for the Numerov stencil)
    std::vector<double> base(static_cast<size_t>(ks) + 2, 0.0);
    base[1] = hat_fall(1, s);
    for (int k = 2; k <= ks + 1; ++k) base[static_cast<size_t>(k)] = hat_full(k, s);

    // second-moment channel on [0, W], W ~ L/4
    int m = int(std::lround(0.25 * grid.L / grid.h));
    m = std::clamp(m, 2, ks);
    K.subtract_cells = m;
    double CA = std::pow(double(m), 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
    CA -= base[1] * 1.0;
    for (int k = 2; k < m; ++k) CA -= base[static_cast<size_t>(k)] * double(k) * double(k);
    CA -= hat_rise(m, s) * double(m) * double(m);
    base[1] += CA;

    // Numerov composition: w_k = base_k - (base_{k-1} - 2 base_k + base_{k+1})/12
    double base_total = hat_tail_sum(ks + 1, s);
    for (int k = 1; k <= ks + 1; ++k) base_total += base[static_cast<size_t>(k)];
    const double w0 = -2.0 * base_total;
    K.w.assign(static_cast<size_t>(ks) + 1, 0.0);
    K.w[1] = base[1] - (w0 - 2.0 * base[1] + base[2]) / 12.0;
    for (int k = 2; k <= ks; ++k)
        K.w[static_cast<size_t>(k)] =
            base[static_cast<size_t>(k)] -
            (base[static_cast<size_t>(k) - 1] - 2.0 * base[static_cast<size_t>(k)] +
             base[static_cast<size_t>(k) + 1]) / 12.0;

    // positivity clip, preserving the second moment through w_1
    double moved = 0.0;
    for (int k = 2; k <= ks; ++k) {
        double& wk = K.w[static_cast<size_t>(k)];
        if (wk < 0.0) {
            moved += -wk * double(k) * double(k);
            wk = 0.0;
        }
    }
    K.w[1] -= moved;

    // suffix masses; beyond k_store the Numerov telescope leaves
    // sum_{k>K} w_k = sum_{k>K} base_k - (base_K - base_{K+1})/12
    double tail_beyond = hat_tail_sum(ks, s) -
                         (base[static_cast<size_t>(ks)] - base[static_cast<size_t>(ks) + 1]) / 12.0;
    K.suffix.assign(static_cast<size_t>(ks) + 1, 0.0);
    K.suffix[static_cast<size_t>(ks)] = tail_beyond;
    for (int k = ks - 1; k >= 0; --k)
        K.suffix[static_cast<size_t>(k)] =
            K.suffix[static_cast<size_t>(k) + 1] + K.w[static_cast<size_t>(k) + 1];
    K.total_mass = K.suffix[0];
    return K;
}

} // namespace fkpp
