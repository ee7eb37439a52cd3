#pragma once

#include <vector>

#include "fkpp/grid.hpp"

namespace fkpp {

/// Normalization constant C_s = 2^{2s} s Gamma(1/2+s) / (sqrt(pi) Gamma(1-s)).
double c_s_constant(double s);

/// Discrete kernel of Delta^s = -(-Delta)^s on a uniform grid, Unit normalization.
///
/// The operator acts on second differences:
///     (Delta^s u)_i = h^{-2s} * [ sum_{k>=1} w_k (u_{i+k} + u_{i-k} - 2 u_i) ]
/// with off-grid samples supplied by the field's extension policy.
///
/// Weights come from exact integration of z^{-1-2s} against the piecewise-linear
/// interpolant of the second difference, with three refinements (all validated
/// against the symbol |xi|^{2s} and the M-matrix sign requirements):
///   - the second-moment channel: the z^2 part of the integrand is integrated
///     exactly on [0, W] (W = subtract_window), which both removes the singular
///     cell and keeps the discrete second moment exact;
///   - a Numerov-type composition w <- w - conv(w, [1,-2,1])/12 cancelling the
///     remaining theta^2/12 symbol defect of linear interpolation;
///   - a positivity clip: any w_k pushed negative by the composition (only near
///     s -> 1) is zeroed and its second moment folded back into w_1.
/// All w_k >= 0, so the discrete -Delta^s + nu has M-matrix structure.
struct KernelWeights {
    Grid grid;
    double s = 0.75;
    int k_store = 0;             ///< weights stored for offsets 1..k_store (>= N)
    int subtract_cells = 2;      ///< m: second-moment window W = m*h
    std::vector<double> w;       ///< w[k], k = 0..k_store; w[0] unused (= 0)
    std::vector<double> suffix;  ///< suffix[k] = sum_{j>k} w_j incl. closed-form tail
    double total_mass = 0.0;     ///< sum_{k>=1} w_k  (== suffix[0])
    double hpow = 1.0;           ///< h^{-2s}

    /// Kernel mass beyond offset K (per side), in row units.
    double mass_beyond(int K) const {
        return suffix[static_cast<size_t>(std::min(K, k_store))];
    }
};

/// Assemble weights for the given grid and order. `extra_offsets` extends the
/// stored row beyond the on-grid range (ghost padding needs it).
KernelWeights build_kernel(const Grid& grid, double s, int extra_offsets = 1);

} // namespace fkpp
