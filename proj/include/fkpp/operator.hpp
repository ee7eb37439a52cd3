#pragma once

#include <limits>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "fkpp/grid.hpp"
#include "fkpp/kernel.hpp"

namespace fkpp {

enum class Normalization { Unit, Exact };
enum class DriftScheme { Central, Upwind };

struct OperatorSpec {
    double s = 0.75;
    double c = 0.0;
    Normalization normalization = Normalization::Unit;  ///< Exact multiplies by C_s
    DriftScheme drift_scheme = DriftScheme::Central;
    int dense_cap = 4096;       ///< max N for to_dense
    int fft_threshold = 512;    ///< apply() uses the FFT path for N >= this
    double analytic_tail_tol = 1e-8;  ///< abs tolerance for Analytic tail quadrature
};

class FftConvolver;

/// Discrete L_{c,a} = Delta^s + c d/dx + a(x) on a uniform grid.
///
/// Immutable after assembly; apply() is reentrant (FFT work buffers are
/// per-call). The exterior model comes from the *field* being applied to.
class NonlocalOperator {
public:
    NonlocalOperator(const Grid& grid, const OperatorSpec& spec, Field potential);

    const Grid& grid() const { return grid_; }
    const OperatorSpec& spec() const { return spec_; }
    const KernelWeights& kernel() const { return kernel_; }
    const Field& potential() const { return a_; }
    double cs_factor() const { return cs_; }
    DriftScheme effective_drift() const { return drift_; }

    /// Full operator L_{c,a} u, nodewise.
    Field apply(const Field& u) const;

    /// Linear transport part only: Delta^s u + c u'.
    Field apply_linear(const Field& u) const;

    /// Fractional part only. `force_dense` bypasses the FFT path (oracle).
    Field frac_apply(const Field& u, bool force_dense = false) const;

    /// Pointwise L_{c,a} u(x_i) with exact-extension tail quadrature. For
    /// fields with Analytic extension, `window` (in length units) limits the
    /// sampled-data region; beyond it the callback is integrated directly.
    double apply_at(const Field& u, int i,
                    double window = std::numeric_limits<double>::infinity()) const;

    /// Dense matrix with Zero-exterior semantics: M*v == apply(v, ZeroExt).
    Eigen::MatrixXd to_dense() const;

    ~NonlocalOperator();
    NonlocalOperator(NonlocalOperator&&) noexcept;

private:
    Grid grid_;
    OperatorSpec spec_;
    KernelWeights kernel_;
    Field a_;
    double cs_ = 1.0;
    DriftScheme drift_ = DriftScheme::Central;
    std::unique_ptr<FftConvolver> fft_;  // plan cache for the unpadded row

    std::vector<double> frac_values(const std::vector<double>& padded, int pad,
                                    bool use_fft) const;
    double drift_at(const Field& u, int i) const;
    double exterior_tail(const Field& u, int i, int side, int k_used) const;
};

/// Convenience: operator with a == 0.
NonlocalOperator make_frac_operator(const Grid& grid, const OperatorSpec& spec);

} // namespace fkpp
