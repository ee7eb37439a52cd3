#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "fkpp/errors.hpp"

namespace fkpp {

/// Uniform grid on [-L, L] with nodes at both endpoints.
struct Grid {
    double L = 1.0;
    int N = 3;
    double h = 1.0;

    /// Node position; linear blend so x(0) == -L and x(N-1) == L exactly.
    double x(int i) const {
        return (-L * double(N - 1 - i) + L * double(i)) / double(N - 1);
    }

    std::vector<double> nodes() const {
        std::vector<double> xs(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) xs[static_cast<size_t>(i)] = x(i);
        return xs;
    }

    bool operator==(const Grid& o) const { return L == o.L && N == o.N; }
};

Grid make_grid(double L, int N);

/// Exterior extension policies for fields on [-L, L].
struct ZeroExt {};
struct ConstantExt {
    double left = 0.0;
    double right = 0.0;
};
struct PowerTailExt {
    double amplitude_left = 0.0;
    double amplitude_right = 0.0;
    double exponent = 2.0;  // decay |y|^{-exponent}, exponent > 1
};
struct AnalyticExt {
    std::function<double(double)> fn;
    std::vector<double> kinks;    // known non-smooth points of fn (quadrature splits)
    double envelope = 1.0;        // |fn(y)| <= envelope * |y|^envelope_power
    double envelope_power = 0.0;  // must stay below 2s for integrable tails
    double oscillation_scale = 0.0;  // shortest wavelength of fn (0: non-oscillatory)
};
using Extension = std::variant<ZeroExt, ConstantExt, PowerTailExt, AnalyticExt>;

/// Sampled real field on a Grid plus a far-field model on |y| > L.
struct Field {
    Grid grid;
    std::vector<double> values;
    Extension extension = ZeroExt{};

    Field() = default;
    Field(const Grid& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.N), fill) {}

    double& operator[](int i) { return values[static_cast<size_t>(i)]; }
    double operator[](int i) const { return values[static_cast<size_t>(i)]; }

    /// Value of the far-field model at |y| > L.
    double exterior_value(double y) const;

    double max_abs() const;
    double max() const;
    double min() const;
};

Field make_field(const Grid& g, const std::function<double(double)>& f,
                 Extension ext = ZeroExt{});

void validate_field(const Field& f);

/// Fractional order bundle for the weighted L1 norm with weight 1/(1+|y|^{1+2s}).
struct WeightedNormSpec {
    double s = 0.75;
};

/// Trapezoid on [-L, L] plus the extension's tail contribution.
double weighted_l1_norm(const Field& f, const WeightedNormSpec& spec);

} // namespace fkpp
