#include "fkpp/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fkpp/quadrature.hpp"

namespace fkpp {

Grid make_grid(double L, int N) {
    if (N < 3) throw ConfigError("make_grid: N must be >= 3");
    if (!(L > 0.0)) throw ConfigError("make_grid: L must be positive");
    Grid g;
    g.L = L;
    g.N = N;
    g.h = 2.0 * L / double(N - 1);
    return g;
}

double Field::exterior_value(double y) const {
    struct Visitor {
        double y;
        const Field* f;
        double operator()(const ZeroExt&) const { return 0.0; }
        double operator()(const ConstantExt& e) const {
            return y < 0 ? e.left : e.right;
        }
        double operator()(const PowerTailExt& e) const {
            double amp = y < 0 ? e.amplitude_left : e.amplitude_right;
            return amp * std::pow(std::abs(y), -e.exponent);
        }
        double operator()(const AnalyticExt& e) const { return e.fn(y); }
    };
    return std::visit(Visitor{y, this}, extension);
}

double Field::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double Field::max() const { return *std::max_element(values.begin(), values.end()); }
double Field::min() const { return *std::min_element(values.begin(), values.end()); }

Field make_field(const Grid& g, const std::function<double(double)>& f, Extension ext) {
    Field out(g);
    for (int i = 0; i < g.N; ++i) out[i] = f(g.x(i));
    out.extension = std::move(ext);
    return out;
}

void validate_field(const Field& f) {
    if (int(f.values.size()) != f.grid.N)
        throw ShapeError("field has wrong number of values");
    for (double v : f.values)
        if (!std::isfinite(v)) throw NumericError("field contains non-finite value");
    if (const auto* pt = std::get_if<PowerTailExt>(&f.extension)) {
        if (!(pt->exponent > 1.0))
            throw ConfigError("PowerTail exponent must exceed 1");
    }
}

double weighted_l1_norm(const Field& f, const WeightedNormSpec& spec) {
    if (!(spec.s > 0.5 && spec.s < 1.0))
        throw ConfigError("weighted norm: s must lie in (0.5, 1)");
    validate_field(f);
    const Grid& g = f.grid;
    const double p = 1.0 + 2.0 * spec.s;
    auto wt = [p](double y) { return 1.0 / (1.0 + std::pow(std::abs(y), p)); };

    double interior = 0.0;
    for (int i = 0; i + 1 < g.N; ++i) {
        double a = std::abs(f[i]) * wt(g.x(i));
        double b = std::abs(f[i + 1]) * wt(g.x(i + 1));
        interior += 0.5 * g.h * (a + b);
    }

    // tail over |y| > L per extension
    double tail = 0.0;
    const double tol = 1e-13;
    struct TailVisitor {
        const Field* f;
        double L, p, tol;
        double operator()(const ZeroExt&) const { return 0.0; }
        double operator()(const ConstantExt& e) const {
            double t = 0.0;
            for (double c : {e.left, e.right}) {
                if (c == 0.0) continue;
                auto integrand = [this](double y) { return 1.0 / (1.0 + std::pow(y, p)); };
                t += std::abs(c) * integrate_to_infinity(integrand, L, p, 1.0, tol).value;
            }
            return t;
        }
        double operator()(const PowerTailExt& e) const {
            double t = 0.0;
            for (double amp : {e.amplitude_left, e.amplitude_right}) {
                if (amp == 0.0) continue;
                auto integrand = [this, &e](double y) {
                    return std::pow(y, -e.exponent) / (1.0 + std::pow(y, p));
                };
                t += std::abs(amp) *
                     integrate_to_infinity(integrand, L, p + e.exponent, 1.0, tol).value;
            }
            return t;
        }
        double operator()(const AnalyticExt& e) const {
            auto right = [this, &e](double y) {
                return std::abs(e.fn(y)) / (1.0 + std::pow(y, p));
            };
            auto left = [this, &e](double y) {
                return std::abs(e.fn(-y)) / (1.0 + std::pow(y, p));
            };
            double env = std::max(e.envelope, 1e-300);
            return integrate_to_infinity(right, L, p, env, tol).value +
                   integrate_to_infinity(left, L, p, env, tol).value;
        }
    };
    tail = std::visit(TailVisitor{&f, g.L, p, tol}, f.extension);
    return interior + tail;
}

} // namespace fkpp
