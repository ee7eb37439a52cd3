#include "fkpp/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "fkpp/errors.hpp"

namespace fkpp {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                     double b, double fb, double m, double fm, double whole,
                     double tol, int depth, bool& ok) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    double delta = left + right - whole;
    if (depth <= 0) {
        ok = ok && (std::abs(delta) <= 15.0 * tol);
        return left + right + delta / 15.0;
    }
    if (std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1, ok) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1, ok);
}

} // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol, int max_depth) {
    QuadResult r;
    if (a == b) return r;
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    bool ok = true;
    r.value = adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth, ok);
    r.error_estimate = abs_tol;
    r.converged = ok;
    return r;
}

QuadResult integrate_with_splits(const std::function<double(double)>& f, double a,
                                 double b, const std::vector<double>& splits,
                                 double abs_tol) {
    std::vector<double> pts;
    pts.push_back(a);
    for (double s : splits)
        if (s > a && s < b) pts.push_back(s);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    QuadResult total;
    double tol_each = abs_tol / double(pts.size());
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = integrate_adaptive(f, pts[i], pts[i + 1], tol_each);
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.converged = total.converged && r.converged;
    }
    return total;
}

QuadResult integrate_resolved(const std::function<double(double)>& f, double a,
                              double b, double panel_width) {
    // Gauss-Legendre 7-point nodes/weights on [-1, 1]
    static const double gx[7] = {-0.9491079123427585, -0.7415311855993945,
                                 -0.4058451513773972, 0.0,
                                 0.4058451513773972,  0.7415311855993945,
                                 0.9491079123427585};
    static const double gw[7] = {0.1294849661688697, 0.2797053914892767,
                                 0.3818300505051189, 0.4179591836734694,
                                 0.3818300505051189, 0.2797053914892767,
                                 0.1294849661688697};
    QuadResult r;
    if (a == b) return r;
    long panels = long(std::ceil((b - a) / panel_width));
    if (panels < 1) panels = 1;
    if (panels > 20'000'000)
        throw NumericError("integrate_resolved: panel budget exceeded");
    const double w = (b - a) / double(panels);
    double acc = 0.0;
    for (long k = 0; k < panels; ++k) {
        double lo = a + double(k) * w;
        double mid = lo + 0.5 * w;
        double half = 0.5 * w;
        double s = 0.0;
        for (int j = 0; j < 7; ++j) s += gw[j] * f(mid + half * gx[j]);
        acc += s * half;
    }
    r.value = acc;
    return r;
}

QuadResult integrate_oscillatory_tail(const std::function<double(double)>& f,
                                      double a, double p, double envelope,
                                      double scale, double abs_tol) {
    // truncation radius from the integration-by-parts remainder bound
    double Z = a;
    const double bound0 = envelope * scale * std::pow(a, -p);
    if (bound0 > abs_tol)
        Z = a * std::pow(bound0 / abs_tol, 1.0 / p);
    Z = std::max(Z, 2.0 * a);
    QuadResult r = integrate_resolved(f, a, Z, scale / 3.0);
    r.error_estimate = envelope * scale * std::pow(Z, -p);
    return r;
}

QuadResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                 double p, double envelope, double abs_tol) {
    QuadResult total;
    double lo = a;
    for (int block = 0; block < 64; ++block) {
        double hi = 2.0 * lo;
        QuadResult r = integrate_adaptive(f, lo, hi, 0.25 * abs_tol);
        total.value += r.value;
        total.converged = total.converged && r.converged;
        lo = hi;
        double remainder = envelope * std::pow(lo, 1.0 - p) / (p - 1.0);
        if (remainder < abs_tol) {
            total.error_estimate = remainder + 0.5 * abs_tol;
            return total;
        }
    }
    total.converged = false;
    total.error_estimate = envelope * std::pow(lo, 1.0 - p) / (p - 1.0);
    return total;
}

} // namespace fkpp
