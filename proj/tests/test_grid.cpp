#include "doctest.h"

#include <cmath>
#include <random>

#include "fkpp/grid.hpp"
#include "fkpp/quadrature.hpp"

using namespace fkpp;

TEST_CASE("make_grid basic shapes") {
    Grid g = make_grid(1.0, 3);
    CHECK(g.x(0) == -1.0);
    CHECK(g.x(1) == 0.0);
    CHECK(g.x(2) == 1.0);
    CHECK(g.h == 1.0);

    Grid g2 = make_grid(64.0, 2049);
    CHECK(g2.h == doctest::Approx(0.0625).epsilon(1e-15));
    CHECK(g2.x(0) == -64.0);
    CHECK(g2.x(2048) == 64.0);

    CHECK_THROWS_AS(make_grid(1.0, 2), ConfigError);
    CHECK_THROWS_AS(make_grid(-2.0, 33), ConfigError);
}

TEST_CASE("grid nodes strictly increasing, uniform") {
    Grid g = make_grid(7.0, 129);
    auto xs = g.nodes();
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        CHECK(xs[i + 1] > xs[i]);
        CHECK(xs[i + 1] - xs[i] == doctest::Approx(g.h).epsilon(1e-13));
    }
}

TEST_CASE("weighted_l1_norm zero field") {
    Grid g = make_grid(8.0, 257);
    Field f(g, 0.0);
    CHECK(weighted_l1_norm(f, {0.75}) == 0.0);
}

TEST_CASE("weighted_l1_norm of 1 on [-8,8], s=0.75, vs quadrature oracle") {
    // oracle: high-resolution adaptive quadrature of 1/(1+|y|^2.5) on [-8,8]
    const double oracle = 2.5838088912331246;
    Grid g = make_grid(8.0, 4097);
    Field f(g, 1.0);
    double v = weighted_l1_norm(f, {0.75});
    CHECK(v == doctest::Approx(oracle).epsilon(2e-7));  // trapezoid at h=1/256

    Grid gf = make_grid(8.0, 8193);
    Field ff(gf, 1.0);
    double vf = weighted_l1_norm(ff, {0.75});
    CHECK(std::abs(vf - oracle) < std::abs(v - oracle));  // refinement improves
}

TEST_CASE("weighted_l1_norm PowerTail tail piece vs oracle") {
    // amplitude 1, exponent 1+2s at s=0.75: tail = int_8^inf y^-2.5/(1+y^2.5) dy
    const double oracle_tail = 6.0828488352123121e-5;
    Grid g = make_grid(8.0, 257);
    Field zero_inside(g, 0.0);
    zero_inside.extension = PowerTailExt{1.0, 1.0, 2.5};
    double v = weighted_l1_norm(zero_inside, {0.75});
    CHECK(v == doctest::Approx(2.0 * oracle_tail).epsilon(1e-10));
}

TEST_CASE("weighted_l1_norm homogeneity and monotonicity") {
    Grid g = make_grid(8.0, 257);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Field f(g);
    for (int i = 0; i < g.N; ++i) f[i] = U(rng);
    double base = weighted_l1_norm(f, {0.6});
    for (double alpha : {-2.0, 0.5, 3.0}) {
        Field fa(g);
        for (int i = 0; i < g.N; ++i) fa[i] = alpha * f[i];
        double va = weighted_l1_norm(fa, {0.6});
        CHECK(va == doctest::Approx(std::abs(alpha) * base).epsilon(1e-12));
    }
    Field dom(g);
    for (int i = 0; i < g.N; ++i) dom[i] = std::abs(f[i]) + 0.25;
    CHECK(weighted_l1_norm(dom, {0.6}) >= base);
}

TEST_CASE("field validation") {
    Grid g = make_grid(4.0, 65);
    Field f(g, 1.0);
    f[3] = std::nan("");
    CHECK_THROWS_AS(validate_field(f), NumericError);

    Field pt(g, 0.0);
    pt.extension = PowerTailExt{1.0, 1.0, 0.8};  // exponent must exceed 1
    CHECK_THROWS_AS(validate_field(pt), ConfigError);
}

TEST_CASE("extension sampling") {
    Grid g = make_grid(4.0, 65);
    Field f(g, 1.0);
    f.extension = ConstantExt{2.0, 3.0};
    CHECK(f.exterior_value(-5.0) == 2.0);
    CHECK(f.exterior_value(5.0) == 3.0);
    f.extension = PowerTailExt{1.5, 2.0, 2.0};
    CHECK(f.exterior_value(10.0) == doctest::Approx(0.02));
    CHECK(f.exterior_value(-10.0) == doctest::Approx(0.015));
}

TEST_CASE("sampling a field's own nodal values is the identity") {
    Grid g = make_grid(6.0, 97);
    Field f = make_field(g, [](double x) { return std::sin(1.3 * x) + 0.2 * x; });
    Field resampled = make_field(g, [&](double x) {
        // exact node lookup: positions reproduce indices
        int i = int(std::lround((x + g.L) / g.h));
        return f[i];
    });
    for (int i = 0; i < g.N; ++i) CHECK(resampled[i] == f[i]);
}
