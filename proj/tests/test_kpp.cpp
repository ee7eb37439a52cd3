#include "doctest.h"

#include <cmath>

#include "fkpp/kpp.hpp"

using namespace fkpp;

TEST_CASE("model KPP with admissible saturation passes all hypotheses") {
    Grid g = make_grid(16.0, 257);
    Field a = make_patch_potential(g, PatchShape::BoxSmoothed, 2.0, 1.0, 1.0, 0.25);
    // S > ||a||_inf^{1/p} = 2
    Nonlinearity nl = Nonlinearity::model_kpp(a, 1.0, 1.0, 1.25, 3.0);
    HypothesesReport rep = check_hypotheses(nl, g);
    for (const auto& c : rep.clauses) {
        INFO(c.name, " witness: ", c.witness);
        CHECK(c.passed);
    }
    CHECK(rep.all_passed());
}

TEST_CASE("f = u^2 fails the KPP monotonicity clause") {
    Grid g = make_grid(4.0, 65);
    Nonlinearity nl = Nonlinearity::custom(
        [](double, double u) { return u * u; },
        [](double, double u) { return 2.0 * u; }, g, 1.0, 1.0, 3.0);
    HypothesesReport rep = check_hypotheses(nl, g);
    bool mono_failed = false;
    for (const auto& c : rep.clauses)
        if (c.name.find("decreasing") != std::string::npos && !c.passed)
            mono_failed = true;
    CHECK(mono_failed);
}

TEST_CASE("f = u (a == 1 everywhere) fails the far-field clause") {
    Grid g = make_grid(4.0, 65);
    Nonlinearity nl = Nonlinearity::custom(
        [](double, double u) { return u; }, [](double, double) { return 1.0; }, g,
        1.0, 1.0, 3.0);
    HypothesesReport rep = check_hypotheses(nl, g);
    bool far_failed = false;
    for (const auto& c : rep.clauses)
        if (c.name.find("beyond the patch") != std::string::npos && !c.passed)
            far_failed = true;
    CHECK(far_failed);
}

TEST_CASE("model preconditions") {
    Grid g = make_grid(4.0, 65);
    Field a(g, 1.0);
    CHECK_THROWS_AS(Nonlinearity::model_kpp(a, 0.5, 1.0, 1.0, 3.0), ConfigError);
    CHECK_THROWS_AS(Nonlinearity::model_kpp(a, 1.0, -1.0, 1.0, 3.0), ConfigError);
}

TEST_CASE("barrier geometry") {
    // kappa=16, s=0.75, beta=1+2s: r_kappa = 16^{-1/3}
    Barrier b = make_barrier(16.0, 0.75, 2.5);
    CHECK(b.r_kappa() == doctest::Approx(std::pow(16.0, -1.0 / 3.0)).epsilon(1e-14));
    CHECK(b.r_kappa() == doctest::Approx(0.39685026299204984).epsilon(1e-12));
    CHECK(b.theta() == doctest::Approx(0.5).epsilon(1e-15));

    // both branches meet at r_kappa
    double rk = b.r_kappa();
    CHECK(b.kappa * std::pow(rk, 2.0 * b.s - 1.0) ==
          doctest::Approx(std::pow(rk, -b.beta)).epsilon(1e-12));
    // beta branch active beyond
    CHECK(b.value(2.0) == doctest::Approx(std::pow(2.0, -2.5)).epsilon(1e-14));
    // kappa branch inside
    double xin = 0.5 * rk;
    CHECK(b.value(xin) == doctest::Approx(16.0 * std::pow(xin, 0.5)).epsilon(1e-14));
    // larger kappa -> smaller crossover
    CHECK(make_barrier(64.0, 0.75, 2.5).r_kappa() < b.r_kappa());

    CHECK_THROWS_AS(make_barrier(-1.0, 0.75, 2.5), ConfigError);
    CHECK_THROWS_AS(make_barrier(1.0, 0.75, 0.9), ConfigError);
    CHECK_THROWS_AS(make_barrier(1.0, 0.75, 2.6), ConfigError);
}

TEST_CASE("barrier is even, continuous, positive away from 0") {
    Barrier b = make_barrier(4.0, 0.8, 2.0);
    for (double x : {0.1, 0.37, 1.0, 5.0}) {
        CHECK(b.value(x) == b.value(-x));
        CHECK(b.value(x) > 0.0);
    }
    CHECK(b.value(0.0) == 0.0);
}

TEST_CASE("mollified barrier bounds") {
    Barrier b = make_barrier(16.0, 0.75, 2.5);
    b.epsilon = 0.1;
    std::vector<double> xs = {0.2, 0.5, 1.0, 2.0, -1.3};
    auto vals = barrier_values(b, xs);
    for (size_t j = 0; j < xs.size(); ++j) {
        CHECK(vals[j] > 0.0);  // strictly positive on compacts
        // Phi_eps >= min of Phi over the epsilon-ball
        double m = std::numeric_limits<double>::infinity();
        for (int k = -50; k <= 50; ++k)
            m = std::min(m, b.value(xs[j] + 0.1 * k / 50.0));
        CHECK(vals[j] >= m - 1e-12);
    }
}

TEST_CASE("certificate with admissible small kappa, nu = 1") {
    // admissibility needs kappa^theta small against nu (hump mass 2 kappa^theta/s)
    Barrier b = make_barrier(0.05, 0.75, 2.5);
    double rk = b.r_kappa();
    std::vector<double> sample;
    for (int j = 0; j < 25; ++j) {
        double t = 1.5 * std::pow(200.0 / 1.5, j / 24.0);
        sample.push_back(t * rk);
        sample.push_back(-t * rk);
    }
    for (double c : {0.0, 1.0}) {
        BarrierCertificate cert = certify_barrier(b, c, 1.0, sample, 1e-8);
        CHECK(cert.certified);
        CHECK(cert.R_nu < 10.0 * rk);
        int n_passed_beyond = 0;
        for (const auto& p : cert.points)
            if (std::abs(p.x) >= cert.R_nu) {
                CHECK(p.passed);
                ++n_passed_beyond;
            }
        CHECK(n_passed_beyond > 10);
    }
}

TEST_CASE("nu = 0 certification fails at large |x|") {
    Barrier b = make_barrier(0.05, 0.75, 2.5);
    double rk = b.r_kappa();
    std::vector<double> sample = {50.0 * rk, 100.0 * rk, 200.0 * rk};
    BarrierCertificate cert = certify_barrier(b, 0.0, 0.0, sample, 1e-8);
    CHECK_FALSE(cert.certified);
    for (const auto& p : cert.points) CHECK(p.value > 0.0);
}

TEST_CASE("quadrature guard near the crossover") {
    Barrier b = make_barrier(16.0, 0.75, 2.5);
    CHECK_THROWS_AS(barrier_frac_laplacian(b, 0.0), ConfigError);
    CHECK_THROWS_AS(barrier_frac_laplacian(b, b.r_kappa()), ConfigError);
}
