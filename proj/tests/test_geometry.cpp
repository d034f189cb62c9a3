#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "revscatter/geometry.hpp"
#include "revscatter/riccati.hpp"

using namespace revscatter;
using std::abs;

namespace {

// Section fixture: r(x) = 1 + (x-1)^2/2, q = (m/2) r'/r with m = 2.
double r_fix(double x) { return 1.0 + 0.5 * (x - 1.0) * (x - 1.0); }

RadiusProfile fixture_profile(int n) {
    Grid g(0.0, 1.0, n);
    std::vector<double> q(n + 1);
    for (int j = 0; j <= n; ++j) q[j] = (g.node(j) - 1.0) / r_fix(g.node(j));
    return RadiusProfile::from_samples(2, 1.0, g, std::move(q));
}

}  // namespace

TEST_CASE("sine series enforces the W10 boundary conditions") {
    SineSeries s{{0.4, -0.2, 0.1}};
    CHECK(s.eval(0.0) == 0.0);
    CHECK(s.eval(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(abs(s.eval_Q(1.0)) < 1e-15);
    // ||q'||^2 = sum (n pi)^2 a_n^2 / 2
    double want = (M_PI * M_PI * 0.16 + 4 * M_PI * M_PI * 0.04 + 9 * M_PI * M_PI * 0.01) / 2.0;
    CHECK(s.w1_norm() == doctest::Approx(std::sqrt(want)));
}

TEST_CASE("derive_radius: trivial profile") {
    auto prof = RadiusProfile::from_series(3, 2.5, SineSeries{{}}, 64);
    auto rd = derive_radius(prof);
    for (double Q : rd.Q) CHECK(Q == 0.0);
    for (double r : rd.r) CHECK(r == 2.5);
    for (double rho : rd.rho) CHECK(rho == doctest::Approx(std::pow(2.5, 1.5)));
}

TEST_CASE("derive_radius: closed-form radius recovered from q = (m/2) r'/r") {
    auto prof = fixture_profile(10000);
    auto rd = derive_radius(prof);
    double worst = 0.0;
    for (int j = 0; j <= prof.grid.n; ++j)
        worst = std::max(worst, abs(rd.r[j] - r_fix(prof.grid.node(j))));
    CHECK(worst < 1e-8);
    CHECK(rd.r.back() == 1.0);  // Q(1) = 0 exactly
}

TEST_CASE("derive_radius: r(1) = r_o exactly for a generic profile") {
    auto prof = RadiusProfile::from_series(2, 1.7, SineSeries{{0.3, -0.1, 0.05}});
    auto rd = derive_radius(prof);
    CHECK(rd.r.back() == 1.7);
    for (double r : rd.r) CHECK(r > 0.0);
}

TEST_CASE("reduce_potential: trivial profile gives the free Laplacian") {
    auto prof = RadiusProfile::from_series(2, 1.0, SineSeries{{}}, 128);
    Potential p = reduce_potential(prof, TransversalMode{1, 5.0});
    for (double v : p.p) CHECK(abs(v) < 1e-14);
}

TEST_CASE("reduce_potential: boundary value m/2 at x = 1 for E = 0") {
    auto prof = fixture_profile(10000);
    Potential p = reduce_potential(prof, TransversalMode{1, 0.0});
    CHECK(abs(p.p.back() - 1.0) < 1e-6);
}

TEST_CASE("reduce_potential: closed-form identity at E = 100") {
    auto prof = fixture_profile(10000);
    Potential p = reduce_potential(prof, TransversalMode{1, 100.0});
    double worst = 0.0;
    for (int j = 1; j < prof.grid.n; ++j) {
        double x = prof.grid.node(j), r = r_fix(x), q = prof.q[j];
        double want = 1.0 - (r / 2.0) * q * q - 2.0 * 100.0 * ((1.0 + r) / 4.0) * q * q;
        worst = std::max(worst, abs(p.p[j] - want));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("riccati_forward: trivial profile maps to zero") {
    auto prof = RadiusProfile::from_series(2, 1.0, SineSeries{{}}, 128);
    RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
    for (double x : v.v) CHECK(abs(x) < 1e-14);
    CHECK(v.c0 == doctest::Approx(1.0));
}

TEST_CASE("riccati_forward: image is mean-zero and p = v + v0") {
    auto prof = RadiusProfile::from_series(2, 1.0, SineSeries{{0.0, 0.3}});
    RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
    CHECK(abs(trapezoid(std::span<const double>(v.v), v.grid)) < 1e-10);

    // u0 = E/r_o^2 with E = 1, beta = 4/m = 2: same data as reduce_potential
    Potential p = reduce_potential(prof, TransversalMode{1, 1.0});
    double pmean = trapezoid(std::span<const double>(p.p), p.grid);
    double worst = 0.0;
    for (size_t j = 0; j < p.p.size(); ++j)
        worst = std::max(worst, abs(p.p[j] - pmean - v.v[j]));
    CHECK(worst < 1e-9);
}

TEST_CASE("riccati_forward: two-sided norm bounds on the sine fixture") {
    SineSeries q{{0.0, 0.3}};
    auto prof = RadiusProfile::from_series(2, 1.0, q);
    RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
    auto b = isomorphism_bounds(q, v);
    CHECK(b.q_deriv_sq <= b.v_sq * (1 + 1e-12));
    CHECK(b.v_sq <= b.upper * (1 + 1e-12));
}

TEST_CASE("support lemma holds on the fixtures") {
    auto zero = RadiusProfile::from_series(2, 1.0, SineSeries{{}}, 256);
    CHECK(check_support_lemma(riccati_forward(zero, 1.0, 2.0), zero, 0.2));

    // bump supported in [0.2, 0.8]
    Grid g(0.0, 1.0, 2048);
    std::vector<double> q(g.size(), 0.0);
    for (int j = 0; j <= g.n; ++j) {
        double x = g.node(j);
        if (x > 0.2 && x < 0.8) {
            double t = (x - 0.2) / 0.6;
            q[j] = 0.5 * std::sin(M_PI * t) * std::sin(M_PI * t);
        }
    }
    auto bump = RadiusProfile::from_samples(2, 1.0, g, q);
    CHECK(check_support_lemma(riccati_forward(bump, 1.0, 2.0), bump, 0.2));

    // sup supp q = 1: residual q' + q^2 + u - u0 nonvanishing near 1
    SineSeries qs{{0.25}};
    auto full = RadiusProfile::from_series(2, 1.0, qs);
    RiccatiImage v = riccati_forward(full, 1.0, 2.0);
    double near_one = 0.0;
    for (int j = 0; j <= v.grid.n; ++j)
        if (v.grid.node(j) > 0.95)
            near_one = std::max(near_one, abs(v.v[j] + v.c0 - 1.0));
    CHECK(near_one > 1e-3);
    CHECK(check_support_lemma(v, full, 0.2));
}

TEST_CASE("profile construction guards") {
    CHECK_THROWS_AS(RadiusProfile::from_samples(2, 1.0, Grid(0.0, 1.0, 4),
                                                {0.0, 0.2, 0.3, 0.2}),
                    LengthMismatch);
    CHECK_THROWS_AS(RadiusProfile::from_series(0, 1.0, SineSeries{{0.1}}, 64),
                    NumericsError);
    CHECK_THROWS_AS(RadiusProfile::from_series(2, -1.0, SineSeries{{0.1}}, 64),
                    NumericsError);
    auto ok = RadiusProfile::from_series(2, 1.0, SineSeries{{0.1}}, 64);
    CHECK(ok.q.front() == 0.0);
    CHECK(abs(ok.q.back()) < 1e-14);
}
