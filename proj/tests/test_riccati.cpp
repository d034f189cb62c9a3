#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "revscatter/riccati.hpp"

using namespace revscatter;
using std::abs;

namespace {

SineSeries random_series(std::mt19937_64& rng, double target_w1) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SineSeries q;
    q.coeffs.resize(8);
    for (auto& c : q.coeffs) c = U(rng);
    double s = target_w1 / q.w1_norm();
    for (auto& c : q.coeffs) c *= s;
    return q;
}

double w1_dist(const SineSeries& a, const SineSeries& b) {
    SineSeries d = a;
    d.coeffs.resize(std::max(a.coeffs.size(), b.coeffs.size()), 0.0);
    for (size_t j = 0; j < b.coeffs.size(); ++j) d.coeffs[j] -= b.coeffs[j];
    return d.w1_norm();
}

}  // namespace

TEST_CASE("potential_to_v: projection to mean zero") {
    Potential p0{Grid(0.0, 1.0, 128), std::vector<double>(129, 0.0)};
    RiccatiImage v0 = potential_to_v(p0, 1.0, 2.0);
    for (double v : v0.v) CHECK(v == 0.0);
    CHECK(v0.c0 == doctest::Approx(1.0));

    Potential p = Potential::from_function([](double x) { return 2.0 + x * x; }, 256);
    RiccatiImage v = potential_to_v(p, 1.0, 2.0);
    CHECK(abs(trapezoid(std::span<const double>(v.v), v.grid)) < 1e-12);
}

TEST_CASE("potential_to_v agrees with riccati_forward") {
    auto prof = RadiusProfile::from_series(2, 1.0, SineSeries{{0.0, 0.3}});
    RiccatiImage fwd = riccati_forward(prof, 1.0, 2.0);
    Potential p = reduce_potential(prof, TransversalMode{1, 1.0});
    RiccatiImage alt = potential_to_v(p, 1.0, 2.0);
    double worst = 0.0;
    for (size_t j = 0; j < fwd.v.size(); ++j)
        worst = std::max(worst, abs(fwd.v[j] - alt.v[j]));
    CHECK(worst < 1e-9);
}

TEST_CASE("riccati_invert: zero image gives zero profile") {
    auto prof = RadiusProfile::from_series(2, 1.0, SineSeries{{}}, 512);
    RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
    SineSeries q = riccati_invert(v);
    CHECK(q.w1_norm() < 1e-10);
}

TEST_CASE("riccati_invert: sine fixture round trip, quadratic tail") {
    SineSeries q0{{0.0, 0.3}};
    auto prof = RadiusProfile::from_series(2, 1.0, q0);
    RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
    RiccatiInvertReport rep;
    SineSeries q = riccati_invert(v, {}, &rep);
    CHECK(w1_dist(q, q0) < 1e-8);
    CHECK(rep.iterations <= 12);
    CHECK(rep.c0 == doctest::Approx(v.c0).epsilon(1e-8));
    // residual history should contract at order ~2 once in the basin
    REQUIRE(rep.residual_history.size() >= 3);
    size_t n = rep.residual_history.size();
    double r1 = rep.residual_history[n - 2], r2 = rep.residual_history[n - 3];
    if (r1 > 1e-14 && r2 < 0.1) {
        double order = std::log(rep.residual_history[n - 1] / r1) / std::log(r1 / r2);
        CHECK(order >= 1.5);
    }
}

TEST_CASE("riccati_invert: randomized round trips with norm bounds") {
    std::mt19937_64 rng(20260824);
    std::uniform_real_distribution<double> U(0.05, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        SineSeries q0 = random_series(rng, U(rng));
        auto prof = RadiusProfile::from_series(2, 1.0, q0, 512);
        RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
        SineSeries q = riccati_invert(v);
        CHECK(w1_dist(q, q0) < 1e-8);
        CHECK(isomorphism_bounds(q0, v).hold());
        CHECK(isomorphism_bounds(q, v).hold());
    }
}

TEST_CASE("injectivity wedge: distant profiles have distant images") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        SineSeries a = random_series(rng, 1.0);
        SineSeries b = random_series(rng, 1.2);
        if (w1_dist(a, b) < 0.1) continue;
        auto va = riccati_forward(RadiusProfile::from_series(2, 1.0, a, 512), 1.0, 2.0);
        auto vb = riccati_forward(RadiusProfile::from_series(2, 1.0, b, 512), 1.0, 2.0);
        double dv = 0.0;
        std::vector<double> d(va.v.size());
        for (size_t j = 0; j < d.size(); ++j) d[j] = (va.v[j] - vb.v[j]) * (va.v[j] - vb.v[j]);
        dv = std::sqrt(trapezoid(std::span<const double>(d), va.grid));
        CHECK(dv > 1e-3);
    }
}

TEST_CASE("riccati_invert: basis refinement stability") {
    SineSeries q0{{0.2, -0.1, 0.05}};
    auto prof = RadiusProfile::from_series(2, 1.0, q0, 512);
    RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
    SineSeries q64 = riccati_invert(v, {.n_coeffs = 64});
    SineSeries q128 = riccati_invert(v, {.n_coeffs = 128});
    CHECK(w1_dist(q64, q128) < 1e-6);
}

TEST_CASE("riccati_invert: mean-zero precondition enforced") {
    RiccatiImage bad{Grid(0.0, 1.0, 64), std::vector<double>(65, 0.3), 0.0, 1.0, 2.0};
    CHECK_THROWS_AS(riccati_invert(bad), NumericsError);
}

TEST_CASE("rebuild_radius: identities") {
    SineSeries zero{{}};
    auto r0 = derive_radius(rebuild_radius(zero, 2, 1.3, 128));
    for (double r : r0.r) CHECK(r == 1.3);

    SineSeries q{{0.1, 0.2}};
    auto rd2 = derive_radius(rebuild_radius(q, 2, 1.0, 256));
    auto rd3 = derive_radius(rebuild_radius(q, 3, 1.0, 256));
    for (size_t j = 0; j < rd2.r.size(); ++j)
        CHECK(std::pow(rd3.r[j], 1.5) == doctest::Approx(rd2.r[j]).epsilon(1e-12));
}

TEST_CASE("full round trip through the radius") {
    SineSeries q0{{0.0, 0.3}};
    auto prof = RadiusProfile::from_series(2, 1.0, q0);
    RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
    SineSeries q = riccati_invert(v);
    auto got = derive_radius(rebuild_radius(q, 2, 1.0));
    auto want = derive_radius(prof);
    double sup = 0.0;
    for (size_t j = 0; j < want.r.size(); ++j)
        sup = std::max(sup, abs(got.r[j] - want.r[j]));
    CHECK(sup < 1e-7);
}
