#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "revscatter/contour.hpp"
#include "revscatter/jost.hpp"

using namespace revscatter;
using std::abs;

TEST_CASE("free potential: psi == 1 on and near the real axis") {
    Potential p{Grid(0.0, 1.0, 512), std::vector<double>(513, 0.0)};
    JostEvaluator ev(p);
    for (Complex k : {Complex(0, 0), Complex(3, 0), Complex(-5, 0), Complex(2, -2),
                      Complex(0, 4)})
        CHECK(abs(ev.value(k) - 1.0) < 1e-8);
}

TEST_CASE("square-well closed form at k = 3 and at the removable point k = 2") {
    JostEvaluator ev(Potential::constant(4.0));
    double kap = std::sqrt(5.0);
    Complex want3 = std::exp(Complex(0, 3)) *
                    (std::cos(kap) - (Complex(0, 3) / kap) * std::sin(kap));
    CHECK(abs(ev.value(Complex(3, 0)) - want3) < 1e-8);
    CHECK(abs(square_well_jost(4.0, Complex(3, 0)) - want3) < 1e-14);

    // k = 2: kappa = 0, psi = e^{2i}(1 - 2i)
    Complex want2 = std::exp(Complex(0, 2)) * Complex(1, -2);
    CHECK(abs(ev.value(Complex(2, 0)) - want2) < 1e-8);
    CHECK(abs(square_well_jost(4.0, Complex(2, 0)) - want2) < 1e-10);
}

TEST_CASE("oracle agreement on a complex grid, both fixtures") {
    for (double c : {4.0, -20.0}) {
        JostEvaluator ev(Potential::constant(c));
        double worst = 0.0;
        for (int i = 0; i <= 8; ++i)
            for (int j = 0; j <= 8; ++j) {
                Complex k(-10.0 + 2.5 * i, -10.0 + 1.5 * j);
                Complex a = ev.value(k), b = square_well_jost(c, k);
                worst = std::max(worst, abs(a - b) / std::max(1.0, abs(b)));
            }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("conjugation symmetry and reality on the imaginary axis") {
    JostEvaluator ev(Potential::from_function(
        [](double x) { return 3.0 * std::sin(M_PI * x); }));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        Complex k(5.0 * U(rng), -3.0 + 3.0 * U(rng));
        Complex a = ev.value(-std::conj(k)), b = std::conj(ev.value(k));
        CHECK(abs(a - b) <= 1e-10 * (1.0 + abs(b)));
    }
    for (double tau : {0.5, 1.0, 3.0, 7.0})
        CHECK(abs(ev.value(Complex(0, tau)).imag()) < 1e-10);
}

TEST_CASE("decay |psi - 1| = O(1/k) along the real axis") {
    JostEvaluator ev(Potential::constant(4.0));
    // fit C at |k| = 20, then check the bound holds out to 200
    double C = 20.0 * abs(ev.value(Complex(20, 0)) - 1.0);
    for (double k : {40.0, 80.0, 160.0, 200.0})
        CHECK(abs(ev.value(Complex(k, 0)) - 1.0) <= 1.5 * C / k + 1e-10);
}

TEST_CASE("bound states: free case empty, deep well has exactly one") {
    Potential p0{Grid(0.0, 1.0, 512), std::vector<double>(513, 0.0)};
    CHECK(bound_states(JostEvaluator(p0), 10.0).kappas.empty());

    JostEvaluator ev(Potential::constant(-20.0));
    auto bs = bound_states(ev, std::sqrt(20.0));
    // tan(kappa) = -kappa/tau, kappa = sqrt(20 - tau^2), has a single root in
    // (pi/2, pi) on the admissible range: one bound state.
    REQUIRE(bs.kappas.size() == 1);
    double tau = bs.kappas[0];
    CHECK(abs(square_well_jost(-20.0, Complex(0.0, tau))) < 1e-9);
    // closed-form residual: cos(kappa) + (tau/kappa) sin(kappa) = 0
    double kap = std::sqrt(20.0 - tau * tau);
    CHECK(abs(std::cos(kap) + (tau / kap) * std::sin(kap)) < 1e-8);
}

TEST_CASE("bound-state count matches a winding count around the segment") {
    JostEvaluator ev(Potential::constant(-20.0));
    auto bs = bound_states(ev, std::sqrt(20.0));
    auto f = [&](Complex k) { return ev.value(k); };
    int w = winding_number(
        f, Contour::rectangle(Complex(-0.2, 0.05), Complex(0.2, std::sqrt(20.0)), 64));
    CHECK(w == static_cast<int>(bs.kappas.size()));
}

TEST_CASE("no eigenvalues when the radius dips below r_o") {
    // q = 0.5 sin(pi x) > 0 gives Q < 0 on (0,1), hence r < r_o inside
    auto prof = RadiusProfile::from_series(2, 1.0, SineSeries{{0.5}});
    auto rd = derive_radius(prof);
    for (size_t j = 0; j + 1 < rd.r.size(); ++j) CHECK(rd.r[j] <= 1.0 + 1e-12);
    Potential p = reduce_potential(prof, TransversalMode{1, 1.0});
    CHECK(bound_states(JostEvaluator(p), 10.0).kappas.empty());
}

TEST_CASE("s_matrix: unitarity, free phase, Levinson limit") {
    std::vector<double> kg;
    for (double k = 0.01; k <= 40.0; k *= 1.05) kg.push_back(k);

    Potential p0{Grid(0.0, 1.0, 512), std::vector<double>(513, 0.0)};
    auto free = s_matrix(JostEvaluator(p0), kg);
    CHECK(free.n0 == 0);
    for (size_t j = 0; j < kg.size(); ++j) {
        CHECK(abs(abs(free.s[j]) - 1.0) < 1e-8);
        CHECK(abs(free.phase[j]) < 1e-6);
    }

    auto well = s_matrix(JostEvaluator(Potential::constant(4.0)), kg);
    for (size_t j = 0; j < kg.size(); ++j)
        CHECK(abs(abs(well.s[j]) - 1.0) < 1e-10);

    auto deep = s_matrix(JostEvaluator(Potential::constant(-20.0)), kg);
    CHECK(deep.n0 == 0);
    CHECK(abs(deep.phase.front() - (-M_PI * 1.0)) < 0.05);  // n+ = 1, n0 = 0
    // far end decays at the Born rate |c|/(2k), not faster
    CHECK(abs(deep.phase.back()) < 20.0 / kg.back());
    CHECK(abs(deep.phase.back()) < 0.15 * abs(deep.phase.front()));
}

TEST_CASE("integral-form diagnostics: type and decay") {
    JostEvaluator ev(Potential::constant(4.0));
    auto d = jost_integral_form(ev, 20.0);
    CHECK(d.sup_k_times_psi_minus_1 < 100.0);
    CHECK(d.type_estimate >= 1.6);  // finite-radius fit biases the type low
    CHECK(d.type_estimate <= 2.0);
    CHECK(d.conj_symmetry_residual < 1e-9);

    Potential p0{Grid(0.0, 1.0, 512), std::vector<double>(513, 0.0)};
    auto d0 = jost_integral_form(JostEvaluator(p0), 20.0);
    CHECK(d0.sup_k_times_psi_minus_1 < 1e-5);
    CHECK(abs(d0.type_estimate) < 0.2);  // growing-mode noise floor, not type
}

TEST_CASE("evaluation stable under ODE step refinement") {
    JostEvaluator coarse(Potential::constant(4.0), 4096);
    JostEvaluator fine(Potential::constant(4.0), 8192);
    for (Complex k : {Complex(5, -3), Complex(12, -1), Complex(0.3, 0)}) {
        Complex a = coarse.value(k), b = fine.value(k);
        CHECK(abs(a - b) <= 1e-9 * (1.0 + abs(b)));
    }
}
