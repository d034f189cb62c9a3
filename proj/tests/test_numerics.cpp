#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "revscatter/numerics.hpp"

using namespace revscatter;
using std::abs;

TEST_CASE("grid nodes computed from the index, no drift") {
    Grid g(0.0, 1.0, 7);
    for (int j = 0; j <= 7; ++j) CHECK(g.node(j) == 0.0 + j * (1.0 - 0.0) / 7);
    CHECK(g.node(7) == 1.0);
    CHECK(g.size() == 8);
    CHECK_THROWS_AS(Grid(1.0, 0.0, 4), NumericsError);
    CHECK_THROWS_AS(Grid(0.0, 1.0, 1), NumericsError);
}

TEST_CASE("integrate_ivp: constant solution") {
    auto rhs = [](double, const std::vector<Complex>&) {
        return std::vector<Complex>{0.0, 0.0};
    };
    auto y = integrate_ivp(rhs, 0.0, 3.0, {Complex(1, 0), Complex(0, 1)}, 16);
    CHECK(y[0] == Complex(1, 0));
    CHECK(y[1] == Complex(0, 1));
}

TEST_CASE("integrate_ivp: harmonic oscillator quarter period") {
    auto rhs = [](double, const std::vector<Complex>& y) {
        return std::vector<Complex>{y[1], -y[0]};
    };
    auto y = integrate_ivp(rhs, 0.0, M_PI / 2.0, {0.0, 1.0}, 1000);
    CHECK(abs(y[0] - 1.0) < 1e-8);
    CHECK(abs(y[1] - 0.0) < 1e-8);
}

TEST_CASE("integrate_ivp: backward sweep matches square-well closed form") {
    // y'' = (p - k^2) y, p = 4 on [0,1], data at x = 1: y = e^{3i}, y' = 3i e^{3i}
    const Complex k(3.0, 0.0);
    auto rhs = [&](double, const std::vector<Complex>& y) {
        return std::vector<Complex>{y[1], (4.0 - k * k) * y[0]};
    };
    Complex e3i = std::exp(Complex(0, 3));
    auto y = integrate_ivp(rhs, 1.0, 0.0, {e3i, Complex(0, 3) * e3i}, 4096);
    double kap = std::sqrt(5.0);
    Complex want = e3i * (std::cos(kap) - (Complex(0, 3) / kap) * std::sin(kap));
    CHECK(abs(y[0] - want) < 1e-8);
}

TEST_CASE("integrate_ivp: fourth-order convergence") {
    auto rhs = [](double, const std::vector<Complex>& y) {
        return std::vector<Complex>{y[1], -y[0]};
    };
    auto err = [&](int steps) {
        auto y = integrate_ivp(rhs, 0.0, M_PI / 2.0, {0.0, 1.0}, steps);
        return abs(y[0] - 1.0);
    };
    CHECK(err(50) / err(100) >= 14.0);
}

TEST_CASE("integrate_ivp: blow-up raises NonFiniteState") {
    auto rhs = [](double, const std::vector<Complex>& y) {
        return std::vector<Complex>{1000.0 * y[0]};
    };
    CHECK_THROWS_AS(integrate_ivp(rhs, 0.0, 20.0, {Complex(1, 0)}, 50),
                    NonFiniteState);
}

TEST_CASE("trapezoid: affine exactness and quadratic error") {
    Grid g1(0.0, 1.0, 5);
    std::vector<double> ones(6, 1.0);
    CHECK(trapezoid(std::span<const double>(ones), g1) == doctest::Approx(1.0));

    Grid g2(0.0, 1.0, 10);
    std::vector<double> lin(11);
    for (int j = 0; j <= 10; ++j) lin[j] = g2.node(j);
    CHECK(trapezoid(std::span<const double>(lin), g2) == 0.5);

    Grid g3(0.0, 1.0, 100);
    std::vector<double> sq(101);
    for (int j = 0; j <= 100; ++j) sq[j] = g3.node(j) * g3.node(j);
    CHECK(abs(trapezoid(std::span<const double>(sq), g3) - 1.0 / 3.0) < 2e-5);

    std::vector<double> bad(7, 0.0);
    CHECK_THROWS_AS(trapezoid(std::span<const double>(bad), g3), LengthMismatch);
}

TEST_CASE("dft_halfline: zero samples") {
    Grid kg(-200.0, 200.0, 1 << 12);
    std::vector<Complex> zero(kg.size(), 0.0);
    CHECK(abs(dft_halfline(std::span<const Complex>(zero), kg, 0.7)) == 0.0);
}

TEST_CASE("dft_halfline: indicator transform pair") {
    // (1/2pi) int 2 sin(k)/k e^{-ik} e^{ixk} dk = chi_[0,2](x) away from jumps
    Grid kg(-200.0, 200.0, 1 << 14);
    std::vector<Complex> s(kg.size());
    for (int j = 0; j < kg.size(); ++j) {
        double k = kg.node(j);
        double sinc = (abs(k) < 1e-12) ? 1.0 : std::sin(k) / k;
        s[j] = 2.0 * sinc * std::exp(Complex(0, -k));
    }
    // O(1/K) tolerance away from the jumps at 0 and 2
    CHECK(abs(dft_halfline(std::span<const Complex>(s), kg, 1.0) - 1.0) < 0.02);
    CHECK(abs(dft_halfline(std::span<const Complex>(s), kg, 3.0)) < 0.02);
}

TEST_CASE("dft_halfline: real-even samples give real output") {
    Grid kg(-50.0, 50.0, 1 << 12);
    std::vector<Complex> s(kg.size());
    for (int j = 0; j < kg.size(); ++j) {
        double k = kg.node(j);
        s[j] = std::exp(-0.1 * k * k);
    }
    Complex v = dft_halfline(std::span<const Complex>(s), kg, 1.3);
    CHECK(abs(v.imag()) < 1e-10 * (1.0 + abs(v.real())));
}

TEST_CASE("determinism: bit-identical repeated evaluation") {
    auto rhs = [](double x, const std::vector<Complex>& y) {
        return std::vector<Complex>{y[1], (std::sin(3 * x) - 4.0) * y[0]};
    };
    auto a = integrate_ivp(rhs, 1.0, 0.0, {Complex(0.3, 1), Complex(1, -2)}, 512);
    auto b = integrate_ivp(rhs, 1.0, 0.0, {Complex(0.3, 1), Complex(1, -2)}, 512);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
}

TEST_CASE("parallel_for: thread count does not change results") {
    auto run = [] {
        std::vector<double> out(64);
        parallel_for(64, [&](int i) {
            double s = 0;
            for (int j = 1; j <= 200; ++j) s += std::sin(i * 0.37 + j) / j;
            out[i] = s;
        });
        return out;
    };
    int saved = max_threads();
    set_max_threads(1);
    auto a = run();
    set_max_threads(4);
    auto b = run();
    set_max_threads(saved);
    CHECK(a == b);
}
