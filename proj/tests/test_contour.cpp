#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "revscatter/contour.hpp"
#include "revscatter/jost.hpp"

using namespace revscatter;
using std::abs;

TEST_CASE("winding: zero-free and multiple-zero cases") {
    Contour box = Contour::rectangle(Complex(-1, -1), Complex(1, 1), 16);
    CHECK(winding_number([](Complex) { return Complex(1, 0); }, box) == 0);
    CHECK(winding_number([](Complex k) { return k * k; }, box) == 2);
}

TEST_CASE("winding: simple zero under a zero-free exponential factor") {
    Complex z0(1, -2);
    auto f = [z0](Complex k) { return std::exp(Complex(0, 1) * k) * (1.0 - k / z0); };
    Contour box = Contour::rectangle(Complex(0, -3), Complex(2, -1), 16);
    CHECK(winding_number(f, box) == 1);
}

TEST_CASE("winding: invariant under sample refinement") {
    auto f = [](Complex k) { return (k - Complex(0.3, 0.4)) * (k + Complex(0.2, 0.7)); };
    for (int spe : {8, 16, 32, 64}) {
        Contour box = Contour::rectangle(Complex(-1, -1), Complex(1, 1), spe);
        CHECK(winding_number(f, box) == 2);
    }
}

TEST_CASE("winding: zero sitting on the contour is detected") {
    auto f = [](Complex k) { return k - 1.0; };
    Contour box = Contour::rectangle(Complex(-1, -1), Complex(1, 1), 16);
    CHECK_THROWS_AS(winding_number(f, box), ZeroOnContour);
}

TEST_CASE("newton_polish: linear function") {
    auto f = [](Complex k) { return k - Complex(0, 2); };
    Complex z = newton_polish(f, std::nullopt, Complex(0, 1.9), 1e-13);
    CHECK(abs(z - Complex(0, 2)) < 1e-12);
}

TEST_CASE("newton_polish: transcendental square-well root") {
    auto f = [](Complex k) { return square_well_jost(4.0, k); };
    // basin of the lowest-|k| resonance of the c = 4 well
    Complex z = newton_polish(f, std::nullopt, Complex(3.0, -1.5), 1e-12);
    CHECK(abs(f(z)) <= 1e-10);
    CHECK(z.imag() < 0.0);
}

TEST_CASE("newton_polish: double root flagged as suspected multiple") {
    auto f = [](Complex k) { return k * k; };
    auto res = newton_polish_ex(f, std::nullopt, Complex(0.1, 0.0), 1e-10);
    CHECK(res.suspected_multiple);
    CHECK(abs(res.z) < 1e-4);
}

TEST_CASE("newton_polish: analytic derivative path") {
    auto f = [](Complex k) { return k * k - Complex(0, 4); };
    auto fp = [](Complex k) { return 2.0 * k; };
    Complex z = newton_polish(f, std::optional<std::function<Complex(Complex)>>(fp),
                              Complex(1.5, 1.2), 1e-13);
    CHECK(abs(z * z - Complex(0, 4)) < 1e-11);
}

TEST_CASE("disc contour winding on an off-center zero") {
    auto f = [](Complex k) { return k - Complex(2, -2); };
    CHECK(winding_number(f, Contour::disc(Complex(2, -2), 1.0, 64, 8)) == 1);
    CHECK(winding_number(f, Contour::disc(Complex(0, 0), 1.0, 64, 8)) == 0);
}
