#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace revscatter {

using Complex = std::complex<double>;

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonFiniteState : NumericsError {
    using NumericsError::NumericsError;
};
struct LengthMismatch : NumericsError {
    using NumericsError::NumericsError;
};
struct ZeroOnContour : NumericsError {
    using NumericsError::NumericsError;
};
struct NoConvergence : NumericsError {
    using NumericsError::NumericsError;
};
struct DerivativeVanished : NumericsError {
    using NumericsError::NumericsError;
};

// Uniform grid on [a,b] with n intervals. Nodes are always computed from the
// index so there is no cumulative-addition drift.
struct Grid {
    double a;
    double b;
    int n;

    Grid(double a_, double b_, int n_) : a(a_), b(b_), n(n_) {
        if (!(a < b)) throw NumericsError("Grid: requires a < b");
        if (n < 2) throw NumericsError("Grid: requires n >= 2");
    }
    double node(int j) const { return a + j * (b - a) / n; }
    double step() const { return (b - a) / n; }
    int size() const { return n + 1; }
};

// Classical fixed-step RK4 over a small complex state. Integration direction
// may be decreasing (x1 < x0). Throws NonFiniteState if the state blows up.
template <class F, class State>
State rk4_integrate(F&& rhs, double x0, double x1, State y, int steps) {
    if (steps < 2) throw NumericsError("rk4_integrate: steps >= 2 required");
    const double h = (x1 - x0) / steps;
    State k1 = y, k2 = y, k3 = y, k4 = y, tmp = y;
    for (int i = 0; i < steps; ++i) {
        const double x = x0 + i * (x1 - x0) / steps;
        rhs(x, y, k1);
        for (size_t c = 0; c < y.size(); ++c) tmp[c] = y[c] + 0.5 * h * k1[c];
        rhs(x + 0.5 * h, tmp, k2);
        for (size_t c = 0; c < y.size(); ++c) tmp[c] = y[c] + 0.5 * h * k2[c];
        rhs(x + 0.5 * h, tmp, k3);
        for (size_t c = 0; c < y.size(); ++c) tmp[c] = y[c] + h * k3[c];
        rhs(x + h, tmp, k4);
        for (size_t c = 0; c < y.size(); ++c)
            y[c] += (h / 6.0) * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        for (size_t c = 0; c < y.size(); ++c)
            if (!std::isfinite(y[c].real()) || !std::isfinite(y[c].imag()))
                throw NonFiniteState("rk4_integrate: non-finite state at x=" +
                                     std::to_string(x + h));
    }
    return y;
}

// std::function front end used by tests and generic callers.
std::vector<Complex> integrate_ivp(
    const std::function<std::vector<Complex>(double, const std::vector<Complex>&)>& rhs,
    double x0, double x1, std::vector<Complex> y0, int steps);

Complex trapezoid(std::span<const Complex> values, const Grid& grid);
double trapezoid(std::span<const double> values, const Grid& grid);

// (1/2pi) * int_{kgrid} samples(k) e^{ixk} dk by composite trapezoid.
Complex dft_halfline(std::span<const Complex> samples, const Grid& kgrid, double x);

// Run fn(i) for i in [0,n) on up to max_threads() workers. Results must be
// written to disjoint slots; the split is deterministic.
void parallel_for(int n, const std::function<void(int)>& fn);
int max_threads();
void set_max_threads(int t);

}  // namespace revscatter
