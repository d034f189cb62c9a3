#include "revscatter/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace revscatter {

double SineSeries::eval(double x) const {
    double s = 0.0;
    for (size_t n = 1; n <= coeffs.size(); ++n)
        s += coeffs[n - 1] * std::sin(n * M_PI * x);
    return s;
}

double SineSeries::eval_deriv(double x) const {
    double s = 0.0;
    for (size_t n = 1; n <= coeffs.size(); ++n)
        s += coeffs[n - 1] * n * M_PI * std::cos(n * M_PI * x);
    return s;
}

double SineSeries::eval_Q(double x) const {
    // int_x^1 sin(n pi t) dt = (cos(n pi x) - (-1)^n) / (n pi)
    double s = 0.0;
    for (size_t n = 1; n <= coeffs.size(); ++n) {
        double sign = (n % 2 == 0) ? 1.0 : -1.0;
        s += coeffs[n - 1] * (std::cos(n * M_PI * x) - sign) / (n * M_PI);
    }
    return -s;
}

double SineSeries::w1_norm() const {
    double s = 0.0;
    for (size_t n = 1; n <= coeffs.size(); ++n) {
        double w = n * M_PI * coeffs[n - 1];
        s += w * w;
    }
    return std::sqrt(0.5 * s);
}

double SineSeries::l2_norm() const {
    double s = 0.0;
    for (double a : coeffs) s += a * a;
    return std::sqrt(0.5 * s);
}

RadiusProfile RadiusProfile::from_samples(int m, double r_o, Grid grid,
                                          std::vector<double> q) {
    if (static_cast<int>(q.size()) != grid.size())
        throw LengthMismatch("RadiusProfile: q sample count does not match grid");
    if (m < 1) throw NumericsError("RadiusProfile: m >= 1 required");
    if (!(r_o > 0)) throw NumericsError("RadiusProfile: r_o > 0 required");
    RadiusProfile p{m, r_o, grid, std::move(q), std::nullopt};
    return p;
}

RadiusProfile RadiusProfile::from_series(int m, double r_o, SineSeries s, int grid_n) {
    Grid grid(0.0, 1.0, grid_n);
    std::vector<double> q(grid.size());
    for (int j = 0; j <= grid.n; ++j) q[j] = s.eval(grid.node(j));
    RadiusProfile p{m, r_o, grid, std::move(q), std::move(s)};
    if (p.m < 1) throw NumericsError("RadiusProfile: m >= 1 required");
    if (!(p.r_o > 0)) throw NumericsError("RadiusProfile: r_o > 0 required");
    return p;
}

std::vector<double> RadiusProfile::q_deriv() const {
    std::vector<double> d(grid.size());
    if (series) {
        for (int j = 0; j <= grid.n; ++j) d[j] = series->eval_deriv(grid.node(j));
        return d;
    }
    const double h = grid.step();
    d[0] = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h);
    for (int j = 1; j < grid.n; ++j) d[j] = (q[j + 1] - q[j - 1]) / (2.0 * h);
    d[grid.n] = (3.0 * q[grid.n] - 4.0 * q[grid.n - 1] + q[grid.n - 2]) / (2.0 * h);
    return d;
}

Potential Potential::constant(double c, int grid_n) {
    Grid g(0.0, 1.0, grid_n);
    return Potential{g, std::vector<double>(g.size(), c)};
}

Potential Potential::from_function(const std::function<double(double)>& f, int grid_n) {
    Grid g(0.0, 1.0, grid_n);
    std::vector<double> p(g.size());
    for (int j = 0; j <= g.n; ++j) p[j] = f(g.node(j));
    return Potential{g, std::move(p)};
}

double Potential::l1_norm() const {
    std::vector<double> a(p.size());
    for (size_t j = 0; j < p.size(); ++j) a[j] = std::abs(p[j]);
    return trapezoid(a, grid);
}

double Potential::min_value() const {
    double m = p[0];
    for (double x : p) m = std::min(m, x);
    return m;
}

namespace {

// Q(x) = -int_x^1 q; accumulated right-to-left so Q at x=1 is exactly 0.
std::vector<double> accumulate_Q(const RadiusProfile& profile) {
    const Grid& g = profile.grid;
    std::vector<double> Q(g.size());
    if (profile.series) {
        for (int j = 0; j <= g.n; ++j) Q[j] = profile.series->eval_Q(g.node(j));
        return Q;
    }
    Q[g.n] = 0.0;
    const double h = g.step();
    for (int j = g.n - 1; j >= 0; --j)
        Q[j] = Q[j + 1] - 0.5 * h * (profile.q[j] + profile.q[j + 1]);
    return Q;
}

}  // namespace

RadiusData derive_radius(const RadiusProfile& profile) {
    RadiusData out;
    out.Q = accumulate_Q(profile);
    out.r.resize(out.Q.size());
    out.rho.resize(out.Q.size());
    for (size_t j = 0; j < out.Q.size(); ++j) {
        out.r[j] = profile.r_o * std::exp((2.0 / profile.m) * out.Q[j]);
        out.rho[j] = std::pow(out.r[j], profile.m / 2.0);
    }
    return out;
}

Potential reduce_potential(const RadiusProfile& profile, const TransversalMode& mode) {
    if (mode.E < 0) throw NumericsError("reduce_potential: E_nu >= 0 required");
    const Grid& g = profile.grid;
    auto dq = profile.q_deriv();
    auto Q = accumulate_Q(profile);
    const double u0 = mode.E / (profile.r_o * profile.r_o);
    const double beta = 4.0 / profile.m;
    std::vector<double> p(g.size());
    for (int j = 0; j <= g.n; ++j) {
        double u = u0 * std::exp(-beta * Q[j]);
        p[j] = dq[j] + profile.q[j] * profile.q[j] + u - u0;
    }
    return Potential{g, std::move(p)};
}

RiccatiImage riccati_forward(const RadiusProfile& profile, double u0, double beta) {
    if (!(u0 > 0) || !(beta > 0))
        throw NumericsError("riccati_forward: u0 > 0 and beta > 0 required");
    const Grid& g = profile.grid;
    auto dq = profile.q_deriv();
    auto Q = accumulate_Q(profile);
    std::vector<double> integrand(g.size());
    std::vector<double> u(g.size());
    for (int j = 0; j <= g.n; ++j) {
        u[j] = u0 * std::exp(-beta * Q[j]);
        integrand[j] = profile.q[j] * profile.q[j] + u[j];
    }
    const double c0 = trapezoid(integrand, g);
    std::vector<double> v(g.size());
    for (int j = 0; j <= g.n; ++j)
        v[j] = dq[j] + profile.q[j] * profile.q[j] + u[j] - c0;
    return RiccatiImage{g, std::move(v), c0, u0, beta};
}

bool check_support_lemma(const RiccatiImage& v, const RadiusProfile& source,
                         double eps) {
    const Grid& g = v.grid;
    const double tol = 1e-9 * (1.0 + std::abs(v.c0));
    // Largest tau such that the residual p = v + c0 - u0 vanishes on (1-tau, 1).
    int j_res = g.n;
    while (j_res > 0 && std::abs(v.v[j_res] + v.c0 - v.u0) < tol) --j_res;
    double tau = 1.0 - g.node(j_res);
    if (tau <= 2.0 * g.step()) return true;  // no vanishing window; nothing claimed
    double w = std::min(tau, eps * eps);
    for (int j = g.n; j >= 0 && 1.0 - g.node(j) < w; --j)
        if (std::abs(source.q[j]) > 1e-8) return false;
    return true;
}

}  // namespace revscatter
