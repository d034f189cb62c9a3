#include "revscatter/jost.hpp"

#include <algorithm>
#include <cmath>

#include "revscatter/contour.hpp"

namespace revscatter {

JostEvaluator::JostEvaluator(Potential p, int base_steps)
    : p_(std::move(p)), base_steps_(base_steps) {
    if (base_steps_ < 2) throw NumericsError("JostEvaluator: steps >= 2 required");
    p_mid_.resize(p_.grid.n);
    for (int j = 0; j < p_.grid.n; ++j) p_mid_[j] = 0.5 * (p_.p[j] + p_.p[j + 1]);
}

int JostEvaluator::steps_for(Complex k) const {
    double a = std::abs(k);
    double scale = std::max(1.0, a / 50.0);
    return static_cast<int>(std::ceil(base_steps_ * scale));
}

namespace {

// Linear interpolation of the potential samples.
inline double p_at(const Potential& p, double x) {
    double t = (x - p.grid.a) / (p.grid.b - p.grid.a) * p.grid.n;
    if (t <= 0.0) return p.p.front();
    if (t >= p.grid.n) return p.p.back();
    int j = static_cast<int>(t);
    double f = t - j;
    return p.p[j] * (1.0 - f) + p.p[j + 1] * f;
}

// Backward sweep of y'' = (p - k^2) y from x=1 to x=x_end; returns (y, y').
inline void sweep(const Potential& pot, Complex k, int steps, double x_end,
                  Complex& y1, Complex& y2,
                  std::vector<Complex>* record = nullptr, int record_every = 0) {
    const Complex c2 = k * k;
    const double h = (x_end - 1.0) / steps;
    const double h2 = 0.5 * h;
    const Complex eik = std::exp(Complex(0, 1) * k);
    y1 = eik;
    y2 = Complex(0, 1) * k * eik;
    if (record) (*record)[record->size() - 1] = y1;
    for (int i = 0; i < steps; ++i) {
        const double x = 1.0 + i * (x_end - 1.0) / steps;
        const double pa = p_at(pot, x);
        const double pm = p_at(pot, x + h2);
        const double pb = p_at(pot, x + h);
        const Complex A1 = y2, B1 = (pa - c2) * y1;
        const Complex A2 = y2 + h2 * B1, B2 = (pm - c2) * (y1 + h2 * A1);
        const Complex A3 = y2 + h2 * B2, B3 = (pm - c2) * (y1 + h2 * A2);
        const Complex A4 = y2 + h * B3, B4 = (pb - c2) * (y1 + h * A3);
        y1 += (h / 6.0) * (A1 + 2.0 * A2 + 2.0 * A3 + A4);
        y2 += (h / 6.0) * (B1 + 2.0 * B2 + 2.0 * B3 + B4);
        if (record && record_every > 0 && (i + 1) % record_every == 0)
            (*record)[record->size() - 1 - (i + 1) / record_every] = y1;
        if ((i & 255) == 255 && (!std::isfinite(y1.real()) || !std::isfinite(y1.imag())))
            throw NonFiniteState("JostEvaluator: non-finite state during sweep");
    }
    if (!std::isfinite(y1.real()) || !std::isfinite(y1.imag()))
        throw NonFiniteState("JostEvaluator: non-finite Jost value");
}

}  // namespace

Complex JostEvaluator::value(Complex k, int steps) const {
    Complex y1, y2;
    sweep(p_, k, steps, 0.0, y1, y2);
    return y1;
}

Complex JostEvaluator::derivative(Complex k) const {
    const double h = 1e-6 * (1.0 + std::abs(k));
    const int steps = steps_for(k);
    return (value(k + h, steps) - value(k - h, steps)) / (2.0 * h);
}

std::vector<Complex> JostEvaluator::solution_samples(Complex k) const {
    const int n = p_.grid.n;
    int mult = std::max(1, (steps_for(k) + n - 1) / n);
    int steps = mult * n;
    std::vector<Complex> rec(n + 1);
    Complex y1, y2;
    sweep(p_, k, steps, 0.0, y1, y2, &rec, mult);
    return rec;  // rec[j] = f_+(x_j, k)
}

std::vector<double> BoundStateList::energies() const {
    std::vector<double> e(kappas.size());
    for (size_t j = 0; j < kappas.size(); ++j) e[j] = -kappas[j] * kappas[j];
    return e;
}

BoundStateList bound_states(const JostEvaluator& ev, double tau_max) {
    if (!(tau_max > 0)) throw NumericsError("bound_states: tau_max > 0 required");
    // psi is real on the positive imaginary axis; scan for sign changes.
    auto f = [&ev](double tau) { return ev.value(Complex(0.0, tau)).real(); };
    const int nscan = std::max(2000, static_cast<int>(200 * tau_max));
    std::vector<double> taus;
    double t_prev = tau_max / nscan;
    double f_prev = f(t_prev);
    for (int j = 2; j <= nscan; ++j) {
        double t = tau_max * j / nscan;
        double ft = f(t);
        if (f_prev == 0.0) taus.push_back(t_prev);
        else if (f_prev * ft < 0.0) {
            // bisect a few times, then polish
            double a = t_prev, b = t, fa = f_prev;
            for (int it = 0; it < 30; ++it) {
                double mid = 0.5 * (a + b), fm = f(mid);
                if (fm == 0.0) { a = b = mid; break; }
                if (fa * fm < 0.0) b = mid;
                else { a = mid; fa = fm; }
            }
            auto fc = [&ev](Complex z) { return ev.value(z); };
            auto res = newton_polish_ex(fc, std::nullopt,
                                        Complex(0.0, 0.5 * (a + b)), 1e-11);
            if (res.suspected_multiple)
                throw SuspectedMultipleZero(
                    "bound_states: non-simple zero on the imaginary axis");
            taus.push_back(res.z.imag());
        }
        t_prev = t;
        f_prev = ft;
    }
    std::sort(taus.begin(), taus.end(), std::greater<>());
    // collapse duplicates from adjacent brackets
    std::vector<double> uniq;
    for (double t : taus)
        if (uniq.empty() || std::abs(uniq.back() - t) > 1e-8) uniq.push_back(t);
    return BoundStateList{uniq, static_cast<int>(uniq.size())};
}

namespace {

// Unwrapped phase difference arg psi(ka) - arg psi(kb) for real ka < kb,
// refining by midpoints until each increment is < pi/2.
double phase_step(const JostEvaluator& ev, double ka, Complex fa, double kb,
                  Complex fb, int depth) {
    double d = std::arg(fa / fb);
    if (std::abs(d) < M_PI / 2.0) return d;
    if (depth > 40) throw NoConvergence("s_matrix: phase unwrap refinement cap");
    double km = 0.5 * (ka + kb);
    Complex fm = ev.value(Complex(km, 0.0));
    return phase_step(ev, ka, fa, km, fm, depth + 1) +
           phase_step(ev, km, fm, kb, fb, depth + 1);
}

}  // namespace

ScatteringData s_matrix(const JostEvaluator& ev, std::vector<double> k_grid) {
    if (k_grid.empty()) throw NumericsError("s_matrix: empty grid");
    for (size_t j = 0; j < k_grid.size(); ++j) {
        if (k_grid[j] <= 0.0) throw NumericsError("s_matrix: grid must be positive");
        if (j > 0 && k_grid[j] <= k_grid[j - 1])
            throw NumericsError("s_matrix: grid must be ascending");
    }
    const size_t n = k_grid.size();
    std::vector<Complex> psi(n);
    parallel_for(static_cast<int>(n), [&](int j) {
        psi[j] = ev.value(Complex(k_grid[j], 0.0));
    });
    const double floor = 1e-10 * (1.0 + ev.potential().l1_norm());
    for (size_t j = 0; j < n; ++j)
        if (std::abs(psi[j]) < floor)
            throw RealZeroDetected("s_matrix: |psi| below floor at k=" +
                                   std::to_string(k_grid[j]));

    ScatteringData out;
    out.k_grid = std::move(k_grid);
    out.s.resize(n);
    out.phase.resize(n);
    for (size_t j = 0; j < n; ++j) out.s[j] = std::conj(psi[j]) / psi[j];

    // Anchor the branch at the top of the grid where phi_sc ~ 0, march down.
    out.phase[n - 1] = std::arg(psi[n - 1]);
    for (size_t j = n - 1; j > 0; --j)
        out.phase[j - 1] = out.phase[j] + phase_step(ev, out.k_grid[j - 1], psi[j - 1],
                                                     out.k_grid[j], psi[j], 0);

    const double n0_floor = 1e-6 * (1.0 + ev.potential().l1_norm());
    out.n0 = (std::abs(ev.value(Complex(0.0, 0.0))) < n0_floor) ? 1 : 0;
    return out;
}

JostDiagnostics jost_integral_form(const JostEvaluator& ev, double T) {
    JostDiagnostics d;
    for (int j = 0; j <= 95; ++j) {
        double k = 10.0 + 2.0 * j;
        Complex v = ev.value(Complex(k, 0.0));
        d.sup_k_times_psi_minus_1 =
            std::max(d.sup_k_times_psi_minus_1, std::abs(k * (v - 1.0)));
    }
    d.type_estimate = std::log(std::abs(ev.value(Complex(0.0, -T)))) / T;
    for (int j = 1; j <= 8; ++j) {
        Complex k(0.7 * j, 0.3 * j - 1.5);
        Complex a = ev.value(-std::conj(k));
        Complex b = std::conj(ev.value(k));
        d.conj_symmetry_residual = std::max(d.conj_symmetry_residual, std::abs(a - b));
    }
    return d;
}

Complex square_well_jost(double c, Complex k) {
    const Complex z = k * k - c;  // w^2
    const Complex w = std::sqrt(z);
    Complex cosw, sinc;
    if (std::abs(w) < 1e-4) {
        cosw = 1.0 - z / 2.0 + z * z / 24.0;
        sinc = 1.0 - z / 6.0 + z * z / 120.0;
    } else {
        cosw = std::cos(w);
        sinc = std::sin(w) / w;
    }
    return std::exp(Complex(0, 1) * k) * (cosw - Complex(0, 1) * k * sinc);
}

}  // namespace revscatter
