#include "revscatter/marchenko.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace revscatter {

double MarchenkoKernel::g_at(double x) const {
    if (x < g_grid.a) throw NumericsError("MarchenkoKernel: negative argument");
    if (x >= g_grid.b) return 0.0;
    double t = (x - g_grid.a) / g_grid.step();
    int j = std::min(static_cast<int>(t), g_grid.n - 1);
    double f = t - j;
    return G[j] * (1.0 - f) + G[j + 1] * f;
}

namespace {

// Phase samples on the uniform Fourier half-grid, anchored at the Levinson
// limit for k below the data grid.
std::vector<double> resample_phase(const ScatteringData& data,
                                   const std::vector<double>& kgrid,
                                   double phase_at_zero) {
    std::vector<double> out(kgrid.size());
    for (size_t i = 0; i < kgrid.size(); ++i) {
        double k = kgrid[i];
        if (k <= data.k_grid.front()) {
            double f = k / data.k_grid.front();
            out[i] = phase_at_zero * (1.0 - f) + data.phase.front() * f;
        } else if (k >= data.k_grid.back()) {
            out[i] = data.phase.back();
        } else {
            auto it = std::upper_bound(data.k_grid.begin(), data.k_grid.end(), k);
            size_t j = static_cast<size_t>(it - data.k_grid.begin());
            double f = (k - data.k_grid[j - 1]) / (data.k_grid[j] - data.k_grid[j - 1]);
            out[i] = data.phase[j - 1] * (1.0 - f) + data.phase[j] * f;
        }
    }
    return out;
}

}  // namespace

MarchenkoKernel build_g(const ScatteringData& data, const BoundStateList& bound,
                        const std::vector<double>& c, const MarchenkoOptions& opts) {
    if (c.size() != bound.kappas.size())
        throw LengthMismatch("build_g: norming constants do not match bound states");
    for (double cj : c)
        if (!(cj > 0)) throw NumericsError("build_g: norming constants must be > 0");

    MarchenkoKernel ker{Grid(0.0, opts.x_max, opts.nystrom_n),
                        {},
                        Grid(0.0, 2.0 * opts.x_max, 2 * opts.nystrom_n),
                        {},
                        0.0};

    // Uniform half-grid j*h, j = 1..nh, h = K / nh.
    const int nh = opts.fourier_n / 2;
    const double h = opts.k_max / nh;
    std::vector<double> kg(nh);
    for (int j = 1; j <= nh; ++j) kg[j - 1] = j * h;

    const double phase0 = -M_PI * (bound.n_plus + 0.5 * data.n0);
    bool same_grid = data.k_grid.size() == kg.size();
    if (same_grid)
        for (size_t j = 0; j < kg.size() && same_grid; ++j)
            same_grid = std::abs(data.k_grid[j] - kg[j]) < 1e-12;

    std::vector<Complex> s_pos(nh);
    if (same_grid) {
        s_pos.assign(data.s.begin(), data.s.end());
    } else {
        auto ph = resample_phase(data, kg, phase0);
        for (int j = 0; j < nh; ++j) s_pos[j] = std::exp(Complex(0.0, -2.0 * ph[j]));
    }

    // S(0) limit from the Levinson jump: e^{-2i phi(0+)} = (-1)^{n0}.
    const Complex s_zero = (data.n0 % 2 == 0) ? 1.0 : -1.0;

    std::vector<double> w(nh + 1, 1.0);  // trapezoid weights; index 0 is k=0
    w[nh] = 0.5;
    if (opts.cosine_taper) {
        const double k_lo = 0.9 * opts.k_max;
        for (int j = 0; j <= nh; ++j) {
            double k = j * h;
            if (k > k_lo)
                w[j] *= 0.5 * (1.0 + std::cos(M_PI * (k - k_lo) / (opts.k_max - k_lo)));
        }
    }

    // 1 - S decays like (i/k)(a + b e^{-2ik}), which makes G0 jump at x = 0
    // and x = 2; raw trapezoid transforms of that tail ring at O(1/K). Fit
    // the tail on the outer quarter of the grid, subtract the smooth model
    // M(k) = i (a + b e^{-2ik}) / (k - i), and add back its exact transform
    // G_M(x) = -a e^{-x} - b e^{-(x-2)} theta(x-2)  (x > 0, right limits).
    double ta = 0.0, tb = 0.0;
    {
        int j_lo = std::clamp(static_cast<int>(opts.fit_lo * nh), 0, nh - 2);
        int j_hi = std::clamp(static_cast<int>(opts.fit_hi * nh), j_lo + 2, nh);
        double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
        for (int j = j_lo; j < j_hi; ++j) {
            double k = (j + 1) * h;
            Complex g = -Complex(0.0, 1.0) * k * (1.0 - s_pos[j]);
            Complex e = std::exp(Complex(0.0, -2.0 * k));
            s11 += 1.0;
            s12 += e.real();
            s22 += std::norm(e);
            r1 += g.real();
            r2 += (std::conj(e) * g).real();
        }
        double det = s11 * s22 - s12 * s12;
        if (std::abs(det) > 1e-12 * s11 * s22) {
            ta = (s22 * r1 - s12 * r2) / det;
            tb = (s11 * r2 - s12 * r1) / det;
        }
    }
    auto tail_model = [&](double k) {
        return Complex(0.0, 1.0) * (ta + tb * std::exp(Complex(0.0, -2.0 * k))) /
               Complex(k, -1.0);
    };

    // G0(x) = (1/2pi) int (1-S) e^{ixk} dk; negative k by S(-k)=conj S(k),
    // so the integral is w0(1-S(0)) + 2 Re sum_{j>=1} w_j (1-S_j) e^{ix j h}.
    std::vector<Complex> d_pos(nh);
    for (int j = 0; j < nh; ++j)
        d_pos[j] = (1.0 - s_pos[j]) - tail_model((j + 1) * h);
    const Complex d_zero = (1.0 - s_zero) - tail_model(0.0);
    ker.G.resize(ker.g_grid.size());
    double max_unit_dev = 0.0;
    for (int j = 0; j < nh; ++j)
        max_unit_dev = std::max(max_unit_dev, std::abs(std::abs(s_pos[j]) - 1.0));
    ker.max_imag_residue = max_unit_dev;  // deviation from unitarity feeds Im G
    if (max_unit_dev > opts.imag_residue_tol)
        throw LargeImaginaryResidue("build_g: |S| deviates from 1 by " +
                                    std::to_string(max_unit_dev));

    parallel_for(ker.g_grid.size(), [&](int jx) {
        const double x = ker.g_grid.node(jx);
        const Complex rot = std::exp(Complex(0.0, x * h));
        Complex e = rot;
        Complex acc = 0.5 * w[0] * d_zero;
        for (int j = 0; j < nh; ++j) {
            acc += w[j + 1] * d_pos[j] * e;
            e *= rot;
        }
        double g0 = acc.real() * h / M_PI;  // 2 Re(...) * h / (2 pi)
        g0 -= ta * std::exp(-x);
        if (x >= 2.0) g0 -= tb * std::exp(-(x - 2.0));
        double gb = 0.0;
        for (size_t b = 0; b < bound.kappas.size(); ++b)
            gb += std::exp(-x * bound.kappas[b]) / c[b];
        ker.G[jx] = g0 + gb;
    });
    return ker;
}

std::vector<double> solve_marchenko(const MarchenkoKernel& kernel, int ix) {
    const Grid& xg = kernel.x_grid;
    if (ix < 0 || ix > xg.n) throw NumericsError("solve_marchenko: index out of range");
    const int m = xg.n - ix + 1;
    const double x = xg.node(ix);
    const double h = xg.step();

    if (m == 1) {
        double g = kernel.g_at(2.0 * x);
        return {-g};
    }

    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd b(m);
    for (int r = 0; r < m; ++r) {
        const double tr = xg.node(ix + r);
        for (int col = 0; col < m; ++col) {
            double wcol = (col == 0 || col == m - 1) ? 0.5 * h : h;
            a(r, col) = wcol * kernel.g_at(tr + xg.node(ix + col));
        }
        a(r, r) += 1.0;
        b(r) = -kernel.g_at(x + tr);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    if (lu.rcond() < 1e-8)
        throw IllConditioned("solve_marchenko: condition estimate exceeds 1e8 at x=" +
                             std::to_string(x));
    Eigen::VectorXd k = lu.solve(b);
    return std::vector<double>(k.data(), k.data() + m);
}

void solve_diagonal(MarchenkoKernel& kernel) {
    kernel.K_diag.assign(kernel.x_grid.size(), 0.0);
    parallel_for(kernel.x_grid.size(), [&](int ix) {
        kernel.K_diag[ix] = solve_marchenko(kernel, ix)[0];
    });
}

Potential recover_potential(const MarchenkoKernel& kernel) {
    if (kernel.K_diag.size() != static_cast<size_t>(kernel.x_grid.size()))
        throw NumericsError("recover_potential: K_diag not computed");
    const Grid& xg = kernel.x_grid;
    const double h = xg.step();
    int n1 = static_cast<int>(std::round(1.0 / h));
    if (n1 < 2 || n1 > xg.n - 1)
        throw NumericsError("recover_potential: x grid does not cover [0,1]");

    std::vector<double> p(n1 + 1);
    const auto& kd = kernel.K_diag;
    p[0] = -2.0 * (-3.0 * kd[0] + 4.0 * kd[1] - kd[2]) / (2.0 * h);
    for (int j = 1; j <= n1; ++j) p[j] = -2.0 * (kd[j + 1] - kd[j - 1]) / (2.0 * h);
    return Potential{Grid(0.0, 1.0, n1), std::move(p)};
}

Potential reconstruct_from_scattering(const ScatteringData& data,
                                      const BoundStateList& bound,
                                      const std::vector<double>& c,
                                      const MarchenkoOptions& opts) {
    MarchenkoKernel ker = build_g(data, bound, c, opts);
    solve_diagonal(ker);
    return recover_potential(ker);
}

Potential reconstruct_from_zeroset(const ZeroSet& zs, const MarchenkoOptions& opts_in,
                                   const SeriesOptions& series) {
    // The synthesized phase is reliable only well inside the zero-set radius;
    // cap the Fourier band there, fit the 1/k tail in the clean mid-band, and
    // taper the top of the band where the synthetic-zero junction rings.
    MarchenkoOptions opts = opts_in;
    if (zs.radius > 10.0 && opts.k_max > 0.8 * zs.radius) {
        opts.k_max = 0.8 * zs.radius;
        opts.fit_lo = 0.25;
        opts.fit_hi = 0.5;
        opts.cosine_taper = true;
    }
    const int nh = opts.fourier_n / 2;
    const double h = opts.k_max / nh;
    std::vector<double> kg(nh);
    for (int j = 1; j <= nh; ++j) kg[j - 1] = j * h;

    ScatteringData data;
    data.k_grid = kg;
    data.phase = phase_from_zeros(zs, kg, series);

    // The truncated zero set leaves a small spurious linear ramp in the
    // synthesized phase (residual zero-density mismatch); the genuine phase
    // decays like a/k. Fit phi ~ (a + bc cos 2k + bs sin 2k)/k + c k on the
    // upper half of the band and remove the ramp.
    {
        const int j0 = nh / 4, nf = nh - j0;
        const double ks = kg[nh - 1];  // scale powers to condition the fit
        Eigen::MatrixXd A(nf, 5);
        Eigen::VectorXd y(nf);
        for (int j = 0; j < nf; ++j) {
            double k = kg[j0 + j];
            A(j, 0) = 1.0 / k;
            A(j, 1) = std::cos(2.0 * k) / k;
            A(j, 2) = std::sin(2.0 * k) / k;
            A(j, 3) = k / ks;
            A(j, 4) = std::pow(k / ks, 3);
            y(j) = data.phase[j0 + j];
        }
        Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
        if (std::isfinite(coef[3]) && std::isfinite(coef[4]))
            for (int j = 0; j < nh; ++j) {
                double t = kg[j] / ks;
                data.phase[j] -= coef[3] * t + coef[4] * t * t * t;
            }
    }
    data.s.resize(nh);
    for (int j = 0; j < nh; ++j)
        data.s[j] = std::exp(Complex(0.0, -2.0 * data.phase[j]));
    data.n0 = zs.n0;

    BoundStateList bound{zs.bound_taus, zs.n_plus()};
    std::vector<double> c;
    if (!zs.bound_taus.empty()) c = norming_constants(zs, series);
    return reconstruct_from_scattering(data, bound, c, opts);
}

}  // namespace revscatter
