#pragma once

#include "revscatter/jost.hpp"
#include "revscatter/resonance.hpp"

namespace revscatter {

struct LargeImaginaryResidue : NumericsError {
    using NumericsError::NumericsError;
};
struct IllConditioned : NumericsError {
    using NumericsError::NumericsError;
};

struct MarchenkoOptions {
    double x_max = 2.5;       // half-line truncation (kernel support pad 0.5)
    int nystrom_n = 500;      // intervals of the global t-grid on [0, x_max]
    double k_max = 200.0;     // Fourier truncation [-K, K]
    int fourier_n = 1 << 14;  // trapezoid intervals on [-K, K]
    bool cosine_taper = false;  // optional Gibbs suppression, off by default
    double imag_residue_tol = 1e-4;
    // Window (fractions of k_max) for fitting the 1/k tail of 1 - S. Direct
    // scattering data is cleanest at the top of the band; phase synthesized
    // from a truncated zero set degrades above ~radius, so the zero-set route
    // fits lower.
    double fit_lo = 0.75;
    double fit_hi = 1.0;
};

struct MarchenkoKernel {
    Grid x_grid;               // t-grid on [0, x_max]
    std::vector<double> G;     // G on [0, 2 x_max], sampled on g_grid
    Grid g_grid;
    std::vector<double> K_diag;  // K(x,x) on x_grid (filled by solve_diagonal)
    double max_imag_residue = 0.0;

    double g_at(double x) const;  // linear interpolation, 0 beyond the grid
};

// G(x) = (1/2pi) int (1 - S(k)) e^{ixk} dk + sum_j e^{-x tau_j} / c_j.
// The scattering grid is extended to [-K, K] via S(-k) = conj S(k).
MarchenkoKernel build_g(const ScatteringData& data, const BoundStateList& bound,
                        const std::vector<double>& c,
                        const MarchenkoOptions& opts = {});

// Solve K(x,t) = -G(x+t) - int_x^{x_max} G(t+s) K(x,s) ds at x = x_grid[ix]
// by Nystrom discretization with trapezoid weights; returns K(x, t_i) for
// t_i >= x.
std::vector<double> solve_marchenko(const MarchenkoKernel& kernel, int ix);

// Fill K_diag for every x node (parallel over x).
void solve_diagonal(MarchenkoKernel& kernel);

// p(x) = -2 d/dx K(x,x), centered differences, hard-truncated to [0,1].
Potential recover_potential(const MarchenkoKernel& kernel);

// Full zero-set route: synthesize S = e^{-2i phi} from the phase series and
// c_j from the norming-constant product, then run (Ma1)-(Ma4).
Potential reconstruct_from_zeroset(const ZeroSet& zs,
                                   const MarchenkoOptions& opts = {},
                                   const SeriesOptions& series = {});

Potential reconstruct_from_scattering(const ScatteringData& data,
                                      const BoundStateList& bound,
                                      const std::vector<double>& c,
                                      const MarchenkoOptions& opts = {});

}  // namespace revscatter
