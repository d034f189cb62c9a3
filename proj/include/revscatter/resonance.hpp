#pragma once

#include "revscatter/jost.hpp"

namespace revscatter {

struct UnresolvedCluster : NumericsError {
    using NumericsError::NumericsError;
};
struct RadiusExceedsSearch : NumericsError {
    using NumericsError::NumericsError;
};
struct NonPositiveResult : NumericsError {
    using NumericsError::NumericsError;
};

struct ResonanceEntry {
    Complex k;  // Im k < 0; representative with Re k >= 0, mirror implied
    int mult = 1;
};

// Asymptotic model for zeros beyond the search radius, fitted from the outer
// found zeros: |Im k_n| ~ alpha + gamma log|k_n|, Re k_n ~ n pi + re_offset.
// Used to extend the slowly convergent products/series of the zero-set-side
// formulas; each consumer reports the size of the applied tail.
struct TailModel {
    bool valid = false;
    double alpha = 0.0;
    double gamma = 0.0;
    double re_offset = 0.0;
};

struct ZeroSet {
    int n0 = 0;
    double psi_norm = 1.0;  // psi^{(n0)}(0)
    std::vector<double> bound_taus;           // decreasing, k_j = i tau_j
    std::vector<ResonanceEntry> resonances;   // Re >= 0 representatives
    double radius = 0.0;
    int sup_support = 1;  // 1: sup supp p = 1 (class P_0); 0: free case
    TailModel tail;

    int n_plus() const { return static_cast<int>(bound_taus.size()); }
    // Everything except a possible zero at 0; mirrors expanded.
    std::vector<Complex> all_zeros_nonzero() const;
    int count_in_disc(double r) const;
    // Synthetic (a_n, b_n) pairs with radius < |k| <= r_ext from the tail fit;
    // each entry stands for the mirror pair +-a_n - i b_n.
    std::vector<Complex> synthetic_pairs(double r_ext) const;
    void fit_tail();
};

struct FindZerosOptions {
    double axis_pad = 1e-3;          // stay-off distance from ImAxis/Re axis
    double contour_steps_scale = 0.25;  // cheaper ODE resolution on contours
    double min_box = 1e-8;           // below this, record winding multiplicity
    bool consistency_check = true;
    double polish_tol = 1e-10;
};

ZeroSet find_zeros(const JostEvaluator& ev, double R,
                   const FindZerosOptions& opts = {});

struct CountingCurve {
    std::vector<double> radii;
    std::vector<int> counts;
};

CountingCurve counting_curve(const ZeroSet& zs, const std::vector<double>& radii);

struct SeriesOptions {
    double tail_extension = 30000.0;  // synthetic-zero cutoff; 0 disables
};

// Hadamard product psi(k) = k^{n0} psi_norm e^{ik} prod (1 - k/k_n),
// mirror-paired, truncated at zs.radius and extended by the tail model.
Complex hadamard_eval(const ZeroSet& zs, Complex k, const SeriesOptions& = {});

// phi_sc(k) = -pi (n+ + n0/2) + int_0^k [1 + sum Im k_n / |t - k_n|^2] dt.
std::vector<double> phase_from_zeros(const ZeroSet& zs,
                                     const std::vector<double>& k_grid,
                                     const SeriesOptions& = {});

// c_j = e^{-2 tau_j} / (2 tau_j) * |prod (1 - k_j/k_n)/(1 + k_j/k_n)|.
std::vector<double> norming_constants(const ZeroSet& zs, const SeriesOptions& = {});

// Residuals of psi'/psi against n0/k + i + sum 1/(k - k_n) at the probes.
std::vector<double> trace_formula_check(const JostEvaluator& ev, const ZeroSet& zs,
                                        const std::vector<Complex>& probes,
                                        const SeriesOptions& = {});

}  // namespace revscatter
