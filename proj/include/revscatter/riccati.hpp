#pragma once

#include "revscatter/geometry.hpp"

namespace revscatter {

// v = p - mean(p): the H0 projection. c0 = u0 + v0 with v0 = mean(p).
RiccatiImage potential_to_v(const Potential& p, double u0, double beta);

struct RiccatiInvertOptions {
    int n_coeffs = 64;
    double tol = 1e-10;     // L2 residual target
    int max_iter = 40;
    int max_halvings = 6;   // damping: step halving on residual increase
    bool continuation = true;  // fall back to s = 1/4, 1/2, 3/4, 1 homotopy
};

struct RiccatiInvertReport {
    int iterations = 0;
    double residual = 0.0;
    double c0 = 0.0;  // recovered mean of q' + q^2 + u0 e^{-beta Q}
    std::vector<double> residual_history;
};

// Solve V(q) = v for the unique q in W^1_0 by damped Newton on sine
// coefficients; the residual is projected to mean zero so the mean equation
// never enters. Throws NoConvergence with the final residual in the message.
SineSeries riccati_invert(const RiccatiImage& v, const RiccatiInvertOptions& = {},
                          RiccatiInvertReport* report = nullptr);

RadiusProfile rebuild_radius(const SineSeries& q, int m, double r_o,
                             int grid_n = kDefaultGridN);

// Both sides of the two-sided bound ||q'||^2 <= ||v||^2 <= upper(q).
struct IsomorphismBounds {
    double q_deriv_sq = 0.0;  // ||q'||_{L2}^2
    double v_sq = 0.0;        // ||v||_{L2}^2
    double upper = 0.0;       // ||q'||^2 + 2||q||^3||q'|| + C* ||q||^2 e^{2 beta ||q||}
    bool hold() const { return q_deriv_sq <= v_sq * (1 + 1e-12) + 1e-12 && v_sq <= upper * (1 + 1e-12) + 1e-12; }
};

IsomorphismBounds isomorphism_bounds(const SineSeries& q, const RiccatiImage& v);

}  // namespace revscatter
