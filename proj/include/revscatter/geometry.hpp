#pragma once

#include <optional>

#include "revscatter/numerics.hpp"

namespace revscatter {

// q(x) = sum_n coeffs[n-1] * sin(n pi x); q(0)=q(1)=0 holds identically.
struct SineSeries {
    std::vector<double> coeffs;

    double eval(double x) const;
    double eval_deriv(double x) const;
    // Q(x) = -int_x^1 q(t) dt
    double eval_Q(double x) const;
    // ||q||_{W^1_0}^2 = ||q'||_{L^2}^2 = sum (n pi)^2 a_n^2 / 2
    double w1_norm() const;
    double l2_norm() const;
};

constexpr int kDefaultGridN = 2048;

// Rotation-radius profile q on [0,1] with transversal dimension m and
// asymptotic radius r_o. Canonically a sine series (enforcing q(0)=q(1)=0);
// plain grid samples are accepted too.
struct RadiusProfile {
    int m = 2;
    double r_o = 1.0;
    Grid grid;
    std::vector<double> q;                // samples on grid
    std::optional<SineSeries> series;     // set when series-given

    static RadiusProfile from_samples(int m, double r_o, Grid grid,
                                      std::vector<double> q);
    static RadiusProfile from_series(int m, double r_o, SineSeries s,
                                     int grid_n = kDefaultGridN);

    // q' on the grid: spectral when series-given, centered differences
    // (one-sided at the ends) otherwise.
    std::vector<double> q_deriv() const;
};

struct TransversalMode {
    int nu = 1;
    double E = 0.0;  // transversal Laplacian eigenvalue, >= 0
};

// Compactly supported potential sampled on a grid over [0,1]; identically 0
// beyond x = 1.
struct Potential {
    Grid grid;
    std::vector<double> p;

    static Potential constant(double c, int grid_n = kDefaultGridN);
    static Potential from_function(const std::function<double(double)>& f,
                                   int grid_n = kDefaultGridN);
    double l1_norm() const;
    double min_value() const;
};

struct RiccatiImage {
    Grid grid;
    std::vector<double> v;
    double c0 = 0.0;
    double u0 = 0.0;
    double beta = 0.0;
};

struct RadiusData {
    std::vector<double> Q;
    std::vector<double> r;
    std::vector<double> rho;
};

// Q by cumulative trapezoid from x = 1 leftward (Q(1) = 0 exact),
// r = r_o e^{(2/m)Q}, rho = r^{m/2}.
RadiusData derive_radius(const RadiusProfile& profile);

// p = q' + q^2 + u_nu - u_{nu,0}, u_nu = u_{nu,0} e^{-(4/m)Q},
// u_{nu,0} = E_nu / r_o^2.
Potential reduce_potential(const RadiusProfile& profile, const TransversalMode& mode);

// v = V(q) = q' + q^2 + u0 e^{-beta Q} - c0, c0 = int_0^1 (q^2 + u) dx.
RiccatiImage riccati_forward(const RadiusProfile& profile, double u0, double beta);

// Support lemma at sample resolution: if the Riccati residual
// q' + q^2 + u - u0 vanishes on a left neighborhood of 1, then q must too.
bool check_support_lemma(const RiccatiImage& v, const RadiusProfile& source,
                         double eps);

}  // namespace revscatter
