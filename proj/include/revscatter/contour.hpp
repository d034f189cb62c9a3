#pragma once

#include <functional>
#include <optional>

#include "revscatter/numerics.hpp"

namespace revscatter {

// Closed, positively oriented polygon in the complex plane.
struct Contour {
    std::vector<Complex> vertices;
    int samples_per_edge = 16;

    // Axis-aligned rectangle with corners lo = x0 + i*y0, hi = x1 + i*y1.
    static Contour rectangle(Complex lo, Complex hi, int samples_per_edge = 16);
    // Regular polygon approximating the disc |k - center| = radius.
    static Contour disc(Complex center, double radius, int sides = 64,
                        int samples_per_edge = 8);
};

struct WindingOptions {
    double floor_scale = 1e-12;  // |f| below floor_scale * neighbor scale => on-contour zero
    int max_refine = 22;         // doubling cap for the sample count
};

// Zeros enclosed, counted with multiplicity, by the argument principle.
// Samples are refined until every consecutive phase increment is < pi/2.
int winding_number(const std::function<Complex(Complex)>& f, const Contour& contour,
                   const WindingOptions& opts = {});

struct NewtonOptions {
    int max_iter = 50;
    double deriv_step_scale = 1e-6;  // central-difference step 1e-6*(1+|z|)
};

struct NewtonResult {
    Complex z;
    bool suspected_multiple = false;  // linear convergence observed
};

NewtonResult newton_polish_ex(const std::function<Complex(Complex)>& f,
                              const std::optional<std::function<Complex(Complex)>>& f_prime,
                              Complex seed, double tol, const NewtonOptions& opts = {});

Complex newton_polish(const std::function<Complex(Complex)>& f,
                      const std::optional<std::function<Complex(Complex)>>& f_prime,
                      Complex seed, double tol, const NewtonOptions& opts = {});

}  // namespace revscatter
