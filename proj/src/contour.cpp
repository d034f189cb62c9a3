#include "revscatter/contour.hpp"

#include <algorithm>
#include <cmath>

namespace revscatter {

Contour Contour::rectangle(Complex lo, Complex hi, int samples_per_edge) {
    Contour c;
    c.vertices = {lo, Complex(hi.real(), lo.imag()), hi, Complex(lo.real(), hi.imag())};
    c.samples_per_edge = samples_per_edge;
    return c;
}

Contour Contour::disc(Complex center, double radius, int sides, int samples_per_edge) {
    Contour c;
    c.vertices.reserve(sides);
    for (int j = 0; j < sides; ++j) {
        double th = 2.0 * M_PI * j / sides;
        c.vertices.push_back(center + radius * Complex(std::cos(th), std::sin(th)));
    }
    c.samples_per_edge = samples_per_edge;
    return c;
}

namespace {

struct PhaseAccumulator {
    const std::function<Complex(Complex)>& f;
    double floor_scale;
    int max_depth;

    // |f| is compared against the nearby contour values, not a global scale:
    // psi spans hundreds of orders of magnitude along large contours, so only
    // a local dip can signal a zero on (or hugging) the path.
    void check(Complex z, Complex fz, double local_scale) const {
        double a = std::abs(fz);
        if (!std::isfinite(a))
            throw NonFiniteState("winding_number: non-finite f on contour");
        if (a < floor_scale * local_scale)
            throw ZeroOnContour("winding_number: |f| below floor at k=(" +
                                std::to_string(z.real()) + "," +
                                std::to_string(z.imag()) + ")");
    }

    double arg_change(Complex z1, Complex f1, Complex z2, Complex f2, int depth) const {
        double d = std::arg(f2 / f1);
        if (std::abs(d) < M_PI / 2.0) return d;
        if (depth >= max_depth)
            throw NoConvergence("winding_number: refinement cap exceeded");
        Complex zm = 0.5 * (z1 + z2);
        Complex fm = f(zm);
        check(zm, fm, std::max(std::abs(f1), std::abs(f2)));
        return arg_change(z1, f1, zm, fm, depth + 1) +
               arg_change(zm, fm, z2, f2, depth + 1);
    }
};

}  // namespace

int winding_number(const std::function<Complex(Complex)>& f, const Contour& contour,
                   const WindingOptions& opts) {
    const int nv = static_cast<int>(contour.vertices.size());
    if (nv < 3) throw NumericsError("winding_number: contour needs >= 3 vertices");
    const int spe = std::max(1, contour.samples_per_edge);

    std::vector<Complex> pts;
    pts.reserve(static_cast<size_t>(nv) * spe);
    for (int e = 0; e < nv; ++e) {
        Complex z0 = contour.vertices[e];
        Complex z1 = contour.vertices[(e + 1) % nv];
        for (int j = 0; j < spe; ++j)
            pts.push_back(z0 + (z1 - z0) * (static_cast<double>(j) / spe));
    }
    std::vector<Complex> fv(pts.size());
    std::vector<double> mags(pts.size());
    for (size_t j = 0; j < pts.size(); ++j) {
        fv[j] = f(pts[j]);
        mags[j] = std::abs(fv[j]);
        if (!std::isfinite(mags[j]))
            throw NonFiniteState("winding_number: non-finite f on contour");
    }
    PhaseAccumulator acc{f, opts.floor_scale, opts.max_refine};
    const size_t np = pts.size();
    for (size_t j = 0; j < np; ++j) {
        double local = std::max(mags[(j + np - 1) % np], mags[(j + 1) % np]);
        acc.check(pts[j], fv[j], 1.0 + local);
    }

    double total = 0.0;
    for (size_t j = 0; j < pts.size(); ++j) {
        size_t jn = (j + 1) % pts.size();
        total += acc.arg_change(pts[j], fv[j], pts[jn], fv[jn], 0);
    }
    double w = total / (2.0 * M_PI);
    long r = std::lround(w);
    if (std::abs(w - static_cast<double>(r)) > 0.25)
        throw NoConvergence("winding_number: phase sum not near an integer");
    return static_cast<int>(r);
}

NewtonResult newton_polish_ex(const std::function<Complex(Complex)>& f,
                              const std::optional<std::function<Complex(Complex)>>& f_prime,
                              Complex seed, double tol, const NewtonOptions& opts) {
    Complex z = seed;
    double prev_step = 0.0, prev_ratio = 0.0;
    int linear_hits = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
        Complex fz = f(z);
        Complex dz;
        if (f_prime) {
            dz = (*f_prime)(z);
        } else {
            double h = opts.deriv_step_scale * (1.0 + std::abs(z));
            dz = (f(z + h) - f(z - h)) / (2.0 * h);
        }
        if (std::abs(dz) == 0.0)
            throw DerivativeVanished("newton_polish: f' vanished");
        Complex step = fz / dz;
        double s = std::abs(step);
        if (prev_step > 0.0) {
            double ratio = s / prev_step;
            // Simple zeros contract quadratically; a step ratio that stays
            // near a constant in (0.2, 0.9) signals a multiple zero.
            if (ratio > 0.2 && ratio < 0.9 && std::abs(ratio - prev_ratio) < 0.1)
                ++linear_hits;
            prev_ratio = ratio;
        }
        prev_step = s;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw NonFiniteState("newton_polish: iterate became non-finite");
        if (s <= tol && std::abs(f(z)) <= tol)
            return {z, linear_hits >= 3};
    }
    throw NoConvergence("newton_polish: no convergence within iteration cap");
}

Complex newton_polish(const std::function<Complex(Complex)>& f,
                      const std::optional<std::function<Complex(Complex)>>& f_prime,
                      Complex seed, double tol, const NewtonOptions& opts) {
    return newton_polish_ex(f, f_prime, seed, tol, opts).z;
}

}  // namespace revscatter
