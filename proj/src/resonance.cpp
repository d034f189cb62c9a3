#include "revscatter/resonance.hpp"

#include <algorithm>
#include <cmath>

#include "revscatter/contour.hpp"

namespace revscatter {

namespace {
constexpr double kAxisTol = 1e-9;
}

std::vector<Complex> ZeroSet::all_zeros_nonzero() const {
    std::vector<Complex> out;
    for (double tau : bound_taus) out.emplace_back(0.0, tau);
    for (const auto& r : resonances) {
        for (int m = 0; m < r.mult; ++m) {
            out.push_back(r.k);
            if (r.k.real() > kAxisTol) out.push_back(-std::conj(r.k));
        }
    }
    return out;
}

int ZeroSet::count_in_disc(double r) const {
    int c = n0;
    for (double tau : bound_taus)
        if (tau <= r) ++c;
    for (const auto& e : resonances)
        if (std::abs(e.k) <= r) c += (e.k.real() > kAxisTol ? 2 : 1) * e.mult;
    return c;
}

void ZeroSet::fit_tail() {
    tail = TailModel{};
    std::vector<double> lk, b, dre;
    for (const auto& e : resonances) {
        if (e.k.real() <= 0.1) continue;
        double a = std::abs(e.k);
        if (a < radius / 3.0) continue;
        lk.push_back(std::log(a));
        b.push_back(-e.k.imag());
        dre.push_back(std::remainder(e.k.real(), M_PI));
    }
    if (lk.size() < 5) return;
    // least squares b = alpha + gamma log|k|
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(lk.size());
    for (size_t j = 0; j < lk.size(); ++j) {
        sx += lk[j];
        sy += b[j];
        sxx += lk[j] * lk[j];
        sxy += lk[j] * b[j];
    }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-12) return;
    tail.gamma = (n * sxy - sx * sy) / det;
    tail.alpha = (sy * sxx - sx * sxy) / det;
    double mo = 0;
    for (double d : dre) mo += d;
    tail.re_offset = mo / n;
    tail.valid = true;
}

std::vector<Complex> ZeroSet::synthetic_pairs(double r_ext) const {
    std::vector<Complex> out;
    if (!tail.valid || r_ext <= radius) return out;
    for (int n = 1;; ++n) {
        double a = n * M_PI + tail.re_offset;
        if (a <= 0) continue;
        if (a > r_ext) break;
        double b = std::max(0.0, tail.alpha + tail.gamma * std::log(a));
        double mag = std::hypot(a, b);
        b = std::max(0.0, tail.alpha + tail.gamma * std::log(mag));
        mag = std::hypot(a, b);
        if (mag <= radius || mag > r_ext) continue;
        out.emplace_back(a, -b);
    }
    return out;
}

namespace {

// Zeros of the real function tau -> psi(sign * i tau) on (0, tau_max].
std::vector<double> imaginary_axis_zeros(const JostEvaluator& ev, double sign,
                                         double tau_max, double tau_min) {
    auto f = [&](double tau) { return ev.value(Complex(0.0, sign * tau)).real(); };
    const int nscan = std::max(2000, static_cast<int>(200 * tau_max));
    std::vector<double> taus;
    double t_prev = std::max(tau_min, tau_max / nscan);
    double f_prev = f(t_prev);
    for (int j = 2; j <= nscan; ++j) {
        double t = tau_max * j / nscan;
        if (t <= t_prev) continue;
        double ft = f(t);
        if (f_prev * ft < 0.0) {
            double a = t_prev, b = t, fa = f_prev;
            for (int it = 0; it < 40; ++it) {
                double mid = 0.5 * (a + b), fm = f(mid);
                if (fm == 0.0) { a = b = mid; break; }
                if (fa * fm < 0.0) b = mid;
                else { a = mid; fa = fm; }
            }
            taus.push_back(0.5 * (a + b));
        }
        t_prev = t;
        f_prev = ft;
    }
    return taus;
}

struct BoxSearch {
    const JostEvaluator& ev;
    const FindZerosOptions& opts;
    std::vector<ResonanceEntry> found;

    Complex contour_value(Complex k) const {
        int steps = std::max(
            512, static_cast<int>(opts.contour_steps_scale * ev.steps_for(k)));
        return ev.value(k, steps);
    }

    int count(double re0, double re1, double im0, double im1) const {
        auto f = [this](Complex k) { return contour_value(k); };
        double side = std::max(re1 - re0, im1 - im0);
        int spe = std::clamp(static_cast<int>(8 * side), 8, 512);
        Contour c = Contour::rectangle(Complex(re0, im0), Complex(re1, im1), spe);
        return winding_number(f, c);
    }

    void polish_and_record(double re0, double re1, double im0, double im1) {
        Complex center(0.5 * (re0 + re1), 0.5 * (im0 + im1));
        double scale = std::abs(ev.derivative(center)) * (1.0 + std::abs(center));
        if (!(scale > 0)) scale = 1.0;
        auto f = [this, scale](Complex k) { return ev.value(k) / scale; };
        try {
            Complex z = newton_polish(f, std::nullopt, center,
                                      opts.polish_tol * (1.0 + std::abs(center)));
            double mre = 0.05 * (re1 - re0) + 1e-9;
            double mim = 0.05 * (im1 - im0) + 1e-9;
            if (z.real() >= re0 - mre && z.real() <= re1 + mre &&
                z.imag() >= im0 - mim && z.imag() <= im1 + mim) {
                found.push_back({z, 1});
                return;
            }
        } catch (const NumericsError&) {
            // fall through to further subdivision
        }
        subdivide(re0, re1, im0, im1, 1, true);
    }

    void solve(double re0, double re1, double im0, double im1, int cnt) {
        if (cnt == 0) return;
        double side = std::max(re1 - re0, im1 - im0);
        if (side < opts.min_box) {
            // unresolved cluster: record with winding multiplicity
            found.push_back({Complex(0.5 * (re0 + re1), 0.5 * (im0 + im1)), cnt});
            return;
        }
        if (cnt == 1 && side <= 1.0) {
            polish_and_record(re0, re1, im0, im1);
            return;
        }
        subdivide(re0, re1, im0, im1, cnt, false);
    }

    void subdivide(double re0, double re1, double im0, double im1, int cnt,
                   bool force) {
        double side = std::max(re1 - re0, im1 - im0);
        if (side < opts.min_box) {
            found.push_back({Complex(0.5 * (re0 + re1), 0.5 * (im0 + im1)), cnt});
            return;
        }
        const bool split_re = (re1 - re0) >= (im1 - im0);
        const double len = split_re ? re1 - re0 : im1 - im0;
        static const double jitter[] = {0.0, 0.02, -0.02, 0.05, -0.05, 0.08, -0.08};
        for (double j : jitter) {
            double mid = (split_re ? 0.5 * (re0 + re1) : 0.5 * (im0 + im1)) + j * len;
            try {
                int c1, c2;
                if (split_re) {
                    c1 = count(re0, mid, im0, im1);
                    c2 = count(mid, re1, im0, im1);
                } else {
                    c1 = count(re0, re1, im0, mid);
                    c2 = count(re0, re1, mid, im1);
                }
                if (!force && c1 + c2 != cnt)
                    continue;  // a zero sat on the split line; try another
                if (split_re) {
                    solve(re0, mid, im0, im1, c1);
                    solve(mid, re1, im0, im1, c2);
                } else {
                    solve(re0, re1, im0, mid, c1);
                    solve(re0, re1, mid, im1, c2);
                }
                return;
            } catch (const ZeroOnContour&) {
                continue;
            }
        }
        throw UnresolvedCluster(
            "find_zeros: could not split box near (" + std::to_string(re0) + "," +
            std::to_string(im0) + ")");
    }
};

}  // namespace

ZeroSet find_zeros(const JostEvaluator& ev, double R, const FindZerosOptions& opts) {
    if (!(R > 0) || R > 200.0)
        throw NumericsError("find_zeros: R must be in (0, 200]");
    ZeroSet zs;
    zs.radius = R;

    // Free case: psi == 1 identically, zero-free. The backward sweep cannot
    // see this (the O(1) value drowns in e^{|Im k|} mode contamination), so
    // answer exactly.
    if (ev.potential().l1_norm() == 0.0) {
        zs.sup_support = 0;
        return zs;
    }

    auto bs = bound_states(ev, R);
    zs.bound_taus = bs.kappas;

    const double l1 = ev.potential().l1_norm();
    Complex psi0 = ev.value(Complex(0.0, 0.0));
    zs.n0 = (std::abs(psi0) < 1e-6 * (1.0 + l1)) ? 1 : 0;
    if (zs.n0 == 0) {
        zs.psi_norm = psi0.real();
    } else {
        const double h = 1e-5;
        zs.psi_norm =
            ((ev.value(Complex(h, 0)) - ev.value(Complex(-h, 0))) / (2.0 * h)).real();
    }

    // antibound states: zeros on the negative imaginary axis
    auto axis = imaginary_axis_zeros(ev, -1.0, R, 2.0 * opts.axis_pad);
    for (double tau : axis) {
        auto f = [&ev](Complex z) { return ev.value(z); };
        Complex z = newton_polish(f, std::nullopt, Complex(0.0, -tau), 1e-10);
        zs.resonances.push_back({Complex(0.0, z.imag()), 1});
    }

    // off-axis zeros in the lower right quadrant; mirrors implied
    BoxSearch search{ev, opts, {}};
    const double pad = opts.axis_pad;
    int root = search.count(pad, R, -R, pad);
    search.solve(pad, R, -R, pad, root);
    for (auto& e : search.found) zs.resonances.push_back(e);

    // keep the disc |k| <= R only
    std::erase_if(zs.resonances,
                  [R](const ResonanceEntry& e) { return std::abs(e.k) > R; });
    std::sort(zs.resonances.begin(), zs.resonances.end(),
              [](const ResonanceEntry& a, const ResonanceEntry& b) {
                  double ma = std::abs(a.k), mb = std::abs(b.k);
                  if (ma != mb) return ma < mb;
                  return std::arg(a.k) < std::arg(b.k);
              });

    if (opts.consistency_check) {
        auto f = [&search](Complex k) { return search.contour_value(k); };
        double rr = 0.999 * R;
        int disc = -1;
        for (int attempt = 0; attempt < 5; ++attempt) {
            try {
                disc = winding_number(f, Contour::disc(Complex(0, 0), rr, 128, 8));
                break;
            } catch (const ZeroOnContour&) {
                rr *= 0.995;
            }
        }
        if (disc >= 0 && disc != zs.count_in_disc(rr))
            throw UnresolvedCluster(
                "find_zeros: disc winding count " + std::to_string(disc) +
                " does not match located zeros " +
                std::to_string(zs.count_in_disc(rr)));
    }

    zs.fit_tail();
    return zs;
}

CountingCurve counting_curve(const ZeroSet& zs, const std::vector<double>& radii) {
    CountingCurve c;
    int prev = 0;
    double prev_r = 0.0;
    for (double r : radii) {
        if (r > zs.radius)
            throw RadiusExceedsSearch("counting_curve: radius exceeds search radius");
        if (r < prev_r) throw NumericsError("counting_curve: radii must ascend");
        int cnt = zs.count_in_disc(r);
        c.radii.push_back(r);
        c.counts.push_back(cnt);
        prev = cnt;
        prev_r = r;
    }
    (void)prev;
    return c;
}

namespace {

// factor for the mirror pair {z, -conj z}: (1 - k/z)(1 + k/conj z)
inline Complex pair_factor(Complex k, Complex z) {
    double n2 = std::norm(z);
    return 1.0 + k * Complex(0.0, 2.0 * z.imag()) / n2 - k * k / n2;
}

}  // namespace

Complex hadamard_eval(const ZeroSet& zs, Complex k, const SeriesOptions& so) {
    Complex prod = zs.psi_norm;
    if (zs.n0 == 1) prod *= k;
    if (zs.sup_support) prod *= std::exp(Complex(0, 1) * k);
    for (double tau : zs.bound_taus) prod *= 1.0 - k / Complex(0.0, tau);
    for (const auto& e : zs.resonances) {
        Complex f = (e.k.real() > kAxisTol) ? pair_factor(k, e.k) : 1.0 - k / e.k;
        for (int m = 0; m < e.mult; ++m) prod *= f;
    }
    if (so.tail_extension > zs.radius) {
        for (Complex z : zs.synthetic_pairs(so.tail_extension))
            prod *= pair_factor(k, z);
        if (zs.tail.valid) {
            // Remainder beyond the synthetic cutoff: the log of a mirror pair
            // at +-t - ib is -2ikb/t^2 - k^2/t^2 + O(t^-3); integrate against
            // the density 1/pi with b(t) = alpha + gamma log t.
            const double R = so.tail_extension;
            const double ib = (zs.tail.alpha + zs.tail.gamma * (std::log(R) + 1.0)) / R;
            prod *= std::exp(-(2.0 * Complex(0, 1) * k * ib + k * k / R) / M_PI);
        }
    }
    return prod;
}

std::vector<double> phase_from_zeros(const ZeroSet& zs,
                                     const std::vector<double>& k_grid,
                                     const SeriesOptions& so) {
    if (k_grid.empty()) return {};
    const double kmax = *std::max_element(k_grid.begin(), k_grid.end());
    auto synth = (so.tail_extension > zs.radius)
                     ? zs.synthetic_pairs(so.tail_extension)
                     : std::vector<Complex>{};

    auto integrand = [&](double t) {
        double s = zs.sup_support ? 1.0 : 0.0;
        for (double tau : zs.bound_taus) s += tau / (t * t + tau * tau);
        for (const auto& e : zs.resonances) {
            double a = e.k.real(), b = -e.k.imag();
            double contrib;
            if (a > kAxisTol)
                contrib = -b / ((t - a) * (t - a) + b * b) -
                          b / ((t + a) * (t + a) + b * b);
            else
                contrib = -b / (t * t + b * b);
            s += e.mult * contrib;
        }
        for (Complex z : synth) {
            double a = z.real(), b = -z.imag();
            s += -b / ((t - a) * (t - a) + b * b) - b / ((t + a) * (t + a) + b * b);
        }
        // Zeros beyond the synthetic cutoff R still shift the phase slope by
        // ~ (2/pi)(ln R + 1)/R; close the sum with the integral of the fitted
        // density b(x) = alpha + gamma ln x at unit spacing-per-pi:
        //   -(1/pi) int_R^inf b(x) [ (t-x)^-2 + (t+x)^-2 ] dx.
        if (!synth.empty() && zs.tail.valid) {
            const double R = so.tail_extension;
            const double al = zs.tail.alpha, ga = zs.tail.gamma;
            double rem;
            if (t < 1e-9) {
                rem = 2.0 * (al + ga * (std::log(R) + 1.0)) / R;
            } else {
                double im = std::log(R) / (R - t) - std::log1p(-t / R) / t;
                double ip = std::log(R) / (R + t) + std::log1p(t / R) / t;
                rem = al * (1.0 / (R - t) + 1.0 / (R + t)) + ga * (im + ip);
            }
            s -= rem / M_PI;
        }
        return s;
    };

    const int nfine = std::max(4000, static_cast<int>(std::ceil(kmax * 200)));
    Grid fine(0.0, std::max(kmax, 1e-8), nfine);
    std::vector<double> vals(fine.size());
    parallel_for(fine.size(), [&](int j) { vals[j] = integrand(fine.node(j)); });
    std::vector<double> cum(fine.size());
    cum[0] = 0.0;
    for (int j = 1; j <= fine.n; ++j)
        cum[j] = cum[j - 1] + 0.5 * fine.step() * (vals[j - 1] + vals[j]);

    const double offset = -M_PI * (zs.n_plus() + 0.5 * zs.n0);
    std::vector<double> out(k_grid.size());
    for (size_t i = 0; i < k_grid.size(); ++i) {
        double t = std::clamp(k_grid[i] / fine.step(), 0.0, double(fine.n));
        int j = std::min(static_cast<int>(t), fine.n - 1);
        double f = t - j;
        out[i] = offset + cum[j] * (1.0 - f) + cum[j + 1] * f;
    }
    return out;
}

std::vector<double> norming_constants(const ZeroSet& zs, const SeriesOptions& so) {
    if (zs.bound_taus.empty())
        throw NumericsError("norming_constants: no bound states");
    auto synth = (so.tail_extension > zs.radius)
                     ? zs.synthetic_pairs(so.tail_extension)
                     : std::vector<Complex>{};
    std::vector<double> c(zs.bound_taus.size());
    for (size_t j = 0; j < zs.bound_taus.size(); ++j) {
        const double tau = zs.bound_taus[j];
        double prod = 1.0;
        for (size_t n = 0; n < zs.bound_taus.size(); ++n) {
            if (n == j) continue;
            prod *= (1.0 - tau / zs.bound_taus[n]) / (1.0 + tau / zs.bound_taus[n]);
        }
        auto pair_ratio = [tau](double a, double b, double n2) {
            // [(1 - kj/z)(1 - kj/zm)] / [(1 + kj/z)(1 + kj/zm)] for kj = i tau
            (void)a;
            double num = 1.0 + (2.0 * tau * b + tau * tau) / n2;
            double den = 1.0 + (-2.0 * tau * b + tau * tau) / n2;
            return num / den;
        };
        for (const auto& e : zs.resonances) {
            double a = e.k.real(), b = -e.k.imag(), n2 = std::norm(e.k);
            double f = (a > kAxisTol) ? pair_ratio(a, b, n2)
                                      : (1.0 + tau / b) / (1.0 - tau / b);
            for (int m = 0; m < e.mult; ++m) prod *= f;
        }
        for (Complex z : synth)
            prod *= pair_ratio(z.real(), -z.imag(), std::norm(z));
        double cj = std::exp(-2.0 * tau) / (2.0 * tau) * std::abs(prod);
        if (!(cj > 0.0) || !std::isfinite(cj))
            throw NonPositiveResult("norming_constants: degenerate product");
        c[j] = cj;
    }
    return c;
}

std::vector<double> trace_formula_check(const JostEvaluator& ev, const ZeroSet& zs,
                                        const std::vector<Complex>& probes,
                                        const SeriesOptions& so) {
    auto synth = (so.tail_extension > zs.radius)
                     ? zs.synthetic_pairs(so.tail_extension)
                     : std::vector<Complex>{};
    std::vector<double> res(probes.size());
    for (size_t i = 0; i < probes.size(); ++i) {
        Complex k = probes[i];
        Complex lhs = ev.derivative(k) / ev.value(k);
        Complex rhs = zs.sup_support ? Complex(0, 1) : Complex(0, 0);
        if (zs.n0) rhs += static_cast<double>(zs.n0) / k;
        for (double tau : zs.bound_taus) rhs += 1.0 / (k - Complex(0.0, tau));
        for (const auto& e : zs.resonances) {
            Complex term = 1.0 / (k - e.k);
            if (e.k.real() > kAxisTol) term += 1.0 / (k + std::conj(e.k));
            rhs += static_cast<double>(e.mult) * term;
        }
        for (Complex z : synth) rhs += 1.0 / (k - z) + 1.0 / (k + std::conj(z));
        res[i] = std::abs(lhs - rhs);
    }
    return res;
}

}  // namespace revscatter
