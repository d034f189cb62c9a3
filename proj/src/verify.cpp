#include "revscatter/verify.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include "revscatter/contour.hpp"

namespace revscatter {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

// Shared fixtures, computed once on first use.
struct Fixtures {
    double radius;
    std::unique_ptr<JostEvaluator> well4, well20, bump, profile_ev;
    ZeroSet z4, z20, zprof;
    SineSeries q0;
    RadiusProfile prof{2, 1.0, Grid(0.0, 1.0, 2), {0.0, 0.0, 0.0}, {}};

    explicit Fixtures(double r) : radius(r) {
        well4 = std::make_unique<JostEvaluator>(Potential::constant(4.0));
        well20 = std::make_unique<JostEvaluator>(Potential::constant(-20.0));
        bump = std::make_unique<JostEvaluator>(Potential::from_function(
            [](double x) { return 5.0 * std::sin(M_PI * x) * std::sin(M_PI * x); }));
        q0.coeffs = {0.0, 0.3};
        prof = RadiusProfile::from_series(2, 1.0, q0);
        profile_ev = std::make_unique<JostEvaluator>(
            reduce_potential(prof, TransversalMode{1, 1.0}));
        z4 = find_zeros(*well4, radius);
        z20 = find_zeros(*well20, radius);
        zprof = find_zeros(*profile_ev, radius);
    }
};

ZeroSet truncate_zeroset(const ZeroSet& zs, double r) {
    ZeroSet out = zs;
    out.resonances.clear();
    for (const auto& e : zs.resonances)
        if (std::abs(e.k) <= r) out.resonances.push_back(e);
    out.bound_taus.clear();
    for (double t : zs.bound_taus)
        if (t <= r) out.bound_taus.push_back(t);
    out.radius = r;
    out.fit_tail();
    return out;
}

// Bound states of the closed-form well: zeros of psi(i tau) on (0, sqrt(-c)).
int oracle_bound_count(double c) {
    const double tmax = std::sqrt(-c);
    int n = 0;
    const int fine = 4000;
    double prev = square_well_jost(c, Complex(0.0, tmax * 1.0 / fine)).real();
    for (int j = 2; j <= fine; ++j) {
        double cur = square_well_jost(c, Complex(0.0, tmax * j / fine)).real();
        if (prev * cur < 0.0) ++n;
        prev = cur;
    }
    return n;
}

double rel_l1(const Potential& rec, const std::function<double(double)>& ref,
              double collar_lo, double collar_hi) {
    double num = 0, den = 0;
    for (int j = 0; j <= rec.grid.n; ++j) {
        double x = rec.grid.node(j);
        if (x > collar_lo && x < collar_hi) continue;
        double w = (j == 0 || j == rec.grid.n) ? 0.5 : 1.0;
        num += w * std::abs(rec.p[j] - ref(x));
        den += w * std::abs(ref(x));
    }
    return num / den;
}

double hadamard_worst(const ZeroSet& zs) {
    double worst = 0.0;
    for (int j = 0; j <= 40; ++j) {
        Complex k(0.25 * j, 0.0);
        Complex h = hadamard_eval(zs, k);
        Complex d = square_well_jost(4.0, k);
        worst = std::max(worst, std::abs(h - d) / std::max(1.0, std::abs(d)));
    }
    return worst;
}

double phase_worst(const JostEvaluator& ev, const ZeroSet& zs) {
    std::vector<double> kg;
    for (int j = 0; j <= 95; ++j) kg.push_back(0.5 + 0.1 * j);
    auto ph = phase_from_zeros(zs, kg);
    auto sm = s_matrix(ev, kg);
    double worst = 0.0;
    for (size_t j = 0; j < kg.size(); ++j)
        worst = std::max(worst, std::abs(ph[j] - sm.phase[j]));
    return worst;
}

}  // namespace

VerificationReport run_verification(const VerifyOptions& opts) {
    VerificationReport rep;
    rep.seed = opts.seed;
    Fixtures fx(opts.radius);

    auto add = [&](const std::string& name, Clock::time_point t0, bool pass,
                   const std::string& detail) {
        double s = std::chrono::duration<double>(Clock::now() - t0).count();
        rep.checks.push_back({name, pass, detail, s});
    };

    {  // 1. closed-form Jost agreement on the complex grid
        auto t0 = Clock::now();
        double worst = 0.0;
        for (double c : {4.0, -20.0}) {
            JostEvaluator& ev = (c > 0) ? *fx.well4 : *fx.well20;
            std::vector<double> local(41, 0.0);
            parallel_for(41, [&](int i) {
                double re = -10.0 + 0.5 * i;
                for (int j = 0; j <= 40; ++j) {
                    Complex k(re, -10.0 + 0.3 * j);
                    Complex a = ev.value(k);
                    Complex b = square_well_jost(c, k);
                    local[i] = std::max(
                        local[i], std::abs(a - b) / std::max(1.0, std::abs(b)));
                }
            });
            for (double v : local) worst = std::max(worst, v);
        }
        add("jost_oracle_agreement", t0, worst <= 1e-8,
            "max rel err " + fmt(worst) + " (tol 1e-8, 41x41 grid, c=4,-20)");
    }

    {  // 2. resonance localization against the oracle inside |k| <= 30
        auto t0 = Clock::now();
        ZeroSet zs = find_zeros(*fx.well4, 30.0);
        double worst = 0.0;
        bool ok = true;
        auto oracle = [](Complex z) { return square_well_jost(4.0, z); };
        for (const auto& e : zs.resonances) {
            Complex polished = newton_polish(oracle, std::nullopt, e.k, 1e-12);
            worst = std::max(worst, std::abs(polished - e.k));
        }
        int listed = zs.count_in_disc(30.0);
        int wound = winding_number(oracle, Contour::disc(0.0, 30.0, 256, 8));
        ok = worst <= 1e-7 && listed == wound;
        add("resonance_localization", t0, ok,
            "max dist " + fmt(worst) + " (tol 1e-7), count " +
                std::to_string(listed) + " vs winding " + std::to_string(wound));
    }

    {  // 3. counting-function asymptotics at r = 25 and r = 100
        auto t0 = Clock::now();
        bool ok = true;
        std::string det;
        for (const ZeroSet* zs : {&fx.z4, &fx.z20}) {
            double r100 = zs->count_in_disc(100.0) / (200.0 / M_PI);
            double r25 = zs->count_in_disc(25.0) / (50.0 / M_PI);
            ok = ok && r100 >= 0.85 && r100 <= 1.15 &&
                 std::abs(r100 - 1.0) < std::abs(r25 - 1.0);
            det += " N100/(2r/pi)=" + fmt(r100) + " N25=" + fmt(r25);
        }
        add("counting_asymptotics", t0, ok, det + " (band 0.85-1.15, improving)");
    }

    {  // 4. Levinson jump at k -> 0 for the deep well
        auto t0 = Clock::now();
        std::vector<double> kg;
        for (double k = 0.01; k <= 60.0; k *= 1.04) kg.push_back(k);
        auto sm = s_matrix(*fx.well20, kg);
        int np = oracle_bound_count(-20.0);
        double target = -M_PI * (np + 0.5 * sm.n0);
        double err = std::abs(sm.phase.front() - target);
        add("levinson_jump", t0, err <= 0.05,
            "phi(0.01)=" + fmt(sm.phase.front()) + " target " + fmt(target) +
                " err " + fmt(err) + " (tol 0.05, n+=" + std::to_string(np) + ")");
    }

    {  // 5. Hadamard product truncation, improving with radius
        auto t0 = Clock::now();
        double e30 = hadamard_worst(truncate_zeroset(fx.z4, 30.0));
        double e60 = hadamard_worst(truncate_zeroset(fx.z4, 60.0));
        double e120 = hadamard_worst(fx.z4);
        bool ok = e120 <= 1e-2 && e30 > e60 && e60 > e120;
        add("hadamard_product", t0, ok,
            "rel err R=30/60/120: " + fmt(e30) + "/" + fmt(e60) + "/" + fmt(e120) +
                " (tol 1e-2 at 120, decreasing)");
    }

    {  // 6. phase-shift series vs direct unwrapped phase
        auto t0 = Clock::now();
        double w4 = phase_worst(*fx.well4, fx.z4);
        double w20 = phase_worst(*fx.well20, fx.z20);
        bool ok = w4 <= 0.02 && w20 <= 0.02;
        add("phase_series", t0, ok,
            "worst err c=4: " + fmt(w4) + ", c=-20: " + fmt(w20) +
                " rad (tol 0.02 on [0.5,10])");
    }

    {  // 7. norming constants: product formula vs eigenfunction quadrature
        auto t0 = Clock::now();
        auto cs = norming_constants(fx.z20);
        double worst = 0.0;
        for (size_t j = 0; j < cs.size(); ++j) {
            double tau = fx.z20.bound_taus[j];
            auto f = fx.well20->solution_samples(Complex(0.0, tau));
            std::vector<double> sq(f.size());
            for (size_t i = 0; i < f.size(); ++i) sq[i] = std::norm(f[i]);
            double cq =
                trapezoid(std::span<const double>(sq), fx.well20->potential().grid) +
                std::exp(-2.0 * tau) / (2.0 * tau);
            worst = std::max(worst, std::abs(cs[j] - cq) / cq);
        }
        bool ok = !cs.empty() && worst <= 0.02;
        add("norming_constants", t0, ok,
            "worst rel err " + fmt(worst) + " over " + std::to_string(cs.size()) +
                " bound state(s) (tol 2%)");
    }

    {  // 8. trace formula at fixed probes
        auto t0 = Clock::now();
        auto res = trace_formula_check(
            *fx.well4, fx.z4, {Complex(5, 5), Complex(0, 3), Complex(8, 1)});
        double worst = 0.0;
        for (double r : res) worst = std::max(worst, r);
        add("trace_formula", t0, worst <= 5e-2,
            "max residual " + fmt(worst) + " (tol 5e-2, probes 5+5i, 3i, 8+1i)");
    }

    {  // 9. Marchenko round trip from direct scattering data
        auto t0 = Clock::now();
        MarchenkoOptions mo;
        const int nh = mo.fourier_n / 2;
        std::vector<double> kg(nh);
        for (int j = 1; j <= nh; ++j) kg[j - 1] = j * (mo.k_max / nh);
        auto smb = s_matrix(*fx.bump, kg);
        Potential rb = reconstruct_from_scattering(smb, {}, {}, mo);
        double eb = rel_l1(
            rb, [](double x) { return 5.0 * std::sin(M_PI * x) * std::sin(M_PI * x); },
            2.0, -1.0);
        auto smw = s_matrix(*fx.well4, kg);
        Potential rw = reconstruct_from_scattering(smw, {}, {}, mo);
        double ew =
            rel_l1(rw, [](double x) { return x <= 1.0 ? 4.0 : 0.0; }, 0.95, 1.05);
        bool ok = eb <= 0.05 && ew <= 0.1;
        add("marchenko_round_trip", t0, ok,
            "rel L1 bump " + fmt(eb) + " (tol 0.05), well " + fmt(ew) +
                " (tol 0.1, 0.05 collar at jump)");
    }

    {  // 10. Riccati isomorphism: 100 random round trips + two-sided bounds
        auto t0 = Clock::now();
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        double worst = 0.0;
        int fails = 0;
        bool bounds_ok = true;
        for (int trial = 0; trial < 100; ++trial) {
            SineSeries q0;
            q0.coeffs.resize(8);
            for (auto& c : q0.coeffs) c = U(rng);
            double target = 0.05 + 1.95 * (0.5 + 0.5 * U(rng));
            double nn = q0.w1_norm();
            for (auto& c : q0.coeffs) c *= target / nn;
            RadiusProfile prof = RadiusProfile::from_series(2, 1.0, q0, 512);
            RiccatiImage v = riccati_forward(prof, 1.0, 2.0);
            try {
                SineSeries q = riccati_invert(v, {.n_coeffs = 64, .tol = 1e-12});
                SineSeries d = q;
                for (size_t j = 0; j < q0.coeffs.size(); ++j)
                    d.coeffs[j] -= q0.coeffs[j];
                worst = std::max(worst, d.w1_norm());
                if (!isomorphism_bounds(q0, v).hold() ||
                    !isomorphism_bounds(q, v).hold())
                    bounds_ok = false;
            } catch (const NumericsError&) {
                ++fails;
            }
        }
        bool ok = fails == 0 && worst <= 1e-8 && bounds_ok;
        add("riccati_isomorphism", t0, ok,
            "100 trials, worst W1 err " + fmt(worst) + " (tol 1e-8), fails " +
                std::to_string(fails) + ", bounds " + (bounds_ok ? "hold" : "VIOLATED"));
    }

    {  // 11. end-to-end: profile -> zero set -> reconstructed radius
        auto t0 = Clock::now();
        Potential prec = reconstruct_from_zeroset(fx.zprof);
        RiccatiImage v = potential_to_v(prec, 1.0, 2.0);
        SineSeries q = riccati_invert(v);
        RadiusProfile rrec = rebuild_radius(q, 2, 1.0);
        RadiusData rd_true = derive_radius(fx.prof);
        RadiusData rd_rec = derive_radius(rrec);
        double sup = 0.0;
        for (size_t j = 0; j < rd_true.r.size(); ++j)
            sup = std::max(sup, std::abs(rd_rec.r[j] - rd_true.r[j]));
        add("end_to_end_radius", t0, sup <= 0.05,
            "sup |r_rec - r|/r_o = " + fmt(sup) + " (tol 0.05)");
    }

    return rep;
}

}  // namespace revscatter
