#include "revscatter/riccati.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace revscatter {

RiccatiImage potential_to_v(const Potential& p, double u0, double beta) {
    RiccatiImage out{p.grid, {}, 0.0, u0, beta};
    double mean = trapezoid(std::span<const double>(p.p), p.grid) /
                  (p.grid.b - p.grid.a);
    out.v.resize(p.p.size());
    for (size_t j = 0; j < p.p.size(); ++j) out.v[j] = p.p[j] - mean;
    out.c0 = u0 + mean;  // p = v + v0, c0 = u0 + v0
    return out;
}

namespace {

// int_x^1 sin(n pi t) dt, the per-mode antiderivative entering DQ.
inline double sine_tail_integral(int n, double x) {
    double npi = n * M_PI;
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return (std::cos(npi * x) - sign) / npi;
}

struct Workspace {
    const Grid* grid;
    int ncoef;
    std::vector<double> x;           // nodes
    std::vector<double> sin_tab;     // [node][n]
    std::vector<double> dsin_tab;    // n pi cos(n pi x)
    std::vector<double> tail_tab;    // int_x^1 sin
    std::vector<double> q, dq, Q, expQ;

    Workspace(const Grid& g, int n) : grid(&g), ncoef(n) {
        int m = g.size();
        x.resize(m);
        sin_tab.resize(m * n);
        dsin_tab.resize(m * n);
        tail_tab.resize(m * n);
        for (int j = 0; j < m; ++j) {
            x[j] = g.node(j);
            for (int k = 1; k <= n; ++k) {
                double npi = k * M_PI;
                sin_tab[j * n + k - 1] = std::sin(npi * x[j]);
                dsin_tab[j * n + k - 1] = npi * std::cos(npi * x[j]);
                tail_tab[j * n + k - 1] = sine_tail_integral(k, x[j]);
            }
        }
        q.resize(m);
        dq.resize(m);
        Q.resize(m);
        expQ.resize(m);
    }

    void set_coeffs(const Eigen::VectorXd& a, double beta) {
        int m = grid->size();
        for (int j = 0; j < m; ++j) {
            double s = 0.0, ds = 0.0, tq = 0.0;
            for (int k = 0; k < ncoef; ++k) {
                s += a[k] * sin_tab[j * ncoef + k];
                ds += a[k] * dsin_tab[j * ncoef + k];
                tq += a[k] * tail_tab[j * ncoef + k];
            }
            q[j] = s;
            dq[j] = ds;
            Q[j] = -tq;  // Q(x) = -int_x^1 q
            expQ[j] = std::exp(-beta * Q[j]);
        }
    }
};

double mean_of(const std::vector<double>& f, const Grid& g) {
    return trapezoid(std::span<const double>(f), g) / (g.b - g.a);
}

double l2_of(const std::vector<double>& f, const Grid& g) {
    std::vector<double> sq(f.size());
    for (size_t j = 0; j < f.size(); ++j) sq[j] = f[j] * f[j];
    return std::sqrt(trapezoid(std::span<const double>(sq), g));
}

// Mean-zero residual of V(q) = v at the nodes; returns (residual, c0).
std::pair<std::vector<double>, double> residual_at(const Workspace& w, double u0,
                                                   const std::vector<double>& v) {
    int m = w.grid->size();
    std::vector<double> f(m);
    for (int j = 0; j < m; ++j)
        f[j] = w.dq[j] + w.q[j] * w.q[j] + u0 * w.expQ[j];
    double c0 = mean_of(f, *w.grid);
    for (int j = 0; j < m; ++j) f[j] = f[j] - c0 - v[j];
    return {std::move(f), c0};
}

}  // namespace

SineSeries riccati_invert(const RiccatiImage& img, const RiccatiInvertOptions& opts,
                          RiccatiInvertReport* report) {
    const Grid& g = img.grid;
    if (static_cast<int>(img.v.size()) != g.size())
        throw LengthMismatch("riccati_invert: v samples do not match grid");
    if (std::abs(mean_of(img.v, g)) > 1e-8 * (1.0 + l2_of(img.v, g)))
        throw NumericsError("riccati_invert: v must have mean zero");

    const int m = g.size();
    const int n = opts.n_coeffs;
    Workspace w(g, n);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);

    auto solve_level = [&](const std::vector<double>& v_target) {
        w.set_coeffs(a, img.beta);
        auto [res, c0] = residual_at(w, img.u0, v_target);
        double rnorm = l2_of(res, g);
        if (report) report->residual_history.push_back(rnorm);
        for (int it = 0; it < opts.max_iter; ++it) {
            if (rnorm <= opts.tol) {
                if (report) {
                    report->iterations = it;
                    report->residual = rnorm;
                    report->c0 = c0;
                }
                return true;
            }
            // Jacobian column k: h' + 2 q h + beta u0 e^{-beta Q} int_x^1 h,
            // minus its own mean (the projection travels with the residual).
            Eigen::MatrixXd jac(m, n);
            std::vector<double> col(m);
            for (int k = 0; k < n; ++k) {
                for (int j = 0; j < m; ++j)
                    col[j] = w.dsin_tab[j * n + k] +
                             2.0 * w.q[j] * w.sin_tab[j * n + k] +
                             img.beta * img.u0 * w.expQ[j] * w.tail_tab[j * n + k];
                double cmean = mean_of(col, g);
                for (int j = 0; j < m; ++j) jac(j, k) = col[j] - cmean;
            }
            Eigen::VectorXd rhs(m);
            for (int j = 0; j < m; ++j) rhs[j] = -res[j];
            // v outside the basis image (rough data) leaves a residual floor;
            // the least-squares stationary point is then the answer.
            double grad_rel = (jac.transpose() * rhs).norm() /
                              std::max(1e-300, jac.norm() * rhs.norm());
            if (grad_rel < 1e-9) {
                if (report) {
                    report->iterations = it;
                    report->residual = rnorm;
                    report->c0 = c0;
                }
                return true;
            }
            Eigen::VectorXd step = jac.colPivHouseholderQr().solve(rhs);
            if (!step.allFinite())
                throw NonFiniteState("riccati_invert: non-finite Newton step");

            double lam = 1.0;
            bool accepted = false;
            for (int hv = 0; hv <= opts.max_halvings; ++hv) {
                Eigen::VectorXd trial = a + lam * step;
                w.set_coeffs(trial, img.beta);
                auto [tres, tc0] = residual_at(w, img.u0, v_target);
                double tnorm = l2_of(tres, g);
                if (tnorm < rnorm || tnorm <= opts.tol) {
                    a = trial;
                    res = std::move(tres);
                    rnorm = tnorm;
                    c0 = tc0;
                    accepted = true;
                    break;
                }
                lam *= 0.5;
            }
            if (report) report->residual_history.push_back(rnorm);
            if (!accepted) {
                if (grad_rel < 1e-6) {  // no descent direction left: at the optimum
                    if (report) {
                        report->iterations = it + 1;
                        report->residual = rnorm;
                        report->c0 = c0;
                    }
                    return true;
                }
                return false;
            }
        }
        if (rnorm <= opts.tol) {
            if (report) {
                report->iterations = opts.max_iter;
                report->residual = rnorm;
                report->c0 = c0;
            }
            return true;
        }
        return false;
    };

    if (!solve_level(img.v)) {
        bool ok = false;
        if (opts.continuation) {
            a.setZero();
            std::vector<double> vs(img.v.size());
            for (double s : {0.25, 0.5, 0.75, 1.0}) {
                for (size_t j = 0; j < vs.size(); ++j) vs[j] = s * img.v[j];
                ok = solve_level(vs);
                if (!ok) break;
            }
        }
        if (!ok) {
            w.set_coeffs(a, img.beta);
            auto [res, c0] = residual_at(w, img.u0, img.v);
            (void)c0;
            throw NoConvergence("riccati_invert: Newton stalled, residual " +
                                std::to_string(l2_of(res, g)));
        }
    }

    SineSeries out;
    out.coeffs.assign(a.data(), a.data() + n);
    return out;
}

RadiusProfile rebuild_radius(const SineSeries& q, int m, double r_o, int grid_n) {
    return RadiusProfile::from_series(m, r_o, q, grid_n);
}

IsomorphismBounds isomorphism_bounds(const SineSeries& q, const RiccatiImage& img) {
    IsomorphismBounds b;
    double qd = q.w1_norm();
    double qn = q.l2_norm();
    b.q_deriv_sq = qd * qd;
    double vn = l2_of(img.v, img.grid);
    b.v_sq = vn * vn;
    const double cstar = img.u0 * (img.beta + 1.0) * (2.0 + img.beta * img.u0);
    b.upper = qd * qd + 2.0 * qn * qn * qn * qd +
              cstar * qn * qn * std::exp(2.0 * img.beta * qn);
    return b;
}

}  // namespace revscatter
