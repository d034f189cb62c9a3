// revscatter: forward (profile -> zero set), inverse (zero set -> profile),
// verify (identity/round-trip suite), plotdata (CSV emission from artifacts).
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 numerical failure.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "revscatter/io.hpp"
#include "revscatter/marchenko.hpp"
#include "revscatter/verify.hpp"

using namespace revscatter;

namespace {

struct RunConfig {
    std::string input, output;
    int m = 2;
    double r_o = 1.0;
    int nu = 1;
    double E = 1.0;
    double u0 = -1.0;  // <0: derive from E / r_o^2
    int grid_n = kDefaultGridN;
    double R = 120.0;   // zero-search radius
    double K = 200.0;   // Fourier truncation for Marchenko
    std::uint64_t seed = 20260824;
    int threads = 0;

    std::string hash(const std::string& cmd) const {
        std::ostringstream os;
        os << cmd << "|m=" << m << "|r_o=" << r_o << "|nu=" << nu << "|E=" << E
           << "|u0=" << u0 << "|grid_n=" << grid_n << "|R=" << R << "|K=" << K
           << "|seed=" << seed;
        return config_hash(os.str());
    }
};

void emit_counting_csv(const ZeroSet& zs, const std::string& path,
                       const std::string& hash) {
    CsvWriter csv(path, hash, "r,N_r,2r_over_pi");
    for (int r = 1; r <= static_cast<int>(zs.radius); ++r)
        csv.row({static_cast<double>(r),
                 static_cast<double>(zs.count_in_disc(r)), 2.0 * r / M_PI});
}

std::vector<double> phase_grid(double kmax) {
    std::vector<double> kg;
    for (double k = 0.5; k <= kmax + 1e-12; k += 0.05) kg.push_back(k);
    return kg;
}

int cmd_forward(const RunConfig& cfg) {
    const std::string hash = cfg.hash("forward");
    RadiusProfile prof = read_profile_json(cfg.input);
    Potential p = reduce_potential(prof, TransversalMode{cfg.nu, cfg.E});
    JostEvaluator ev(p);
    ZeroSet zs = find_zeros(ev, cfg.R);
    write_zeroset_json(zs, cfg.output + ".zeroset.json", hash);
    emit_counting_csv(zs, cfg.output + ".counting.csv", hash);

    auto kg = phase_grid(std::min(10.0, cfg.R));
    auto direct = s_matrix(ev, kg);
    auto synth = phase_from_zeros(zs, kg);
    CsvWriter csv(cfg.output + ".phase.csv", hash, "k,phi_direct,phi_from_zeros");
    for (size_t j = 0; j < kg.size(); ++j)
        csv.row({kg[j], direct.phase[j], synth[j]});
    std::printf("forward: %zu resonance(s), %zu bound state(s), n0=%d\n",
                zs.resonances.size(), zs.bound_taus.size(), zs.n0);
    return 0;
}

// Definition-J style sanity checks on an input zero set; failures warn only.
nlohmann::json validate_zeroset(const ZeroSet& zs, bool& clean) {
    nlohmann::json checks = nlohmann::json::array();
    auto push = [&](const std::string& name, bool pass, const std::string& det) {
        checks.push_back({{"check", name}, {"pass", pass}, {"detail", det}});
        if (!pass) {
            clean = false;
            std::fprintf(stderr, "warning: %s: %s\n", name.c_str(), det.c_str());
        }
    };
    bool desc = true;
    for (size_t j = 1; j < zs.bound_taus.size(); ++j)
        desc = desc && zs.bound_taus[j] < zs.bound_taus[j - 1];
    push("bound_states_ordered", desc, "tau_j strictly decreasing and positive");
    push("n0_simple", zs.n0 == 0 || zs.n0 == 1, "n0 in {0, 1}");
    // Sign condition: (-1)^j psi(-i tau_j) > 0 along the bound-state ladder,
    // evaluated through the product representation.
    bool signs = true;
    std::ostringstream det;
    for (size_t j = 0; j < zs.bound_taus.size(); ++j) {
        Complex h = hadamard_eval(zs, Complex(0.0, -zs.bound_taus[j]));
        double want = (j % 2 == 0) ? -1.0 : 1.0;  // j counted from the top
        if (h.real() * want <= 0.0) {
            signs = false;
            det << " psi(-i tau_" << j + 1 << ") = " << h.real();
        }
    }
    push("alternating_sign", signs,
         signs ? "(-1)^j psi(-i tau_j) > 0" : det.str());
    return checks;
}

int cmd_inverse(const RunConfig& cfg) {
    const std::string hash = cfg.hash("inverse");
    ZeroSet zs = read_zeroset_json(cfg.input);
    bool clean = true;
    nlohmann::json validation = validate_zeroset(zs, clean);
    {
        nlohmann::json rep;
        rep["version"] = kToolVersion;
        rep["config"] = hash;
        rep["checks"] = validation;
        std::ofstream out(cfg.output + ".validation.json");
        out << std::setw(2) << rep << "\n";
    }

    Potential p{Grid(0.0, 1.0, cfg.grid_n), std::vector<double>(cfg.grid_n + 1, 0.0)};
    if (!zs.resonances.empty() || !zs.bound_taus.empty()) {
        try {
            MarchenkoOptions mo;
            mo.k_max = cfg.K;
            p = reconstruct_from_zeroset(zs, mo);
        } catch (const NumericsError& e) {
            std::fprintf(stderr, "numerical failure in stage marchenko: %s\n",
                         e.what());
            return 3;
        }
    }

    const double u0 = cfg.u0 > 0.0 ? cfg.u0 : cfg.E / (cfg.r_o * cfg.r_o);
    const double beta = 4.0 / cfg.m;
    SineSeries q;
    try {
        RiccatiImage v = potential_to_v(p, u0, beta);
        q = riccati_invert(v);
    } catch (const NumericsError& e) {
        std::fprintf(stderr, "numerical failure in stage riccati: %s\n", e.what());
        return 3;
    }

    RadiusProfile prof = rebuild_radius(q, cfg.m, cfg.r_o, cfg.grid_n);
    write_profile_json(prof, cfg.output + ".profile.json", hash);
    CsvWriter csv(cfg.output + ".potential.csv", hash, "x,p");
    for (int j = 0; j <= p.grid.n; ++j) csv.row({p.grid.node(j), p.p[j]});
    std::printf("inverse: recovered profile with %zu sine coefficient(s)%s\n",
                q.coeffs.size(), clean ? "" : " (validation warnings, see report)");
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    const std::string hash = cfg.hash("verify");
    VerifyOptions vo;
    vo.seed = cfg.seed;
    vo.radius = cfg.R;
    VerificationReport rep;
    try {
        rep = run_verification(vo);
    } catch (const NumericsError& e) {
        std::fprintf(stderr, "numerical failure in verification: %s\n", e.what());
        return 3;
    }
    nlohmann::json j;
    j["version"] = kToolVersion;
    j["config"] = hash;
    j["seed"] = rep.seed;
    j["all_pass"] = rep.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : rep.checks) {
        j["checks"].push_back({{"name", c.name},
                               {"pass", c.pass},
                               {"detail", c.detail},
                               {"seconds", c.seconds}});
        std::printf("%-26s %s  %7.1fs  %s\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", c.seconds, c.detail.c_str());
    }
    std::string path = cfg.output.empty() ? "verify_report.json" : cfg.output;
    std::ofstream out(path);
    if (!out) {
        std::fprintf(stderr, "cannot write %s\n", path.c_str());
        return 2;
    }
    out << std::setw(2) << j << "\n";
    std::printf("%s (seed %llu, report %s)\n",
                rep.all_pass() ? "all checks passed" : "FAILURES present",
                static_cast<unsigned long long>(rep.seed), path.c_str());
    return rep.all_pass() ? 0 : 1;
}

int cmd_plotdata(const RunConfig& cfg) {
    const std::string hash = cfg.hash("plotdata");
    ZeroSet zs = read_zeroset_json(cfg.input);
    emit_counting_csv(zs, cfg.output + ".counting.csv", hash);
    auto kg = phase_grid(std::min(10.0, zs.radius));
    auto synth = phase_from_zeros(zs, kg);
    CsvWriter csv(cfg.output + ".phase.csv", hash, "k,phi_from_zeros");
    for (size_t j = 0; j < kg.size(); ++j) csv.row({kg[j], synth[j]});
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Half-line resonance pipeline: forward scattering, zero-set "
                 "inversion, identity verification"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--threads", cfg.threads, "worker cap (0 = hardware)")
        ->envname("REVSCATTER_THREADS");

    auto add_io = [&](CLI::App* c, bool need_input) {
        if (need_input)
            c->add_option("-i,--input", cfg.input, "input JSON")->required();
        c->add_option("-o,--output", cfg.output, "output path prefix")->required();
    };

    CLI::App* fwd = app.add_subcommand("forward", "profile -> zero set + CSVs");
    add_io(fwd, true);
    fwd->add_option("--nu", cfg.nu, "transversal mode index (default 1)");
    fwd->add_option("--E", cfg.E, "transversal eigenvalue E_nu (default 1)");
    fwd->add_option("-R,--radius", cfg.R, "zero-search radius (default 120)");

    CLI::App* inv = app.add_subcommand("inverse", "zero set -> profile + CSVs");
    add_io(inv, true);
    inv->add_option("-m", cfg.m, "transversal dimension (default 2)");
    inv->add_option("--r-o", cfg.r_o, "asymptotic radius (default 1)");
    inv->add_option("--E", cfg.E, "transversal eigenvalue E_nu (default 1)");
    inv->add_option("--u0", cfg.u0, "override u0 = E_nu / r_o^2 directly");
    inv->add_option("--grid-n", cfg.grid_n, "output grid intervals");
    inv->add_option("-K,--kmax", cfg.K, "Fourier truncation (default 200)");

    CLI::App* ver = app.add_subcommand("verify", "run the full identity suite");
    ver->add_option("-o,--output", cfg.output, "report path (default verify_report.json)");
    ver->add_option("--seed", cfg.seed, "seed for randomized round trips");
    ver->add_option("-R,--radius", cfg.R, "zero-search radius (default 120)");

    CLI::App* plot = app.add_subcommand("plotdata", "zero set -> plot CSVs");
    add_io(plot, true);

    CLI11_PARSE(app, argc, argv);
    if (cfg.threads > 0) set_max_threads(cfg.threads);

    try {
        if (fwd->parsed()) return cmd_forward(cfg);
        if (inv->parsed()) return cmd_inverse(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
        if (plot->parsed()) return cmd_plotdata(cfg);
    } catch (const SchemaError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const NumericsError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    return 2;
}
