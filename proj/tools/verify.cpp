#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "spiked/error.hpp"
#include "spiked/linalg.hpp"
#include "spiked/quad.hpp"
#include "spiked/sim.hpp"

namespace lab {

using spiked::Error;
using spiked::ErrorCode;
namespace sim = spiked::sim;
namespace quad = spiked::quad;
namespace linalg = spiked::linalg;

VerifyLevel parse_level(const std::string& s) {
    if (s == "quick") return VerifyLevel::Quick;
    if (s == "full") return VerifyLevel::Full;
    throw Error(ErrorCode::InvalidConfig, "verify level must be quick or full");
}

VerifyPlan verify_plan(VerifyLevel level) {
    VerifyPlan p;
    if (level == VerifyLevel::Full) {
        p.d = 2000;
        p.trials = 200;
    }
    return p;
}

bool VerifyReport::all_pass() const { return first_failure().empty(); }

std::string VerifyReport::first_failure() const {
    for (const auto& p : probes) {
        if (!p.pass) return p.name;
    }
    for (const auto& i : identities) {
        if (!i.pass) return i.name;
    }
    return {};
}

namespace {

ProbeRow judge(std::string name, double c, double mu, double tau, const std::vector<double>& xs,
               double expected, double z_limit) {
    const auto est = sim::summarize(xs, 0);
    ProbeRow row{std::move(name), c, mu, tau, est.mean, est.stderr_, expected, 0.0, false};
    const double dev = est.mean - expected;
    if (est.stderr_ > 0.0) {
        row.z = dev / est.stderr_;
        row.pass = std::abs(row.z) <= z_limit;
    } else {
        // Forms that vanish identically in this regime (t at mu = 0, c > 1).
        row.pass = std::abs(dev) <= 1e-9 * std::max(1.0, std::abs(expected));
    }
    return row;
}

double rel_diff(const linalg::Matrix& a, const linalg::Matrix& b) {
    return (a - b).norm() / std::max(1.0, b.norm());
}

void run_identities(VerifyReport& report, std::uint64_t seed_root) {
    // Fast probe path against the explicit pseudoinverse path, small sizes.
    double worst = 0.0;
    int k = 0;
    for (auto [d, n] : {std::pair<int, int>{40, 80}, {80, 40}}) {
        for (double mu : {0.0, 1.0}) {
            sim::ModelConfig cfg;
            cfg.d = d;
            cfg.n_trn = n;
            cfg.n_tst = n;
            cfg.theta_trn = 1.0;
            const auto seed = sim::derive_seed(seed_root ^ 0x1d3u, k++);
            const auto a = sim::measure_quad_forms(cfg, mu, seed, 3);
            const auto b = sim::measure_quad_forms_reference(cfg, mu, seed, 3);
            const double fa[] = {a.h_sq, a.k_sq, a.t_sq, a.xi, a.gamma, a.k_aa_k, a.eps_kk, a.eps_tt,
                                 a.eps_aa, a.eps_ah_t, a.eps_aakk};
            const double fb[] = {b.h_sq, b.k_sq, b.t_sq, b.xi, b.gamma, b.k_aa_k, b.eps_kk, b.eps_tt,
                                 b.eps_aa, b.eps_ah_t, b.eps_aakk};
            for (int i = 0; i < 11; ++i) {
                worst = std::max(worst, std::abs(fa[i] - fb[i]) / std::max(1.0, std::abs(fb[i])));
            }
            for (int i = 0; i < 4; ++i) {
                worst = std::max(worst, std::abs(a.zero[i] - b.zero[i]) / std::max(1.0, std::abs(b.zero[i])));
            }
            const double gamma_def = a.gamma - (cfg.theta_trn * cfg.theta_trn * a.t_sq * a.k_sq + a.xi * a.xi);
            report.identities.push_back({"gamma definition d=" + std::to_string(d) + " mu=" +
                                             std::to_string(static_cast<int>(mu)),
                                         std::abs(gamma_def), 0.0, gamma_def == 0.0});
        }
    }
    report.identities.push_back({"fast probes vs explicit pseudoinverse", worst, 1e-8, worst <= 1e-8});

    // Rank-one pseudoinverse update against a direct pseudoinverse.
    sim::Rng rng(sim::derive_seed(seed_root, 0xabcdu));
    std::normal_distribution<double> g;
    double meyer_worst = 0.0;
    for (auto [r, c] : {std::pair<int, int>{30, 50}, {50, 30}}) {
        for (double theta : {0.1, 1.0, 10.0}) {
            linalg::Matrix a(r, c);
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = g(rng);
            const linalg::Vector u = sim::random_unit(rng, r);
            const linalg::Vector v = sim::random_unit(rng, c);
            const linalg::Matrix lhs = linalg::rank_one_pinv_update(a, theta, u, v);
            const linalg::Matrix rhs = linalg::pinv(a + theta * u * v.transpose());
            meyer_worst = std::max(meyer_worst, rel_diff(lhs, rhs));
        }
    }
    report.identities.push_back({"rank-one pseudoinverse update", meyer_worst, 1e-8, meyer_worst <= 1e-8});
}

}  // namespace

VerifyReport run_verify(const VerifyPlan& plan, std::uint64_t seed_root) {
    VerifyReport report;
    run_identities(report, seed_root);

    // One bulk draw per trial serves every (mu, tau) setting at that c.
    std::vector<sim::ProbeSetting> settings;
    for (double mu : plan.mus)
        for (double tau : plan.taus) settings.push_back({mu, tau});

    for (std::size_t ci = 0; ci < plan.cs.size(); ++ci) {
        const double c = plan.cs[ci];
        sim::ModelConfig cfg;
        cfg.d = plan.d;
        cfg.n_trn = static_cast<std::int64_t>(std::llround(static_cast<double>(plan.d) / c));
        cfg.n_tst = cfg.n_trn;
        cfg.theta_trn = plan.theta;
        cfg.tau_eps_trn = plan.tau_eps;
        cfg.beta_dot_u = 0.0;
        const std::uint64_t root = sim::derive_seed(seed_root, ci);

        std::vector<std::vector<sim::QuadFormSample>> draws(static_cast<std::size_t>(plan.trials));
        sim::parallel_for(plan.trials, plan.threads, [&](std::int64_t t) {
            draws[static_cast<std::size_t>(t)] =
                sim::measure_quad_forms_batch(cfg, settings, sim::derive_seed(root, static_cast<std::uint64_t>(t)),
                                               plan.noise_draws);
        });

        for (std::size_t si = 0; si < settings.size(); ++si) {
            const double mu = settings[si].mu, tau = settings[si].tau_a;
            const auto e = quad::quad_form_expectations(cfg.c(), mu, tau, plan.tau_eps, plan.theta,
                                                        static_cast<double>(plan.d));
            auto probe = [&](const std::string& name, double expected, auto field) {
                std::vector<double> xs;
                xs.reserve(draws.size());
                for (const auto& row : draws) xs.push_back(field(row[si]));
                report.probes.push_back(judge(name, c, mu, tau, xs, expected, plan.z_limit));
            };
            probe("h_sq", e.h_sq, [](const auto& s) { return s.h_sq; });
            probe("k_sq", e.k_sq, [](const auto& s) { return s.k_sq; });
            probe("t_sq", e.t_sq, [](const auto& s) { return s.t_sq; });
            probe("xi", e.xi, [](const auto& s) { return s.xi; });
            probe("gamma", e.gamma_bar, [](const auto& s) { return s.gamma; });
            probe("k_aa_k", e.k_aa_k, [](const auto& s) { return s.k_aa_k; });
            probe("eps_kk", e.eps_kk, [](const auto& s) { return s.eps_kk; });
            probe("eps_tt", e.eps_tt, [](const auto& s) { return s.eps_tt; });
            probe("eps_aa", e.eps_aa, [](const auto& s) { return s.eps_aa; });
            probe("eps_ah_t", e.eps_ah_t, [](const auto& s) { return s.eps_ah_t; });
            probe("eps_aakk", e.eps_aakk, [](const auto& s) { return s.eps_aakk; });
            const auto zeros = quad::zero_forms_list();
            for (std::size_t i = 0; i < zeros.size(); ++i) {
                probe("zero:" + std::string(quad::zero_form_name(zeros[i])), 0.0,
                      [i](const auto& s) { return s.zero[i]; });
            }
        }
    }
    return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-22s %5s %5s %5s %14s %12s %14s %8s  %s\n", "probe", "c", "mu", "tau",
                  "sampled", "stderr", "closed_form", "z", "status");
    out << buf;
    for (const auto& p : report.probes) {
        std::snprintf(buf, sizeof buf, "%-22s %5.2g %5.2g %5.2g %14.6g %12.4g %14.6g %8.3f  %s\n", p.name.c_str(),
                      p.c, p.mu, p.tau, p.sampled_mean, p.stderr_, p.expected, p.z, p.pass ? "ok" : "FAIL");
        out << buf;
    }
    out << "\nidentities\n";
    for (const auto& i : report.identities) {
        std::snprintf(buf, sizeof buf, "%-44s error=%-12.3g tol=%-8.1g %s\n", i.name.c_str(), i.error, i.tol,
                      i.pass ? "ok" : "FAIL");
        out << buf;
    }
}

}  // namespace lab
