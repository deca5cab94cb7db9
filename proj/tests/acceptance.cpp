#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "commands.hpp"
#include "config.hpp"
#include "spiked/linalg.hpp"
#include "spiked/mp.hpp"
#include "spiked/risk.hpp"
#include "spiked/sim.hpp"
#include "verify.hpp"

namespace {

using spiked::linalg::Matrix;
using spiked::linalg::Vector;
using spiked::risk::ModelConfig;
using spiked::sim::Target;

struct Outcome {
    bool pass;
    std::string detail;
};

Matrix gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double sd = 1.0) {
    std::normal_distribution<double> n01(0.0, sd);
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) m(i, j) = n01(rng);
    return m;
}

Vector unit(std::mt19937_64& rng, Eigen::Index n) {
    Vector v = gaussian(rng, n, 1);
    return v / v.norm();
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

Outcome meyer_update() {
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> small(10, 60);
    const double thetas[] = {0.1, 1.0, 10.0};
    double worst = 0.0;
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < 200; ++i) {
        int r = small(rng), c = small(rng);
        if (r == c) ++c;
        if ((i % 2 == 0) != (r < c)) std::swap(r, c);
        const double theta = thetas[i % 3];
        const Matrix a = gaussian(rng, r, c);
        const Vector u = unit(rng, r), v = unit(rng, c);
        const Matrix fast = spiked::linalg::rank_one_pinv_update(a, theta, u, v);
        const Matrix direct = spiked::linalg::pinv(a + theta * u * v.transpose());
        worst = std::max(worst, (fast - direct).norm() / direct.norm());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst <= 1e-8 && secs < 30.0, fmt("worst relative Frobenius error %.3g, %.1f s", worst, secs)};
}

Outcome probe_suite() {
    const auto start = std::chrono::steady_clock::now();
    const auto report = lab::run_verify(lab::verify_plan(lab::VerifyLevel::Full), 20240601);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    int fails = 0;
    double worst = 0.0;
    for (const auto& p : report.probes) {
        fails += p.pass ? 0 : 1;
        worst = std::max(worst, std::abs(p.z));
    }
    for (const auto& id : report.identities) fails += id.pass ? 0 : 1;
    std::string detail = fmt("%.0f probes, %.0f failing, max |z| %.2f, %.0f s", double(report.probes.size()), fails,
                             worst, secs);
    if (!report.all_pass()) detail += ", first failure " + report.first_failure();
    return {report.all_pass() && secs < 600.0, detail};
}

Outcome signal_only_curve() {
    bool pass = true;
    std::string detail;
    for (double tau : {1.0, 2.0}) {
        lab::SweepSpec spec;
        spec.variable = "c";
        spec.grid = lab::parse_grid("0.1:1.9:0.05").values();
        auto& m = spec.base.model;
        m.d = 1000;
        m.mu = m.tau_eps_trn = m.theta_trn = m.theta_tst = 1.0;
        m.tau_a_trn = m.tau_a_tst = tau;
        m.beta_norm_sq = 1.0;
        m.beta_dot_u = 1.0;
        spec.base.target = Target::SignalOnly;
        spec.base.trials = 100;
        spec.base.seed = tau == 1.0 ? 3001 : 3002;
        const auto rows = lab::run_sweep(spec);
        const double peak = spiked::risk::dd_peak_location(tau, m.mu);
        double worst_z = 0.0, argmax = 0.0, best = -INFINITY;
        for (const auto& r : rows) {
            if (*r.empirical_mean > best) {
                best = *r.empirical_mean;
                argmax = r.grid_value;
            }
            if (std::abs(r.grid_value - peak) < 0.1 - 1e-9) continue;
            const double z = (*r.empirical_mean - r.theory_total) / *r.empirical_stderr;
            worst_z = std::max(worst_z, std::abs(z));
        }
        const bool ok = worst_z <= 3.0 && std::abs(argmax - peak) <= 0.05 + 1e-9;
        pass = pass && ok;
        detail += fmt("tau=%g: max |z| %.2f, argmax %.2f (peak %.2f); ", tau, worst_z, argmax, peak);
    }
    return {pass, detail};
}

ModelConfig equal_norm(std::int64_t d, std::int64_t n, double tau, double tau_eps) {
    ModelConfig m;
    m.d = d;
    m.n_trn = m.n_tst = n;
    m.tau_a_trn = m.tau_a_tst = tau;
    m.theta_trn = m.theta_tst = tau * std::sqrt(double(n));
    m.tau_eps_trn = tau_eps;
    m.mu = 0.0;
    m.beta_norm_sq = 1.0;
    m.beta_dot_u = 0.0;
    return m;
}

Outcome spike_correction() {
    using spiked::risk::spn_equal_norm_risk;
    bool pass = true;
    std::string detail = "left:";
    for (std::int64_t n : {50, 100, 200}) {
        const auto m = equal_norm(5000, n, 1.0, 5.0);
        const auto est = spiked::sim::monte_carlo_risk(m, Target::SignalPlusNoise, 2000, 4000 + n);
        const double corrected = spn_equal_norm_risk(m, true);
        const double plain = spn_equal_norm_risk(m, false);
        const double corr = spiked::risk::spn_spike_correction(m.theta_trn, m.tau_a_trn, m.tau_eps_trn);
        const double z = (est.mean - corrected) / est.stderr_;
        const double ratio = (est.mean - plain) / corr;
        pass = pass && std::abs(z) <= 3.0 && std::abs(ratio - 1.0) <= 0.5;
        detail += fmt(" n=%g z %.2f, gap/correction %.3f;", double(n), z, ratio);
    }
    detail += " right:";
    for (std::int64_t n : {50, 100, 200}) {
        const auto m = equal_norm(500, n, 500.0, 5.0);
        const auto est = spiked::sim::monte_carlo_risk(m, Target::SignalPlusNoise, 400, 4500 + n);
        const double zc = (est.mean - spn_equal_norm_risk(m, true)) / est.stderr_;
        const double zp = (est.mean - spn_equal_norm_risk(m, false)) / est.stderr_;
        pass = pass && std::abs(zc) <= 3.0 && std::abs(zp) <= 3.0;
        detail += fmt(" n=%g z %.2f / %.2f;", double(n), zc, zp);
    }
    return {pass, detail};
}

Outcome isotropic_limit() {
    bool pass = true;
    std::string detail;
    for (double c : {0.5, 2.0}) {
        double prev = INFINITY, gap = 0.0;
        for (std::int64_t d : {500, 2000, 8000}) {
            const double tau = std::sqrt(double(d));
            const auto m = equal_norm(d, std::llround(d / c), tau, 1.0);
            const double want = spiked::risk::risk_isotropic_limit(c, m.tau_eps_trn, m.beta_norm_sq);
            gap = rel(spiked::risk::risk_spn(m).total, want);
            pass = pass && gap <= prev + 1e-12;
            prev = gap;
            detail += fmt("c=%g d=%g gap %.3g; ", c, double(d), gap);
        }
        pass = pass && gap < 0.02;
    }
    return {pass, detail};
}

Outcome bbp() {
    const std::int64_t n = 8000, d = 2000;
    const double c = double(d) / double(n);
    bool pass = true;
    std::string detail;
    std::mt19937_64 rng(6001);
    for (double ell : {0.5, 2.0, 4.0}) {
        Matrix x = gaussian(rng, n, d);
        x.col(0) *= std::sqrt(ell);
        Matrix cov = Matrix::Zero(d, d);
        cov.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / double(n));
        const double top = Eigen::SelfAdjointEigenSolver<Matrix>(cov.selfadjointView<Eigen::Lower>(),
                                                                 Eigen::EigenvaluesOnly)
                               .eigenvalues()
                               .maxCoeff();
        const double want = ell > 1.0 + std::sqrt(c) ? spiked::mp::bbp_top_eigenvalue(ell, c)
                                                     : (1.0 + std::sqrt(c)) * (1.0 + std::sqrt(c));
        const double err = rel(top, want);
        pass = pass && err <= 0.02;
        detail += fmt("ell=%g top %.4f want %.4f; ", ell, top, want);
    }
    return {pass, detail};
}

Outcome stieltjes() {
    using namespace spiked::mp;
    std::mt19937_64 rng(7001);
    std::uniform_real_distribution<double> zd(-5.0, -0.05), cd(0.1, 3.0);
    double e1 = 0.0, e2 = 0.0, res = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double z = zd(rng), c = cd(rng);
        const double h = 1e-3 * std::abs(z);
        auto m = [&](double k) { return mp_stieltjes(z + k * h, c); };
        const double fd1 = (m(-2) - 8 * m(-1) + 8 * m(1) - m(2)) / (12 * h);
        const double fd2 = (-m(-2) + 16 * m(-1) - 30 * m(0) + 16 * m(1) - m(2)) / (12 * h * h);
        e1 = std::max(e1, rel(fd1, mp_stieltjes_d1(z, c)));
        e2 = std::max(e2, rel(fd2, mp_stieltjes_d2(z, c)));
        res = std::max(res, std::abs(mp_self_consistency_residual(z, c)));
    }
    return {e1 <= 1e-6 && e2 <= 1e-5 && res <= 1e-9,
            fmt("d1 error %.3g, d2 error %.3g, residual %.3g", e1, e2, res)};
}

Outcome small_ridge() {
    std::mt19937_64 rng(8001);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        ModelConfig m;
        m.d = 200 + std::int64_t(2000 * u01(rng));
        double c = 0.1 + 2.9 * u01(rng);
        if (std::abs(c - 1.0) < 0.05) c = 0.7;
        m.n_trn = std::llround(m.d / c);
        m.n_tst = 100 + std::int64_t(3000 * u01(rng));
        m.theta_trn = 0.2 + 5 * u01(rng);
        m.theta_tst = 0.2 + 5 * u01(rng);
        m.tau_a_trn = 0.5 + 3 * u01(rng);
        m.tau_a_tst = 0.5 + 3 * u01(rng);
        m.tau_eps_trn = 0.1 + 2 * u01(rng);
        m.beta_norm_sq = 0.5 + u01(rng);
        m.beta_dot_u = std::sqrt(m.beta_norm_sq) * (2 * u01(rng) - 1);
        const double base = spiked::risk::risk_so_unregularized(m).total;
        m.mu = 1e-4;
        worst = std::max(worst, rel(spiked::risk::risk_so(m).total, base));
    }
    return {worst <= 1e-3, fmt("worst relative gap %.3g", worst)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance checks"};
    int criterion = 0;
    app.add_option("--criterion", criterion)->required()->check(CLI::Range(1, 8));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
        {"meyer rank-one update matches pseudoinverse", meyer_update},
        {"quadratic-form probe suite (full)", probe_suite},
        {"signal-only ridge risk curve", signal_only_curve},
        {"spike correction for signal-plus-noise risk", spike_correction},
        {"isotropic limit", isotropic_limit},
        {"top sample eigenvalue", bbp},
        {"stieltjes derivatives and self-consistency", stieltjes},
        {"small ridge limit", small_ridge},
    };
    const auto& [name, fn] = checks[criterion - 1];
    Outcome out{false, ""};
    try {
        out = fn();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << criterion << ": " << name << " (" << out.detail
              << ")\n";
    return out.pass ? 0 : 1;
}
