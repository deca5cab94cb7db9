#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spiked/error.hpp"
#include "spiked/risk.hpp"

namespace {

using namespace spiked::risk;
using spiked::ErrorCode;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

ModelConfig equal_norm(std::int64_t d, double c, double tau_sq, double tau_eps) {
    ModelConfig m;
    m.d = d;
    m.n_trn = std::llround(d / c);
    m.n_tst = m.n_trn;
    m.tau_a_trn = m.tau_a_tst = std::sqrt(tau_sq);
    m.theta_trn = std::sqrt(tau_sq * m.n_trn);
    m.theta_tst = std::sqrt(tau_sq * m.n_tst);
    m.tau_eps_trn = tau_eps;
    return m;
}

ModelConfig random_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    ModelConfig m;
    m.d = 200 + static_cast<std::int64_t>(2000 * u01(rng));
    double c = 0.1 + 2.9 * u01(rng);
    if (std::abs(c - 1.0) < 0.05) c = 0.7;
    m.n_trn = std::llround(m.d / c);
    m.n_tst = 100 + static_cast<std::int64_t>(3000 * u01(rng));
    m.theta_trn = 0.2 + 5 * u01(rng);
    m.theta_tst = 0.2 + 5 * u01(rng);
    m.tau_a_trn = 0.5 + 3 * u01(rng);
    m.tau_a_tst = 0.5 + 3 * u01(rng);
    m.tau_eps_trn = 0.1 + 2 * u01(rng);
    m.beta_norm_sq = 0.5 + u01(rng);
    m.beta_dot_u = std::sqrt(m.beta_norm_sq) * (2 * u01(rng) - 1);
    return m;
}

template <class F>
void expect_code(F f, ErrorCode code) {
    try {
        f();
        ADD_FAILURE() << "no exception";
    } catch (const spiked::Error& e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

TEST(ModelConfig, Validation) {
    ModelConfig m;
    EXPECT_NO_THROW(validate(m));
    m.beta_dot_u = 1.5;
    expect_code([&] { validate(m); }, ErrorCode::InvalidConfig);
    m = ModelConfig{};
    m.n_trn = 0;
    expect_code([&] { validate(m); }, ErrorCode::InvalidConfig);
    m = ModelConfig{};
    m.mu = -1.0;
    expect_code([&] { validate(m); }, ErrorCode::InvalidConfig);
}

TEST(ModelConfig, AssumptionWarnings) {
    ModelConfig m;
    EXPECT_FALSE(assumption_warnings(m).empty());
    m.d = 10000;
    m.n_trn = m.n_tst = 20000;
    m.tau_a_trn = m.tau_a_tst = 10.0;
    EXPECT_TRUE(assumption_warnings(m).empty());
}

TEST(RiskSpn, SpikelessUnderparameterized) {
    ModelConfig m;
    m.d = 500;
    m.n_trn = m.n_tst = 1000;
    m.theta_trn = m.theta_tst = 0.0;
    m.tau_eps_trn = 1.3;
    m.mu = 0.0;
    const double c = 0.5;
    EXPECT_NEAR(risk_spn(m).total, 1.69 * c / (1 - c), 1e-12);
}

TEST(RiskSpn, EqualNormLimits) {
    EXPECT_LE(rel(risk_spn(equal_norm(8000, 0.5, 8000, 1.0)).total, 1.0), 1e-3);
    const auto m = equal_norm(2000, 2.0, 2000, 1.0);
    ModelConfig aligned_off = m;
    aligned_off.beta_dot_u = 0.0;
    const double expect = 0.5 + 1.0 + spn_spike_correction(m.theta_trn, m.tau_a_trn, 1.0);
    EXPECT_LE(rel(risk_spn(aligned_off).total, expect), 1e-2);
}

TEST(RiskSpn, Errors) {
    ModelConfig m;
    m.mu = 0.1;
    expect_code([&] { risk_spn(m); }, ErrorCode::NonZeroMu);
    m.mu = 0.0;
    m.n_trn = 990;
    expect_code([&] { risk_spn(m); }, ErrorCode::RegimeBoundary);
}

TEST(RiskSo, NoiselessReducesToAlignmentBias) {
    ModelConfig m;
    m.mu = 0.7;
    m.tau_eps_trn = 0.0;
    m.theta_tst = 2.0;
    m.beta_dot_u = 0.6;
    const auto s = risk_so_terms(m);
    EXPECT_EQ(s.breakdown.variance_a_eps, 0.0);
    const double g = s.comb.gamma_bar;
    EXPECT_NEAR(s.breakdown.bias, 4.0 / m.n_tst * 0.36 / (g * g), 1e-15);
}

TEST(RiskSo, MuZeroEqualsCorollary) {
    std::mt19937_64 rng(51);
    for (int i = 0; i < 20; ++i) {
        ModelConfig m = random_config(rng);
        m.mu = 0.0;
        const auto a = risk_so(m);
        const auto b = risk_so_unregularized(m);
        EXPECT_LE(rel(a.total, b.total), 1e-9) << "c=" << m.c();
    }
}

TEST(RiskSo, ConvergesToCorollaryAsMuShrinks) {
    std::mt19937_64 rng(52);
    for (int i = 0; i < 5; ++i) {
        ModelConfig m = random_config(rng);
        const double target = risk_so_unregularized(m).total;
        double prev = INFINITY;
        for (double mu : {1e-2, 1e-3, 1e-4}) {
            m.mu = mu;
            const double gap = std::abs(risk_so(m).total - target);
            EXPECT_LT(gap, prev);
            prev = gap;
        }
        EXPECT_LE(prev / target, 1e-6);
    }
}

TEST(Corollary, EqualNormAsymptotes) {
    const double te = 1.2;
    for (double c : {0.5, 3.0}) {
        auto m = equal_norm(1000000, c, 1000000, te);
        m.beta_dot_u = 0.8;
        const double bu2 = 0.64;
        const double want = c < 1 ? te * te * c / (1 - c) + bu2 / (1 - c) : te * te / (c - 1) + bu2 * c / (c - 1);
        EXPECT_LE(rel(risk_so_unregularized(m).total, want), 1e-2) << "c=" << c;
    }
}

TEST(Corollary, NoSpikeNoAlignment) {
    ModelConfig m;
    m.d = 300;
    m.n_trn = 1000;
    m.theta_trn = 0.0;
    m.beta_dot_u = 0.0;
    m.tau_a_trn = 1.5;
    m.tau_a_tst = 2.5;
    m.tau_eps_trn = 0.8;
    const double c = 0.3;
    const auto b = risk_so_unregularized(m);
    EXPECT_NEAR(b.variance_a + b.variance_a_eps, 6.25 * 0.64 * c / (2.25 * (1 - c)), 1e-12);
}

TEST(Isotropic, Values) {
    EXPECT_DOUBLE_EQ(risk_isotropic_limit(0.5, 1.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(risk_isotropic_limit(2.0, 1.0, 1.0), 1.5);
    EXPECT_EQ(risk_isotropic_limit(0.3, 0.0, 1.0), 0.0);
    expect_code([] { risk_isotropic_limit(1.01, 1.0, 1.0); }, ErrorCode::RegimeBoundary);
}

TEST(SpikeCorrection, Values) {
    EXPECT_EQ(spn_spike_correction(0.0, 1.0, 5.0), 0.0);
    const double d = 500, n = 100, tau = d;
    const double theta = std::sqrt(tau * tau * n);
    EXPECT_LE(spn_spike_correction(theta, tau, 1.0), 4.0 / (d * d));
    for (double k : {50.0, 100.0, 200.0}) {
        EXPECT_NEAR(spn_spike_correction(std::sqrt(k), 1.0, 5.0), 25 * k / ((k + 1) * (k + 1)), 1e-12);
    }
}

TEST(Peak, Location) {
    EXPECT_DOUBLE_EQ(dd_peak_location(1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(dd_peak_location(2.0, 1.0), 0.8);
    EXPECT_DOUBLE_EQ(dd_peak_location(1.0, 0.0), 1.0);
}

double so_argmax(double tau, double mu, double scale) {
    double best_c = 0.0, best = -INFINITY;
    for (int i = 0; i <= 90; ++i) {
        const double c = 0.1 + 0.02 * i;
        ModelConfig m;
        m.d = 1000;
        m.n_trn = m.n_tst = std::llround(1000 / c);
        m.theta_trn = m.theta_tst = scale;
        m.tau_eps_trn = scale;
        m.tau_a_trn = m.tau_a_tst = scale * tau;
        m.mu = scale * mu;
        const double r = risk_so(m).total;
        if (r > best) {
            best = r;
            best_c = c;
        }
    }
    return best_c;
}

TEST(Peak, TheoryCurveArgmax) {
    for (auto [tau, mu] : {std::pair{1.0, 1.0}, {2.0, 1.0}}) {
        const double peak = dd_peak_location(tau, mu);
        const double found = so_argmax(tau, mu, 1.0);
        EXPECT_LE(std::abs(found - peak), 0.02 + 1e-12) << "tau=" << tau;
        EXPECT_DOUBLE_EQ(so_argmax(tau, mu, 3.0), found);
    }
}

TEST(Breakdown, TotalIsExactSum) {
    std::mt19937_64 rng(53);
    for (int i = 0; i < 20; ++i) {
        ModelConfig m = random_config(rng);
        m.mu = i % 2 ? 0.0 : 0.5;
        std::vector<RiskBreakdown> all{risk_so(m)};
        if (m.mu == 0.0) {
            all.push_back(risk_so_unregularized(m));
            all.push_back(risk_spn(m));
        }
        for (const auto& b : all) {
            EXPECT_EQ(b.total, b.bias + b.variance_a + b.variance_a_eps + b.adjustment);
            EXPECT_GE(b.bias, 0.0);
        }
    }
}

}  // namespace
