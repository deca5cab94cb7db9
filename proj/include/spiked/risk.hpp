#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spiked/error.hpp"
#include "spiked/quad.hpp"

namespace spiked::risk {

struct ModelConfig {
    std::int64_t d = 1000;
    std::int64_t n_trn = 2000;
    std::int64_t n_tst = 2000;
    double theta_trn = 1.0;
    double theta_tst = 1.0;
    double tau_a_trn = 1.0;
    double tau_a_tst = 1.0;
    double tau_eps_trn = 1.0;
    double mu = 0.0;
    double beta_norm_sq = 1.0;
    double beta_dot_u = 1.0;

    double c() const { return static_cast<double>(d) / static_cast<double>(n_trn); }
};

// InvalidConfig on non-positive counts, negative scales or
// beta_dot_u^2 > beta_norm_sq.
void validate(const ModelConfig& cfg);

// Human-readable notes for configurations outside the window where the
// leading-order formulas are expected to be accurate.
std::vector<std::string> assumption_warnings(const ModelConfig& cfg);

struct RiskBreakdown {
    double bias = 0.0;
    double variance_a = 0.0;
    double variance_a_eps = 0.0;
    double adjustment = 0.0;
    double total = 0.0;
    Regime regime = Regime::Under;
};

RiskBreakdown make_breakdown(double bias, double variance_a, double variance_a_eps, double adjustment,
                             Regime regime);

// Signal-plus-noise risk without regularization. variance_a holds the
// ||beta||^2 bulk term and variance_a_eps the label-noise term.
RiskBreakdown risk_spn(const ModelConfig& cfg);

struct SoTerms {
    quad::TheoryCombinators comb;
    double bias_alignment;  // theta_tst^2/n_tst (beta.u)^2 / gamma^2
    double bias_noise;      // the tau_eps^2 part of the bias
    double var_a;
    double var_eps_main;    // tau_eps^2 tau_tst^2/(2 tau^2) [1 + ...] (T2 - 1)
    double var_eps_spike;   // the theta^4 / (gamma^2 T1^2) correction
    double var_eps_cross;   // the theta^2 / gamma (1/T1^2 - c mu^2/T1^3) correction
    RiskBreakdown breakdown;
};

SoTerms risk_so_terms(const ModelConfig& cfg);
RiskBreakdown risk_so(const ModelConfig& cfg);

// mu = 0 closed form; variance_a carries the (beta.u)^2 part of the variance.
RiskBreakdown risk_so_unregularized(const ModelConfig& cfg);

double risk_isotropic_limit(double c, double tau_eps, double beta_norm_sq);

double spn_spike_correction(double theta_trn, double tau_a_trn, double tau_eps);

// Spn risk under the equal-norm scaling theta^2 = tau^2 n, keeping only the
// leading terms. For c > 1 the spike correction is optional.
double spn_equal_norm_risk(const ModelConfig& cfg, bool with_correction);

double dd_peak_location(double tau_a_trn, double mu);

}  // namespace spiked::risk
