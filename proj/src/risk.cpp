#include "spiked/risk.hpp"

#include <cmath>
#include <sstream>

namespace spiked::risk {

void validate(const ModelConfig& cfg) {
    if (cfg.d < 1 || cfg.n_trn < 1 || cfg.n_tst < 1) {
        throw Error(ErrorCode::InvalidConfig, "d, n_trn and n_tst must be at least 1");
    }
    const double scales[] = {cfg.theta_trn, cfg.theta_tst, cfg.tau_a_trn, cfg.tau_a_tst,
                             cfg.tau_eps_trn, cfg.mu, cfg.beta_norm_sq};
    for (double s : scales) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw Error(ErrorCode::InvalidConfig, "scales must be finite and non-negative");
        }
    }
    if (!std::isfinite(cfg.beta_dot_u) ||
        cfg.beta_dot_u * cfg.beta_dot_u > cfg.beta_norm_sq * (1.0 + 1e-12)) {
        throw Error(ErrorCode::InvalidConfig, "beta_dot_u^2 exceeds beta_norm_sq");
    }
}

std::vector<std::string> assumption_warnings(const ModelConfig& cfg) {
    std::vector<std::string> out;
    const double d = static_cast<double>(cfg.d);
    auto note = [&](const std::string& s) { out.push_back(s); };
    for (double tau : {cfg.tau_a_trn, cfg.tau_a_tst}) {
        const double t2 = tau * tau;
        if (t2 < 10.0 || t2 > d / 10.0) {
            std::ostringstream os;
            os << "tau_a^2 = " << t2 << " is outside 1 << tau^2 << d (d = " << cfg.d << ")";
            note(os.str());
            break;
        }
    }
    const double ratio_trn = cfg.theta_trn * cfg.theta_trn / (cfg.tau_a_trn * cfg.tau_a_trn);
    if (ratio_trn > static_cast<double>(cfg.n_trn) / 10.0) {
        note("theta_trn^2 / tau_a_trn^2 is not small compared with n_trn");
    }
    const double ratio_tst = cfg.theta_tst * cfg.theta_tst / (cfg.tau_a_tst * cfg.tau_a_tst);
    if (ratio_tst > static_cast<double>(cfg.n_tst) / 10.0) {
        note("theta_tst^2 / tau_a_tst^2 is not small compared with n_tst");
    }
    return out;
}

RiskBreakdown make_breakdown(double bias, double variance_a, double variance_a_eps, double adjustment,
                             Regime regime) {
    RiskBreakdown r;
    r.bias = bias;
    r.variance_a = variance_a;
    r.variance_a_eps = variance_a_eps;
    r.adjustment = adjustment;
    r.total = bias + variance_a + variance_a_eps + adjustment;
    r.regime = regime;
    return r;
}

RiskBreakdown risk_spn(const ModelConfig& cfg) {
    validate(cfg);
    if (cfg.mu != 0.0) {
        throw Error(ErrorCode::NonZeroMu, "risk_spn covers the unregularized problem only");
    }
    const double c = cfg.c();
    require_off_boundary(c, "risk_spn");

    const double d = static_cast<double>(cfg.d);
    const double n_tst = static_cast<double>(cfg.n_tst);
    const double th2 = cfg.theta_trn * cfg.theta_trn;
    const double tht2 = cfg.theta_tst * cfg.theta_tst;
    const double t2 = cfg.tau_a_trn * cfg.tau_a_trn;
    const double tt2 = cfg.tau_a_tst * cfg.tau_a_tst;
    const double te2 = cfg.tau_eps_trn * cfg.tau_eps_trn;
    const double bn = cfg.beta_norm_sq;
    const double bu2 = cfg.beta_dot_u * cfg.beta_dot_u;

    if (c < 1.0) {
        const double bias = tht2 * te2 * c / (n_tst * (th2 * c + t2) * (1.0 - c));
        const double var_eps = tt2 * te2 * c / (t2 * (1.0 - c)) * (1.0 - th2 * c / (d * (t2 + th2 * c)));
        const double var_a = tt2 * bn / d;
        const double adjustment = -tt2 * bn / d;
        return make_breakdown(bias, var_a, var_eps, adjustment, Regime::Under);
    }

    const double denom = th2 + t2;
    const double bias = tht2 / (n_tst * denom * denom) *
                        (t2 * (1.0 - 1.0 / c) * (t2 * bu2 + th2 * bn / d) + te2 * (th2 * c + t2) / (c - 1.0));
    const double var_eps = tt2 * te2 / (t2 * (c - 1.0)) * (1.0 - th2 * c / (d * (t2 + th2)));
    const double var_a = (1.0 / c) * tt2 * bn / d;
    const double adjustment = (1.0 - 2.0 / c) * tt2 * bn / d;
    return make_breakdown(bias, var_a, var_eps, adjustment, Regime::Over);
}

SoTerms risk_so_terms(const ModelConfig& cfg) {
    validate(cfg);
    const double c = cfg.c();
    if (!(cfg.tau_a_trn > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "risk_so needs tau_a_trn > 0");
    }

    SoTerms s{};
    s.comb = quad::combinators(c, cfg.mu, cfg.tau_a_trn, cfg.theta_trn);
    const double t1 = s.comb.t1;
    const double t2r = s.comb.t2;
    const double g = s.comb.gamma_bar;

    const double d = static_cast<double>(cfg.d);
    const double n_tst = static_cast<double>(cfg.n_tst);
    const double th2 = cfg.theta_trn * cfg.theta_trn;
    const double tht2 = cfg.theta_tst * cfg.theta_tst;
    const double t2 = cfg.tau_a_trn * cfg.tau_a_trn;
    const double t4 = t2 * t2;
    const double tt2 = cfg.tau_a_tst * cfg.tau_a_tst;
    const double te2 = cfg.tau_eps_trn * cfg.tau_eps_trn;
    const double mu2 = cfg.mu * cfg.mu;
    const double bu2 = cfg.beta_dot_u * cfg.beta_dot_u;

    const double bias_pref = tht2 / n_tst / (g * g);
    s.bias_alignment = bias_pref * bu2;
    s.bias_noise = bias_pref * te2 / (2.0 * t4) * (th2 * c + t2) * (t2r - 1.0);

    s.var_a = th2 * tt2 / d / (g * g) * bu2 * (c * (th2 + t2) / (2.0 * t4) * (t2r - 1.0));

    s.var_eps_main = te2 * tt2 / (2.0 * t2) *
                     (1.0 + c * th2 / t2 * t2r / (d * g * g) * ((c + 1.0) * th2 / t2 + 1.0)) * (t2r - 1.0);
    s.var_eps_spike = -c * c * (c + 1.0) * th2 * th2 * te2 * tt2 / (d * t2) / (g * g * t1 * t1);
    s.var_eps_cross = -2.0 * c * c * th2 * te2 * tt2 / (d * g) * (1.0 / (t1 * t1) - c * mu2 / (t1 * t1 * t1));

    s.breakdown = make_breakdown(s.bias_alignment + s.bias_noise, s.var_a,
                                 s.var_eps_main + s.var_eps_spike + s.var_eps_cross, 0.0, regime_of(c));
    return s;
}

RiskBreakdown risk_so(const ModelConfig& cfg) { return risk_so_terms(cfg).breakdown; }

RiskBreakdown risk_so_unregularized(const ModelConfig& cfg) {
    validate(cfg);
    const double c = cfg.c();
    require_off_boundary(c, "risk_so_unregularized");

    const double d = static_cast<double>(cfg.d);
    const double n_tst = static_cast<double>(cfg.n_tst);
    const double th2 = cfg.theta_trn * cfg.theta_trn;
    const double tht2 = cfg.theta_tst * cfg.theta_tst;
    const double t2 = cfg.tau_a_trn * cfg.tau_a_trn;
    const double tt2 = cfg.tau_a_tst * cfg.tau_a_tst;
    const double te2 = cfg.tau_eps_trn * cfg.tau_eps_trn;
    const double bu2 = cfg.beta_dot_u * cfg.beta_dot_u;

    if (c < 1.0) {
        const double spike = th2 * c + t2;
        const double bias = tht2 / (n_tst * spike * spike) * (t2 * t2 * bu2 + te2 * (th2 * c * c + t2 * c) / (1.0 - c));
        const double f = th2 * tt2 / (d * (t2 + th2 * c)) * c * c / (1.0 - c);
        const double var_a = bu2 * (th2 + t2) / spike * f;
        const double var_eps = tt2 * te2 * c / (t2 * (1.0 - c)) - te2 / t2 * f;
        return make_breakdown(bias, var_a, var_eps, 0.0, Regime::Under);
    }

    const double spike = th2 + t2;
    const double bias = tht2 / (n_tst * spike * spike) * (t2 * t2 * bu2 + te2 * (th2 * c + t2) / (c - 1.0));
    const double f = th2 * tt2 / (d * (t2 + th2)) * c / (c - 1.0);
    const double var_a = bu2 * f;
    const double var_eps = tt2 * te2 / (t2 * (c - 1.0)) - te2 / t2 * f;
    return make_breakdown(bias, var_a, var_eps, 0.0, Regime::Over);
}

double risk_isotropic_limit(double c, double tau_eps, double beta_norm_sq) {
    require_off_boundary(c, "risk_isotropic_limit");
    const double te2 = tau_eps * tau_eps;
    if (c < 1.0) {
        return te2 * c / (1.0 - c);
    }
    return beta_norm_sq * (1.0 - 1.0 / c) + te2 / (c - 1.0);
}

double spn_spike_correction(double theta_trn, double tau_a_trn, double tau_eps) {
    const double th2 = theta_trn * theta_trn;
    if (th2 == 0.0) {
        return 0.0;
    }
    const double denom = th2 + tau_a_trn * tau_a_trn;
    return tau_eps * tau_eps * th2 / (denom * denom);
}

double spn_equal_norm_risk(const ModelConfig& cfg, bool with_correction) {
    const double c = cfg.c();
    require_off_boundary(c, "spn_equal_norm_risk");
    const double t2 = cfg.tau_a_trn * cfg.tau_a_trn;
    const double tt2 = cfg.tau_a_tst * cfg.tau_a_tst;
    const double te2 = cfg.tau_eps_trn * cfg.tau_eps_trn;
    if (c < 1.0) {
        return tt2 / t2 * te2 * c / (1.0 - c);
    }
    const double d = static_cast<double>(cfg.d);
    double noise = 1.0 / (c - 1.0);
    if (with_correction) {
        const double th2 = cfg.theta_trn * cfg.theta_trn;
        noise += th2 / ((th2 + t2) * (th2 + t2));
    }
    return cfg.beta_norm_sq * (1.0 - 1.0 / c) * tt2 / d + te2 * noise;
}

double dd_peak_location(double tau_a_trn, double mu) {
    const double t2 = tau_a_trn * tau_a_trn;
    return t2 / (t2 + mu * mu);
}

}  // namespace spiked::risk
