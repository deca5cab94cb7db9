#include "spiked/quad.hpp"

#include <cmath>

#include "spiked/mp.hpp"

namespace spiked::quad {

namespace {

void check_inputs(double c, double mu, double tau_a) {
    if (!(c > 0.0) || !(tau_a > 0.0) || !(mu >= 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "quad_forms: need c > 0, tau_a > 0, mu >= 0");
    }
    if (mu == 0.0) {
        require_off_boundary(c, "quad_forms");
    }
}

double radical(double c, double mu, double tau_a) {
    const double t2 = tau_a * tau_a;
    const double mu2 = mu * mu;
    if (c < 1.0) {
        const double b = t2 + mu2 * c - c * t2;
        return std::sqrt(b * b + 4.0 * mu2 * c * c * t2);
    }
    const double b = -t2 + mu2 * c + c * t2;
    return std::sqrt(b * b + 4.0 * mu2 * c * t2);
}

}  // namespace

TheoryCombinators combinators(double c, double mu, double tau_a, double theta_trn) {
    check_inputs(c, mu, tau_a);
    const double t2 = tau_a * tau_a;
    const double mu2 = mu * mu;
    TheoryCombinators out{};
    out.t1 = radical(c, mu, tau_a);
    out.t2 = (mu2 * c + t2 + c * t2) / out.t1;
    out.gamma_bar = 1.0 + theta_trn * theta_trn / (2.0 * t2 * t2) * (t2 + c * t2 + mu2 * c - out.t1);
    return out;
}

QuadFormExpectations quad_form_moment_route(double c, double mu, double tau_a, double tau_eps,
                                            double theta_trn, double d) {
    check_inputs(c, mu, tau_a);
    const auto m = mp::spectral_moments_unchecked({c, tau_a, mu});
    const double mu2 = mu * mu;
    const double te2 = tau_eps * tau_eps;
    const bool over = m.regime == Regime::Over;
    // r = min(d, n) non-zero singular directions; rd = r/d, rn = r/n.
    const double rd = over ? 1.0 / c : 1.0;
    const double rn = over ? 1.0 : c;
    // Directions of u outside the column space of A see only mu^2.
    const double null_mass = (over && mu > 0.0) ? 1.0 - 1.0 / c : 0.0;

    QuadFormExpectations q{};
    q.regime = m.regime;
    q.h_sq = rn * m.ratio1_sq;
    q.k_sq = rd * m.inv1 + (null_mass > 0.0 ? null_mass / mu2 : 0.0);
    q.t_sq = 1.0 - rn * m.ratio1;
    q.xi = 1.0;
    q.gamma_bar = 1.0 + theta_trn * theta_trn * q.t_sq * q.k_sq;
    q.k_aa_k = rd * m.inv2 + (null_mass > 0.0 ? null_mass / (mu2 * mu2) : 0.0);
    q.eps_kk = te2 * rd * m.ratio1_sq;
    q.eps_tt = te2 * (1.0 - rn * (2.0 * m.ratio1 - m.ratio2_sq));
    q.eps_aa = te2 * d * rd * m.ratio1_sq;
    q.eps_ah_t = te2 * rn * (mu2 * m.inv2 - mu2 * mu2 * m.inv3);
    q.eps_aakk = te2 * rd * (m.inv2 - mu2 * m.inv3);
    return q;
}

QuadFormExpectations quad_form_expectations(double c, double mu, double tau_a, double tau_eps,
                                            double theta_trn, double d, EAhteVariant eahte) {
    QuadFormExpectations q = quad_form_moment_route(c, mu, tau_a, tau_eps, theta_trn, d);
    const double t1 = radical(c, mu, tau_a);
    const double t1_cubed = t1 * t1 * t1;
    const double te2 = tau_eps * tau_eps;
    const double t2 = tau_a * tau_a;
    if (eahte == EAhteVariant::Printed) {
        q.eps_ah_t = te2 * c * c * c * mu * mu * t2 / t1_cubed;
    }
    q.eps_aakk = te2 * c * c * t2 / t1_cubed;
    return q;
}

QuadFormExpectations printed_quad_form_expectations(double c, double mu, double tau_a, double tau_eps,
                                                    double theta_trn, double d) {
    check_inputs(c, mu, tau_a);
    if (mu == 0.0) {
        throw Error(ErrorCode::MuZeroDivergent, "printed k_sq and k_aa_k forms divide by mu");
    }
    const double t2 = tau_a * tau_a;
    const double mu2 = mu * mu;
    const double te2 = tau_eps * tau_eps;
    const double t1 = radical(c, mu, tau_a);
    const bool over = c >= 1.0;
    const double ratio_sq = (t2 + c * t2 + mu2 * c) / (2.0 * t2 * t1) - 1.0 / (2.0 * t2);
    const double ett_num = (mu2 * c * c + mu2 * c + (c - 1.0) * (c - 1.0) * t2) / (2.0 * t1);

    QuadFormExpectations q{};
    q.regime = over ? Regime::Over : Regime::Under;
    q.h_sq = c * ratio_sq;
    q.k_sq = (t1 - t2 - mu2 * c + c * t2) / (2.0 * mu2 * t2);
    q.t_sq = over ? (-t2 + c * t2 - mu2 * c + t1) / (2.0 * t2) : (t2 - c * t2 - mu2 * c + t1) / (2.0 * t2);
    q.xi = 1.0;
    q.gamma_bar = 1.0 + theta_trn * theta_trn / (2.0 * t2 * t2) * (t2 + c * t2 + mu2 * c - t1);
    q.k_aa_k = (mu2 * c * c + mu2 * c + (c - 1.0) * (c - 1.0) * t2) / (2.0 * mu2 * mu2 * c * t1) +
               (1.0 - 1.0 / c) / (2.0 * mu2 * mu2);
    q.eps_kk = te2 * ratio_sq;
    q.eps_tt = te2 * (ett_num + 0.5 * (1.0 - c));
    q.eps_aa = te2 * d * ratio_sq;
    q.eps_ah_t = te2 * c * c * c * mu2 * t2 / (t1 * t1 * t1);
    q.eps_aakk = te2 * c * c * t2 / (t1 * t1 * t1);
    return q;
}

std::vector<ZeroForm> zero_forms_list() {
    return {ZeroForm::KAh, ZeroForm::EpsKTEps, ZeroForm::EpsAAKTEps, ZeroForm::EpsAhKEps};
}

std::string_view zero_form_name(ZeroForm f) {
    switch (f) {
        case ZeroForm::KAh: return "k_a_h";
        case ZeroForm::EpsKTEps: return "eps_k_t_eps";
        case ZeroForm::EpsAAKTEps: return "eps_aa_k_t_eps";
        case ZeroForm::EpsAhKEps: return "eps_a_h_k_eps";
    }
    return "unknown";
}

}  // namespace spiked::quad
