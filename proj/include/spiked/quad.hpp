#pragma once

#include <string_view>
#include <vector>

#include "spiked/error.hpp"

namespace spiked::quad {

struct TheoryCombinators {
    double t1;
    double t2;
    double gamma_bar;
};

TheoryCombinators combinators(double c, double mu, double tau_a, double theta_trn);

// Leading-order expectations of the helper quadratic forms built from
// A_hat = [A  mu I] (A d x n, entries N(0, tau_a^2/d)), a unit u in R^d, the
// zero-padded unit v_hat and noise eps_hat = [eps; 0] with variance tau_eps^2.
struct QuadFormExpectations {
    double h_sq;      // ||h||^2
    double k_sq;      // ||k||^2
    double t_sq;      // ||t||^2
    double xi;        // always 1
    double gamma_bar; // theta^2 ||t||^2 ||k||^2 + 1
    double k_aa_k;    // k^T A^+ A^+T k
    double eps_kk;    // eps^T k k^T eps
    double eps_tt;    // eps^T t^T t eps
    double eps_aa;    // eps^T A^+ A^+T eps
    double eps_ah_t;  // eps^T A^+ h^T t eps
    double eps_aakk;  // eps^T A^+ A^+T k k^T eps
    Regime regime;
};

// Two evaluations of the eps^T A^+ h^T t eps form: the rational expression in
// T1^3 as stated, or the moment route mu^2 E[1/(l+mu^2)^2] - mu^4 E[1/(l+mu^2)^3]
// weighted by r/n.
enum class EAhteVariant { Printed, MomentRoute };

// At mu = 0 the pseudoinverse has no null-space contribution, so k_sq and
// k_aa_k stay finite; see printed_quad_form_expectations for the
// divergent stated forms.
QuadFormExpectations quad_form_expectations(double c, double mu, double tau_a, double tau_eps,
                                            double theta_trn, double d,
                                            EAhteVariant eahte = EAhteVariant::Printed);

// Every field through the moment route (no T1^3 shortcuts).
QuadFormExpectations quad_form_moment_route(double c, double mu, double tau_a, double tau_eps,
                                            double theta_trn, double d);

// The closed forms exactly as stated in the lemma statements. Kept for
// comparison only: the k_sq form is off by a factor of c in both regimes,
// and the c > 1 t_sq form does not vanish at mu = 0. Throws MuZeroDivergent at
// mu = 0 because k_sq and k_aa_k carry 1/mu^2 and 1/mu^4.
QuadFormExpectations printed_quad_form_expectations(double c, double mu, double tau_a, double tau_eps,
                                                    double theta_trn, double d);

enum class ZeroForm {
    KAh,          // k^T A^+ h^T
    EpsKTEps,     // eps^T k t eps
    EpsAAKTEps,   // eps^T A^+ A^+T k t eps
    EpsAhKEps,    // eps^T A^+ h^T k eps
};

std::vector<ZeroForm> zero_forms_list();
std::string_view zero_form_name(ZeroForm f);

}  // namespace spiked::quad
