#pragma once

#include "spiked/error.hpp"

namespace spiked::mp {

// Stieltjes transform m_c(z) = E[1/(lambda - z)] of the Marchenko-Pastur law
// with ratio c and unit variance, for real z < 0. For c > 1 the law carries
// an atom of mass 1 - 1/c at zero.
double mp_stieltjes(double z, double c);

// First and second z-derivatives, evaluated with the closed forms obtained by
// differentiating the radical directly.
double mp_stieltjes_d1(double z, double c);
double mp_stieltjes_d2(double z, double c);

// m, m' and m'' from the quadratic self-consistency a z m^2 - (1 - a - z) m + 1 = 0.
// No cancellation near z = 0, and z = 0 itself is accepted when c < 1.
struct StieltjesJet {
    double m;
    double d1;
    double d2;
};
StieltjesJet mp_stieltjes_jet(double z, double c);

// Residual of the self-consistency m = 1 / ((1 - c - c z m) - z).
double mp_self_consistency_residual(double z, double c);

struct ShapeParams {
    double c;
    double tau;
    double mu;
};

// Eigenvalue functionals over the non-zero eigenvalues lambda of A A^T for a
// d x n matrix A with i.i.d. N(0, tau^2/d) entries, c = d/n, at leading order.
struct SpectralMoments {
    double inv1;       // E[1/(lambda + mu^2)]
    double inv2;       // E[1/(lambda + mu^2)^2]
    double inv3;       // E[1/(lambda + mu^2)^3]
    double ratio1;     // E[lambda/(lambda + mu^2)]
    double ratio1_sq;  // E[lambda/(lambda + mu^2)^2]
    double ratio2_sq;  // E[lambda^2/(lambda + mu^2)^2]
    Regime regime;
};

// Rejects |c - 1| < 0.02 with RegimeBoundary.
SpectralMoments spectral_moments(const ShapeParams& p);

// Same evaluation without the boundary window; needs mu > 0 when c = 1.
SpectralMoments spectral_moments_unchecked(const ShapeParams& p);

// Almost-sure limit of the top eigenvalue of (1/n) X^T X when the population
// covariance is I + (ell - 1) e e^T.
double bbp_top_eigenvalue(double ell, double c);

}  // namespace spiked::mp
