#include "spiked/mp.hpp"

#include <cmath>
#include <string>

namespace spiked::mp {

namespace {

void check_domain(double z, double c, const char* where) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorCode::OutOfDomain, std::string(where) + ": c must be positive");
    }
    if (!(z < 0.0) || !std::isfinite(z)) {
        throw Error(ErrorCode::OutOfDomain, std::string(where) + ": z must be negative");
    }
}

}  // namespace

double mp_stieltjes(double z, double c) {
    check_domain(z, c, "mp_stieltjes");
    return mp_stieltjes_jet(z, c).m;
}

double mp_stieltjes_d1(double z, double c) {
    check_domain(z, c, "mp_stieltjes_d1");
    const double s = std::sqrt(-4.0 * c * z + (1.0 - c - z) * (1.0 - c - z));
    return (c - z + s - 1.0) * (c + z + s - 1.0) / (4.0 * c * z * z * s);
}

double mp_stieltjes_d2(double z, double c) {
    check_domain(z, c, "mp_stieltjes_d2");
    const double disc = -4.0 * c * z + (1.0 - c - z) * (1.0 - c - z);
    const double cm1 = c - 1.0;
    const double z3 = z * z * z;
    const double first = (z * (c + 1.0) * (z * z + 3.0 * cm1 * cm1) - 3.0 * z * z * (c * c + 1.0) -
                          cm1 * cm1 * cm1 * cm1) /
                         (c * z3 * disc * std::sqrt(disc));
    const double second = cm1 * (2.0 * z * (c + 1.0) - z * z - cm1 * cm1) / (c * z3 * disc);
    return first + second;
}

StieltjesJet mp_stieltjes_jet(double z, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw Error(ErrorCode::OutOfDomain, "mp_stieltjes_jet: c must be positive");
    }
    if (!(z <= 0.0) || (z == 0.0 && !(c < 1.0))) {
        throw Error(ErrorCode::OutOfDomain, "mp_stieltjes_jet: need z < 0, or z = 0 with c < 1");
    }
    const double b = 1.0 - z - c;
    const double disc = b * b - 4.0 * c * z;
    const double s = std::sqrt(disc);
    const double m = 2.0 / (b + s);
    const double d1 = m * (c * m + 1.0) / s;
    const double d2 = (d1 * (2.0 * c * m + 1.0) - m * (c * m + 1.0) * (z - c - 1.0) / disc) / s;
    return {m, d1, d2};
}

double mp_self_consistency_residual(double z, double c) {
    const double m = mp_stieltjes(z, c);
    return m - 1.0 / ((1.0 - c - c * z * m) - z);
}

SpectralMoments spectral_moments(const ShapeParams& p) {
    if (!(p.c > 0.0) || !(p.tau > 0.0) || !(p.mu >= 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "spectral_moments: need c > 0, tau > 0, mu >= 0");
    }
    require_off_boundary(p.c, "spectral_moments");
    return spectral_moments_unchecked(p);
}

SpectralMoments spectral_moments_unchecked(const ShapeParams& p) {
    if (!(p.c > 0.0) || !(p.tau > 0.0) || !(p.mu >= 0.0)) {
        throw Error(ErrorCode::OutOfDomain, "spectral_moments: need c > 0, tau > 0, mu >= 0");
    }
    if (p.c == 1.0 && p.mu == 0.0) {
        throw Error(ErrorCode::RegimeBoundary, "spectral_moments: c = 1 with mu = 0");
    }
    const double t2 = p.tau * p.tau;
    const double mu2 = p.mu * p.mu;
    SpectralMoments out{};
    double scale = 0.0;
    StieltjesJet jet{};
    if (p.c < 1.0) {
        // Eigenvalues of (c/tau^2) A A^T follow MP(c).
        out.regime = Regime::Under;
        scale = p.c / t2;
        jet = mp_stieltjes_jet(-p.c * mu2 / t2, p.c);
    } else {
        // The n non-zero eigenvalues of (1/tau^2) A^T A follow MP(1/c).
        out.regime = Regime::Over;
        scale = 1.0 / t2;
        jet = mp_stieltjes_jet(-mu2 / t2, 1.0 / p.c);
    }
    out.inv1 = scale * jet.m;
    out.inv2 = scale * scale * jet.d1;
    out.inv3 = scale * scale * scale * jet.d2 / 2.0;
    out.ratio1 = 1.0 - mu2 * out.inv1;
    out.ratio1_sq = out.inv1 - mu2 * out.inv2;
    out.ratio2_sq = out.ratio1 - mu2 * out.ratio1_sq;
    return out;
}

double bbp_top_eigenvalue(double ell, double c) {
    const double edge = 1.0 + std::sqrt(c);
    if (ell > edge) {
        return ell + c * ell / (ell - 1.0);
    }
    return edge * edge;
}

}  // namespace spiked::mp
