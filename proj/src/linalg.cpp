#include "spiked/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spiked/error.hpp"

namespace spiked::linalg {

void require_finite(const Matrix& a, const char* where) {
    if (a.size() == 0) {
        throw Error(ErrorCode::InvalidMatrix, std::string(where) + ": empty matrix");
    }
    if (!a.allFinite()) {
        throw Error(ErrorCode::InvalidMatrix, std::string(where) + ": non-finite entry");
    }
}

double default_pinv_tolerance(Eigen::Index rows, Eigen::Index cols) {
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

Matrix pinv(const Matrix& a, double rel_tol) {
    require_finite(a, "pinv");
    if (rel_tol < 0.0) {
        throw Error(ErrorCode::InvalidMatrix, "pinv: negative tolerance");
    }
    const double tol = rel_tol > 0.0 ? rel_tol : default_pinv_tolerance(a.rows(), a.cols());

    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return Matrix::Zero(a.cols(), a.rows());
    }
    const double cutoff = tol * s(0);
    Eigen::Index rank = 0;
    while (rank < s.size() && s(rank) > cutoff) {
        ++rank;
    }
    const Matrix& u = svd.matrixU();
    const Matrix& v = svd.matrixV();
    Vector inv = s.head(rank).cwiseInverse();
    return v.leftCols(rank) * inv.asDiagonal() * u.leftCols(rank).transpose();
}

Matrix augment(const Matrix& a, double mu) {
    const Eigen::Index d = a.rows();
    const Eigen::Index n = a.cols();
    Matrix out(d, n + d);
    out.leftCols(n) = a;
    out.rightCols(d) = mu * Matrix::Identity(d, d);
    return out;
}

SvdFactors augmented_svd(const Matrix& a, double mu) {
    require_finite(a, "augmented_svd");
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw Error(ErrorCode::InvalidMatrix, "augmented_svd: mu must be finite and >= 0");
    }
    const Eigen::Index d = a.rows();
    const Eigen::Index n = a.cols();
    const Eigen::Index r = std::min(d, n);

    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeThinV);
    const Matrix& u = svd.matrixU();
    const Matrix& v = svd.matrixV();
    const Vector& sigma = svd.singularValues();

    SvdFactors out;
    out.u_basis = u;
    out.singular_values = Vector::Constant(d, mu);
    for (Eigen::Index i = 0; i < r; ++i) {
        out.singular_values(i) = std::sqrt(sigma(i) * sigma(i) + mu * mu);
    }

    out.v_basis = Matrix::Zero(n + d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double sh = out.singular_values(i);
        if (sh > 0.0) {
            if (i < r) {
                out.v_basis.col(i).head(n) = v.col(i) * (sigma(i) / sh);
            }
            out.v_basis.col(i).tail(d) = u.col(i) * (mu / sh);
        } else {
            // Zero singular value (mu = 0 and sigma_i = 0): any unit vector
            // orthogonal to the rest completes the basis.
            out.v_basis.col(i).tail(d) = u.col(i);
        }
    }
    return out;
}

MeyerHelpers meyer_helpers(const Matrix& a_hat, double theta, const Vector& u, const Vector& v_hat) {
    return meyer_helpers(a_hat, pinv(a_hat), theta, u, v_hat);
}

MeyerHelpers meyer_helpers(const Matrix& a_hat, const Matrix& a_hat_pinv, double theta,
                           const Vector& u, const Vector& v_hat) {
    require_finite(a_hat, "meyer_helpers");
    if (u.size() != a_hat.rows() || v_hat.size() != a_hat.cols()) {
        throw Error(ErrorCode::InvalidMatrix, "meyer_helpers: vector sizes do not match a_hat");
    }
    const Matrix& ap = a_hat_pinv;

    MeyerHelpers m;
    m.h_vec = ap.transpose() * v_hat;
    m.k_vec = ap * u;
    m.s_vec = u - a_hat * m.k_vec;
    m.t_vec = v_hat - ap * (a_hat * v_hat);
    m.xi = 1.0 + theta * m.h_vec.dot(u);
    m.gamma = theta * theta * m.t_vec.squaredNorm() * m.k_vec.squaredNorm() + m.xi * m.xi;
    if (std::abs(m.gamma) < 1e-12) {
        throw Error(ErrorCode::GammaNearZero, "meyer_helpers: |gamma| < 1e-12");
    }

    const Vector kta = ap.transpose() * m.k_vec;  // (k^T A^+)^T
    if (m.xi != 0.0) {
        m.p_vec = -(theta * theta * m.k_vec.squaredNorm() / m.xi) * m.t_vec - theta * m.k_vec;
        m.q_vec = -(theta * m.t_vec.squaredNorm() / m.xi) * kta - m.h_vec;
    } else {
        m.p_vec = Vector::Constant(a_hat.cols(), std::numeric_limits<double>::quiet_NaN());
        m.q_vec = Vector::Constant(a_hat.rows(), std::numeric_limits<double>::quiet_NaN());
    }
    return m;
}

RankOneUpdate rank_one_pinv_update_ex(const Matrix& a, double theta, const Vector& u, const Vector& v,
                                      double residual_tol) {
    const Matrix ap = pinv(a);
    const MeyerHelpers m = meyer_helpers(a, ap, theta, u, v);

    auto direct = [&] {
        return RankOneUpdate{pinv(a + theta * u * v.transpose()), MeyerBranch::Direct};
    };
    if (m.xi == 0.0) {
        return direct();
    }

    if (m.s_vec.norm() <= residual_tol) {
        const Vector kta = ap.transpose() * m.k_vec;
        Matrix out = ap;
        out.noalias() += (theta / m.xi) * m.t_vec * kta.transpose();
        out.noalias() -= (m.xi / m.gamma) * m.p_vec * m.q_vec.transpose();
        return RankOneUpdate{std::move(out), MeyerBranch::FullRowRank};
    }

    if (m.t_vec.norm() <= residual_tol) {
        const double s2 = m.s_vec.squaredNorm();
        const double h2 = m.h_vec.squaredNorm();
        const double gamma2 = theta * theta * s2 * h2 + m.xi * m.xi;
        if (std::abs(gamma2) < 1e-12) {
            throw Error(ErrorCode::GammaNearZero, "rank_one_pinv_update: |gamma| < 1e-12");
        }
        const Vector aph = ap * m.h_vec;
        const Vector p2 = -(theta * theta * s2 / m.xi) * aph - theta * m.k_vec;
        const Vector q2 = -(theta * h2 / m.xi) * m.s_vec - m.h_vec;
        Matrix out = ap;
        out.noalias() += (theta / m.xi) * aph * m.s_vec.transpose();
        out.noalias() -= (m.xi / gamma2) * p2 * q2.transpose();
        return RankOneUpdate{std::move(out), MeyerBranch::FullColumnRank};
    }

    return direct();
}

Matrix rank_one_pinv_update(const Matrix& a, double theta, const Vector& u, const Vector& v) {
    return rank_one_pinv_update_ex(a, theta, u, v).pinv;
}

Vector ridge_augmented(const Matrix& x, const Vector& y, double mu) {
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();
    const Matrix xt_hat = augment(x.transpose(), mu);  // d x (n + d)
    Vector y_hat = Vector::Zero(n + d);
    y_hat.head(n) = y;
    return pinv(xt_hat).transpose() * y_hat;
}

Vector ridge_normal(const Matrix& x, const Vector& y, double mu) {
    Matrix g = x * x.transpose();
    g.diagonal().array() += mu * mu;
    return x.transpose() * g.ldlt().solve(y);
}

}  // namespace spiked::linalg
