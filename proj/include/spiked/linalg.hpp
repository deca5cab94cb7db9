#pragma once

#include <Eigen/Dense>

namespace spiked::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Moore-Penrose pseudoinverse through a thin SVD. Singular values at or below
// rel_tol * sigma_max are dropped; rel_tol = 0 picks max(rows, cols) * eps.
Matrix pinv(const Matrix& a, double rel_tol = 0.0);

// Default relative cutoff used by pinv for a rows x cols matrix.
double default_pinv_tolerance(Eigen::Index rows, Eigen::Index cols);

struct SvdFactors {
    Matrix u_basis;          // d x d
    Vector singular_values;  // descending, length d
    Matrix v_basis;          // (n + d) x d, orthonormal columns
};

// SVD of the augmented matrix [A  mu*I] assembled from the SVD of A alone.
// The left basis is the left basis of A; the right basis has the block form
// [V Sigma C^-1 ; mu U C^-1] plus, when d > n, the columns [0 ; U_{n+1..d}].
SvdFactors augmented_svd(const Matrix& a, double mu);

// [A  mu*I] materialized, d x (n + d).
Matrix augment(const Matrix& a, double mu);

struct MeyerHelpers {
    Vector h_vec;  // v^T A^+ as a column, length rows(A)
    Vector k_vec;  // A^+ u, length cols(A)
    Vector s_vec;  // (I - A A^+) u, length rows(A)
    Vector t_vec;  // v^T (I - A^+ A) as a column, length cols(A)
    double xi = 1.0;
    double gamma = 1.0;
    Vector p_vec;  // length cols(A)
    Vector q_vec;  // length rows(A)
};

// Helper quantities for the rank-one perturbation A + theta u v^T, all read
// off a single pseudoinverse of a_hat (passed in when the caller has it).
MeyerHelpers meyer_helpers(const Matrix& a_hat, double theta, const Vector& u, const Vector& v_hat);
MeyerHelpers meyer_helpers(const Matrix& a_hat, const Matrix& a_hat_pinv, double theta,
                           const Vector& u, const Vector& v_hat);

enum class MeyerBranch { FullRowRank, FullColumnRank, Direct };

struct RankOneUpdate {
    Matrix pinv;
    MeyerBranch branch;
};

// (A + theta u v^T)^+ from A^+ and the projector residuals. Uses the s = 0
// form when A has full row rank, the t = 0 form when it has full column rank
// and otherwise falls back to an SVD of the sum.
RankOneUpdate rank_one_pinv_update_ex(const Matrix& a, double theta, const Vector& u, const Vector& v,
                                      double residual_tol = 1e-9);
Matrix rank_one_pinv_update(const Matrix& a, double theta, const Vector& u, const Vector& v);

// Ridge solution argmin ||y - X b||^2 + mu^2 ||b||^2 for X n x d.
// ridge_augmented solves the min-norm problem on [X^T  mu I]; ridge_normal
// uses X^T (X X^T + mu^2 I)^{-1} y.
Vector ridge_augmented(const Matrix& x, const Vector& y, double mu);
Vector ridge_normal(const Matrix& x, const Vector& y, double mu);

// Throws InvalidMatrix on NaN or Inf entries.
void require_finite(const Matrix& a, const char* where);

}  // namespace spiked::linalg
