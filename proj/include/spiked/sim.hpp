#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "spiked/linalg.hpp"
#include "spiked/quad.hpp"
#include "spiked/risk.hpp"

namespace spiked::sim {

using linalg::Matrix;
using linalg::Vector;
using risk::ModelConfig;

enum class Target { SignalOnly, SignalPlusNoise };

const char* target_name(Target t);
Target parse_target(const std::string& s);

// Main-text layout: rows of x are data points.
struct DatasetInstance {
    Matrix z;  // n x d, theta v u^T
    Matrix a;  // n x d bulk
    Matrix x;  // z + a
    Vector y;
    Vector u;  // unit, length d
    Vector v;  // unit, length n
    Vector beta_star;
    Vector eps;
};

using Rng = std::mt19937_64;

// Counter-based seed derivation (splitmix64 finalizer over root and index).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

Vector random_unit(Rng& rng, Eigen::Index n);

DatasetInstance gen_instance(const ModelConfig& cfg, Target target, std::uint64_t seed);

enum class SolveMethod {
    Gram,           // Cholesky on the smaller Gram matrix, pinv fallback
    AugmentedPinv,  // min-norm solve on [X^T  mu I] (mu > 0) or pinv (mu = 0)
};

Vector solve_so(const Matrix& x, const Vector& y, double mu, SolveMethod method = SolveMethod::Gram);
Vector solve_spn(const Matrix& x, const Vector& y, SolveMethod method = SolveMethod::Gram);

// Test risk on a freshly drawn test set sharing u and beta_star with the
// training instance. The full version materializes A_tst.
double empirical_risk(const Vector& beta, const Vector& u, const Vector& beta_star, const ModelConfig& cfg,
                      Target target, std::uint64_t test_seed);

// Same law, but A_tst w is drawn directly as N(0, tau_tst^2 ||w||^2 / d) per row.
double empirical_risk_projected(const Vector& beta, const Vector& u, const Vector& beta_star,
                                const ModelConfig& cfg, Target target, std::uint64_t test_seed);

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed_root = 0;
};

MonteCarloEstimate summarize(const std::vector<double>& samples, std::uint64_t seed_root);

struct McOptions {
    SolveMethod method = SolveMethod::Gram;
    bool materialize_test = false;
    unsigned threads = 0;  // 0: hardware concurrency
};

// Runs fn(i) for i in [0, count) on a small thread pool. Each call writes its
// own slot, so results do not depend on the thread count.
void parallel_for(std::int64_t count, unsigned threads, const std::function<void(std::int64_t)>& fn);

std::vector<double> risk_samples(const ModelConfig& cfg, Target target, std::int64_t trials,
                                 std::uint64_t seed_root, const McOptions& opt = {});

// Test risk of the trained estimator; cfg.mu is the ridge parameter used for
// the signal-only fit (the signal-plus-noise fit is always unregularized).
MonteCarloEstimate monte_carlo_risk(const ModelConfig& cfg, Target target, std::int64_t trials,
                                    std::uint64_t seed_root, const McOptions& opt = {});

struct QuadFormSample {
    double h_sq;
    double k_sq;
    double t_sq;
    double xi;
    double gamma;
    double k_aa_k;
    double eps_kk;
    double eps_tt;
    double eps_aa;
    double eps_ah_t;
    double eps_aakk;
    std::array<double, 4> zero;  // in the order of quad::zero_forms_list()
};

// One draw of every helper form for A_hat = [A^T  mu I] (transposed layout).
// Uses Cholesky solves on the smaller Gram matrix. The noise forms (eps_* and
// the three zero forms that contain eps) are averaged over noise_draws
// independent eps vectors on the same bulk draw.
QuadFormSample measure_quad_forms(const ModelConfig& cfg, double mu, std::uint64_t seed, int noise_draws = 1);

struct ProbeSetting {
    double mu;
    double tau_a;
};

// Several (mu, tau_a) settings evaluated on one draw: the bulk is a single
// N(0, 1/d) matrix scaled by each tau_a, and its Gram matrix is formed once.
// cfg.tau_a_trn is ignored. Entry i equals measure_quad_forms with
// mu = settings[i].mu and tau_a_trn = settings[i].tau_a up to rounding.
std::vector<QuadFormSample> measure_quad_forms_batch(const ModelConfig& cfg, const std::vector<ProbeSetting>& settings,
                                                     std::uint64_t seed, int noise_draws = 1);

// Same draw, evaluated through an explicit pseudoinverse of A_hat and
// linalg::meyer_helpers. Slow; used to check the fast path.
QuadFormSample measure_quad_forms_reference(const ModelConfig& cfg, double mu, std::uint64_t seed,
                                            int noise_draws = 1);

}  // namespace spiked::sim
