#include "spiked/sim.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "spiked/error.hpp"

namespace spiked::sim {

namespace {

void fill_normal(Rng& rng, double sd, double* data, Eigen::Index count) {
    std::normal_distribution<double> dist(0.0, sd);
    for (Eigen::Index i = 0; i < count; ++i) {
        data[i] = dist(rng);
    }
}

Vector normal_vector(Rng& rng, Eigen::Index n, double sd) {
    Vector out(n);
    fill_normal(rng, sd, out.data(), n);
    return out;
}

Matrix normal_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double sd) {
    Matrix out(rows, cols);
    fill_normal(rng, sd, out.data(), out.size());
    return out;
}

struct TrainDraw {
    Vector u;
    Vector v;
    Vector beta_star;
    Matrix a;
    Vector eps;
};

TrainDraw draw_training(const ModelConfig& cfg, std::uint64_t seed) {
    risk::validate(cfg);
    Rng rng(seed);
    const Eigen::Index d = cfg.d;
    const Eigen::Index n = cfg.n_trn;
    TrainDraw t;
    t.u = random_unit(rng, d);
    t.v = random_unit(rng, n);

    Vector w = normal_vector(rng, d, 1.0);
    w -= w.dot(t.u) * t.u;
    const double wn = w.norm();
    const double perp2 = std::max(0.0, cfg.beta_norm_sq - cfg.beta_dot_u * cfg.beta_dot_u);
    t.beta_star = cfg.beta_dot_u * t.u;
    if (wn > 0.0 && perp2 > 0.0) {
        t.beta_star += std::sqrt(perp2) / wn * w;
    }

    t.a = normal_matrix(rng, n, d, cfg.tau_a_trn / std::sqrt(static_cast<double>(d)));
    t.eps = normal_vector(rng, n, cfg.tau_eps_trn);
    return t;
}

// Cholesky of a Gram matrix; false when it is not numerically positive definite.
bool chol(const Matrix& g, Eigen::LLT<Matrix>& out) {
    out.compute(g);
    return out.info() == Eigen::Success;
}

Matrix gram_rows(const Matrix& x, double shift) {
    Matrix g = Matrix::Zero(x.rows(), x.rows());
    g.selfadjointView<Eigen::Lower>().rankUpdate(x);
    g = g.selfadjointView<Eigen::Lower>();
    g.diagonal().array() += shift;
    return g;
}

Matrix gram_cols(const Matrix& x, double shift) {
    Matrix g = Matrix::Zero(x.cols(), x.cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
    g = g.selfadjointView<Eigen::Lower>();
    g.diagonal().array() += shift;
    return g;
}

double residual_risk(const Vector& v_tst, double spike_coef, const Vector& bulk) {
    const Vector r = spike_coef * v_tst + bulk;
    return r.squaredNorm() / static_cast<double>(r.size());
}

}  // namespace

const char* target_name(Target t) { return t == Target::SignalOnly ? "so" : "spn"; }

Target parse_target(const std::string& s) {
    if (s == "so") return Target::SignalOnly;
    if (s == "spn") return Target::SignalPlusNoise;
    throw Error(ErrorCode::InvalidConfig, "target must be so or spn, got '" + s + "'");
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Vector random_unit(Rng& rng, Eigen::Index n) {
    Vector g = normal_vector(rng, n, 1.0);
    return g / g.norm();
}

DatasetInstance gen_instance(const ModelConfig& cfg, Target target, std::uint64_t seed) {
    TrainDraw t = draw_training(cfg, seed);
    DatasetInstance inst;
    inst.u = std::move(t.u);
    inst.v = std::move(t.v);
    inst.beta_star = std::move(t.beta_star);
    inst.a = std::move(t.a);
    inst.eps = std::move(t.eps);
    inst.z = cfg.theta_trn * inst.v * inst.u.transpose();
    inst.x = inst.z + inst.a;
    if (target == Target::SignalOnly) {
        inst.y = inst.z * inst.beta_star + inst.eps;
    } else {
        inst.y = inst.x * inst.beta_star + inst.eps;
    }
    return inst;
}

Vector solve_so(const Matrix& x, const Vector& y, double mu, SolveMethod method) {
    if (!(mu >= 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "solve_so: mu must be >= 0");
    }
    if (method == SolveMethod::AugmentedPinv) {
        if (mu > 0.0) {
            return linalg::ridge_augmented(x, y, mu);
        }
        return linalg::pinv(x) * y;
    }

    const double shift = mu * mu;
    Eigen::LLT<Matrix> llt;
    if (x.rows() <= x.cols()) {
        if (chol(gram_rows(x, shift), llt)) {
            return x.transpose() * llt.solve(y);
        }
    } else {
        if (chol(gram_cols(x, shift), llt)) {
            return llt.solve(x.transpose() * y);
        }
    }
    return solve_so(x, y, mu, SolveMethod::AugmentedPinv);
}

Vector solve_spn(const Matrix& x, const Vector& y, SolveMethod method) { return solve_so(x, y, 0.0, method); }

double empirical_risk(const Vector& beta, const Vector& u, const Vector& beta_star, const ModelConfig& cfg,
                      Target target, std::uint64_t test_seed) {
    Rng rng(test_seed);
    const Eigen::Index d = cfg.d;
    const Eigen::Index n = cfg.n_tst;
    const Vector v_tst = random_unit(rng, n);
    const Matrix a_tst = normal_matrix(rng, n, d, cfg.tau_a_tst / std::sqrt(static_cast<double>(d)));
    if (target == Target::SignalOnly) {
        // Z_tst beta* - X_tst beta
        return residual_risk(v_tst, cfg.theta_tst * u.dot(beta_star - beta), -(a_tst * beta));
    }
    const Vector delta = beta_star - beta;
    return residual_risk(v_tst, cfg.theta_tst * u.dot(delta), a_tst * delta);
}

double empirical_risk_projected(const Vector& beta, const Vector& u, const Vector& beta_star,
                                const ModelConfig& cfg, Target target, std::uint64_t test_seed) {
    Rng rng(test_seed);
    const Eigen::Index n = cfg.n_tst;
    const Vector v_tst = random_unit(rng, n);
    const Vector w = target == Target::SignalOnly ? Vector(-beta) : Vector(beta_star - beta);
    const double sd = cfg.tau_a_tst * w.norm() / std::sqrt(static_cast<double>(cfg.d));
    const Vector bulk = normal_vector(rng, n, sd);
    return residual_risk(v_tst, cfg.theta_tst * u.dot(beta_star - beta), bulk);
}

MonteCarloEstimate summarize(const std::vector<double>& samples, std::uint64_t seed_root) {
    if (samples.size() < 2) {
        throw Error(ErrorCode::InvalidConfig, "Monte Carlo estimates need at least two trials");
    }
    const double count = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double s : samples) sum += s;
    const double mean = sum / count;
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    MonteCarloEstimate est;
    est.mean = mean;
    est.stderr_ = std::sqrt(ss / (count - 1.0) / count);
    est.trials = static_cast<std::int64_t>(samples.size());
    est.seed_root = seed_root;
    return est;
}

void parallel_for(std::int64_t count, unsigned threads, const std::function<void(std::int64_t)>& fn) {
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    if (threads == 1 || count <= 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned used = static_cast<unsigned>(std::min<std::int64_t>(threads, count));
    for (unsigned t = 0; t < used; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::vector<double> risk_samples(const ModelConfig& cfg, Target target, std::int64_t trials,
                                 std::uint64_t seed_root, const McOptions& opt) {
    risk::validate(cfg);
    std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(trials, 0)));
    parallel_for(trials, opt.threads, [&](std::int64_t t) {
        const std::uint64_t train_seed = derive_seed(seed_root, 2 * static_cast<std::uint64_t>(t));
        const std::uint64_t test_seed = derive_seed(seed_root, 2 * static_cast<std::uint64_t>(t) + 1);
        TrainDraw draw = draw_training(cfg, train_seed);
        Matrix& x = draw.a;
        x.noalias() += (cfg.theta_trn * draw.v) * draw.u.transpose();
        Vector y;
        Vector beta;
        if (target == Target::SignalOnly) {
            y = (cfg.theta_trn * draw.u.dot(draw.beta_star)) * draw.v + draw.eps;
            beta = solve_so(x, y, cfg.mu, opt.method);
        } else {
            y = x * draw.beta_star + draw.eps;
            beta = solve_spn(x, y, opt.method);
        }
        out[static_cast<std::size_t>(t)] =
            opt.materialize_test ? empirical_risk(beta, draw.u, draw.beta_star, cfg, target, test_seed)
                                 : empirical_risk_projected(beta, draw.u, draw.beta_star, cfg, target, test_seed);
    });
    return out;
}

MonteCarloEstimate monte_carlo_risk(const ModelConfig& cfg, Target target, std::int64_t trials,
                                    std::uint64_t seed_root, const McOptions& opt) {
    if (trials < 2) {
        throw Error(ErrorCode::InvalidConfig, "monte_carlo_risk: trials must be >= 2");
    }
    return summarize(risk_samples(cfg, target, trials, seed_root, opt), seed_root);
}

namespace {

struct ProbeDraw {
    Matrix a;    // d x n, transposed layout, entries N(0, 1/d)
    Vector u;
    Vector v;
    Matrix eps;  // n x noise_draws
};

ProbeDraw draw_probe(const ModelConfig& cfg, int noise_draws, std::uint64_t seed) {
    risk::validate(cfg);
    if (noise_draws < 1) {
        throw Error(ErrorCode::InvalidConfig, "measure_quad_forms: noise_draws must be >= 1");
    }
    Rng rng(seed);
    const Eigen::Index d = cfg.d;
    const Eigen::Index n = cfg.n_trn;
    ProbeDraw p;
    p.a = normal_matrix(rng, d, n, 1.0 / std::sqrt(static_cast<double>(d)));
    p.u = random_unit(rng, d);
    p.v = random_unit(rng, n);
    p.eps = normal_matrix(rng, n, noise_draws, cfg.tau_eps_trn);
    return p;
}

// Accumulates the noise forms over the columns of eps and averages them.
struct NoiseForms {
    double kk = 0, tt = 0, aa = 0, ah_t = 0, aakk = 0, kt = 0, aakt = 0, ahk = 0;

    void add(double k_eps, double t_eps, double aa_e, double e_ah, double e_aak) {
        kk += k_eps * k_eps;
        tt += t_eps * t_eps;
        aa += aa_e;
        ah_t += e_ah * t_eps;
        aakk += e_aak * k_eps;
        kt += k_eps * t_eps;
        aakt += e_aak * t_eps;
        ahk += e_ah * k_eps;
    }

    void store(QuadFormSample& s, double zero_k_a_h, Eigen::Index draws) const {
        const double w = 1.0 / static_cast<double>(draws);
        s.eps_kk = kk * w;
        s.eps_tt = tt * w;
        s.eps_aa = aa * w;
        s.eps_ah_t = ah_t * w;
        s.eps_aakk = aakk * w;
        s.zero = {zero_k_a_h, kt * w, aakt * w, ahk * w};
    }
};

// Forms for A = tau * a_unit. gram_unit is a_unit a_unit^T when d <= n and
// a_unit^T a_unit otherwise.
QuadFormSample forms_at(const ProbeDraw& p, const Matrix& gram_unit, double tau, double mu, double theta) {
    const Matrix a = tau * p.a;
    const double mu2 = mu * mu;
    const Eigen::Index d = a.rows();
    const Eigen::Index n = a.cols();
    const Eigen::Index draws = p.eps.cols();
    Matrix gram = (tau * tau) * gram_unit;
    QuadFormSample s{};
    NoiseForms nf;

    if (mu == 0.0 && d > n) {
        // A has full column rank: A^+ = (A^T A)^{-1} A^T and t vanishes.
        Eigen::LLT<Matrix> h;
        if (!chol(gram, h)) {
            throw Error(ErrorCode::InvalidMatrix, "measure_quad_forms: A^T A is not positive definite");
        }
        const Vector b = a.transpose() * p.u;
        const Vector y_v = h.solve(p.v);
        const Vector y_b = h.solve(b);
        const Matrix y_e = h.solve(p.eps);
        s.h_sq = p.v.dot(y_v);
        s.k_sq = y_b.squaredNorm();
        s.t_sq = 0.0;
        s.xi = 1.0 + theta * y_v.dot(b);
        s.k_aa_k = y_b.dot(h.solve(y_b));
        for (Eigen::Index j = 0; j < draws; ++j) {
            const double k_eps = y_b.dot(p.eps.col(j));
            nf.add(k_eps, 0.0, p.eps.col(j).dot(y_e.col(j)), y_e.col(j).dot(p.v), y_e.col(j).dot(y_b));
        }
        nf.store(s, y_b.dot(y_v), draws);
    } else {
        // G = A A^T + mu^2 I. For d > n the n x n system mu^2 I + A^T A is
        // factored instead and G^{-1} applied through Woodbury.
        gram.diagonal().array() += mu2;
        Eigen::LLT<Matrix> llt;
        if (!chol(gram, llt)) {
            throw Error(ErrorCode::InvalidMatrix, "measure_quad_forms: shifted Gram matrix is not positive definite");
        }
        auto solve_g = [&](const Matrix& r) -> Matrix {
            if (d <= n) return llt.solve(r);
            return (r - a * llt.solve(a.transpose() * r)) / mu2;
        };
        const Vector a_v = a * p.v;
        const Matrix a_e = a * p.eps;
        const Vector x_u = solve_g(p.u);
        const Vector x_v = solve_g(a_v);
        const Matrix x_e = solve_g(a_e);
        s.h_sq = x_v.squaredNorm();
        s.k_sq = p.u.dot(x_u);
        s.t_sq = 1.0 - a_v.dot(x_v);
        s.xi = 1.0 + theta * a_v.dot(x_u);
        s.k_aa_k = x_u.squaredNorm();
        for (Eigen::Index j = 0; j < draws; ++j) {
            const double k_eps = a_e.col(j).dot(x_u);
            const double t_eps = p.v.dot(p.eps.col(j)) - a_v.dot(x_e.col(j));
            nf.add(k_eps, t_eps, x_e.col(j).squaredNorm(), x_e.col(j).dot(x_v), x_e.col(j).dot(x_u));
        }
        nf.store(s, x_u.dot(x_v), draws);
    }
    s.gamma = theta * theta * s.t_sq * s.k_sq + s.xi * s.xi;
    return s;
}

}  // namespace

std::vector<QuadFormSample> measure_quad_forms_batch(const ModelConfig& cfg, const std::vector<ProbeSetting>& settings,
                                                     std::uint64_t seed, int noise_draws) {
    const ProbeDraw p = draw_probe(cfg, noise_draws, seed);
    const Matrix gram_unit = p.a.rows() <= p.a.cols() ? gram_rows(p.a, 0.0) : gram_cols(p.a, 0.0);
    std::vector<QuadFormSample> out;
    out.reserve(settings.size());
    for (const auto& st : settings) {
        out.push_back(forms_at(p, gram_unit, st.tau_a, st.mu, cfg.theta_trn));
    }
    return out;
}

QuadFormSample measure_quad_forms(const ModelConfig& cfg, double mu, std::uint64_t seed, int noise_draws) {
    return measure_quad_forms_batch(cfg, {{mu, cfg.tau_a_trn}}, seed, noise_draws).front();
}

QuadFormSample measure_quad_forms_reference(const ModelConfig& cfg, double mu, std::uint64_t seed,
                                            int noise_draws) {
    const ProbeDraw p = draw_probe(cfg, noise_draws, seed);
    const Eigen::Index n = p.a.cols();
    const Eigen::Index d = p.a.rows();
    const Matrix a_hat = linalg::augment(cfg.tau_a_trn * p.a, mu);
    const Matrix a_pinv = linalg::pinv(a_hat);
    Vector v_hat = Vector::Zero(n + d);
    v_hat.head(n) = p.v;

    const auto m = linalg::meyer_helpers(a_hat, a_pinv, cfg.theta_trn, p.u, v_hat);
    const Vector pk = a_pinv.transpose() * m.k_vec;  // A^+T k

    QuadFormSample s{};
    s.h_sq = m.h_vec.squaredNorm();
    s.k_sq = m.k_vec.squaredNorm();
    s.t_sq = m.t_vec.squaredNorm();
    s.xi = m.xi;
    s.gamma = m.gamma;
    s.k_aa_k = pk.squaredNorm();
    NoiseForms nf;
    for (Eigen::Index j = 0; j < p.eps.cols(); ++j) {
        Vector eps_hat = Vector::Zero(n + d);
        eps_hat.head(n) = p.eps.col(j);
        const Vector pe = a_pinv.transpose() * eps_hat;  // A^+T eps
        nf.add(m.k_vec.dot(eps_hat), m.t_vec.dot(eps_hat), pe.squaredNorm(), pe.dot(m.h_vec), pe.dot(pk));
    }
    nf.store(s, pk.dot(m.h_vec), p.eps.cols());
    return s;
}

}  // namespace spiked::sim
