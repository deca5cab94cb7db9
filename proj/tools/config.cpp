#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "spiked/error.hpp"

namespace lab {

using spiked::Error;
using spiked::ErrorCode;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

double parse_real(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    double out = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(out)) {
        throw Error(ErrorCode::InvalidConfig, what + ": not a finite number: '" + text + "'");
    }
    return out;
}

std::int64_t parse_count(const std::string& text, const std::string& what) {
    const std::string t = trim(text);
    std::int64_t out = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw Error(ErrorCode::InvalidConfig, what + ": not an integer: '" + text + "'");
    }
    return out;
}

std::vector<std::string> field_names() {
    return {"d", "n_trn", "n_tst", "theta_trn", "theta_tst", "tau_a_trn", "tau_a_tst",
            "tau_eps_trn", "mu", "beta_norm_sq", "beta_dot_u", "theta_scaling", "target",
            "trials", "seed"};
}

void set_field(ExperimentConfig& cfg, const std::string& key_in, const std::string& value) {
    const std::string key = trim(key_in);
    auto& m = cfg.model;
    if (key == "d") m.d = parse_count(value, key);
    else if (key == "n_trn") m.n_trn = parse_count(value, key);
    else if (key == "n_tst") { m.n_tst = parse_count(value, key); cfg.n_tst_explicit = true; }
    else if (key == "theta_trn") m.theta_trn = parse_real(value, key);
    else if (key == "theta_tst") m.theta_tst = parse_real(value, key);
    else if (key == "tau_a_trn") m.tau_a_trn = parse_real(value, key);
    else if (key == "tau_a_tst") m.tau_a_tst = parse_real(value, key);
    else if (key == "tau_eps_trn") m.tau_eps_trn = parse_real(value, key);
    else if (key == "mu") m.mu = parse_real(value, key);
    else if (key == "beta_norm_sq") m.beta_norm_sq = parse_real(value, key);
    else if (key == "beta_dot_u") m.beta_dot_u = parse_real(value, key);
    else if (key == "theta_scaling") {
        const std::string v = trim(value);
        if (v == "fixed") cfg.scaling = ThetaScaling::Fixed;
        else if (v == "equal_norm") cfg.scaling = ThetaScaling::EqualNorm;
        else throw Error(ErrorCode::InvalidConfig, "theta_scaling must be fixed or equal_norm");
    }
    else if (key == "target") cfg.target = spiked::sim::parse_target(trim(value));
    else if (key == "trials") cfg.trials = parse_count(value, key);
    else if (key == "seed") {
        const std::string t = trim(value);
        std::uint64_t s = 0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), s);
        if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
            throw Error(ErrorCode::InvalidConfig, "seed: not an unsigned integer: '" + value + "'");
        }
        cfg.seed = s;
    }
    else throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": expected key = value");
        }
        set_field(base, line.substr(0, eq), line.substr(eq + 1));
    }
    return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open config file " + path);
    }
    return parse_config(in, std::move(base));
}

spiked::risk::ModelConfig resolved(const ExperimentConfig& cfg) {
    spiked::risk::ModelConfig m = cfg.model;
    if (!cfg.n_tst_explicit) m.n_tst = m.n_trn;
    if (cfg.scaling == ThetaScaling::EqualNorm) {
        m.theta_trn = m.tau_a_trn * std::sqrt(static_cast<double>(m.n_trn));
        m.theta_tst = m.tau_a_tst * std::sqrt(static_cast<double>(m.n_tst));
    }
    return m;
}

std::vector<double> Grid::values() const {
    std::vector<double> out;
    const double span = (stop - start) / step;
    const auto count = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;
    for (std::int64_t i = 0; i < count; ++i) {
        // Snap to 12 decimals so 0.1 + 3 * 0.05 prints as 0.25.
        out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
}

Grid parse_grid(const std::string& text) {
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
    if (b == std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "grid must look like start:stop:step");
    }
    Grid g{parse_real(text.substr(0, a), "grid start"), parse_real(text.substr(a + 1, b - a - 1), "grid stop"),
           parse_real(text.substr(b + 1), "grid step")};
    if (!(g.step > 0.0) || !(g.stop >= g.start)) {
        throw Error(ErrorCode::InvalidConfig, "grid needs step > 0 and stop >= start");
    }
    return g;
}

}  // namespace lab
