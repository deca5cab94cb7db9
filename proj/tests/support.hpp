#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

namespace testsupport {

inline Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index r, Eigen::Index c, double sd = 1.0) {
    std::normal_distribution<double> g(0.0, sd);
    Eigen::MatrixXd a(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
        for (Eigen::Index i = 0; i < r; ++i) a(i, j) = g(rng);
    return a;
}

inline Eigen::VectorXd unit(std::mt19937_64& rng, Eigen::Index n) {
    Eigen::VectorXd v = gaussian(rng, n, 1);
    return v / v.norm();
}

inline double rel_fro(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double scale = b.norm();
    return scale == 0.0 ? a.norm() : (a - b).norm() / scale;
}

struct MeanSe {
    double mean;
    double se;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double var = ss / static_cast<double>(xs.size() - 1);
    return {m, std::sqrt(var / static_cast<double>(xs.size()))};
}

}  // namespace testsupport
