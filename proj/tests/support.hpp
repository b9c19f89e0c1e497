#pragma once

#include "akgraph/network.hpp"
#include "akgraph/planner.hpp"
#include "akgraph/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>

namespace testing {

using akgraph::EconomyNetwork;
using akgraph::Matrix;
using akgraph::Vector;

inline constexpr std::uint64_t kSeed = 20240917;

// Three regions, rho = 0.03, gamma = 3, equal preference weights.
inline EconomyNetwork three_regions(double w13 = 0.03, Vector k = {1.0, 1.0, 1.0}) {
    const double w[] = {0.04, w13, 0.05};
    const double third = 1.0 / 3.0;
    return EconomyNetwork::from_upper_triangle(3, w, {0.10, 0.12, 0.08}, 0.03, 3.0, {third, third, third},
                                               std::move(k));
}

inline EconomyNetwork two_nodes(double a1, double a2, double w, double rho, double gamma, Vector k = {1.0, 1.0}) {
    const double upper[] = {w};
    return EconomyNetwork::from_upper_triangle(2, upper, {a1, a2}, rho, gamma, {1.0, 1.0}, std::move(k));
}

inline Eigen::MatrixXd to_eigen(const Matrix& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

inline double max_abs_diff(const Vector& a, const Vector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Connected network with rho > lambda0 (1 - gamma); gamma on either side of one.
inline EconomyNetwork random_network(std::mt19937_64& rng, std::size_t n) {
    Vector upper(akgraph::upper_triangle_size(n));
    for (double& w : upper) w = uniform(rng, 0.01, 0.2);
    Vector tech(n), p(n), k(n);
    for (std::size_t i = 0; i < n; ++i) {
        tech[i] = uniform(rng, 0.02, 0.15);
        p[i] = uniform(rng, 0.2, 1.5);
        k[i] = uniform(rng, 0.2, 2.0);
    }
    const double gamma = std::bernoulli_distribution(0.5)(rng) ? uniform(rng, 0.3, 0.9) : uniform(rng, 1.5, 4.0);
    EconomyNetwork net = EconomyNetwork::from_upper_triangle(n, upper, tech, 1.0, gamma, p, k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(akgraph::system_matrix(net)));
    const double lambda0 = es.eigenvalues().maxCoeff();
    net.rho = std::max(0.01, lambda0 * (1.0 - gamma)) + uniform(rng, 0.01, 0.1);
    return net;
}

// Composite Simpson rule with `intervals` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace testing
