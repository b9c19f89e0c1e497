#include "akgraph/network.hpp"

#include "akgraph/error.hpp"

#include <cmath>
#include <queue>
#include <sstream>

namespace akgraph {

namespace {

std::string pair_label(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << '(' << i + 1 << ',' << j + 1 << ')';
    return os.str();
}

} // namespace

EconomyNetwork EconomyNetwork::from_upper_triangle(std::size_t n, std::span<const double> upper,
                                                   Vector technology, double rho, double gamma,
                                                   Vector pref_weights, Vector initial_capital,
                                                   std::optional<Matrix> consumption_operator) {
    if (n == 0) throw ValidationError("network must have at least one node");
    if (upper.size() != upper_triangle_size(n)) {
        std::ostringstream os;
        os << "expected " << upper_triangle_size(n) << " upper-triangle weights for " << n
           << " nodes, got " << upper.size();
        throw ValidationError(os.str());
    }
    EconomyNetwork net;
    net.weights = Matrix(n, n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            net.weights(i, j) = upper[idx];
            net.weights(j, i) = upper[idx];
            ++idx;
        }
    net.technology = std::move(technology);
    net.rho = rho;
    net.gamma = gamma;
    net.pref_weights = std::move(pref_weights);
    net.initial_capital = std::move(initial_capital);
    net.consumption_operator = std::move(consumption_operator);
    return net;
}

EconomyNetwork EconomyNetwork::with_weight(std::size_t i, std::size_t j, double value) const {
    if (i == j || i >= size() || j >= size()) throw ValidationError("with_weight: invalid pair " + pair_label(i, j));
    EconomyNetwork copy = *this;
    copy.weights(i, j) = value;
    copy.weights(j, i) = value;
    return copy;
}

EconomyNetwork EconomyNetwork::with_capital(Vector k) const {
    EconomyNetwork copy = *this;
    copy.initial_capital = std::move(k);
    return copy;
}

Matrix EconomyNetwork::consumption_matrix() const {
    return consumption_operator ? *consumption_operator : Matrix::identity(size());
}

bool EconomyNetwork::has_identity_consumption() const {
    return !consumption_operator || *consumption_operator == Matrix::identity(size());
}

bool EconomyNetwork::has_edges() const {
    for (double w : weights.data())
        if (w != 0.0) return true;
    return false;
}

std::string Violation::to_string() const {
    std::ostringstream os;
    os << kind;
    if (i >= 0 && j >= 0)
        os << '(' << i << ',' << j << ')';
    else if (i >= 0)
        os << '(' << i << ')';
    return os.str();
}

Matrix build_laplacian(const Matrix& weights) {
    const std::size_t n = weights.rows();
    if (weights.cols() != n) throw ValidationError("weight matrix is not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (weights(i, i) != 0.0) throw ValidationError("nonzero self-loop weight at " + pair_label(i, i));
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(weights(i, j))) throw ValidationError("non-finite weight at " + pair_label(i, j));
            if (weights(i, j) < 0.0) throw ValidationError("negative weight at " + pair_label(i, j));
            if (weights(i, j) != weights(j, i)) throw ValidationError("non-symmetric weight at " + pair_label(i, j));
        }
    }
    Matrix lap(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            lap(i, j) = weights(i, j);
            row += weights(i, j);
        }
        lap(i, i) = -row;
    }
    return lap;
}

Matrix system_matrix(const EconomyNetwork& net) {
    if (net.technology.size() != net.weights.rows())
        throw ValidationError("technology length does not match node count");
    Matrix m = build_laplacian(net.weights);
    for (std::size_t i = 0; i < net.size(); ++i) m(i, i) += net.technology[i];
    return m;
}

bool is_irreducible(const Matrix& weights) {
    const std::size_t n = weights.rows();
    if (n <= 1) return true;
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t v = 0; v < n; ++v) {
            if (seen[v] || v == u) continue;
            if (weights(u, v) > kEdgeThreshold || weights(v, u) > kEdgeThreshold) {
                seen[v] = true;
                ++reached;
                frontier.push(v);
            }
        }
    }
    return reached == n;
}

std::vector<Violation> validate(const EconomyNetwork& net) {
    std::vector<Violation> out;
    const std::size_t n = net.size();
    auto add = [&out](std::string kind, int i = -1, int j = -1) { out.push_back({std::move(kind), i, j}); };

    if (n == 0) {
        add("empty-network");
        return out;
    }
    const bool shapes_ok = net.weights.rows() == n && net.weights.cols() == n &&
                           net.pref_weights.size() == n && net.initial_capital.size() == n &&
                           (!net.consumption_operator ||
                            (net.consumption_operator->rows() == n && net.consumption_operator->cols() == n));
    if (!shapes_ok) {
        add("dimension-mismatch");
        return out;
    }

    bool weights_ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (net.weights(i, i) != 0.0) {
            add("nonzero-diagonal", int(i + 1));
            weights_ok = false;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = net.weights(i, j), b = net.weights(j, i);
            if (!std::isfinite(a) || !std::isfinite(b)) {
                add("non-finite-weight", int(i + 1), int(j + 1));
                weights_ok = false;
                continue;
            }
            if (a < 0.0 || b < 0.0) {
                add("negative-weight", int(i + 1), int(j + 1));
                weights_ok = false;
            }
            if (a != b) {
                add("asymmetric-weight", int(i + 1), int(j + 1));
                weights_ok = false;
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!(net.technology[i] > 0.0) || !std::isfinite(net.technology[i])) add("nonpositive-technology", int(i + 1));
    if (!(net.rho > 0.0) || !std::isfinite(net.rho)) add("nonpositive-rho");
    if (!(net.gamma > 0.0) || !std::isfinite(net.gamma))
        add("nonpositive-gamma");
    else if (net.gamma == 1.0)
        add("gamma-equals-one");
    for (std::size_t i = 0; i < n; ++i)
        if (!(net.pref_weights[i] > 0.0) || !std::isfinite(net.pref_weights[i])) add("nonpositive-pref-weight", int(i + 1));
    for (std::size_t i = 0; i < n; ++i)
        if (!(net.initial_capital[i] >= 0.0) || !std::isfinite(net.initial_capital[i])) add("negative-capital", int(i + 1));

    if (net.consumption_operator) {
        const Matrix& nm = *net.consumption_operator;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (!(nm(i, j) >= 0.0) || !std::isfinite(nm(i, j))) add("negative-consumption-operator", int(i + 1), int(j + 1));
        for (std::size_t i = 0; i < n; ++i) {
            bool row_pos = false, col_pos = false;
            for (std::size_t j = 0; j < n; ++j) {
                row_pos = row_pos || nm(i, j) > 0.0;
                col_pos = col_pos || nm(j, i) > 0.0;
            }
            if (!row_pos) add("zero-consumption-row", int(i + 1));
            if (!col_pos) add("zero-consumption-column", int(i + 1));
        }
    }

    if (weights_ok && n >= 2 && !is_irreducible(net.weights)) add("disconnected-graph");
    return out;
}

} // namespace akgraph
