#pragma once

#include "akgraph/linalg.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace akgraph {

// Weights below this are treated as absent edges when testing connectivity.
inline constexpr double kEdgeThreshold = 1e-15;

/// One problem instance: an undirected weighted graph of regions with AK
/// technology at every node, CRRA preferences and an initial endowment.
///
/// The capital dynamics are K' = (L + A) K - N C with L the graph Laplacian
/// (off-diagonals w_ij, rows summing to zero) and A = diag(technology).
struct EconomyNetwork {
    Matrix weights;                 // symmetric, nonnegative, zero diagonal
    Vector technology;              // A_i > 0, net of depreciation
    double rho = 0.0;               // discount rate
    double gamma = 0.0;             // CRRA curvature, != 1
    Vector pref_weights;            // p_i > 0
    Vector initial_capital;         // k_i >= 0
    std::optional<Matrix> consumption_operator; // N; identity when absent

    std::size_t size() const { return technology.size(); }

    // Builds the weight matrix from the strict upper triangle in row-major
    // (i < j) order and mirrors it, so asymmetric input cannot be expressed.
    static EconomyNetwork from_upper_triangle(std::size_t n, std::span<const double> upper,
                                              Vector technology, double rho, double gamma,
                                              Vector pref_weights, Vector initial_capital,
                                              std::optional<Matrix> consumption_operator = {});

    // Copy with w_ij = w_ji = value (0-based indices).
    EconomyNetwork with_weight(std::size_t i, std::size_t j, double value) const;
    EconomyNetwork with_capital(Vector k) const;

    Matrix consumption_matrix() const;
    bool has_identity_consumption() const;
    bool has_edges() const;
};

/// Number of entries in the strict upper triangle of an n x n matrix.
constexpr std::size_t upper_triangle_size(std::size_t n) { return n * (n - 1) / 2; }

struct Violation {
    std::string kind;  // e.g. "negative-weight", "gamma-equals-one"
    int i = -1;        // 1-based node indices, -1 when not applicable
    int j = -1;

    std::string to_string() const;
    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Laplacian of a weighted undirected graph: l_ij = w_ij off the diagonal,
/// l_ii = -sum_{j != i} w_ij. Throws ValidationError naming the first bad (i,j).
Matrix build_laplacian(const Matrix& weights);

/// L + diag(technology). Symmetric and Metzler for valid input.
Matrix system_matrix(const EconomyNetwork& net);

/// True iff the graph with edges {w_ij > kEdgeThreshold} is connected.
bool is_irreducible(const Matrix& weights);

/// Every violated standing assumption, in a deterministic order.
/// The spectral condition rho > lambda0 (1 - gamma) is checked by the planner.
std::vector<Violation> validate(const EconomyNetwork& net);

} // namespace akgraph
