#pragma once

#include "akgraph/linalg.hpp"

#include <span>

namespace akgraph {

/// Eigenvalues sorted descending with orthonormal eigenvectors stored as
/// the columns of `eigenvectors` (column m pairs with eigenvalues[m]).
struct SpectralDecomposition {
    Vector eigenvalues;
    Matrix eigenvectors;

    std::size_t size() const { return eigenvalues.size(); }
    Vector eigenvector(std::size_t m) const { return eigenvectors.column(m); }
};

struct JacobiOptions {
    double tolerance = 1e-14;  // relative to the Frobenius norm of the input
    int max_sweeps = 100;
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Ties in the eigenvalues keep the order in which Jacobi produced them.
/// Each eigenvector is signed so that its first largest-magnitude entry is
/// positive. Throws ValidationError for a non-symmetric input and
/// NumericError if the off-diagonal mass does not vanish within the cap.
SpectralDecomposition eig_symmetric(const Matrix& m, const JacobiOptions& opts = {});

struct FrobeniusPair {
    double lambda0 = 0.0;
    Vector b0;  // unit norm, strictly positive
};

/// Top eigenpair of an irreducible Metzler matrix.
///
/// Throws NumericError if b0 has a component <= 1e-10 (reducible input or
/// loss of accuracy) or if lambda0 is not simple. If `technology` is
/// non-empty, also checks min A <= lambda0 <= max A (AssumptionError).
FrobeniusPair frobenius_pair(const SpectralDecomposition& dec, std::span<const double> technology = {});

struct TwoNodeSpectrum {
    double lambda0 = 0.0;
    double ratio = 0.0;  // b0_2 / b0_1; +inf when w = 0 and A1 < A2
};

/// Closed-form Frobenius eigenvalue and eigenvector ratio of
/// [[A1 - w, w], [w, A2 - w]]. Evaluated in a cancellation-free form so the
/// w -> infinity limit (A1 + A2) / 2 is reached accurately.
TwoNodeSpectrum two_node_closed_form(double a1, double a2, double w);

} // namespace akgraph
