#include "support.hpp"

#include "akgraph/error.hpp"
#include "akgraph/spectral.hpp"
#include "akgraph/two_node.hpp"

#include <doctest.h>

using namespace akgraph;
using namespace testing;

namespace {

double residual(const Matrix& m, const SpectralDecomposition& dec, std::size_t k) {
    const Vector b = dec.eigenvector(k);
    return norm2(m * b - dec.eigenvalues[k] * b);
}

} // namespace

TEST_SUITE("spectral") {

TEST_CASE("diagonal and two-by-two matrices") {
    const double d[] = {0.10, 0.12, 0.08};
    const auto dec = eig_symmetric(Matrix::diagonal(d));
    CHECK(dec.eigenvalues == Vector{0.12, 0.10, 0.08});

    for (double w : {0.01, 0.3, 2.0}) {
        const double a = 0.1;
        const auto e2 = eig_symmetric(Matrix{{a - w, w}, {w, a - w}});
        CHECK(e2.eigenvalues[0] == doctest::Approx(a).epsilon(1e-14));
        CHECK(e2.eigenvalues[1] == doctest::Approx(a - 2 * w).epsilon(1e-14));
    }
}

TEST_CASE("three-region spectrum") {
    const Matrix m = system_matrix(three_regions());
    const auto dec = eig_symmetric(m);
    // Frozen from an independent eigensolve.
    CHECK(dec.eigenvalues[0] == doctest::Approx(0.101948315155498).epsilon(1e-12));
    CHECK(dec.eigenvalues[1] == doctest::Approx(-0.004745934249814).epsilon(1e-10));
    CHECK(dec.eigenvalues[2] == doctest::Approx(-0.037202380905684).epsilon(1e-11));
    CHECK(std::abs(dec.eigenvalues[0] - 0.1019) < 5e-4);
    CHECK(std::abs(dec.eigenvalues[1] + 0.005) < 1e-3);

    const FrobeniusPair fp = frobenius_pair(dec, three_regions().technology);
    const Vector b0{0.570670559849966, 0.658356910711337, 0.490816962053219};
    CHECK(max_abs_diff(fp.b0, b0) < 1e-12);
    CHECK(norm2(fp.b0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("invariants against Eigen on random symmetric matrices") {
    std::mt19937_64 rng(kSeed);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 8;
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = uniform(rng, -1.0, 1.0);
        const auto dec = eig_symmetric(m);
        const double scale = 1.0 + frobenius_norm(m);

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(dec.eigenvalues[k] == doctest::Approx(es.eigenvalues()[static_cast<Eigen::Index>(n - 1 - k)]).epsilon(1e-12));
            CHECK(residual(m, dec, k) <= 1e-10 * scale);
            if (k + 1 < n) CHECK(dec.eigenvalues[k] >= dec.eigenvalues[k + 1]);
        }
        const Matrix gram = dec.eigenvectors.transposed() * dec.eigenvectors;
        CHECK(frobenius_norm(gram - Matrix::identity(n)) < 1e-10);

        Matrix rebuilt(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const Vector b = dec.eigenvector(k);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) rebuilt(i, j) += dec.eigenvalues[k] * b[i] * b[j];
        }
        CHECK(frobenius_norm(rebuilt - m) < 1e-9);

        CHECK(eig_symmetric(m).eigenvectors == dec.eigenvectors);
    }
}

TEST_CASE("sign convention and tie order") {
    const auto dec = eig_symmetric(Matrix{{2, 0, 0}, {0, 5, 0}, {0, 0, 2}});
    CHECK(dec.eigenvalues == Vector{5, 2, 2});
    CHECK(dec.eigenvector(1) == Vector{1, 0, 0});
    CHECK(dec.eigenvector(2) == Vector{0, 0, 1});

    const auto flip = eig_symmetric(Matrix{{0, 1}, {1, 0}});
    for (std::size_t k = 0; k < 2; ++k) {
        const Vector b = flip.eigenvector(k);
        CHECK(b[0] > 0.0);  // ties in magnitude: the first one is positive
    }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(eig_symmetric(Matrix{{1, 2}, {2.1, 1}}), ValidationError);
    CHECK_THROWS_AS(eig_symmetric(Matrix(2, 3)), ValidationError);

    const auto degenerate = eig_symmetric(Matrix{{1, 0}, {0, 1}});
    CHECK_THROWS_AS(frobenius_pair(degenerate), NumericError);

    const auto reducible = eig_symmetric(Matrix{{0.2, 0}, {0, 0.1}});
    CHECK_THROWS_AS(frobenius_pair(reducible), NumericError);

    const auto dec = eig_symmetric(system_matrix(three_regions()));
    const double narrow[] = {0.05, 0.06, 0.07};
    CHECK_THROWS_AS(frobenius_pair(dec, narrow), AssumptionError);
}

TEST_CASE("Frobenius pair of two equal nodes") {
    const auto dec = eig_symmetric(system_matrix(two_nodes(0.1, 0.1, 0.2, 0.03, 3.0)));
    const FrobeniusPair fp = frobenius_pair(dec);
    CHECK(fp.lambda0 == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(fp.b0[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(fp.b0[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("two-node closed form") {
    const auto eq = two_node_closed_form(0.10, 0.10, 0.5);
    CHECK(eq.lambda0 == doctest::Approx(0.10).epsilon(1e-15));
    CHECK(eq.ratio == 1.0);

    CHECK(std::abs(two_node_closed_form(0.10, 0.12, 1e6).lambda0 - 0.11) < 1e-6);

    const auto s = two_node_closed_form(0.10, 0.12, 0.04);
    CHECK(s.lambda0 == doctest::Approx(0.1112310562561766).epsilon(1e-14));
    CHECK(s.ratio == doctest::Approx(1.2807764064044151).epsilon(1e-13));

    // Equivalent form of the ratio.
    CHECK(s.ratio == doctest::Approx((0.12 - 0.10) / (0.12 - s.lambda0) - 1.0).epsilon(1e-12));

    CHECK(std::isinf(two_node_closed_form(0.10, 0.12, 0.0).ratio));
    CHECK(two_node_closed_form(0.12, 0.10, 0.0).ratio == 0.0);
    CHECK_THROWS_AS(two_node_closed_form(0.1, 0.12, -1.0), DomainError);
}

TEST_CASE("closed form matches Jacobi on a log grid") {
    const auto grid = log_grid(1e-3, 10.0, 12);
    REQUIRE(grid.size() >= 45);
    for (double w : grid) {
        const auto cf = two_node_closed_form(0.10, 0.12, w);
        const auto dec = eig_symmetric(Matrix{{0.10 - w, w}, {w, 0.12 - w}});
        CHECK(std::abs(cf.lambda0 - dec.eigenvalues[0]) <= 1e-10);
        const Vector b0 = dec.eigenvector(0);
        CHECK(cf.ratio == doctest::Approx(b0[1] / b0[0]).epsilon(1e-9));
    }
}

TEST_CASE("lambda0 does not increase with any single weight") {
    std::mt19937_64 rng(kSeed + 2);
    for (int trial = 0; trial < 20; ++trial) {
        EconomyNetwork net = random_network(rng, 4);
        const std::size_t i = trial % 3, j = 3;
        double prev = kInfinity;
        for (double w : log_grid(1e-4, 10.0, 10)) {
            const double l0 = eig_symmetric(system_matrix(net.with_weight(i, j, w))).eigenvalues[0];
            CHECK(l0 <= prev + 1e-15);
            prev = l0;
        }
    }
}

TEST_CASE("only the Frobenius eigenvector is strictly positive") {
    std::mt19937_64 rng(kSeed + 3);
    for (int trial = 0; trial < 50; ++trial) {
        const EconomyNetwork net = random_network(rng, 2 + trial % 5);
        const auto dec = eig_symmetric(system_matrix(net));
        const FrobeniusPair fp = frobenius_pair(dec, net.technology);
        for (double x : fp.b0) CHECK(x > 0.0);
        for (std::size_t m = 1; m < dec.size(); ++m) {
            const Vector b = dec.eigenvector(m);
            CHECK(*std::min_element(b.begin(), b.end()) <= 0.0);
        }
    }
}

}
