#include "support.hpp"

#include "akgraph/error.hpp"
#include "akgraph/network.hpp"

#include <doctest.h>

#include <numeric>

using namespace akgraph;
using namespace testing;

namespace {

// Union-find connectivity, independent of the BFS in the library.
bool connected_by_union_find(const Matrix& w) {
    const std::size_t n = w.rows();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (w(i, j) >= 1e-15) parent[root(i)] = root(j);
    for (std::size_t i = 1; i < n; ++i)
        if (root(i) != root(0)) return false;
    return true;
}

std::vector<std::string> kinds(const std::vector<Violation>& v) {
    std::vector<std::string> out;
    for (const auto& x : v) out.push_back(x.to_string());
    return out;
}

} // namespace

TEST_SUITE("network") {

TEST_CASE("laplacian of small graphs") {
    CHECK(build_laplacian(Matrix(2, 2)) == Matrix(2, 2));
    CHECK(build_laplacian(Matrix{{0, 0.04}, {0.04, 0}}) == Matrix{{-0.04, 0.04}, {0.04, -0.04}});

    const Matrix lap = build_laplacian(three_regions().weights);
    const Matrix expected{{-0.07, 0.04, 0.03}, {0.04, -0.09, 0.05}, {0.03, 0.05, -0.08}};
    for (std::size_t i = 0; i < 3; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(lap(i, j) == doctest::Approx(expected(i, j)).epsilon(1e-15));
            row += lap(i, j);
        }
        CHECK(std::abs(row) < 1e-16);
    }
}

TEST_CASE("laplacian rejects bad weights and names the pair") {
    try {
        build_laplacian(Matrix{{0, -0.1}, {-0.1, 0}});
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("(1,2)") != std::string::npos);
    }
    CHECK_THROWS_AS(build_laplacian(Matrix{{0, 0.1}, {0.2, 0}}), ValidationError);
    CHECK_THROWS_AS(build_laplacian(Matrix{{0.1, 0}, {0, 0}}), ValidationError);
}

TEST_CASE("system matrix") {
    const double a = 0.1, w = 0.3;
    const Matrix m = system_matrix(two_nodes(a, a, w, 0.03, 3.0));
    CHECK(m == Matrix{{a - w, w}, {w, a - w}});

    const double none[] = {0.0};
    const auto scalar = EconomyNetwork::from_upper_triangle(1, std::span<const double>(none, 0), {0.1}, 0.03, 3.0,
                                                            {1.0}, {1.0});
    CHECK(system_matrix(scalar) == Matrix{{0.1}});

    const Matrix m3 = system_matrix(three_regions());
    const Matrix expected{{0.03, 0.04, 0.03}, {0.04, 0.03, 0.05}, {0.03, 0.05, 0.0}};
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(m3(i, j) == doctest::Approx(expected(i, j)).epsilon(1e-14));
}

TEST_CASE("irreducibility") {
    CHECK(is_irreducible(three_regions().weights));
    CHECK_FALSE(is_irreducible(Matrix(2, 2)));
    CHECK_FALSE(is_irreducible(Matrix{{0, 0.1, 0}, {0.1, 0, 0}, {0, 0, 0}}));
    CHECK_FALSE(is_irreducible(Matrix{{0, 1e-16}, {1e-16, 0}}));
}

TEST_CASE("validate") {
    CHECK(validate(three_regions()).empty());

    EconomyNetwork log_utility = three_regions();
    log_utility.gamma = 1.0;
    CHECK(kinds(validate(log_utility)) == std::vector<std::string>{"gamma-equals-one"});

    EconomyNetwork negative = three_regions();
    negative.weights(0, 1) = negative.weights(1, 0) = -0.04;
    CHECK(kinds(validate(negative)) == std::vector<std::string>{"negative-weight(1,2)"});

    EconomyNetwork several = three_regions();
    several.rho = 0.0;
    several.technology[2] = 0.0;
    several.initial_capital[0] = -1.0;
    CHECK(kinds(validate(several)) ==
          std::vector<std::string>{"nonpositive-technology(3)", "nonpositive-rho", "negative-capital(1)"});

    EconomyNetwork zero_row = three_regions();
    zero_row.consumption_operator = Matrix{{1, 0, 0}, {0, 0, 0}, {0, 1, 1}};
    CHECK(kinds(validate(zero_row)) ==
          std::vector<std::string>{"zero-consumption-row(2)"});

    EconomyNetwork isolated = three_regions();
    isolated.weights(0, 2) = isolated.weights(2, 0) = 0.0;
    isolated.weights(1, 2) = isolated.weights(2, 1) = 0.0;
    CHECK(kinds(validate(isolated)) == std::vector<std::string>{"disconnected-graph"});
}

TEST_CASE("upper-triangle ingestion mirrors weights") {
    const double upper[] = {1, 2, 3, 4, 5, 6};
    const auto net = EconomyNetwork::from_upper_triangle(4, upper, Vector(4, 0.1), 0.1, 2.0, Vector(4, 1.0),
                                                         Vector(4, 1.0));
    CHECK(net.weights(0, 3) == 3.0);
    CHECK(net.weights(3, 0) == 3.0);
    CHECK(net.weights(1, 2) == 4.0);
    CHECK(net.weights(2, 3) == 6.0);
    CHECK_THROWS_AS(EconomyNetwork::from_upper_triangle(4, std::span<const double>(upper, 5), Vector(4, 0.1), 0.1,
                                                        2.0, Vector(4, 1.0), Vector(4, 1.0)),
                    ValidationError);
}

TEST_CASE("laplacian properties on random graphs") {
    std::mt19937_64 rng(kSeed);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const EconomyNetwork net = random_network(rng, n);
        const Matrix lap = build_laplacian(net.weights);
        CHECK(norm_inf(lap * Vector(n, 1.0)) < 1e-15);
        CHECK(asymmetry(system_matrix(net)) == 0.0);
        for (int s = 0; s < 100; ++s) {
            Vector z(n);
            for (double& x : z) x = uniform(rng, -1.0, 1.0);
            CHECK(dot(z, lap * z) <= 1e-15);
        }
    }
}

TEST_CASE("irreducibility agrees with union-find") {
    std::mt19937_64 rng(kSeed + 1);
    int disconnected = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + trial % 8;
        Matrix w(n, n);
        const double density = uniform(rng, 0.05, 0.6);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (uniform(rng, 0.0, 1.0) < density) w(i, j) = w(j, i) = uniform(rng, 0.01, 1.0);
        const bool expected = connected_by_union_find(w);
        disconnected += expected ? 0 : 1;
        CHECK(is_irreducible(w) == expected);
    }
    CHECK(disconnected > 20);
    CHECK(disconnected < 180);
}

}
