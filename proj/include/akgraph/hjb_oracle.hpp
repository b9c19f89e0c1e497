#pragma once

#include "akgraph/execution.hpp"
#include "akgraph/linalg.hpp"
#include "akgraph/network.hpp"
#include "akgraph/planner.hpp"

#include <array>
#include <functional>
#include <span>

namespace akgraph {

inline constexpr std::size_t kMaxOracleDim = 2;

/// Box grid for the semi-Lagrangian solver. Only the first `dim` entries of
/// the per-axis arrays are used; `dim` must equal the network size.
struct GridSpec {
    std::size_t dim = 1;
    std::array<double, kMaxOracleDim> lower{0.0, 0.0};
    std::array<double, kMaxOracleDim> upper{1.0, 1.0};
    std::array<std::size_t, kMaxOracleDim> points{64, 64};

    // Time step; 0 selects cfl * spacing / max drift.
    double h = 0.0;
    double cfl = 1.0;
    std::size_t control_points = 200;  // per axis
    double control_min = 1e-4;
    double control_max = 0.0;          // 0 selects twice the largest feedback consumption on the grid

    double tolerance = 1e-9;           // sup-norm change of an improvement sweep
    std::size_t max_sweeps = 100000;
    std::size_t evaluation_sweeps = 10;  // policy-evaluation sweeps after each improvement sweep

    double spacing(std::size_t axis) const {
        return (upper[axis] - lower[axis]) / static_cast<double>(points[axis] - 1);
    }
    std::size_t node_count() const;
};

/// Uniform `points`-per-axis grid on the same box along every axis.
GridSpec square_grid(std::size_t dim, double lower, double upper, std::size_t points);

struct GridValue {
    GridSpec spec;       // with h and control_max resolved
    Vector values;       // row-major, last axis fastest; -inf where no admissible control exists
    std::size_t improvement_rounds = 0;
    std::size_t sweeps = 0;
    double residual = 0.0;            // sup-norm change of the last improvement sweep
    double control_saturation = 0.0;  // share of nodes whose policy sits on the top control

    double coordinate(std::size_t axis, std::size_t i) const {
        return spec.lower[axis] + static_cast<double>(i) * spec.spacing(axis);
    }
    double at(std::size_t i, std::size_t j = 0) const { return values[i * (spec.dim == 2 ? spec.points[1] : 1) + j]; }
};

/// Value iteration for the state-constrained HJB on a box, n <= 2:
///   V(x) = max_c { h U(c) + e^{-rho h} V(x + h ((L + A) x - N c)) }
/// with multilinear interpolation. Controls pushing any coordinate below the
/// lower bound are excluded; images above the upper bound are clamped.
/// The grid node's own interpolation weight is moved to the left-hand side,
/// which keeps the fixed point and the Jacobi structure of the sweep.
/// Policy improvement alternates with `evaluation_sweeps` fixed-policy sweeps.
///
/// Throws ValidationError for a bad grid or n > 2, AssumptionError if the
/// discounted problem is unbounded, NumericError when the sweep cap is hit.
GridValue solve_hjb_grid(const EconomyNetwork& net, const GridSpec& spec, Execution exec = Execution::parallel);

struct Region {
    std::array<double, kMaxOracleDim> lower{0.0, 0.0};
    std::array<double, kMaxOracleDim> upper{0.0, 0.0};
};

/// The middle half of the grid box along each axis.
Region interior_half(const GridSpec& spec);

struct ComparisonStats {
    double max_rel_err = 0.0;
    double mean_rel_err = 0.0;
    std::size_t nodes = 0;
};

/// Relative error of the grid value against `reference` at grid nodes inside `region`.
ComparisonStats compare_to_reference(const GridValue& gv, const std::function<double(std::span<const double>)>& reference,
                                     const Region& region);

/// Grid value against V_b0 of the plan.
ComparisonStats compare_to_explicit(const GridValue& gv, const ExplicitPlan& plan, const Region& region);

} // namespace akgraph
