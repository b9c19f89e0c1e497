#pragma once

#include "akgraph/linalg.hpp"
#include "akgraph/network.hpp"
#include "akgraph/planner.hpp"
#include "akgraph/spectral.hpp"

#include <functional>
#include <span>
#include <vector>

namespace akgraph {

// States in [-kStateTolerance, 0) count as zero; anything lower is a breach
// of the positivity constraint.
inline constexpr double kStateTolerance = 1e-10;
// Growth rates are undefined where K_i falls below this.
inline constexpr double kGrowthFloor = 1e-14;

inline constexpr double kDefaultDt = 0.01;
inline constexpr double kDefaultHorizon = 1000.0;

struct Trajectory {
    Vector times;
    std::vector<Vector> states;
    std::vector<Vector> controls;
    std::vector<Vector> growth_rates;  // NaN where undefined
    double breakdown_time = kInfinity; // first sampled time with min K < -kStateTolerance

    std::size_t size() const { return times.size(); }
};

using ControlPath = std::function<Vector(double t)>;
using FeedbackLaw = std::function<Vector(double t, std::span<const double> state)>;

/// Classical RK4 for K' = (L + A) K - N C(t) on the uniform grid j*dt, j*dt <= T.
/// Throws NumericError naming the time if the state stops being finite.
Trajectory integrate_state(const EconomyNetwork& net, std::span<const double> k, const ControlPath& control,
                           double horizon, double dt);

/// Same with consumption given as a feedback C(t, K), evaluated at every RK stage.
Trajectory integrate_feedback(const EconomyNetwork& net, std::span<const double> k, const FeedbackLaw& law,
                              double horizon, double dt);

/// The explicit optimal path sampled on j*dt from its closed form.
Trajectory sample_closed_loop(const EconomyNetwork& net, const ExplicitPlan& plan, std::span<const double> k,
                              double horizon, double dt);

/// Optimal paths of an edgeless network sampled on j*dt.
Trajectory sample_uncoupled(const EconomyNetwork& net, std::span<const double> k, double horizon, double dt);

/// g_i(t_j) = [(L + A) K - N C]_i / K_i with K clamped to 0 inside the
/// roundoff band; NaN where K_i <= kGrowthFloor.
std::vector<Vector> regional_growth_rates(const EconomyNetwork& net, const Trajectory& traj);

/// First time in (0, T_max] at which the explicit closed-loop path leaves the
/// orthant, from a 0.01 scan refined by bisection to 1e-6. +inf if it never does.
double breakdown_time(const ExplicitPlan& plan, std::span<const double> k, double t_max);

/// Earliest sampled time after which every g_i stays strictly inside
/// (g(1 - band), g(1 + band)). NaN entries count as outside. +inf if never.
double convergence_time(const Trajectory& traj, double g, double band_fraction);

struct BudgetCheck {
    double lhs = 0.0;        // int_0^T e^{-lambda0 s} ||C(s)|| ds over the admissible prefix
    double rhs = 0.0;        // <k, b0> / min_i [N^T b0]_i
    bool admissible = true;  // no state fell below -kStateTolerance
    bool ok = true;          // admissible && lhs <= rhs + 1e-8
};

/// Budget bound on the discounted consumption of an admissible control.
BudgetCheck control_budget_check(const EconomyNetwork& net, const FrobeniusPair& frob, const Trajectory& traj);

} // namespace akgraph
