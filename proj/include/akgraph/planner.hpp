#pragma once

#include "akgraph/linalg.hpp"
#include "akgraph/network.hpp"
#include "akgraph/spectral.hpp"

#include <limits>
#include <span>
#include <utility>

namespace akgraph {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Tolerance on w_ij - f_ij when deciding the admissibility condition.
inline constexpr double kConditionTolerance = 1e-12;

/// Explicit solution of the auxiliary (half-space constrained) problem.
///
/// With b0 the unit Frobenius eigenvector of M = L + A:
///   alpha = gamma Phi(b0) / (rho - lambda0 (1 - gamma))
///   F     = (1/alpha) c(b0) b0^T,  c(b0)_i = (p_i / b0_i)^{1/gamma}
///   g     = (lambda0 - rho) / gamma
/// and the closed loop K' = (M - F) K.
struct ExplicitPlan {
    double lambda0 = 0.0;
    Vector b0;
    double phi = 0.0;
    double alpha = 0.0;
    double growth_rate = 0.0;
    double rho = 0.0;
    double gamma = 0.0;
    Vector pref_weights;

    Matrix system;    // M = L + A
    Matrix feedback;  // F
    bool condition_holds = false;
    Matrix condition_margins;  // w_ij - f_ij off the diagonal, 0 on it
    double min_margin = 0.0;   // +inf for n = 1

    SpectralDecomposition spectral;
    Vector betas;            // beta_m = <c(b0), b^m>, m = 1..n-1
    bool g_dominant = false; // g > lambda1 (always true for n = 1)
    Vector steady_direction; // y = alpha b0 + sum beta_m/(lambda_m - g) b^m; empty unless g_dominant

    std::size_t size() const { return b0.size(); }
};

/// H(q) = sup_{c >= 0} { U(c) - <N c, q> }. Returns +inf if some q_i <= 0.
/// gamma = 1 uses the logarithmic branch.
double hamiltonian(std::span<const double> q, double gamma, std::span<const double> p, const Matrix& n_op);

/// The maximising consumption c_i = (p_i / [N^T q]_i)^{1/gamma}.
/// Throws DomainError unless q is strictly positive.
Vector hamiltonian_maximizer(std::span<const double> q, double gamma, std::span<const double> p,
                             const Matrix& n_op);

/// Phi(u) = sum p_i^{1/gamma} u_i^{(gamma-1)/gamma}.
double phi(std::span<const double> u, double gamma, std::span<const double> p);

/// sum_i p_i u_gamma(c_i), with u_gamma the CRRA (or log) utility.
double utility(std::span<const double> c, double gamma, std::span<const double> p);

/// ||M u - [rho/(1-gamma) - mu Phi(u)] u||. Zero certifies a solution of the
/// nonlinear eigenproblem behind the power-function ansatz.
double nonlinear_eig_residual(double mu, std::span<const double> u, const EconomyNetwork& net);

/// The multiplier mu = (rho/(1-gamma) - lambda0) / Phi(b0) paired with b0.
double particular_mu(const EconomyNetwork& net, double lambda0, std::span<const double> b0);

// Building blocks of the plan. They accept b0 at any positive scale; the
// quantities derived from them do not depend on that scale.
double plan_alpha(const EconomyNetwork& net, double lambda0, std::span<const double> b0);
Matrix feedback_matrix(std::span<const double> p, double gamma, double alpha, std::span<const double> b0);
double value_b0(double alpha, double gamma, std::span<const double> b0, std::span<const double> k);

/// Throws ValidationError for gamma = 1 or a reducible network,
/// AssumptionError if rho <= lambda0 (1 - gamma).
ExplicitPlan build_plan(const EconomyNetwork& net, const SpectralDecomposition& spectral);
ExplicitPlan build_plan(const EconomyNetwork& net);

/// V_b0(k) = alpha^gamma / (1-gamma) <k, b0>^{1-gamma}. DomainError if <k,b0> <= 0.
double value_auxiliary(const ExplicitPlan& plan, std::span<const double> k);
/// DV_b0(k) = alpha^gamma <k, b0>^{-gamma} b0.
Vector value_gradient(const ExplicitPlan& plan, std::span<const double> k);

/// Ramsey value summed over isolated nodes. Requires all weights zero and
/// rho > A_i (1 - gamma) for every i.
double value_uncoupled(const EconomyNetwork& net, std::span<const double> k);
Vector uncoupled_growth_rates(const EconomyNetwork& net);
/// (K(t), C(t)) for isolated nodes.
std::pair<Vector, Vector> uncoupled_paths(const EconomyNetwork& net, std::span<const double> k, double t);

/// Optimal closed-loop state K(t) from the steady-direction formula. Requires g > lambda1.
Vector closed_loop_trajectory(const ExplicitPlan& plan, std::span<const double> k, double t);

/// Same path from the modal solution of K' = (M - F) K, valid for any g.
/// Coincides with closed_loop_trajectory when g > lambda1.
Vector closed_loop_state(const ExplicitPlan& plan, std::span<const double> k, double t);

/// C_i(t) = (1/alpha)(p_i/b0_i)^{1/gamma} <k,b0> e^{gt} = [F K(t)]_i.
Vector optimal_control_path(const ExplicitPlan& plan, std::span<const double> k, double t);

/// lim e^{-gt} K(t) = (<k,b0>/alpha) y. Requires g > lambda1.
Vector steady_state(const ExplicitPlan& plan, std::span<const double> k);

/// J of the optimal consumption in closed form.
double gain_of_optimal(const ExplicitPlan& plan, std::span<const double> k);

} // namespace akgraph
