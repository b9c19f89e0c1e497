#pragma once

#include "akgraph/network.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace akgraph {

/// Two regions joined by one edge of weight w, with p = (1, 1).
struct TwoNodeInstance {
    double a1 = 0.0;  // A1 <= A2
    double a2 = 0.0;
    double rho = 0.0;
    double gamma = 0.0;
    double k1 = 1.0;
    double k2 = 1.0;

    double mean_technology() const { return 0.5 * (a1 + a2); }
    double mean_capital() const { return 0.5 * (k1 + k2); }
    // Long-run growth rate as w -> infinity.
    double g_infinity() const { return (mean_technology() * (1.0 - gamma) - rho) / gamma; }
};

/// Throws ValidationError / AssumptionError unless 0 < A1 <= A2,
/// rho > A2 (1 - gamma), gamma > 0, gamma != 1 and k > 0.
void check_instance(const TwoNodeInstance& inst);

EconomyNetwork two_node_network(const TwoNodeInstance& inst, double w);

struct GPsi {
    double G = 1.0;    // b0_2 / b0_1
    double Psi = 0.0;  // (rho - lambda0) / (rho - A1 (1 - gamma))
};

GPsi G_and_Psi(const TwoNodeInstance& inst, double w);

/// Feedback entries as functions of the weight:
/// f12 = D / (gamma (G^{-1} + G^{-1/gamma})), f21 = D / (gamma (G^{1/gamma} + G)),
/// D = rho - lambda0(w)(1 - gamma).
double f12_of_w(const TwoNodeInstance& inst, double w);
double f21_of_w(const TwoNodeInstance& inst, double w);

struct Thresholds {
    double w_bar = 0.0;    // condition holds for every w >= w_bar
    double w_under = 0.0;  // f12(w) > w for every w < w_under
};

/// Thresholds located in [1e-8, 1e6] to 1e-8. NumericError if the
/// condition still fails at the top of the bracket.
Thresholds thresholds(const TwoNodeInstance& inst);

struct ProfileRow {
    double w = 0.0;
    double lambda0 = 0.0;
    double g = 0.0;
    double value = 0.0;  // V_b0(w; k); equals V only where condition_holds
    bool condition_holds = false;
};

/// Rows in the order of `w_grid`.
std::vector<ProfileRow> value_profile(const TwoNodeInstance& inst, std::span<const double> w_grid);

enum class TailTrend { constant, decreasing, eventually_decreasing, eventually_increasing, undetermined };

std::string_view to_string(TailTrend t);

/// Limit of X(w) as w -> infinity; V_b0 eventually decreases when positive.
/// X_bar = -1/g_inf + (k2 - k1) / (kbar (A2 - A1)).
double x_bar(const TwoNodeInstance& inst);

/// Long-run monotonicity of w -> V(w; k). For k1 > k2 the sign of X_bar decides.
TailTrend classify_tail(const TwoNodeInstance& inst);

/// `per_decade` log-spaced points on [lo, hi], both ends included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

} // namespace akgraph
