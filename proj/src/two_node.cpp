#include "akgraph/two_node.hpp"

#include "akgraph/error.hpp"
#include "akgraph/planner.hpp"
#include "akgraph/spectral.hpp"

#include <cmath>
#include <sstream>

namespace akgraph {

namespace {

constexpr double kBracketLow = 1e-8;
constexpr double kBracketHigh = 1e6;
constexpr double kThresholdTolerance = 1e-8;
constexpr int kScanPerDecade = 200;

void require_positive_weight(double w) {
    if (!(w > 0.0)) throw DomainError("two-node functions need w > 0");
}

double spectral_gap(const TwoNodeInstance& inst, double lambda0) { return inst.rho - lambda0 * (1.0 - inst.gamma); }

double violation(const TwoNodeInstance& inst, double w) {
    return std::max(f12_of_w(inst, w) - w, f21_of_w(inst, w) - w);
}

// Shrinks [lo, hi] around the sign change of `positive_below` (true at lo, false at hi).
template <class Pred>
double bisect(double lo, double hi, Pred&& positive_below) {
    while (hi - lo > kThresholdTolerance) {
        const double mid = 0.5 * (lo + hi);
        (positive_below(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

void check_instance(const TwoNodeInstance& inst) {
    if (!(inst.a1 > 0.0) || !(inst.a2 >= inst.a1)) throw ValidationError("two-node instance needs 0 < A1 <= A2");
    if (!(inst.gamma > 0.0) || inst.gamma == 1.0) throw ValidationError("two-node instance needs gamma > 0, gamma != 1");
    if (!(inst.rho > 0.0)) throw ValidationError("two-node instance needs rho > 0");
    if (!(inst.k1 > 0.0) || !(inst.k2 > 0.0)) throw ValidationError("two-node instance needs k > 0");
    if (!(inst.rho > inst.a2 * (1.0 - inst.gamma))) throw AssumptionError("two-node instance needs rho > A2 (1 - gamma)");
}

EconomyNetwork two_node_network(const TwoNodeInstance& inst, double w) {
    const double upper[] = {w};
    return EconomyNetwork::from_upper_triangle(2, upper, {inst.a1, inst.a2}, inst.rho, inst.gamma, {1.0, 1.0},
                                               {inst.k1, inst.k2});
}

GPsi G_and_Psi(const TwoNodeInstance& inst, double w) {
    require_positive_weight(w);
    const TwoNodeSpectrum s = two_node_closed_form(inst.a1, inst.a2, w);
    GPsi out;
    out.G = inst.a1 == inst.a2 ? 1.0 : s.ratio;
    out.Psi = (inst.rho - s.lambda0) / (inst.rho - inst.a1 * (1.0 - inst.gamma));
    return out;
}

double f12_of_w(const TwoNodeInstance& inst, double w) {
    require_positive_weight(w);
    const TwoNodeSpectrum s = two_node_closed_form(inst.a1, inst.a2, w);
    const double G = inst.a1 == inst.a2 ? 1.0 : s.ratio;
    return spectral_gap(inst, s.lambda0) / (inst.gamma * (1.0 / G + std::pow(G, -1.0 / inst.gamma)));
}

double f21_of_w(const TwoNodeInstance& inst, double w) {
    require_positive_weight(w);
    const TwoNodeSpectrum s = two_node_closed_form(inst.a1, inst.a2, w);
    const double G = inst.a1 == inst.a2 ? 1.0 : s.ratio;
    return spectral_gap(inst, s.lambda0) / (inst.gamma * (std::pow(G, 1.0 / inst.gamma) + G));
}

Thresholds thresholds(const TwoNodeInstance& inst) {
    check_instance(inst);
    if (inst.a1 == inst.a2) {
        const double w = (inst.rho - inst.a1 * (1.0 - inst.gamma)) / (2.0 * inst.gamma);
        return {w, w};
    }
    if (violation(inst, kBracketHigh) > 0.0)
        throw NumericError("thresholds: condition still fails at w = 1e6");

    Thresholds out;
    // f12(w) - w is strictly decreasing, so its root is unique.
    if (f12_of_w(inst, kBracketLow) - kBracketLow <= 0.0)
        out.w_under = kBracketLow;
    else
        out.w_under = bisect(kBracketLow, kBracketHigh, [&](double w) { return f12_of_w(inst, w) - w > 0.0; });

    // Only eventual monotonicity of f21 - w is known, so locate the last
    // violation on a log grid before refining.
    const std::vector<double> grid = log_grid(kBracketLow, kBracketHigh, kScanPerDecade);
    std::size_t idx = grid.size() - 1;
    while (idx > 0 && violation(inst, grid[idx - 1]) <= 0.0) --idx;
    if (idx == 0) {
        out.w_bar = kBracketLow;
    } else {
        out.w_bar = bisect(grid[idx - 1], grid[idx], [&](double w) { return violation(inst, w) > 0.0; });
    }
    return out;
}

std::vector<ProfileRow> value_profile(const TwoNodeInstance& inst, std::span<const double> w_grid) {
    check_instance(inst);
    std::vector<ProfileRow> rows;
    rows.reserve(w_grid.size());
    const double k[] = {inst.k1, inst.k2};
    for (double w : w_grid) {
        require_positive_weight(w);
        const ExplicitPlan plan = build_plan(two_node_network(inst, w));
        rows.push_back({w, plan.lambda0, plan.growth_rate, value_auxiliary(plan, k), plan.condition_holds});
    }
    return rows;
}

std::string_view to_string(TailTrend t) {
    switch (t) {
    case TailTrend::constant: return "constant";
    case TailTrend::decreasing: return "decreasing";
    case TailTrend::eventually_decreasing: return "eventually-decreasing";
    case TailTrend::eventually_increasing: return "eventually-increasing";
    case TailTrend::undetermined: return "undetermined";
    }
    return "undetermined";
}

double x_bar(const TwoNodeInstance& inst) {
    if (inst.a1 == inst.a2) throw DomainError("x_bar: undefined for A1 = A2");
    return -1.0 / inst.g_infinity() + (inst.k2 - inst.k1) / (inst.mean_capital() * (inst.a2 - inst.a1));
}

TailTrend classify_tail(const TwoNodeInstance& inst) {
    check_instance(inst);
    if (inst.a1 == inst.a2) return TailTrend::constant;
    if (inst.k1 <= inst.k2) return TailTrend::decreasing;
    const double x = x_bar(inst);
    if (x > 0.0) return TailTrend::eventually_decreasing;
    if (x < 0.0) return TailTrend::eventually_increasing;
    return TailTrend::undetermined;
}

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) throw DomainError("log_grid: need 0 < lo < hi");
    const double decades = std::log10(hi / lo);
    const auto count = static_cast<std::size_t>(std::ceil(decades * per_decade - 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(count - 1));
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

} // namespace akgraph
