#include "support.hpp"

#include "akgraph/error.hpp"
#include "akgraph/simulation.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

using namespace akgraph;
using namespace testing;

namespace {

Vector expm_apply(const Matrix& b, const Vector& k, double t) {
    const Eigen::MatrixXd e = (to_eigen(b) * t).exp();
    Eigen::VectorXd kv(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) kv[static_cast<Eigen::Index>(i)] = k[i];
    return from_eigen(e * kv);
}

ControlPath zero_control(std::size_t n) {
    return [n](double) { return Vector(n, 0.0); };
}

FeedbackLaw optimal_feedback(const ExplicitPlan& plan) {
    return [&plan](double, std::span<const double> k) { return plan.feedback * k; };
}

double rk4_error(const EconomyNetwork& net, const ExplicitPlan& plan, double dt) {
    const Trajectory tr = integrate_feedback(net, net.initial_capital, optimal_feedback(plan), 20.0, dt);
    return max_abs_diff(tr.states.back(), closed_loop_state(plan, net.initial_capital, tr.times.back()));
}

} // namespace

TEST_SUITE("simulation") {

TEST_CASE("scalar growth without consumption") {
    const double none[] = {0.0};
    const auto net = EconomyNetwork::from_upper_triangle(1, std::span<const double>(none, 0), {0.1}, 0.03, 3.0,
                                                         {1.0}, {1.0});
    const Trajectory tr = integrate_state(net, Vector{1.0}, zero_control(1), 1.0, 0.01);
    REQUIRE(tr.size() == 101);
    CHECK(tr.times.back() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tr.states.back()[0] == doctest::Approx(std::exp(0.1)).epsilon(1e-12));
}

TEST_CASE("zero consumption follows the matrix exponential") {
    const EconomyNetwork net = three_regions();
    const Trajectory tr = integrate_state(net, Vector{1.0, 0.5, 2.0}, zero_control(3), 10.0, 0.01);
    const Vector ref = expm_apply(system_matrix(net), Vector{1.0, 0.5, 2.0}, 10.0);
    CHECK(max_abs_diff(tr.states.back(), ref) < 1e-10);
}

TEST_CASE("zero consumption keeps capital positive") {
    std::mt19937_64 rng(kSeed + 20);
    for (int trial = 0; trial < 100; ++trial) {
        const EconomyNetwork net = random_network(rng, 2 + trial % 6);
        const Trajectory tr = integrate_state(net, net.initial_capital, zero_control(net.size()), 50.0, 0.05);
        CHECK(tr.breakdown_time == kInfinity);
        double lowest = kInfinity;
        for (const Vector& s : tr.states) lowest = std::min(lowest, *std::min_element(s.begin(), s.end()));
        CHECK(lowest > 0.0);
    }
}

TEST_CASE("RK4 reproduces the explicit closed loop") {
    const EconomyNetwork net = three_regions();
    const ExplicitPlan plan = build_plan(net);
    const Trajectory tr = integrate_feedback(net, net.initial_capital, optimal_feedback(plan), 100.0, 0.01);
    double err = 0.0;
    for (std::size_t j = 0; j < tr.size(); j += 100)
        err = std::max(err, max_abs_diff(tr.states[j], closed_loop_state(plan, net.initial_capital, tr.times[j])));
    CHECK(err < 1e-7);

    const double ratio = rk4_error(net, plan, 0.4) / rk4_error(net, plan, 0.2);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("non-finite states are reported") {
    const EconomyNetwork net = three_regions();
    const ControlPath blowup = [](double t) { return Vector(3, t > 0.5 ? std::nan("") : 0.0); };
    CHECK_THROWS_AS(integrate_state(net, net.initial_capital, blowup, 1.0, 0.1), NumericError);
}

TEST_CASE("breakdown time") {
    CHECK(breakdown_time(build_plan(three_regions()), Vector{1, 1, 1}, 1000.0) == kInfinity);

    const EconomyNetwork weak = three_regions(0.02, {1.0, 0.1, 0.05});
    const ExplicitPlan plan = build_plan(weak);
    const double t = breakdown_time(plan, weak.initial_capital, 1000.0);
    CHECK(t == doctest::Approx(9.02953033447).epsilon(2e-7));
    const Vector before = closed_loop_state(plan, weak.initial_capital, t - 1e-5);
    const Vector after = closed_loop_state(plan, weak.initial_capital, t + 1e-5);
    CHECK(*std::min_element(before.begin(), before.end()) > -kStateTolerance);
    CHECK(*std::min_element(after.begin(), after.end()) < -kStateTolerance);

    const Trajectory tr = sample_closed_loop(weak, plan, weak.initial_capital, 20.0, 0.01);
    CHECK(tr.breakdown_time == doctest::Approx(9.03).epsilon(1e-12));

    // Sweep behaviour near the threshold, with a 300 horizon.
    const Vector ones{1, 1, 1};
    CHECK(breakdown_time(build_plan(three_regions(0.015)), ones, 300.0) == doctest::Approx(203.208).epsilon(1e-5));
    CHECK(breakdown_time(build_plan(three_regions(0.0155)), ones, 300.0) == doctest::Approx(253.014).epsilon(1e-5));
    CHECK(breakdown_time(build_plan(three_regions(0.016)), ones, 300.0) == kInfinity);
    CHECK(breakdown_time(build_plan(three_regions(0.016)), ones, 1000.0) < 1000.0);
    CHECK(breakdown_time(build_plan(three_regions(0.0165)), ones, 1e4) == kInfinity);
}

TEST_CASE("growth rates and convergence") {
    const EconomyNetwork net = three_regions();
    const ExplicitPlan plan = build_plan(net);
    const Trajectory tr = sample_closed_loop(net, plan, net.initial_capital, 1000.0, 0.01);
    REQUIRE(tr.growth_rates.size() == tr.size());
    for (double gi : tr.growth_rates.back()) CHECK(gi == doctest::Approx(plan.growth_rate).epsilon(1e-9));

    const double tc = convergence_time(tr, plan.growth_rate, 0.01);
    CHECK(tc == doctest::Approx(81.73).epsilon(1e-12));
    const std::size_t j = static_cast<std::size_t>(std::llround(tc / 0.01));
    for (std::size_t m = j; m < tr.size(); m += 500)
        for (double gi : tr.growth_rates[m]) CHECK(std::abs(gi - plan.growth_rate) < 0.01 * plan.growth_rate);
    bool outside = false;
    for (double gi : tr.growth_rates[j - 1]) outside = outside || std::abs(gi - plan.growth_rate) >= 0.01 * plan.growth_rate;
    CHECK(outside);

    // Growth rates from the integrated path agree with the closed form.
    const Trajectory rk = integrate_feedback(net, net.initial_capital, optimal_feedback(plan), 5.0, 0.01);
    const auto g = regional_growth_rates(net, rk);
    CHECK(max_abs_diff(g.back(), tr.growth_rates[500]) < 1e-9);
}

TEST_CASE("uncoupled growth rates never merge") {
    const double zeros[] = {0.0, 0.0, 0.0};
    const double third = 1.0 / 3.0;
    const auto iso = EconomyNetwork::from_upper_triangle(3, zeros, {0.10, 0.12, 0.08}, 0.03, 3.0,
                                                         {third, third, third}, {1.0, 1.0, 1.0});
    const Trajectory tr = sample_uncoupled(iso, iso.initial_capital, 100.0, 0.1);
    const Vector g = uncoupled_growth_rates(iso);
    for (const Vector& row : tr.growth_rates) CHECK(max_abs_diff(row, g) < 1e-12);
    CHECK(convergence_time(tr, 0.09 / 3.0, 0.01) == kInfinity);
}

TEST_CASE("growth rate is undefined at zero capital") {
    Trajectory tr;
    tr.times = {0.0};
    tr.states = {Vector{1.0, -1e-12, 0.0}};
    tr.controls = {Vector{0.0, 0.0, 0.0}};
    const auto g = regional_growth_rates(three_regions(), tr);
    CHECK(std::isfinite(g[0][0]));
    CHECK(std::isnan(g[0][1]));
    CHECK(std::isnan(g[0][2]));
}

TEST_CASE("consumption budget") {
    const EconomyNetwork net = three_regions();
    const ExplicitPlan plan = build_plan(net);
    const FrobeniusPair frob{plan.lambda0, plan.b0};
    const Vector& k = net.initial_capital;

    const BudgetCheck idle = control_budget_check(net, frob, integrate_state(net, k, zero_control(3), 50.0, 0.1));
    CHECK(idle.lhs == 0.0);
    CHECK(idle.ok);
    CHECK(idle.rhs == doctest::Approx(dot(k, plan.b0) / *std::min_element(plan.b0.begin(), plan.b0.end())));

    const BudgetCheck opt = control_budget_check(net, frob, sample_closed_loop(net, plan, k, 1000.0, 0.01));
    CHECK(opt.admissible);
    CHECK(opt.ok);
    // Consumption grows at g, so the discounted integral is ||C(0)|| / (lambda0 - g).
    const double c0 = norm2(optimal_control_path(plan, k, 0.0));
    CHECK(opt.lhs == doctest::Approx(c0 / (plan.lambda0 - plan.growth_rate)).epsilon(1e-6));

    const ControlPath doubled = [&](double t) { return 2.0 * optimal_control_path(plan, k, t); };
    const BudgetCheck greedy = control_budget_check(net, frob, integrate_state(net, k, doubled, 200.0, 0.01));
    CHECK_FALSE(greedy.admissible);
    CHECK_FALSE(greedy.ok);

    std::mt19937_64 rng(kSeed + 21);
    for (int trial = 0; trial < 30; ++trial) {
        const EconomyNetwork r = random_network(rng, 2 + trial % 4);
        const ExplicitPlan rp = build_plan(r);
        Vector d(r.size()), phase(r.size());
        for (std::size_t i = 0; i < r.size(); ++i) {
            d[i] = uniform(rng, 0.0, 0.5);
            phase[i] = uniform(rng, 0.0, 6.28);
        }
        const FeedbackLaw law = [&](double t, std::span<const double> s) {
            Vector c(s.size());
            for (std::size_t i = 0; i < s.size(); ++i) c[i] = d[i] * (1.0 + 0.5 * std::sin(t + phase[i])) * s[i];
            return c;
        };
        const BudgetCheck bc =
            control_budget_check(r, FrobeniusPair{rp.lambda0, rp.b0}, integrate_feedback(r, r.initial_capital, law, 200.0, 0.05));
        CHECK(bc.admissible);
        CHECK(bc.ok);
    }
}

}
