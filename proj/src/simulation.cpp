#include "akgraph/simulation.hpp"

#include "akgraph/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace akgraph {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kScanStep = 0.01;
constexpr double kBisectionTolerance = 1e-6;

std::size_t step_count(double horizon, double dt) {
    if (!(horizon > 0.0) || !(dt > 0.0)) throw DomainError("horizon and dt must be positive");
    return static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
}

Vector drift(const Matrix& m, const Matrix& n_op, std::span<const double> k, std::span<const double> c) {
    Vector out = m * k;
    const Vector nc = n_op * c;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= nc[i];
    return out;
}

void check_finite(std::span<const double> k, double t) {
    for (double x : k)
        if (!std::isfinite(x)) {
            std::ostringstream os;
            os << "state became non-finite at t = " << t;
            throw NumericError(os.str());
        }
}

double min_of(std::span<const double> v) { return *std::min_element(v.begin(), v.end()); }

void finish(const EconomyNetwork& net, Trajectory& traj) {
    traj.growth_rates = regional_growth_rates(net, traj);
    traj.breakdown_time = kInfinity;
    for (std::size_t j = 0; j < traj.size(); ++j)
        if (min_of(traj.states[j]) < -kStateTolerance) {
            traj.breakdown_time = traj.times[j];
            break;
        }
}

template <class Consumption>
Trajectory rk4(const EconomyNetwork& net, std::span<const double> k, Consumption&& consumption, double horizon,
               double dt) {
    const std::size_t steps = step_count(horizon, dt);
    if (k.size() != net.size()) throw ValidationError("initial capital has the wrong length");
    const Matrix m = system_matrix(net);
    const Matrix n_op = net.consumption_matrix();

    Trajectory traj;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.controls.reserve(steps + 1);

    Vector state(k.begin(), k.end());
    for (std::size_t j = 0;; ++j) {
        const double t = static_cast<double>(j) * dt;
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.controls.push_back(consumption(t, state));
        if (j == steps) break;

        const double h = dt;
        const Vector k1 = drift(m, n_op, state, traj.controls.back());
        const Vector s2 = state + (0.5 * h) * k1;
        const Vector k2 = drift(m, n_op, s2, consumption(t + 0.5 * h, s2));
        const Vector s3 = state + (0.5 * h) * k2;
        const Vector k3 = drift(m, n_op, s3, consumption(t + 0.5 * h, s3));
        const Vector s4 = state + h * k3;
        const Vector k4 = drift(m, n_op, s4, consumption(t + h, s4));
        for (std::size_t i = 0; i < state.size(); ++i)
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        check_finite(state, t + h);
    }
    finish(net, traj);
    return traj;
}

// Closed-loop path in eigen-coordinates, evaluated without allocation:
// <K, b0> = a0 e^{gt}, x_m = a_m e^{lambda_m t} - c_m (e^{gt} - e^{lambda_m t})/(g - lambda_m).
class ModalPath {
public:
    ModalPath(const ExplicitPlan& plan, std::span<const double> k)
        : n_(plan.size()), g_(plan.growth_rate), basis_(plan.spectral.eigenvectors),
          lambdas_(plan.spectral.eigenvalues), start_(n_), drain_(n_, 0.0), coord_(n_) {
        basis_.set_column(0, plan.b0);
        for (std::size_t m = 0; m < n_; ++m) {
            const Vector bm = basis_.column(m);
            start_[m] = dot(k, bm);
        }
        for (std::size_t m = 1; m < n_; ++m) drain_[m] = plan.betas[m - 1] * start_[0] / plan.alpha;
    }

    double min_component(double t) {
        coord_[0] = start_[0] * std::exp(g_ * t);
        for (std::size_t m = 1; m < n_; ++m) {
            const double d = g_ - lambdas_[m];
            const double el = std::exp(lambdas_[m] * t);
            const double q = d == 0.0 ? t * el : el * std::expm1(d * t) / d;
            coord_[m] = start_[m] * el - drain_[m] * q;
        }
        double lo = kInfinity;
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t m = 0; m < n_; ++m) s += basis_(i, m) * coord_[m];
            lo = std::min(lo, s);
        }
        return lo;
    }

private:
    std::size_t n_;
    double g_;
    Matrix basis_;
    Vector lambdas_;
    Vector start_;
    Vector drain_;
    Vector coord_;
};

} // namespace

Trajectory integrate_state(const EconomyNetwork& net, std::span<const double> k, const ControlPath& control,
                           double horizon, double dt) {
    return rk4(net, k, [&control](double t, std::span<const double>) { return control(t); }, horizon, dt);
}

Trajectory integrate_feedback(const EconomyNetwork& net, std::span<const double> k, const FeedbackLaw& law,
                              double horizon, double dt) {
    return rk4(net, k, [&law](double t, std::span<const double> s) { return law(t, s); }, horizon, dt);
}

Trajectory sample_closed_loop(const EconomyNetwork& net, const ExplicitPlan& plan, std::span<const double> k,
                              double horizon, double dt) {
    const std::size_t steps = step_count(horizon, dt);
    Trajectory traj;
    for (std::size_t j = 0; j <= steps; ++j) {
        const double t = static_cast<double>(j) * dt;
        traj.times.push_back(t);
        traj.states.push_back(j == 0 ? Vector(k.begin(), k.end()) : closed_loop_state(plan, k, t));
        traj.controls.push_back(optimal_control_path(plan, k, t));
    }
    finish(net, traj);
    return traj;
}

Trajectory sample_uncoupled(const EconomyNetwork& net, std::span<const double> k, double horizon, double dt) {
    const std::size_t steps = step_count(horizon, dt);
    Trajectory traj;
    for (std::size_t j = 0; j <= steps; ++j) {
        const double t = static_cast<double>(j) * dt;
        auto [kt, ct] = uncoupled_paths(net, k, t);
        traj.times.push_back(t);
        traj.states.push_back(std::move(kt));
        traj.controls.push_back(std::move(ct));
    }
    finish(net, traj);
    return traj;
}

std::vector<Vector> regional_growth_rates(const EconomyNetwork& net, const Trajectory& traj) {
    const Matrix m = system_matrix(net);
    const Matrix n_op = net.consumption_matrix();
    std::vector<Vector> rates;
    rates.reserve(traj.size());
    for (std::size_t j = 0; j < traj.size(); ++j) {
        Vector state = traj.states[j];
        for (double& x : state)
            if (x < 0.0 && x >= -kStateTolerance) x = 0.0;
        const Vector rhs = drift(m, n_op, state, traj.controls[j]);
        Vector g(state.size());
        for (std::size_t i = 0; i < state.size(); ++i) g[i] = state[i] > kGrowthFloor ? rhs[i] / state[i] : kNaN;
        rates.push_back(std::move(g));
    }
    return rates;
}

double breakdown_time(const ExplicitPlan& plan, std::span<const double> k, double t_max) {
    if (!(t_max > 0.0)) throw DomainError("breakdown_time: T_max must be positive");
    if (!(dot(k, plan.b0) > 0.0)) throw DomainError("breakdown_time: <k, b0> must be positive");
    ModalPath path(plan, k);
    auto outside = [&path](double t) { return path.min_component(t) < -kStateTolerance; };

    double lo = 0.0;
    double hi = kInfinity;
    for (std::size_t j = 1;; ++j) {
        const double t = std::min(static_cast<double>(j) * kScanStep, t_max);
        if (outside(t)) {
            hi = t;
            break;
        }
        lo = t;
        if (t >= t_max) return kInfinity;
    }
    while (hi - lo > kBisectionTolerance) {
        const double mid = 0.5 * (lo + hi);
        (outside(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double convergence_time(const Trajectory& traj, double g, double band_fraction) {
    if (!(band_fraction > 0.0 && band_fraction < 1.0)) throw DomainError("band fraction must lie in (0, 1)");
    const double radius = band_fraction * std::abs(g);
    auto inside = [&](const Vector& rates) {
        for (double r : rates)
            if (!(std::abs(r - g) < radius)) return false;
        return true;
    };
    std::size_t first = traj.size();
    while (first > 0 && inside(traj.growth_rates[first - 1])) --first;
    return first == traj.size() ? kInfinity : traj.times[first];
}

BudgetCheck control_budget_check(const EconomyNetwork& net, const FrobeniusPair& frob, const Trajectory& traj) {
    const Matrix n_op = net.consumption_matrix();
    double chi = kInfinity;
    for (std::size_t j = 0; j < n_op.cols(); ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n_op.rows(); ++i) s += n_op(i, j) * frob.b0[i];
        chi = std::min(chi, s);
    }
    if (!(chi > 0.0)) throw DomainError("control_budget_check: min [N^T b0] must be positive");

    BudgetCheck out;
    out.rhs = dot(traj.states.front(), frob.b0) / chi;
    std::size_t end = traj.size();
    for (std::size_t j = 0; j < traj.size(); ++j)
        if (min_of(traj.states[j]) < -kStateTolerance) {
            out.admissible = false;
            end = j;
            break;
        }
    auto integrand = [&](std::size_t j) { return std::exp(-frob.lambda0 * traj.times[j]) * norm2(traj.controls[j]); };
    for (std::size_t j = 1; j < end; ++j)
        out.lhs += 0.5 * (traj.times[j] - traj.times[j - 1]) * (integrand(j) + integrand(j - 1));
    out.ok = out.admissible && out.lhs <= out.rhs + 1e-8;
    return out;
}

} // namespace akgraph
