#include "akgraph/planner.hpp"

#include "akgraph/error.hpp"

#include <cmath>
#include <sstream>

namespace akgraph {

namespace {

Vector transpose_apply(const Matrix& n_op, std::span<const double> q) {
    Vector r(n_op.cols(), 0.0);
    for (std::size_t i = 0; i < n_op.rows(); ++i)
        for (std::size_t j = 0; j < n_op.cols(); ++j) r[j] += n_op(i, j) * q[i];
    return r;
}

double projection(std::span<const double> k, std::span<const double> b0) {
    const double s = dot(k, b0);
    if (!(s > 0.0)) {
        std::ostringstream os;
        os << "<k, b0> = " << s << " is not positive";
        throw DomainError(os.str());
    }
    return s;
}

// c(b0)_i = (p_i / b0_i)^{1/gamma}
Vector consumption_direction(std::span<const double> p, double gamma, std::span<const double> b0) {
    Vector c(b0.size());
    for (std::size_t i = 0; i < b0.size(); ++i) c[i] = std::pow(p[i] / b0[i], 1.0 / gamma);
    return c;
}

void require_dominant(const ExplicitPlan& plan, const char* what) {
    if (!plan.g_dominant) {
        std::ostringstream os;
        os << what << ": requires g > lambda1 (g = " << plan.growth_rate << ", lambda1 = "
           << plan.spectral.eigenvalues[1] << ")";
        throw DomainError(os.str());
    }
}

// (e^{a t} - e^{b t}) / (a - b), continuous at a = b.
double exp_difference_quotient(double a, double b, double t) {
    const double d = a - b;
    if (d == 0.0) return t * std::exp(b * t);
    return std::exp(b * t) * std::expm1(d * t) / d;
}

} // namespace

double hamiltonian(std::span<const double> q, double gamma, std::span<const double> p, const Matrix& n_op) {
    for (double qi : q)
        if (!(qi > 0.0)) return kInfinity;
    const Vector r = transpose_apply(n_op, q);
    double h = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0)) return kInfinity;
        if (gamma == 1.0)
            h += p[i] * (std::log(p[i] / r[i]) - 1.0);
        else
            h += std::pow(p[i], 1.0 / gamma) * std::pow(r[i], 1.0 - 1.0 / gamma);
    }
    return gamma == 1.0 ? h : gamma / (1.0 - gamma) * h;
}

Vector hamiltonian_maximizer(std::span<const double> q, double gamma, std::span<const double> p,
                             const Matrix& n_op) {
    for (double qi : q)
        if (!(qi > 0.0)) throw DomainError("hamiltonian_maximizer: q must be strictly positive");
    const Vector r = transpose_apply(n_op, q);
    Vector c(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0)) throw DomainError("hamiltonian_maximizer: [N^T q] has a nonpositive entry");
        c[i] = std::pow(p[i] / r[i], 1.0 / gamma);
    }
    return c;
}

double phi(std::span<const double> u, double gamma, std::span<const double> p) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0)) throw DomainError("phi: u must be strictly positive");
        s += std::pow(p[i], 1.0 / gamma) * std::pow(u[i], (gamma - 1.0) / gamma);
    }
    return s;
}

double utility(std::span<const double> c, double gamma, std::span<const double> p) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
        s += gamma == 1.0 ? p[i] * std::log(c[i]) : p[i] * std::pow(c[i], 1.0 - gamma) / (1.0 - gamma);
    return s;
}

double nonlinear_eig_residual(double mu, std::span<const double> u, const EconomyNetwork& net) {
    if (!(mu * (1.0 - net.gamma) > 0.0)) throw DomainError("nonlinear_eig_residual: need mu (1 - gamma) > 0");
    const Matrix m = system_matrix(net);
    const double shift = net.rho / (1.0 - net.gamma) - mu * phi(u, net.gamma, net.pref_weights);
    Vector r = m * u;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= shift * u[i];
    return norm2(r);
}

double particular_mu(const EconomyNetwork& net, double lambda0, std::span<const double> b0) {
    return (net.rho / (1.0 - net.gamma) - lambda0) / phi(b0, net.gamma, net.pref_weights);
}

double plan_alpha(const EconomyNetwork& net, double lambda0, std::span<const double> b0) {
    const double denom = net.rho - lambda0 * (1.0 - net.gamma);
    if (!(denom > 0.0)) {
        std::ostringstream os;
        os << "rho - lambda0 (1 - gamma) = " << denom << " must be positive";
        throw AssumptionError(os.str());
    }
    return net.gamma * phi(b0, net.gamma, net.pref_weights) / denom;
}

Matrix feedback_matrix(std::span<const double> p, double gamma, double alpha, std::span<const double> b0) {
    const Vector c = consumption_direction(p, gamma, b0);
    const std::size_t n = b0.size();
    Matrix f(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) f(i, j) = c[i] * b0[j] / alpha;
    return f;
}

double value_b0(double alpha, double gamma, std::span<const double> b0, std::span<const double> k) {
    const double s = projection(k, b0);
    return std::pow(alpha, gamma) / (1.0 - gamma) * std::pow(s, 1.0 - gamma);
}

ExplicitPlan build_plan(const EconomyNetwork& net, const SpectralDecomposition& spectral) {
    const auto violations = validate(net);
    if (!violations.empty()) throw ValidationError("invalid network: " + violations.front().to_string());
    if (!net.has_identity_consumption())
        throw ValidationError("explicit solution requires the identity consumption operator");
    const std::size_t n = net.size();
    if (spectral.size() != n) throw ValidationError("spectral decomposition does not match network size");

    const FrobeniusPair fp = frobenius_pair(spectral, net.technology);
    ExplicitPlan plan;
    plan.lambda0 = fp.lambda0;
    plan.b0 = fp.b0;
    plan.rho = net.rho;
    plan.gamma = net.gamma;
    plan.pref_weights = net.pref_weights;
    plan.system = system_matrix(net);
    plan.spectral = spectral;
    plan.phi = phi(plan.b0, net.gamma, net.pref_weights);
    plan.alpha = plan_alpha(net, plan.lambda0, plan.b0);
    plan.growth_rate = (plan.lambda0 - net.rho) / net.gamma;
    plan.feedback = feedback_matrix(net.pref_weights, net.gamma, plan.alpha, plan.b0);

    plan.condition_margins = Matrix(n, n);
    plan.min_margin = kInfinity;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double margin = net.weights(i, j) - plan.feedback(i, j);
            plan.condition_margins(i, j) = margin;
            plan.min_margin = std::min(plan.min_margin, margin);
        }
    plan.condition_holds = plan.min_margin >= -kConditionTolerance;

    const Vector c = consumption_direction(net.pref_weights, net.gamma, plan.b0);
    plan.betas.resize(n - 1);
    for (std::size_t m = 1; m < n; ++m) {
        const Vector bm = spectral.eigenvector(m);
        plan.betas[m - 1] = dot(c, bm);
    }
    plan.g_dominant = n == 1 || plan.growth_rate > spectral.eigenvalues[1];
    if (plan.g_dominant) {
        plan.steady_direction = plan.alpha * plan.b0;
        for (std::size_t m = 1; m < n; ++m) {
            const double coef = plan.betas[m - 1] / (spectral.eigenvalues[m] - plan.growth_rate);
            const Vector bm = spectral.eigenvector(m);
            for (std::size_t i = 0; i < n; ++i) plan.steady_direction[i] += coef * bm[i];
        }
    }
    return plan;
}

ExplicitPlan build_plan(const EconomyNetwork& net) {
    if (net.gamma == 1.0) throw ValidationError("explicit solution requires gamma != 1");
    return build_plan(net, eig_symmetric(system_matrix(net)));
}

double value_auxiliary(const ExplicitPlan& plan, std::span<const double> k) {
    return value_b0(plan.alpha, plan.gamma, plan.b0, k);
}

Vector value_gradient(const ExplicitPlan& plan, std::span<const double> k) {
    const double s = projection(k, plan.b0);
    return (std::pow(plan.alpha, plan.gamma) * std::pow(s, -plan.gamma)) * plan.b0;
}

namespace {

void require_uncoupled(const EconomyNetwork& net) {
    if (net.has_edges()) throw ValidationError("uncoupled formulas require all weights to be zero");
    for (std::size_t i = 0; i < net.size(); ++i)
        if (!(net.rho - net.technology[i] * (1.0 - net.gamma) > 0.0)) {
            std::ostringstream os;
            os << "rho - A_" << i + 1 << " (1 - gamma) must be positive";
            throw AssumptionError(os.str());
        }
}

} // namespace

double value_uncoupled(const EconomyNetwork& net, std::span<const double> k) {
    require_uncoupled(net);
    const double g = net.gamma;
    double v = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double denom = net.rho - net.technology[i] * (1.0 - g);
        v += net.pref_weights[i] / (1.0 - g) * std::pow(g / denom, g) * std::pow(k[i], 1.0 - g);
    }
    return v;
}

Vector uncoupled_growth_rates(const EconomyNetwork& net) {
    require_uncoupled(net);
    Vector g(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) g[i] = (net.technology[i] - net.rho) / net.gamma;
    return g;
}

std::pair<Vector, Vector> uncoupled_paths(const EconomyNetwork& net, std::span<const double> k, double t) {
    const Vector g = uncoupled_growth_rates(net);
    Vector kt(net.size()), ct(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double growth = std::exp(g[i] * t);
        kt[i] = k[i] * growth;
        ct[i] = (net.rho - net.technology[i] * (1.0 - net.gamma)) / net.gamma * k[i] * growth;
    }
    return {kt, ct};
}

Vector closed_loop_trajectory(const ExplicitPlan& plan, std::span<const double> k, double t) {
    require_dominant(plan, "closed_loop_trajectory");
    const std::size_t n = plan.size();
    const double a0 = dot(k, plan.b0);
    const double g = plan.growth_rate;
    Vector out = (a0 / plan.alpha * std::exp(g * t)) * plan.steady_direction;
    for (std::size_t m = 1; m < n; ++m) {
        const Vector bm = plan.spectral.eigenvector(m);
        const double lm = plan.spectral.eigenvalues[m];
        const double coef = (dot(k, bm) - plan.betas[m - 1] * a0 / (plan.alpha * (lm - g))) * std::exp(lm * t);
        for (std::size_t i = 0; i < n; ++i) out[i] += coef * bm[i];
    }
    return out;
}

Vector closed_loop_state(const ExplicitPlan& plan, std::span<const double> k, double t) {
    const std::size_t n = plan.size();
    const double a0 = dot(k, plan.b0);
    const double g = plan.growth_rate;
    Vector out = (a0 * std::exp(g * t)) * plan.b0;
    for (std::size_t m = 1; m < n; ++m) {
        const Vector bm = plan.spectral.eigenvector(m);
        const double lm = plan.spectral.eigenvalues[m];
        const double xm = dot(k, bm) * std::exp(lm * t) -
                          plan.betas[m - 1] * a0 / plan.alpha * exp_difference_quotient(g, lm, t);
        for (std::size_t i = 0; i < n; ++i) out[i] += xm * bm[i];
    }
    return out;
}

Vector optimal_control_path(const ExplicitPlan& plan, std::span<const double> k, double t) {
    const double s = projection(k, plan.b0);
    const Vector c = consumption_direction(plan.pref_weights, plan.gamma, plan.b0);
    return (s * std::exp(plan.growth_rate * t) / plan.alpha) * c;
}

Vector steady_state(const ExplicitPlan& plan, std::span<const double> k) {
    require_dominant(plan, "steady_state");
    return (dot(k, plan.b0) / plan.alpha) * plan.steady_direction;
}

double gain_of_optimal(const ExplicitPlan& plan, std::span<const double> k) {
    const double denom = plan.rho - plan.growth_rate * (1.0 - plan.gamma);
    if (!(denom > 0.0)) throw AssumptionError("gain_of_optimal: rho - g (1 - gamma) must be positive");
    const Vector c0 = optimal_control_path(plan, k, 0.0);
    return utility(c0, plan.gamma, plan.pref_weights) / denom;
}

} // namespace akgraph
