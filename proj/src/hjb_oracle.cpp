#include "akgraph/hjb_oracle.hpp"

#include "akgraph/error.hpp"
#include "akgraph/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace akgraph {

namespace {

constexpr double kNegInf = -kInfinity;
constexpr double kImprovementSlack = 1e-15;
constexpr std::size_t kCoarseSearchPoints = 16;

using Policy = std::array<std::int32_t, kMaxOracleDim>;

// Everything the node update needs, flattened for the inner loop.
struct Scheme {
    std::size_t dim = 1;
    std::array<std::size_t, kMaxOracleDim> points{1, 1};
    std::array<double, kMaxOracleDim> lower{0.0, 0.0};
    std::array<double, kMaxOracleDim> upper{0.0, 0.0};
    std::array<double, kMaxOracleDim> dx{1.0, 1.0};
    double m[kMaxOracleDim][kMaxOracleDim]{};
    double nop[kMaxOracleDim][kMaxOracleDim]{};
    Vector controls;                            // shared by all axes
    std::array<Vector, kMaxOracleDim> payoff;   // h p_i u(c) per control index
    double h = 0.0;
    double beta = 0.0;

    std::size_t stride() const { return dim == 2 ? points[1] : 1; }
    std::size_t nodes() const { return points[0] * (dim == 2 ? points[1] : 1); }
    std::int32_t control_count() const { return static_cast<std::int32_t>(controls.size()); }

    // Right-hand side of the update at node (a, b) under control indices `pol`,
    // with the node's own interpolation weight solved for implicitly.
    double evaluate(const Vector& v, std::size_t a, std::size_t b, const Policy& pol) const {
        double z[kMaxOracleDim];
        std::size_t idx[kMaxOracleDim] = {a, b};
        double frac[kMaxOracleDim] = {0.0, 0.0};
        std::size_t cell[kMaxOracleDim] = {0, 0};
        double gain = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double xi = lower[i] + static_cast<double>(idx[i]) * dx[i];
            double drift = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double xk = lower[k] + static_cast<double>(idx[k]) * dx[k];
                drift += m[i][k] * xk - nop[i][k] * controls[static_cast<std::size_t>(pol[k])];
            }
            z[i] = xi + h * drift;
            if (z[i] < lower[i] - 1e-14) return kNegInf;
            z[i] = std::clamp(z[i], lower[i], upper[i]);
            const double f = (z[i] - lower[i]) / dx[i];
            cell[i] = std::min(static_cast<std::size_t>(f), points[i] - 2);
            frac[i] = f - static_cast<double>(cell[i]);
            gain += payoff[i][static_cast<std::size_t>(pol[i])];
        }
        if (gain == kNegInf) return kNegInf;

        double self = 0.0, rest = 0.0;
        const std::size_t corners = std::size_t{1} << dim;
        for (std::size_t c = 0; c < corners; ++c) {
            double wt = 1.0;
            std::size_t at[kMaxOracleDim] = {0, 0};
            for (std::size_t i = 0; i < dim; ++i) {
                const bool up = (c >> i) & 1U;
                at[i] = cell[i] + (up ? 1 : 0);
                wt *= up ? frac[i] : 1.0 - frac[i];
            }
            if (wt == 0.0) continue;
            if (at[0] == a && (dim == 1 || at[1] == b)) {
                self += wt;
                continue;
            }
            const double vc = v[at[0] * stride() + (dim == 2 ? at[1] : 0)];
            if (vc == kNegInf) return kNegInf;
            rest += wt * vc;
        }
        return (gain + beta * rest) / (1.0 - beta * self);
    }

    // Best control near `start` by steepest ascent over the 3^dim neighbourhood.
    std::pair<Policy, double> climb(const Vector& v, std::size_t a, std::size_t b, Policy start, double best) const {
        const std::int32_t nc = control_count();
        const std::int32_t reach1 = dim == 2 ? 1 : 0;
        for (;;) {
            Policy next = start;
            bool moved = false;
            for (std::int32_t s0 = -1; s0 <= 1; ++s0)
                for (std::int32_t s1 = -reach1; s1 <= reach1; ++s1) {
                    if (s0 == 0 && s1 == 0) continue;
                    const Policy cand{start[0] + s0, start[1] + s1};
                    if (cand[0] < 0 || cand[0] >= nc || cand[1] < 0 || cand[1] >= nc) continue;
                    const double val = evaluate(v, a, b, cand);
                    if (val > best + kImprovementSlack) {
                        best = val;
                        next = cand;
                        moved = true;
                    }
                }
            if (!moved) return {start, best};
            start = next;
        }
    }

    std::pair<Policy, double> coarse_search(const Vector& v, std::size_t a, std::size_t b) const {
        const std::int32_t nc = control_count();
        const std::int32_t step = std::max<std::int32_t>(1, nc / static_cast<std::int32_t>(kCoarseSearchPoints));
        std::vector<std::int32_t> probe;
        for (std::int32_t j = 0; j < nc; j += step) probe.push_back(j);
        if (probe.back() != nc - 1) probe.push_back(nc - 1);

        Policy best_pol{0, 0};
        double best = evaluate(v, a, b, best_pol);
        for (std::int32_t j0 : probe)
            for (std::int32_t j1 : (dim == 2 ? probe : std::vector<std::int32_t>{0})) {
                const Policy cand{j0, j1};
                const double val = evaluate(v, a, b, cand);
                if (val > best + kImprovementSlack) {
                    best = val;
                    best_pol = cand;
                }
            }
        return {best_pol, best};
    }

    double update_node(const Vector& v, Vector& out, std::vector<Policy>& policy, std::size_t node, bool improve,
                       bool first) const {
        const std::size_t a = node / stride();
        const std::size_t b = dim == 2 ? node % stride() : 0;
        double val;
        if (!improve) {
            val = evaluate(v, a, b, policy[node]);
        } else {
            auto [pol, start] = first ? coarse_search(v, a, b) : std::pair{policy[node], evaluate(v, a, b, policy[node])};
            std::tie(policy[node], val) = climb(v, a, b, pol, start);
        }
        out[node] = val;
        if (val == kNegInf && v[node] == kNegInf) return 0.0;
        return std::abs(val - v[node]);
    }
};

// Reference sweep: one node after another.
double sweep_serial(const Scheme& s, const Vector& v, Vector& out, std::vector<Policy>& policy, bool improve,
                    bool first) {
    double change = 0.0;
    const std::size_t nodes = s.nodes();
    for (std::size_t node = 0; node < nodes; ++node)
        change = std::max(change, s.update_node(v, out, policy, node, improve, first));
    return change;
}

// Same sweep with nodes split across threads. Each node reads only `v` and
// writes only its own slots, so the result matches the serial sweep bit for bit.
double sweep_parallel(const Scheme& s, const Vector& v, Vector& out, std::vector<Policy>& policy, bool improve,
                      bool first) {
    double change = 0.0;
    const auto nodes = static_cast<std::ptrdiff_t>(s.nodes());
#pragma omp parallel for schedule(static) reduction(max : change)
    for (std::ptrdiff_t node = 0; node < nodes; ++node)
        change = std::max(change, s.update_node(v, out, policy, static_cast<std::size_t>(node), improve, first));
    return change;
}

double utility_1d(double c, double gamma) {
    if (c == 0.0) return gamma < 1.0 ? 0.0 : kNegInf;
    return std::pow(c, 1.0 - gamma) / (1.0 - gamma);
}

double default_control_max(const EconomyNetwork& net, const GridSpec& spec, const Matrix& m) {
    Vector top(spec.upper.begin(), spec.upper.begin() + static_cast<std::ptrdiff_t>(spec.dim));
    double cmax = 0.0;
    try {
        if (net.has_edges()) {
            const ExplicitPlan plan = build_plan(net);
            cmax = norm_inf(plan.feedback * top);
        } else {
            for (std::size_t i = 0; i < net.size(); ++i)
                cmax = std::max(cmax, (net.rho - net.technology[i] * (1.0 - net.gamma)) / net.gamma * top[i]);
        }
    } catch (const std::runtime_error&) {
        cmax = 0.0;
    }
    if (!(cmax > 0.0)) cmax = norm_inf(m * top);
    if (!(cmax > 0.0)) cmax = 1.0;
    return 2.0 * cmax;
}

void check_spec(const EconomyNetwork& net, const GridSpec& spec) {
    if (spec.dim == 0 || spec.dim > kMaxOracleDim) throw ValidationError("hjb oracle supports one or two nodes");
    if (net.size() != spec.dim) throw ValidationError("grid dimension does not match the network size");
    for (std::size_t i = 0; i < spec.dim; ++i) {
        if (!(spec.lower[i] >= 0.0) || !(spec.upper[i] > spec.lower[i]))
            throw ValidationError("grid bounds must satisfy 0 <= lower < upper");
        if (spec.points[i] < 16) throw ValidationError("grid needs at least 16 points per axis");
        if (net.gamma > 1.0 && !(spec.lower[i] > 0.0))
            throw ValidationError("gamma > 1 needs lower grid bounds away from zero");
    }
    if (spec.control_points < 2) throw ValidationError("control grid needs at least 2 points");
    if (!(spec.h >= 0.0) || !(spec.cfl > 0.0)) throw ValidationError("time step settings must be positive");
    if (!(spec.control_min > 0.0)) throw ValidationError("control_min must be positive");
}

} // namespace

std::size_t GridSpec::node_count() const {
    std::size_t count = 1;
    for (std::size_t i = 0; i < dim; ++i) count *= points[i];
    return count;
}

GridSpec square_grid(std::size_t dim, double lower, double upper, std::size_t points) {
    GridSpec spec;
    spec.dim = dim;
    spec.lower = {lower, lower};
    spec.upper = {upper, upper};
    spec.points = {points, points};
    return spec;
}

GridValue solve_hjb_grid(const EconomyNetwork& net, const GridSpec& spec_in, Execution exec) {
    const auto violations = validate(net);
    if (!violations.empty()) {
        // Edgeless networks are fine here; everything else is not.
        for (const auto& v : violations)
            if (v.kind != "disconnected-graph") throw ValidationError("invalid network: " + v.to_string());
    }
    check_spec(net, spec_in);

    const Matrix m = system_matrix(net);
    const double lambda0 = eig_symmetric(m).eigenvalues.front();
    if (!(net.rho - lambda0 * (1.0 - net.gamma) > 0.0))
        throw AssumptionError("hjb oracle: rho <= lambda0 (1 - gamma), the value is unbounded");

    GridSpec spec = spec_in;
    if (!(spec.control_max > 0.0)) spec.control_max = default_control_max(net, spec, m);
    if (!(spec.control_max > spec.control_min)) throw ValidationError("control_max must exceed control_min");

    Scheme s;
    s.dim = spec.dim;
    const Matrix n_op = net.consumption_matrix();
    for (std::size_t i = 0; i < s.dim; ++i) {
        s.points[i] = spec.points[i];
        s.lower[i] = spec.lower[i];
        s.upper[i] = spec.upper[i];
        s.dx[i] = spec.spacing(i);
        for (std::size_t k = 0; k < s.dim; ++k) {
            s.m[i][k] = m(i, k);
            s.nop[i][k] = n_op(i, k);
        }
    }

    // Controls: {0} and a log grid for gamma < 1; the log grid alone otherwise.
    const bool with_zero = net.gamma < 1.0;
    const std::size_t logs = with_zero ? spec.control_points - 1 : spec.control_points;
    if (with_zero) s.controls.push_back(0.0);
    const double l0 = std::log10(spec.control_min), l1 = std::log10(spec.control_max);
    for (std::size_t j = 0; j < logs; ++j)
        s.controls.push_back(
            logs == 1 ? spec.control_max
                      : std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(j) / static_cast<double>(logs - 1)));

    // Largest drift over the box; the dynamics are affine, so vertices suffice.
    double max_drift = 0.0;
    for (std::size_t corner = 0; corner < (std::size_t{1} << s.dim); ++corner) {
        Vector x(s.dim);
        for (std::size_t i = 0; i < s.dim; ++i) x[i] = ((corner >> i) & 1U) ? s.upper[i] : s.lower[i];
        const Vector mx = m * x;
        for (std::size_t i = 0; i < s.dim; ++i) {
            double row = 0.0;
            for (std::size_t k = 0; k < s.dim; ++k) row += s.nop[i][k];
            max_drift = std::max(max_drift, std::abs(mx[i]) + spec.control_max * row);
        }
    }
    if (!(spec.h > 0.0)) {
        double min_dx = s.dx[0];
        for (std::size_t i = 1; i < s.dim; ++i) min_dx = std::min(min_dx, s.dx[i]);
        spec.h = spec.cfl * min_dx / max_drift;
    }
    s.h = spec.h;
    s.beta = std::exp(-net.rho * s.h);
    for (std::size_t i = 0; i < s.dim; ++i) {
        s.payoff[i].resize(s.controls.size());
        for (std::size_t j = 0; j < s.controls.size(); ++j)
            s.payoff[i][j] = s.h * net.pref_weights[i] * utility_1d(s.controls[j], net.gamma);
    }

    const std::size_t nodes = s.nodes();
    Vector v(nodes, 0.0), next(nodes, 0.0);
    std::vector<Policy> policy(nodes, Policy{0, 0});
    auto sweep = exec == Execution::parallel ? sweep_parallel : sweep_serial;

    GridValue gv;
    bool converged = false;
    while (gv.sweeps < spec.max_sweeps) {
        gv.residual = sweep(s, v, next, policy, true, gv.improvement_rounds == 0);
        std::swap(v, next);
        ++gv.sweeps;
        ++gv.improvement_rounds;
        if (gv.residual <= spec.tolerance) {
            converged = true;
            break;
        }
        for (std::size_t e = 0; e < spec.evaluation_sweeps && gv.sweeps < spec.max_sweeps; ++e) {
            sweep(s, v, next, policy, false, false);
            std::swap(v, next);
            ++gv.sweeps;
        }
    }
    if (!converged) {
        std::ostringstream os;
        os << "hjb oracle: no convergence after " << gv.sweeps << " sweeps (residual " << gv.residual << ")";
        throw NumericError(os.str());
    }

    std::size_t saturated = 0;
    const std::int32_t top = s.control_count() - 1;
    for (const Policy& p : policy)
        if (p[0] == top || (s.dim == 2 && p[1] == top)) ++saturated;
    gv.control_saturation = static_cast<double>(saturated) / static_cast<double>(nodes);
    gv.spec = spec;
    gv.values = std::move(v);
    return gv;
}

Region interior_half(const GridSpec& spec) {
    Region r;
    for (std::size_t i = 0; i < spec.dim; ++i) {
        const double len = spec.upper[i] - spec.lower[i];
        r.lower[i] = spec.lower[i] + 0.25 * len;
        r.upper[i] = spec.lower[i] + 0.75 * len;
    }
    return r;
}

ComparisonStats compare_to_reference(const GridValue& gv,
                                     const std::function<double(std::span<const double>)>& reference,
                                     const Region& region) {
    const GridSpec& spec = gv.spec;
    for (std::size_t i = 0; i < spec.dim; ++i)
        if (region.lower[i] < spec.lower[i] || region.upper[i] > spec.upper[i] || region.lower[i] > region.upper[i])
            throw DomainError("comparison region lies outside the grid");

    ComparisonStats stats;
    double sum = 0.0;
    const std::size_t n1 = spec.dim == 2 ? spec.points[1] : 1;
    const double eps = 1e-12;
    for (std::size_t a = 0; a < spec.points[0]; ++a)
        for (std::size_t b = 0; b < n1; ++b) {
            double x[kMaxOracleDim] = {gv.coordinate(0, a), spec.dim == 2 ? gv.coordinate(1, b) : 0.0};
            bool inside = true;
            for (std::size_t i = 0; i < spec.dim; ++i)
                inside = inside && x[i] >= region.lower[i] - eps && x[i] <= region.upper[i] + eps;
            if (!inside) continue;
            const double ref = reference(std::span<const double>(x, spec.dim));
            const double err = std::abs(gv.at(a, b) - ref) / std::abs(ref);
            stats.max_rel_err = std::max(stats.max_rel_err, err);
            sum += err;
            ++stats.nodes;
        }
    if (stats.nodes == 0) throw DomainError("comparison region contains no grid nodes");
    stats.mean_rel_err = sum / static_cast<double>(stats.nodes);
    return stats;
}

ComparisonStats compare_to_explicit(const GridValue& gv, const ExplicitPlan& plan, const Region& region) {
    if (plan.size() != gv.spec.dim) throw ValidationError("plan and grid dimensions differ");
    return compare_to_reference(gv, [&plan](std::span<const double> x) { return value_auxiliary(plan, x); }, region);
}

} // namespace akgraph
