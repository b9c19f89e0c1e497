#include "akgraph/cli.hpp"

#include "akgraph/config.hpp"
#include "akgraph/error.hpp"
#include "akgraph/hjb_oracle.hpp"
#include "akgraph/planner.hpp"
#include "akgraph/simulation.hpp"
#include "akgraph/spectral.hpp"
#include "akgraph/two_node.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace akgraph {

namespace fs = std::filesystem;

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::vector<SweepRow> compute_sweep(const EconomyNetwork& net, std::size_t i, std::size_t j,
                                    std::span<const double> values, double t_max, Execution exec) {
    const std::size_t count = values.size();
    std::vector<SweepRow> rows(count);
    std::vector<std::exception_ptr> failures(count);
    const Vector k = net.initial_capital;

    auto row = [&](std::size_t r) {
        try {
            const ExplicitPlan plan = build_plan(net.with_weight(i, j, values[r]));
            rows[r] = {values[r], plan.lambda0, plan.growth_rate, plan.condition_holds,
                       breakdown_time(plan, k, t_max)};
        } catch (...) {
            failures[r] = std::current_exception();
        }
    };
    if (exec == Execution::parallel) {
        const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t r = 0; r < n; ++r) row(static_cast<std::size_t>(r));
    } else {
        for (std::size_t r = 0; r < count; ++r) row(r);
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.w < b.w; });
    return rows;
}

namespace {

struct Options {
    std::string config;
    std::string out_dir;
    double dt = 0.0;
    double horizon = 0.0;
    double band = 0.0;
    double tmax = 0.0;
    std::uint64_t seed = 0;
};

const char* flag(bool b) { return b ? "true" : "false"; }

class CsvWriter {
public:
    template <class... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((buf_ << (first ? "" : ",") << cell(cells), first = false), ...);
        buf_ << '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) buf_ << (i ? "," : "") << cells[i];
        buf_ << '\n';
    }

    fs::path save(const fs::path& dir, const std::string& name) const {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw ValidationError("cannot create output directory " + dir.string());
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + path.string());
        out << buf_.str();
        return path;
    }

private:
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(bool v) { return flag(v); }
    static std::string cell(const char* v) { return v; }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(std::string_view v) { return std::string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }

    std::ostringstream buf_;
};

std::string indexed(const char* name, std::size_t i) { return std::string(name) + "_" + std::to_string(i + 1); }

// Edgeless networks skip the connectivity requirement and use the isolated-node formulas.
bool is_uncoupled(const EconomyNetwork& net) { return !net.has_edges(); }

void require_valid(const EconomyNetwork& net) {
    for (const Violation& v : validate(net)) {
        if (v.kind == "disconnected-graph" && is_uncoupled(net)) continue;
        throw ValidationError("invalid network: " + v.to_string());
    }
}

void require_uncoupled_assumption(const EconomyNetwork& net) {
    for (std::size_t i = 0; i < net.size(); ++i)
        if (!(net.rho - net.technology[i] * (1.0 - net.gamma) > 0.0))
            throw AssumptionError("rho <= A_" + std::to_string(i + 1) + " (1 - gamma)");
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const EconomyNetwork& net = cfg.network;
    std::vector<Violation> found;
    for (const Violation& v : validate(net))
        if (!(v.kind == "disconnected-graph" && is_uncoupled(net))) found.push_back(v);
    if (!found.empty()) {
        for (const Violation& v : found) out << "violation: " << v.to_string() << '\n';
        throw ValidationError("invalid network: " + found.front().to_string());
    }
    if (is_uncoupled(net)) {
        require_uncoupled_assumption(net);
        out << "valid (uncoupled)\n";
        return kExitOk;
    }
    const FrobeniusPair fp = frobenius_pair(eig_symmetric(system_matrix(net)), net.technology);
    const double gap = net.rho - fp.lambda0 * (1.0 - net.gamma);
    if (!(gap > 0.0))
        throw AssumptionError("rho - lambda0 (1 - gamma) = " + format_number(gap) + " is not positive");
    out << "valid lambda0=" << format_number(fp.lambda0) << '\n';
    return kExitOk;
}

int cmd_solve(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const EconomyNetwork& net = cfg.network;
    require_valid(net);
    const Vector& k = net.initial_capital;
    CsvWriter csv;
    csv.row("quantity", "value");
    if (is_uncoupled(net)) {
        require_uncoupled_assumption(net);
        csv.row("mode", "uncoupled");
        const Vector g = uncoupled_growth_rates(net);
        for (std::size_t i = 0; i < g.size(); ++i) csv.row(indexed("g", i), g[i]);
        csv.row("V", value_uncoupled(net, k));
    } else {
        const ExplicitPlan plan = build_plan(net);
        csv.row("mode", "coupled");
        csv.row("lambda0", plan.lambda0);
        if (plan.size() > 1) csv.row("lambda1", plan.spectral.eigenvalues[1]);
        for (std::size_t i = 0; i < plan.size(); ++i) csv.row(indexed("b0", i), plan.b0[i]);
        csv.row("phi", plan.phi);
        csv.row("alpha", plan.alpha);
        csv.row("g", plan.growth_rate);
        csv.row("g_dominant", plan.g_dominant);
        csv.row("condition_holds", plan.condition_holds);
        csv.row("min_condition_margin", plan.min_margin);
        csv.row("V_b0", value_auxiliary(plan, k));
        const Vector kbar = plan.g_dominant ? steady_state(plan, k) : Vector(plan.size(), std::nan(""));
        for (std::size_t i = 0; i < kbar.size(); ++i) csv.row(indexed("K_bar", i), kbar[i]);
    }
    out << "wrote " << csv.save(dir, "solve.csv").string() << '\n';
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const EconomyNetwork& net = cfg.network;
    require_valid(net);
    const Vector& k = net.initial_capital;
    Trajectory traj;
    double g = 0.0, t_minus = kInfinity;
    if (is_uncoupled(net)) {
        require_uncoupled_assumption(net);
        traj = sample_uncoupled(net, k, cfg.horizon, cfg.dt);
        g = (*std::max_element(net.technology.begin(), net.technology.end()) - net.rho) / net.gamma;
    } else {
        const ExplicitPlan plan = build_plan(net);
        traj = sample_closed_loop(net, plan, k, cfg.horizon, cfg.dt);
        g = plan.growth_rate;
        t_minus = breakdown_time(plan, k, cfg.t_max);
    }
    const double conv = convergence_time(traj, g, cfg.band_fraction);

    const std::size_t n = net.size();
    CsvWriter csv;
    std::vector<std::string> header{"t"};
    for (const char* name : {"K", "C", "g"})
        for (std::size_t i = 0; i < n; ++i) header.push_back(indexed(name, i));
    csv.row(header);
    for (std::size_t j = 0; j < traj.size(); ++j) {
        std::vector<std::string> cells{format_number(traj.times[j])};
        for (const Vector* v : {&traj.states[j], &traj.controls[j], &traj.growth_rates[j]})
            for (double x : *v) cells.push_back(format_number(x));
        csv.row(cells);
    }
    csv.row("T_minus", t_minus);
    csv.row("convergence_time", conv);
    out << "wrote " << csv.save(dir, "trajectory.csv").string() << '\n';
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const EconomyNetwork& net = cfg.network;
    require_valid(net);
    if (net.size() < 2) throw ValidationError("sweep needs at least two nodes");
    if (cfg.sweep.values.empty()) throw ValidationError("sweep grid is empty");
    const auto rows = compute_sweep(net, cfg.sweep.i, cfg.sweep.j, cfg.sweep.values, cfg.sweep.t_max);
    CsvWriter csv;
    csv.row("w_value", "lambda0", "g", "condition_holds", "T_minus");
    for (const SweepRow& r : rows) csv.row(r.w, r.lambda0, r.g, r.condition_holds, r.t_minus);
    out << "wrote " << csv.save(dir, "sweep.csv").string() << '\n';
    return kExitOk;
}

int cmd_two_node(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const EconomyNetwork& net = cfg.network;
    if (net.size() != 2) throw ValidationError("two-node analysis needs exactly two nodes");
    require_valid(net);
    if (net.pref_weights[0] != 1.0 || net.pref_weights[1] != 1.0)
        throw ValidationError("two-node analysis assumes pref_weights = (1, 1)");
    const TwoNodeInstance inst{net.technology[0], net.technology[1], net.rho, net.gamma, net.initial_capital[0],
                               net.initial_capital[1]};
    check_instance(inst);
    const Thresholds th = thresholds(inst);
    const auto grid = log_grid(cfg.two_node.w_from, cfg.two_node.w_to, cfg.two_node.per_decade);
    const auto rows = value_profile(inst, grid);

    CsvWriter csv;
    csv.row("w_bar", th.w_bar, "w_under", th.w_under, "tail_trend", to_string(classify_tail(inst)));
    csv.row("w", "lambda0", "g", "V_b0", "condition_holds");
    for (const ProfileRow& r : rows) csv.row(r.w, r.lambda0, r.g, r.value, r.condition_holds);
    out << "wrote " << csv.save(dir, "twonode.csv").string() << '\n';
    return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, const fs::path& dir, std::ostream& out) {
    const EconomyNetwork& net = cfg.network;
    if (net.size() > kMaxOracleDim) throw ValidationError("oracle supports at most two nodes");
    require_valid(net);

    std::function<double(std::span<const double>)> reference;
    bool condition_holds = true;
    if (is_uncoupled(net)) {
        require_uncoupled_assumption(net);
        reference = [&net](std::span<const double> x) { return value_uncoupled(net, x); };
    } else {
        auto plan = std::make_shared<ExplicitPlan>(build_plan(net));
        condition_holds = plan->condition_holds;
        reference = [plan](std::span<const double> x) { return value_auxiliary(*plan, x); };
    }

    auto run = [&](std::size_t points) {
        GridSpec spec = square_grid(net.size(), cfg.oracle.lower, cfg.oracle.upper, points);
        spec.control_points = cfg.oracle.control_points;
        GridValue gv = solve_hjb_grid(net, spec);
        const ComparisonStats stats = compare_to_reference(gv, reference, interior_half(gv.spec));
        return std::pair{std::move(gv), stats};
    };

    const auto [fine, fine_stats] = run(cfg.oracle.points);
    CsvWriter csv;
    csv.row("quantity", "value");
    csv.row("points", fine.spec.points[0]);
    csv.row("h", fine.spec.h);
    csv.row("control_max", fine.spec.control_max);
    csv.row("improvement_rounds", fine.improvement_rounds);
    csv.row("sweeps", fine.sweeps);
    csv.row("residual", fine.residual);
    csv.row("control_saturation", fine.control_saturation);
    csv.row("condition_holds", condition_holds);
    csv.row("max_rel_err", fine_stats.max_rel_err);
    csv.row("mean_rel_err", fine_stats.mean_rel_err);
    csv.row("compared_nodes", fine_stats.nodes);
    if (cfg.oracle.refine) {
        const auto [coarse, coarse_stats] = run(cfg.oracle.points / 2);
        csv.row("coarse_points", coarse.spec.points[0]);
        csv.row("coarse_max_rel_err", coarse_stats.max_rel_err);
        csv.row("coarse_mean_rel_err", coarse_stats.mean_rel_err);
        csv.row("refinement_ratio", coarse_stats.max_rel_err / fine_stats.max_rel_err);
    }
    out << "wrote " << csv.save(dir, "oracle.csv").string() << '\n';
    return kExitOk;
}

std::string one_line(std::string msg) {
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return msg;
}

} // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimal AK growth on weighted graphs"};
    app.require_subcommand(1);
    Options opt;

    const std::pair<const char*, const char*> commands[] = {
        {"validate", "Check the network and the standing assumptions"},
        {"solve", "Explicit plan: lambda0, b0, g, alpha, F condition, value"},
        {"simulate", "Optimal closed-loop trajectory with growth rates"},
        {"sweep", "Sweep one edge weight: lambda0, g, condition, T_minus"},
        {"two-node", "Two-node thresholds and value profile"},
        {"oracle", "Grid HJB solution compared with the closed form"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config, "JSON configuration file")->required();
        sub->add_option("--out", opt.out_dir, "Output directory (default ./out)");
        sub->add_option("--dt", opt.dt, "Time step");
        sub->add_option("--horizon", opt.horizon, "Simulation horizon");
        sub->add_option("--band", opt.band, "Convergence band fraction");
        sub->add_option("--tmax", opt.tmax, "Breakdown search horizon");
        sub->add_option("--seed", opt.seed, "Random seed");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << one_line(e.what()) << '\n';
        return kExitStructural;
    }

    CLI::App* sub = nullptr;
    for (CLI::App* s : subs)
        if (s->parsed()) sub = s;
    const std::string name = sub->get_name();

    try {
        RunConfig cfg = load_config(opt.config);
        if (sub->count("--dt")) cfg.dt = opt.dt;
        if (sub->count("--horizon")) cfg.horizon = opt.horizon;
        if (sub->count("--band")) cfg.band_fraction = opt.band;
        if (sub->count("--tmax")) cfg.t_max = cfg.sweep.t_max = opt.tmax;
        if (sub->count("--seed")) cfg.seed = opt.seed;
        const fs::path dir = sub->count("--out") ? fs::path(opt.out_dir) : fs::path(cfg.output_dir);

        if (name == "validate") return cmd_validate(cfg, out);
        if (name == "solve") return cmd_solve(cfg, dir, out);
        if (name == "simulate") return cmd_simulate(cfg, dir, out);
        if (name == "sweep") return cmd_sweep(cfg, dir, out);
        if (name == "two-node") return cmd_two_node(cfg, dir, out);
        return cmd_oracle(cfg, dir, out);
    } catch (const AssumptionError& e) {
        err << "error: assumption violated: " << one_line(e.what()) << '\n';
        return kExitAssumption;
    } catch (const NumericError& e) {
        err << "error: numeric failure: " << one_line(e.what()) << '\n';
        return kExitNumeric;
    } catch (const ValidationError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kExitStructural;
    } catch (const DomainError& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kExitStructural;
    } catch (const std::exception& e) {
        err << "error: " << one_line(e.what()) << '\n';
        return kExitNumeric;
    }
}

} // namespace akgraph
