#include "akgraph/config.hpp"

#include "akgraph/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace akgraph {

namespace {

using nlohmann::json;

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& what) {
    if (!v.is_number()) throw ValidationError(what + " must be a number");
    return v.get<double>();
}

double number_or(const json& obj, const char* key, double fallback) {
    const json* v = find(obj, key);
    return v ? number(*v, key) : fallback;
}

std::size_t count_or(const json& obj, const char* key, std::size_t fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) throw ValidationError(std::string(key) + " must be a nonnegative integer");
    return v->get<std::size_t>();
}

Vector numbers(const json& v, const std::string& what) {
    if (!v.is_array()) throw ValidationError(what + " must be an array of numbers");
    Vector out;
    out.reserve(v.size());
    for (const json& x : v) out.push_back(number(x, what));
    return out;
}

const json& required(const json& obj, const char* key, const std::string& where) {
    const json* v = find(obj, key);
    if (!v) throw ValidationError(where + ": missing key '" + key + "'");
    return *v;
}

void expect_length(const Vector& v, std::size_t n, const std::string& what) {
    if (v.size() != n) {
        std::ostringstream os;
        os << what << " has " << v.size() << " entries, expected " << n;
        throw ValidationError(os.str());
    }
}

EconomyNetwork parse_network(const json& nj) {
    if (!nj.is_object()) throw ValidationError("network must be an object");
    const std::size_t n = count_or(nj, "nodes", 0);
    if (n == 0) throw ValidationError("network: 'nodes' must be a positive integer");

    const json* wj = find(nj, "weights");
    const Vector upper = wj ? numbers(*wj, "weights") : Vector(upper_triangle_size(n), 0.0);
    expect_length(upper, upper_triangle_size(n), "weights");

    Vector tech = numbers(required(nj, "technology", "network"), "technology");
    expect_length(tech, n, "technology");
    const double rho = number(required(nj, "rho", "network"), "rho");
    const double gamma = number(required(nj, "gamma", "network"), "gamma");

    const json* pj = find(nj, "pref_weights");
    Vector p = pj ? numbers(*pj, "pref_weights") : Vector(n, 1.0 / static_cast<double>(n));
    expect_length(p, n, "pref_weights");
    const json* kj = find(nj, "initial_capital");
    Vector k = kj ? numbers(*kj, "initial_capital") : Vector(n, 1.0);
    expect_length(k, n, "initial_capital");

    std::optional<Matrix> n_op;
    if (const json* oj = find(nj, "consumption_operator")) {
        if (!oj->is_array() || oj->size() != n) throw ValidationError("consumption_operator must be an n x n array");
        Matrix mat(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const Vector row = numbers((*oj)[i], "consumption_operator row");
            expect_length(row, n, "consumption_operator row");
            for (std::size_t j = 0; j < n; ++j) mat(i, j) = row[j];
        }
        n_op = std::move(mat);
    }
    return EconomyNetwork::from_upper_triangle(n, upper, std::move(tech), rho, gamma, std::move(p), std::move(k),
                                               std::move(n_op));
}

SweepSpec parse_sweep(const json* sj, std::size_t n) {
    SweepSpec s;
    if (n < 2) {
        s.i = s.j = 0;
    } else if (n == 2) {
        s.j = 1;
    }
    s.values = linspace(0.0055, 0.03, 50);
    if (!sj) return s;
    if (!sj->is_object()) throw ValidationError("run.sweep must be an object");
    if (const json* pair = find(*sj, "pair")) {
        const Vector ij = numbers(*pair, "run.sweep.pair");
        if (ij.size() != 2) throw ValidationError("run.sweep.pair must have two entries");
        const auto a = static_cast<long>(ij[0]), b = static_cast<long>(ij[1]);
        if (a != ij[0] || b != ij[1] || a < 1 || b <= a || static_cast<std::size_t>(b) > n)
            throw ValidationError("run.sweep.pair must name nodes 1 <= i < j <= n");
        s.i = static_cast<std::size_t>(a - 1);
        s.j = static_cast<std::size_t>(b - 1);
    }
    if (const json* vals = find(*sj, "values")) {
        s.values = numbers(*vals, "run.sweep.values");
    } else if (find(*sj, "from") || find(*sj, "to") || find(*sj, "points")) {
        const double from = number(required(*sj, "from", "run.sweep"), "run.sweep.from");
        const double to = number(required(*sj, "to", "run.sweep"), "run.sweep.to");
        s.values = linspace(from, to, count_or(*sj, "points", 50));
    }
    s.t_max = number_or(*sj, "t_max", s.t_max);
    return s;
}

} // namespace

Vector linspace(double from, double to, std::size_t n) {
    Vector v(n);
    if (n == 1) {
        v[0] = from;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        v[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

RunConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        throw ValidationError("config is not valid JSON: " + msg);
    }
    if (!root.is_object()) throw ValidationError("config must be a JSON object");

    RunConfig cfg;
    cfg.network = parse_network(required(root, "network", "config"));
    const std::size_t n = cfg.network.size();

    const json* rj = find(root, "run");
    const json empty = json::object();
    const json& run = rj ? *rj : empty;
    if (!run.is_object()) throw ValidationError("run must be an object");
    cfg.horizon = number_or(run, "horizon", cfg.horizon);
    cfg.dt = number_or(run, "dt", cfg.dt);
    cfg.band_fraction = number_or(run, "band_fraction", cfg.band_fraction);
    cfg.t_max = number_or(run, "t_max", cfg.t_max);
    cfg.sweep = parse_sweep(find(run, "sweep"), n);

    if (const json* tj = find(run, "two_node")) {
        cfg.two_node.w_from = number_or(*tj, "w_from", cfg.two_node.w_from);
        cfg.two_node.w_to = number_or(*tj, "w_to", cfg.two_node.w_to);
        cfg.two_node.per_decade = static_cast<int>(count_or(*tj, "per_decade", 50));
    }
    if (const json* oj = find(run, "oracle")) {
        cfg.oracle.points = count_or(*oj, "points", cfg.oracle.points);
        cfg.oracle.lower = number_or(*oj, "lower", cfg.oracle.lower);
        cfg.oracle.upper = number_or(*oj, "upper", cfg.oracle.upper);
        cfg.oracle.control_points = count_or(*oj, "control_points", cfg.oracle.control_points);
        if (const json* r = find(*oj, "refine")) {
            if (!r->is_boolean()) throw ValidationError("run.oracle.refine must be a boolean");
            cfg.oracle.refine = r->get<bool>();
        }
    }
    if (const json* out = find(root, "output")) {
        if (!out->is_string()) throw ValidationError("output must be a string");
        cfg.output_dir = out->get<std::string>();
    }
    if (const json* seed = find(root, "seed")) {
        if (!seed->is_number_unsigned()) throw ValidationError("seed must be a nonnegative integer");
        cfg.seed = seed->get<std::uint64_t>();
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace akgraph
