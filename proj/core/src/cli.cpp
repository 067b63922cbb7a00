#include "avgdyn/cli.hpp"

#include "avgdyn/dynamics.hpp"
#include "avgdyn/io.hpp"
#include "avgdyn/models.hpp"
#include "avgdyn/rng.hpp"
#include "avgdyn/steady_state.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <thread>

namespace avgdyn {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// --- schema helpers ---------------------------------------------------------

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
    if (!j.is_object())
        throw ConfigError(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key))
            throw ConfigError(join_path(path, key), "unknown key");
    }
}

const json& require(const json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end())
        throw ConfigError(join_path(path, key), "missing");
    return *it;
}

double num_or(const json& j, const std::string& path, const char* key, double dflt) {
    const auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number())
        throw ConfigError(join_path(path, key), "expected a number");
    return it->get<double>();
}

long int_or(const json& j, const std::string& path, const char* key, long dflt) {
    const auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_number_integer())
        throw ConfigError(join_path(path, key), "expected an integer");
    return it->get<long>();
}

bool bool_or(const json& j, const std::string& path, const char* key, bool dflt) {
    const auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_boolean())
        throw ConfigError(join_path(path, key), "expected a boolean");
    return it->get<bool>();
}

std::string str_or(const json& j, const std::string& path, const char* key,
                   const std::string& dflt) {
    const auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_string())
        throw ConfigError(join_path(path, key), "expected a string");
    return it->get<std::string>();
}

std::vector<double> num_array(const json& j, const std::string& path) {
    if (!j.is_array())
        throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number())
            throw ConfigError(path, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

/// Grid value: explicit array, or {"from": a, "to": b, "steps": n} inclusive.
std::vector<double> grid_from_json(const json& j, const std::string& path) {
    if (j.is_array()) {
        const auto grid = num_array(j, path);
        if (grid.empty())
            throw ConfigError(path, "grid is empty");
        return grid;
    }
    if (j.is_object()) {
        check_keys(j, path, {"from", "to", "steps"});
        const double from = require(j, path, "from").get<double>();
        const double to = require(j, path, "to").get<double>();
        const long steps = require(j, path, "steps").get<long>();
        if (steps < 1)
            throw ConfigError(join_path(path, "steps"), "must be >= 1");
        std::vector<double> grid(static_cast<std::size_t>(steps));
        for (long i = 0; i < steps; ++i)
            grid[static_cast<std::size_t>(i)] =
                steps == 1 ? from : from + (to - from) * static_cast<double>(i) / (steps - 1);
        return grid;
    }
    throw ConfigError(path, "expected an array or {from, to, steps}");
}

// --- config -----------------------------------------------------------------

struct ParsedConfig {
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    int workers = 1;
    ConvergenceCfg conv;
    json model;
    std::string base_dir;  // directory of the config file, for relative paths

    bool topology = false;
    bool theorem2 = false;
    bool absorption = false;
    long horizon = 500;
    double edge_mass_threshold = 0.01;
    double theorem2_tol = 1e-9;
    std::vector<long> contact_trace_nodes;
    std::vector<long> contact_trace_times;

    long walk_start = 0;
    long n_walks = 100000;
    long step_cap = 1000000;

    json sweep;
    json effective;  // normalized config with overrides applied
};

ParsedConfig parse_config(const CliOptions& opts) {
    if (!fs::exists(opts.config_path))
        throw ConfigError("", "config file not found: " + opts.config_path);
    json j;
    try {
        j = json::parse(read_file(opts.config_path));
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("config is not valid JSON: ") + e.what());
    }

    check_keys(j, "",
               {"seed", "out_dir", "stride", "workers", "convergence", "model",
                "analysis", "walk", "sweep"});

    ParsedConfig cfg;
    cfg.base_dir = fs::path(opts.config_path).parent_path().string();
    cfg.seed = static_cast<std::uint64_t>(int_or(j, "", "seed", 0));
    cfg.out_dir = str_or(j, "", "out_dir", "out");
    cfg.workers = static_cast<int>(int_or(j, "", "workers", 1));
    cfg.conv.stride = int_or(j, "", "stride", 1);

    if (j.contains("convergence")) {
        const json& c = j["convergence"];
        check_keys(c, "convergence", {"tol_step", "window", "max_steps", "eps_h", "metric"});
        cfg.conv.tol_step = num_or(c, "convergence", "tol_step", cfg.conv.tol_step);
        cfg.conv.window = static_cast<int>(int_or(c, "convergence", "window", cfg.conv.window));
        cfg.conv.max_steps = int_or(c, "convergence", "max_steps", cfg.conv.max_steps);
        cfg.conv.eps_h = num_or(c, "convergence", "eps_h", cfg.conv.eps_h);
        const std::string metric = str_or(c, "convergence", "metric", "euclidean");
        try {
            cfg.conv.metric = norm_from_name(metric);
        } catch (const DomainError& e) {
            throw ConfigError("convergence.metric", e.what());
        }
    }

    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        check_keys(a, "analysis",
                   {"topology", "theorem2", "absorption", "horizon",
                    "edge_mass_threshold", "theorem2_tol", "contact_trace_nodes",
                    "contact_trace_times"});
        cfg.topology = bool_or(a, "analysis", "topology", false);
        cfg.theorem2 = bool_or(a, "analysis", "theorem2", false);
        cfg.absorption = bool_or(a, "analysis", "absorption", false);
        cfg.horizon = int_or(a, "analysis", "horizon", cfg.horizon);
        cfg.edge_mass_threshold =
            num_or(a, "analysis", "edge_mass_threshold", cfg.edge_mass_threshold);
        cfg.theorem2_tol = num_or(a, "analysis", "theorem2_tol", cfg.theorem2_tol);
        if (a.contains("contact_trace_nodes"))
            for (double v : num_array(a["contact_trace_nodes"], "analysis.contact_trace_nodes"))
                cfg.contact_trace_nodes.push_back(static_cast<long>(v));
        if (a.contains("contact_trace_times"))
            for (double v : num_array(a["contact_trace_times"], "analysis.contact_trace_times"))
                cfg.contact_trace_times.push_back(static_cast<long>(v));
    }

    if (j.contains("walk")) {
        const json& w = j["walk"];
        check_keys(w, "walk", {"start", "n_walks", "step_cap"});
        cfg.walk_start = int_or(w, "walk", "start", 0);
        cfg.n_walks = int_or(w, "walk", "n_walks", cfg.n_walks);
        cfg.step_cap = int_or(w, "walk", "step_cap", cfg.step_cap);
    }

    if (j.contains("model")) cfg.model = j["model"];
    if (j.contains("sweep")) cfg.sweep = j["sweep"];

    // Overrides, reflected back into the effective config.
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.out_dir) cfg.out_dir = *opts.out_dir;
    else if (const char* env = std::getenv("AVGDYN_OUT_DIR"); env && *env)
        cfg.out_dir = env;
    if (opts.stride) cfg.conv.stride = *opts.stride;
    if (opts.workers > 0) cfg.workers = opts.workers;
    if (cfg.conv.stride < 1)
        throw ConfigError("stride", "must be >= 1");

    json eff = j;
    eff["seed"] = cfg.seed;
    eff["out_dir"] = cfg.out_dir;
    eff["stride"] = cfg.conv.stride;
    eff["workers"] = cfg.workers;
    cfg.effective = std::move(eff);
    return cfg;
}

// --- model building ---------------------------------------------------------

Graph graph_from_json(const json& j, const std::string& path, std::uint64_t dflt_seed) {
    check_keys(j, path, {"family", "n", "p", "k", "radius", "torus", "seed"});
    GraphSpec spec;
    try {
        spec.family = graph_family_from_name(
            require(j, path, "family").get<std::string>());
    } catch (const DomainError& e) {
        throw ConfigError(join_path(path, "family"), e.what());
    }
    spec.n = static_cast<int>(require(j, path, "n").get<long>());
    spec.p = num_or(j, path, "p", 0.0);
    spec.k = static_cast<int>(int_or(j, path, "k", 0));
    spec.radius = static_cast<int>(int_or(j, path, "radius", 1));
    spec.torus = bool_or(j, path, "torus", false);
    spec.seed = static_cast<std::uint64_t>(int_or(j, path, "seed",
                                                  static_cast<long>(dflt_seed)));
    try {
        return generate(spec).graph;
    } catch (const DomainError& e) {
        throw ConfigError(path, e.what());
    }
}

MatrixXd dense_from_json(const json& j, const std::string& path,
                         const std::string& base_dir) {
    if (j.is_object() && j.contains("csv")) {
        check_keys(j, path, {"csv"});
        fs::path p = j["csv"].get<std::string>();
        if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
        return matrix_from_csv(read_file(p.string()));
    }
    if (j.is_object()) {
        check_keys(j, path, {"n", "d", "entries", "row_stochastic"});
        const long n = require(j, path, "n").get<long>();
        const long d = require(j, path, "d").get<long>();
        const auto entries = num_array(require(j, path, "entries"),
                                       join_path(path, "entries"));
        if (static_cast<long>(entries.size()) != n * d)
            throw ConfigError(join_path(path, "entries"), "length != n*d");
        MatrixXd m(n, d);
        for (long i = 0; i < n; ++i)
            for (long c = 0; c < d; ++c)
                m(i, c) = entries[static_cast<std::size_t>(i * d + c)];
        return m;
    }
    if (j.is_array()) {
        // Rows-of-rows shorthand.
        MatrixXd m;
        const std::size_t rows = j.size();
        for (std::size_t i = 0; i < rows; ++i) {
            const auto row = num_array(j[i], path);
            if (i == 0) m.resize(static_cast<long>(rows), static_cast<long>(row.size()));
            if (static_cast<long>(row.size()) != m.cols())
                throw ConfigError(path, "ragged matrix rows");
            for (std::size_t c = 0; c < row.size(); ++c)
                m(static_cast<long>(i), static_cast<long>(c)) = row[c];
        }
        if (rows == 0)
            throw ConfigError(path, "empty matrix");
        return m;
    }
    throw ConfigError(path, "expected a matrix (envelope, rows, or {csv: path})");
}

struct StationarySystem {
    StochasticMatrix a;
    VectorXd lambda;
    StateMatrix b;
};

struct BuiltModel {
    Model model;
    std::optional<StationarySystem> stationary;
};

BuiltModel build_model(const ParsedConfig& cfg) {
    const std::string path = "model";
    const json& m = cfg.model;
    if (m.is_null())
        throw ConfigError(path, "missing");
    const std::string preset = require(m, path, "preset").get<std::string>();

    try {
        if (preset == "contrarian") {
            check_keys(m, path,
                       {"preset", "graph", "gamma", "activation_fraction", "norm",
                        "dims", "half_width"});
            ContrarianConfig c;
            c.base_graph = graph_from_json(require(m, path, "graph"),
                                           join_path(path, "graph"),
                                           mix_seed(cfg.seed, 0x6a1fULL));
            c.gamma = num_or(m, path, "gamma", 0.1);
            c.activation_fraction = num_or(m, path, "activation_fraction", 0.5);
            c.norm = norm_from_name(str_or(m, path, "norm", "euclidean"));
            c.dims = static_cast<int>(int_or(m, path, "dims", 2));
            c.half_width = num_or(m, path, "half_width", 1.0);
            c.seed = cfg.seed;
            return {contrarian_model(c), std::nullopt};
        }
        if (preset == "swarm") {
            check_keys(m, path,
                       {"preset", "n", "k", "landmarks", "n_landmarks", "gamma", "mode"});
            SwarmConfig c;
            c.n = static_cast<int>(int_or(m, path, "n", 20));
            c.k = static_cast<int>(int_or(m, path, "k", 3));
            c.n_landmarks = static_cast<int>(int_or(m, path, "n_landmarks", 5));
            c.gamma = num_or(m, path, "gamma", 0.1);
            const std::string mode = str_or(m, path, "mode", "synchronous");
            if (mode != "synchronous" && mode != "asynchronous")
                throw ConfigError(join_path(path, "mode"),
                                  "expected synchronous or asynchronous");
            c.synchronous = mode == "synchronous";
            if (m.contains("landmarks")) {
                for (const auto& lm : m["landmarks"]) {
                    const auto pt = num_array(lm, join_path(path, "landmarks"));
                    if (pt.size() != 2)
                        throw ConfigError(join_path(path, "landmarks"),
                                          "each landmark is [x, y]");
                    c.landmarks.emplace_back(pt[0], pt[1]);
                }
            }
            c.seed = cfg.seed;
            return {swarm_model(c), std::nullopt};
        }
        if (preset == "recommender") {
            check_keys(m, path, {"preset", "graph", "matrix", "alpha", "p0"});
            RecommenderConfig c{StochasticMatrix::identity(1), 0.4, 0.5, cfg.seed};
            if (m.contains("matrix")) {
                c.weights = StochasticMatrix::row_stochastic(
                    dense_from_json(m["matrix"], join_path(path, "matrix"), cfg.base_dir));
            } else if (m.contains("graph")) {
                const Graph g = graph_from_json(m["graph"], join_path(path, "graph"),
                                                mix_seed(cfg.seed, 0x6a1fULL));
                c.weights = row_normalize_weights(g, 1.0);
            } else {
                throw ConfigError(path, "recommender needs a graph or a matrix");
            }
            c.alpha = num_or(m, path, "alpha", 0.4);
            c.p0 = num_or(m, path, "p0", 0.5);
            return {recommender_model(c), std::nullopt};
        }
        if (preset == "lq_game") {
            check_keys(m, path,
                       {"preset", "interaction", "graph", "weight_scale", "rewards",
                        "rewards_uniform", "effort_cap"});
            LQGameConfig c{StochasticMatrix::identity(1), VectorXd(), -1.0};
            if (m.contains("interaction")) {
                c.interaction = StochasticMatrix::substochastic(dense_from_json(
                    m["interaction"], join_path(path, "interaction"), cfg.base_dir));
            } else if (m.contains("graph")) {
                const Graph g = graph_from_json(m["graph"], join_path(path, "graph"),
                                                mix_seed(cfg.seed, 0x6a1fULL));
                c.interaction =
                    row_normalize_weights(g, num_or(m, path, "weight_scale", 0.95));
            } else {
                throw ConfigError(path, "lq_game needs an interaction matrix or a graph");
            }
            const int n = c.interaction.rows();
            if (m.contains("rewards")) {
                const auto r = num_array(m["rewards"], join_path(path, "rewards"));
                if (static_cast<int>(r.size()) != n)
                    throw ConfigError(join_path(path, "rewards"), "size != n");
                c.rewards = Eigen::Map<const VectorXd>(r.data(), n);
            } else if (m.contains("rewards_uniform")) {
                const auto range = num_array(m["rewards_uniform"],
                                             join_path(path, "rewards_uniform"));
                if (range.size() != 2)
                    throw ConfigError(join_path(path, "rewards_uniform"), "expected [lo, hi]");
                Rng rng(mix_seed(cfg.seed, 0x4e3aULL));
                c.rewards.resize(n);
                for (int i = 0; i < n; ++i) c.rewards(i) = rng.uniform(range[0], range[1]);
            } else {
                throw ConfigError(path, "lq_game needs rewards or rewards_uniform");
            }
            c.effort_cap = num_or(m, path, "effort_cap", -1.0);
            Model model = lq_best_reply_model(c);
            const ScheduleStep step = model.schedule.at(0, model.x0.values());
            StationarySystem sys{step.a, model.schedule.lambda(),
                                 StateMatrix(step.b, model.schedule.bounds())};
            return {std::move(model), std::move(sys)};
        }
        if (preset == "bounded_confidence") {
            check_keys(m, path, {"preset", "epsilon", "n"});
            const double epsilon = num_or(m, path, "epsilon", 0.1);
            const int n = static_cast<int>(int_or(m, path, "n", 100));
            return {bounded_confidence_model(epsilon, n, cfg.seed), std::nullopt};
        }
        if (preset == "affine") {
            check_keys(m, path, {"preset", "a", "lambda", "b", "bounds", "x0"});
            StochasticMatrix a = StochasticMatrix::row_stochastic(
                dense_from_json(require(m, path, "a"), join_path(path, "a"), cfg.base_dir));
            const int n = a.rows();
            const auto lam = num_array(require(m, path, "lambda"), join_path(path, "lambda"));
            if (static_cast<int>(lam.size()) != n)
                throw ConfigError(join_path(path, "lambda"), "size != n");
            VectorXd lambda = Eigen::Map<const VectorXd>(lam.data(), n);
            MatrixXd b = dense_from_json(require(m, path, "b"), join_path(path, "b"),
                                         cfg.base_dir);
            if (b.rows() != n)
                throw ConfigError(join_path(path, "b"), "row count != n");

            const json& bj = require(m, path, "bounds");
            check_keys(bj, join_path(path, "bounds"), {"lower", "upper"});
            const auto lo = num_array(require(bj, join_path(path, "bounds"), "lower"),
                                      join_path(path, "bounds.lower"));
            const auto hi = num_array(require(bj, join_path(path, "bounds"), "upper"),
                                      join_path(path, "bounds.upper"));
            if (lo.size() != hi.size() || static_cast<long>(lo.size()) != b.cols())
                throw ConfigError(join_path(path, "bounds"), "dimension mismatch with b");
            Bounds bounds(Eigen::Map<const VectorXd>(lo.data(), static_cast<long>(lo.size())),
                          Eigen::Map<const VectorXd>(hi.data(), static_cast<long>(hi.size())));

            MatrixXd x0;
            if (m.contains("x0")) {
                x0 = dense_from_json(m["x0"], join_path(path, "x0"), cfg.base_dir);
            } else {
                Rng rng(mix_seed(cfg.seed, 0x0a11ULL));
                x0.resize(n, b.cols());
                for (int i = 0; i < n; ++i)
                    for (int l = 0; l < b.cols(); ++l)
                        x0(i, l) = rng.uniform(bounds.lower()(l), bounds.upper()(l));
            }

            StationarySystem sys{a, lambda, StateMatrix(b, bounds)};
            Model model{UpdateSchedule::stationary(a, lambda, b, bounds),
                        StateMatrix(x0, bounds)};
            return {std::move(model), std::move(sys)};
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(join_path(path, "preset"), "unknown preset: " + preset);
}

// --- misc -------------------------------------------------------------------

void write_run_meta(const ParsedConfig& cfg, const std::string& command) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    json meta;
    meta["command"] = command;
    meta["timestamp"] = stamp;
    write_file((fs::path(cfg.out_dir) / "run_meta.json").string(), meta.dump(2) + "\n");
}

void write_effective_config(const ParsedConfig& cfg) {
    write_file((fs::path(cfg.out_dir) / "effective_config.json").string(),
               cfg.effective.dump(2) + "\n");
}

TopologyReport topology_for(const ParsedConfig& cfg, const BuiltModel& built) {
    InfiniteGraphParams params;
    params.horizon = cfg.horizon;
    params.edge_mass_threshold = cfg.edge_mass_threshold;
    params.augmented = built.model.schedule.has_signals();
    return estimate_infinite_graph(built.model.schedule, built.model.x0, params);
}

int config_failure(const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
}

int runtime_failure(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
}

}  // namespace

// --- commands ----------------------------------------------------------------

int cmd_simulate(const CliOptions& opts) {
    ParsedConfig cfg;
    std::optional<BuiltModel> built;
    try {
        cfg = parse_config(opts);
        built = build_model(cfg);
    } catch (const ConfigError& e) {
        return config_failure(e);
    }

    try {
        const RunResult result = run(built->model.schedule, built->model.x0, cfg.conv);
        const fs::path out(cfg.out_dir);
        write_file((out / "trajectory.csv").string(), trajectory_to_csv(result.trajectory));
        write_file((out / "outcome.json").string(), outcome_to_json(result.outcome) + "\n");

        if (cfg.topology || cfg.theorem2) {
            const TopologyReport topo = topology_for(cfg, *built);
            if (cfg.topology)
                write_file((out / "topology.json").string(), topology_to_json(topo) + "\n");
            if (cfg.theorem2) {
                const Theorem2Report t2 = check_theorem2_conditions(
                    built->model.schedule, built->model.x0, topo, cfg.horizon,
                    cfg.theorem2_tol);
                write_file((out / "theorem2.json").string(), theorem2_to_json(t2) + "\n");
            }
        }
        if (cfg.absorption) {
            if (!built->stationary)
                throw DomainError("absorption analysis needs a stationary model");
            const StationarySystem& sys = *built->stationary;
            const AbsorptionReport report = absorption_report(
                sys.a, sys.lambda, sys.b, built->model.schedule.bounds());
            write_file((out / "absorption.json").string(),
                       absorption_to_json(report) + "\n");
        }
        if (!cfg.contact_trace_nodes.empty()) {
            if (!built->stationary)
                throw DomainError("contact tracing needs a stationary model");
            const StationarySystem& sys = *built->stationary;
            const AugmentedSystem aug =
                augment(sys.a, sys.lambda, sys.b, built->model.schedule.bounds());
            std::string csv = "node,t,origin,probability\n";
            std::vector<long> times = cfg.contact_trace_times;
            if (times.empty()) times = {0, 1, 2, 5, 10, 100};
            for (long node : cfg.contact_trace_nodes) {
                for (long t : times) {
                    const VectorXd dist = contact_trace(aug, static_cast<int>(node), t);
                    for (int k = 0; k < dist.size(); ++k) {
                        csv += std::to_string(node) + "," + std::to_string(t) + "," +
                               (k < aug.n_agents()
                                    ? "node_" + std::to_string(k)
                                    : "ghost_" + std::to_string(k - aug.n_agents())) +
                               "," + fmt_real(dist(k)) + "\n";
                    }
                }
            }
            write_file((out / "contact_trace.csv").string(), csv);
        }

        write_effective_config(cfg);
        write_run_meta(cfg, "simulate");
        return kExitOk;
    } catch (const std::exception& e) {
        return runtime_failure(e);
    }
}

int cmd_steady_state(const CliOptions& opts) {
    ParsedConfig cfg;
    std::optional<BuiltModel> built;
    try {
        cfg = parse_config(opts);
        built = build_model(cfg);
        if (!built->stationary)
            throw ConfigError("model.preset",
                              "steady-state needs a stationary system (affine or lq_game)");
    } catch (const ConfigError& e) {
        return config_failure(e);
    }

    try {
        const StationarySystem& sys = *built->stationary;
        const Bounds& bounds = built->model.schedule.bounds();
        const AbsorptionReport report = absorption_report(sys.a, sys.lambda, sys.b, bounds);
        const fs::path out(cfg.out_dir);
        write_file((out / "absorption.json").string(), absorption_to_json(report) + "\n");
        write_file((out / "fundamental.csv").string(), matrix_to_csv(report.fundamental));
        write_file((out / "absorb_probs.csv").string(), matrix_to_csv(report.absorb_probs));
        write_file((out / "augmented_system.json").string(),
                   augmented_to_json(augment(sys.a, sys.lambda, sys.b, bounds)) + "\n");
        write_effective_config(cfg);
        write_run_meta(cfg, "steady-state");
        return kExitOk;
    } catch (const std::exception& e) {
        return runtime_failure(e);
    }
}

int cmd_topology(const CliOptions& opts) {
    ParsedConfig cfg;
    std::optional<BuiltModel> built;
    try {
        cfg = parse_config(opts);
        built = build_model(cfg);
    } catch (const ConfigError& e) {
        return config_failure(e);
    }

    try {
        const TopologyReport topo = topology_for(cfg, *built);
        const Theorem2Report t2 = check_theorem2_conditions(
            built->model.schedule, built->model.x0, topo, cfg.horizon, cfg.theorem2_tol);
        const fs::path out(cfg.out_dir);
        write_file((out / "topology.json").string(), topology_to_json(topo) + "\n");
        write_file((out / "theorem2.json").string(), theorem2_to_json(t2) + "\n");
        write_effective_config(cfg);
        write_run_meta(cfg, "topology");
        return kExitOk;
    } catch (const std::exception& e) {
        return runtime_failure(e);
    }
}

int cmd_walk(const CliOptions& opts) {
    ParsedConfig cfg;
    std::optional<BuiltModel> built;
    try {
        cfg = parse_config(opts);
        built = build_model(cfg);
        if (!built->stationary)
            throw ConfigError("model.preset",
                              "walk needs a stationary system (affine or lq_game)");
    } catch (const ConfigError& e) {
        return config_failure(e);
    }

    try {
        const StationarySystem& sys = *built->stationary;
        const Bounds& bounds = built->model.schedule.bounds();
        const AugmentedSystem aug = augment(sys.a, sys.lambda, sys.b, bounds);
        const MatrixXd probs = absorption_probabilities(aug);
        const MatrixXd f = fundamental_matrix(sys.a, sys.lambda);

        const int start = static_cast<int>(cfg.walk_start);
        const WalkStats stats =
            simulate_walks(aug, start, cfg.n_walks, cfg.seed, cfg.step_cap);
        const double n_completed =
            static_cast<double>(stats.n_walks - stats.capped_walks);

        json out_json;
        bool all_within = true;
        json ghosts = json::array();
        for (int g = 0; g < aug.n_ghosts(); ++g) {
            const double p = probs(start, g);
            const double emp = stats.absorb_counts[g] / n_completed;
            const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / n_completed);
            const bool within = std::abs(emp - p) <= 3.0 * sigma + 1e-12;
            all_within = all_within && within;
            ghosts.push_back({{"ghost", g},
                              {"analytic", p},
                              {"empirical", emp},
                              {"sigma", sigma},
                              {"within_3sigma", within}});
        }
        out_json["absorption"] = std::move(ghosts);
        out_json["verdict"] = all_within ? "within CI" : "outside CI";

        // Visit-count variance of an absorbing chain: F(2 diag(F) - I) - F.^2.
        const int n = aug.n_agents();
        const MatrixXd fvar =
            f * (2.0 * MatrixXd(f.diagonal().asDiagonal()) - MatrixXd::Identity(n, n)) -
            f.cwiseProduct(f);
        json visits = json::array();
        double max_diff = 0.0;
        for (int jnode = 0; jnode < n; ++jnode) {
            const double analytic = f(start, jnode);
            const double emp = stats.visit_counts[jnode] / n_completed;
            const double sigma =
                std::sqrt(std::max(fvar(start, jnode), 0.0) / n_completed);
            max_diff = std::max(max_diff, std::abs(emp - analytic));
            visits.push_back({{"node", jnode},
                              {"analytic", analytic},
                              {"empirical", emp},
                              {"sigma", sigma},
                              {"within_5sigma", std::abs(emp - analytic) <= 5.0 * sigma + 1e-12}});
        }
        out_json["visits"] = std::move(visits);
        out_json["max_abs_visit_diff"] = max_diff;
        out_json["expected_returns"] = {{"analytic", f(start, start) - 1.0},
                                        {"empirical", stats.return_count / n_completed}};
        out_json["capped_walks"] = stats.capped_walks;
        out_json["n_walks"] = stats.n_walks;

        if (!cfg.contact_trace_times.empty()) {
            json traces = json::array();
            for (long t : cfg.contact_trace_times) {
                const VectorXd dist = contact_trace(aug, start, t);
                traces.push_back(
                    {{"t", t},
                     {"distribution",
                      std::vector<double>(dist.data(), dist.data() + dist.size())}});
            }
            out_json["contact_trace"] = std::move(traces);
        }

        write_file((fs::path(cfg.out_dir) / "walk.json").string(), out_json.dump(2) + "\n");
        write_effective_config(cfg);
        write_run_meta(cfg, "walk");
        return kExitOk;
    } catch (const std::exception& e) {
        return runtime_failure(e);
    }
}

namespace {

struct SweepPlan {
    std::string kind;
    // curtain
    std::optional<StochasticMatrix> weights;
    std::vector<double> alpha_grid, p0_grid;
    int trials = 1;
    // transitivity
    int n = 100;
    int radius = 2;
    std::vector<double> p_grid;
    int iters_per_p = 20;
    double weight_scale = 0.95;
    bool torus = false;
};

SweepPlan parse_sweep(const ParsedConfig& cfg) {
    const json& s = cfg.sweep;
    if (s.is_null())
        throw ConfigError("sweep", "missing");
    SweepPlan plan;
    plan.kind = require(s, "sweep", "kind").get<std::string>();
    if (plan.kind == "curtain") {
        check_keys(s, "sweep",
                   {"kind", "graph", "matrix", "alpha_grid", "p0_grid", "trials"});
        if (s.contains("matrix")) {
            plan.weights = StochasticMatrix::row_stochastic(
                dense_from_json(s["matrix"], "sweep.matrix", cfg.base_dir));
        } else if (s.contains("graph")) {
            const Graph g = graph_from_json(s["graph"], "sweep.graph",
                                            mix_seed(cfg.seed, 0x6a1fULL));
            plan.weights = row_normalize_weights(g, 1.0);
        } else {
            throw ConfigError("sweep", "curtain needs a graph or a matrix");
        }
        plan.alpha_grid = grid_from_json(require(s, "sweep", "alpha_grid"), "sweep.alpha_grid");
        plan.p0_grid = grid_from_json(require(s, "sweep", "p0_grid"), "sweep.p0_grid");
        plan.trials = static_cast<int>(int_or(s, "sweep", "trials", 1));
        if (plan.trials < 1)
            throw ConfigError("sweep.trials", "must be >= 1");
        return plan;
    }
    if (plan.kind == "transitivity") {
        check_keys(s, "sweep",
                   {"kind", "n", "radius", "p_grid", "iters_per_p", "weight_scale",
                    "torus"});
        plan.n = static_cast<int>(int_or(s, "sweep", "n", 100));
        plan.radius = static_cast<int>(int_or(s, "sweep", "radius", 2));
        plan.p_grid = grid_from_json(require(s, "sweep", "p_grid"), "sweep.p_grid");
        plan.iters_per_p = static_cast<int>(int_or(s, "sweep", "iters_per_p", 20));
        plan.weight_scale = num_or(s, "sweep", "weight_scale", 0.95);
        plan.torus = bool_or(s, "sweep", "torus", false);
        if (plan.iters_per_p < 1)
            throw ConfigError("sweep.iters_per_p", "must be >= 1");
        return plan;
    }
    throw ConfigError("sweep.kind", "expected curtain or transitivity");
}

std::string sanitize_csv_field(std::string text) {
    for (char& c : text) {
        if (c == ',' || c == '\n') c = ';';
    }
    return text;
}

}  // namespace

int cmd_sweep(const CliOptions& opts) {
    ParsedConfig cfg;
    SweepPlan plan;
    try {
        cfg = parse_config(opts);
        plan = parse_sweep(cfg);
    } catch (const ConfigError& e) {
        return config_failure(e);
    }

    try {
        const fs::path out(cfg.out_dir);
        const fs::path cell_dir = out / "cells";
        fs::create_directories(cell_dir);

        const bool curtain = plan.kind == "curtain";
        const std::size_t n_cells =
            curtain ? plan.alpha_grid.size() * plan.p0_grid.size() : plan.p_grid.size();

        auto cell_path = [&](std::size_t index) {
            char name[32];
            std::snprintf(name, sizeof(name), "cell_%05zu.csv", index);
            return (cell_dir / name).string();
        };

        auto compute_cell = [&](std::size_t index) -> std::string {
            try {
                if (curtain) {
                    const std::size_t ai = index / plan.p0_grid.size();
                    const std::size_t pi = index % plan.p0_grid.size();
                    const CurtainCell cell =
                        curtain_cell(*plan.weights, plan.alpha_grid[ai], plan.p0_grid[pi],
                                     plan.trials, cfg.seed, index, cfg.conv);
                    std::string row = curtain_cells_to_csv({cell}, cfg.seed);
                    return row.substr(row.find('\n') + 1);  // drop header
                }
                const TransitivityRow row =
                    transitivity_level(plan.n, plan.radius, plan.p_grid[index],
                                       plan.iters_per_p, plan.weight_scale, cfg.seed, index,
                                       plan.torus);
                std::string text = transitivity_rows_to_csv({row}, cfg.seed);
                return text.substr(text.find('\n') + 1);
            } catch (const std::exception& e) {
                if (curtain) {
                    const std::size_t ai = index / plan.p0_grid.size();
                    const std::size_t pi = index % plan.p0_grid.size();
                    return fmt_real(plan.alpha_grid[ai]) + "," + fmt_real(plan.p0_grid[pi]) +
                           "," + std::to_string(plan.trials) + ",nan,error,0,0,0,0," +
                           std::to_string(cfg.seed) + "," + sanitize_csv_field(e.what()) +
                           "\n";
                }
                return fmt_real(plan.p_grid[index]) + ",nan,nan,0," +
                       std::to_string(cfg.seed) + "," + sanitize_csv_field(e.what()) + "\n";
            }
        };

        // Cells are pure functions of (config, seed, index); existing cell
        // files are reused so interrupted sweeps resume where they stopped.
        std::atomic<std::size_t> next{0};
        const int workers =
            std::max(1, std::min<int>(cfg.workers, static_cast<int>(n_cells)));
        auto worker = [&]() {
            while (true) {
                const std::size_t index = next.fetch_add(1);
                if (index >= n_cells) return;
                const std::string path = cell_path(index);
                if (fs::exists(path)) continue;
                write_file(path, compute_cell(index));
            }
        };
        if (workers == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        // Merge in index order.
        std::string header =
            curtain ? curtain_cells_to_csv({}, cfg.seed) : transitivity_rows_to_csv({}, cfg.seed);
        std::string merged = header;
        std::size_t failed = 0;
        for (std::size_t index = 0; index < n_cells; ++index) {
            const std::string row = read_file(cell_path(index));
            if (row.find(",error,") != std::string::npos ||
                row.rfind("nan,nan", 0) != std::string::npos ||
                row.find(",nan,nan,") != std::string::npos)
                ++failed;
            merged += row;
        }
        write_file((out / (curtain ? "grid.csv" : "table.csv")).string(), merged);
        write_effective_config(cfg);
        write_run_meta(cfg, "sweep");

        if (failed == n_cells) {
            std::cerr << "error: all " << n_cells << " sweep cells failed\n";
            return kExitRuntime;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        return runtime_failure(e);
    }
}

}  // namespace avgdyn
