#include "avgdyn/models.hpp"

#include "avgdyn/rng.hpp"
#include "avgdyn/steady_state.hpp"

#include <algorithm>
#include <cmath>

namespace avgdyn {

namespace {

MatrixXd uniform_states(int n, int d, const Bounds& bounds, Rng& rng) {
    MatrixXd x(n, d);
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < d; ++l)
            x(i, l) = rng.uniform(bounds.lower()(l), bounds.upper()(l));
    }
    return x;
}

}  // namespace

Model contrarian_model(const ContrarianConfig& cfg) {
    const Graph& g = cfg.base_graph;
    if (g.n < 2)
        throw DomainError("contrarian: need at least 2 agents");
    if (cfg.gamma <= 0.0 || cfg.gamma >= 1.0)
        throw DomainError("contrarian: gamma must be in (0,1)");
    if (cfg.activation_fraction <= 0.0 || cfg.activation_fraction > 1.0)
        throw DomainError("contrarian: activation_fraction must be in (0,1]");
    if (scc_decompose(g.out).scc_count() != 1)
        throw DomainError("contrarian: base graph must be strongly connected");

    const int n = g.n;
    const Bounds bounds = Bounds::symmetric(cfg.dims, cfg.half_width);
    const MatrixXd b_fixed = MatrixXd::Zero(n, cfg.dims);  // ignored, Lambda = 0

    // Neighbour lists without self-loops; strong connectivity guarantees
    // every node still has somewhere to look.
    std::vector<std::vector<int>> nbrs(n);
    for (int i = 0; i < n; ++i) {
        for (int j : g.out[i])
            if (j != i) nbrs[i].push_back(j);
        if (nbrs[i].empty())
            throw DomainError("contrarian: node " + std::to_string(i) +
                              " has no neighbours");
    }

    const double gamma = cfg.gamma;
    const double act = cfg.activation_fraction;
    const Norm norm = cfg.norm;
    const std::uint64_t seed = cfg.seed;
    auto emit = [n, gamma, act, norm, seed, nbrs, b_fixed](long t, const MatrixXd& x) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        MatrixXd a = MatrixXd::Identity(n, n);
        std::vector<double> weights;
        for (int i = 0; i < n; ++i) {
            if (!rng.bernoulli(act)) continue;
            weights.clear();
            for (int j : nbrs[i])
                weights.push_back(row_distance(x.row(i), x.row(j), norm));
            // All neighbours coincide with x_i: p_ij is 0/0, fall back to a
            // uniform pick (consensus is absorbing either way).
            const int pick = rng.pick_weighted(weights);
            const int j = nbrs[i][static_cast<std::size_t>(pick)];
            a(i, i) = gamma;
            a(i, j) = 1.0 - gamma;
        }
        return ScheduleStep{StochasticMatrix::row_stochastic(std::move(a)), b_fixed};
    };

    Rng x0_rng(mix_seed(cfg.seed, 0x5eedULL));
    MatrixXd x0 = uniform_states(n, cfg.dims, bounds, x0_rng);
    return Model{UpdateSchedule::feedback(emit, n, VectorXd::Zero(n), bounds),
                 StateMatrix(std::move(x0), bounds)};
}

Model swarm_model(const SwarmConfig& cfg) {
    if (cfg.n < 2 || cfg.k < 1)
        throw DomainError("swarm: need n >= 2 and k >= 1");
    if (cfg.k > 62)
        throw DomainError("swarm: neighbourhood subsets use a 64-bit mask, k <= 62");
    const Bounds bounds = Bounds::symmetric(2, 1.0);

    std::vector<std::pair<double, double>> landmarks = cfg.landmarks;
    if (landmarks.empty()) {
        Rng rng(mix_seed(cfg.seed, 0x1a2dULL));
        for (int l = 0; l < cfg.n_landmarks; ++l)
            landmarks.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
    if (landmarks.empty())
        throw DomainError("swarm: landmark set is empty");

    GraphSpec gspec;
    gspec.family = GraphFamily::k_regular;
    gspec.n = cfg.n;
    gspec.k = cfg.k;
    gspec.seed = mix_seed(cfg.seed, 0x9e0eULL);
    const Graph graph = generate(gspec).graph;

    const int n = cfg.n;
    const double gamma = cfg.gamma;
    if (gamma <= 0.0 || gamma >= 1.0)
        throw DomainError("swarm: gamma must be in (0,1)");
    const bool synchronous = cfg.synchronous;
    const std::uint64_t seed = cfg.seed;

    auto nearest = [landmarks](const MatrixXd& x) {
        MatrixXd b(x.rows(), 2);
        for (int i = 0; i < x.rows(); ++i) {
            int best = 0;
            double best_d2 = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < landmarks.size(); ++l) {
                const double dx = x(i, 0) - landmarks[l].first;
                const double dy = x(i, 1) - landmarks[l].second;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best_d2) {  // strict: ties go to the lowest index
                    best_d2 = d2;
                    best = static_cast<int>(l);
                }
            }
            b(i, 0) = landmarks[best].first;
            b(i, 1) = landmarks[best].second;
        }
        return b;
    };

    auto emit = [n, graph, synchronous, seed, nearest](long t, const MatrixXd& x) {
        MatrixXd a = MatrixXd::Zero(n, n);
        if (synchronous) {
            for (int i = 0; i < n; ++i) {
                a(i, i) = 0.5;
                const double share = 0.5 / static_cast<double>(graph.degree(i));
                for (int j : graph.out[i]) a(i, j) += share;
            }
        } else {
            Rng rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
            for (int i = 0; i < n; ++i) {
                const auto& nbrs = graph.out[i];
                const int k = static_cast<int>(nbrs.size());
                // Uniform non-empty subset of the neighbourhood.
                const std::uint64_t mask =
                    1 + rng.next() % ((1ULL << k) - 1);
                int chosen = 0;
                for (int s = 0; s < k; ++s)
                    if (mask & (1ULL << s)) ++chosen;
                a(i, i) = 0.5;
                const double share = 0.5 / static_cast<double>(chosen);
                for (int s = 0; s < k; ++s)
                    if (mask & (1ULL << s)) a(i, nbrs[s]) += share;
            }
        }
        return ScheduleStep{StochasticMatrix::row_stochastic(std::move(a)), nearest(x)};
    };

    Rng x0_rng(mix_seed(cfg.seed, 0x0f00ULL));
    MatrixXd x0 = uniform_states(n, 2, bounds, x0_rng);
    return Model{
        UpdateSchedule::feedback(emit, n, VectorXd::Constant(n, gamma), bounds),
        StateMatrix(std::move(x0), bounds)};
}

Model recommender_model(const RecommenderConfig& cfg) {
    if (!cfg.weights.square())
        throw DimensionError("recommender: weights must be square");
    if (cfg.weights.kind() != StochasticMatrix::Kind::row_stochastic)
        throw DomainError("recommender: weights must be row stochastic");
    if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0)
        throw DomainError("recommender: alpha must be in (0,1)");
    if (cfg.p0 < 0.0 || cfg.p0 > 1.0)
        throw DomainError("recommender: p0 must be in [0,1]");

    const int n = cfg.weights.rows();
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const StochasticMatrix a = cfg.weights;

    auto emit = [a](long, const MatrixXd& x) {
        MatrixXd sigma(x.rows(), 1);
        for (int i = 0; i < x.rows(); ++i)
            sigma(i, 0) = x(i, 0) >= 0.0 ? 1.0 : -1.0;  // sign(0) = +1
        return ScheduleStep{a, std::move(sigma)};
    };

    // Initial tastes: a seeded subset of round(p0 * N) agents gets positive
    // sign, magnitudes uniform in (0,1].
    Rng rng(mix_seed(cfg.seed, 0xc0deULL));
    const int n_pos = static_cast<int>(std::lround(cfg.p0 * n));
    const std::vector<int> positive = rng.sample_without_replacement(n, n_pos);
    MatrixXd x0(n, 1);
    std::vector<bool> is_pos(n, false);
    for (int i : positive) is_pos[i] = true;
    for (int i = 0; i < n; ++i) {
        const double mag = 1.0 - rng.uniform();  // (0, 1]
        x0(i, 0) = is_pos[i] ? mag : -mag;
    }

    return Model{
        UpdateSchedule::feedback(emit, n, VectorXd::Constant(n, cfg.alpha), bounds),
        StateMatrix(std::move(x0), bounds)};
}

Model lq_best_reply_model(const LQGameConfig& cfg) {
    if (!cfg.interaction.square())
        throw DimensionError("lq game: interaction matrix must be square");
    const int n = cfg.interaction.rows();
    if (cfg.rewards.size() != n)
        throw DimensionError("lq game: rewards size mismatch");
    const MatrixXd& sub = cfg.interaction.values();

    VectorXd lambda(n);
    MatrixXd a(n, n);
    double cap_bound = 0.0;
    double max_row_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double s = sub.row(i).sum();
        if (s >= 1.0 - StochasticMatrix::kRowSumTol)
            throw DomainError("lq game: row " + std::to_string(i) +
                              " sum is not < 1; no Nash equilibrium guarantee");
        if (s <= 0.0)
            throw DomainError("lq game: row " + std::to_string(i) +
                              " has no interactions");
        if (cfg.rewards(i) < 0.0)
            throw DomainError("lq game: rewards must be nonnegative");
        lambda(i) = 1.0 - s;
        a.row(i) = sub.row(i) / s;
        max_row_sum = std::max(max_row_sum, s);
    }
    cap_bound = cfg.rewards.maxCoeff() / (1.0 - max_row_sum);

    double cap = cfg.effort_cap > 0.0 ? cfg.effort_cap : cap_bound * (1.0 + 1e-9);
    if (cap < cap_bound)
        throw DomainError("lq game: effort_cap below the equilibrium bound " +
                          std::to_string(cap_bound));

    const Bounds bounds(VectorXd::Zero(1), VectorXd::Constant(1, cap));
    // Identify (I - Lambda) A with the substochastic interaction matrix and
    // Lambda b with the rewards: b_i = r_i / lambda_i.
    MatrixXd b(n, 1);
    for (int i = 0; i < n; ++i) b(i, 0) = cfg.rewards(i) / lambda(i);

    return Model{UpdateSchedule::stationary(StochasticMatrix::row_stochastic(std::move(a)),
                                            std::move(lambda), std::move(b), bounds),
                 StateMatrix(MatrixXd::Zero(n, 1), bounds)};
}

Model bounded_confidence_model(double epsilon, int n, std::uint64_t seed) {
    if (epsilon <= 0.0)
        throw DomainError("bounded confidence: epsilon must be positive");
    if (n < 2)
        throw DomainError("bounded confidence: need at least 2 agents");

    const Bounds bounds = Bounds::unit_box(1);
    const MatrixXd b_fixed = MatrixXd::Constant(n, 1, 0.5);  // ignored, Lambda = 0

    auto emit = [n, epsilon, b_fixed](long, const MatrixXd& x) {
        MatrixXd a = MatrixXd::Zero(n, n);
        for (int i = 0; i < n; ++i) {
            int count = 0;
            for (int j = 0; j < n; ++j)
                if (std::abs(x(i, 0) - x(j, 0)) <= epsilon) ++count;
            const double share = 1.0 / static_cast<double>(count);
            for (int j = 0; j < n; ++j)
                if (std::abs(x(i, 0) - x(j, 0)) <= epsilon) a(i, j) = share;
        }
        return ScheduleStep{StochasticMatrix::row_stochastic(std::move(a)), b_fixed};
    };

    Rng rng(mix_seed(seed, 0xb07dULL));
    MatrixXd x0(n, 1);
    for (int i = 0; i < n; ++i) x0(i, 0) = rng.uniform();
    return Model{UpdateSchedule::feedback(emit, n, VectorXd::Zero(n), bounds),
                 StateMatrix(std::move(x0), bounds)};
}

CurtainCell curtain_cell(const StochasticMatrix& weights, double alpha, double p0,
                         int trials, std::uint64_t seed, std::uint64_t cell_index,
                         const ConvergenceCfg& conv) {
    if (trials < 1)
        throw DomainError("curtain_cell: trials must be >= 1");
    CurtainCell cell;
    cell.alpha = alpha;
    cell.p0 = p0;
    cell.trials = trials;
    double mean_sum = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        RecommenderConfig rc{weights, alpha, p0,
                             mix_seed(seed, cell_index * 1000003ULL + trial)};
        const Model model = recommender_model(rc);
        const RunResult res = run(model.schedule, model.x0, conv);
        mean_sum += res.trajectory.states.back().mean();
        switch (res.outcome.outcome_class) {
            case OutcomeClass::consensus: ++cell.n_consensus; break;
            case OutcomeClass::fragmented: ++cell.n_fragmented; break;
            case OutcomeClass::heterogeneous: ++cell.n_heterogeneous; break;
            case OutcomeClass::non_convergent: ++cell.n_non_convergent; break;
        }
    }
    cell.mean_x_star = mean_sum / trials;
    const int counts[4] = {cell.n_consensus, cell.n_fragmented, cell.n_heterogeneous,
                           cell.n_non_convergent};
    const int best = static_cast<int>(std::max_element(counts, counts + 4) - counts);
    cell.outcome_class = static_cast<OutcomeClass>(best);
    return cell;
}

std::vector<CurtainCell> curtain_sweep(const StochasticMatrix& weights,
                                       const std::vector<double>& alpha_grid,
                                       const std::vector<double>& p0_grid, int trials,
                                       std::uint64_t seed, const ConvergenceCfg& conv) {
    if (alpha_grid.empty() || p0_grid.empty())
        throw DomainError("curtain_sweep: empty grid");

    std::vector<CurtainCell> cells;
    cells.reserve(alpha_grid.size() * p0_grid.size());
    std::uint64_t cell_index = 0;
    for (double alpha : alpha_grid) {
        for (double p0 : p0_grid)
            cells.push_back(curtain_cell(weights, alpha, p0, trials, seed, cell_index++, conv));
    }
    return cells;
}

std::vector<TransitivityRow> transitivity_experiment(int n, int lattice_radius,
                                                     const std::vector<double>& p_grid,
                                                     int iters_per_p, double weight_scale,
                                                     std::uint64_t seed, bool torus) {
    if (p_grid.empty() || iters_per_p < 1)
        throw DomainError("transitivity_experiment: empty grid");
    if (weight_scale <= 0.0 || weight_scale >= 1.0)
        throw DomainError("transitivity_experiment: weight_scale must be in (0,1)");

    std::vector<TransitivityRow> rows;
    rows.reserve(p_grid.size());
    for (std::size_t level = 0; level < p_grid.size(); ++level)
        rows.push_back(transitivity_level(n, lattice_radius, p_grid[level], iters_per_p,
                                          weight_scale, seed, level, torus));
    return rows;
}

TransitivityRow transitivity_level(int n, int lattice_radius, double p, int iters_per_p,
                                   double weight_scale, std::uint64_t seed,
                                   std::uint64_t level_index, bool torus) {
    if (iters_per_p < 1)
        throw DomainError("transitivity_level: iters_per_p must be >= 1");
    if (weight_scale <= 0.0 || weight_scale >= 1.0)
        throw DomainError("transitivity_level: weight_scale must be in (0,1)");

    TransitivityRow row;
    row.p = p;
    double trans_sum = 0.0, returns_sum = 0.0;
    for (int iter = 0; iter < iters_per_p; ++iter) {
        GraphSpec spec;
        spec.family = GraphFamily::small_world_rewired;
        spec.n = n;
        spec.radius = lattice_radius;
        spec.torus = torus;
        spec.p = p;
        spec.seed = mix_seed(seed, level_index * 1000003ULL + iter);
        const GeneratedGraph sample = generate(spec);
        row.resamples += sample.resamples;

        trans_sum += transitivity(sample.graph);
        const StochasticMatrix a = row_normalize_weights(sample.graph, weight_scale);
        const MatrixXd f = fundamental_matrix(a, VectorXd::Zero(n));
        returns_sum += (f.diagonal().array() - 1.0).mean();
    }
    row.mean_transitivity = trans_sum / iters_per_p;
    row.mean_expected_returns = returns_sum / iters_per_p;
    return row;
}

}  // namespace avgdyn
