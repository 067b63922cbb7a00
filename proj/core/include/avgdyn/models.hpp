#pragma once

#include "avgdyn/dynamics.hpp"
#include "avgdyn/generators.hpp"
#include "avgdyn/schedule.hpp"

#include <cstdint>
#include <vector>

namespace avgdyn {

/// Contrarians: activated agents move toward the neighbour whose state is
/// most different from their own, picked with probability proportional to
/// the state distance. Asynchronous, no private signals.
struct ContrarianConfig {
    Graph base_graph;                 // strongly connected digraph
    double gamma = 0.1;               // self-retention of an activated agent
    double activation_fraction = 0.5; // independent activation probability
    Norm norm = Norm::euclidean;
    int dims = 2;
    double half_width = 1.0;          // state space [-h, h]^dims
    std::uint64_t seed = 0;
};

Model contrarian_model(const ContrarianConfig& cfg);

/// Swarm over a k-regular neighbour graph, drifting toward the nearest of a
/// fixed set of landmarks. Synchronous mode averages the full neighbourhood
/// every step; asynchronous mode averages a random non-empty subset.
struct SwarmConfig {
    int n = 20;
    int k = 3;
    std::vector<std::pair<double, double>> landmarks;  // drawn if empty
    int n_landmarks = 5;
    double gamma = 0.3;
    bool synchronous = true;
    std::uint64_t seed = 0;
};

Model swarm_model(const SwarmConfig& cfg);

/// Users interpolating between neighbours' tastes and a personalised +/-1
/// recommendation matching their current sign.
struct RecommenderConfig {
    StochasticMatrix weights;  // row-stochastic interaction matrix
    double alpha = 0.4;        // recommender weight
    double p0 = 0.5;           // initial fraction of positive agents
    std::uint64_t seed = 0;
};

Model recommender_model(const RecommenderConfig& cfg);

/// Best-reply play of the linear-quadratic network game
/// x(k+1) = A x(k) + r with substochastic interaction matrix A.
struct LQGameConfig {
    StochasticMatrix interaction;  // substochastic, row sums in (0,1)
    VectorXd rewards;
    double effort_cap = -1.0;      // <= 0: derived bound max r_i / (1 - max row sum)
};

Model lq_best_reply_model(const LQGameConfig& cfg);

/// 1-D Hegselmann-Krause: agents average everyone within epsilon.
Model bounded_confidence_model(double epsilon, int n, std::uint64_t seed);

/// One cell of the recommender parameter sweep, aggregated over trials.
struct CurtainCell {
    double alpha = 0.0;
    double p0 = 0.0;
    int trials = 0;
    double mean_x_star = 0.0;          // mean over trials of the agent mean
    OutcomeClass outcome_class = OutcomeClass::non_convergent;  // modal class
    int n_consensus = 0;
    int n_fragmented = 0;
    int n_heterogeneous = 0;
    int n_non_convergent = 0;
};

std::vector<CurtainCell> curtain_sweep(const StochasticMatrix& weights,
                                       const std::vector<double>& alpha_grid,
                                       const std::vector<double>& p0_grid, int trials,
                                       std::uint64_t seed,
                                       const ConvergenceCfg& conv = {});

/// One curtain cell; cell_index keys the trial seed streams so cells can be
/// computed independently (and resumed) without changing results.
CurtainCell curtain_cell(const StochasticMatrix& weights, double alpha, double p0,
                         int trials, std::uint64_t seed, std::uint64_t cell_index,
                         const ConvergenceCfg& conv = {});

/// One rewiring level of the small-world sweep: clustering vs expected
/// walk returns under interaction weights scale / k_i.
struct TransitivityRow {
    double p = 0.0;
    double mean_transitivity = 0.0;
    double mean_expected_returns = 0.0;  // mean over nodes and iterations of F_ii - 1
    int resamples = 0;                   // disconnected samples that were redrawn
};

std::vector<TransitivityRow> transitivity_experiment(int n, int lattice_radius,
                                                     const std::vector<double>& p_grid,
                                                     int iters_per_p, double weight_scale,
                                                     std::uint64_t seed,
                                                     bool torus = false);

/// One rewiring level; level_index keys the graph seed streams.
TransitivityRow transitivity_level(int n, int lattice_radius, double p, int iters_per_p,
                                   double weight_scale, std::uint64_t seed,
                                   std::uint64_t level_index, bool torus = false);

}  // namespace avgdyn
