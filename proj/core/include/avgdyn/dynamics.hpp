#pragma once

#include "avgdyn/graph_core.hpp"
#include "avgdyn/matrix.hpp"
#include "avgdyn/schedule.hpp"

#include <optional>
#include <string>
#include <vector>

namespace avgdyn {

struct ConvergenceCfg {
    double tol_step = 1e-9;  // max-norm step change considered "still moving"
    int window = 50;         // consecutive quiet steps required
    long max_steps = 100000;
    long stride = 1;         // trajectory recording stride
    double eps_h = -1.0;     // classification threshold; <0 means 1e-4 * diameter
    Norm metric = Norm::euclidean;

    double resolved_eps_h(const Bounds& bounds) const {
        return eps_h >= 0.0 ? eps_h : 1e-4 * bounds.diameter(metric);
    }
};

enum class OutcomeClass { consensus, fragmented, heterogeneous, non_convergent };

const char* outcome_class_name(OutcomeClass c);

struct OutcomeReport {
    bool converged = false;
    long t_stop = 0;
    std::optional<StateMatrix> x_star;  // absent when non-convergent
    double heterogeneity = 0.0;
    OutcomeClass outcome_class = OutcomeClass::non_convergent;
    int cluster_count = 0;
};

struct Trajectory {
    std::vector<long> times;
    std::vector<MatrixXd> states;
};

struct RunResult {
    Trajectory trajectory;
    OutcomeReport outcome;
};

/// One affine update: (I - Lambda) A x + Lambda b.
StateMatrix step_affine(const StochasticMatrix& a, const VectorXd& lambda,
                        const StateMatrix& b, const StateMatrix& x);

/// Iterate the schedule from x0 until the windowed Cauchy test passes or
/// max_steps is hit, then classify the terminal state. Every emitted pair
/// is validated; a bad emission raises ScheduleError with the step index.
RunResult run(const UpdateSchedule& schedule, const StateMatrix& x0,
              const ConvergenceCfg& cfg);

/// Minimum pairwise distance between agent rows. Needs >= 2 agents.
double heterogeneity(const StateMatrix& x, Norm metric = Norm::euclidean);

struct Classification {
    OutcomeClass outcome_class;
    double heterogeneity;
    int cluster_count;
    std::vector<int> cluster_labels;  // per agent, deterministic for fixed order
};

/// Single-linkage clustering at threshold eps_h: consensus iff one cluster,
/// heterogeneous iff every agent is its own cluster (H > eps_h), fragmented
/// otherwise.
Classification classify_outcome(const StateMatrix& x_star, double eps_h,
                                Norm metric = Norm::euclidean);

/// Decay diagnostics of the running products along a schedule: the
/// Wolfowitz coefficient of each sink block product S_r(t:0) and the
/// infinity norm of the quasi-connected block product Q(t:0).
struct ProductDiagnostics {
    std::vector<long> times;
    std::vector<std::vector<double>> gamma_by_sink;  // [sink][step]
    std::vector<double> q_infnorm;                   // empty when no QC nodes
};

ProductDiagnostics product_diagnostics(const UpdateSchedule& schedule,
                                       const StateMatrix& x0,
                                       const TopologyReport& topo, long horizon);

/// Convergence-condition report for the blockwise update. cond1 checks that
/// the per-step blocks Q(t) and R(t) go Cauchy over the trailing half of the
/// horizon; the residual series tests the affine relation
/// R(t) S = (I - Q(t)) M with S and M estimated from the trailing products.
/// M is only estimable from data, so condition 2 stays a residual series
/// rather than a boolean.
struct Theorem2Report {
    bool q_cauchy = false;
    bool r_cauchy = false;
    bool cond1 = false;                  // both blocks converge
    std::vector<double> cond2_residual;  // per recorded step
    /// Necessary condition from the convergence mismatch: heterogeneity is
    /// ruled out when exactly one of Q(t), R(t) settles.
    bool heterogeneity_admissible = false;
};

Theorem2Report check_theorem2_conditions(const UpdateSchedule& schedule,
                                         const StateMatrix& x0,
                                         const TopologyReport& topo, long horizon,
                                         double tol);

namespace detail {
/// Effective update matrix at one step under the topology's view: the raw
/// A(t) when topo covers N nodes, the augmented matrix when it covers
/// N + 2d nodes.
MatrixXd effective_matrix(const UpdateSchedule& schedule, const ScheduleStep& step,
                          const TopologyReport& topo);
}

}  // namespace avgdyn
