#pragma once

#include "avgdyn/matrix.hpp"
#include "avgdyn/schedule.hpp"

#include <utility>
#include <vector>

namespace avgdyn {

/// SCC partition plus the long-run interaction estimates. Component labels
/// are deterministic: they are assigned in order of each component's
/// smallest node id. A component is a sink (SSCC) iff it has no edge into
/// another component; every node is either in a sink SCC or quasi-connected.
struct TopologyReport {
    int n_nodes = 0;
    std::vector<int> scc_ids;                     // per-node component label
    std::vector<int> sink_sccs;                   // sorted labels
    std::vector<int> quasi_connected;             // sorted node ids
    double delta = 0.0;                           // smallest realized positive weight
    std::vector<std::pair<int, int>> g_inf_edges; // sorted, only set by estimation
    int longest_exit_distance = 0;                // D: max hops from a QC node to an exit
    int realization_period = 0;                   // T: max recurrence gap of any edge

    int scc_count() const;
    bool is_sink(int label) const;
    /// Node ids of each sink component, indexed by position in sink_sccs.
    std::vector<std::vector<int>> sink_members() const;
};

TopologyReport scc_decompose(const std::vector<std::vector<int>>& adjacency);
TopologyReport scc_decompose(const StochasticMatrix& graph);

struct InfiniteGraphParams {
    long horizon = 1000;
    /// An edge counts as persistent when its cumulative weight over the
    /// trailing half of the horizon reaches threshold * window length.
    double edge_mass_threshold = 0.01;
    /// Estimate on the augmented matrices A~(t) instead of the raw A(t).
    bool augmented = false;
};

/// Finite-horizon estimate of the infinite graph: rolls the schedule
/// forward from x0 and keeps the edges whose mass over the trailing half
/// of the horizon clears the threshold. The result is an estimate; true
/// divergence of the cumulative weights is not decidable from finite data.
TopologyReport estimate_infinite_graph(const UpdateSchedule& schedule,
                                       const StateMatrix& x0,
                                       const InfiniteGraphParams& params);

struct RegularityReport {
    double delta = 0.0;       // largest delta satisfying Assumptions 1-2, 0 if none
    bool self_loop_ok = false;
    bool symmetric_ok = false;
};

/// Checks the regularity assumptions over steps [t_begin, t_end) of the
/// schedule: positive entries bounded below, positive diagonals, and
/// symmetric support at every step.
RegularityReport check_regularity(const UpdateSchedule& schedule, const StateMatrix& x0,
                                  long t_begin, long t_end);

/// Permuted block view of a matrix: quasi-connected rows first, sink rows
/// after, so that A = [Q R; 0 S] in the permuted order.
struct BlockDecomposition {
    MatrixXd q;                 // m x m, edges among quasi-connected nodes
    MatrixXd r;                 // m x p, edges into sink components
    MatrixXd s;                 // p x p, edges within sink components
    std::vector<int> ordering;  // permuted-to-original node ids
    int n_quasi = 0;

    /// Undo the permutation; reproduces the input matrix exactly.
    MatrixXd reassemble() const;
};

BlockDecomposition block_permutation(const StochasticMatrix& matrix,
                                     const TopologyReport& topo);

/// Wolfowitz row-disparity coefficient: the largest column-wise spread
/// between any two rows. Zero iff the matrix is a rank-one consensus matrix.
double gamma_coefficient(const StochasticMatrix& matrix);

namespace detail {
double gamma_of(const MatrixXd& m);
}

}  // namespace avgdyn
