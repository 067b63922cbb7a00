#pragma once

#include "avgdyn/augmentation.hpp"
#include "avgdyn/matrix.hpp"

#include <cstdint>
#include <vector>

namespace avgdyn {

/// Closed-form steady-state analytics of a stationary private-signal
/// system, read through the absorbing-chain lens: F_ij is the expected
/// number of visits to j of a walk started at i before absorption, and
/// (F Lambda W)_ig the probability of being absorbed at ghost g.
struct AbsorptionReport {
    MatrixXd fundamental;       // F = (I - (I-Lambda)A)^-1
    MatrixXd absorb_probs;      // F Lambda W, N x 2d
    StateMatrix x_star;         // F Lambda b
    VectorXd expected_returns;  // F_ii - 1
    double residual;            // ||F (I - (I-Lambda)A) - I||_inf
};

/// F via LU solve, never an explicit inverse. Requires lambda > 0 somewhere
/// on every closed communicating class of A, otherwise the walk never exits
/// and (I - (I-Lambda)A) is singular.
MatrixXd fundamental_matrix(const StochasticMatrix& a, const VectorXd& lambda);

/// x* = F Lambda b (Friedkin-Johnsen-style fixed point of the affine update).
StateMatrix steady_state(const StochasticMatrix& a, const VectorXd& lambda,
                         const StateMatrix& b);

/// F Lambda W of the augmented system; rows sum to 1 whenever every node can
/// reach a ghost. Throws if some node cannot.
MatrixXd absorption_probabilities(const AugmentedSystem& sys);

AbsorptionReport absorption_report(const StochasticMatrix& a, const VectorXd& lambda,
                                   const StateMatrix& b, const Bounds& bounds);

struct WalkStats {
    std::vector<long> absorb_counts;  // per ghost
    std::vector<long> visit_counts;   // per original node, includes the start visit
    long return_count = 0;            // revisits of the start node
    long n_walks = 0;
    long capped_walks = 0;            // walks cut off at the step cap
};

/// Monte Carlo absorbing walks from one start node. At each visited node i
/// the walk absorbs with probability lambda_i (ghost chosen by the W row)
/// and otherwise moves by the A row; this is exactly a step in A~.
WalkStats simulate_walks(const AugmentedSystem& sys, int start, long n_walks,
                         std::uint64_t seed, long step_cap = 1000000);

/// Origin distribution of a signal sampled at the node after t backward
/// hops: entry j < N is the probability the signal is still node j's
/// initial signal, entry N + g that it came from ghost g. Converges to the
/// node's absorption row as t grows.
VectorXd contact_trace(const AugmentedSystem& sys, int node, long t);

/// Steady state of a converged quasi-connected block system
/// (x*_QC = M x_SC(t0) with M = (I-Q)^-1 R S_limit, x*_SC = S_limit x_SC(t0)).
/// Returns the stacked [x*_QC; x*_SC].
MatrixXd quasi_connected_steady_state(const MatrixXd& q, const MatrixXd& r,
                                      const MatrixXd& s_limit, const MatrixXd& x_sc_t0);

}  // namespace avgdyn
