#pragma once

#include "avgdyn/matrix.hpp"

#include <vector>

namespace avgdyn {

/// Ghost-node representation of the affine update. The N original agents
/// are joined by 2d ghost nodes, one pair per state dimension, holding the
/// upper and lower bound of that dimension. Private signals become edge
/// weights to the ghosts and the update collapses to a single row-stochastic
/// matrix:
///
///     A~ = [ (I-Lambda) A   Lambda W ]        x~ = [ x ]
///          [      0            I     ]             [ C ]
///
/// Scaling convention: the stored C block is the bound pattern scaled by d
/// and the stored W block carries a 1/d factor, so W C = b holds exactly
/// while every W row sums to 1 (and hence A~ stays row stochastic). For
/// d = 1 both factors disappear; check that case first when chasing a
/// residual in the reconstruction identity.
class AugmentedSystem {
public:
    /// Validates an externally supplied matrix against the block layout and
    /// recovers W and lambda from it (C comes from the bounds, which the
    /// matrix alone does not carry). Throws FormatError if the ghost rows
    /// are not identity rows or the zero block is violated.
    static AugmentedSystem from_matrix(StochasticMatrix a_tilde, int n_agents,
                                       const Bounds& bounds);

    const StochasticMatrix& a_tilde() const { return a_tilde_; }
    const MatrixXd& c_block() const { return c_; }   // 2d x d, scaled by d
    const MatrixXd& w_block() const { return w_; }   // N x 2d, scaled by 1/d
    const VectorXd& lambda() const { return lambda_; }
    const Bounds& bounds() const { return bounds_; }

    int n_agents() const { return static_cast<int>(w_.rows()); }
    int dims() const { return bounds_.dims(); }
    int n_ghosts() const { return 2 * dims(); }
    int total_nodes() const { return n_agents() + n_ghosts(); }

    /// [x; C] stack used as the augmented state.
    StateMatrix initial_stack(const MatrixXd& x) const;

    /// Row index of the upper/lower ghost of a dimension.
    int ghost_upper(int dim) const { return n_agents() + 2 * dim; }
    int ghost_lower(int dim) const { return n_agents() + 2 * dim + 1; }

private:
    friend AugmentedSystem augment(const StochasticMatrix&, const VectorXd&,
                                   const StateMatrix&, const Bounds&);

    AugmentedSystem(StochasticMatrix a_tilde, MatrixXd c, MatrixXd w, VectorXd lambda,
                    Bounds bounds);

    StochasticMatrix a_tilde_;
    MatrixXd c_;
    MatrixXd w_;
    VectorXd lambda_;
    Bounds bounds_;
};

/// Build the augmented system for (A, Lambda, b) over the given bounds.
/// Signals must lie inside the bounds (the ghost weights would otherwise be
/// negative). Rows with lambda_i = 0 get an all-zero W row.
AugmentedSystem augment(const StochasticMatrix& a, const VectorXd& lambda,
                        const StateMatrix& b, const Bounds& bounds);

struct Deaugmented {
    StochasticMatrix a;
    VectorXd lambda;
    StateMatrix b;
    /// False for rows with lambda_i = 0, whose signal is unconstrained by
    /// the augmented matrix; such b rows are reported as the bounds midpoint.
    std::vector<bool> signal_defined;
};

/// Inverse of augment. Round-trips within 1e-10 on all defined parts.
Deaugmented deaugment(const AugmentedSystem& sys);

/// One step of the augmented dynamics, x~(t+1) = A~ x~(t). The bottom 2d
/// rows of x_tilde must equal the C block and are returned unchanged.
StateMatrix step_augmented(const AugmentedSystem& sys, const StateMatrix& x_tilde);

}  // namespace avgdyn
