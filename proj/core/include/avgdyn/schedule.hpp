#pragma once

#include "avgdyn/matrix.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace avgdyn {

/// One emitted update: interaction matrix A(t) and private signals b(t).
struct ScheduleStep {
    StochasticMatrix a;
    MatrixXd b;  // N x d
};

/// Generator of (A(t), b(t)) pairs. Stationary schedules repeat a fixed
/// pair, scripted schedules play a finite sequence (holding the last pair
/// afterwards), feedback schedules compute the pair from (t, x(t)).
///
/// Stochastic feedback schedules must derive their randomness from the step
/// index (see mix_seed), so that at(t, x) is a pure function and a run is
/// reproducible from (schedule, x0) alone.
class UpdateSchedule {
public:
    enum class Kind { stationary, scripted, feedback };

    using Emitter = std::function<ScheduleStep(long t, const MatrixXd& x)>;

    static UpdateSchedule stationary(StochasticMatrix a, VectorXd lambda, MatrixXd b,
                                     Bounds bounds);
    static UpdateSchedule scripted(std::vector<StochasticMatrix> a_seq,
                                   std::vector<MatrixXd> b_seq, VectorXd lambda,
                                   Bounds bounds);
    static UpdateSchedule feedback(Emitter emit, int n_agents, VectorXd lambda,
                                   Bounds bounds);

    ScheduleStep at(long t, const MatrixXd& x) const;

    Kind kind() const { return kind_; }
    int n_agents() const { return n_agents_; }
    int dims() const { return bounds_.dims(); }
    const VectorXd& lambda() const { return lambda_; }
    const Bounds& bounds() const { return bounds_; }

    /// True iff any agent weights its private signal (some lambda_i > 0).
    bool has_signals() const;

private:
    UpdateSchedule(Kind kind, int n_agents, VectorXd lambda, Bounds bounds, Emitter emit);

    Kind kind_;
    int n_agents_;
    VectorXd lambda_;
    Bounds bounds_;
    Emitter emit_;
};

/// A runnable model: its schedule plus the initial condition it was
/// sampled with.
struct Model {
    UpdateSchedule schedule;
    StateMatrix x0;
};

}  // namespace avgdyn
