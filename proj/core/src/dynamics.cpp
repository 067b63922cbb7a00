#include "avgdyn/dynamics.hpp"

#include "avgdyn/augmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace avgdyn {

const char* outcome_class_name(OutcomeClass c) {
    switch (c) {
        case OutcomeClass::consensus: return "consensus";
        case OutcomeClass::fragmented: return "fragmented";
        case OutcomeClass::heterogeneous: return "heterogeneous";
        case OutcomeClass::non_convergent: return "non-convergent";
    }
    return "non-convergent";
}

StateMatrix step_affine(const StochasticMatrix& a, const VectorXd& lambda,
                        const StateMatrix& b, const StateMatrix& x) {
    if (!a.square())
        throw DimensionError("step_affine: A must be square");
    const int n = a.rows();
    if (x.n_agents() != n || b.n_agents() != n || lambda.size() != n ||
        b.dims() != x.dims())
        throw DimensionError("step_affine: shape mismatch");
    if (a.kind() != StochasticMatrix::Kind::row_stochastic)
        throw DomainError("step_affine: A must be row stochastic");

    MatrixXd next = (VectorXd::Ones(n) - lambda).asDiagonal() * (a.values() * x.values()) +
                    lambda.asDiagonal() * b.values();
    return x.with_values(std::move(next));
}

RunResult run(const UpdateSchedule& schedule, const StateMatrix& x0,
              const ConvergenceCfg& cfg) {
    if (cfg.max_steps < 1)
        throw DomainError("run: max_steps must be >= 1");
    if (x0.n_agents() != schedule.n_agents() || x0.dims() != schedule.dims())
        throw DimensionError("run: x0 shape does not match schedule");

    const int n = schedule.n_agents();
    const VectorXd& lambda = schedule.lambda();
    const Bounds& bounds = schedule.bounds();

    RunResult result;
    result.trajectory.times.push_back(0);
    result.trajectory.states.push_back(x0.values());

    MatrixXd x = x0.values();
    int quiet = 0;
    long t = 0;
    bool converged = false;
    for (; t < cfg.max_steps; ++t) {
        ScheduleStep step = schedule.at(t, x);
        if (step.a.rows() != n || !step.a.square())
            throw ScheduleError(t, "emitted matrix has wrong shape");
        if (step.a.kind() != StochasticMatrix::Kind::row_stochastic)
            throw ScheduleError(t, "emitted matrix is not row stochastic");
        if (step.b.rows() != n || step.b.cols() != schedule.dims())
            throw ScheduleError(t, "emitted signal has wrong shape");
        if (!bounds.contains(step.b))
            throw ScheduleError(t, "emitted signal outside bounds");

        MatrixXd next =
            (VectorXd::Ones(n) - lambda).asDiagonal() * (step.a.values() * x) +
            lambda.asDiagonal() * step.b;

        const double moved = (next - x).cwiseAbs().maxCoeff();
        x = std::move(next);

        if ((t + 1) % cfg.stride == 0) {
            result.trajectory.times.push_back(t + 1);
            result.trajectory.states.push_back(x);
        }

        quiet = moved < cfg.tol_step ? quiet + 1 : 0;
        if (quiet >= cfg.window) {
            converged = true;
            ++t;
            break;
        }
    }

    if (result.trajectory.times.back() != t) {
        result.trajectory.times.push_back(t);
        result.trajectory.states.push_back(x);
    }

    OutcomeReport& outcome = result.outcome;
    outcome.converged = converged;
    outcome.t_stop = t;
    const double eps_h = cfg.resolved_eps_h(bounds);
    const StateMatrix terminal = x0.with_values(x);
    if (n >= 2) {
        const Classification cls = classify_outcome(terminal, eps_h, cfg.metric);
        outcome.heterogeneity = cls.heterogeneity;
        outcome.cluster_count = cls.cluster_count;
        outcome.outcome_class = converged ? cls.outcome_class : OutcomeClass::non_convergent;
    } else {
        outcome.heterogeneity = 0.0;
        outcome.cluster_count = 1;
        outcome.outcome_class =
            converged ? OutcomeClass::consensus : OutcomeClass::non_convergent;
    }
    if (converged) outcome.x_star = terminal;
    return result;
}

double heterogeneity(const StateMatrix& x, Norm metric) {
    const int n = x.n_agents();
    if (n < 2)
        throw DomainError("heterogeneity: needs at least 2 agents");
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            best = std::min(best, row_distance(x.values().row(i), x.values().row(j), metric));
        }
    }
    return best;
}

namespace {

int uf_find(std::vector<int>& parent, int v) {
    while (parent[v] != v) {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    return v;
}

}  // namespace

Classification classify_outcome(const StateMatrix& x_star, double eps_h, Norm metric) {
    const int n = x_star.n_agents();
    if (n < 1)
        throw DomainError("classify_outcome: empty state");
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < x_star.dims(); ++l) {
            if (!std::isfinite(x_star.values()(i, l)))
                throw DomainError("classify_outcome: non-finite state");
        }
    }

    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    double h = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dist =
                row_distance(x_star.values().row(i), x_star.values().row(j), metric);
            h = std::min(h, dist);
            if (dist <= eps_h) parent[uf_find(parent, i)] = uf_find(parent, j);
        }
    }
    if (n == 1) h = 0.0;

    std::vector<int> labels(n, -1);
    int clusters = 0;
    for (int i = 0; i < n; ++i) {
        const int root = uf_find(parent, i);
        if (labels[root] == -1) labels[root] = clusters++;
        labels[i] = labels[root];
    }

    Classification out;
    out.heterogeneity = n == 1 ? 0.0 : h;
    out.cluster_count = clusters;
    out.cluster_labels = std::move(labels);
    if (clusters == 1) {
        out.outcome_class = OutcomeClass::consensus;
    } else if (clusters == n && out.heterogeneity > eps_h) {
        out.outcome_class = OutcomeClass::heterogeneous;
    } else {
        out.outcome_class = OutcomeClass::fragmented;
    }
    return out;
}

namespace detail {

MatrixXd effective_matrix(const UpdateSchedule& schedule, const ScheduleStep& step,
                          const TopologyReport& topo) {
    const int n_aug = schedule.n_agents() + 2 * schedule.dims();
    if (topo.n_nodes == schedule.n_agents()) {
        return step.a.values();
    }
    if (topo.n_nodes == n_aug) {
        return augment(step.a, schedule.lambda(),
                       StateMatrix(step.b, schedule.bounds()), schedule.bounds())
            .a_tilde()
            .values();
    }
    throw DimensionError("topology node count matches neither the raw nor the augmented system");
}

}  // namespace detail

ProductDiagnostics product_diagnostics(const UpdateSchedule& schedule,
                                       const StateMatrix& x0,
                                       const TopologyReport& topo, long horizon) {
    const auto sinks = topo.sink_members();
    const int n = topo.n_nodes;
    const int m = static_cast<int>(topo.quasi_connected.size());

    std::vector<MatrixXd> sink_products;
    sink_products.reserve(sinks.size());
    for (const auto& members : sinks)
        sink_products.push_back(MatrixXd::Identity(static_cast<int>(members.size()),
                                                   static_cast<int>(members.size())));
    MatrixXd q_product = MatrixXd::Identity(m, m);

    ProductDiagnostics out;
    out.gamma_by_sink.resize(sinks.size());

    MatrixXd x = x0.values();
    const VectorXd& lambda = schedule.lambda();
    for (long t = 0; t < horizon; ++t) {
        const ScheduleStep step = schedule.at(t, x);
        const MatrixXd full = detail::effective_matrix(schedule, step, topo);
        if (full.rows() != n)
            throw DimensionError("product_diagnostics: matrix/topology mismatch");

        for (std::size_t r = 0; r < sinks.size(); ++r) {
            const auto& members = sinks[r];
            const int p = static_cast<int>(members.size());
            MatrixXd block(p, p);
            for (int i = 0; i < p; ++i)
                for (int j = 0; j < p; ++j) block(i, j) = full(members[i], members[j]);
            sink_products[r] = block * sink_products[r];
            out.gamma_by_sink[r].push_back(detail::gamma_of(sink_products[r]));
        }
        if (m > 0) {
            MatrixXd q_block(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    q_block(i, j) = full(topo.quasi_connected[i], topo.quasi_connected[j]);
            q_product = q_block * q_product;
            out.q_infnorm.push_back(q_product.cwiseAbs().rowwise().sum().maxCoeff());
        }
        out.times.push_back(t + 1);

        x = (VectorXd::Ones(schedule.n_agents()) - lambda).asDiagonal() *
                (step.a.values() * x) +
            lambda.asDiagonal() * step.b;
    }
    return out;
}

Theorem2Report check_theorem2_conditions(const UpdateSchedule& schedule,
                                         const StateMatrix& x0,
                                         const TopologyReport& topo, long horizon,
                                         double tol) {
    const int m = static_cast<int>(topo.quasi_connected.size());
    Theorem2Report report;
    if (m == 0) {
        // No quasi-connected nodes: Theorem 2 is vacuous and the outcome is
        // governed by the sink components alone.
        report.q_cauchy = report.r_cauchy = report.cond1 = true;
        report.heterogeneity_admissible = false;
        return report;
    }

    const int n = topo.n_nodes;
    const int p = n - m;
    std::vector<int> sink_nodes;
    for (int v = 0; v < n; ++v)
        if (topo.is_sink(topo.scc_ids[v])) sink_nodes.push_back(v);

    const VectorXd& lambda = schedule.lambda();
    auto extract = [&](const MatrixXd& full, MatrixXd& q, MatrixXd& r, MatrixXd& s) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                q(i, j) = full(topo.quasi_connected[i], topo.quasi_connected[j]);
            for (int j = 0; j < p; ++j)
                r(i, j) = full(topo.quasi_connected[i], sink_nodes[j]);
        }
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < p; ++j) s(i, j) = full(sink_nodes[i], sink_nodes[j]);
    };

    // Pass 1: trailing products estimating S = lim S(t:0) and M = lim R(t:0),
    // plus the Cauchy check on the per-step blocks over the trailing half.
    // Schedules are pure in (t, x), so the second pass replays identically.
    MatrixXd r_prod = MatrixXd::Zero(m, p);
    MatrixXd s_prod = MatrixXd::Identity(p, p);
    MatrixXd q(m, m), r(m, p), s(p, p);
    MatrixXd q_prev, r_prev;
    double q_worst = 0.0, r_worst = 0.0;
    const long start = horizon / 2;

    MatrixXd x = x0.values();
    for (long t = 0; t < horizon; ++t) {
        const ScheduleStep step = schedule.at(t, x);
        const MatrixXd full = detail::effective_matrix(schedule, step, topo);
        extract(full, q, r, s);

        // Product recursion: R(t:0) = Q(t) R(t-1:0) + R(t) S(t-1:0).
        r_prod = q * r_prod + r * s_prod;
        s_prod = s * s_prod;

        if (t > 0 && t >= start) {
            q_worst = std::max(q_worst, (q - q_prev).cwiseAbs().maxCoeff());
            r_worst = std::max(r_worst, (r - r_prev).cwiseAbs().maxCoeff());
        }
        q_prev = q;
        r_prev = r;

        x = (VectorXd::Ones(schedule.n_agents()) - lambda).asDiagonal() *
                (step.a.values() * x) +
            lambda.asDiagonal() * step.b;
    }

    report.q_cauchy = q_worst <= tol;
    report.r_cauchy = r_worst <= tol;
    report.cond1 = report.q_cauchy && report.r_cauchy;
    report.heterogeneity_admissible = report.q_cauchy == report.r_cauchy;

    // Pass 2: residual series against the estimated limits.
    const MatrixXd& s_limit = s_prod;
    const MatrixXd& m_est = r_prod;
    report.cond2_residual.reserve(static_cast<std::size_t>(horizon));
    x = x0.values();
    for (long t = 0; t < horizon; ++t) {
        const ScheduleStep step = schedule.at(t, x);
        const MatrixXd full = detail::effective_matrix(schedule, step, topo);
        extract(full, q, r, s);
        const MatrixXd lhs = r * s_limit;
        const MatrixXd rhs = (MatrixXd::Identity(m, m) - q) * m_est;
        report.cond2_residual.push_back((lhs - rhs).cwiseAbs().rowwise().sum().maxCoeff());

        x = (VectorXd::Ones(schedule.n_agents()) - lambda).asDiagonal() *
                (step.a.values() * x) +
            lambda.asDiagonal() * step.b;
    }
    return report;
}

}  // namespace avgdyn
