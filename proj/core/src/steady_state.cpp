#include "avgdyn/steady_state.hpp"

#include "avgdyn/graph_core.hpp"
#include "avgdyn/rng.hpp"

#include <Eigen/LU>

#include <queue>

namespace avgdyn {

namespace {

constexpr double kResidualTol = 1e-8;

MatrixXd transient_part(const StochasticMatrix& a, const VectorXd& lambda) {
    if (!a.square())
        throw DimensionError("fundamental_matrix: A must be square");
    if (lambda.size() != a.rows())
        throw DimensionError("fundamental_matrix: lambda size mismatch");
    if (a.kind() == StochasticMatrix::Kind::general)
        throw DomainError("fundamental_matrix: A must be (sub)stochastic");
    for (int i = 0; i < lambda.size(); ++i) {
        if (lambda(i) < 0.0 || lambda(i) > 1.0)
            throw DomainError("fundamental_matrix: lambda outside [0,1]");
    }
    return (VectorXd::Ones(a.rows()) - lambda).asDiagonal() * a.values();
}

// Every closed communicating class (sink SCC of the support) needs an exit:
// a node with lambda > 0, or a substochastic row for game-style systems.
void require_absorbing_structure(const StochasticMatrix& a, const VectorXd& lambda) {
    const TopologyReport topo = scc_decompose(a);
    for (const auto& members : topo.sink_members()) {
        bool has_exit = false;
        for (int v : members) {
            if (lambda(v) > 0.0 || a.values().row(v).sum() < 1.0 - StochasticMatrix::kRowSumTol)
                has_exit = true;
        }
        if (!has_exit)
            throw DomainError(
                "no absorbing structure: a closed class of A has lambda = 0 everywhere; "
                "private signals are required on every sink component");
    }
}

double identity_residual(const MatrixXd& f, const MatrixXd& transient) {
    const int n = static_cast<int>(f.rows());
    const MatrixXd err =
        f * (MatrixXd::Identity(n, n) - transient) - MatrixXd::Identity(n, n);
    return err.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

MatrixXd fundamental_matrix(const StochasticMatrix& a, const VectorXd& lambda) {
    const MatrixXd transient = transient_part(a, lambda);
    require_absorbing_structure(a, lambda);

    const int n = static_cast<int>(transient.rows());
    Eigen::PartialPivLU<MatrixXd> lu(MatrixXd::Identity(n, n) - transient);
    MatrixXd f = lu.solve(MatrixXd::Identity(n, n));

    const double res = identity_residual(f, transient);
    if (!std::isfinite(res) || res > kResidualTol)
        throw DomainError("fundamental_matrix: solve residual " + std::to_string(res) +
                          " exceeds tolerance; system is (near) singular");
    return f;
}

StateMatrix steady_state(const StochasticMatrix& a, const VectorXd& lambda,
                         const StateMatrix& b) {
    if (b.n_agents() != a.rows())
        throw DimensionError("steady_state: b row count mismatch");
    const MatrixXd f = fundamental_matrix(a, lambda);
    return b.with_values(f * (lambda.asDiagonal() * b.values()));
}

MatrixXd absorption_probabilities(const AugmentedSystem& sys) {
    const int n = sys.n_agents();

    // Every original node must reach a ghost, i.e. reach some lambda > 0 node.
    std::vector<bool> can_reach(n, false);
    std::queue<int> bfs;
    for (int i = 0; i < n; ++i) {
        if (sys.lambda()(i) > 0.0) {
            can_reach[i] = true;
            bfs.push(i);
        }
    }
    const MatrixXd& m = sys.a_tilde().values();
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        for (int u = 0; u < n; ++u) {
            if (!can_reach[u] && m(u, v) > 0.0) {
                can_reach[u] = true;
                bfs.push(u);
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!can_reach[i])
            throw DomainError("absorption_probabilities: node " + std::to_string(i) +
                              " cannot reach any ghost");
    }

    const Deaugmented parts = deaugment(sys);
    const MatrixXd f = fundamental_matrix(parts.a, parts.lambda);
    return f * (parts.lambda.asDiagonal() * sys.w_block());
}

AbsorptionReport absorption_report(const StochasticMatrix& a, const VectorXd& lambda,
                                   const StateMatrix& b, const Bounds& bounds) {
    const AugmentedSystem sys = augment(a, lambda, b, bounds);
    AbsorptionReport report{fundamental_matrix(a, lambda), MatrixXd(), steady_state(a, lambda, b),
                            VectorXd(), 0.0};
    report.absorb_probs = report.fundamental * (lambda.asDiagonal() * sys.w_block());
    report.expected_returns = report.fundamental.diagonal().array() - 1.0;
    report.residual = identity_residual(report.fundamental, transient_part(a, lambda));
    return report;
}

WalkStats simulate_walks(const AugmentedSystem& sys, int start, long n_walks,
                         std::uint64_t seed, long step_cap) {
    const int n = sys.n_agents();
    if (start < 0 || start >= n)
        throw DomainError("simulate_walks: start node out of range");
    if (n_walks < 1)
        throw DomainError("simulate_walks: need at least one walk");
    for (int i = 0; i < n; ++i) {
        if (sys.lambda()(i) <= 0.0)
            throw DomainError("simulate_walks: lambda must be positive everywhere");
    }

    const Deaugmented parts = deaugment(sys);
    const MatrixXd& a = parts.a.values();
    const MatrixXd& w = sys.w_block();
    const int n_ghosts = sys.n_ghosts();

    WalkStats stats;
    stats.absorb_counts.assign(n_ghosts, 0);
    stats.visit_counts.assign(n, 0);
    stats.n_walks = n_walks;

    std::vector<double> row(std::max(n, n_ghosts));
    for (long walk = 0; walk < n_walks; ++walk) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(walk)));
        int node = start;
        ++stats.visit_counts[node];
        for (long step = 0;; ++step) {
            if (step >= step_cap) {
                ++stats.capped_walks;
                break;
            }
            if (rng.bernoulli(sys.lambda()(node))) {
                for (int g = 0; g < n_ghosts; ++g) row[g] = w(node, g);
                ++stats.absorb_counts[rng.pick_weighted({row.data(),
                                                         static_cast<std::size_t>(n_ghosts)})];
                break;
            }
            for (int j = 0; j < n; ++j) row[j] = a(node, j);
            node = rng.pick_weighted({row.data(), static_cast<std::size_t>(n)});
            ++stats.visit_counts[node];
            if (node == start) ++stats.return_count;
        }
    }
    return stats;
}

VectorXd contact_trace(const AugmentedSystem& sys, int node, long t) {
    if (node < 0 || node >= sys.n_agents())
        throw DomainError("contact_trace: node out of range");
    if (t < 0)
        throw DomainError("contact_trace: t must be nonnegative");

    // Row `node` of A~^t: walk the distribution t hops through the chain.
    Eigen::RowVectorXd dist = Eigen::RowVectorXd::Zero(sys.total_nodes());
    dist(node) = 1.0;
    for (long k = 0; k < t; ++k) dist = dist * sys.a_tilde().values();
    return dist.transpose();
}

MatrixXd quasi_connected_steady_state(const MatrixXd& q, const MatrixXd& r,
                                      const MatrixXd& s_limit, const MatrixXd& x_sc_t0) {
    const int m = static_cast<int>(q.rows());
    const int p = static_cast<int>(s_limit.rows());
    if (q.cols() != m || r.rows() != m || r.cols() != p || s_limit.cols() != p ||
        x_sc_t0.rows() != p)
        throw DimensionError("quasi_connected_steady_state: block shapes disagree");

    Eigen::PartialPivLU<MatrixXd> lu(MatrixXd::Identity(m, m) - q);
    const MatrixXd mm = lu.solve(r * s_limit);
    const double res = ((MatrixXd::Identity(m, m) - q) * mm - r * s_limit)
                           .cwiseAbs()
                           .maxCoeff();
    if (!std::isfinite(res) || res > kResidualTol)
        throw DomainError("quasi_connected_steady_state: (I - Q) is (near) singular; "
                          "quasi-connectivity violated");

    MatrixXd out(m + p, x_sc_t0.cols());
    out.topRows(m) = mm * x_sc_t0;
    out.bottomRows(p) = s_limit * x_sc_t0;
    return out;
}

}  // namespace avgdyn
