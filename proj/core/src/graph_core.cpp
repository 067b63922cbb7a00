#include "avgdyn/graph_core.hpp"

#include "avgdyn/augmentation.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace avgdyn {

int TopologyReport::scc_count() const {
    if (scc_ids.empty()) return 0;
    return 1 + *std::max_element(scc_ids.begin(), scc_ids.end());
}

bool TopologyReport::is_sink(int label) const {
    return std::binary_search(sink_sccs.begin(), sink_sccs.end(), label);
}

std::vector<std::vector<int>> TopologyReport::sink_members() const {
    std::vector<std::vector<int>> members(sink_sccs.size());
    for (int v = 0; v < n_nodes; ++v) {
        const auto it = std::lower_bound(sink_sccs.begin(), sink_sccs.end(), scc_ids[v]);
        if (it != sink_sccs.end() && *it == scc_ids[v])
            members[static_cast<std::size_t>(it - sink_sccs.begin())].push_back(v);
    }
    return members;
}

namespace {

// Iterative Tarjan. Raw component ids come out in reverse topological
// discovery order; they are relabeled afterwards by smallest member id so
// the labeling is independent of traversal details.
std::vector<int> tarjan_scc(const std::vector<std::vector<int>>& adj, int& n_comps) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), lowlink(n, 0), raw_id(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    int comp = 0;

    struct Frame {
        int v;
        std::size_t child;
    };
    std::vector<Frame> call;

    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.push_back({root, 0});
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;

        while (!call.empty()) {
            Frame& f = call.back();
            if (f.child < adj[f.v].size()) {
                const int w = adj[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = lowlink[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                const int v = f.v;
                call.pop_back();
                if (!call.empty())
                    lowlink[call.back().v] = std::min(lowlink[call.back().v], lowlink[v]);
                if (lowlink[v] == index[v]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        raw_id[w] = comp;
                        if (w == v) break;
                    }
                    ++comp;
                }
            }
        }
    }
    n_comps = comp;
    return raw_id;
}

}  // namespace

TopologyReport scc_decompose(const std::vector<std::vector<int>>& adjacency) {
    const int n = static_cast<int>(adjacency.size());
    TopologyReport report;
    report.n_nodes = n;

    int n_comps = 0;
    std::vector<int> raw_id = tarjan_scc(adjacency, n_comps);

    // Relabel by smallest member id.
    std::vector<int> min_node(n_comps, std::numeric_limits<int>::max());
    for (int v = 0; v < n; ++v) min_node[raw_id[v]] = std::min(min_node[raw_id[v]], v);
    std::vector<int> order(n_comps);
    for (int c = 0; c < n_comps; ++c) order[c] = c;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return min_node[a] < min_node[b]; });
    std::vector<int> relabel(n_comps);
    for (int k = 0; k < n_comps; ++k) relabel[order[k]] = k;

    report.scc_ids.resize(n);
    for (int v = 0; v < n; ++v) report.scc_ids[v] = relabel[raw_id[v]];

    std::vector<bool> has_out(n_comps, false);
    for (int v = 0; v < n; ++v) {
        for (int w : adjacency[v]) {
            if (report.scc_ids[v] != report.scc_ids[w]) has_out[report.scc_ids[v]] = true;
        }
    }
    for (int c = 0; c < n_comps; ++c) {
        if (!has_out[c]) report.sink_sccs.push_back(c);
    }
    for (int v = 0; v < n; ++v) {
        if (!report.is_sink(report.scc_ids[v])) report.quasi_connected.push_back(v);
    }
    for (const auto& nbrs : adjacency) {
        if (!nbrs.empty()) {
            report.delta = 1.0;  // unweighted edges count as weight 1
            break;
        }
    }
    return report;
}

TopologyReport scc_decompose(const StochasticMatrix& graph) {
    if (!graph.square())
        throw DimensionError("scc_decompose: matrix is not square");
    TopologyReport report = scc_decompose(graph.support_adjacency());
    double delta = 0.0;
    for (int i = 0; i < graph.rows(); ++i) {
        for (int j = 0; j < graph.cols(); ++j) {
            const double v = graph.values()(i, j);
            if (v > 0.0 && (delta == 0.0 || v < delta)) delta = v;
        }
    }
    report.delta = delta;
    return report;
}

namespace {

// Exit nodes are the quasi-connected nodes with a direct edge into a sink
// component; D is the longest hop distance from any quasi-connected node
// to an exit node, walking edges forward through the QC subgraph.
int longest_exit_distance(const std::vector<std::vector<int>>& adj,
                          const TopologyReport& topo) {
    const int n = static_cast<int>(adj.size());
    std::vector<bool> quasi(n, false);
    for (int v : topo.quasi_connected) quasi[v] = true;

    std::vector<std::vector<int>> rev(n);
    std::vector<int> dist(n, -1);
    std::queue<int> bfs;
    for (int v = 0; v < n; ++v) {
        if (!quasi[v]) continue;
        for (int w : adj[v]) {
            if (quasi[w]) {
                rev[w].push_back(v);
            } else if (dist[v] == -1) {
                dist[v] = 0;  // exit node
                bfs.push(v);
            }
        }
    }
    int longest = 0;
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        longest = std::max(longest, dist[v]);
        for (int u : rev[v]) {
            if (dist[u] == -1) {
                dist[u] = dist[v] + 1;
                bfs.push(u);
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (quasi[v] && dist[v] > longest) longest = dist[v];
    }
    return longest;
}

}  // namespace

TopologyReport estimate_infinite_graph(const UpdateSchedule& schedule,
                                       const StateMatrix& x0,
                                       const InfiniteGraphParams& params) {
    if (params.horizon < 1)
        throw DomainError("estimate_infinite_graph: horizon must be >= 1");
    if (params.edge_mass_threshold <= 0.0)
        throw DomainError("estimate_infinite_graph: threshold must be positive");

    const long start = params.horizon / 2;
    const long window = params.horizon - start;
    const int n_agents = schedule.n_agents();
    const int n = params.augmented ? n_agents + 2 * schedule.dims() : n_agents;

    MatrixXd mass = MatrixXd::Zero(n, n);
    Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> first_occ(n, n), last_occ(n, n),
        worst_gap(n, n);
    first_occ.setConstant(-1);
    last_occ.setConstant(-1);
    worst_gap.setZero();
    double delta = 0.0;

    MatrixXd x = x0.values();
    const VectorXd& lambda = schedule.lambda();
    for (long t = 0; t < params.horizon; ++t) {
        const ScheduleStep step = schedule.at(t, x);
        MatrixXd m;
        if (params.augmented) {
            m = augment(step.a, lambda,
                        StateMatrix(step.b, schedule.bounds()), schedule.bounds())
                    .a_tilde()
                    .values();
        } else {
            m = step.a.values();
        }

        if (t >= start) {
            for (int i = 0; i < n; ++i) {
                for (int j = 0; j < n; ++j) {
                    const double v = m(i, j);
                    if (v <= 0.0) continue;
                    mass(i, j) += v;
                    if (delta == 0.0 || v < delta) delta = v;
                    if (first_occ(i, j) == -1) {
                        first_occ(i, j) = t;
                    } else {
                        worst_gap(i, j) = std::max(worst_gap(i, j), t - last_occ(i, j));
                    }
                    last_occ(i, j) = t;
                }
            }
        }

        x = (VectorXd::Ones(n_agents) - lambda).asDiagonal() * (step.a.values() * x) +
            lambda.asDiagonal() * step.b;
    }

    const double needed = params.edge_mass_threshold * static_cast<double>(window);
    std::vector<std::vector<int>> adj(n);
    std::vector<std::pair<int, int>> edges;
    long period = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (first_occ(i, j) == -1 || mass(i, j) < needed) continue;
            adj[i].push_back(j);
            edges.emplace_back(i, j);
            long gap = std::max<long>(1, first_occ(i, j) - start + 1);       // lead-in
            gap = std::max(gap, params.horizon - last_occ(i, j));            // tail-out
            gap = std::max(gap, worst_gap(i, j));
            period = std::max(period, gap);
        }
    }

    TopologyReport report = scc_decompose(adj);
    report.g_inf_edges = std::move(edges);
    report.delta = delta;
    report.realization_period = static_cast<int>(period);
    report.longest_exit_distance = longest_exit_distance(adj, report);
    return report;
}

RegularityReport check_regularity(const UpdateSchedule& schedule, const StateMatrix& x0,
                                  long t_begin, long t_end) {
    if (t_end <= t_begin)
        throw DomainError("check_regularity: empty window");

    double min_positive = std::numeric_limits<double>::infinity();
    double min_diagonal = std::numeric_limits<double>::infinity();
    bool symmetric = true;

    MatrixXd x = x0.values();
    const VectorXd& lambda = schedule.lambda();
    for (long t = 0; t < t_end; ++t) {
        const ScheduleStep step = schedule.at(t, x);
        if (t >= t_begin) {
            const MatrixXd& a = step.a.values();
            for (int i = 0; i < a.rows(); ++i) {
                min_diagonal = std::min(min_diagonal, a(i, i));
                for (int j = 0; j < a.cols(); ++j) {
                    if (a(i, j) > 0.0) min_positive = std::min(min_positive, a(i, j));
                    if ((a(i, j) > 0.0) != (a(j, i) > 0.0)) symmetric = false;
                }
            }
        }
        x = (VectorXd::Ones(schedule.n_agents()) - lambda).asDiagonal() *
                (step.a.values() * x) +
            lambda.asDiagonal() * step.b;
    }

    RegularityReport report;
    report.self_loop_ok = min_diagonal > 0.0;
    report.symmetric_ok = symmetric;
    report.delta = report.self_loop_ok ? std::min(min_positive, min_diagonal) : 0.0;
    return report;
}

BlockDecomposition block_permutation(const StochasticMatrix& matrix,
                                     const TopologyReport& topo) {
    if (!matrix.square())
        throw DimensionError("block_permutation: matrix is not square");
    const int n = matrix.rows();
    if (topo.n_nodes != n)
        throw DimensionError("block_permutation: topology is for a different node count");

    BlockDecomposition out;
    out.ordering = topo.quasi_connected;
    out.n_quasi = static_cast<int>(topo.quasi_connected.size());
    for (int label : topo.sink_sccs) {
        for (int v = 0; v < n; ++v) {
            if (topo.scc_ids[v] == label) out.ordering.push_back(v);
        }
    }
    if (static_cast<int>(out.ordering.size()) != n)
        throw DomainError("block_permutation: topology does not partition the node set");

    MatrixXd permuted(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            permuted(i, j) = matrix.values()(out.ordering[i], out.ordering[j]);
    }

    const int m = out.n_quasi;
    const int p = n - m;
    if (p > 0 && m > 0 && permuted.bottomLeftCorner(p, m).cwiseAbs().maxCoeff() > 0.0)
        throw DomainError(
            "block_permutation: lower-left block is not zero; topology is stale");

    out.q = permuted.topLeftCorner(m, m);
    out.r = permuted.topRightCorner(m, p);
    out.s = permuted.bottomRightCorner(p, p);
    return out;
}

MatrixXd BlockDecomposition::reassemble() const {
    const int m = static_cast<int>(q.rows());
    const int p = static_cast<int>(s.rows());
    const int n = m + p;
    MatrixXd permuted = MatrixXd::Zero(n, n);
    permuted.topLeftCorner(m, m) = q;
    permuted.topRightCorner(m, p) = r;
    permuted.bottomRightCorner(p, p) = s;

    MatrixXd original(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) original(ordering[i], ordering[j]) = permuted(i, j);
    }
    return original;
}

namespace detail {

double gamma_of(const MatrixXd& m) {
    double worst = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
        const double spread = m.col(j).maxCoeff() - m.col(j).minCoeff();
        worst = std::max(worst, spread);
    }
    return worst;
}

}  // namespace detail

double gamma_coefficient(const StochasticMatrix& matrix) {
    if (matrix.kind() != StochasticMatrix::Kind::row_stochastic)
        throw DomainError("gamma_coefficient: matrix must be row stochastic");
    return detail::gamma_of(matrix.values());
}

}  // namespace avgdyn
