#include "avgdyn/generators.hpp"

#include "avgdyn/graph_core.hpp"
#include "avgdyn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace avgdyn {

bool Graph::has_edge(int u, int v) const {
    return std::binary_search(out[u].begin(), out[u].end(), v);
}

long Graph::edge_count() const {
    long total = 0;
    for (const auto& nbrs : out) total += static_cast<long>(nbrs.size());
    return directed ? total : total / 2;
}

Graph Graph::undirected_support() const {
    Graph g;
    g.n = n;
    g.directed = false;
    g.out.resize(n);
    for (int u = 0; u < n; ++u) {
        for (int v : out[u]) {
            if (u == v) continue;
            g.out[u].push_back(v);
            g.out[v].push_back(u);
        }
    }
    for (auto& nbrs : g.out) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return g;
}

std::vector<std::pair<int, int>> Graph::edge_list() const {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u) {
        for (int v : out[u]) {
            if (directed || u < v) edges.emplace_back(u, v);
        }
    }
    return edges;
}

GraphFamily graph_family_from_name(const std::string& name) {
    if (name == "erdos_renyi_directed") return GraphFamily::erdos_renyi_directed;
    if (name == "k_regular") return GraphFamily::k_regular;
    if (name == "lattice2d_radius") return GraphFamily::lattice2d_radius;
    if (name == "small_world_rewired") return GraphFamily::small_world_rewired;
    if (name == "complete") return GraphFamily::complete;
    if (name == "hub_spoke") return GraphFamily::hub_spoke;
    throw DomainError("unknown graph family: " + name);
}

const char* graph_family_name(GraphFamily f) {
    switch (f) {
        case GraphFamily::erdos_renyi_directed: return "erdos_renyi_directed";
        case GraphFamily::k_regular: return "k_regular";
        case GraphFamily::lattice2d_radius: return "lattice2d_radius";
        case GraphFamily::small_world_rewired: return "small_world_rewired";
        case GraphFamily::complete: return "complete";
        case GraphFamily::hub_spoke: return "hub_spoke";
    }
    throw DomainError("unknown graph family");
}

namespace {

constexpr int kResampleCap = 200;

void sort_all(Graph& g) {
    for (auto& nbrs : g.out) std::sort(nbrs.begin(), nbrs.end());
}

bool strongly_connected(const Graph& g) {
    return scc_decompose(g.out).scc_count() == 1;
}

bool connected(const Graph& g) {
    // For undirected graphs strong connectivity of the symmetric adjacency
    // is plain connectivity.
    return scc_decompose(g.out).scc_count() == 1;
}

Graph erdos_renyi_directed(int n, double p, Rng& rng) {
    Graph g{n, true, std::vector<std::vector<int>>(n)};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j && rng.bernoulli(p)) g.out[i].push_back(j);
        }
    }
    return g;
}

Graph k_regular(int n, int k, Rng& rng) {
    // Configuration-model pairing with rejection of self-loops/multi-edges.
    std::vector<int> stubs(static_cast<std::size_t>(n) * k);
    for (int v = 0; v < n; ++v)
        for (int s = 0; s < k; ++s) stubs[static_cast<std::size_t>(v) * k + s] = v;

    for (int attempt = 0; attempt < 1000; ++attempt) {
        for (int i = static_cast<int>(stubs.size()) - 1; i > 0; --i) {
            const int j = rng.uniform_int(i + 1);
            std::swap(stubs[i], stubs[j]);
        }
        std::set<std::pair<int, int>> seen;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size() && ok; i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u > v) std::swap(u, v);
            if (u == v || !seen.emplace(u, v).second) ok = false;
        }
        if (!ok) continue;
        Graph g{n, false, std::vector<std::vector<int>>(n)};
        for (const auto& [u, v] : seen) {
            g.out[u].push_back(v);
            g.out[v].push_back(u);
        }
        sort_all(g);
        return g;
    }
    throw DomainError("k_regular: pairing failed; parameters too tight");
}

Graph lattice2d(int n, int radius, bool torus) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n)
        throw DomainError("lattice2d_radius: n must be a perfect square");
    Graph g{n, false, std::vector<std::vector<int>>(n)};
    auto id = [side](int r, int c) { return r * side + c; };
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            for (int dr = -radius; dr <= radius; ++dr) {
                for (int dc = -radius; dc <= radius; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    int rr = r + dr, cc = c + dc;
                    if (torus) {
                        rr = (rr % side + side) % side;
                        cc = (cc % side + side) % side;
                    } else if (rr < 0 || rr >= side || cc < 0 || cc >= side) {
                        continue;
                    }
                    const int v = id(rr, cc);
                    if (v != id(r, c)) g.out[id(r, c)].push_back(v);
                }
            }
        }
    }
    for (auto& nbrs : g.out) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return g;
}

Graph small_world(int n, int radius, bool torus, double p, Rng& rng) {
    // Watts-Strogatz style: each lattice edge has one endpoint rewired with
    // probability p, rejecting self-loops and duplicates.
    Graph g = lattice2d(n, radius, torus);
    std::vector<std::set<int>> nbrs(n);
    for (int v = 0; v < n; ++v) nbrs[v] = {g.out[v].begin(), g.out[v].end()};

    for (const auto& [u, v] : g.edge_list()) {
        if (!rng.bernoulli(p)) continue;
        if (!nbrs[u].count(v)) continue;  // already moved by an earlier rewire
        int w = -1;
        for (int tries = 0; tries < 4 * n; ++tries) {
            const int cand = rng.uniform_int(n);
            if (cand != u && !nbrs[u].count(cand)) {
                w = cand;
                break;
            }
        }
        if (w == -1) continue;  // node saturated, keep the edge
        nbrs[u].erase(v);
        nbrs[v].erase(u);
        nbrs[u].insert(w);
        nbrs[w].insert(u);
    }

    Graph out{n, false, std::vector<std::vector<int>>(n)};
    for (int v = 0; v < n; ++v) out.out[v] = {nbrs[v].begin(), nbrs[v].end()};
    return out;
}

Graph complete(int n) {
    Graph g{n, false, std::vector<std::vector<int>>(n)};
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u != v) g.out[u].push_back(v);
        }
    }
    return g;
}

Graph hub_spoke(int n) {
    Graph g{n, false, std::vector<std::vector<int>>(n)};
    for (int v = 1; v < n; ++v) {
        g.out[0].push_back(v);
        g.out[v].push_back(0);
    }
    return g;
}

}  // namespace

GeneratedGraph generate(const GraphSpec& spec) {
    if (spec.n < 1)
        throw DomainError("generate: n must be positive");

    GeneratedGraph result;
    switch (spec.family) {
        case GraphFamily::complete:
            result.graph = complete(spec.n);
            return result;
        case GraphFamily::hub_spoke:
            result.graph = hub_spoke(spec.n);
            return result;
        case GraphFamily::lattice2d_radius:
            result.graph = lattice2d(spec.n, spec.radius, spec.torus);
            return result;
        case GraphFamily::erdos_renyi_directed: {
            if (spec.p <= 0.0 || spec.p > 1.0)
                throw DomainError("erdos_renyi_directed: p must be in (0,1]");
            for (int attempt = 0; attempt < kResampleCap; ++attempt) {
                Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
                Graph g = erdos_renyi_directed(spec.n, spec.p, rng);
                if (strongly_connected(g)) {
                    result.graph = std::move(g);
                    result.resamples = attempt;
                    return result;
                }
            }
            throw DomainError("erdos_renyi_directed: no strongly connected sample; raise p");
        }
        case GraphFamily::k_regular: {
            if (spec.k < 1 || spec.k >= spec.n)
                throw DomainError("k_regular: need 1 <= k < n");
            if ((static_cast<long>(spec.n) * spec.k) % 2 != 0)
                throw DomainError("k_regular: n*k must be even");
            for (int attempt = 0; attempt < kResampleCap; ++attempt) {
                Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
                Graph g = k_regular(spec.n, spec.k, rng);
                if (connected(g)) {
                    result.graph = std::move(g);
                    result.resamples = attempt;
                    return result;
                }
            }
            throw DomainError("k_regular: no connected sample");
        }
        case GraphFamily::small_world_rewired: {
            if (spec.p < 0.0 || spec.p > 1.0)
                throw DomainError("small_world_rewired: p must be in [0,1]");
            for (int attempt = 0; attempt < kResampleCap; ++attempt) {
                Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(attempt)));
                Graph g = small_world(spec.n, spec.radius, spec.torus, spec.p, rng);
                if (connected(g)) {
                    result.graph = std::move(g);
                    result.resamples = attempt;
                    return result;
                }
            }
            throw DomainError("small_world_rewired: no connected sample");
        }
    }
    throw DomainError("generate: unknown family");
}

StochasticMatrix row_normalize_weights(const Graph& graph, double scale) {
    if (scale <= 0.0 || scale > 1.0)
        throw DomainError("row_normalize_weights: scale must be in (0,1]");
    MatrixXd w = MatrixXd::Zero(graph.n, graph.n);
    for (int i = 0; i < graph.n; ++i) {
        const int k = graph.degree(i);
        if (k == 0)
            throw DomainError("row_normalize_weights: node " + std::to_string(i) +
                              " is isolated");
        for (int j : graph.out[i]) w(i, j) = scale / static_cast<double>(k);
    }
    return scale == 1.0 ? StochasticMatrix::row_stochastic(std::move(w))
                        : StochasticMatrix::substochastic(std::move(w));
}

double transitivity(const Graph& undirected) {
    if (undirected.n < 3)
        throw DomainError("transitivity: need at least 3 nodes");
    const Graph g = undirected.directed ? undirected.undirected_support() : undirected;
    long closed = 0, triples = 0;
    for (int v = 0; v < g.n; ++v) {
        const auto& nbrs = g.out[v];
        const long k = static_cast<long>(nbrs.size());
        triples += k * (k - 1) / 2;
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            for (std::size_t b = a + 1; b < nbrs.size(); ++b) {
                if (g.has_edge(nbrs[a], nbrs[b])) ++closed;
            }
        }
    }
    if (triples == 0) return 0.0;
    return static_cast<double>(closed) / static_cast<double>(triples);
}

}  // namespace avgdyn
