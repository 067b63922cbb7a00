#pragma once

#include "avgdyn/matrix.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace avgdyn {

/// Unweighted digraph (or symmetric support). Adjacency lists are kept
/// sorted so equal specs generate bit-identical edge lists.
struct Graph {
    int n = 0;
    bool directed = false;
    std::vector<std::vector<int>> out;

    bool has_edge(int u, int v) const;
    int degree(int v) const { return static_cast<int>(out[v].size()); }
    long edge_count() const;  // unordered count for undirected graphs

    /// Symmetrized copy (u-v present in both lists).
    Graph undirected_support() const;

    /// Unique edges: all arcs when directed, u < v pairs when undirected.
    std::vector<std::pair<int, int>> edge_list() const;
};

enum class GraphFamily {
    erdos_renyi_directed,
    k_regular,
    lattice2d_radius,
    small_world_rewired,
    complete,
    hub_spoke,
};

GraphFamily graph_family_from_name(const std::string& name);
const char* graph_family_name(GraphFamily f);

struct GraphSpec {
    GraphFamily family = GraphFamily::complete;
    int n = 0;
    double p = 0.0;   // ER arc probability / small-world rewiring probability
    int k = 0;        // k-regular degree
    int radius = 1;   // lattice neighborhood radius (Chebyshev)
    bool torus = false;
    std::uint64_t seed = 0;
};

struct GeneratedGraph {
    Graph graph;
    int resamples = 0;  // connectivity retries that were needed
};

/// Seed-deterministic generation. Families that require connectivity
/// (directed ER: strong connectivity; k-regular and small-world:
/// connectedness) resample up to an internal cap and report the count.
GeneratedGraph generate(const GraphSpec& spec);

/// Interaction weights scale / k_i on each edge. scale = 1 gives the
/// row-stochastic uniform scheme, scale < 1 the substochastic one.
/// Isolated nodes are rejected by name.
StochasticMatrix row_normalize_weights(const Graph& graph, double scale = 1.0);

/// Global transitivity: 3 * triangles / connected triples (0 if no triples).
double transitivity(const Graph& undirected);

}  // namespace avgdyn
