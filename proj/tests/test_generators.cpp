#include "avgdyn/generators.hpp"
#include "avgdyn/graph_core.hpp"
#include "avgdyn/io.hpp"

#include <doctest.h>

#include <set>

using namespace avgdyn;

namespace {

// Independent oracle: count triangles and connected triples by enumerating
// all node triples / centered pairs directly.
double transitivity_brute_force(const Graph& g) {
    long triangles = 0, triples = 0;
    for (int a = 0; a < g.n; ++a) {
        for (int b = a + 1; b < g.n; ++b) {
            for (int c = b + 1; c < g.n; ++c) {
                const bool ab = g.has_edge(a, b), bc = g.has_edge(b, c),
                           ac = g.has_edge(a, c);
                if (ab && bc && ac) ++triangles;
            }
        }
    }
    for (int v = 0; v < g.n; ++v) {
        const long k = g.degree(v);
        triples += k * (k - 1) / 2;
    }
    if (triples == 0) return 0.0;
    return 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);
}

Graph path_graph(int n) {
    Graph g{n, false, std::vector<std::vector<int>>(n)};
    for (int v = 0; v + 1 < n; ++v) {
        g.out[v].push_back(v + 1);
        g.out[v + 1].push_back(v);
    }
    for (auto& nbrs : g.out) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

}  // namespace

TEST_CASE("complete graphs are fully transitive") {
    GraphSpec spec;
    spec.family = GraphFamily::complete;
    spec.n = 5;
    const Graph k5 = generate(spec).graph;
    CHECK(transitivity(k5) == doctest::Approx(1.0));
    spec.n = 4;
    CHECK(transitivity(generate(spec).graph) == doctest::Approx(1.0));
}

TEST_CASE("paths have no triangles") {
    CHECK(transitivity(path_graph(4)) == 0.0);
}

TEST_CASE("transitivity needs three nodes") {
    CHECK_THROWS_AS(transitivity(path_graph(2)), DomainError);
}

TEST_CASE("k-regular graphs have the declared degree everywhere") {
    GraphSpec spec;
    spec.family = GraphFamily::k_regular;
    spec.n = 20;
    spec.k = 3;
    spec.seed = 5;
    const Graph g = generate(spec).graph;
    for (int v = 0; v < g.n; ++v) CHECK(g.degree(v) == 3);
    CHECK(scc_decompose(g.out).scc_count() == 1);  // connected
}

TEST_CASE("k-regular rejects odd n*k") {
    GraphSpec spec;
    spec.family = GraphFamily::k_regular;
    spec.n = 5;
    spec.k = 3;
    CHECK_THROWS_AS(generate(spec), DomainError);
}

TEST_CASE("lattice radius 1 has the right neighbourhoods") {
    GraphSpec spec;
    spec.family = GraphFamily::lattice2d_radius;
    spec.n = 9;
    spec.radius = 1;
    const Graph g = generate(spec).graph;
    // corner node 0 at (0,0): neighbours (0,1), (1,0), (1,1)
    CHECK(g.out[0] == std::vector<int>{1, 3, 4});
    // center node 4 sees everyone
    CHECK(g.degree(4) == 8);

    spec.torus = true;
    const Graph torus = generate(spec).graph;
    for (int v = 0; v < torus.n; ++v) CHECK(torus.degree(v) == 8);
}

TEST_CASE("lattice rejects non-square n") {
    GraphSpec spec;
    spec.family = GraphFamily::lattice2d_radius;
    spec.n = 10;
    CHECK_THROWS_AS(generate(spec), DomainError);
}

TEST_CASE("small world with p = 0 is the base lattice") {
    GraphSpec lattice;
    lattice.family = GraphFamily::lattice2d_radius;
    lattice.n = 49;
    lattice.radius = 2;
    GraphSpec sw = lattice;
    sw.family = GraphFamily::small_world_rewired;
    sw.p = 0.0;
    sw.seed = 17;
    CHECK(generate(sw).graph.out == generate(lattice).graph.out);
}

TEST_CASE("generation is bit-for-bit deterministic in the seed") {
    for (GraphFamily family : {GraphFamily::erdos_renyi_directed,
                               GraphFamily::k_regular,
                               GraphFamily::small_world_rewired}) {
        GraphSpec spec;
        spec.family = family;
        spec.n = family == GraphFamily::small_world_rewired ? 25 : 12;
        spec.p = family == GraphFamily::erdos_renyi_directed ? 0.3 : 0.15;
        spec.k = 4;
        spec.radius = 2;
        spec.seed = 99;
        const Graph a = generate(spec).graph;
        const Graph b = generate(spec).graph;
        CHECK(a.out == b.out);
        spec.seed = 100;
        CHECK(generate(spec).graph.out != a.out);
    }
}

TEST_CASE("directed ER samples are strongly connected") {
    GraphSpec spec;
    spec.family = GraphFamily::erdos_renyi_directed;
    spec.n = 10;
    spec.p = 0.25;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        spec.seed = seed;
        const Graph g = generate(spec).graph;
        CHECK(g.directed);
        CHECK(scc_decompose(g.out).scc_count() == 1);
    }
}

TEST_CASE("lattice transitivity matches the brute-force oracle") {
    GraphSpec spec;
    spec.family = GraphFamily::lattice2d_radius;
    spec.n = 100;
    spec.radius = 2;
    const Graph g = generate(spec).graph;
    CHECK(transitivity(g) == doctest::Approx(transitivity_brute_force(g)));

    // also on a rewired sample, where symmetry does not help
    GraphSpec sw = spec;
    sw.family = GraphFamily::small_world_rewired;
    sw.p = 0.2;
    sw.seed = 3;
    const Graph rewired = generate(sw).graph;
    CHECK(transitivity(rewired) == doctest::Approx(transitivity_brute_force(rewired)));
}

TEST_CASE("full rewiring keeps the edge count and lowers transitivity") {
    GraphSpec lattice;
    lattice.family = GraphFamily::lattice2d_radius;
    lattice.n = 100;
    lattice.radius = 2;
    const Graph base = generate(lattice).graph;
    const double base_transitivity = transitivity(base);
    const long base_edges = base.edge_count();

    double mean_rewired = 0.0;
    const int n_seeds = 20;
    for (std::uint64_t seed = 0; seed < n_seeds; ++seed) {
        GraphSpec sw = lattice;
        sw.family = GraphFamily::small_world_rewired;
        sw.p = 1.0;
        sw.seed = seed;
        const Graph g = generate(sw).graph;
        CHECK(g.edge_count() == base_edges);
        mean_rewired += transitivity(g);
    }
    mean_rewired /= n_seeds;
    CHECK(mean_rewired < base_transitivity);
}

TEST_CASE("uniform weights on a 2-cycle") {
    Graph g{2, false, {{1}, {0}}};
    const StochasticMatrix w = row_normalize_weights(g);
    CHECK(w.kind() == StochasticMatrix::Kind::row_stochastic);
    CHECK(w.values()(0, 1) == doctest::Approx(1.0));
    CHECK(w.values()(1, 0) == doctest::Approx(1.0));
    CHECK(w.values()(0, 0) == 0.0);
}

TEST_CASE("scaled weights on K3 give substochastic rows") {
    GraphSpec spec;
    spec.family = GraphFamily::complete;
    spec.n = 3;
    const StochasticMatrix w = row_normalize_weights(generate(spec).graph, 0.95);
    CHECK(w.kind() == StochasticMatrix::Kind::substochastic);
    for (int i = 0; i < 3; ++i) {
        CHECK(w.values().row(i).sum() == doctest::Approx(0.95));
        for (int j = 0; j < 3; ++j) {
            if (i != j) CHECK(w.values()(i, j) == doctest::Approx(0.475));
        }
    }
}

TEST_CASE("hub-and-spoke center splits weight over the spokes") {
    GraphSpec spec;
    spec.family = GraphFamily::hub_spoke;
    spec.n = 5;
    const StochasticMatrix w = row_normalize_weights(generate(spec).graph);
    for (int v = 1; v < 5; ++v) {
        CHECK(w.values()(0, v) == doctest::Approx(0.25));
        CHECK(w.values()(v, 0) == doctest::Approx(1.0));
    }
}

TEST_CASE("isolated nodes are rejected by name") {
    Graph g{3, false, {{1}, {0}, {}}};
    CHECK_THROWS_WITH_AS(row_normalize_weights(g), doctest::Contains("node 2"),
                         DomainError);
}

TEST_CASE("edge-list csv export") {
    Graph g{3, true, {{1}, {2}, {0}}};
    const std::string csv = edge_list_to_csv(g);
    CHECK(csv == "src,dst,weight\n0,1,1\n1,2,1\n2,0,1\n");

    MatrixXd w = MatrixXd::Zero(3, 3);
    w(0, 1) = 0.25;
    w(1, 2) = 1.0;
    w(2, 0) = 0.5;
    const std::string weighted = edge_list_to_csv(g, &w);
    CHECK(weighted == "src,dst,weight\n0,1,0.25\n1,2,1\n2,0,0.5\n");
}
