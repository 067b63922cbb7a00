#include "avgdyn/io.hpp"
#include "avgdyn/matrix.hpp"
#include "avgdyn/rng.hpp"

#include <doctest.h>

#include "test_util.hpp"

using namespace avgdyn;

TEST_CASE("row-stochastic validation") {
    MatrixXd good(2, 2);
    good << 0.5, 0.5, 0.25, 0.75;
    CHECK_NOTHROW(StochasticMatrix::row_stochastic(good));

    MatrixXd bad_sum(2, 2);
    bad_sum << 0.5, 0.5, 0.25, 0.74;
    CHECK_THROWS_AS(StochasticMatrix::row_stochastic(bad_sum), DomainError);

    MatrixXd negative(2, 2);
    negative << 1.5, -0.5, 0.5, 0.5;
    CHECK_THROWS_AS(StochasticMatrix::row_stochastic(negative), DomainError);
}

TEST_CASE("substochastic accepts rows below 1 and rejects above") {
    MatrixXd m(2, 2);
    m << 0.4, 0.5, 0.0, 0.95;
    CHECK_NOTHROW(StochasticMatrix::substochastic(m));
    m(0, 0) = 0.6;
    CHECK_THROWS_AS(StochasticMatrix::substochastic(m), DomainError);
}

TEST_CASE("renormalization is explicit, never silent") {
    MatrixXd m(2, 2);
    m << 2.0, 2.0, 1.0, 3.0;
    const StochasticMatrix g = StochasticMatrix::general(m);
    const StochasticMatrix r = g.renormalized();
    CHECK(r.values()(0, 0) == doctest::Approx(0.5));
    CHECK(r.values()(1, 1) == doctest::Approx(0.75));

    MatrixXd zero_row = MatrixXd::Zero(2, 2);
    zero_row(0, 1) = 1.0;
    CHECK_THROWS_AS(StochasticMatrix::general(zero_row).renormalized(), DomainError);
}

TEST_CASE("support adjacency view") {
    MatrixXd m(3, 3);
    m << 0.5, 0.5, 0.0, 0.0, 1.0, 0.0, 0.2, 0.0, 0.8;
    const auto adj = StochasticMatrix::row_stochastic(m).support_adjacency();
    CHECK(adj[0] == std::vector<int>{0, 1});
    CHECK(adj[1] == std::vector<int>{1});
    CHECK(adj[2] == std::vector<int>{0, 2});
}

TEST_CASE("state matrix bounds") {
    const Bounds box = Bounds::symmetric(2, 1.0);
    MatrixXd ok(3, 2);
    ok << 0.0, 0.5, -1.0, 1.0, 0.3, -0.2;
    CHECK_NOTHROW(StateMatrix(ok, box));

    MatrixXd outside = ok;
    outside(1, 0) = -1.5;
    CHECK_THROWS_AS(StateMatrix(outside, box), DomainError);

    const StateMatrix free = StateMatrix::unbounded(outside);
    CHECK_FALSE(free.has_bounds());
}

TEST_CASE("bounds diameter by norm") {
    const Bounds box(VectorXd::Zero(2), (VectorXd(2) << 3.0, 4.0).finished());
    CHECK(box.diameter(Norm::euclidean) == doctest::Approx(5.0));
    CHECK(box.diameter(Norm::chebyshev) == doctest::Approx(4.0));
    CHECK(box.diameter(Norm::manhattan) == doctest::Approx(7.0));
}

TEST_CASE("matrix envelope and csv round-trip losslessly") {
    Rng rng(991);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + rng.uniform_int(6);
        const StochasticMatrix m = testutil::random_row_stochastic(n, rng);

        const StochasticMatrix via_json = matrix_from_json(matrix_to_json(m));
        CHECK(via_json.kind() == StochasticMatrix::Kind::row_stochastic);
        CHECK((via_json.values() - m.values()).cwiseAbs().maxCoeff() == 0.0);

        const MatrixXd via_csv = matrix_from_csv(matrix_to_csv(m.values()));
        CHECK((via_csv - m.values()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("csv parse rejects ragged rows") {
    CHECK_THROWS_AS(matrix_from_csv("1,2\n3\n"), FormatError);
    CHECK_THROWS_AS(matrix_from_csv(""), FormatError);
}
