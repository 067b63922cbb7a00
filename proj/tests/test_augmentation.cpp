#include "avgdyn/augmentation.hpp"
#include "avgdyn/dynamics.hpp"
#include "avgdyn/rng.hpp"

#include <doctest.h>

#include "test_util.hpp"

using namespace avgdyn;

namespace {

struct RandomSystem {
    StochasticMatrix a;
    VectorXd lambda;
    StateMatrix b;
    Bounds bounds;
};

RandomSystem random_system(Rng& rng, int n, int d, double lambda_lo = 0.05,
                           double lambda_hi = 0.9) {
    Bounds bounds = Bounds::symmetric(d, 1.0 + rng.uniform());
    return RandomSystem{testutil::random_row_stochastic(n, rng),
                        testutil::random_lambda(n, lambda_lo, lambda_hi, rng),
                        StateMatrix(testutil::random_states(n, d, bounds, rng), bounds),
                        bounds};
}

}  // namespace

TEST_CASE("lambda = 0 gives a block-diagonal augmented matrix") {
    Rng rng(3);
    const int n = 4;
    const Bounds bounds = Bounds::symmetric(2, 1.0);
    const StochasticMatrix a = testutil::random_row_stochastic(n, rng);
    const StateMatrix b(testutil::random_states(n, 2, bounds, rng), bounds);

    const AugmentedSystem sys = augment(a, VectorXd::Zero(n), b, bounds);
    const MatrixXd& m = sys.a_tilde().values();
    CHECK((m.topRightCorner(n, 4).cwiseAbs().maxCoeff()) == 0.0);
    CHECK((m.topLeftCorner(n, n) - a.values()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((m.bottomRightCorner(4, 4) - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("midpoint signal gives half/half ghost weights") {
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const StochasticMatrix a = StochasticMatrix::identity(1);
    const StateMatrix b(MatrixXd::Zero(1, 1), bounds);
    const AugmentedSystem sys =
        augment(a, VectorXd::Constant(1, 0.5), b, bounds);
    CHECK(sys.w_block()(0, 0) == doctest::Approx(0.5));
    CHECK(sys.w_block()(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("boundary signal puts all weight on one ghost") {
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const StochasticMatrix a = StochasticMatrix::identity(1);
    const StateMatrix b(MatrixXd::Constant(1, 1, 1.0), bounds);
    const AugmentedSystem sys =
        augment(a, VectorXd::Constant(1, 0.5), b, bounds);
    CHECK(sys.w_block()(0, 0) == doctest::Approx(1.0));
    CHECK(sys.w_block()(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("signals outside bounds are rejected") {
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const StochasticMatrix a = StochasticMatrix::identity(1);
    // b is bounds-checked at StateMatrix construction already; go through an
    // unbounded state to hit augment's own validation
    const StateMatrix b = StateMatrix::unbounded(MatrixXd::Constant(1, 1, 1.5));
    CHECK_THROWS_AS(augment(a, VectorXd::Constant(1, 0.5), b, bounds), DomainError);
}

TEST_CASE("degenerate dimension accepts only the common value") {
    const Bounds degenerate(VectorXd::Constant(1, 0.3), VectorXd::Constant(1, 0.3));
    const StochasticMatrix a = StochasticMatrix::identity(1);
    const VectorXd lambda = VectorXd::Constant(1, 0.5);

    const StateMatrix good(MatrixXd::Constant(1, 1, 0.3), degenerate);
    const AugmentedSystem sys = augment(a, lambda, good, degenerate);
    CHECK(((sys.w_block() * sys.c_block()) - good.values()).cwiseAbs().maxCoeff() <
          1e-12);

    const StateMatrix bad = StateMatrix::unbounded(MatrixXd::Constant(1, 1, 0.4));
    CHECK_THROWS_AS(augment(a, lambda, bad, degenerate), DomainError);
}

TEST_CASE("reconstruction identity W C = b and row stochasticity") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + rng.uniform_int(8);
        const int d = 1 + rng.uniform_int(3);
        const RandomSystem s = random_system(rng, n, d);
        const AugmentedSystem sys = augment(s.a, s.lambda, s.b, s.bounds);

        CHECK(((sys.w_block() * sys.c_block()) - s.b.values()).cwiseAbs().maxCoeff() <
              1e-10);
        // W rows sum to 1 and entries lie in [0, 1/d]
        for (int i = 0; i < n; ++i) {
            CHECK(sys.w_block().row(i).sum() == doctest::Approx(1.0));
            CHECK(sys.w_block().row(i).minCoeff() >= 0.0);
        }
    }
}

TEST_CASE("deaugment inverts augment") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + rng.uniform_int(6);
        const int d = 1 + rng.uniform_int(3);
        const RandomSystem s = random_system(rng, n, d);
        const AugmentedSystem sys = augment(s.a, s.lambda, s.b, s.bounds);
        const Deaugmented inv = deaugment(sys);

        CHECK((inv.a.values() - s.a.values()).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((inv.lambda - s.lambda).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((inv.b.values() - s.b.values()).cwiseAbs().maxCoeff() < 1e-10);
        for (bool defined : inv.signal_defined) CHECK(defined);
    }
}

TEST_CASE("lambda recovery formula matches the block row sums") {
    Rng rng(19);
    const RandomSystem s = random_system(rng, 5, 2);
    const AugmentedSystem sys = augment(s.a, s.lambda, s.b, s.bounds);
    for (int i = 0; i < 5; ++i) {
        const double row_sum = sys.a_tilde().values().row(i).head(5).sum();
        CHECK(1.0 - row_sum == doctest::Approx(s.lambda(i)).epsilon(1e-10));
    }
}

TEST_CASE("block-diagonal system deaugments to lambda 0 with flagged signals") {
    Rng rng(23);
    const int n = 3;
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const StochasticMatrix a = testutil::random_row_stochastic(n, rng);
    const StateMatrix b(testutil::random_states(n, 1, bounds, rng), bounds);
    const AugmentedSystem sys = augment(a, VectorXd::Zero(n), b, bounds);
    const Deaugmented inv = deaugment(sys);
    CHECK(inv.lambda.cwiseAbs().maxCoeff() == 0.0);
    for (bool defined : inv.signal_defined) CHECK_FALSE(defined);
}

TEST_CASE("from_matrix validates the ghost rows") {
    Rng rng(29);
    const RandomSystem s = random_system(rng, 4, 1);
    const AugmentedSystem sys = augment(s.a, s.lambda, s.b, s.bounds);

    CHECK_NOTHROW(AugmentedSystem::from_matrix(sys.a_tilde(), 4, s.bounds));

    MatrixXd broken = sys.a_tilde().values();
    broken.row(4).setZero();
    broken(4, 0) = 0.5;
    broken(4, 4) = 0.5;  // ghost now feeds back into the originals
    CHECK_THROWS_AS(
        AugmentedSystem::from_matrix(StochasticMatrix::row_stochastic(broken), 4, s.bounds),
        FormatError);
}

TEST_CASE("step_augmented equals the affine update") {
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + rng.uniform_int(6);
        const int d = 1 + rng.uniform_int(2);
        const RandomSystem s = random_system(rng, n, d);
        const StateMatrix x(testutil::random_states(n, d, s.bounds, rng), s.bounds);

        const AugmentedSystem sys = augment(s.a, s.lambda, s.b, s.bounds);
        const StateMatrix stacked = sys.initial_stack(x.values());
        const StateMatrix next = step_augmented(sys, stacked);
        const StateMatrix direct = step_affine(s.a, s.lambda, s.b, x);

        CHECK((next.values().topRows(n) - direct.values()).cwiseAbs().maxCoeff() < 1e-12);
        // ghost rows are fixed points
        CHECK((next.values().bottomRows(sys.n_ghosts()) - sys.c_block())
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
    }
}

TEST_CASE("lambda = 0 step reduces to DeGroot") {
    Rng rng(41);
    const int n = 5;
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const StochasticMatrix a = testutil::random_row_stochastic(n, rng);
    const StateMatrix b(MatrixXd::Zero(n, 1), bounds);
    const StateMatrix x(testutil::random_states(n, 1, bounds, rng), bounds);

    const AugmentedSystem sys = augment(a, VectorXd::Zero(n), b, bounds);
    const StateMatrix next = step_augmented(sys, sys.initial_stack(x.values()));
    CHECK((next.values().topRows(n) - a.values() * x.values()).cwiseAbs().maxCoeff() <
          1e-15);
}

TEST_CASE("scalar system: one augmented step") {
    // N=1, lambda=0.5, A=[1], b=0.4, x=0 -> next state 0.2
    const Bounds bounds = Bounds::symmetric(1, 1.0);
    const AugmentedSystem sys =
        augment(StochasticMatrix::identity(1), VectorXd::Constant(1, 0.5),
                StateMatrix(MatrixXd::Constant(1, 1, 0.4), bounds), bounds);
    const StateMatrix next =
        step_augmented(sys, sys.initial_stack(MatrixXd::Zero(1, 1)));
    CHECK(next.values()(0, 0) == doctest::Approx(0.2));
}

TEST_CASE("step_augmented rejects a tampered ghost block") {
    Rng rng(43);
    const RandomSystem s = random_system(rng, 3, 1);
    const AugmentedSystem sys = augment(s.a, s.lambda, s.b, s.bounds);
    MatrixXd stacked = sys.initial_stack(MatrixXd::Zero(3, 1)).values();
    stacked(3, 0) += 0.25;
    CHECK_THROWS_AS(step_augmented(sys, StateMatrix::unbounded(stacked)), DomainError);
}

TEST_CASE("multi-step trajectories agree between the two forms") {
    Rng rng(53);
    const int n = 6, d = 2;
    const RandomSystem s = random_system(rng, n, d);
    const AugmentedSystem sys = augment(s.a, s.lambda, s.b, s.bounds);

    MatrixXd x = testutil::random_states(n, d, s.bounds, rng);
    StateMatrix stacked = sys.initial_stack(x);
    StateMatrix flat(x, s.bounds);
    for (int t = 0; t < 40; ++t) {
        stacked = step_augmented(sys, stacked);
        flat = step_affine(s.a, s.lambda, s.b, flat);
        CHECK((stacked.values().topRows(n) - flat.values()).cwiseAbs().maxCoeff() <
              1e-10);
    }
}
