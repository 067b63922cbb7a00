#include "avgdyn/augmentation.hpp"

#include <cmath>

namespace avgdyn {

namespace {

constexpr double kLayoutTol = 1e-12;

MatrixXd c_pattern(const Bounds& bounds) {
    const int d = bounds.dims();
    MatrixXd c = MatrixXd::Zero(2 * d, d);
    for (int l = 0; l < d; ++l) {
        c(2 * l, l) = static_cast<double>(d) * bounds.upper()(l);
        c(2 * l + 1, l) = static_cast<double>(d) * bounds.lower()(l);
    }
    return c;
}

}  // namespace

AugmentedSystem::AugmentedSystem(StochasticMatrix a_tilde, MatrixXd c, MatrixXd w,
                                 VectorXd lambda, Bounds bounds)
    : a_tilde_(std::move(a_tilde)),
      c_(std::move(c)),
      w_(std::move(w)),
      lambda_(std::move(lambda)),
      bounds_(std::move(bounds)) {}

AugmentedSystem augment(const StochasticMatrix& a, const VectorXd& lambda,
                        const StateMatrix& b, const Bounds& bounds) {
    if (!a.square())
        throw DimensionError("augment: A must be square");
    const int n = a.rows();
    const int d = bounds.dims();
    if (lambda.size() != n || b.n_agents() != n || b.dims() != d)
        throw DimensionError("augment: A/lambda/b/bounds shapes disagree");
    if (a.kind() != StochasticMatrix::Kind::row_stochastic)
        throw DomainError("augment: A must be row stochastic");
    for (int i = 0; i < n; ++i) {
        if (lambda(i) < 0.0 || lambda(i) >= 1.0)
            throw DomainError("augment: lambda_" + std::to_string(i) + " outside [0,1)");
    }

    // Per-node ghost weights: b_il = w_up * upper_l + (1 - w_up) * lower_l.
    MatrixXd w = MatrixXd::Zero(n, 2 * d);
    const double inv_d = 1.0 / static_cast<double>(d);
    for (int i = 0; i < n; ++i) {
        if (lambda(i) == 0.0) continue;  // W row stays zero by convention
        for (int l = 0; l < d; ++l) {
            const double lo = bounds.lower()(l);
            const double hi = bounds.upper()(l);
            const double width = hi - lo;
            double w_up;
            if (width == 0.0) {
                if (std::abs(b.values()(i, l) - lo) > kLayoutTol)
                    throw DomainError("augment: signal outside degenerate dimension " +
                                      std::to_string(l));
                w_up = 0.5;
            } else {
                w_up = (b.values()(i, l) - lo) / width;
                if (w_up < -kLayoutTol || w_up > 1.0 + kLayoutTol)
                    throw DomainError("augment: signal of node " + std::to_string(i) +
                                      " outside bounds in dimension " + std::to_string(l));
                w_up = std::min(1.0, std::max(0.0, w_up));
            }
            w(i, 2 * l) = inv_d * w_up;
            w(i, 2 * l + 1) = inv_d * (1.0 - w_up);
        }
    }

    MatrixXd c = c_pattern(bounds);

    const int total = n + 2 * d;
    MatrixXd big = MatrixXd::Zero(total, total);
    big.topLeftCorner(n, n) = (VectorXd::Ones(n) - lambda).asDiagonal() * a.values();
    big.topRightCorner(n, 2 * d) = lambda.asDiagonal() * w;
    big.bottomRightCorner(2 * d, 2 * d).setIdentity();

    return AugmentedSystem(StochasticMatrix::row_stochastic(std::move(big)), std::move(c),
                           std::move(w), lambda, bounds);
}

AugmentedSystem AugmentedSystem::from_matrix(StochasticMatrix a_tilde, int n_agents,
                                             const Bounds& bounds) {
    const int dims = bounds.dims();
    const int total = n_agents + 2 * dims;
    if (!a_tilde.square() || a_tilde.rows() != total)
        throw DimensionError("from_matrix: expected " + std::to_string(total) +
                             " rows for N=" + std::to_string(n_agents) +
                             ", d=" + std::to_string(dims));
    const MatrixXd& m = a_tilde.values();

    // Ghost rows must be identity rows; that also pins the zero block.
    for (int g = n_agents; g < total; ++g) {
        for (int j = 0; j < total; ++j) {
            const double want = (j == g) ? 1.0 : 0.0;
            if (std::abs(m(g, j) - want) > kLayoutTol)
                throw FormatError("from_matrix: ghost row " + std::to_string(g - n_agents) +
                                  " is not an identity row");
        }
    }

    // lambda_i is the total ghost mass of row i; A rows sum to 1, so it also
    // equals 1 minus the top-left row sum.
    VectorXd lambda(n_agents);
    MatrixXd w = MatrixXd::Zero(n_agents, 2 * dims);
    for (int i = 0; i < n_agents; ++i) {
        const double ghost_mass = m.row(i).tail(2 * dims).sum();
        if (ghost_mass > 1.0 - StochasticMatrix::kRowSumTol)
            throw FormatError("from_matrix: row " + std::to_string(i) +
                              " has no social mass (lambda would be >= 1)");
        lambda(i) = ghost_mass;
        if (ghost_mass > 0.0) {
            w.row(i) = m.row(i).tail(2 * dims) / ghost_mass;
            if (std::abs(w.row(i).sum() - 1.0) > 1e-9)
                throw FormatError("from_matrix: W row " + std::to_string(i) +
                                  " does not sum to 1");
        }
    }

    return AugmentedSystem(std::move(a_tilde), c_pattern(bounds), std::move(w),
                           std::move(lambda), bounds);
}

StateMatrix AugmentedSystem::initial_stack(const MatrixXd& x) const {
    if (x.rows() != n_agents() || x.cols() != dims())
        throw DimensionError("initial_stack: x shape mismatch");
    MatrixXd stack(total_nodes(), dims());
    stack.topRows(n_agents()) = x;
    stack.bottomRows(n_ghosts()) = c_;
    return StateMatrix::unbounded(std::move(stack));
}

Deaugmented deaugment(const AugmentedSystem& sys) {
    const int n = sys.n_agents();
    const int d = sys.dims();
    const MatrixXd& m = sys.a_tilde().values();

    VectorXd lambda(n);
    MatrixXd a(n, n);
    MatrixXd b(n, d);
    std::vector<bool> defined(n, true);
    const VectorXd mid = sys.bounds().midpoint();

    for (int i = 0; i < n; ++i) {
        const double social = m.row(i).head(n).sum();
        lambda(i) = 1.0 - social;
        if (lambda(i) < StochasticMatrix::kRowSumTol) lambda(i) = 0.0;
        if (social <= 0.0)
            throw FormatError("deaugment: row " + std::to_string(i) + " has no social mass");
        a.row(i) = m.row(i).head(n) / social;
        if (lambda(i) == 0.0) {
            defined[i] = false;
            b.row(i) = mid.transpose();
        } else {
            b.row(i) = (m.row(i).tail(2 * d) / lambda(i)) * sys.c_block();
        }
    }

    return Deaugmented{StochasticMatrix::row_stochastic(std::move(a)), std::move(lambda),
                       StateMatrix(std::move(b), sys.bounds()), std::move(defined)};
}

StateMatrix step_augmented(const AugmentedSystem& sys, const StateMatrix& x_tilde) {
    if (x_tilde.n_agents() != sys.total_nodes() || x_tilde.dims() != sys.dims())
        throw DimensionError("step_augmented: stacked state has wrong shape");
    const MatrixXd& xt = x_tilde.values();
    if ((xt.bottomRows(sys.n_ghosts()) - sys.c_block()).cwiseAbs().maxCoeff() > kLayoutTol)
        throw DomainError("step_augmented: bottom block does not equal C");
    return x_tilde.with_values(sys.a_tilde().values() * xt);
}

}  // namespace avgdyn
