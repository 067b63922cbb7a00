#include "avgdyn/matrix.hpp"

#include <cmath>

namespace avgdyn {

namespace {

void validate(const MatrixXd& m, StochasticMatrix::Kind kind) {
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            if (!(v >= 0.0) || !std::isfinite(v))
                throw DomainError("StochasticMatrix: negative or non-finite entry at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
    if (kind == StochasticMatrix::Kind::general) return;
    for (int i = 0; i < m.rows(); ++i) {
        const double s = m.row(i).sum();
        if (kind == StochasticMatrix::Kind::row_stochastic) {
            if (std::abs(s - 1.0) > StochasticMatrix::kRowSumTol)
                throw DomainError("StochasticMatrix: row " + std::to_string(i) +
                                  " sums to " + std::to_string(s) + ", expected 1");
        } else {
            if (s > 1.0 + StochasticMatrix::kRowSumTol)
                throw DomainError("StochasticMatrix: row " + std::to_string(i) +
                                  " sums to " + std::to_string(s) + ", expected <= 1");
        }
    }
}

}  // namespace

StochasticMatrix::StochasticMatrix(MatrixXd entries, Kind kind)
    : entries_(std::move(entries)), kind_(kind) {
    validate(entries_, kind_);
}

StochasticMatrix StochasticMatrix::row_stochastic(MatrixXd entries) {
    return StochasticMatrix(std::move(entries), Kind::row_stochastic);
}

StochasticMatrix StochasticMatrix::substochastic(MatrixXd entries) {
    return StochasticMatrix(std::move(entries), Kind::substochastic);
}

StochasticMatrix StochasticMatrix::general(MatrixXd entries) {
    return StochasticMatrix(std::move(entries), Kind::general);
}

StochasticMatrix StochasticMatrix::identity(int n) {
    return StochasticMatrix(MatrixXd::Identity(n, n), Kind::row_stochastic);
}

StochasticMatrix StochasticMatrix::renormalized() const {
    MatrixXd out = entries_;
    for (int i = 0; i < out.rows(); ++i) {
        const double s = out.row(i).sum();
        if (s <= 0.0)
            throw DomainError("renormalized: row " + std::to_string(i) + " has zero sum");
        out.row(i) /= s;
    }
    return StochasticMatrix(std::move(out), Kind::row_stochastic);
}

std::vector<std::vector<int>> StochasticMatrix::support_adjacency() const {
    if (!square())
        throw DimensionError("support_adjacency: matrix is not square");
    std::vector<std::vector<int>> adj(rows());
    for (int i = 0; i < rows(); ++i) {
        for (int j = 0; j < cols(); ++j) {
            if (entries_(i, j) > 0.0) adj[i].push_back(j);
        }
    }
    return adj;
}

StateMatrix::StateMatrix(MatrixXd values, Bounds bounds)
    : values_(std::move(values)), bounds_(std::move(bounds)) {
    if (values_.cols() != bounds_->dims())
        throw DimensionError("StateMatrix: dimension count does not match bounds");
    if (!bounds_->contains(values_))
        throw DomainError("StateMatrix: values outside declared bounds");
}

StateMatrix StateMatrix::unbounded(MatrixXd values) {
    return StateMatrix(std::move(values));
}

const Bounds& StateMatrix::bounds() const {
    if (!bounds_)
        throw DomainError("StateMatrix: no bounds attached");
    return *bounds_;
}

StateMatrix StateMatrix::with_values(MatrixXd values) const {
    if (bounds_) return StateMatrix(std::move(values), *bounds_);
    return StateMatrix(std::move(values));
}

}  // namespace avgdyn
