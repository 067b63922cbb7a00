#pragma once

#include "avgdyn/common.hpp"

#include <optional>
#include <vector>

namespace avgdyn {

/// Dense nonnegative weighted adjacency. Row sums are validated against the
/// flagged kind at construction: row-stochastic rows must sum to 1 within
/// 1e-12, substochastic rows to at most 1 + 1e-12. Matrices are never
/// re-normalized silently; use renormalized() when that is wanted.
class StochasticMatrix {
public:
    enum class Kind { general, row_stochastic, substochastic };

    static constexpr double kRowSumTol = 1e-12;

    StochasticMatrix(MatrixXd entries, Kind kind);

    static StochasticMatrix row_stochastic(MatrixXd entries);
    static StochasticMatrix substochastic(MatrixXd entries);
    static StochasticMatrix general(MatrixXd entries);
    static StochasticMatrix identity(int n);

    const MatrixXd& values() const { return entries_; }
    Kind kind() const { return kind_; }
    int rows() const { return static_cast<int>(entries_.rows()); }
    int cols() const { return static_cast<int>(entries_.cols()); }
    bool square() const { return entries_.rows() == entries_.cols(); }

    /// Rows divided by their sums; zero rows are rejected.
    StochasticMatrix renormalized() const;

    /// Digraph view: adjacency lists of the positive-entry support.
    /// Requires a square matrix.
    std::vector<std::vector<int>> support_adjacency() const;

private:
    MatrixXd entries_;
    Kind kind_;
};

/// N agent states (rows) in d dimensions, optionally tied to the box bounds
/// of the state space. Bounded construction validates containment.
class StateMatrix {
public:
    StateMatrix(MatrixXd values, Bounds bounds);
    static StateMatrix unbounded(MatrixXd values);

    int n_agents() const { return static_cast<int>(values_.rows()); }
    int dims() const { return static_cast<int>(values_.cols()); }
    const MatrixXd& values() const { return values_; }

    bool has_bounds() const { return bounds_.has_value(); }
    const Bounds& bounds() const;

    StateMatrix with_values(MatrixXd values) const;

private:
    explicit StateMatrix(MatrixXd values) : values_(std::move(values)) {}

    MatrixXd values_;
    std::optional<Bounds> bounds_;
};

}  // namespace avgdyn
