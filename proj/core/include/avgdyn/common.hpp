#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace avgdyn {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

/// Input violates a documented precondition (bad value, out-of-range).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Matrix/vector shapes disagree.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A serialized object does not match its expected layout.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An update schedule emitted an invalid (A(t), b(t)) pair.
struct ScheduleError : std::runtime_error {
    long step;
    ScheduleError(long t, const std::string& msg)
        : std::runtime_error("schedule error at step " + std::to_string(t) + ": " + msg),
          step(t) {}
};

enum class Norm { euclidean, chebyshev, manhattan };

double row_distance(const RowVectorXd& a, const RowVectorXd& b, Norm norm);

const char* norm_name(Norm norm);
Norm norm_from_name(const std::string& name);

/// Per-dimension box bounds of the compact state space X.
class Bounds {
public:
    Bounds(VectorXd lower, VectorXd upper);

    static Bounds symmetric(int dims, double half_width);
    static Bounds unit_box(int dims);

    int dims() const { return static_cast<int>(lower_.size()); }
    const VectorXd& lower() const { return lower_; }
    const VectorXd& upper() const { return upper_; }

    VectorXd midpoint() const { return 0.5 * (lower_ + upper_); }
    VectorXd widths() const { return upper_ - lower_; }

    /// Diameter of the box under the given norm.
    double diameter(Norm norm = Norm::euclidean) const;

    /// True iff every row of `states` lies inside the box (within `tol` slack).
    bool contains(const MatrixXd& states, double tol = 1e-9) const;

    bool operator==(const Bounds& other) const;

private:
    VectorXd lower_;
    VectorXd upper_;
};

}  // namespace avgdyn
