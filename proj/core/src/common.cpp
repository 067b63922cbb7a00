#include "avgdyn/common.hpp"

#include <cmath>

namespace avgdyn {

double row_distance(const RowVectorXd& a, const RowVectorXd& b, Norm norm) {
    if (a.size() != b.size())
        throw DimensionError("row_distance: size mismatch");
    switch (norm) {
        case Norm::euclidean: return (a - b).norm();
        case Norm::chebyshev: return (a - b).cwiseAbs().maxCoeff();
        case Norm::manhattan: return (a - b).cwiseAbs().sum();
    }
    return 0.0;
}

const char* norm_name(Norm norm) {
    switch (norm) {
        case Norm::euclidean: return "euclidean";
        case Norm::chebyshev: return "chebyshev";
        case Norm::manhattan: return "manhattan";
    }
    return "euclidean";
}

Norm norm_from_name(const std::string& name) {
    if (name == "euclidean") return Norm::euclidean;
    if (name == "chebyshev") return Norm::chebyshev;
    if (name == "manhattan") return Norm::manhattan;
    throw DomainError("unknown norm: " + name);
}

Bounds::Bounds(VectorXd lower, VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size())
        throw DimensionError("Bounds: lower/upper dimension mismatch");
    if (lower_.size() == 0)
        throw DomainError("Bounds: empty");
    for (int l = 0; l < lower_.size(); ++l) {
        if (!(lower_(l) <= upper_(l)))
            throw DomainError("Bounds: lower > upper in dimension " + std::to_string(l));
    }
}

Bounds Bounds::symmetric(int dims, double half_width) {
    return Bounds(VectorXd::Constant(dims, -half_width), VectorXd::Constant(dims, half_width));
}

Bounds Bounds::unit_box(int dims) {
    return Bounds(VectorXd::Zero(dims), VectorXd::Ones(dims));
}

double Bounds::diameter(Norm norm) const {
    const VectorXd w = widths();
    switch (norm) {
        case Norm::euclidean: return w.norm();
        case Norm::chebyshev: return w.maxCoeff();
        case Norm::manhattan: return w.sum();
    }
    return 0.0;
}

bool Bounds::contains(const MatrixXd& states, double tol) const {
    if (states.cols() != lower_.size())
        return false;
    for (int i = 0; i < states.rows(); ++i) {
        for (int l = 0; l < states.cols(); ++l) {
            if (states(i, l) < lower_(l) - tol || states(i, l) > upper_(l) + tol)
                return false;
        }
    }
    return true;
}

bool Bounds::operator==(const Bounds& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_;
}

}  // namespace avgdyn
