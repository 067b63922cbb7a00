#include "avgdyn/schedule.hpp"

namespace avgdyn {

UpdateSchedule::UpdateSchedule(Kind kind, int n_agents, VectorXd lambda, Bounds bounds,
                               Emitter emit)
    : kind_(kind),
      n_agents_(n_agents),
      lambda_(std::move(lambda)),
      bounds_(std::move(bounds)),
      emit_(std::move(emit)) {
    if (lambda_.size() != n_agents_)
        throw DimensionError("UpdateSchedule: lambda size does not match agent count");
    for (int i = 0; i < lambda_.size(); ++i) {
        if (lambda_(i) < 0.0 || lambda_(i) >= 1.0)
            throw DomainError("UpdateSchedule: lambda_" + std::to_string(i) +
                              " outside [0,1)");
    }
}

UpdateSchedule UpdateSchedule::stationary(StochasticMatrix a, VectorXd lambda, MatrixXd b,
                                          Bounds bounds) {
    if (!a.square() || a.rows() != b.rows())
        throw DimensionError("stationary schedule: A/b shape mismatch");
    const int n = a.rows();
    auto pair = std::make_shared<ScheduleStep>(ScheduleStep{std::move(a), std::move(b)});
    auto emit = [pair](long, const MatrixXd&) { return *pair; };
    return UpdateSchedule(Kind::stationary, n, std::move(lambda), std::move(bounds),
                          std::move(emit));
}

UpdateSchedule UpdateSchedule::scripted(std::vector<StochasticMatrix> a_seq,
                                        std::vector<MatrixXd> b_seq, VectorXd lambda,
                                        Bounds bounds) {
    if (a_seq.empty() || a_seq.size() != b_seq.size())
        throw DomainError("scripted schedule: empty or mismatched sequences");
    const int n = a_seq.front().rows();
    auto a_shared = std::make_shared<std::vector<StochasticMatrix>>(std::move(a_seq));
    auto b_shared = std::make_shared<std::vector<MatrixXd>>(std::move(b_seq));
    auto emit = [a_shared, b_shared](long t, const MatrixXd&) {
        const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(t),
                                                    a_shared->size() - 1);
        return ScheduleStep{(*a_shared)[k], (*b_shared)[k]};
    };
    return UpdateSchedule(Kind::scripted, n, std::move(lambda), std::move(bounds),
                          std::move(emit));
}

UpdateSchedule UpdateSchedule::feedback(Emitter emit, int n_agents, VectorXd lambda,
                                        Bounds bounds) {
    return UpdateSchedule(Kind::feedback, n_agents, std::move(lambda), std::move(bounds),
                          std::move(emit));
}

ScheduleStep UpdateSchedule::at(long t, const MatrixXd& x) const {
    return emit_(t, x);
}

bool UpdateSchedule::has_signals() const {
    return (lambda_.array() > 0.0).any();
}

}  // namespace avgdyn
