#include "soppp/exp3oe.hpp"

#include <cmath>
#include <string>

namespace soppp {

Learner::Learner(const Dag& dag, LearnerParams params)
    : dag_(&dag), params_(params), cum_est_loss_(dag.edge_count(), 0.0) {
    if (!(params_.eta > 0.0))
        throw Error("eta must be positive");
    if (!(params_.beta > 0.0))
        throw Error("beta must be positive");
    if (params_.horizon < 1)
        throw Error("horizon must be at least 1");
}

LogWeights Learner::current_log_weights() const {
    LogWeights lw(dag_->edge_count());
    for (int e = 0; e < dag_->edge_count(); ++e)
        lw.set_log(e, -params_.eta * cum_est_loss_[e]);
    return lw;
}

std::pair<Path, FlowTable> Learner::draw(Rng& rng) const {
    LogWeights lw = current_log_weights();
    FlowTable ft = weight_push(*dag_, lw);
    Path path = sample_path(*dag_, ft, lw, rng);
    return {std::move(path), std::move(ft)};
}

RoundRecord Learner::update(const Path& chosen, const Feedback& feedback, bool record_q_sum) {
    if (feedback.obs == nullptr || feedback.obs->edge_count() != dag_->edge_count())
        throw InconsistentFeedback("observation graph missing or of wrong size");
    std::vector<int> expected = revealed_set(*feedback.obs, chosen);
    if (feedback.revealed != expected)
        throw InconsistentFeedback("revealed set does not match the observation graph");
    for (int e : feedback.revealed) {
        double l = feedback.losses[e];
        if (!(l >= 0.0 && l <= 1.0))
            throw LossOutOfRange("loss on edge " + std::to_string(e) + " outside [0,1]");
    }

    LogWeights pre = current_log_weights();

    RoundRecord rec;
    rec.stage = stage_;
    rec.chosen = chosen;
    rec.realized_loss = 0.0;
    for (int e : chosen.edge_ids)
        rec.realized_loss += feedback.losses[e];
    rec.revealed = feedback.revealed;
    rec.q_revealed.reserve(feedback.revealed.size());

    std::vector<double> increments(feedback.revealed.size());
    for (std::size_t i = 0; i < feedback.revealed.size(); ++i) {
        int e = feedback.revealed[i];
        double q = compute_q(*dag_, pre, *feedback.obs, e);
        rec.q_revealed.push_back(q);
        increments[i] = feedback.losses[e] / (q + params_.beta);
    }
    if (record_q_sum) {
        FlowTable ft = weight_push(*dag_, pre);
        double total = 0.0;
        std::size_t next_revealed = 0;
        for (int e = 0; e < dag_->edge_count(); ++e) {
            double q;
            if (next_revealed < feedback.revealed.size() && feedback.revealed[next_revealed] == e)
                q = rec.q_revealed[next_revealed++];
            else
                q = compute_q(*dag_, pre, *feedback.obs, e);
            total += edge_marginal(*dag_, ft, pre, e) / (q + params_.beta);
        }
        rec.q_sum_value = total;
    }

    for (std::size_t i = 0; i < feedback.revealed.size(); ++i)
        cum_est_loss_[feedback.revealed[i]] += increments[i];
    ++stage_;
    return rec;
}

namespace {

// positive root of a*x^2 + b*x = 1, written to avoid cancellation
double stable_root(double a, double b) {
    return 2.0 / (b + std::sqrt(b * b + 4.0 * a));
}

} // namespace

LearnerParams tune_parameters(const TuningCase& tc, long horizon) {
    double T = static_cast<double>(horizon);
    double alpha = tc.alpha;
    double n = tc.n;
    double e = tc.edge_count;
    double log_p = tc.log_p;
    LearnerParams p{};
    p.horizon = horizon;

    if (tc.symmetric && tc.a0) {
        p.beta = 1.0 / std::sqrt(alpha * T);
        p.eta = 2.0 * std::sqrt(log_p) / std::sqrt(n * alpha * T);
    } else if (tc.symmetric) {
        p.beta = 1.0 / std::sqrt(n * alpha * T);
        p.eta = 2.0 * std::sqrt(log_p) / std::sqrt(n * n * alpha * T);
    } else if (tc.a0) {
        // beta* solves T*alpha*(3+2E) * b^2 + 2*T*alpha*E^2 * b = 1
        p.beta = stable_root(T * alpha * (3.0 + 2.0 * e), 2.0 * T * alpha * e * e);
        // eta targets the sqrt(T*n*alpha*ln P) regret scale directly; folding
        // ceil(2E^2/beta*) into the log factor would deflate eta by ~sqrt(ln T)
        // and leave the learner visibly pre-asymptotic at practical horizons
        p.eta = 2.0 * std::sqrt(log_p) / std::sqrt(T * n * alpha);
    } else {
        // beta* solves Tn*(1+alpha*ln(alpha)+E+n) * b^2 + Tn^2*E^2 * b = 1
        double c = 1.0 + alpha * std::log(alpha) + e + n;
        p.beta = stable_root(T * n * c, T * n * n * e * e);
        double m = std::ceil(e * e / p.beta);
        p.eta = std::sqrt(log_p) /
                std::sqrt(n * n * T * (1.0 + alpha * std::log(alpha + n * m + e)));
    }
    return p;
}

LearnerParams tune_parameters_doubling(const TuningCase& tc, long stage) {
    long horizon = 1;
    while (horizon < stage)
        horizon *= 2;
    return tune_parameters(tc, horizon);
}

double regret_bound_rhs(const LearnerParams& params, int n, double log_p,
                    const std::vector<double>& q_sums) {
    double total = 0.0;
    for (double q : q_sums)
        total += q;
    return log_p / params.eta + (params.beta + n * params.eta / 2.0) * total;
}

} // namespace soppp
