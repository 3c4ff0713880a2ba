#pragma once

#include <optional>
#include <vector>

#include "soppp/dag.hpp"
#include "soppp/obs_graph.hpp"

namespace soppp {

struct LearnerParams {
    double eta;
    double beta;
    long horizon;
};

// Stage feedback handed to the learner: the generated observation graph,
// the revealed edge set, and losses for (at least) the revealed edges.
struct Feedback {
    const ObservationGraph* obs;
    std::vector<int> revealed;     // sorted edge ids
    std::vector<double> losses;    // indexed by edge; only revealed entries are read
};

struct RoundRecord {
    long stage;
    Path chosen;
    double realized_loss;               // sum of true losses on the chosen path
    std::vector<int> revealed;
    std::vector<double> q_revealed;     // q values parallel to `revealed`
    std::optional<double> q_sum_value;  // Q_t, present when diagnostics requested
};

// Exp3-OE state. The stored quantity is the cumulative estimated loss
// S(e); log-weights are derived as -eta * S(e), so w_1(e) = 1.
class Learner {
public:
    Learner(const Dag& dag, LearnerParams params);

    const Dag& dag() const { return *dag_; }
    const LearnerParams& params() const { return params_; }
    long stage() const { return stage_; }
    const std::vector<double>& cumulative_estimated_loss() const { return cum_est_loss_; }

    LogWeights current_log_weights() const;

    // Samples a path from the Eq.-style exponential-weights distribution;
    // the flow table is returned for reuse.
    std::pair<Path, FlowTable> draw(Rng& rng) const;

    // Applies the stage update: S(e) += loss(e) / (q(e) + beta) for every
    // revealed edge, with q computed under the pre-update weights.
    // `record_q_sum` additionally computes Q_t over all edges (O(E^3)).
    RoundRecord update(const Path& chosen, const Feedback& feedback, bool record_q_sum = false);

private:
    const Dag* dag_;
    LearnerParams params_;
    std::vector<double> cum_est_loss_;
    long stage_ = 1;
};

// Structure class and graph statistics that drive parameter tuning.
struct TuningCase {
    bool symmetric;
    bool a0;
    double alpha;   // upper bound on every stage's independence number
    int n;          // longest path length
    int edge_count;
    double log_p;   // log of the path count
};

// The four-regime (symmetric x A0) closed-form choices of beta and eta.
LearnerParams tune_parameters(const TuningCase& tc, long horizon);

// Doubling wrapper for unknown horizons: tunes for the smallest power of
// two not below the current stage.
LearnerParams tune_parameters_doubling(const TuningCase& tc, long stage);

// ln(P)/eta + (beta + n*eta/2) * sum of Q_t
double regret_bound_rhs(const LearnerParams& params, int n, double log_p,
                    const std::vector<double>& q_sums);

} // namespace soppp
