#pragma once

#include <vector>

#include "soppp/dag.hpp"

namespace soppp {

// Per-stage reveal relation over the edges of a Dag. Stored by revealer
// lists (in-neighbors): revealers(e) = { e' : e' -> e }, which is what
// the q computation consumes. Every edge reveals itself.
class ObservationGraph {
public:
    // self-loops only (classical semi-bandit)
    explicit ObservationGraph(int edge_count);

    static ObservationGraph complete(int edge_count);

    int edge_count() const { return static_cast<int>(revealers_.size()); }
    const std::vector<int>& revealers(int e) const { return revealers_[e]; }
    const std::vector<int>& revealed_by(int e) const { return revealed_by_[e]; }

    // arc revealer -> revealed; idempotent
    void add_arc(int revealer, int revealed);

private:
    std::vector<std::vector<int>> revealers_;
    std::vector<std::vector<int>> revealed_by_;
};

// O_t(p): every edge revealed by some edge of the path; sorted,
// always a superset of the path's own edges.
std::vector<int> revealed_set(const ObservationGraph& obs, const Path& path);

// q(e) = sum of x(p) over paths p revealing e, computed by consecutive
// weight pushing with dedup masking (each path counted once).
double compute_q(const Dag& dag, const LogWeights& weights, const ObservationGraph& obs, int edge);

// Test oracle: the same quantity by exhaustive path enumeration.
double compute_q_bruteforce(const Dag& dag, const LogWeights& weights,
                            const ObservationGraph& obs, int edge,
                            std::uint64_t cap = 1000000);

bool is_symmetric(const ObservationGraph& obs);

// (A0): no edge has two distinct revealers that co-occur on some
// source-sink path.
bool satisfies_a0(const Dag& dag, const ObservationGraph& obs);

struct IndependenceResult {
    int value;
    bool exact;
};

// Maximum independent set of the undirected skeleton; exact branch and
// bound up to exact_cap vertices, greedy clique-cover upper bound beyond.
IndependenceResult independence_number(const ObservationGraph& obs, int exact_cap = 64);

struct ObsDiagnostics {
    bool symmetric;
    bool satisfies_a0;
    int independence_number;
    bool independence_exact;
};

ObsDiagnostics diagnose(const Dag& dag, const ObservationGraph& obs, int exact_cap = 64);

// Q = sum over edges of r(e) / (q(e) + beta)
double q_sum(const Dag& dag, const LogWeights& weights, const ObservationGraph& obs, double beta);

// Structure-class upper bound on Q with M = ceil(2 E^2 / beta).
double qt_bound(double alpha, int n, int edge_count, double beta, bool symmetric, bool a0);

} // namespace soppp
