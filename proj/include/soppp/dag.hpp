#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "soppp/errors.hpp"
#include "soppp/rng.hpp"

namespace soppp {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct EdgeRef {
    int tail;
    int head;
};

// Validated DAG with a designated source/sink. Every edge lies on at
// least one source-sink path; construction rejects anything else.
class Dag {
public:
    static Dag build(int vertex_count, std::vector<EdgeRef> edges, int source, int sink);

    int vertex_count() const { return vertex_count_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const EdgeRef& edge(int e) const { return edges_[e]; }
    int source() const { return source_; }
    int sink() const { return sink_; }
    int max_path_length() const { return max_path_length_; }

    int topo_label(int v) const { return topo_label_[v]; }
    // vertices sorted by topological label
    const std::vector<int>& topo_order() const { return topo_order_; }

    // edge ids, sorted ascending
    const std::vector<int>& out_edges(int v) const { return out_edges_[v]; }
    const std::vector<int>& in_edges(int v) const { return in_edges_[v]; }

private:
    int vertex_count_ = 0;
    std::vector<EdgeRef> edges_;
    int source_ = 0;
    int sink_ = 0;
    int max_path_length_ = 0;
    std::vector<int> topo_label_;
    std::vector<int> topo_order_;
    std::vector<std::vector<int>> out_edges_;
    std::vector<std::vector<int>> in_edges_;
};

struct Path {
    std::vector<int> edge_ids;

    bool contains(int e) const {
        return std::find(edge_ids.begin(), edge_ids.end(), e) != edge_ids.end();
    }
    int length() const { return static_cast<int>(edge_ids.size()); }
    bool operator==(const Path& other) const = default;
};

// Per-edge weights in the log domain. A zero weight is a masked entry,
// excluded exactly from every aggregation (it is not a finite sentinel).
class LogWeights {
public:
    explicit LogWeights(int edge_count, double log_value = 0.0)
        : log_w_(edge_count, log_value), zero_(edge_count, 0) {}

    static LogWeights from_logs(std::vector<double> logs) {
        LogWeights lw(static_cast<int>(logs.size()));
        lw.log_w_ = std::move(logs);
        return lw;
    }

    int size() const { return static_cast<int>(log_w_.size()); }
    bool is_zero(int e) const { return zero_[e] != 0; }
    double log(int e) const { return log_w_[e]; }
    void set_log(int e, double v) {
        log_w_[e] = v;
        zero_[e] = 0;
    }
    void set_zero(int e) { zero_[e] = 1; }

private:
    std::vector<double> log_w_;
    std::vector<char> zero_;
};

// log H(s,u) and log H(u,d) for every vertex; kNegInf marks zero mass.
struct FlowTable {
    std::vector<double> log_from_source;
    std::vector<double> log_to_sink;
};

// Weight pushing: H(s,u) = sum over s->u paths of the product of edge
// weights, and symmetrically H(u,d). All sums in the log domain.
FlowTable weight_push(const Dag& dag, const LogWeights& weights);

// Draws a path with probability w(p)/sum w(p'); each vertex step picks a
// successor v with probability w(e)*H(v,d)/H(u,d).
Path sample_path(const Dag& dag, const FlowTable& flow, const LogWeights& weights, Rng& rng);

// x(p) = w(p) / H(s,d)
double path_probability(const Dag& dag, const FlowTable& flow, const LogWeights& weights,
                        const Path& path);

// r(e) = H(s,tail)*w(e)*H(head,d) / H(s,d)
double edge_marginal(const Dag& dag, const FlowTable& flow, const LogWeights& weights, int edge);

// Min-plus DP; ties broken by the lexicographically smallest edge-id
// sequence.
std::pair<Path, double> best_fixed_path(const Dag& dag, const std::vector<double>& edge_totals);

// Exact path count, saturating at uint64 max.
std::uint64_t count_paths(const Dag& dag);

// log of the path count, carried in the log domain throughout.
double log_path_count(const Dag& dag);

// Test oracle: all s->d paths in lexicographic edge-id order.
// Exponential; throws TooManyPaths above the cap.
std::vector<Path> enumerate_paths(const Dag& dag, std::uint64_t cap = 1000000);

// Vertex-to-vertex reachability (reflexive), bitset rows.
class Reachability {
public:
    explicit Reachability(const Dag& dag);
    bool reaches(int u, int v) const {
        return (rows_[u][static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1;
    }

private:
    std::vector<std::vector<std::uint64_t>> rows_;
};

} // namespace soppp
