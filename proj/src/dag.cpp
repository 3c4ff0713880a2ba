#include "soppp/dag.hpp"

#include <cmath>
#include <deque>
#include <numeric>
#include <string>

namespace soppp {

namespace {

// log(sum exp(terms)) with exact handling of empty/-inf terms
double log_sum_exp(const std::vector<double>& terms) {
    double m = kNegInf;
    for (double t : terms)
        m = std::max(m, t);
    if (m == kNegInf)
        return kNegInf;
    double acc = 0.0;
    for (double t : terms)
        if (t != kNegInf)
            acc += std::exp(t - m);
    return m + std::log(acc);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t c = a + b;
    if (c < a)
        return std::numeric_limits<std::uint64_t>::max();
    return c;
}

} // namespace

Dag Dag::build(int vertex_count, std::vector<EdgeRef> edges, int source, int sink) {
    if (vertex_count < 2)
        throw BadEndpoints("need at least two vertices");
    if (edges.empty())
        throw BadEndpoints("edge list is empty");
    if (source == sink)
        throw BadEndpoints("source equals sink");
    for (const auto& e : edges) {
        if (e.tail < 0 || e.tail >= vertex_count || e.head < 0 || e.head >= vertex_count)
            throw BadEndpoints("edge endpoint out of range");
        if (e.tail == e.head)
            throw CycleDetected("self-loop edge");
    }

    Dag dag;
    dag.vertex_count_ = vertex_count;
    dag.edges_ = std::move(edges);
    dag.source_ = source;
    dag.sink_ = sink;
    dag.out_edges_.assign(vertex_count, {});
    dag.in_edges_.assign(vertex_count, {});
    for (int e = 0; e < dag.edge_count(); ++e) {
        dag.out_edges_[dag.edges_[e].tail].push_back(e);
        dag.in_edges_[dag.edges_[e].head].push_back(e);
    }
    // Kahn's algorithm
    std::vector<int> indeg(vertex_count, 0);
    for (const auto& e : dag.edges_)
        ++indeg[e.head];
    std::deque<int> ready;
    for (int v = 0; v < vertex_count; ++v)
        if (indeg[v] == 0)
            ready.push_back(v);
    dag.topo_label_.assign(vertex_count, -1);
    dag.topo_order_.clear();
    while (!ready.empty()) {
        int u = ready.front();
        ready.pop_front();
        dag.topo_label_[u] = static_cast<int>(dag.topo_order_.size());
        dag.topo_order_.push_back(u);
        for (int e : dag.out_edges_[u])
            if (--indeg[dag.edges_[e].head] == 0)
                ready.push_back(dag.edges_[e].head);
    }
    if (static_cast<int>(dag.topo_order_.size()) != vertex_count)
        throw CycleDetected("graph contains a cycle");
    if (!dag.in_edges_[source].empty())
        throw BadEndpoints("source has incoming edges");
    if (!dag.out_edges_[sink].empty())
        throw BadEndpoints("sink has outgoing edges");

    // every edge must lie on an s->d path: tail reachable from s, head co-reachable to d
    std::vector<char> from_s(vertex_count, 0), to_d(vertex_count, 0);
    from_s[source] = 1;
    for (int u : dag.topo_order_)
        if (from_s[u])
            for (int e : dag.out_edges_[u])
                from_s[dag.edges_[e].head] = 1;
    to_d[sink] = 1;
    for (auto it = dag.topo_order_.rbegin(); it != dag.topo_order_.rend(); ++it)
        if (to_d[*it])
            for (int e : dag.in_edges_[*it])
                to_d[dag.edges_[e].tail] = 1;
    for (int e = 0; e < dag.edge_count(); ++e)
        if (!from_s[dag.edges_[e].tail] || !to_d[dag.edges_[e].head])
            throw UnreachableEdge("edge " + std::to_string(e) + " is on no source-sink path");

    // longest path DP
    std::vector<int> longest(vertex_count, std::numeric_limits<int>::min());
    longest[source] = 0;
    for (int u : dag.topo_order_) {
        if (longest[u] == std::numeric_limits<int>::min())
            continue;
        for (int e : dag.out_edges_[u]) {
            int h = dag.edges_[e].head;
            longest[h] = std::max(longest[h], longest[u] + 1);
        }
    }
    dag.max_path_length_ = longest[sink];

    for (auto& v : dag.out_edges_)
        std::sort(v.begin(), v.end());
    for (auto& v : dag.in_edges_)
        std::sort(v.begin(), v.end());
    return dag;
}

FlowTable weight_push(const Dag& dag, const LogWeights& weights) {
    FlowTable ft;
    ft.log_from_source.assign(dag.vertex_count(), kNegInf);
    ft.log_to_sink.assign(dag.vertex_count(), kNegInf);
    ft.log_from_source[dag.source()] = 0.0;
    ft.log_to_sink[dag.sink()] = 0.0;

    std::vector<double> terms;
    for (int u : dag.topo_order()) {
        if (u == dag.source())
            continue;
        terms.clear();
        for (int e : dag.in_edges(u)) {
            if (weights.is_zero(e))
                continue;
            double prev = ft.log_from_source[dag.edge(e).tail];
            if (prev == kNegInf)
                continue;
            terms.push_back(prev + weights.log(e));
        }
        ft.log_from_source[u] = log_sum_exp(terms);
    }
    const auto& order = dag.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        if (u == dag.sink())
            continue;
        terms.clear();
        for (int e : dag.out_edges(u)) {
            if (weights.is_zero(e))
                continue;
            double next = ft.log_to_sink[dag.edge(e).head];
            if (next == kNegInf)
                continue;
            terms.push_back(next + weights.log(e));
        }
        ft.log_to_sink[u] = log_sum_exp(terms);
    }
    return ft;
}

Path sample_path(const Dag& dag, const FlowTable& flow, const LogWeights& weights, Rng& rng) {
    Path path;
    int u = dag.source();
    std::vector<double> mass;
    std::vector<int> cand;
    while (u != dag.sink()) {
        mass.clear();
        cand.clear();
        double m = kNegInf;
        for (int e : dag.out_edges(u)) {
            if (weights.is_zero(e))
                continue;
            double lw = weights.log(e) + flow.log_to_sink[dag.edge(e).head];
            if (lw == kNegInf)
                continue;
            cand.push_back(e);
            mass.push_back(lw);
            m = std::max(m, lw);
        }
        if (cand.empty())
            throw NumericalDegeneracy("no unmasked successor mass at vertex " + std::to_string(u));
        double total = 0.0;
        for (double& v : mass) {
            v = std::exp(v - m);
            total += v;
        }
        double r = rng.uniform() * total;
        int chosen = cand.back();
        for (std::size_t i = 0; i < cand.size(); ++i) {
            r -= mass[i];
            if (r <= 0.0) {
                chosen = cand[i];
                break;
            }
        }
        path.edge_ids.push_back(chosen);
        u = dag.edge(chosen).head;
    }
    return path;
}

double path_probability(const Dag& dag, const FlowTable& flow, const LogWeights& weights,
                        const Path& path) {
    double log_w = 0.0;
    for (int e : path.edge_ids) {
        if (weights.is_zero(e))
            return 0.0;
        log_w += weights.log(e);
    }
    double log_total = flow.log_from_source[dag.sink()];
    if (log_total == kNegInf)
        return 0.0;
    return std::exp(log_w - log_total);
}

double edge_marginal(const Dag& dag, const FlowTable& flow, const LogWeights& weights, int edge) {
    if (weights.is_zero(edge))
        return 0.0;
    double log_total = flow.log_from_source[dag.sink()];
    double ls = flow.log_from_source[dag.edge(edge).tail];
    double ld = flow.log_to_sink[dag.edge(edge).head];
    if (log_total == kNegInf || ls == kNegInf || ld == kNegInf)
        return 0.0;
    return std::exp(ls + weights.log(edge) + ld - log_total);
}

std::pair<Path, double> best_fixed_path(const Dag& dag, const std::vector<double>& edge_totals) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(dag.vertex_count(), inf);
    std::vector<int> choice(dag.vertex_count(), -1);
    best[dag.sink()] = 0.0;
    const auto& order = dag.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        if (u == dag.sink())
            continue;
        // out_edges sorted ascending, so the first strict improvement
        // also realizes the lexicographic tie-break
        for (int e : dag.out_edges(u)) {
            double cand = edge_totals[e] + best[dag.edge(e).head];
            if (cand < best[u]) {
                best[u] = cand;
                choice[u] = e;
            }
        }
    }
    Path path;
    int u = dag.source();
    while (u != dag.sink()) {
        path.edge_ids.push_back(choice[u]);
        u = dag.edge(choice[u]).head;
    }
    return {path, best[dag.source()]};
}

std::uint64_t count_paths(const Dag& dag) {
    std::vector<std::uint64_t> dp(dag.vertex_count(), 0);
    dp[dag.source()] = 1;
    for (int u : dag.topo_order())
        if (dp[u] > 0)
            for (int e : dag.out_edges(u))
                dp[dag.edge(e).head] = sat_add(dp[dag.edge(e).head], dp[u]);
    return dp[dag.sink()];
}

double log_path_count(const Dag& dag) {
    LogWeights ones(dag.edge_count(), 0.0);
    FlowTable ft = weight_push(dag, ones);
    return ft.log_from_source[dag.sink()];
}

std::vector<Path> enumerate_paths(const Dag& dag, std::uint64_t cap) {
    std::uint64_t count = count_paths(dag);
    if (count > cap)
        throw TooManyPaths("path count exceeds enumeration cap");
    std::vector<Path> out;
    out.reserve(count);
    std::vector<int> stack;
    // iterative DFS, taking out-edges in ascending id order
    struct Frame {
        int vertex;
        std::size_t next;
    };
    std::vector<Frame> frames{{dag.source(), 0}};
    while (!frames.empty()) {
        Frame& f = frames.back();
        if (f.vertex == dag.sink()) {
            out.push_back(Path{stack});
            frames.pop_back();
            if (!stack.empty())
                stack.pop_back();
            continue;
        }
        const auto& outs = dag.out_edges(f.vertex);
        if (f.next >= outs.size()) {
            frames.pop_back();
            if (!stack.empty())
                stack.pop_back();
            continue;
        }
        int e = outs[f.next++];
        stack.push_back(e);
        frames.push_back({dag.edge(e).head, 0});
    }
    return out;
}

Reachability::Reachability(const Dag& dag) {
    std::size_t words = (static_cast<std::size_t>(dag.vertex_count()) + 63) / 64;
    rows_.assign(dag.vertex_count(), std::vector<std::uint64_t>(words, 0));
    const auto& order = dag.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int u = *it;
        rows_[u][static_cast<std::size_t>(u) >> 6] |= 1ULL << (u & 63);
        for (int e : dag.out_edges(u)) {
            int h = dag.edge(e).head;
            for (std::size_t w = 0; w < words; ++w)
                rows_[u][w] |= rows_[h][w];
        }
    }
}

} // namespace soppp
