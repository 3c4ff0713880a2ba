#pragma once

// Shared fixtures and independent brute-force oracles for the test
// suites. The oracles work in the plain linear domain over explicitly
// enumerated paths, deliberately avoiding the library's log-domain DP.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "soppp/dag.hpp"
#include "soppp/obs_graph.hpp"
#include "soppp/rng.hpp"

namespace testsup {

using soppp::Dag;
using soppp::EdgeRef;
using soppp::LogWeights;
using soppp::ObservationGraph;
using soppp::Path;

// s=0, m=1, d=2; e0,e1: s->m; e2,e3: m->d
inline Dag diamond() {
    return Dag::build(3, {{0, 1}, {0, 1}, {1, 2}, {1, 2}}, 0, 2);
}

inline LogWeights from_linear(const std::vector<double>& w) {
    LogWeights lw(static_cast<int>(w.size()));
    for (std::size_t e = 0; e < w.size(); ++e) {
        if (w[e] == 0.0)
            lw.set_zero(static_cast<int>(e));
        else
            lw.set_log(static_cast<int>(e), std::log(w[e]));
    }
    return lw;
}

inline double path_weight(const LogWeights& lw, const Path& p) {
    double w = 1.0;
    for (int e : p.edge_ids) {
        if (lw.is_zero(e))
            return 0.0;
        w *= std::exp(lw.log(e));
    }
    return w;
}

inline double brute_total_weight(const Dag& dag, const LogWeights& lw) {
    double total = 0.0;
    for (const Path& p : soppp::enumerate_paths(dag))
        total += path_weight(lw, p);
    return total;
}

inline double brute_path_prob(const Dag& dag, const LogWeights& lw, const Path& p) {
    return path_weight(lw, p) / brute_total_weight(dag, lw);
}

inline double brute_edge_marginal(const Dag& dag, const LogWeights& lw, int edge) {
    double hit = 0.0, total = 0.0;
    for (const Path& p : soppp::enumerate_paths(dag)) {
        double w = path_weight(lw, p);
        total += w;
        if (p.contains(edge))
            hit += w;
    }
    return hit / total;
}

// q(e) over enumerated paths: x-mass of paths revealing e
inline double brute_q(const Dag& dag, const LogWeights& lw, const ObservationGraph& obs,
                      int edge) {
    const auto& revealers = obs.revealers(edge);
    double hit = 0.0, total = 0.0;
    for (const Path& p : soppp::enumerate_paths(dag)) {
        double w = path_weight(lw, p);
        total += w;
        for (int r : revealers) {
            if (p.contains(r)) {
                hit += w;
                break;
            }
        }
    }
    return hit / total;
}

// random layered DAG: every vertex on some s-d path by construction
inline Dag random_layered_dag(soppp::Rng& rng, int max_layers = 4, int max_width = 3) {
    int layers = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_layers)));
    std::vector<int> width(layers);
    for (int& w : width)
        w = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_width)));
    std::vector<std::vector<int>> ids(layers);
    int next = 1;
    for (int l = 0; l < layers; ++l)
        for (int j = 0; j < width[l]; ++j)
            ids[l].push_back(next++);
    int sink = next++;
    std::vector<EdgeRef> edges;
    auto connect = [&](const std::vector<int>& from, const std::vector<int>& to) {
        std::vector<char> covered(to.size(), 0);
        for (int u : from) {
            int deg = 1 + static_cast<int>(rng.next_below(to.size()));
            std::vector<int> picks(to.begin(), to.end());
            for (int d = 0; d < deg; ++d) {
                std::size_t i = d + rng.next_below(picks.size() - d);
                std::swap(picks[d], picks[i]);
                edges.push_back({u, picks[d]});
            }
            for (int d = 0; d < deg; ++d)
                for (std::size_t j = 0; j < to.size(); ++j)
                    if (to[j] == picks[d])
                        covered[j] = 1;
        }
        // make sure every target has an in-edge
        for (std::size_t j = 0; j < to.size(); ++j)
            if (!covered[j])
                edges.push_back({from[rng.next_below(from.size())], to[j]});
    };
    std::vector<int> src{0};
    connect(src, ids[0]);
    for (int l = 0; l + 1 < layers; ++l)
        connect(ids[l], ids[l + 1]);
    connect(ids[layers - 1], {sink});
    return Dag::build(next, std::move(edges), 0, sink);
}

inline LogWeights random_weights(soppp::Rng& rng, int edge_count, double zero_prob = 0.0) {
    LogWeights lw(edge_count);
    for (int e = 0; e < edge_count; ++e) {
        if (zero_prob > 0.0 && rng.uniform() < zero_prob)
            lw.set_zero(e);
        else
            lw.set_log(e, std::log(0.05 + 4.0 * rng.uniform()));
    }
    return lw;
}

inline ObservationGraph random_obs(soppp::Rng& rng, int edge_count, double arc_prob) {
    ObservationGraph obs(edge_count);
    for (int a = 0; a < edge_count; ++a)
        for (int b = 0; b < edge_count; ++b)
            if (a != b && rng.uniform() < arc_prob)
                obs.add_arc(a, b);
    return obs;
}

inline ObservationGraph symmetrize(const ObservationGraph& obs) {
    ObservationGraph out(obs.edge_count());
    for (int e = 0; e < obs.edge_count(); ++e)
        for (int r : obs.revealers(e)) {
            out.add_arc(r, e);
            out.add_arc(e, r);
        }
    return out;
}

// exact MIS of the undirected skeleton by subset enumeration (E <= 24)
inline int brute_independence(const ObservationGraph& obs) {
    int e = obs.edge_count();
    std::vector<std::uint32_t> adj(e, 0);
    for (int b = 0; b < e; ++b)
        for (int a : obs.revealers(b))
            if (a != b) {
                adj[a] |= 1u << b;
                adj[b] |= 1u << a;
            }
    int best = 0;
    for (std::uint32_t s = 0; s < (1u << e); ++s) {
        bool ok = true;
        for (int v = 0; v < e && ok; ++v)
            if ((s >> v) & 1)
                if (adj[v] & s)
                    ok = false;
        if (ok)
            best = std::max(best, std::popcount(s));
    }
    return best;
}

// (A0) by path enumeration: look for an edge with two distinct
// revealers sharing a path
inline bool brute_a0(const Dag& dag, const ObservationGraph& obs) {
    auto paths = soppp::enumerate_paths(dag);
    for (int e = 0; e < obs.edge_count(); ++e) {
        const auto& rev = obs.revealers(e);
        for (std::size_t i = 0; i < rev.size(); ++i)
            for (std::size_t j = i + 1; j < rev.size(); ++j)
                for (const Path& p : paths)
                    if (p.contains(rev[i]) && p.contains(rev[j]))
                        return false;
    }
    return true;
}

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs)
        s += x;
    return s / static_cast<double>(xs.size());
}

inline double std_err(const std::vector<double>& xs) {
    double m = mean(xs), acc = 0.0;
    for (double x : xs)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / (static_cast<double>(xs.size()) - 1.0) /
                     static_cast<double>(xs.size()));
}

} // namespace testsup
