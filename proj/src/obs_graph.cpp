#include "soppp/obs_graph.hpp"

#include <bit>
#include <cmath>
#include <cstdint>

namespace soppp {

ObservationGraph::ObservationGraph(int edge_count)
    : revealers_(edge_count), revealed_by_(edge_count) {
    for (int e = 0; e < edge_count; ++e) {
        revealers_[e].push_back(e);
        revealed_by_[e].push_back(e);
    }
}

ObservationGraph ObservationGraph::complete(int edge_count) {
    ObservationGraph obs(edge_count);
    for (int a = 0; a < edge_count; ++a) {
        obs.revealers_[a].clear();
        obs.revealed_by_[a].clear();
        for (int b = 0; b < edge_count; ++b) {
            obs.revealers_[a].push_back(b);
            obs.revealed_by_[a].push_back(b);
        }
    }
    return obs;
}

void ObservationGraph::add_arc(int revealer, int revealed) {
    auto insert_sorted = [](std::vector<int>& v, int x) {
        auto it = std::lower_bound(v.begin(), v.end(), x);
        if (it == v.end() || *it != x)
            v.insert(it, x);
    };
    insert_sorted(revealers_[revealed], revealer);
    insert_sorted(revealed_by_[revealer], revealed);
}

std::vector<int> revealed_set(const ObservationGraph& obs, const Path& path) {
    std::vector<char> seen(obs.edge_count(), 0);
    for (int e : path.edge_ids)
        for (int r : obs.revealed_by(e))
            seen[r] = 1;
    std::vector<int> out;
    for (int e = 0; e < obs.edge_count(); ++e)
        if (seen[e])
            out.push_back(e);
    return out;
}

double compute_q(const Dag& dag, const LogWeights& weights, const ObservationGraph& obs,
                 int edge) {
    FlowTable star = weight_push(dag, weights);
    double log_h_star = star.log_from_source[dag.sink()];
    if (log_h_star == kNegInf)
        return 0.0;

    LogWeights work = weights;
    double q = 0.0;
    for (int ep : obs.revealers(edge)) {
        FlowTable ft = weight_push(dag, work);
        if (!work.is_zero(ep)) {
            double ls = ft.log_from_source[dag.edge(ep).tail];
            double ld = ft.log_to_sink[dag.edge(ep).head];
            if (ls != kNegInf && ld != kNegInf)
                q += std::exp(ls + work.log(ep) + ld - log_h_star);
        }
        work.set_zero(ep);
    }
    return q;
}

double compute_q_bruteforce(const Dag& dag, const LogWeights& weights,
                            const ObservationGraph& obs, int edge, std::uint64_t cap) {
    FlowTable ft = weight_push(dag, weights);
    std::vector<char> reveals_e(obs.edge_count(), 0);
    for (int r : obs.revealers(edge))
        reveals_e[r] = 1;
    double q = 0.0;
    for (const Path& p : enumerate_paths(dag, cap)) {
        bool hit = false;
        for (int e : p.edge_ids)
            if (reveals_e[e]) {
                hit = true;
                break;
            }
        if (hit)
            q += path_probability(dag, ft, weights, p);
    }
    return q;
}

bool is_symmetric(const ObservationGraph& obs) {
    for (int e = 0; e < obs.edge_count(); ++e) {
        const auto& in = obs.revealers(e);
        const auto& out = obs.revealed_by(e);
        if (in != out)
            return false;
    }
    return true;
}

bool satisfies_a0(const Dag& dag, const ObservationGraph& obs) {
    Reachability reach(dag);
    // two distinct edges co-occur on some path iff one's head reaches
    // the other's tail (valid because every edge is on some s-d path)
    auto co_path = [&](int a, int b) {
        return reach.reaches(dag.edge(a).head, dag.edge(b).tail) ||
               reach.reaches(dag.edge(b).head, dag.edge(a).tail);
    };
    for (int e = 0; e < obs.edge_count(); ++e) {
        const auto& rev = obs.revealers(e);
        for (std::size_t i = 0; i < rev.size(); ++i)
            for (std::size_t j = i + 1; j < rev.size(); ++j)
                if (co_path(rev[i], rev[j]))
                    return false;
    }
    return true;
}

namespace {

// exact MIS on <= 64 vertices, branch and bound with degree-1 reductions
struct MisSolver {
    const std::vector<std::uint64_t>& adj;

    int solve(std::uint64_t cand) {
        int taken = 0;
        // reductions: any vertex with 0 or 1 neighbors in cand can be taken
        bool reduced = true;
        while (reduced && cand) {
            reduced = false;
            std::uint64_t scan = cand;
            while (scan) {
                int v = std::countr_zero(scan);
                scan &= scan - 1;
                std::uint64_t nb = adj[v] & cand;
                if (std::popcount(nb) <= 1) {
                    cand &= ~(nb | (1ULL << v));
                    ++taken;
                    reduced = true;
                    break;
                }
            }
        }
        if (!cand)
            return taken;
        // branch on the max-degree vertex
        int best_v = -1, best_deg = -1;
        std::uint64_t scan = cand;
        while (scan) {
            int v = std::countr_zero(scan);
            scan &= scan - 1;
            int deg = std::popcount(adj[v] & cand);
            if (deg > best_deg) {
                best_deg = deg;
                best_v = v;
            }
        }
        int with_v = 1 + solve(cand & ~(adj[best_v] | (1ULL << best_v)));
        int without_v = solve(cand & ~(1ULL << best_v));
        return taken + std::max(with_v, without_v);
    }
};

} // namespace

IndependenceResult independence_number(const ObservationGraph& obs, int exact_cap) {
    int n = obs.edge_count();
    // undirected skeleton adjacency, self-loops dropped
    std::vector<std::vector<int>> nbr(n);
    for (int e = 0; e < n; ++e)
        for (int r : obs.revealers(e))
            if (r != e) {
                nbr[e].push_back(r);
                nbr[r].push_back(e);
            }

    if (n <= exact_cap && n <= 64) {
        std::vector<std::uint64_t> adj(n, 0);
        for (int v = 0; v < n; ++v)
            for (int u : nbr[v])
                adj[v] |= 1ULL << u;
        std::uint64_t all = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
        MisSolver solver{adj};
        return {solver.solve(all), true};
    }

    // greedy clique cover: an upper bound on the independence number
    std::vector<std::vector<char>> mat(n, std::vector<char>(n, 0));
    for (int v = 0; v < n; ++v)
        for (int u : nbr[v])
            mat[v][u] = 1;
    std::vector<char> covered(n, 0);
    int cliques = 0;
    for (int v = 0; v < n; ++v) {
        if (covered[v])
            continue;
        ++cliques;
        covered[v] = 1;
        std::vector<int> clique{v};
        for (int u = v + 1; u < n; ++u) {
            if (covered[u])
                continue;
            bool fits = true;
            for (int c : clique)
                if (!mat[u][c]) {
                    fits = false;
                    break;
                }
            if (fits) {
                covered[u] = 1;
                clique.push_back(u);
            }
        }
    }
    return {cliques, false};
}

ObsDiagnostics diagnose(const Dag& dag, const ObservationGraph& obs, int exact_cap) {
    auto ind = independence_number(obs, exact_cap);
    return {is_symmetric(obs), satisfies_a0(dag, obs), ind.value, ind.exact};
}

double q_sum(const Dag& dag, const LogWeights& weights, const ObservationGraph& obs, double beta) {
    FlowTable ft = weight_push(dag, weights);
    double total = 0.0;
    for (int e = 0; e < dag.edge_count(); ++e) {
        double r = edge_marginal(dag, ft, weights, e);
        double q = compute_q(dag, weights, obs, e);
        total += r / (q + beta);
    }
    return total;
}

double qt_bound(double alpha, int n, int edge_count, double beta, bool symmetric, bool a0) {
    double e = edge_count;
    double m = std::ceil(2.0 * e * e / beta);
    if (symmetric && a0)
        return alpha;
    if (symmetric)
        return n * alpha;
    if (a0)
        return 1.0 + 2.0 * alpha * std::log(1.0 + (m + e) / alpha);
    return 2.0 * n * (1.0 + alpha * std::log(1.0 + (n * m + e) / alpha));
}

} // namespace soppp
