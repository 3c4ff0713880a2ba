#include "soppp/games.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace soppp {

// ---------------------------------------------------------------------
// Colonel Blotto graph
// ---------------------------------------------------------------------

CbGraph build_cb_graph(int k, int n) {
    if (k < 1 || n < 1)
        throw BadAllocation("k and n must be at least 1");

    std::vector<EdgeRef> edges;
    std::vector<int> battlefield;
    std::vector<int> allocation;

    if (n == 1) {
        // single edge: all troops on the only battlefield
        edges.push_back({0, 1});
        battlefield.push_back(1);
        allocation.push_back(k);
        return {Dag::build(2, edges, 0, 1), k, n, std::move(battlefield), std::move(allocation)};
    }

    // s = 0; layer i in 1..n-1 holds vertices (i,j), j = 0..k; then d.
    auto vid = [&](int layer, int j) { return 1 + (layer - 1) * (k + 1) + j; };
    int sink = 1 + (n - 1) * (k + 1);
    int vertex_count = sink + 1;

    for (int j = 0; j <= k; ++j) {
        edges.push_back({0, vid(1, j)});
        battlefield.push_back(1);
        allocation.push_back(j);
    }
    for (int i = 1; i <= n - 2; ++i)
        for (int j1 = 0; j1 <= k; ++j1)
            for (int j2 = j1; j2 <= k; ++j2) {
                edges.push_back({vid(i, j1), vid(i + 1, j2)});
                battlefield.push_back(i + 1);
                allocation.push_back(j2 - j1);
            }
    for (int j = 0; j <= k; ++j) {
        edges.push_back({vid(n - 1, j), sink});
        battlefield.push_back(n);
        allocation.push_back(k - j);
    }

    return {Dag::build(vertex_count, edges, 0, sink), k, n, std::move(battlefield),
            std::move(allocation)};
}

std::vector<int> cb_path_to_allocation(const CbGraph& g, const Path& path) {
    std::vector<int> alloc(g.n, 0);
    for (int e : path.edge_ids)
        alloc[g.battlefield[e] - 1] = g.allocation[e];
    return alloc;
}

Path cb_allocation_to_path(const CbGraph& g, const std::vector<int>& allocation) {
    if (static_cast<int>(allocation.size()) != g.n)
        throw BadAllocation("allocation has wrong length");
    int total = 0;
    for (int a : allocation) {
        if (a < 0)
            throw BadAllocation("negative allocation");
        total += a;
    }
    if (total != g.k)
        throw BadAllocation("allocation does not sum to k");

    Path path;
    int u = g.dag.source();
    for (int i = 0; i < g.n; ++i) {
        int found = -1;
        for (int e : g.dag.out_edges(u))
            if (g.allocation[e] == allocation[i]) {
                found = e;
                break;
            }
        if (found < 0)
            throw BadAllocation("no edge matches allocation");
        path.edge_ids.push_back(found);
        u = g.dag.edge(found).head;
    }
    return path;
}

GameRound cb_round(const CbGraph& g, const std::vector<int>& adversary_allocation,
                   const std::vector<double>& values) {
    if (static_cast<int>(adversary_allocation.size()) != g.n)
        throw BadAllocation("adversary allocation has wrong length");
    int total = 0;
    for (int a : adversary_allocation) {
        if (a < 0 || a > g.k)
            throw BadAllocation("adversary allocation entry out of range");
        total += a;
    }
    if (total != g.k)
        throw BadAllocation("adversary allocation does not sum to k");
    if (static_cast<int>(values.size()) != g.n)
        throw BadAllocation("values vector has wrong length");
    double vsum = 0.0;
    for (double v : values) {
        if (!(v > 0.0))
            throw BadAllocation("battlefield values must be positive");
        vsum += v;
    }
    if (std::abs(vsum - 1.0) > 1e-9)
        throw BadAllocation("battlefield values must sum to 1");

    int edge_count = g.dag.edge_count();
    GameRound round{std::vector<double>(edge_count, 0.0), ObservationGraph(edge_count)};

    std::vector<std::vector<int>> by_battlefield(g.n);
    for (int e = 0; e < edge_count; ++e) {
        int i = g.battlefield[e] - 1;
        by_battlefield[i].push_back(e);
        int a = g.allocation[e];
        int adv = adversary_allocation[i];
        if (a < adv)
            round.losses[e] = values[i];
        else if (a == adv)
            round.losses[e] = values[i] / 2.0;
    }

    // reveals stay within a battlefield: a winner reveals every outcome at
    // its allocation or above, a tie reveals everything, a loser reveals
    // its allocation and below
    for (int i = 0; i < g.n; ++i) {
        int adv = adversary_allocation[i];
        for (int er : by_battlefield[i]) {
            int a = g.allocation[er];
            for (int ec : by_battlefield[i]) {
                int c = g.allocation[ec];
                bool reveals = (a > adv) ? (c >= a) : (a == adv) ? true : (c <= a);
                if (reveals)
                    round.obs.add_arc(er, ec);
            }
        }
    }
    return round;
}

// ---------------------------------------------------------------------
// Hide-and-Seek graph
// ---------------------------------------------------------------------

HsGraph build_hs_graph(int k, int n, int kappa) {
    if (n < 1 || n > k)
        throw IncoherentSearch("need 1 <= n <= k");
    if (kappa < 0 || kappa > k - 1)
        throw IncoherentSearch("need 0 <= kappa <= k-1");

    // s = 0; layer i in 1..n holds (i,j), j = 1..k; then d.
    auto vid = [&](int layer, int j) { return 1 + (layer - 1) * k + (j - 1); };
    int sink = 1 + n * k;
    int vertex_count = sink + 1;

    std::vector<EdgeRef> edges;
    std::vector<int> move, location;
    std::vector<char> aux;

    for (int j = 1; j <= k; ++j) {
        edges.push_back({0, vid(1, j)});
        move.push_back(1);
        location.push_back(j);
        aux.push_back(0);
    }
    for (int i = 1; i <= n - 1; ++i)
        for (int j1 = 1; j1 <= k; ++j1)
            for (int j2 = 1; j2 <= k; ++j2)
                if (std::abs(j1 - j2) <= kappa) {
                    edges.push_back({vid(i, j1), vid(i + 1, j2)});
                    move.push_back(i + 1);
                    location.push_back(j2);
                    aux.push_back(0);
                }
    for (int j = 1; j <= k; ++j) {
        edges.push_back({vid(n, j), sink});
        move.push_back(n + 1);
        location.push_back(j);
        aux.push_back(1);
    }

    return {Dag::build(vertex_count, edges, 0, sink), k, n, kappa,
            std::move(move), std::move(location), std::move(aux)};
}

std::vector<int> hs_path_to_search(const HsGraph& g, const Path& path) {
    std::vector<int> search(g.n, 0);
    for (int e : path.edge_ids)
        if (!g.auxiliary[e])
            search[g.move[e] - 1] = g.location[e];
    return search;
}

Path hs_search_to_path(const HsGraph& g, const std::vector<int>& search) {
    if (static_cast<int>(search.size()) != g.n)
        throw IncoherentSearch("search has wrong length");
    for (int i = 0; i < g.n; ++i) {
        if (search[i] < 1 || search[i] > g.k)
            throw IncoherentSearch("search location out of range");
        if (i + 1 < g.n && std::abs(search[i] - search[i + 1]) > g.kappa)
            throw IncoherentSearch("search violates the coherence constraint");
    }
    Path path;
    int u = g.dag.source();
    for (int i = 0; i < g.n; ++i) {
        int found = -1;
        for (int e : g.dag.out_edges(u))
            if (g.location[e] == search[i]) {
                found = e;
                break;
            }
        if (found < 0)
            throw IncoherentSearch("no edge matches search step");
        path.edge_ids.push_back(found);
        u = g.dag.edge(found).head;
    }
    // auxiliary edge into the sink
    path.edge_ids.push_back(g.dag.out_edges(u)[0]);
    return path;
}

namespace {

void validate_losses(const std::vector<double>& b, int k) {
    if (static_cast<int>(b.size()) != k)
        throw LossOutOfRange("location losses have wrong length");
    for (double v : b)
        if (!(v >= 0.0 && v <= 1.0))
            throw LossOutOfRange("location loss outside [0,1]");
}

} // namespace

GameRound hs_round_c1(const HsGraph& g, const std::vector<double>& location_losses) {
    validate_losses(location_losses, g.k);
    int edge_count = g.dag.edge_count();
    GameRound round{std::vector<double>(edge_count, 0.0), ObservationGraph(edge_count)};

    std::vector<std::vector<int>> by_location(g.k);
    for (int e = 0; e < edge_count; ++e) {
        by_location[g.location[e] - 1].push_back(e);
        if (!g.auxiliary[e])
            round.losses[e] = location_losses[g.location[e] - 1];
    }
    // mutual-reveal clique per location (auxiliary edge included: its
    // location is fixed by its layer-n endpoint)
    for (const auto& clique : by_location)
        for (int a : clique)
            for (int b : clique)
                round.obs.add_arc(a, b);
    return round;
}

GameRound hs_round_c2(const HsGraph& g, const std::vector<int>& search,
                      std::vector<double> initial_losses, const HiderCallback& hider) {
    if (static_cast<int>(search.size()) != g.n)
        throw IncoherentSearch("search has wrong length");
    for (int i = 0; i < g.n; ++i) {
        if (search[i] < 1 || search[i] > g.k)
            throw IncoherentSearch("search location out of range");
        if (i + 1 < g.n && std::abs(search[i] - search[i + 1]) > g.kappa)
            throw IncoherentSearch("search violates the coherence constraint");
    }
    validate_losses(initial_losses, g.k);

    // a location's loss is frozen at its first search; unsearched
    // locations take the hider's final value
    std::vector<double> frozen(g.k, -1.0);
    std::vector<int> searched;
    std::vector<double> b = std::move(initial_losses);
    for (int i = 0; i < g.n; ++i) {
        int j = search[i];
        if (frozen[j - 1] < 0.0)
            frozen[j - 1] = b[j - 1];
        searched.push_back(j);
        if (hider && i + 1 < g.n) {
            hider(i + 1, searched, b);
            validate_losses(b, g.k);
            for (int jj = 0; jj < g.k; ++jj)
                if (frozen[jj] >= 0.0)
                    b[jj] = frozen[jj];  // searched locations are locked
        }
    }
    for (int jj = 0; jj < g.k; ++jj)
        if (frozen[jj] < 0.0)
            frozen[jj] = b[jj];

    int edge_count = g.dag.edge_count();
    GameRound round{std::vector<double>(edge_count, 0.0), ObservationGraph(edge_count)};
    std::vector<std::vector<int>> by_location(g.k);
    for (int e = 0; e < edge_count; ++e) {
        by_location[g.location[e] - 1].push_back(e);
        if (!g.auxiliary[e])
            round.losses[e] = frozen[g.location[e] - 1];
    }
    // one-way reveals: an earlier move at a location reveals all later
    // moves at it (the auxiliary edge acts as the last move)
    for (const auto& group : by_location)
        for (int a : group)
            for (int c : group)
                if (g.move[a] <= g.move[c])
                    round.obs.add_arc(a, c);
    return round;
}

int cb_alpha_bound(int k, int n) { return n * (k + 1); }
int hs_alpha_bound(int k) { return k; }

// ---------------------------------------------------------------------
// Adversaries
// ---------------------------------------------------------------------

std::vector<int> uniform_allocation(int k, int n, Rng& rng) {
    // stars and bars: choose n-1 divider slots among k+n-1 uniformly
    int slots = k + n - 1;
    std::vector<int> idx(slots);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < n - 1; ++i) {
        int j = i + static_cast<int>(rng.next_below(slots - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<int> dividers(idx.begin(), idx.begin() + (n - 1));
    std::sort(dividers.begin(), dividers.end());
    std::vector<int> alloc(n);
    int prev = -1;
    for (int i = 0; i < n - 1; ++i) {
        alloc[i] = dividers[i] - prev - 1;
        prev = dividers[i];
    }
    alloc[n - 1] = slots - 1 - prev;
    return alloc;
}

namespace {

class FixedCb final : public CbAdversary {
public:
    explicit FixedCb(std::vector<int> alloc) : alloc_(std::move(alloc)) {}
    std::vector<int> act(const std::vector<std::vector<int>>&, long,
                         const std::vector<double>&, Rng&) override {
        return alloc_;
    }

private:
    std::vector<int> alloc_;
};

class UniformCb final : public CbAdversary {
public:
    UniformCb(int k, int n) : k_(k), n_(n) {}
    std::vector<int> act(const std::vector<std::vector<int>>&, long,
                         const std::vector<double>&, Rng& rng) override {
        return uniform_allocation(k_, n_, rng);
    }

private:
    int k_, n_;
};

class CyclicCb final : public CbAdversary {
public:
    CyclicCb(int k, int n) : k_(k), n_(n) {}
    std::vector<int> act(const std::vector<std::vector<int>>&, long stage,
                         const std::vector<double>&, Rng&) override {
        std::vector<int> alloc(n_, 0);
        alloc[static_cast<int>((stage - 1) % n_)] = k_;
        return alloc;
    }

private:
    int k_, n_;
};

// Best response to the learner's empirical per-battlefield frequencies.
class BestResponseCb final : public CbAdversary {
public:
    BestResponseCb(int k, int n)
        : k_(k), n_(n), counts_(n, std::vector<long>(k + 1, 0)) {}

    std::vector<int> act(const std::vector<std::vector<int>>& history, long,
                         const std::vector<double>& values, Rng& rng) override {
        while (seen_ < history.size()) {
            for (int i = 0; i < n_; ++i)
                ++counts_[i][history[seen_][i]];
            ++seen_;
        }
        if (seen_ == 0)
            return uniform_allocation(k_, n_, rng);

        // expected learner loss on battlefield i when we play a troops
        auto value_of = [&](int i, int a) {
            double v = 0.0;
            for (int z = 0; z <= k_; ++z) {
                if (counts_[i][z] == 0)
                    continue;
                double f = static_cast<double>(counts_[i][z]) / static_cast<double>(seen_);
                if (z < a)
                    v += f * values[i];
                else if (z == a)
                    v += f * values[i] / 2.0;
            }
            return v;
        };
        // knapsack over battlefields
        const double neg = -1.0;
        std::vector<std::vector<double>> dp(n_ + 1, std::vector<double>(k_ + 1, neg));
        std::vector<std::vector<int>> take(n_ + 1, std::vector<int>(k_ + 1, 0));
        dp[0][0] = 0.0;
        for (int i = 0; i < n_; ++i)
            for (int used = 0; used <= k_; ++used) {
                if (dp[i][used] < 0.0)
                    continue;
                for (int a = 0; used + a <= k_; ++a) {
                    double cand = dp[i][used] + value_of(i, a);
                    if (cand > dp[i + 1][used + a]) {
                        dp[i + 1][used + a] = cand;
                        take[i + 1][used + a] = a;
                    }
                }
            }
        std::vector<int> alloc(n_);
        int used = k_;
        for (int i = n_; i >= 1; --i) {
            alloc[i - 1] = take[i][used];
            used -= alloc[i - 1];
        }
        return alloc;
    }

private:
    int k_, n_;
    std::vector<std::vector<long>> counts_;
    std::size_t seen_ = 0;
};

class FixedHs final : public HsAdversary {
public:
    explicit FixedHs(std::vector<double> losses) : losses_(std::move(losses)) {}
    std::vector<double> losses(const std::vector<std::vector<int>>&, long, Rng&) override {
        return losses_;
    }

private:
    std::vector<double> losses_;
};

class RandomHs final : public HsAdversary {
public:
    explicit RandomHs(int k) : k_(k) {}
    std::vector<double> losses(const std::vector<std::vector<int>>&, long, Rng& rng) override {
        std::vector<double> b(k_);
        double total = 0.0;
        for (double& v : b) {
            v = rng.uniform() + 1e-12;
            total += v;
        }
        for (double& v : b)
            v /= total;
        return b;
    }

private:
    int k_;
};

// Raises losses on historically popular locations, and keeps pushing
// unsearched popular locations up within a stage (a C2 hider).
class AdaptiveHs final : public HsAdversary {
public:
    explicit AdaptiveHs(int k) : k_(k), popularity_(k, 0) {}

    std::vector<double> losses(const std::vector<std::vector<int>>& history, long,
                               Rng& rng) override {
        while (seen_ < history.size()) {
            for (int j : history[seen_])
                ++popularity_[j - 1];
            ++seen_;
        }
        long max_pop = 1;
        for (long c : popularity_)
            max_pop = std::max(max_pop, c);
        std::vector<double> b(k_);
        for (int j = 0; j < k_; ++j)
            b[j] = 0.25 + 0.5 * static_cast<double>(popularity_[j]) /
                              static_cast<double>(max_pop) +
                   0.05 * rng.uniform();
        return b;
    }

    void on_move(int, const std::vector<int>& searched_so_far,
                 std::vector<double>& losses) override {
        std::vector<char> hit(k_, 0);
        for (int j : searched_so_far)
            hit[j - 1] = 1;
        // most popular unsearched location gets bumped
        int best = -1;
        long best_pop = -1;
        for (int j = 0; j < k_; ++j)
            if (!hit[j] && popularity_[j] > best_pop) {
                best_pop = popularity_[j];
                best = j;
            }
        if (best >= 0)
            losses[best] = std::min(1.0, losses[best] + 0.25);
    }

private:
    int k_;
    std::vector<long> popularity_;
    std::size_t seen_ = 0;
};

} // namespace

std::unique_ptr<CbAdversary> make_cb_adversary(const std::string& id, int k, int n,
                                               std::vector<int> fixed_allocation) {
    if (id == "fixed") {
        if (fixed_allocation.empty()) {
            fixed_allocation.assign(n, 0);
            fixed_allocation[0] = k;  // default: everything on battlefield 1
        }
        return std::make_unique<FixedCb>(std::move(fixed_allocation));
    }
    if (id == "uniform")
        return std::make_unique<UniformCb>(k, n);
    if (id == "cyclic")
        return std::make_unique<CyclicCb>(k, n);
    if (id == "best-response")
        return std::make_unique<BestResponseCb>(k, n);
    throw Error("unknown CB adversary: " + id);
}

std::unique_ptr<HsAdversary> make_hs_adversary(const std::string& id, int k,
                                               std::vector<double> fixed_losses) {
    if (id == "fixed") {
        if (fixed_losses.empty()) {
            fixed_losses.assign(k, 0.0);
            for (int j = 0; j < k; ++j)
                fixed_losses[j] = static_cast<double>(j + 1) / static_cast<double>(k + 1);
        }
        return std::make_unique<FixedHs>(std::move(fixed_losses));
    }
    if (id == "random")
        return std::make_unique<RandomHs>(k);
    if (id == "adaptive")
        return std::make_unique<AdaptiveHs>(k);
    throw Error("unknown HS adversary: " + id);
}

} // namespace soppp
