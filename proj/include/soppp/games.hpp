#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "soppp/dag.hpp"
#include "soppp/obs_graph.hpp"

namespace soppp {

// ---------------------------------------------------------------------
// Colonel Blotto: k troops over n battlefields; a path through the
// layered graph is an allocation vector.
// ---------------------------------------------------------------------

struct CbGraph {
    Dag dag;
    int k;
    int n;
    std::vector<int> battlefield;  // per edge, 1..n
    std::vector<int> allocation;   // per edge, 0..k
};

CbGraph build_cb_graph(int k, int n);

std::vector<int> cb_path_to_allocation(const CbGraph& g, const Path& path);
Path cb_allocation_to_path(const CbGraph& g, const std::vector<int>& allocation);

struct GameRound {
    std::vector<double> losses;  // full loss vector over edges
    ObservationGraph obs;
};

// Full stage outcome: edge losses from the win/tie/lose rule and the
// outcome-dependent observation graph (per-battlefield reveals only).
GameRound cb_round(const CbGraph& g, const std::vector<int>& adversary_allocation,
                   const std::vector<double>& values);

// ---------------------------------------------------------------------
// Hide-and-Seek: an n-search over k locations under the kappa-coherence
// constraint; auxiliary edges into the sink always carry zero loss.
// ---------------------------------------------------------------------

struct HsGraph {
    Dag dag;
    int k;
    int n;
    int kappa;
    std::vector<int> move;       // per edge, 1..n (auxiliary: n+1)
    std::vector<int> location;   // per edge, 1..k
    std::vector<char> auxiliary; // per edge
};

HsGraph build_hs_graph(int k, int n, int kappa);

std::vector<int> hs_path_to_search(const HsGraph& g, const Path& path);
Path hs_search_to_path(const HsGraph& g, const std::vector<int>& search);

// Fixed per-stage location losses; observation graph has a mutual-reveal
// clique per location.
GameRound hs_round_c1(const HsGraph& g, const std::vector<double>& location_losses);

// The hider may rewrite losses of unsearched locations after each move;
// a location's loss is frozen at its first search. Reveals are one-way:
// an earlier move at a location reveals later moves at it.
using HiderCallback =
    std::function<void(int completed_move, const std::vector<int>& searched_so_far,
                       std::vector<double>& losses)>;

GameRound hs_round_c2(const HsGraph& g, const std::vector<int>& search,
                      std::vector<double> initial_losses, const HiderCallback& hider);

// Closed-form independence-number bounds
int cb_alpha_bound(int k, int n);  // n*(k+1)
int hs_alpha_bound(int k);         // k

// ---------------------------------------------------------------------
// Adversary strategies
// ---------------------------------------------------------------------

// CB adversary: produces an allocation from the learner's play history.
class CbAdversary {
public:
    virtual ~CbAdversary() = default;
    virtual std::vector<int> act(const std::vector<std::vector<int>>& learner_history,
                                 long stage, const std::vector<double>& values, Rng& rng) = 0;
};

// ids: "fixed" (allocation given), "uniform", "cyclic", "best-response"
std::unique_ptr<CbAdversary> make_cb_adversary(const std::string& id, int k, int n,
                                               std::vector<int> fixed_allocation = {});

// uniform draw from the simplex of integer allocations summing to k
std::vector<int> uniform_allocation(int k, int n, Rng& rng);

// HS adversary: produces per-location losses; for C2 it also supplies
// the within-stage callback.
class HsAdversary {
public:
    virtual ~HsAdversary() = default;
    virtual std::vector<double> losses(const std::vector<std::vector<int>>& learner_history,
                                       long stage, Rng& rng) = 0;
    // C2 within-stage adaptation; default: no change
    virtual void on_move(int completed_move, const std::vector<int>& searched_so_far,
                         std::vector<double>& losses) {
        (void)completed_move;
        (void)searched_so_far;
        (void)losses;
    }
};

// ids: "fixed" (losses given), "random", "adaptive"
std::unique_ptr<HsAdversary> make_hs_adversary(const std::string& id, int k,
                                               std::vector<double> fixed_losses = {});

} // namespace soppp
