#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soppp/exp3oe.hpp"
#include "soppp/games.hpp"

namespace soppp {

struct ExperimentConfig {
    enum class Game { cb, hs };
    enum class ObsMode { game, selfloops, complete };

    Game game = Game::cb;
    int k = 0;
    int n = 0;
    int kappa = 0;          // hs only
    bool c2 = false;        // hs condition
    long horizon = 0;       // T
    int repetitions = 20;
    std::uint64_t seed = 0;
    bool auto_tuning = true;
    double eta = 0.0;       // explicit tuning only
    double beta = 0.0;
    std::string adversary;  // empty: per-game default
    std::string values_mode = "fixed";  // cb battlefield values: fixed | random
    bool diagnostics = false;           // record Q_t per stage (O(E^3) per stage)
    ObsMode obs_mode = ObsMode::game;
    std::string out;
};

// Flat key=value tokens, '#' comments, unknown keys rejected.
ExperimentConfig parse_config(const std::string& text);

struct RegretSeries {
    // one entry per stage t = 1..T
    std::vector<double> mean_cum_loss;
    std::vector<double> best_cum_loss;
    std::vector<double> regret;
    std::vector<double> mean_qt;  // empty when diagnostics off
    std::vector<double> terminal_regrets;  // per repetition
};

RegretSeries run_experiment(const ExperimentConfig& config);

struct BoundReport {
    double mean_regret;
    double regret_std_err;
    double rhs_mean;
    bool passed;  // mean regret <= rhs + 3 standard errors
    LearnerParams params;
};

// Requires diagnostics (forced on internally).
BoundReport verify_bound(const ExperimentConfig& config);

struct GraphReport {
    int vertex_count;
    int edge_count;
    std::uint64_t path_count;  // saturated at uint64 max
    bool path_count_exact;
    double log_path_count;
    int max_path_length;
    int alpha_bound;
    bool symmetric;       // of one sampled round's observation graph
    bool satisfies_a0;
    int alpha_exact;      // -1 when not computed exactly
};

GraphReport graph_info(const ExperimentConfig& config);

std::string to_csv(const RegretSeries& series);
void write_csv(const RegretSeries& series, const std::string& path);
RegretSeries parse_csv(const std::string& text);  // round-trip support

// The tuning case the harness derives for a configuration (structure
// class and alpha from the game, n from the built graph).
TuningCase derive_tuning_case(const ExperimentConfig& config);

} // namespace soppp
