#include "soppp/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace soppp {

// ---------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------

namespace {

long parse_long(const std::string& value, int line, const std::string& key) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != value.size() || value.empty())
        throw ParseError("line " + std::to_string(line) + ": bad integer for " + key + ": '" +
                         value + "'");
    return v;
}

double parse_double(const std::string& value, int line, const std::string& key) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != value.size() || value.empty())
        throw ParseError("line " + std::to_string(line) + ": bad number for " + key + ": '" +
                         value + "'");
    return v;
}

bool parse_onoff(const std::string& value, int line, const std::string& key) {
    if (value == "on")
        return true;
    if (value == "off")
        return false;
    throw ParseError("line " + std::to_string(line) + ": " + key + " must be on or off");
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool have_game = false, have_k = false, have_n = false, have_t = false, have_seed = false;
    bool have_kappa = false, have_eta = false, have_beta = false, explicit_tuning = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::istringstream tokens(line);
        std::string tok;
        while (tokens >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": expected key=value, got '" + tok + "'");
            std::string key = tok.substr(0, eq);
            std::string value = tok.substr(eq + 1);

            if (key == "game") {
                if (value == "cb")
                    cfg.game = ExperimentConfig::Game::cb;
                else if (value == "hs")
                    cfg.game = ExperimentConfig::Game::hs;
                else
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": game must be cb or hs");
                have_game = true;
            } else if (key == "k") {
                cfg.k = static_cast<int>(parse_long(value, line_no, key));
                have_k = true;
            } else if (key == "n") {
                cfg.n = static_cast<int>(parse_long(value, line_no, key));
                have_n = true;
            } else if (key == "kappa") {
                cfg.kappa = static_cast<int>(parse_long(value, line_no, key));
                have_kappa = true;
            } else if (key == "condition") {
                if (value == "c1")
                    cfg.c2 = false;
                else if (value == "c2")
                    cfg.c2 = true;
                else
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": condition must be c1 or c2");
            } else if (key == "T") {
                cfg.horizon = parse_long(value, line_no, key);
                have_t = true;
            } else if (key == "reps") {
                cfg.repetitions = static_cast<int>(parse_long(value, line_no, key));
            } else if (key == "seed") {
                cfg.seed = static_cast<std::uint64_t>(parse_long(value, line_no, key));
                have_seed = true;
            } else if (key == "tuning") {
                if (value == "auto")
                    cfg.auto_tuning = true;
                else if (value == "explicit") {
                    cfg.auto_tuning = false;
                    explicit_tuning = true;
                } else
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": tuning must be auto or explicit");
            } else if (key == "eta") {
                cfg.eta = parse_double(value, line_no, key);
                have_eta = true;
            } else if (key == "beta") {
                cfg.beta = parse_double(value, line_no, key);
                have_beta = true;
            } else if (key == "adversary") {
                cfg.adversary = value;
            } else if (key == "values") {
                if (value != "fixed" && value != "random")
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": values must be fixed or random");
                cfg.values_mode = value;
            } else if (key == "diagnostics") {
                cfg.diagnostics = parse_onoff(value, line_no, key);
            } else if (key == "obs") {
                if (value == "game")
                    cfg.obs_mode = ExperimentConfig::ObsMode::game;
                else if (value == "selfloops")
                    cfg.obs_mode = ExperimentConfig::ObsMode::selfloops;
                else if (value == "complete")
                    cfg.obs_mode = ExperimentConfig::ObsMode::complete;
                else
                    throw ParseError("line " + std::to_string(line_no) +
                                     ": obs must be game, selfloops or complete");
            } else if (key == "out") {
                cfg.out = value;
            } else {
                throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key +
                                 "'");
            }
        }
    }

    if (!have_game)
        throw MissingKey("missing key: game");
    if (!have_k)
        throw MissingKey("missing key: k");
    if (!have_n)
        throw MissingKey("missing key: n");
    if (!have_t)
        throw MissingKey("missing key: T");
    if (!have_seed)
        throw MissingKey("missing key: seed");
    if (cfg.game == ExperimentConfig::Game::hs && !have_kappa)
        throw MissingKey("missing key: kappa (required for hs)");
    if ((explicit_tuning || have_eta || have_beta) && !(have_eta && have_beta)) {
        if (!have_eta)
            throw MissingKey("missing key: eta (explicit tuning)");
        throw MissingKey("missing key: beta (explicit tuning)");
    }
    if (have_eta && have_beta)
        cfg.auto_tuning = false;
    if (!cfg.auto_tuning && (!(cfg.eta > 0.0) || !(cfg.beta > 0.0)))
        throw ParseError("explicit eta and beta must be positive");
    if (cfg.horizon < 1)
        throw ParseError("T must be at least 1");
    if (cfg.repetitions < 1)
        throw ParseError("reps must be at least 1");
    if (cfg.adversary.empty())
        cfg.adversary = cfg.game == ExperimentConfig::Game::cb ? "uniform" : "random";
    return cfg;
}

// ---------------------------------------------------------------------
// Experiment orchestration
// ---------------------------------------------------------------------

namespace {

struct GameBundle {
    std::unique_ptr<CbGraph> cb;
    std::unique_ptr<HsGraph> hs;

    const Dag& dag() const { return cb ? cb->dag : hs->dag; }
};

GameBundle build_bundle(const ExperimentConfig& cfg) {
    GameBundle b;
    if (cfg.game == ExperimentConfig::Game::cb)
        b.cb = std::make_unique<CbGraph>(build_cb_graph(cfg.k, cfg.n));
    else
        b.hs = std::make_unique<HsGraph>(build_hs_graph(cfg.k, cfg.n, cfg.kappa));
    return b;
}

struct RepResult {
    std::vector<double> cum_loss;  // per stage
    std::vector<double> best_cum;
    std::vector<double> qt;        // per stage, when diagnostics on
    double terminal_regret;
};

RepResult run_rep(const ExperimentConfig& cfg, const GameBundle& bundle,
                  const LearnerParams& params, int rep) {
    const Dag& dag = bundle.dag();
    Rng rng = Rng(cfg.seed).split(static_cast<std::uint64_t>(rep));
    Learner learner(dag, params);

    std::unique_ptr<CbAdversary> cb_adv;
    std::unique_ptr<HsAdversary> hs_adv;
    if (bundle.cb)
        cb_adv = make_cb_adversary(cfg.adversary, cfg.k, cfg.n);
    else
        hs_adv = make_hs_adversary(cfg.adversary, cfg.k);

    RepResult res;
    res.cum_loss.resize(cfg.horizon);
    res.best_cum.resize(cfg.horizon);
    if (cfg.diagnostics)
        res.qt.resize(cfg.horizon);

    std::vector<std::vector<int>> history;
    std::vector<double> cum_edge_losses(dag.edge_count(), 0.0);
    double running_loss = 0.0;

    for (long t = 1; t <= cfg.horizon; ++t) {
        std::vector<double> values;
        if (bundle.cb) {
            if (cfg.values_mode == "fixed") {
                values.assign(cfg.n, 1.0 / cfg.n);
            } else {
                values.resize(cfg.n);
                double total = 0.0;
                for (double& v : values) {
                    v = rng.uniform() + 1e-12;
                    total += v;
                }
                for (double& v : values)
                    v /= total;
            }
        }

        auto [path, flow] = learner.draw(rng);

        GameRound round = [&] {
            if (bundle.cb) {
                std::vector<int> adv = cb_adv->act(history, t, values, rng);
                return cb_round(*bundle.cb, adv, values);
            }
            std::vector<double> b = hs_adv->losses(history, t, rng);
            if (cfg.c2) {
                std::vector<int> search = hs_path_to_search(*bundle.hs, path);
                HsAdversary* adv = hs_adv.get();
                return hs_round_c2(*bundle.hs, search, std::move(b),
                                   [adv](int move, const std::vector<int>& searched,
                                         std::vector<double>& losses) {
                                       adv->on_move(move, searched, losses);
                                   });
            }
            return hs_round_c1(*bundle.hs, b);
        }();

        // ablation hooks: replace the game's observation graph
        if (cfg.obs_mode == ExperimentConfig::ObsMode::selfloops)
            round.obs = ObservationGraph(dag.edge_count());
        else if (cfg.obs_mode == ExperimentConfig::ObsMode::complete)
            round.obs = ObservationGraph::complete(dag.edge_count());

        Feedback fb;
        fb.obs = &round.obs;
        fb.revealed = revealed_set(round.obs, path);
        fb.losses = round.losses;
        RoundRecord rec = learner.update(path, fb, cfg.diagnostics);

        running_loss += rec.realized_loss;
        for (int e = 0; e < dag.edge_count(); ++e)
            cum_edge_losses[e] += round.losses[e];
        res.cum_loss[t - 1] = running_loss;
        res.best_cum[t - 1] = best_fixed_path(dag, cum_edge_losses).second;
        if (cfg.diagnostics)
            res.qt[t - 1] = *rec.q_sum_value;

        history.push_back(bundle.cb ? cb_path_to_allocation(*bundle.cb, path)
                                    : hs_path_to_search(*bundle.hs, path));
    }
    res.terminal_regret = res.cum_loss.back() - res.best_cum.back();
    return res;
}

std::vector<RepResult> run_all_reps(const ExperimentConfig& cfg, const GameBundle& bundle,
                                    const LearnerParams& params) {
    int reps = cfg.repetitions;
    std::vector<RepResult> results(reps);
    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>(reps)));
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= reps)
                return;
            try {
                results[i] = run_rep(cfg, bundle, params, i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
    return results;
}

} // namespace

TuningCase derive_tuning_case(const ExperimentConfig& cfg) {
    GameBundle bundle = build_bundle(cfg);
    const Dag& dag = bundle.dag();
    TuningCase tc;
    tc.n = dag.max_path_length();
    tc.edge_count = dag.edge_count();
    tc.log_p = log_path_count(dag);
    switch (cfg.obs_mode) {
    case ExperimentConfig::ObsMode::selfloops:
        tc.symmetric = true;
        tc.a0 = true;
        tc.alpha = dag.edge_count();
        break;
    case ExperimentConfig::ObsMode::complete:
        tc.symmetric = true;
        tc.a0 = true;
        tc.alpha = 1;
        break;
    case ExperimentConfig::ObsMode::game:
        if (cfg.game == ExperimentConfig::Game::cb) {
            tc.symmetric = false;
            tc.a0 = true;
            tc.alpha = cb_alpha_bound(cfg.k, cfg.n);
        } else {
            tc.symmetric = !cfg.c2;
            tc.a0 = false;
            tc.alpha = hs_alpha_bound(cfg.k);
        }
        break;
    }
    return tc;
}

namespace {

LearnerParams resolve_params(const ExperimentConfig& cfg) {
    if (cfg.auto_tuning)
        return tune_parameters(derive_tuning_case(cfg), cfg.horizon);
    return LearnerParams{cfg.eta, cfg.beta, cfg.horizon};
}

RegretSeries aggregate(const ExperimentConfig& cfg, const std::vector<RepResult>& reps) {
    RegretSeries series;
    long T = cfg.horizon;
    series.mean_cum_loss.assign(T, 0.0);
    series.best_cum_loss.assign(T, 0.0);
    series.regret.assign(T, 0.0);
    if (cfg.diagnostics)
        series.mean_qt.assign(T, 0.0);
    for (const RepResult& r : reps) {
        for (long t = 0; t < T; ++t) {
            series.mean_cum_loss[t] += r.cum_loss[t];
            series.best_cum_loss[t] += r.best_cum[t];
            if (cfg.diagnostics)
                series.mean_qt[t] += r.qt[t];
        }
        series.terminal_regrets.push_back(r.terminal_regret);
    }
    double inv = 1.0 / static_cast<double>(reps.size());
    for (long t = 0; t < T; ++t) {
        series.mean_cum_loss[t] *= inv;
        series.best_cum_loss[t] *= inv;
        series.regret[t] = series.mean_cum_loss[t] - series.best_cum_loss[t];
        if (cfg.diagnostics)
            series.mean_qt[t] *= inv;
    }
    return series;
}

} // namespace

RegretSeries run_experiment(const ExperimentConfig& cfg) {
    GameBundle bundle = build_bundle(cfg);
    LearnerParams params = resolve_params(cfg);
    return aggregate(cfg, run_all_reps(cfg, bundle, params));
}

BoundReport verify_bound(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;
    cfg.diagnostics = true;
    GameBundle bundle = build_bundle(cfg);
    LearnerParams params = resolve_params(cfg);
    std::vector<RepResult> reps = run_all_reps(cfg, bundle, params);

    const Dag& dag = bundle.dag();
    double log_p = log_path_count(dag);
    int n = dag.max_path_length();

    double regret_sum = 0.0, regret_sq = 0.0, rhs_sum = 0.0;
    for (const RepResult& r : reps) {
        regret_sum += r.terminal_regret;
        regret_sq += r.terminal_regret * r.terminal_regret;
        rhs_sum += regret_bound_rhs(params, n, log_p, r.qt);
    }
    double m = static_cast<double>(reps.size());
    BoundReport report;
    report.mean_regret = regret_sum / m;
    double var = m > 1 ? (regret_sq - m * report.mean_regret * report.mean_regret) / (m - 1)
                       : 0.0;
    report.regret_std_err = std::sqrt(std::max(0.0, var) / m);
    report.rhs_mean = rhs_sum / m;
    report.passed = report.mean_regret <= report.rhs_mean + 3.0 * report.regret_std_err;
    report.params = params;
    return report;
}

GraphReport graph_info(const ExperimentConfig& cfg) {
    GameBundle bundle = build_bundle(cfg);
    const Dag& dag = bundle.dag();

    GraphReport report;
    report.vertex_count = dag.vertex_count();
    report.edge_count = dag.edge_count();
    report.path_count = count_paths(dag);
    report.path_count_exact =
        report.path_count != std::numeric_limits<std::uint64_t>::max();
    report.log_path_count = log_path_count(dag);
    report.max_path_length = dag.max_path_length();
    report.alpha_bound = bundle.cb ? cb_alpha_bound(cfg.k, cfg.n) : hs_alpha_bound(cfg.k);

    // sample one round to classify the observation-graph structure
    Rng rng(cfg.seed);
    GameRound round = [&] {
        if (bundle.cb) {
            std::vector<double> values(cfg.n, 1.0 / cfg.n);
            return cb_round(*bundle.cb, uniform_allocation(cfg.k, cfg.n, rng), values);
        }
        auto adv = make_hs_adversary("random", cfg.k);
        std::vector<double> b = adv->losses({}, 1, rng);
        if (cfg.c2) {
            // any coherent search works for structure classification
            std::vector<int> search(cfg.n, 1);
            return hs_round_c2(*bundle.hs, search, std::move(b), nullptr);
        }
        return hs_round_c1(*bundle.hs, b);
    }();
    ObsDiagnostics diag = diagnose(dag, round.obs);
    report.symmetric = diag.symmetric;
    report.satisfies_a0 = diag.satisfies_a0;
    report.alpha_exact = diag.independence_exact ? diag.independence_number : -1;
    return report;
}

// ---------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------

std::string to_csv(const RegretSeries& series) {
    std::string out = "t,mean_cum_loss,best_cum_loss,regret,mean_Qt\n";
    char buf[128];
    for (std::size_t t = 0; t < series.mean_cum_loss.size(); ++t) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,", t + 1,
                      series.mean_cum_loss[t], series.best_cum_loss[t], series.regret[t]);
        out += buf;
        if (!series.mean_qt.empty()) {
            std::snprintf(buf, sizeof(buf), "%.17g", series.mean_qt[t]);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

void write_csv(const RegretSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open for writing: " + path);
    out << to_csv(series);
    if (!out)
        throw IoError("write failed: " + path);
}

RegretSeries parse_csv(const std::string& text) {
    RegretSeries series;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "t,mean_cum_loss,best_cum_loss,regret,mean_Qt")
        throw ParseError("bad CSV header");
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string field;
        std::vector<std::string> cols;
        while (std::getline(fields, field, ','))
            cols.push_back(field);
        if (line.back() == ',')
            cols.push_back("");
        if (cols.size() != 5)
            throw ParseError("bad CSV row: " + line);
        series.mean_cum_loss.push_back(std::stod(cols[1]));
        series.best_cum_loss.push_back(std::stod(cols[2]));
        series.regret.push_back(std::stod(cols[3]));
        if (!cols[4].empty())
            series.mean_qt.push_back(std::stod(cols[4]));
    }
    return series;
}

} // namespace soppp
