#include "soppp_c.h"

#include <string>

#include "soppp/harness.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename F>
soppp_status guard(F&& f) {
    try {
        f();
        return SOPPP_OK;
    } catch (const soppp::ParseError& e) {
        set_error(e.what());
        return SOPPP_ERR_INVALID;
    } catch (const soppp::MissingKey& e) {
        set_error(e.what());
        return SOPPP_ERR_INVALID;
    } catch (const soppp::IoError& e) {
        set_error(e.what());
        return SOPPP_ERR_IO;
    } catch (const soppp::Error& e) {
        set_error(e.what());
        return SOPPP_ERR_INVALID;
    } catch (const std::exception& e) {
        set_error(e.what());
        return SOPPP_ERR_RUNTIME;
    }
}

} // namespace

struct soppp_experiment {
    soppp::ExperimentConfig config;
    soppp::RegretSeries series;
    bool ran = false;
};

extern "C" {

const char* soppp_last_error(void) { return g_last_error.c_str(); }

soppp_status soppp_experiment_create(const char* config_text, soppp_experiment** out) {
    if (config_text == nullptr || out == nullptr) {
        set_error("null argument");
        return SOPPP_ERR_INVALID;
    }
    *out = nullptr;
    return guard([&] {
        auto exp = std::make_unique<soppp_experiment>();
        exp->config = soppp::parse_config(config_text);
        *out = exp.release();
    });
}

void soppp_experiment_destroy(soppp_experiment* exp) { delete exp; }

soppp_status soppp_experiment_run(soppp_experiment* exp) {
    if (exp == nullptr) {
        set_error("null experiment");
        return SOPPP_ERR_INVALID;
    }
    return guard([&] {
        exp->series = soppp::run_experiment(exp->config);
        exp->ran = true;
    });
}

int64_t soppp_experiment_stages(const soppp_experiment* exp) {
    if (exp == nullptr || !exp->ran)
        return 0;
    return static_cast<int64_t>(exp->series.mean_cum_loss.size());
}

soppp_status soppp_experiment_row(const soppp_experiment* exp, int64_t stage,
                                  double* mean_cum_loss, double* best_cum_loss, double* regret,
                                  double* mean_qt, int* has_qt) {
    if (exp == nullptr || !exp->ran) {
        set_error("experiment has not been run");
        return SOPPP_ERR_INVALID;
    }
    if (stage < 1 || stage > soppp_experiment_stages(exp)) {
        set_error("stage out of range");
        return SOPPP_ERR_INVALID;
    }
    std::size_t i = static_cast<std::size_t>(stage - 1);
    if (mean_cum_loss)
        *mean_cum_loss = exp->series.mean_cum_loss[i];
    if (best_cum_loss)
        *best_cum_loss = exp->series.best_cum_loss[i];
    if (regret)
        *regret = exp->series.regret[i];
    bool qt = !exp->series.mean_qt.empty();
    if (has_qt)
        *has_qt = qt ? 1 : 0;
    if (qt && mean_qt)
        *mean_qt = exp->series.mean_qt[i];
    return SOPPP_OK;
}

soppp_status soppp_experiment_terminal_regret(const soppp_experiment* exp, double* out) {
    if (exp == nullptr || !exp->ran || out == nullptr) {
        set_error("experiment has not been run");
        return SOPPP_ERR_INVALID;
    }
    double total = 0.0;
    for (double r : exp->series.terminal_regrets)
        total += r;
    *out = total / static_cast<double>(exp->series.terminal_regrets.size());
    return SOPPP_OK;
}

soppp_status soppp_experiment_write_csv(const soppp_experiment* exp, const char* path) {
    if (exp == nullptr || !exp->ran || path == nullptr) {
        set_error("experiment has not been run");
        return SOPPP_ERR_INVALID;
    }
    return guard([&] { soppp::write_csv(exp->series, path); });
}

soppp_status soppp_verify_bound(const char* config_text, soppp_bound_report* out) {
    if (config_text == nullptr || out == nullptr) {
        set_error("null argument");
        return SOPPP_ERR_INVALID;
    }
    return guard([&] {
        soppp::ExperimentConfig cfg = soppp::parse_config(config_text);
        soppp::BoundReport report = soppp::verify_bound(cfg);
        out->mean_regret = report.mean_regret;
        out->regret_std_err = report.regret_std_err;
        out->bound_rhs = report.rhs_mean;
        out->eta = report.params.eta;
        out->beta = report.params.beta;
        out->passed = report.passed ? 1 : 0;
    });
}

soppp_status soppp_graph_info(const char* game, int32_t k, int32_t n, int32_t kappa,
                              const char* condition, soppp_graph_report* out) {
    if (game == nullptr || out == nullptr) {
        set_error("null argument");
        return SOPPP_ERR_INVALID;
    }
    return guard([&] {
        soppp::ExperimentConfig cfg;
        std::string g = game;
        if (g == "cb")
            cfg.game = soppp::ExperimentConfig::Game::cb;
        else if (g == "hs")
            cfg.game = soppp::ExperimentConfig::Game::hs;
        else
            throw soppp::ParseError("game must be cb or hs");
        cfg.k = k;
        cfg.n = n;
        cfg.kappa = kappa;
        if (condition != nullptr) {
            std::string c = condition;
            if (c == "c2")
                cfg.c2 = true;
            else if (c != "c1" && !c.empty())
                throw soppp::ParseError("condition must be c1 or c2");
        }
        cfg.seed = 1;
        soppp::GraphReport report = soppp::graph_info(cfg);
        out->vertex_count = report.vertex_count;
        out->edge_count = report.edge_count;
        out->path_count = report.path_count;
        out->path_count_exact = report.path_count_exact ? 1 : 0;
        out->log_path_count = report.log_path_count;
        out->max_path_length = report.max_path_length;
        out->alpha_bound = report.alpha_bound;
        out->symmetric = report.symmetric ? 1 : 0;
        out->satisfies_a0 = report.satisfies_a0 ? 1 : 0;
        out->alpha_exact = report.alpha_exact;
    });
}

} // extern "C"
