// Command-line front end; links only against the C API.

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "soppp_c.h"

namespace {

int fail(const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, soppp_last_error());
    return 1;
}

bool read_file(const std::string& path, std::string& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return false;
    std::ostringstream buf;
    buf << in.rdbuf();
    out = buf.str();
    return true;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    std::string config;
    if (!read_file(config_path, config)) {
        std::fprintf(stderr, "error: cannot read config file: %s\n", config_path.c_str());
        return 1;
    }
    soppp_experiment* exp = nullptr;
    if (soppp_experiment_create(config.c_str(), &exp) != SOPPP_OK)
        return fail("invalid config");
    if (soppp_experiment_run(exp) != SOPPP_OK) {
        soppp_experiment_destroy(exp);
        return fail("run failed");
    }
    double terminal = 0.0;
    soppp_experiment_terminal_regret(exp, &terminal);
    int64_t stages = soppp_experiment_stages(exp);
    std::printf("stages: %" PRId64 "\n", stages);
    std::printf("mean terminal regret: %.6g\n", terminal);
    if (!out_path.empty()) {
        if (soppp_experiment_write_csv(exp, out_path.c_str()) != SOPPP_OK) {
            soppp_experiment_destroy(exp);
            return fail("csv write failed");
        }
        std::printf("wrote %s\n", out_path.c_str());
    }
    soppp_experiment_destroy(exp);
    return 0;
}

int cmd_verify_bound(const std::string& config_path) {
    std::string config;
    if (!read_file(config_path, config)) {
        std::fprintf(stderr, "error: cannot read config file: %s\n", config_path.c_str());
        return 1;
    }
    soppp_bound_report report;
    if (soppp_verify_bound(config.c_str(), &report) != SOPPP_OK)
        return fail("bound verification failed to run");
    std::printf("eta: %.6g  beta: %.6g\n", report.eta, report.beta);
    std::printf("mean realized regret: %.6g (std err %.6g)\n", report.mean_regret,
                report.regret_std_err);
    std::printf("bound RHS (realized Q traces): %.6g\n", report.bound_rhs);
    std::printf("bound check: %s\n", report.passed ? "PASS" : "FAIL");
    return report.passed ? 0 : 2;
}

int cmd_graph_info(const std::string& game, int k, int n, int kappa,
                   const std::string& condition) {
    soppp_graph_report report;
    if (soppp_graph_info(game.c_str(), k, n, kappa, condition.c_str(), &report) != SOPPP_OK)
        return fail("graph info failed");
    std::printf("vertices: %d\n", report.vertex_count);
    std::printf("edges: %d\n", report.edge_count);
    if (report.path_count_exact)
        std::printf("paths: %" PRIu64 "\n", report.path_count);
    else
        std::printf("paths: ~exp(%.6g)\n", report.log_path_count);
    std::printf("longest path: %d\n", report.max_path_length);
    std::printf("alpha bound: %d\n", report.alpha_bound);
    std::printf("sampled round: symmetric=%s a0=%s", report.symmetric ? "true" : "false",
                report.satisfies_a0 ? "true" : "false");
    if (report.alpha_exact >= 0)
        std::printf(" alpha=%d", report.alpha_exact);
    std::printf("\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SOPPP simulator: Exp3-OE on DAG path planning with side-observations"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    auto* simulate = app.add_subcommand("simulate", "run an experiment from a config file");
    simulate->add_option("--config", config_path, "config file")->required();
    simulate->add_option("--out", out_path, "CSV output path");

    std::string vb_config;
    auto* verify = app.add_subcommand("verify-bound", "check the regret bound on realized traces");
    verify->add_option("--config", vb_config, "config file")->required();

    std::string game, condition = "c1";
    int k = 0, n = 0, kappa = 0;
    auto* info = app.add_subcommand("graph-info", "structural report for a game graph");
    info->add_option("--game", game, "cb or hs")->required();
    info->add_option("--k", k)->required();
    info->add_option("--n", n)->required();
    info->add_option("--kappa", kappa, "hs coherence radius");
    info->add_option("--condition", condition, "hs condition: c1 or c2");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) != 0 ? 1 : 0;
    }

    if (simulate->parsed())
        return cmd_simulate(config_path, out_path);
    if (verify->parsed())
        return cmd_verify_bound(vb_config);
    return cmd_graph_info(game, k, n, kappa, condition);
}
