#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "soppp/exp3oe.hpp"
#include "support.hpp"

using namespace soppp;
using namespace testsup;

namespace {

Feedback full_feedback(const ObservationGraph& obs, const Path& chosen,
                       std::vector<double> losses) {
    return Feedback{&obs, revealed_set(obs, chosen), std::move(losses)};
}

} // namespace

TEST_CASE("initial state is uniform over paths") {
    Dag d = diamond();
    Learner learner(d, {0.1, 0.05, 100});
    LogWeights w = learner.current_log_weights();
    for (int e = 0; e < 4; ++e) {
        CHECK_FALSE(w.is_zero(e));
        CHECK(w.log(e) == doctest::Approx(0.0));
    }
    Rng rng(5);
    auto [path, ft] = learner.draw(rng);
    CHECK(path_probability(d, ft, w, path) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("draw samples from the exponential-weights distribution") {
    Dag d = diamond();
    Learner learner(d, {0.1, 0.05, 100});
    Rng rng(11);
    int first = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        auto [path, ft] = learner.draw(rng);
        REQUIRE(path.length() == 2);
        if (path.edge_ids[0] == 0)
            ++first;
    }
    CHECK(std::abs(first / static_cast<double>(draws) - 0.5) < 0.02);
}

TEST_CASE("update applies the estimator increment exactly") {
    Dag d = diamond();
    // R(e2) = {e0, e2}: uniform weights give q(e2) = 0.75
    ObservationGraph obs(4);
    obs.add_arc(0, 2);
    Learner learner(d, {0.1, 0.25, 100});
    Path chosen{{0, 2}};
    Feedback fb = full_feedback(obs, chosen, {0.2, 0.0, 0.6, 0.0});
    RoundRecord rec = learner.update(chosen, fb);

    CHECK(rec.stage == 1);
    CHECK(learner.stage() == 2);
    CHECK(rec.chosen == chosen);
    CHECK(rec.realized_loss == doctest::Approx(0.8));
    CHECK(rec.revealed == std::vector<int>{0, 2});
    REQUIRE(rec.q_revealed.size() == 2);
    CHECK(rec.q_revealed[0] == doctest::Approx(0.5).epsilon(1e-12));   // q(e0) self-loop
    CHECK(rec.q_revealed[1] == doctest::Approx(0.75).epsilon(1e-12));  // q(e2)
    CHECK_FALSE(rec.q_sum_value.has_value());

    const auto& s = learner.cumulative_estimated_loss();
    CHECK(s[0] == doctest::Approx(0.2 / 0.75).epsilon(1e-12));
    CHECK(s[1] == 0.0);
    CHECK(s[2] == doctest::Approx(0.6 / 1.0).epsilon(1e-12));  // 0.6 / (0.75 + 0.25)
    CHECK(s[3] == 0.0);

    LogWeights w = learner.current_log_weights();
    CHECK(w.log(2) == doctest::Approx(-0.1 * 0.6).epsilon(1e-12));
    CHECK(w.log(1) == doctest::Approx(0.0));
}

TEST_CASE("unrevealed edges keep their weight") {
    Dag d = diamond();
    ObservationGraph obs(4);
    Learner learner(d, {0.2, 0.1, 100});
    Path chosen{{1, 3}};
    learner.update(chosen, full_feedback(obs, chosen, {0.0, 0.5, 0.0, 0.5}));
    const auto& s = learner.cumulative_estimated_loss();
    CHECK(s[0] == 0.0);
    CHECK(s[2] == 0.0);
    CHECK(s[1] > 0.0);
    CHECK(s[3] > 0.0);
}

TEST_CASE("update validates its feedback") {
    Dag d = diamond();
    ObservationGraph obs(4);
    Learner learner(d, {0.1, 0.1, 100});
    Path chosen{{0, 2}};
    SUBCASE("revealed set must match the observation graph") {
        Feedback fb{&obs, {0, 1, 2}, {0.1, 0.1, 0.1, 0.1}};
        CHECK_THROWS_AS(learner.update(chosen, fb), InconsistentFeedback);
    }
    SUBCASE("losses outside [0,1] are rejected") {
        Feedback fb = full_feedback(obs, chosen, {0.1, 0.0, 1.5, 0.0});
        CHECK_THROWS_AS(learner.update(chosen, fb), LossOutOfRange);
        Feedback fb2 = full_feedback(obs, chosen, {-0.1, 0.0, 0.5, 0.0});
        CHECK_THROWS_AS(learner.update(chosen, fb2), LossOutOfRange);
    }
}

TEST_CASE("q in the record is computed under pre-update weights") {
    Dag d = diamond();
    ObservationGraph obs(4);
    Learner learner(d, {0.5, 0.1, 100});
    Path chosen{{0, 2}};
    // first update skews the weights
    learner.update(chosen, full_feedback(obs, chosen, {1.0, 0.0, 1.0, 0.0}));
    LogWeights pre = learner.current_log_weights();
    FlowTable ft = weight_push(d, pre);
    double expect_q0 = edge_marginal(d, ft, pre, 0);
    RoundRecord rec = learner.update(chosen, full_feedback(obs, chosen, {0.3, 0.0, 0.3, 0.0}));
    CHECK(rec.q_revealed[0] == doctest::Approx(expect_q0).epsilon(1e-12));
}

TEST_CASE("weights stay consistent with recorded estimates over many rounds") {
    Dag d = diamond();
    ObservationGraph obs(4);
    obs.add_arc(0, 1);
    obs.add_arc(1, 0);
    LearnerParams params{0.3, 0.05, 200};
    Learner learner(d, params);
    Rng rng(17);
    std::vector<double> manual(4, 0.0);
    for (int t = 0; t < 200; ++t) {
        auto [path, ft] = learner.draw(rng);
        std::vector<double> losses(4);
        for (double& l : losses)
            l = rng.uniform();
        RoundRecord rec = learner.update(path, full_feedback(obs, path, losses));
        for (std::size_t i = 0; i < rec.revealed.size(); ++i)
            manual[rec.revealed[i]] += losses[rec.revealed[i]] / (rec.q_revealed[i] + params.beta);
    }
    LogWeights w = learner.current_log_weights();
    for (int e = 0; e < 4; ++e)
        CHECK(w.log(e) == doctest::Approx(-params.eta * manual[e]).epsilon(1e-9));
}

TEST_CASE("diagnostics attach Q_t computed from the same pre-update weights") {
    Dag d = diamond();
    ObservationGraph obs(4);
    obs.add_arc(0, 2);
    Learner learner(d, {0.1, 0.25, 100});
    Path chosen{{0, 2}};
    RoundRecord rec = learner.update(chosen, full_feedback(obs, chosen, {0.1, 0.0, 0.1, 0.0}),
                                     true);
    REQUIRE(rec.q_sum_value.has_value());
    // uniform weights: r = 0.5 everywhere; q = (0.5, 0.5, 0.75, 0.5)
    double expect = 0.5 / 0.75 + 0.5 / 0.75 + 0.5 / 1.0 + 0.5 / 0.75;
    CHECK(*rec.q_sum_value == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("estimator is unbiased up to the beta shift") {
    Dag d = diamond();
    ObservationGraph obs(4);
    obs.add_arc(0, 2);
    obs.add_arc(1, 3);
    LogWeights w = from_linear({2, 1, 3, 1});
    FlowTable ft = weight_push(d, w);
    double beta = 0.1;
    std::vector<double> losses{0.3, 0.9, 0.5, 0.7};
    Rng rng(23);
    const int draws = 100000;
    std::vector<double> acc(4, 0.0);
    std::vector<double> q(4);
    for (int e = 0; e < 4; ++e)
        q[e] = compute_q(d, w, obs, e);
    for (int i = 0; i < draws; ++i) {
        Path p = sample_path(d, ft, w, rng);
        for (int e : revealed_set(obs, p))
            acc[e] += losses[e] / (q[e] + beta);
    }
    for (int e = 0; e < 4; ++e) {
        double emp = acc[e] / draws;
        double expect = q[e] * losses[e] / (q[e] + beta);
        // binomial std err of the reveal indicator, scaled by the increment
        double se = std::sqrt(q[e] * (1.0 - q[e]) / draws) * losses[e] / (q[e] + beta);
        CHECK(std::abs(emp - expect) <= 3.0 * se + 1e-9);
        CHECK(emp <= losses[e] + 1e-12);
        CHECK(expect <= losses[e]);
    }
}

TEST_CASE("tuning case 4: symmetric with A0") {
    TuningCase tc{true, true, 4.0, 2, 18, std::log(4.0)};
    LearnerParams p = tune_parameters(tc, 10000);
    CHECK(p.beta == doctest::Approx(0.005).epsilon(1e-12));
    CHECK(p.eta == doctest::Approx(2.0 * std::sqrt(std::log(4.0) / (2.0 * 4.0 * 10000.0)))
                       .epsilon(1e-12));
    CHECK(p.eta == doctest::Approx(8.326e-3).epsilon(1e-3));
    CHECK(p.horizon == 10000);
}

TEST_CASE("tuning case 2: symmetric without A0") {
    TuningCase tc{true, false, 4.0, 2, 18, std::log(4.0)};
    LearnerParams p = tune_parameters(tc, 10000);
    CHECK(p.beta == doctest::Approx(1.0 / std::sqrt(2.0 * 4.0 * 10000.0)).epsilon(1e-12));
    CHECK(p.beta == doctest::Approx(3.536e-3).epsilon(1e-3));
    CHECK(p.eta ==
          doctest::Approx(2.0 * std::sqrt(std::log(4.0) / (4.0 * 4.0 * 10000.0))).epsilon(1e-12));
}

TEST_CASE("tuning case 3 solves its quadratic") {
    TuningCase tc{false, true, 6.0, 3, 18, std::log(10.0)};
    long horizon = 5000;
    LearnerParams p = tune_parameters(tc, horizon);
    double t = horizon, alpha = tc.alpha, e = tc.edge_count;
    // root of T a (3 + 2E) b^2 + 2 T a E^2 b = 1
    double lhs = t * alpha * (3.0 + 2.0 * e) * p.beta * p.beta +
                 2.0 * t * alpha * e * e * p.beta;
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-9));
    double expect_eta = 2.0 * std::sqrt(tc.log_p) / std::sqrt(t * tc.n * alpha);
    CHECK(p.eta == doctest::Approx(expect_eta).epsilon(1e-9));
}

TEST_CASE("tuning case 1 solves its quadratic") {
    TuningCase tc{false, false, 6.0, 3, 18, std::log(10.0)};
    long horizon = 5000;
    LearnerParams p = tune_parameters(tc, horizon);
    double t = horizon, alpha = tc.alpha, e = tc.edge_count, n = tc.n;
    double c = 1.0 + alpha * std::log(alpha) + e + n;
    double lhs = t * n * c * p.beta * p.beta + t * n * n * e * e * p.beta;
    CHECK(lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.eta > 0.0);
    CHECK(p.beta > 0.0);
}

TEST_CASE("tuned parameters shrink with the horizon") {
    TuningCase tc{true, false, 4.0, 2, 18, std::log(4.0)};
    LearnerParams small = tune_parameters(tc, 1000);
    LearnerParams large = tune_parameters(tc, 100000);
    CHECK(large.eta < small.eta);
    CHECK(large.beta < small.beta);
}

TEST_CASE("doubling schedule tunes for the enclosing power of two") {
    TuningCase tc{true, true, 4.0, 2, 18, std::log(4.0)};
    LearnerParams p5 = tune_parameters_doubling(tc, 5);
    LearnerParams p8 = tune_parameters_doubling(tc, 8);
    LearnerParams p9 = tune_parameters_doubling(tc, 9);
    CHECK(p5.horizon == 8);
    CHECK(p8.horizon == 8);
    CHECK(p9.horizon == 16);
    CHECK(p5.eta == doctest::Approx(tune_parameters(tc, 8).eta));
    CHECK(p9.eta < p5.eta);
}

TEST_CASE("regret bound right-hand side arithmetic") {
    LearnerParams p{0.1, 0.05, 100};
    std::vector<double> qs(100, 1.0);  // sums to 100
    double expect = std::log(4.0) / 0.1 + (0.05 + 2.0 * 0.1 / 2.0) * 100.0;
    CHECK(regret_bound_rhs(p, 2, std::log(4.0), qs) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(28.8629).epsilon(1e-4));
    CHECK(regret_bound_rhs(p, 2, std::log(4.0), {}) ==
          doctest::Approx(std::log(4.0) / 0.1).epsilon(1e-12));
}

TEST_CASE("with full information and tiny beta the estimate matches the loss") {
    Dag d = diamond();
    ObservationGraph obs = ObservationGraph::complete(4);
    CHECK_THROWS_AS(Learner(d, {0.1, 0.0, 100}), Error);  // beta must be positive
    Learner learner(d, {0.1, 1e-9, 100});
    Path chosen{{0, 2}};
    learner.update(chosen, full_feedback(obs, chosen, {0.4, 0.3, 0.2, 0.1}));
    const auto& s = learner.cumulative_estimated_loss();
    CHECK(s[0] == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(s[1] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(s[2] == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(s[3] == doctest::Approx(0.1).epsilon(1e-6));
}
