#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "boxmind/indicators.hpp"
#include "boxmind/synth.hpp"

#include <cmath>

using namespace boxmind;

TEST_CASE("event streams are deterministic per seed") {
  const Vec18 style = random_feasible_style(42, 200, 900.0);
  const auto r1 = generate_event_stream(style, 900.0, 7, 200);
  const auto r2 = generate_event_stream(style, 900.0, 7, 200);
  CHECK(r1 == r2);
  const auto r3 = generate_event_stream(style, 900.0, 8, 200);
  CHECK(r1.events.size() == r3.events.size());
}

TEST_CASE("worlds are deterministic per seed") {
  WorldConfig config;
  config.n_boxers = 6;
  config.n_matches = 15;
  config.rounds_per_match = 1;
  config.round_duration = 240.0;
  config.punch_budget = 60;
  config.seed = 77;
  const auto [m1, t1] = generate_world(config);
  const auto [m2, t2] = generate_world(config);
  REQUIRE(m1.size() == m2.size());
  for (std::size_t i = 0; i < m1.size(); ++i) CHECK(m1[i] == m2[i]);
  CHECK(ground_truth_to_json(t1) == ground_truth_to_json(t2));
}

TEST_CASE("zero close-mid proportion produces no close or mid punches") {
  const double minutes = 30.0;
  Vec18 v;
  v << 0.0, 0.0, 200 / minutes, 0.5, 100 / minutes, 100 / minutes, 0.3, 60 / minutes,
      140 / minutes, 0.85, 170 / minutes, 0.1, 30 / minutes, 0.15, 0.15, 1.0, 0.0, 0.0;
  const auto round = generate_event_stream(v, 1800.0, 3, 500, "boxer", "_opp");
  int n_boxer = 0;
  for (const auto& e : round.events) {
    if (e.boxer_id != "boxer") continue;
    ++n_boxer;
    CHECK(e.dist == Dist::long_range);
  }
  CHECK(n_boxer == 500);
}

TEST_CASE("infeasible styles are rejected") {
  Vec18 v = Vec18::Zero();
  v[0] = 1.5;  // proportion above one
  CHECK_THROWS_AS(generate_event_stream(v, 300.0, 1, 100), std::invalid_argument);
  Vec18 w = random_feasible_style(9, 100, 600.0);
  CHECK_THROWS_AS(generate_event_stream(w, 10.0, 1, 100), std::invalid_argument);
  CHECK_THROWS(generate_event_stream(w, 0.0, 1, 100));
}

TEST_CASE("ground truth JSON round-trips") {
  WorldConfig config;
  config.n_boxers = 4;
  config.n_matches = 5;
  config.footage_fraction = 0.0;
  config.seed = 13;
  const auto [matches, truth] = generate_world(config);
  const auto back = ground_truth_from_json(ground_truth_to_json(truth));
  CHECK(ground_truth_to_json(back) == ground_truth_to_json(truth));
  CHECK(back.boxers.size() == truth.boxers.size());
}

TEST_CASE("matchup term is antisymmetric and round-trips through JSON") {
  WorldConfig config;
  config.n_boxers = 6;
  config.n_matches = 10;
  config.matchup_scale = 1.5;
  config.style_pool = 3;
  config.footage_fraction = 0.0;
  config.seed = 31;
  const auto [matches, truth] = generate_world(config);
  CHECK((truth.matchup + truth.matchup.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(truth.matchup.cwiseAbs().maxCoeff() > 0.0);
  for (int i = 0; i < 5; ++i) {
    const double p = truth.win_probability(truth.boxers[i], truth.boxers[i + 1], 0.4);
    const double q = truth.win_probability(truth.boxers[i + 1], truth.boxers[i], 0.4);
    CHECK(p + q == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto back = ground_truth_from_json(ground_truth_to_json(truth));
  CHECK((back.matchup - truth.matchup).cwiseAbs().maxCoeff() == 0.0);

  // three archetypes over six boxers: each style appears exactly twice
  for (int i = 0; i < 3; ++i)
    CHECK(truth.boxers[i].style == truth.boxers[i + 3].style);
  CHECK(truth.boxers[0].style != truth.boxers[1].style);
}

TEST_CASE("logistic saturation: a ten-point strength gap decides the match") {
  GroundTruth truth;
  truth.payoff.setZero();
  truth.style_stdev.setOnes();
  BoxerTruth strong, weak;
  strong.strength0 = strong.strength1 = 10.0;
  weak.strength0 = weak.strength1 = 0.0;
  CHECK(truth.win_probability(strong, weak, 0.5) > 0.9999);
  CHECK(truth.win_probability(weak, strong, 0.5) < 0.0001);
}

TEST_CASE("single positive payoff coefficient favors the higher style") {
  WorldConfig config;
  config.n_boxers = 20;
  config.n_matches = 1000;
  config.strength_scale = 0.0;
  config.drift_scale = 0.0;
  config.payoff = Vec18::Zero();
  config.payoff[0] = 1.0;
  config.style_scale = 1.0;
  config.footage_fraction = 0.0;  // outcomes only; no rounds needed
  config.seed = 99;
  const auto [matches, truth] = generate_world(config);
  std::map<std::string, double> style1;
  for (const auto& b : truth.boxers) style1[b.id] = b.style[0];
  int n = 0, higher_wins = 0;
  for (const auto& m : matches) {
    if (style1[m.boxer_a] == style1[m.boxer_b]) continue;
    ++n;
    const bool a_higher = style1[m.boxer_a] > style1[m.boxer_b];
    higher_wins += (m.winner == 'a') == a_higher;
  }
  REQUIRE(n > 900);
  // binomial 3-sigma bound around one half
  CHECK(double(higher_wins) > 0.5 * n + 3.0 * std::sqrt(0.25 * n));
}

TEST_CASE("round-trip fidelity over 100 random styles") {
  const double duration = 1800.0;
  const double minutes = duration / 60.0;
  std::vector<std::vector<double>> targets(kNumIndicators), realized(kNumIndicators);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec18 style = random_feasible_style(5000 + trial, 500, duration);
    const auto round = generate_event_stream(style, duration, 9000 + trial, 500);
    const Vec18 got = aggregate_indicators(std::vector<RoundRecord>{round}, "boxer").values;
    for (int k = 0; k < kNumIndicators; ++k) {
      targets[k].push_back(style[k]);
      realized[k].push_back(got[k]);
      const double err = std::abs(got[k] - style[k]);
      if (indicator_is_proportion(k + 1)) {
        if (err > 0.02) ++violations;
      } else {
        // 5% relative, with an absolute floor of one punch over the round
        if (err > std::max(0.05 * style[k], 1.0 / minutes) + 1e-12) ++violations;
      }
    }
  }
  CHECK(violations == 0);

  auto pearson = [](const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= double(x.size());
    my /= double(y.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      sxy += (x[i] - mx) * (y[i] - my);
      sxx += (x[i] - mx) * (x[i] - mx);
      syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
  };
  double mean_r = 0;
  for (int k = 0; k < kNumIndicators; ++k) mean_r += pearson(targets[k], realized[k]);
  mean_r /= kNumIndicators;
  CHECK(mean_r >= 0.95);
}

TEST_CASE("generated rounds satisfy the indicator invariants") {
  for (int trial = 0; trial < 10; ++trial) {
    const Vec18 style = random_feasible_style(300 + trial, 150, 700.0);
    CHECK(satisfies_indicator_invariants(style));
    const auto round = generate_event_stream(style, 700.0, trial, 150);
    for (std::size_t i = 1; i < round.events.size(); ++i)
      CHECK(round.events[i - 1].t_start <= round.events[i].t_start);
    for (const auto& e : round.events) {
      CHECK(e.t_start < e.t_end);
      CHECK(e.t_start >= 0.0);
      CHECK(e.t_end <= 700.0);
    }
  }
}
