#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "boxmind/ratings.hpp"

#include <cmath>
#include <random>

using namespace boxmind;

namespace {

MatchEdge edge(const std::string& id, const std::string& a, const std::string& b,
               std::int64_t day, char winner) {
  MatchEdge e;
  e.match_id = id;
  e.boxer_a = a;
  e.boxer_b = b;
  e.date = Date{day};
  e.winner = winner;
  return e;
}

}  // namespace

TEST_CASE("elo symmetric win moves 16 points each way") {
  const auto [ra, rb] = elo_update(1500, 1500, 1.0, 32);
  CHECK(ra == doctest::Approx(1516));
  CHECK(rb == doctest::Approx(1484));
}

TEST_CASE("elo favored winner gains little") {
  CHECK(elo_expected(1700, 1500) == doctest::Approx(0.759747).epsilon(1e-6));
  const auto [ra, rb] = elo_update(1700, 1500, 1.0, 32);
  CHECK(ra == doctest::Approx(1707.688).epsilon(1e-5));
}

TEST_CASE("elo K=0 freezes ratings and conservation is exact") {
  const auto [ra, rb] = elo_update(1650, 1425, 0.0, 0.0);
  CHECK(ra == 1650);
  CHECK(rb == 1425);

  std::mt19937_64 rng(5);
  double a = 1500, b = 1500;
  for (int i = 0; i < 200; ++i) {
    std::tie(a, b) = elo_update(a, b, double(rng() % 2), 32);
    CHECK(a + b == doctest::Approx(3000).epsilon(1e-12));
  }
}

TEST_CASE("glicko worked example") {
  const std::vector<GlickoOpponent> results = {
      {1400, 30, 1.0}, {1550, 100, 0.0}, {1700, 300, 0.0}};
  const auto [r, rd] = glicko_update(1500, 200, results);
  CHECK(std::abs(r - 1464.1) < 0.5);
  CHECK(std::abs(rd - 151.4) < 0.5);
}

TEST_CASE("glicko no games leaves the rating alone; RD regrows via c") {
  const auto [r, rd] = glicko_update(1500, 120, {});
  CHECK(r == 1500);
  CHECK(rd == 120);
  const GlickoParams params;
  const double c = params.c_or_default();
  CHECK(std::sqrt(50.0 * 50.0 + c * c * 365.0) == doctest::Approx(350.0).epsilon(1e-9));
}

TEST_CASE("glicko win over an equal opponent raises the rating") {
  const auto [r, rd] = glicko_update(1500, 200, {{1500, 200, 1.0}});
  CHECK(r > 1500);
  CHECK(rd < 200);
}

TEST_CASE("glicko predict is 0.5 for identical players") {
  CHECK(glicko_predict(1500, 100, 1500, 100) == doctest::Approx(0.5));
  CHECK(glicko_predict(1700, 50, 1500, 50) > 0.5);
}

TEST_CASE("whr single game orders the two boxers") {
  const auto state = whr_fit({edge("m1", "A", "B", 10, 'a')});
  CHECK(state.rating_at("A", 10) > state.rating_at("B", 10));
  CHECK(state.converged);
}

TEST_CASE("whr mutual same-day wins are symmetric") {
  const auto state =
      whr_fit({edge("m1", "A", "B", 10, 'a'), edge("m2", "B", "A", 10, 'a')});
  CHECK(state.rating_at("A", 10) == doctest::Approx(state.rating_at("B", 10)).epsilon(1e-6));
}

TEST_CASE("whr objective never decreases across sweeps") {
  const auto state = whr_fit({edge("m1", "A", "B", 0, 'a'), edge("m2", "B", "C", 30, 'b'),
                              edge("m3", "A", "C", 60, 'a'), edge("m4", "C", "A", 90, 'a'),
                              edge("m5", "B", "A", 120, 'b')});
  REQUIRE(state.objective_trace.size() >= 2);
  for (std::size_t i = 1; i < state.objective_trace.size(); ++i)
    CHECK(state.objective_trace[i] >= state.objective_trace[i - 1] - 1e-12);
}

TEST_CASE("whr newton fit matches the exhaustive grid-search MAP oracle") {
  // Same-day fixture: one knot per boxer, so the full posterior is a
  // three-dimensional function the oracle can grid exhaustively.
  const std::vector<MatchEdge> fixture = {
      edge("m1", "A", "B", 7, 'a'), edge("m2", "A", "B", 7, 'a'),
      edge("m3", "B", "C", 7, 'a'), edge("m4", "A", "C", 7, 'a'),
      edge("m5", "C", "A", 7, 'a')};
  WhrState fitted = whr_fit(fixture);
  REQUIRE(fitted.trajectories.size() == 3);
  for (const auto& [id, knots] : fitted.trajectories) REQUIRE(knots.size() == 1);

  WhrState probe = fitted;
  auto objective_at = [&](double ra, double rb, double rc) {
    probe.trajectories.at("A")[0].r = ra;
    probe.trajectories.at("B")[0].r = rb;
    probe.trajectories.at("C")[0].r = rc;
    return whr_objective(probe);
  };
  double best = -1e300, best_a = 0, best_b = 0, best_c = 0;
  for (double ra = -2.0; ra <= 2.0 + 1e-9; ra += 0.01)
    for (double rb = -2.0; rb <= 2.0 + 1e-9; rb += 0.01)
      for (double rc = -2.0; rc <= 2.0 + 1e-9; rc += 0.01) {
        const double obj = objective_at(ra, rb, rc);
        if (obj > best) {
          best = obj;
          best_a = ra;
          best_b = rb;
          best_c = rc;
        }
      }
  CHECK(std::abs(fitted.trajectories.at("A")[0].r - best_a) < 0.02);
  CHECK(std::abs(fitted.trajectories.at("B")[0].r - best_b) < 0.02);
  CHECK(std::abs(fitted.trajectories.at("C")[0].r - best_c) < 0.02);
}

TEST_CASE("whr multi-day fit is stationary under finite differences") {
  const std::vector<MatchEdge> fixture = {
      edge("m1", "A", "B", 0, 'a'),  edge("m2", "C", "B", 0, 'a'),
      edge("m3", "A", "C", 45, 'a'), edge("m4", "C", "A", 45, 'a'),
      edge("m5", "B", "A", 45, 'a')};
  WhrState fitted = whr_fit(fixture);
  CHECK(fitted.converged);
  const double h = 1e-5;
  for (auto& [id, knots] : fitted.trajectories) {
    for (auto& k : knots) {
      const double r0 = k.r;
      k.r = r0 + h;
      const double up = whr_objective(fitted);
      k.r = r0 - h;
      const double down = whr_objective(fitted);
      k.r = r0;
      CHECK(std::abs((up - down) / (2 * h)) < 1e-3);
    }
  }
}

TEST_CASE("whr predict is 0.5 between unrated boxers") {
  WhrState state;
  CHECK(whr_predict(state, "X", "Y", 0) == doctest::Approx(0.5));
}

TEST_CASE("walk-forward first prediction is a tie and counts incorrect") {
  BaselineConfig config;
  for (RatingSystem s : {RatingSystem::elo, RatingSystem::glicko, RatingSystem::whr}) {
    config.system = s;
    const auto result = walk_forward({edge("m1", "A", "B", 5, 'a')}, Date{0}, config);
    CHECK(result.total == 1);
    CHECK(result.correct == 0);
    CHECK(result.ties == 1);
    REQUIRE(result.probabilities.size() == 1);
    CHECK(result.probabilities[0] == doctest::Approx(0.5));
  }
}

TEST_CASE("walk-forward learns a one-sided rivalry") {
  std::vector<MatchEdge> edges;
  for (int i = 0; i < 10; ++i)
    edges.push_back(edge("m" + std::to_string(i), "A", "B", 10 * i, 'a'));
  BaselineConfig config;
  for (RatingSystem s : {RatingSystem::elo, RatingSystem::glicko, RatingSystem::whr}) {
    config.system = s;
    const auto result = walk_forward(edges, Date{50}, config);
    CHECK(result.total == 5);
    CHECK(result.correct == 5);
    CHECK(result.final_ratings.at("A") > result.final_ratings.at("B"));
  }
}

TEST_CASE("rating system names round-trip") {
  for (RatingSystem s : {RatingSystem::elo, RatingSystem::glicko, RatingSystem::whr})
    CHECK(rating_system_from_string(to_string(s)) == s);
  CHECK_THROWS(rating_system_from_string("trueskill"));
}
