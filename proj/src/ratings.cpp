#include "boxmind/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boxmind {

// ---------------------------------------------------------------- Elo

double elo_expected(double r_a, double r_b) {
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / 400.0));
}

std::pair<double, double> elo_update(double r_a, double r_b, double score_a, double k) {
  const double e_a = elo_expected(r_a, r_b);
  const double delta = k * (score_a - e_a);
  return {r_a + delta, r_b - delta};
}

// ---------------------------------------------------------------- Glicko

namespace {
constexpr double kQ = std::numbers::ln10 / 400.0;
}

double GlickoParams::c_or_default() const {
  if (c > 0) return c;
  // sqrt(RD_max^2 + c^2 * 365) == 350 starting from RD 50
  return std::sqrt((350.0 * 350.0 - 50.0 * 50.0) / 365.0);
}

double glicko_g(double rd) {
  return 1.0 / std::sqrt(1.0 + 3.0 * kQ * kQ * rd * rd /
                                   (std::numbers::pi * std::numbers::pi));
}

double glicko_expected(double r, double r_j, double rd_j) {
  return 1.0 / (1.0 + std::pow(10.0, -glicko_g(rd_j) * (r - r_j) / 400.0));
}

double glicko_predict(double r_a, double rd_a, double r_b, double rd_b) {
  const double g = glicko_g(std::sqrt(rd_a * rd_a + rd_b * rd_b));
  return 1.0 / (1.0 + std::pow(10.0, -g * (r_a - r_b) / 400.0));
}

std::pair<double, double> glicko_update(double rating, double rd,
                                        const std::vector<GlickoOpponent>& results) {
  if (results.empty()) return {rating, rd};
  double d2_inv = 0.0;
  double sum = 0.0;
  for (const auto& res : results) {
    const double g = glicko_g(res.rd);
    const double e = glicko_expected(rating, res.rating, res.rd);
    d2_inv += kQ * kQ * g * g * e * (1.0 - e);
    sum += g * (res.score - e);
  }
  const double denom = 1.0 / (rd * rd) + d2_inv;
  const double new_rating = rating + (kQ / denom) * sum;
  const double new_rd = std::sqrt(1.0 / denom);
  return {new_rating, new_rd};
}

// ---------------------------------------------------------------- WHR

namespace {

double log_sigmoid(double x) {
  // log(1/(1+exp(-x))) without overflow
  if (x >= 0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::size_t knot_index(const std::vector<WhrKnot>& knots, std::int64_t day) {
  auto it = std::lower_bound(knots.begin(), knots.end(), day,
                             [](const WhrKnot& k, std::int64_t d) { return k.day < d; });
  return std::size_t(it - knots.begin());
}

}  // namespace

double WhrState::rating_at(const std::string& boxer_id, std::int64_t day) const {
  auto it = trajectories.find(boxer_id);
  if (it == trajectories.end() || it->second.empty()) return 0.0;
  const auto& knots = it->second;
  if (day <= knots.front().day) return knots.front().r;
  if (day >= knots.back().day) return knots.back().r;
  const std::size_t hi = knot_index(knots, day);
  const auto& a = knots[hi - 1];
  const auto& b = knots[hi];
  if (b.day == day) return b.r;
  const double frac = double(day - a.day) / double(b.day - a.day);
  return a.r + frac * (b.r - a.r);
}

double whr_objective(const WhrState& state) {
  double obj = 0.0;
  for (const auto& game : state.games) {
    const double rw = state.rating_at(game.winner, game.day);
    const double rl = state.rating_at(game.loser, game.day);
    obj += log_sigmoid(rw - rl);
  }
  for (const auto& [id, knots] : state.trajectories) {
    if (knots.empty()) continue;
    obj -= knots.front().r * knots.front().r / (2.0 * state.params.prior_var);
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const double dd = double(knots[i].day - knots[i - 1].day);
      const double dr = knots[i].r - knots[i - 1].r;
      obj -= dr * dr / (2.0 * state.params.w2 * dd);
    }
  }
  return obj;
}

void whr_add_game(WhrState& state, const WhrGame& game) {
  for (const std::string* id : {&game.winner, &game.loser}) {
    auto& knots = state.trajectories[*id];
    const std::size_t pos = knot_index(knots, game.day);
    if (pos == knots.size() || knots[pos].day != game.day) {
      double init = 0.0;
      if (!knots.empty())
        init = (pos > 0) ? knots[pos - 1].r : knots.front().r;
      knots.insert(knots.begin() + pos, WhrKnot{game.day, init});
    }
  }
  state.games.push_back(game);
}

void whr_refit(WhrState& state) {
  state.objective_trace.clear();
  state.converged = false;

  // Games touching each (boxer, day) knot. Every game day has an exact knot
  // for both participants, so the likelihood attaches to knots only.
  struct KnotGame {
    const WhrGame* game;
    bool is_winner;
  };
  std::map<std::pair<std::string, std::int64_t>, std::vector<KnotGame>> by_knot;
  for (const auto& g : state.games) {
    by_knot[{g.winner, g.day}].push_back({&g, true});
    by_knot[{g.loser, g.day}].push_back({&g, false});
  }

  // Posterior restricted to one boxer's trajectory, opponents held fixed.
  auto boxer_objective = [&](const std::string& id, const std::vector<WhrKnot>& knots) {
    double obj = 0.0;
    for (std::size_t i = 0; i < knots.size(); ++i) {
      auto it = by_knot.find({id, knots[i].day});
      if (it != by_knot.end()) {
        for (const auto& kg : it->second) {
          const auto& g = *kg.game;
          const double opp = state.rating_at(kg.is_winner ? g.loser : g.winner, g.day);
          obj += log_sigmoid(kg.is_winner ? knots[i].r - opp : opp - knots[i].r);
        }
      }
    }
    obj -= knots.front().r * knots.front().r / (2.0 * state.params.prior_var);
    for (std::size_t i = 1; i < knots.size(); ++i) {
      const double dd = double(knots[i].day - knots[i - 1].day);
      const double dr = knots[i].r - knots[i - 1].r;
      obj -= dr * dr / (2.0 * state.params.w2 * dd);
    }
    return obj;
  };

  for (int sweep = 0; sweep < state.params.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (auto& [id, knots] : state.trajectories) {
      const std::size_t n = knots.size();
      if (n == 0) continue;
      // Gradient and tridiagonal Hessian of the boxer-local posterior.
      std::vector<double> grad(n, 0.0), diag(n, 0.0), off(n > 1 ? n - 1 : 0, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double r = knots[i].r;
        auto it = by_knot.find({id, knots[i].day});
        if (it != by_knot.end()) {
          for (const auto& kg : it->second) {
            const auto& g = *kg.game;
            const double opp = state.rating_at(kg.is_winner ? g.loser : g.winner, g.day);
            const double p = sigmoid(r - opp);  // prob this boxer wins
            grad[i] += (kg.is_winner ? 1.0 : 0.0) - p;
            diag[i] -= p * (1.0 - p);
          }
        }
        if (i == 0) {
          grad[i] -= r / state.params.prior_var;
          diag[i] -= 1.0 / state.params.prior_var;
        }
        if (i > 0) {
          const double inv = 1.0 / (state.params.w2 * double(knots[i].day - knots[i - 1].day));
          grad[i] -= (r - knots[i - 1].r) * inv;
          diag[i] -= inv;
        }
        if (i + 1 < n) {
          const double inv = 1.0 / (state.params.w2 * double(knots[i + 1].day - knots[i].day));
          grad[i] -= (r - knots[i + 1].r) * inv;
          diag[i] -= inv;
          off[i] = inv;  // d2/dr_i dr_{i+1}
        }
      }

      // Newton step: solve H * delta = -grad (Thomas algorithm; H is
      // negative definite, so no pivoting is needed).
      std::vector<double> d(diag), b(n);
      for (std::size_t i = 0; i < n; ++i) b[i] = -grad[i];
      for (std::size_t i = 1; i < n; ++i) {
        const double w = off[i - 1] / d[i - 1];
        d[i] -= w * off[i - 1];
        b[i] -= w * b[i - 1];
      }
      std::vector<double> delta(n);
      delta[n - 1] = b[n - 1] / d[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) delta[i] = (b[i] - off[i] * delta[i + 1]) / d[i];

      // Damp by halving while the boxer-local objective would decrease.
      const std::vector<WhrKnot> saved = knots;
      const double base = boxer_objective(id, saved);
      double scale = 1.0;
      for (int halving = 0;; ++halving) {
        for (std::size_t i = 0; i < n; ++i) knots[i].r = saved[i].r + scale * delta[i];
        if (boxer_objective(id, knots) >= base) break;
        if (halving == 40) {
          knots = saved;
          scale = 0.0;
          break;
        }
        scale *= 0.5;
      }
      for (std::size_t i = 0; i < n; ++i)
        max_delta = std::max(max_delta, std::abs(scale * delta[i]));
    }
    state.objective_trace.push_back(whr_objective(state));
    if (max_delta < state.params.tol) {
      state.converged = true;
      break;
    }
  }
}

WhrState whr_fit(const std::vector<MatchEdge>& edges, const WhrParams& params) {
  if (edges.empty()) throw std::invalid_argument("whr_fit: empty split");
  WhrState state;
  state.params = params;
  for (const auto& e : edges) {
    const bool a_wins = (e.winner == 'a');
    whr_add_game(state, WhrGame{a_wins ? e.boxer_a : e.boxer_b,
                                a_wins ? e.boxer_b : e.boxer_a, e.date.days});
  }
  whr_refit(state);
  return state;
}

double whr_predict(const WhrState& state, const std::string& a, const std::string& b,
                   std::int64_t day) {
  return sigmoid(state.rating_at(a, day) - state.rating_at(b, day));
}

// ---------------------------------------------------------------- harness

RatingSystem rating_system_from_string(const std::string& name) {
  if (name == "elo") return RatingSystem::elo;
  if (name == "glicko") return RatingSystem::glicko;
  if (name == "whr") return RatingSystem::whr;
  throw std::invalid_argument("unknown rating system \"" + name + "\"");
}

const std::string& to_string(RatingSystem s) {
  static const std::string names[] = {"elo", "glicko", "whr"};
  return names[int(s)];
}

WalkForwardResult walk_forward(const std::vector<MatchEdge>& edges, Date cutoff,
                               const BaselineConfig& config) {
  WalkForwardResult result;
  auto score = [&](const MatchEdge& e, double p_a) {
    if (e.date < cutoff) return;
    result.probabilities.push_back(p_a);
    const bool a_wins = (e.winner == 'a');
    if (p_a == 0.5) {
      ++result.ties;
    } else if ((p_a > 0.5) == a_wins) {
      ++result.correct;
    }
    ++result.total;
  };

  switch (config.system) {
    case RatingSystem::elo: {
      std::map<std::string, double> ratings;
      auto rating = [&](const std::string& id) {
        auto it = ratings.find(id);
        return it == ratings.end() ? config.elo.initial : it->second;
      };
      for (const auto& e : edges) {
        const double ra = rating(e.boxer_a), rb = rating(e.boxer_b);
        score(e, elo_expected(ra, rb));
        auto [na, nb] = elo_update(ra, rb, e.winner == 'a' ? 1.0 : 0.0, config.elo.k);
        ratings[e.boxer_a] = na;
        ratings[e.boxer_b] = nb;
      }
      result.final_ratings = std::move(ratings);
      break;
    }
    case RatingSystem::glicko: {
      struct Entry {
        double rating, rd;
        std::int64_t last_day;
      };
      const double c = config.glicko.c_or_default();
      std::map<std::string, Entry> players;
      auto fetch = [&](const std::string& id, std::int64_t day) -> Entry& {
        auto it = players.find(id);
        if (it == players.end()) {
          it = players.emplace(id, Entry{config.glicko.initial_rating,
                                         config.glicko.initial_rd, day}).first;
        } else {
          // RD inflation for idle periods, capped at the ceiling
          const double idle = double(day - it->second.last_day);
          it->second.rd = std::min(std::sqrt(it->second.rd * it->second.rd + c * c * idle),
                                   config.glicko.max_rd);
          it->second.last_day = day;
        }
        return it->second;
      };
      for (const auto& e : edges) {
        Entry& a = fetch(e.boxer_a, e.date.days);
        Entry& b = fetch(e.boxer_b, e.date.days);
        score(e, glicko_predict(a.rating, a.rd, b.rating, b.rd));
        const Entry a_pre = a, b_pre = b;
        const double score_a = (e.winner == 'a') ? 1.0 : 0.0;
        std::tie(a.rating, a.rd) =
            glicko_update(a_pre.rating, a_pre.rd, {{b_pre.rating, b_pre.rd, score_a}});
        std::tie(b.rating, b.rd) =
            glicko_update(b_pre.rating, b_pre.rd, {{a_pre.rating, a_pre.rd, 1.0 - score_a}});
        a.rd = std::clamp(a.rd, config.glicko.min_rd, config.glicko.max_rd);
        b.rd = std::clamp(b.rd, config.glicko.min_rd, config.glicko.max_rd);
      }
      for (const auto& [id, entry] : players) result.final_ratings[id] = entry.rating;
      break;
    }
    case RatingSystem::whr: {
      WhrState state;
      state.params = config.whr;
      for (const auto& e : edges) {
        score(e, whr_predict(state, e.boxer_a, e.boxer_b, e.date.days));
        const bool a_wins = (e.winner == 'a');
        whr_add_game(state, WhrGame{a_wins ? e.boxer_a : e.boxer_b,
                                    a_wins ? e.boxer_b : e.boxer_a, e.date.days});
        whr_refit(state);
      }
      for (const auto& [id, knots] : state.trajectories)
        if (!knots.empty()) result.final_ratings[id] = knots.back().r;
      break;
    }
  }
  result.accuracy = result.total > 0 ? double(result.correct) / double(result.total) : 0.0;
  return result;
}

}  // namespace boxmind
