// Acceptance gate: one pass/fail line per criterion, exit 0 iff all pass.
#include "boxmind/advisor.hpp"
#include "boxmind/diff_core.hpp"
#include "boxmind/event_model.hpp"
#include "boxmind/graph.hpp"
#include "boxmind/indicators.hpp"
#include "boxmind/predictor.hpp"
#include "boxmind/ratings.hpp"
#include "boxmind/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

using namespace boxmind;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int n, const char* what, bool ok, const std::string& detail) {
  std::printf("criterion %d (%s): %s — %s\n", n, what, ok ? "PASS" : "FAIL",
              detail.c_str());
  g_failures += !ok;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- independent indicator oracle (quadratic restatement of the rules) ----

std::vector<Rhythm> oracle_rhythm(const RoundRecord& round, const std::string& boxer_id) {
  std::vector<Rhythm> out;
  for (std::size_t i = 0; i < round.events.size(); ++i) {
    const auto& e = round.events[i];
    if (e.boxer_id != boxer_id) continue;
    bool counter = false;
    for (const auto& o : round.events)
      if (o.boxer_id != boxer_id && e.t_start > o.t_start && e.t_start <= o.t_start + 0.2)
        counter = true;
    if (counter) {
      out.push_back(Rhythm::counter);
      continue;
    }
    double latest_end = -1.0;
    bool any_prior = false;
    for (std::size_t j = 0; j < round.events.size(); ++j) {
      const auto& o = round.events[j];
      const bool prior = o.t_start < e.t_start || (o.t_start == e.t_start && j < i);
      if (!prior) continue;
      any_prior = true;
      latest_end = std::max(latest_end, o.t_end);
    }
    out.push_back(!any_prior || e.t_start - latest_end > 1.0 ? Rhythm::proactive
                                                            : Rhythm::follow_up);
  }
  return out;
}

struct OracleCombos {
  int n_ss = 0, n_hook = 0, n_upper = 0;
};

OracleCombos oracle_combos(const RoundRecord& round, const std::string& boxer_id) {
  std::vector<const PunchEvent*> mine;
  for (const auto& e : round.events)
    if (e.boxer_id == boxer_id) mine.push_back(&e);
  OracleCombos oc;
  std::size_t i = 0;
  while (i < mine.size()) {
    std::size_t j = i;
    while (j + 1 < mine.size() && mine[j + 1]->t_start - mine[j]->t_start <= 1.0) ++j;
    if (j > i) {
      bool has_u = false, has_h = false;
      for (std::size_t k = i; k <= j; ++k) {
        has_u = has_u || mine[k]->tech == Tech::uppercut;
        has_h = has_h || mine[k]->tech == Tech::hook;
      }
      if (has_u)
        ++oc.n_upper;
      else if (has_h)
        ++oc.n_hook;
      else
        ++oc.n_ss;
    }
    i = j + 1;
  }
  return oc;
}

Vec18 oracle_indicators(const std::vector<RoundRecord>& rounds, const std::string& boxer_id) {
  double minutes = 0;
  int P = 0, n_cm = 0, n_lead = 0, n_torso = 0, n_straight = 0, n_mlhook = 0;
  int e_cm = 0, e_long = 0, e_lead = 0, e_rear = 0, e_torso = 0, e_head = 0;
  int e_straight = 0, e_mlhook = 0, n_pro = 0, n_cnt = 0;
  OracleCombos combos;
  for (const auto& r : rounds) {
    minutes += r.duration / 60.0;
    for (const auto& e : r.events) {
      if (e.boxer_id != boxer_id) continue;
      ++P;
      const bool cm = e.dist != Dist::long_range;
      const bool eff = e.eff == Eff::effective;
      const bool mlhook = e.tech == Tech::hook && e.dist != Dist::close;
      n_cm += cm;
      n_lead += e.hand == Hand::lead;
      n_torso += e.target == Target::torso;
      n_straight += e.tech == Tech::straight;
      n_mlhook += mlhook;
      if (eff) {
        e_cm += cm;
        e_long += !cm;
        e_lead += e.hand == Hand::lead;
        e_rear += e.hand == Hand::rear;
        e_torso += e.target == Target::torso;
        e_head += e.target == Target::head;
        e_straight += e.tech == Tech::straight;
        e_mlhook += mlhook;
      }
    }
    for (Rhythm rh : oracle_rhythm(r, boxer_id)) {
      n_pro += rh == Rhythm::proactive;
      n_cnt += rh == Rhythm::counter;
    }
    const OracleCombos oc = oracle_combos(r, boxer_id);
    combos.n_ss += oc.n_ss;
    combos.n_hook += oc.n_hook;
    combos.n_upper += oc.n_upper;
  }
  const double p = P > 0 ? P : 1.0;
  const int K = combos.n_ss + combos.n_hook + combos.n_upper;
  const double k = K > 0 ? K : 1.0;
  Vec18 v;
  v << n_cm / p, e_cm / minutes, e_long / minutes, n_lead / p, e_lead / minutes,
      e_rear / minutes, n_torso / p, e_torso / minutes, e_head / minutes, n_straight / p,
      e_straight / minutes, n_mlhook / p, e_mlhook / minutes, n_pro / p, n_cnt / p,
      combos.n_ss / k, combos.n_hook / k, combos.n_upper / k;
  return v;
}

RoundRecord random_round(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(0, 40);
  std::uniform_real_distribution<double> when(0.0, 170.0);
  std::uniform_real_distribution<double> dur(0.05, 0.6);
  std::uniform_int_distribution<int> coin(0, 1), tri(0, 2);
  std::vector<PunchEvent> events;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    PunchEvent e;
    e.boxer_id = coin(rng) ? "me" : "them";
    e.t_start = when(rng);
    e.t_end = e.t_start + dur(rng);
    e.hand = coin(rng) ? Hand::lead : Hand::rear;
    e.dist = Dist(tri(rng));
    e.tech = Tech(tri(rng));
    e.target = coin(rng) ? Target::head : Target::torso;
    e.eff = coin(rng) ? Eff::effective : Eff::ineffective;
    events.push_back(e);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const PunchEvent& a, const PunchEvent& b) { return a.t_start < b.t_start; });
  RoundRecord r;
  r.round_id = "r1";
  r.duration = 180.0;
  r.events = std::move(events);
  return r;
}

// ---- criteria ----

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  MlpSpec spec;
  spec.widths = {2 * (kNumIndicators + 8), 64, 32, 2 + 2 * kNumIndicators};
  double worst = 0.0;
  for (int seed = 0; seed < 20; ++seed)
    worst = std::max(worst, grad_check(spec, std::uint64_t(seed)));
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "max relative error " << worst << " over 20 seeds in " << elapsed << " s";
  report(1, "gradient exactness", worst < 1e-5 && elapsed < 60.0, os.str());
}

void criterion2() {
  std::mt19937_64 rng(424242);
  double max_err = 0.0;
  int label_mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<RoundRecord> rounds;
    const int n_rounds = 1 + int(rng() % 3);
    for (int r = 0; r < n_rounds; ++r) rounds.push_back(random_round(rng));
    const auto prof = aggregate_indicators(rounds, "me");
    max_err = std::max(max_err,
                       (prof.values - oracle_indicators(rounds, "me")).cwiseAbs().maxCoeff());
    for (const auto& r : rounds) {
      if (classify_rhythm(r, "me") != oracle_rhythm(r, "me")) ++label_mismatches;
      const auto combos = segment_combinations(r, "me");
      const auto oc = oracle_combos(r, "me");
      int ss = 0, hk = 0, up = 0;
      for (const auto& c : combos) {
        ss += c.kind == Combination::Kind::straight_straight;
        hk += c.kind == Combination::Kind::hook;
        up += c.kind == Combination::Kind::uppercut;
      }
      label_mismatches += ss != oc.n_ss || hk != oc.n_hook || up != oc.n_upper;
    }
  }
  std::ostringstream os;
  os << "1000 rounds, max component error " << max_err << ", " << label_mismatches
     << " label mismatches";
  report(2, "indicator oracle equivalence", max_err < 1e-12 && label_mismatches == 0,
         os.str());
}

struct AblationResult {
  double unified = 0, embeddings = 0, indicators = 0, best_baseline = 0;
  PredictorModel unified_model;  // from the last seed, reused by criterion 4
  BoxerGraph graph;
};

AblationResult criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const Date cutoff = parse_date("2023-07-01");
  AblationResult res;
  const int n_seeds = 5;
  double base_sum[3] = {0, 0, 0};
  for (int s = 0; s < n_seeds; ++s) {
    // Strength with drift plus two style effects: a separable linear payoff and
    // a non-separable matchup term; styles are shared archetypes so indicator
    // profiles carry style information but cannot fingerprint individuals.
    WorldConfig wc;
    wc.style_scale = 0.3;
    wc.matchup_scale = 2.0;
    wc.style_pool = 8;
    wc.temperature = 0.55;
    wc.drift_scale = 1.5;
    wc.seed = 100 + s;
    const auto [matches, truth] = generate_world(wc);
    auto graph = build_graph(matches, 4, 1, 100 + s);
    const auto [train_edges, test_edges] = temporal_split(graph, cutoff);
    TrainConfig tc;
    tc.seed = 100 + s;
    tc.epochs = 1000;
    tc.weight_decay = 1e-3;
    tc.hidden = {32, 16};
    const auto modes = {PredictorMode::unified, PredictorMode::embeddings_only,
                        PredictorMode::indicators_only};
    double* sums[3] = {&res.unified, &res.embeddings, &res.indicators};
    int mi = 0;
    for (PredictorMode mode : modes) {
      const auto [model, losses] = train(graph, train_edges, tc, mode);
      *sums[mi++] += evaluate(model, graph, test_edges).accuracy / n_seeds;
      if (mode == PredictorMode::unified && s == n_seeds - 1) {
        res.unified_model = model;
        res.graph = graph;
      }
    }
    const RatingSystem systems[3] = {RatingSystem::elo, RatingSystem::glicko,
                                     RatingSystem::whr};
    for (int b = 0; b < 3; ++b) {
      BaselineConfig bc;
      bc.system = systems[b];
      base_sum[b] += walk_forward(graph.edges, cutoff, bc).accuracy / n_seeds;
    }
  }
  res.best_baseline = std::max({base_sum[0], base_sum[1], base_sum[2]});
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "mean test accuracy: unified " << res.unified << ", embeddings-only "
     << res.embeddings << ", indicators-only " << res.indicators << ", best baseline "
     << res.best_baseline << " (elo " << base_sum[0] << ", glicko " << base_sum[1]
     << ", whr " << base_sum[2] << ") in " << elapsed << " s";
  const bool ok = res.unified >= res.embeddings && res.embeddings >= res.indicators &&
                  res.unified >= res.best_baseline + 0.03 && elapsed < 600.0;
  report(3, "ablation ordering", ok, os.str());
  return res;
}

void criterion4(const AblationResult& abl) {
  double worst = 0.0;
  std::vector<std::string> ids;
  for (const auto& [id, node] : abl.graph.nodes) ids.push_back(id);
  for (const auto& a : ids)
    for (const auto& b : ids) {
      if (a == b) continue;
      const double p = predict(abl.graph, abl.unified_model, a, b, 0.6).win_probability;
      const double q = predict(abl.graph, abl.unified_model, b, a, 0.6).win_probability;
      worst = std::max(worst, std::abs(p + q - 1.0));
    }
  std::ostringstream os;
  os << "max |p(a,b)+p(b,a)-1| = " << worst << " over " << ids.size() * (ids.size() - 1)
     << " ordered pairs";
  report(4, "antisymmetry", worst < 1e-12, os.str());
}

void criterion5() {
  bool ok = true;
  std::ostringstream os;

  // Elo conservation: the total rating never moves.
  {
    std::mt19937_64 rng(7);
    std::vector<double> ratings(10, 1500.0);
    for (int i = 0; i < 200; ++i) {
      const int a = int(rng() % 10);
      int b = int(rng() % 10);
      if (b == a) b = (b + 1) % 10;
      const auto [ra, rb] =
          elo_update(ratings[a], ratings[b], rng() % 2 == 0 ? 1.0 : 0.0, 32.0);
      ratings[a] = ra;
      ratings[b] = rb;
    }
    double total = 0;
    for (double r : ratings) total += r;
    ok = ok && std::abs(total - 10 * 1500.0) < 1e-9;
    os << "elo total drift " << total - 10 * 1500.0 << "; ";
  }

  // Glicko worked example.
  {
    const auto [r2, rd2] = glicko_update(
        1500.0, 200.0, {{1400.0, 30.0, 1.0}, {1550.0, 100.0, 0.0}, {1700.0, 300.0, 0.0}});
    ok = ok && std::abs(r2 - 1464.1) < 0.5 && std::abs(rd2 - 151.4) < 0.5;
    os << "glicko r'=" << r2 << " rd'=" << rd2 << "; ";
  }

  // WHR: same-day 3-boxer fixture vs an exhaustive grid-search MAP.
  {
    WhrState state;
    const std::int64_t d = parse_date("2022-01-01").days;
    whr_add_game(state, {"A", "B", d});
    whr_add_game(state, {"A", "C", d});
    whr_add_game(state, {"B", "C", d});
    whr_add_game(state, {"B", "A", d});
    whr_add_game(state, {"C", "A", d});
    whr_refit(state);
    bool trace_ok = state.converged;
    for (std::size_t i = 1; i < state.objective_trace.size(); ++i)
      trace_ok = trace_ok && state.objective_trace[i] >= state.objective_trace[i - 1] - 1e-12;

    auto obj = [&](double a, double b, double c) {
      // likelihood only: single same-day knots have no Wiener increments,
      // plus the Gaussian anchor prior on each first knot
      auto lp = [](double w, double l) { return -std::log1p(std::exp(l - w)); };
      return lp(a, b) + lp(a, c) + lp(b, c) + lp(b, a) + lp(c, a) -
             0.5 * (a * a + b * b + c * c);
    };
    double best = -1e300, ba = 0, bb = 0, bc = 0;
    for (int ia = -200; ia <= 200; ++ia)
      for (int ib = -200; ib <= 200; ++ib)
        for (int ic = -200; ic <= 200; ++ic) {
          const double v = obj(ia * 0.01, ib * 0.01, ic * 0.01);
          if (v > best) {
            best = v;
            ba = ia * 0.01;
            bb = ib * 0.01;
            bc = ic * 0.01;
          }
        }
    const double ea = std::abs(state.rating_at("A", d) - ba);
    const double eb = std::abs(state.rating_at("B", d) - bb);
    const double ec = std::abs(state.rating_at("C", d) - bc);
    const double worst = std::max({ea, eb, ec});
    ok = ok && trace_ok && worst < 0.02;
    os << "whr grid-MAP error " << worst << ", objective "
       << (trace_ok ? "non-decreasing" : "DECREASED");
  }
  report(5, "rating systems", ok, os.str());
}

void criterion6() {
  bool ok = true;
  std::ostringstream os;

  const std::vector<double> pool = {0.1, 0.4, 0.9, 1.3, 2.2, -0.5};
  const double sym = std::abs(kde_exceed_probability(pool, pool) - 0.5);
  ok = ok && sym < 1e-9;
  os << "identical-pool offset " << sym << "; ";

  std::mt19937_64 rng(777);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto random_pool = [&](int n) {
    std::uniform_real_distribution<double> scale(0.3, 3.0), shift(-2.0, 2.0);
    const double sc = scale(rng), m = shift(rng);
    std::vector<double> out(n);
    for (double& v : out) v = m + sc * normal(rng);
    return out;
  };
  double worst_mc = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto xs = random_pool(8 + int(rng() % 30));
    const auto ys = random_pool(8 + int(rng() % 30));
    const double exact = kde_exceed_probability(xs, ys);
    const double hx = silverman_bandwidth(xs), hy = silverman_bandwidth(ys);
    std::mt19937_64 mc_rng(1000 + trial);
    std::normal_distribution<double> g(0.0, 1.0);
    int hits = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
      const double x = xs[mc_rng() % xs.size()] + hx * g(mc_rng);
      const double y = ys[mc_rng() % ys.size()] + hy * g(mc_rng);
      hits += x > y;
    }
    worst_mc = std::max(worst_mc, std::abs(exact - double(hits) / draws));
  }
  ok = ok && worst_mc < 0.01;
  os << "max closed-form vs MC gap " << worst_mc << "; ";

  int monotone_violations = 0;
  std::uniform_real_distribution<double> delta(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto xs = random_pool(6 + int(rng() % 20));
    const auto ys = random_pool(6 + int(rng() % 20));
    const double base = kde_exceed_probability(xs, ys);
    auto shifted = xs;
    const double d = delta(rng);
    for (double& v : shifted) v += d;
    monotone_violations += kde_exceed_probability(shifted, ys) < base - 1e-12;
  }
  ok = ok && monotone_violations == 0;
  os << monotone_violations << " monotonicity violations";
  report(6, "kde advantage", ok, os.str());
}

void criterion7() {
  WorldConfig wc;
  wc.n_boxers = 24;
  wc.n_matches = 400;
  wc.strength_scale = 0.3;
  wc.drift_scale = 0.1;
  wc.style_scale = 1.0;
  wc.temperature = 0.5;
  wc.footage_fraction = 1.0;
  wc.seed = 321;
  const auto [matches, truth] = generate_world(wc);
  const auto graph = build_graph(matches, 4, 1, 321);
  TrainConfig tc;
  tc.seed = 321;
  tc.epochs = 800;
  tc.weight_decay = 1e-3;
  tc.hidden = {32, 16};
  const auto [model, losses] = train(graph, graph.edges, tc, PredictorMode::unified);

  std::vector<std::string> ids;
  for (const auto& [id, node] : graph.nodes) ids.push_back(id);
  std::mt19937_64 rng(17);
  int recommended = 0, positive = 0;
  for (int pair = 0; pair < 20; ++pair) {
    const std::string a = ids[rng() % ids.size()];
    std::string b = ids[rng() % ids.size()];
    while (b == a) b = ids[rng() % ids.size()];
    const auto rep = win_gradient(model, graph, a, b, 0.8);
    for (const auto& rec : recommend(rep, 5)) {
      ++recommended;
      positive += truth.payoff[rec.index1 - 1] > 0.0;
    }
  }
  const double frac = recommended > 0 ? double(positive) / recommended : 0.0;
  std::ostringstream os;
  os << positive << "/" << recommended
     << " recommended indicators have a positive true payoff (" << frac * 100 << "%)";
  report(7, "recommendation validity", frac >= 0.8, os.str());
}

void criterion8() {
  const double duration = 1800.0;
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
      if (indicator_is_proportion(k + 1))
        violations += err > 0.02;
      else
        violations += err > 0.05 * style[k] + 1e-12;
    }
  }
  auto pearson = [](const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
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
  std::ostringstream os;
  os << violations << " tolerance violations over 100 styles, mean Pearson r = " << mean_r;
  report(8, "round-trip fidelity", violations == 0 && mean_r >= 0.95, os.str());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void criterion9(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / "boxmind_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    const std::string cmd =
        cli + " " + args + " >" + (dir / "out.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };
  auto path = [&](const char* name) { return (dir / name).string(); };
  bool ok = true;
  const std::string sim =
      " --boxers 8 --matches 24 --rounds 1 --round-duration 240 --punches 60 --seed 11";
  ok = ok && run("simulate --out " + path("w1.jsonl") + " --truth " + path("t1.json") + sim);
  ok = ok && run("simulate --out " + path("w2.jsonl") + " --truth " + path("t2.json") + sim);
  const bool sim_same =
      slurp(path("w1.jsonl")) == slurp(path("w2.jsonl")) &&
      slurp(path("t1.json")) == slurp(path("t2.json"));
  ok = ok && run("graph build --events " + path("w1.jsonl") + " --out " + path("g.json") +
                 " --d 4 --c 2 --seed 1");
  const std::string tr = "train --graph " + path("g.json") + " --seed 3 --epochs 60 --out ";
  ok = ok && run(tr + path("c1.json"));
  ok = ok && run(tr + path("c2.json"));
  const bool train_same = slurp(path("c1.json")) == slurp(path("c2.json"));
  fs::remove_all(dir);
  std::ostringstream os;
  os << "simulate artifacts " << (sim_same ? "identical" : "DIFFER") << ", checkpoints "
     << (train_same ? "identical" : "DIFFER");
  report(9, "determinism", ok && sim_same && train_same, os.str());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-boxmind-binary>\n");
    return 1;
  }
  criterion1();
  criterion2();
  const AblationResult abl = criterion3();
  criterion4(abl);
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9(argv[1]);
  std::printf("%s\n", g_failures == 0 ? "all criteria passed" : "CRITERIA FAILED");
  return g_failures == 0 ? 0 : 1;
}
