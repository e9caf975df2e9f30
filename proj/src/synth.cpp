#include "boxmind/synth.hpp"

#include "boxmind/indicators.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace boxmind {

namespace {

using json = nlohmann::json;

[[noreturn]] void infeasible(const std::string& why) {
  throw std::invalid_argument("infeasible style: " + why);
}

long iround(double x) { return std::lround(x); }

struct PunchAttrs {
  Dist dist;
  Tech tech;
  Hand hand;
  Target target;
  bool eff = false;
};

// Tech category used for effectiveness bookkeeping: straights and mid/long
// hooks carry their own rate indicators, everything else is pooled.
int tech_cat(const PunchAttrs& a) {
  if (a.tech == Tech::straight) return 0;
  if (a.tech == Tech::hook && a.dist != Dist::close) return 1;
  return 2;
}

int cell_of(const PunchAttrs& a) {
  const int cm = (a.dist == Dist::long_range) ? 1 : 0;
  const int lead = (a.hand == Hand::lead) ? 0 : 1;
  const int torso = (a.target == Target::torso) ? 0 : 1;
  return ((cm * 2 + lead) * 2 + torso) * 3 + tech_cat(a);
}

constexpr int kCells = 24;

bool cell_is_cm(int cell) { return (cell / 12) == 0; }
bool cell_is_lead(int cell) { return ((cell / 6) % 2) == 0; }
bool cell_is_torso(int cell) { return ((cell / 3) % 2) == 0; }
int cell_tech(int cell) { return cell % 3; }

// Capacity-aware raking of expected effective counts against the four
// marginal partitions (distance, hand, target, tech category).
std::array<double, kCells> rake_effective(const std::array<int, kCells>& n,
                                          const std::array<double, 8>& targets, int total_n,
                                          int total_e) {
  std::array<double, kCells> e{};
  const double q = total_n > 0 ? double(total_e) / double(total_n) : 0.0;
  for (int c = 0; c < kCells; ++c) e[c] = q * n[c];

  auto group_cells = [&](int g) {
    std::vector<int> cells;
    for (int c = 0; c < kCells; ++c) {
      const bool in = (g == 0 && cell_is_cm(c)) || (g == 1 && !cell_is_cm(c)) ||
                      (g == 2 && cell_is_lead(c)) || (g == 3 && !cell_is_lead(c)) ||
                      (g == 4 && cell_is_torso(c)) || (g == 5 && !cell_is_torso(c)) ||
                      (g == 6 && cell_tech(c) == 0) || (g == 7 && cell_tech(c) == 1);
      if (in) cells.push_back(c);
    }
    return cells;
  };
  std::array<std::vector<int>, 8> groups;
  for (int g = 0; g < 8; ++g) groups[g] = group_cells(g);

  for (int iter = 0; iter < 400; ++iter) {
    for (int g = 0; g < 8; ++g) {
      double cur = 0, cap = 0;
      for (int c : groups[g]) {
        cur += e[c];
        cap += n[c];
      }
      if (targets[g] > cap + 0.5) infeasible("effective-count target exceeds capacity");
      if (cur <= 0) {
        if (targets[g] > 0.5) {
          for (int c : groups[g])
            if (cap > 0) e[c] = targets[g] * n[c] / cap;
        }
        continue;
      }
      const double scale = targets[g] / cur;
      for (int c : groups[g]) e[c] = std::min(double(n[c]), e[c] * scale);
    }
  }
  for (int g = 0; g < 8; ++g) {
    double cur = 0;
    for (int c : groups[g]) cur += e[c];
    if (std::abs(cur - targets[g]) > std::max(2.0, 0.02 * targets[g]))
      infeasible("effective-count targets are mutually inconsistent");
  }
  return e;
}

// Largest-remainder rounding plus swap repair so every partition's integer
// group sums stay as close to the raked reals as the caps allow.
std::array<int, kCells> integerize_effective(const std::array<int, kCells>& n,
                                             const std::array<double, kCells>& e,
                                             int total_e) {
  std::array<int, kCells> out{};
  std::vector<std::pair<double, int>> fracs;
  int placed = 0;
  for (int c = 0; c < kCells; ++c) {
    out[c] = std::min(n[c], int(std::floor(e[c])));
    placed += out[c];
    fracs.push_back({e[c] - std::floor(e[c]), c});
  }
  std::sort(fracs.begin(), fracs.end(), std::greater<>());
  for (const auto& [frac, c] : fracs) {
    if (placed >= total_e) break;
    if (out[c] < n[c]) {
      ++out[c];
      ++placed;
    }
  }

  // Swap repair per partition; swapping between cells that agree on every
  // other coordinate leaves the other partitions' sums untouched.
  auto coord = [&](int c, int axis) {
    switch (axis) {
      case 0: return cell_is_cm(c) ? 0 : 1;
      case 1: return cell_is_lead(c) ? 0 : 1;
      case 2: return cell_is_torso(c) ? 0 : 1;
      default: return cell_tech(c);
    }
  };
  for (int axis = 0; axis < 4; ++axis) {
    const int n_vals = (axis == 3) ? 3 : 2;
    for (int pass = 0; pass < 64; ++pass) {
      std::vector<double> want(n_vals, 0.0);
      std::vector<int> have(n_vals, 0);
      for (int c = 0; c < kCells; ++c) {
        want[coord(c, axis)] += e[c];
        have[coord(c, axis)] += out[c];
      }
      int over = -1, under = -1;
      for (int v = 0; v < n_vals; ++v) {
        if (have[v] - want[v] > 0.5) over = v;
        if (want[v] - have[v] > 0.5) under = v;
      }
      if (over < 0 || under < 0) break;
      bool moved = false;
      for (int c = 0; c < kCells && !moved; ++c) {
        if (coord(c, axis) != over || out[c] == 0) continue;
        for (int c2 = 0; c2 < kCells && !moved; ++c2) {
          if (coord(c2, axis) != under || out[c2] >= n[c2]) continue;
          bool siblings = true;
          for (int ax2 = 0; ax2 < 4; ++ax2)
            if (ax2 != axis && coord(c, ax2) != coord(c2, ax2)) siblings = false;
          if (!siblings) continue;
          --out[c];
          ++out[c2];
          moved = true;
        }
      }
      if (!moved) break;  // caps block further repair; residual stays small
    }
  }
  return out;
}

struct StreamGroup {
  bool counter = false;
  int combo_kind = -1;              // -1 none, 0 ss, 1 hook, 2 uppercut
  std::vector<int> member_tuples;   // combo members, 0.4 s start gaps
  std::vector<int> trailer_tuples;  // non-combo followers, 1.1 s start gaps
};

RoundRecord build_stream(const Vec18& v, double duration, int budget, std::mt19937_64& rng,
                         const std::string& boxer_id, const std::string& opponent_id,
                         const std::string& round_id) {
  if (!(duration > 0)) throw std::invalid_argument("duration must be positive");
  if (budget < 1) throw std::invalid_argument("punch budget must be >= 1");
  for (int k = 0; k < kNumIndicators; ++k)
    if (!std::isfinite(v[k]) || v[k] < 0) infeasible("non-finite or negative indicator");

  const int N = budget;
  const double minutes = duration / 60.0;

  // ---- integer attribute counts
  const int n_cm = int(iround(v[0] * N));
  if (n_cm > N) infeasible("close/mid proportion > 1");
  const int n_long = N - n_cm;
  const int n_close = n_cm / 2;
  const int n_mid = n_cm - n_close;
  const int n_ml = n_mid + n_long;
  const int n_lead = int(iround(v[3] * N));
  const int n_torso = int(iround(v[6] * N));
  const int n_straight = int(iround(v[9] * N));
  const int n_mlhook = int(iround(v[11] * N));
  if (n_lead > N || n_torso > N || n_straight > N) infeasible("proportion > 1");
  if (n_mlhook > n_ml) infeasible("mid/long hooks exceed mid/long punches");

  const int s_ml_min = std::max(0, n_straight - n_close);
  const int s_ml_max = std::min(n_straight, n_ml - n_mlhook);
  if (s_ml_min > s_ml_max) infeasible("straights cannot be placed across distances");
  const int s_ml = std::clamp(int(iround(double(n_straight) * n_ml / std::max(N, 1))),
                              s_ml_min, s_ml_max);
  const int s_c = n_straight - s_ml;
  const int u_ml = n_ml - n_mlhook - s_ml;
  const int rc = n_close - s_c;
  const int h_c = rc / 2;
  const int u_c = rc - h_c;

  // ---- effective-count targets
  const int e_cm = int(iround(v[1] * minutes));
  const int e_long = int(iround(v[2] * minutes));
  const int e_total = e_cm + e_long;
  if (e_cm > n_cm || e_long > n_long)
    infeasible("effective rate demands more punches than the proportions allow");
  auto split = [&](double rate, int cap_first) {
    int first = std::clamp(int(iround(rate * minutes)),
                           std::max(0, e_total - (N - cap_first)),
                           std::min(cap_first, e_total));
    return std::pair<int, int>{first, e_total - first};
  };
  auto [e_lead, e_rear] = split(v[4], n_lead);
  auto [e_torso, e_head] = split(v[7], n_torso);
  const int e_straight = std::clamp(int(iround(v[10] * minutes)), 0,
                                    std::min(n_straight, e_total));
  const int e_mlhook = std::clamp(int(iround(v[12] * minutes)), 0,
                                  std::min(n_mlhook, e_total - e_straight));
  const int e_other = e_total - e_straight - e_mlhook;
  if (e_other < 0 || e_other > u_ml + u_c + h_c)
    infeasible("effective straight/hook rates exceed the total effective rate");

  // ---- tuple pool
  std::vector<PunchAttrs> tuples(N);
  {
    std::vector<Tech> close_tech, ml_tech;
    close_tech.insert(close_tech.end(), s_c, Tech::straight);
    close_tech.insert(close_tech.end(), h_c, Tech::hook);
    close_tech.insert(close_tech.end(), u_c, Tech::uppercut);
    ml_tech.insert(ml_tech.end(), s_ml, Tech::straight);
    ml_tech.insert(ml_tech.end(), n_mlhook, Tech::hook);
    ml_tech.insert(ml_tech.end(), u_ml, Tech::uppercut);
    std::shuffle(close_tech.begin(), close_tech.end(), rng);
    std::shuffle(ml_tech.begin(), ml_tech.end(), rng);
    std::vector<Dist> ml_dist;
    ml_dist.insert(ml_dist.end(), n_mid, Dist::mid);
    ml_dist.insert(ml_dist.end(), n_long, Dist::long_range);
    std::shuffle(ml_dist.begin(), ml_dist.end(), rng);

    for (int i = 0; i < n_close; ++i) tuples[i] = {Dist::close, close_tech[i], Hand::lead, Target::head};
    for (int i = 0; i < n_ml; ++i)
      tuples[n_close + i] = {ml_dist[i], ml_tech[i], Hand::lead, Target::head};

    std::vector<Hand> hands(N, Hand::rear);
    std::fill(hands.begin(), hands.begin() + n_lead, Hand::lead);
    std::shuffle(hands.begin(), hands.end(), rng);
    std::vector<Target> targets(N, Target::head);
    std::fill(targets.begin(), targets.begin() + n_torso, Target::torso);
    std::shuffle(targets.begin(), targets.end(), rng);
    for (int i = 0; i < N; ++i) {
      tuples[i].hand = hands[i];
      tuples[i].target = targets[i];
    }
  }

  // ---- effectiveness assignment via raking over the 24 attribute cells
  {
    std::array<int, kCells> n_cell{};
    for (const auto& t : tuples) n_cell[cell_of(t)]++;
    const std::array<double, 8> targets = {double(e_cm),     double(e_long),
                                           double(e_lead),   double(e_rear),
                                           double(e_torso),  double(e_head),
                                           double(e_straight), double(e_mlhook)};
    const auto raked = rake_effective(n_cell, targets, N, e_total);
    const auto e_int = integerize_effective(n_cell, raked, e_total);

    std::array<std::vector<int>, kCells> members;
    for (int i = 0; i < N; ++i) members[cell_of(tuples[i])].push_back(i);
    for (int c = 0; c < kCells; ++c) {
      std::shuffle(members[c].begin(), members[c].end(), rng);
      for (int j = 0; j < e_int[c]; ++j) tuples[members[c][j]].eff = true;
    }
  }

  // ---- rhythm and combination structure
  const int n_pro = int(iround(v[13] * N));
  const int n_cnt = int(iround(v[14] * N));
  if (n_pro + n_cnt > N) infeasible("proactive + counter proportions exceed 1");
  if (n_pro + n_cnt == 0) infeasible("every stream needs at least one opener");
  const int n_fol = N - n_pro - n_cnt;

  const double combo_mass = v[15] + v[16] + v[17];
  std::vector<StreamGroup> groups;
  std::vector<int> combo_slots_per_kind(3, 0);
  if (combo_mass > 0.5) {
    const int K = std::min(n_pro, n_fol);
    if (K == 0) infeasible("combination proportions demanded but no followers available");
    int k_ss = int(iround(v[15] / combo_mass * K));
    int k_h = int(iround(v[16] / combo_mass * K));
    int k_u = K - k_ss - k_h;
    while (k_u < 0) (k_h > 0 ? k_h : k_ss)--, ++k_u;
    std::vector<int> kinds;
    kinds.insert(kinds.end(), k_u, 2);
    kinds.insert(kinds.end(), k_h, 1);
    kinds.insert(kinds.end(), k_ss, 0);
    std::vector<int> sizes(K, 2);
    int extras = n_fol - K;
    for (int i = 0; extras > 0; i = (i + 1) % K, --extras) ++sizes[i];
    for (int i = 0; i < K; ++i) {
      StreamGroup g;
      g.combo_kind = kinds[i];
      g.member_tuples.resize(sizes[i], -1);
      combo_slots_per_kind[kinds[i]] += sizes[i];
      groups.push_back(std::move(g));
    }
    for (int i = K; i < n_pro; ++i) groups.push_back(StreamGroup{});
    for (int i = 0; i < n_cnt; ++i) groups.push_back(StreamGroup{true, -1, {}, {}});
  } else {
    if (combo_mass > 0) infeasible("combination proportions must sum to 1 or 0");
    for (int i = 0; i < n_pro; ++i) groups.push_back(StreamGroup{});
    for (int i = 0; i < n_cnt; ++i) groups.push_back(StreamGroup{true, -1, {}, {}});
    // followers that never chain into combinations
    for (int i = 0, g = 0; i < n_fol; ++i, g = (g + 1) % int(groups.size()))
      groups[g].trailer_tuples.push_back(-1);
  }

  // ---- assign tuples to slots honoring combination kinds
  std::vector<int> pool_s, pool_h, pool_u;
  for (int i = 0; i < N; ++i) {
    switch (tuples[i].tech) {
      case Tech::straight: pool_s.push_back(i); break;
      case Tech::hook: pool_h.push_back(i); break;
      case Tech::uppercut: pool_u.push_back(i); break;
    }
  }
  std::shuffle(pool_s.begin(), pool_s.end(), rng);
  std::shuffle(pool_h.begin(), pool_h.end(), rng);
  std::shuffle(pool_u.begin(), pool_u.end(), rng);
  auto take = [](std::vector<int>& pool) {
    const int i = pool.back();
    pool.pop_back();
    return i;
  };

  // Heads first, so that combo fillers can never starve another kind's
  // defining punch out of its pool.
  for (auto& g : groups) {
    if (g.combo_kind != 2) continue;
    if (pool_u.empty()) infeasible("not enough uppercuts for uppercut combinations");
    g.member_tuples[0] = take(pool_u);
  }
  for (auto& g : groups) {
    if (g.combo_kind != 1) continue;
    if (pool_h.empty()) infeasible("not enough hooks for hook combinations");
    g.member_tuples[0] = take(pool_h);
  }
  for (auto& g : groups) {
    if (g.combo_kind != 0) continue;
    for (auto& slot : g.member_tuples) {
      if (pool_s.empty()) infeasible("not enough straights for straight-straight combinations");
      slot = take(pool_s);
    }
  }
  for (auto& g : groups) {  // uppercut fillers drain the uppercut surplus
    if (g.combo_kind != 2) continue;
    for (std::size_t m = 1; m < g.member_tuples.size(); ++m)
      g.member_tuples[m] = !pool_u.empty() ? take(pool_u)
                          : !pool_h.empty() ? take(pool_h)
                          : !pool_s.empty() ? take(pool_s)
                                            : (infeasible("tuple pool exhausted"), 0);
  }
  for (auto& g : groups) {
    if (g.combo_kind != 1) continue;
    for (std::size_t m = 1; m < g.member_tuples.size(); ++m) {
      if (!pool_h.empty())
        g.member_tuples[m] = take(pool_h);
      else if (!pool_s.empty())
        g.member_tuples[m] = take(pool_s);
      else
        infeasible("hook combinations would be forced to contain uppercuts");
    }
  }
  std::vector<int> rest;
  rest.insert(rest.end(), pool_s.begin(), pool_s.end());
  rest.insert(rest.end(), pool_h.begin(), pool_h.end());
  rest.insert(rest.end(), pool_u.begin(), pool_u.end());
  std::shuffle(rest.begin(), rest.end(), rng);
  for (auto& g : groups) {
    if (g.combo_kind < 0 && g.member_tuples.empty()) g.member_tuples.push_back(-1);
    for (auto& slot : g.member_tuples)
      if (slot < 0) slot = take(rest);
    for (auto& slot : g.trailer_tuples)
      if (slot < 0) slot = take(rest);
  }

  std::shuffle(groups.begin(), groups.end(), rng);

  // ---- timeline
  const double punch_dur = 0.25, opp_dur = 0.3, start0 = 0.3;
  double base_pause = 1.2;
  auto layout_end = [&](double pause) {
    double t = start0, last_end = 0.0;
    for (const auto& g : groups) {
      double s = t + (g.counter ? 0.1 : 0.0);
      last_end = t + (g.counter ? opp_dur : 0.0);
      for (std::size_t m = 0; m < g.member_tuples.size(); ++m) {
        if (m > 0) s += 0.4;
        last_end = std::max(last_end, s + punch_dur);
      }
      for (std::size_t m = 0; m < g.trailer_tuples.size(); ++m) {
        s += 1.1;
        last_end = std::max(last_end, s + punch_dur);
      }
      t = last_end + pause;
    }
    return last_end;
  };
  const double min_end = layout_end(base_pause);
  if (min_end > duration - 0.1) infeasible("punch budget does not fit in the round duration");
  if (!groups.empty())
    base_pause += (duration - 0.1 - min_end) / double(groups.size());

  RoundRecord round;
  round.round_id = round_id;
  round.duration = duration;
  {
    double t = start0;
    for (const auto& g : groups) {
      double last_end = 0.0;
      if (g.counter) {
        PunchEvent opp;  // trigger punch establishing the counter window
        opp.boxer_id = opponent_id;
        opp.t_start = t;
        opp.t_end = t + opp_dur;
        opp.hand = Hand::rear;
        opp.dist = Dist::long_range;
        opp.tech = Tech::straight;
        opp.target = Target::head;
        opp.eff = Eff::ineffective;
        round.events.push_back(opp);
        last_end = opp.t_end;
      }
      double s = t + (g.counter ? 0.1 : 0.0);
      auto emit = [&](int tuple_idx) {
        const auto& a = tuples[tuple_idx];
        PunchEvent e;
        e.boxer_id = boxer_id;
        e.t_start = s;
        e.t_end = s + punch_dur;
        e.hand = a.hand;
        e.dist = a.dist;
        e.tech = a.tech;
        e.target = a.target;
        e.eff = a.eff ? Eff::effective : Eff::ineffective;
        round.events.push_back(e);
        last_end = std::max(last_end, e.t_end);
      };
      for (std::size_t m = 0; m < g.member_tuples.size(); ++m) {
        if (m > 0) s += 0.4;
        emit(g.member_tuples[m]);
      }
      for (int tuple_idx : g.trailer_tuples) {
        s += 1.1;
        emit(tuple_idx);
      }
      t = last_end + base_pause;
    }
  }
  std::stable_sort(round.events.begin(), round.events.end(),
                   [](const PunchEvent& a, const PunchEvent& b) { return a.t_start < b.t_start; });
  return round;
}

}  // namespace

RoundRecord generate_event_stream(const Vec18& style, double duration, std::uint64_t seed,
                                  int punch_budget, const std::string& boxer_id,
                                  const std::string& opponent_id,
                                  const std::string& round_id) {
  std::mt19937_64 rng(seed);
  return build_stream(style, duration, punch_budget, rng, boxer_id, opponent_id, round_id);
}

Vec18 random_feasible_style(std::uint64_t seed, int punch_budget, double duration) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  const double minutes = duration / 60.0;
  const int N = punch_budget;
  std::string last_reason = "no attempt made";
  std::map<std::string, int> reasons;

  for (int attempt = 0; attempt < 200; ++attempt) {
    Vec18 v = Vec18::Zero();
    v[0] = uni(0.25, 0.75);
    v[3] = uni(0.30, 0.70);
    v[6] = uni(0.15, 0.55);
    v[9] = uni(0.35, 0.65);
    v[11] = uni(0.1, 0.9) * std::min(0.8 * (1.0 - v[9]), 0.7 * (1.0 - v[0] / 2.0));

    const double q = uni(0.35, 0.65);
    const int e_total = int(iround(q * N));
    auto tilt = [&](double x) { return std::clamp(x * uni(0.88, 1.12), 0.03, 0.97); };
    const int e_cm = int(iround(e_total * tilt(v[0])));
    v[1] = e_cm / minutes;
    v[2] = (e_total - e_cm) / minutes;
    const int e_lead = int(iround(e_total * tilt(v[3])));
    v[4] = e_lead / minutes;
    v[5] = (e_total - e_lead) / minutes;
    const int e_torso = int(iround(e_total * tilt(v[6])));
    v[7] = e_torso / minutes;
    v[8] = (e_total - e_torso) / minutes;
    v[10] = iround(e_total * tilt(v[9]) * 0.9) / minutes;
    v[12] = iround(e_total * tilt(std::max(v[11], 0.02)) * 0.8) / minutes;

    v[13] = uni(0.12, 0.30);
    v[14] = uni(0.04, 0.15);

    // Combination-kind weights proportional to the tech pools the stream
    // construction will see, so the kind quotas are almost always coverable.
    const int n_cm_e = int(iround(v[0] * N));
    const int n_close_e = n_cm_e / 2;
    const int n_ml_e = N - n_close_e;
    const int n_straight_e = int(iround(v[9] * N));
    const int n_mlhook_e = int(iround(v[11] * N));
    const int s_ml_lo = std::max(0, n_straight_e - n_close_e);
    const int s_ml_hi = std::min(n_straight_e, n_ml_e - n_mlhook_e);
    if (s_ml_lo > s_ml_hi) continue;
    const int s_ml_e = std::clamp(int(iround(double(n_straight_e) * n_ml_e / N)),
                                  s_ml_lo, s_ml_hi);
    const int rc_e = n_close_e - (n_straight_e - s_ml_e);
    const int pool_h_est = rc_e / 2 + n_mlhook_e;
    const int pool_u_est = N - n_straight_e - pool_h_est;
    double w0 = n_straight_e * uni(0.8, 1.2);
    double w1 = pool_h_est * uni(0.8, 1.2);
    double w2 = pool_u_est * uni(0.8, 1.2);
    const double w = w0 + w1 + w2;
    if (w <= 0) continue;
    v[15] = w0 / w;
    v[16] = w1 / w;
    v[17] = w2 / w;

    try {
      std::mt19937_64 stream_rng(seed ^ (0x51ed2700ull + attempt));
      RoundRecord round = build_stream(v, duration, N, stream_rng, "boxer", "_opp", "r1");
      return aggregate_indicators(std::vector<RoundRecord>{round}, "boxer").values;
    } catch (const std::invalid_argument& err) {
      last_reason = err.what();
      reasons[last_reason]++;
      continue;  // redraw
    }
  }
  std::string detail;
  for (const auto& [r, n] : reasons) detail += r + " x" + std::to_string(n) + "; ";
  throw std::runtime_error("random_feasible_style: no feasible style found (" + detail + ")");
}

Vec18 default_payoff(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xabcdef1234ull);
  std::uniform_real_distribution<double> mag(0.5, 1.0);
  Vec18 payoff;
  std::vector<int> signs(kNumIndicators);
  for (int k = 0; k < kNumIndicators; ++k) signs[k] = (k < kNumIndicators / 2) ? 1 : -1;
  std::shuffle(signs.begin(), signs.end(), rng);
  for (int k = 0; k < kNumIndicators; ++k) payoff[k] = signs[k] * mag(rng);
  return payoff;
}

double GroundTruth::win_probability(const BoxerTruth& a, const BoxerTruth& b, double t) const {
  const Vec18 za = (a.style - style_mean).cwiseQuotient(style_stdev);
  const Vec18 zb = (b.style - style_mean).cwiseQuotient(style_stdev);
  const double margin = (a.strength_at(t) - b.strength_at(t)) +
                        style_scale * payoff.dot(za - zb) + za.dot(matchup * zb);
  return 1.0 / (1.0 + std::exp(-margin / temperature));
}

std::pair<std::vector<MatchRecord>, GroundTruth> generate_world(const WorldConfig& config) {
  if (config.n_boxers < 2) throw std::invalid_argument("generate_world: need >= 2 boxers");
  if (!(config.temperature > 0)) throw std::invalid_argument("generate_world: temperature <= 0");
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  GroundTruth truth;
  truth.temperature = config.temperature;
  truth.style_scale = config.style_scale;
  truth.payoff = config.payoff.isZero() ? default_payoff(config.seed) : config.payoff;

  if (config.matchup_scale != 0.0) {
    // Rank-2 antisymmetric form: z_a' M z_b = (z_a.u)(z_b.v) - (z_a.v)(z_b.u),
    // a rock-paper-scissors component no scalar rating can represent.
    Vec18 u, v;
    for (int k = 0; k < kNumIndicators; ++k) u[k] = normal(rng);
    for (int k = 0; k < kNumIndicators; ++k) v[k] = normal(rng);
    u.normalize();
    v -= v.dot(u) * u;
    v.normalize();
    truth.matchup = config.matchup_scale * (u * v.transpose() - v * u.transpose());
  }

  std::vector<Vec18> archetypes;
  for (int s = 0; s < config.style_pool; ++s)
    archetypes.push_back(random_feasible_style(rng(), config.punch_budget,
                                               config.round_duration));
  for (int i = 0; i < config.n_boxers; ++i) {
    BoxerTruth b;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "b%03d", i);
    b.id = buf;
    b.strength0 = config.strength_scale * normal(rng);
    b.strength1 = b.strength0 + config.drift_scale * normal(rng);
    b.style = archetypes.empty()
                  ? random_feasible_style(rng(), config.punch_budget, config.round_duration)
                  : archetypes[std::size_t(i) % archetypes.size()];
    truth.boxers.push_back(std::move(b));
  }

  Vec18 sum = Vec18::Zero(), sumsq = Vec18::Zero();
  for (const auto& b : truth.boxers) {
    sum += b.style;
    sumsq += b.style.cwiseProduct(b.style);
  }
  truth.style_mean = sum / double(config.n_boxers);
  Vec18 var = sumsq / double(config.n_boxers) - truth.style_mean.cwiseProduct(truth.style_mean);
  truth.style_stdev = var.cwiseMax(0.0).cwiseSqrt().cwiseMax(1e-6);

  const std::int64_t span = std::max<std::int64_t>(config.end_date.days - config.start_date.days, 1);
  struct Draft {
    int a, b;
    Date date;
    bool a_wins;
    bool footage;
    std::uint64_t round_seed;
  };
  std::vector<Draft> drafts;
  std::uniform_int_distribution<int> pick(0, config.n_boxers - 1);
  std::uniform_int_distribution<std::int64_t> day(0, span);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int m = 0; m < config.n_matches; ++m) {
    Draft d;
    d.a = pick(rng);
    do {
      d.b = pick(rng);
    } while (d.b == d.a);
    d.date = Date{config.start_date.days + day(rng)};
    const double t = double(d.date.days - config.start_date.days) / double(span);
    const double p = truth.win_probability(truth.boxers[d.a], truth.boxers[d.b], t);
    d.a_wins = unit(rng) < p;
    d.footage = unit(rng) < config.footage_fraction;
    d.round_seed = rng();
    drafts.push_back(d);
  }
  std::stable_sort(drafts.begin(), drafts.end(),
                   [](const Draft& x, const Draft& y) { return x.date < y.date; });

  std::vector<MatchRecord> matches;
  for (std::size_t m = 0; m < drafts.size(); ++m) {
    const Draft& d = drafts[m];
    MatchRecord rec;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "m%04d", int(m));
    rec.match_id = buf;
    rec.date = d.date;
    rec.boxer_a = truth.boxers[d.a].id;
    rec.boxer_b = truth.boxers[d.b].id;
    rec.winner = d.a_wins ? 'a' : 'b';
    if (d.footage) {
      for (int r = 0; r < config.rounds_per_match; ++r) {
        const bool a_primary = (r % 2 == 0);
        const auto& primary = truth.boxers[a_primary ? d.a : d.b];
        const auto& other = truth.boxers[a_primary ? d.b : d.a];
        rec.rounds.push_back(generate_event_stream(
            primary.style, config.round_duration, d.round_seed + std::uint64_t(r),
            config.punch_budget, primary.id, other.id, "r" + std::to_string(r + 1)));
      }
    }
    matches.push_back(std::move(rec));
  }
  return {std::move(matches), std::move(truth)};
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  json doc;
  json payoff = json::array();
  for (int k = 0; k < kNumIndicators; ++k) payoff.push_back(truth.payoff[k]);
  doc["payoff"] = std::move(payoff);
  doc["temperature"] = truth.temperature;
  doc["style_scale"] = truth.style_scale;
  json mean = json::array(), stdev = json::array();
  for (int k = 0; k < kNumIndicators; ++k) {
    mean.push_back(truth.style_mean[k]);
    stdev.push_back(truth.style_stdev[k]);
  }
  doc["style_mean"] = std::move(mean);
  doc["style_stdev"] = std::move(stdev);
  json matchup = json::array();
  for (int i = 0; i < kNumIndicators; ++i) {
    json row = json::array();
    for (int j = 0; j < kNumIndicators; ++j) row.push_back(truth.matchup(i, j));
    matchup.push_back(std::move(row));
  }
  doc["matchup"] = std::move(matchup);
  json boxers = json::array();
  for (const auto& b : truth.boxers) {
    json style = json::array();
    for (int k = 0; k < kNumIndicators; ++k) style.push_back(b.style[k]);
    boxers.push_back(json{{"id", b.id},
                          {"strength_knots", {b.strength0, b.strength1}},
                          {"style", std::move(style)}});
  }
  doc["boxers"] = std::move(boxers);
  return doc.dump(2) + "\n";
}

GroundTruth ground_truth_from_json(const std::string& text) {
  json doc = json::parse(text);
  GroundTruth truth;
  for (int k = 0; k < kNumIndicators; ++k) {
    truth.payoff[k] = doc.at("payoff").at(k).get<double>();
    truth.style_mean[k] = doc.at("style_mean").at(k).get<double>();
    truth.style_stdev[k] = doc.at("style_stdev").at(k).get<double>();
  }
  truth.temperature = doc.at("temperature").get<double>();
  truth.style_scale = doc.at("style_scale").get<double>();
  if (doc.contains("matchup"))
    for (int i = 0; i < kNumIndicators; ++i)
      for (int j = 0; j < kNumIndicators; ++j)
        truth.matchup(i, j) = doc.at("matchup").at(i).at(j).get<double>();
  for (const auto& jb : doc.at("boxers")) {
    BoxerTruth b;
    b.id = jb.at("id").get<std::string>();
    b.strength0 = jb.at("strength_knots").at(0).get<double>();
    b.strength1 = jb.at("strength_knots").at(1).get<double>();
    for (int k = 0; k < kNumIndicators; ++k) b.style[k] = jb.at("style").at(k).get<double>();
    truth.boxers.push_back(std::move(b));
  }
  return truth;
}

}  // namespace boxmind
