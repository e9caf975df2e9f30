#include "boxmind/graph.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace boxmind {

namespace {
using json = nlohmann::json;

json vec18_to_json(const Vec18& v) {
  json a = json::array();
  for (int k = 0; k < kNumIndicators; ++k) a.push_back(v[k]);
  return a;
}

Vec18 vec18_from_json(const json& a) {
  if (!a.is_array() || a.size() != kNumIndicators)
    throw std::runtime_error("indicator array must have 18 entries");
  Vec18 v;
  for (int k = 0; k < kNumIndicators; ++k) v[k] = a.at(k).get<double>();
  return v;
}
}  // namespace

BoxerGraph build_graph(const std::vector<MatchRecord>& matches, int dim_d, int order_c,
                       std::uint64_t seed) {
  if (matches.empty()) throw std::invalid_argument("build_graph: empty match list");
  if (dim_d < 1 || order_c < 1) throw std::invalid_argument("build_graph: D and C must be >= 1");

  BoxerGraph g;
  g.dim_d = dim_d;
  g.order_c = order_c;

  Date lo = matches.front().date, hi = matches.front().date;
  for (const auto& m : matches) {
    lo = std::min(lo, m.date);
    hi = std::max(hi, m.date);
    g.nodes.try_emplace(m.boxer_a, BoxerNode{m.boxer_a, {}});
    g.nodes.try_emplace(m.boxer_b, BoxerNode{m.boxer_b, {}});
  }
  g.epoch = lo;
  g.span_days = hi.days - lo.days;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> init(-0.1, 0.1);
  for (auto& [id, node] : g.nodes) {  // sorted id order fixes the draw sequence
    node.embedding_coeffs = Mat(dim_d, order_c);
    for (int c = 0; c < order_c; ++c)
      for (int d = 0; d < dim_d; ++d) node.embedding_coeffs(d, c) = init(rng);
  }

  for (const auto& m : matches) {
    MatchEdge e;
    e.match_id = m.match_id;
    e.boxer_a = m.boxer_a;
    e.boxer_b = m.boxer_b;
    e.date = m.date;
    e.t = g.normalize_time(m.date);
    e.winner = m.winner;
    e.footage = !m.rounds.empty();
    if (e.footage) {
      e.ind_a = aggregate_indicators(m.rounds, m.boxer_a).values;
      e.ind_b = aggregate_indicators(m.rounds, m.boxer_b).values;
    }
    g.edges.push_back(std::move(e));
  }
  std::stable_sort(g.edges.begin(), g.edges.end(),
                   [](const MatchEdge& a, const MatchEdge& b) { return a.date < b.date; });
  return g;
}

std::pair<std::vector<MatchEdge>, std::vector<MatchEdge>> temporal_split(
    const BoxerGraph& graph, Date cutoff) {
  std::vector<MatchEdge> train, test;
  for (const auto& e : graph.edges)
    (e.date < cutoff ? train : test).push_back(e);
  return {std::move(train), std::move(test)};
}

std::string graph_to_json(const BoxerGraph& g) {
  json doc;
  doc["format_version"] = 1;
  doc["D"] = g.dim_d;
  doc["C"] = g.order_c;
  doc["epoch"] = format_date(g.epoch);
  doc["span_days"] = g.span_days;

  json nodes = json::array();
  for (const auto& [id, node] : g.nodes) {
    json coeffs = json::array();
    for (int c = 0; c < g.order_c; ++c) {
      json col = json::array();
      for (int d = 0; d < g.dim_d; ++d) col.push_back(node.embedding_coeffs(d, c));
      coeffs.push_back(std::move(col));
    }
    nodes.push_back(json{{"boxer_id", id}, {"coeffs", std::move(coeffs)}});
  }
  doc["nodes"] = std::move(nodes);

  json edges = json::array();
  for (const auto& e : g.edges) {
    json je{{"match_id", e.match_id}, {"a", e.boxer_a},   {"b", e.boxer_b},
            {"date", format_date(e.date)}, {"t", e.t},    {"winner", std::string(1, e.winner)},
            {"footage", e.footage}};
    je["ind_a"] = e.ind_a ? vec18_to_json(*e.ind_a) : json(nullptr);
    je["ind_b"] = e.ind_b ? vec18_to_json(*e.ind_b) : json(nullptr);
    edges.push_back(std::move(je));
  }
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

BoxerGraph graph_from_json(const std::string& text) {
  json doc = json::parse(text);
  if (!doc.contains("format_version") || doc["format_version"].get<int>() != 1)
    throw std::runtime_error("graph file: unknown format_version");

  BoxerGraph g;
  g.dim_d = doc.at("D").get<int>();
  g.order_c = doc.at("C").get<int>();
  g.epoch = parse_date(doc.at("epoch").get<std::string>());
  g.span_days = doc.at("span_days").get<std::int64_t>();

  for (const auto& jn : doc.at("nodes")) {
    BoxerNode node;
    node.boxer_id = jn.at("boxer_id").get<std::string>();
    const auto& coeffs = jn.at("coeffs");
    if (!coeffs.is_array() || int(coeffs.size()) != g.order_c)
      throw std::runtime_error("graph file: coefficient shape mismatch vs declared C");
    node.embedding_coeffs = Mat(g.dim_d, g.order_c);
    for (int c = 0; c < g.order_c; ++c) {
      const auto& col = coeffs.at(c);
      if (!col.is_array() || int(col.size()) != g.dim_d)
        throw std::runtime_error("graph file: coefficient shape mismatch vs declared D");
      for (int d = 0; d < g.dim_d; ++d) node.embedding_coeffs(d, c) = col.at(d).get<double>();
    }
    g.nodes.emplace(node.boxer_id, std::move(node));
  }

  for (const auto& je : doc.at("edges")) {
    MatchEdge e;
    e.match_id = je.at("match_id").get<std::string>();
    e.boxer_a = je.at("a").get<std::string>();
    e.boxer_b = je.at("b").get<std::string>();
    e.date = parse_date(je.at("date").get<std::string>());
    e.t = je.at("t").get<double>();
    const std::string w = je.at("winner").get<std::string>();
    if (w != "a" && w != "b") throw std::runtime_error("graph file: bad winner");
    e.winner = w[0];
    e.footage = je.at("footage").get<bool>();
    if (!je.at("ind_a").is_null()) e.ind_a = vec18_from_json(je.at("ind_a"));
    if (!je.at("ind_b").is_null()) e.ind_b = vec18_from_json(je.at("ind_b"));
    if (!g.nodes.count(e.boxer_a) || !g.nodes.count(e.boxer_b))
      throw std::runtime_error("graph file: edge endpoint \"" + e.boxer_a + "\"/\"" +
                               e.boxer_b + "\" has no node");
    g.edges.push_back(std::move(e));
  }
  return g;
}

void save_graph(const BoxerGraph& graph, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << graph_to_json(graph);
}

BoxerGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return graph_from_json(buf.str());
}

std::vector<std::pair<Date, Vec18>> footage_history(const std::vector<MatchEdge>& edges,
                                                    const std::string& boxer_id) {
  std::vector<std::pair<Date, Vec18>> hist;
  for (const auto& e : edges) {
    if (!e.footage) continue;
    if (e.boxer_a == boxer_id && e.ind_a)
      hist.emplace_back(e.date, *e.ind_a);
    else if (e.boxer_b == boxer_id && e.ind_b)
      hist.emplace_back(e.date, *e.ind_b);
  }
  return hist;
}

}  // namespace boxmind
