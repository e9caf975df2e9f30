#include "boxmind/event_model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

namespace boxmind {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

template <typename E>
struct EnumTable {
  std::vector<std::pair<std::string, E>> entries;

  const std::string& name(E v) const {
    for (const auto& [n, e] : entries)
      if (e == v) return n;
    throw std::logic_error("unmapped enum value");
  }
  E parse(const std::string& tok, const char* field, int line) const {
    for (const auto& [n, e] : entries)
      if (n == tok) return e;
    throw ParseError(line, std::string("unknown ") + field + " token \"" + tok + "\"");
  }
};

const EnumTable<Hand> kHand{{{"lead", Hand::lead}, {"rear", Hand::rear}}};
const EnumTable<Dist> kDist{
    {{"long", Dist::long_range}, {"mid", Dist::mid}, {"close", Dist::close}}};
const EnumTable<Tech> kTech{
    {{"straight", Tech::straight}, {"hook", Tech::hook}, {"uppercut", Tech::uppercut}}};
const EnumTable<Target> kTarget{{{"head", Target::head}, {"torso", Target::torso}}};
const EnumTable<Eff> kEff{
    {{"effective", Eff::effective}, {"ineffective", Eff::ineffective}}};

std::string require_string(const json& j, const char* key, int line) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw ParseError(line, std::string("missing or non-string field \"") + key + "\"");
  return j.at(key).get<std::string>();
}

double require_number(const json& j, const char* key, int line) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParseError(line, std::string("missing or non-numeric field \"") + key + "\"");
  return j.at(key).get<double>();
}

}  // namespace

const std::string& to_string(Hand h) { return kHand.name(h); }
const std::string& to_string(Dist d) { return kDist.name(d); }
const std::string& to_string(Tech t) { return kTech.name(t); }
const std::string& to_string(Target t) { return kTarget.name(t); }
const std::string& to_string(Eff e) { return kEff.name(e); }

std::vector<MatchRecord> parse_event_log(std::istream& in) {
  std::vector<MatchRecord> records;
  std::map<std::string, std::size_t> match_index;
  // (match_id, round_id) -> round index within the match
  std::map<std::pair<std::string, std::string>, std::size_t> round_index;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("malformed line: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(lineno, "line is not an object");
    const std::string type = require_string(j, "type", lineno);

    if (type == "match") {
      MatchRecord m;
      m.match_id = require_string(j, "match_id", lineno);
      if (match_index.count(m.match_id))
        throw ParseError(lineno, "duplicate match_id \"" + m.match_id + "\"");
      try {
        m.date = parse_date(require_string(j, "date", lineno));
      } catch (const std::invalid_argument& e) {
        throw ParseError(lineno, e.what());
      }
      m.boxer_a = require_string(j, "boxer_a", lineno);
      m.boxer_b = require_string(j, "boxer_b", lineno);
      const std::string w = require_string(j, "winner", lineno);
      if (w != "a" && w != "b")
        throw ParseError(lineno, "winner must be \"a\" or \"b\", got \"" + w + "\"");
      m.winner = w[0];
      match_index[m.match_id] = records.size();
      records.push_back(std::move(m));
    } else if (type == "round") {
      const std::string match_id = require_string(j, "match_id", lineno);
      auto it = match_index.find(match_id);
      if (it == match_index.end())
        throw ParseError(lineno, "round references unknown match \"" + match_id + "\"");
      RoundRecord r;
      r.round_id = require_string(j, "round_id", lineno);
      if (j.contains("duration")) r.duration = require_number(j, "duration", lineno);
      if (!(r.duration > 0)) throw ParseError(lineno, "round duration must be positive");
      auto key = std::make_pair(match_id, r.round_id);
      if (round_index.count(key))
        throw ParseError(lineno, "duplicate round_id \"" + r.round_id + "\"");
      auto& match = records[it->second];
      round_index[key] = match.rounds.size();
      match.rounds.push_back(std::move(r));
    } else if (type == "event") {
      const std::string match_id = require_string(j, "match_id", lineno);
      const std::string round_id = require_string(j, "round_id", lineno);
      auto mit = match_index.find(match_id);
      if (mit == match_index.end())
        throw ParseError(lineno, "event references unknown match \"" + match_id + "\"");
      auto& match = records[mit->second];
      auto rit = round_index.find({match_id, round_id});
      if (rit == round_index.end())
        throw ParseError(lineno, "event references unknown round \"" + round_id + "\"");
      auto& round = match.rounds[rit->second];

      PunchEvent e;
      e.boxer_id = require_string(j, "boxer", lineno);
      if (e.boxer_id != match.boxer_a && e.boxer_id != match.boxer_b)
        throw ParseError(lineno, "boxer \"" + e.boxer_id + "\" not listed in match");
      e.t_start = require_number(j, "t_start", lineno);
      e.t_end = require_number(j, "t_end", lineno);
      if (!(e.t_start < e.t_end))
        throw ParseError(lineno, "t_start must be < t_end");
      if (e.t_start < 0 || e.t_end > round.duration)
        throw ParseError(lineno, "event time outside round duration");
      e.hand = kHand.parse(require_string(j, "hand", lineno), "hand", lineno);
      e.dist = kDist.parse(require_string(j, "dist", lineno), "dist", lineno);
      e.tech = kTech.parse(require_string(j, "tech", lineno), "tech", lineno);
      e.target = kTarget.parse(require_string(j, "target", lineno), "target", lineno);
      e.eff = kEff.parse(require_string(j, "eff", lineno), "eff", lineno);
      round.events.push_back(std::move(e));
    } else {
      throw ParseError(lineno, "unknown line type \"" + type + "\"");
    }
  }

  for (auto& m : records)
    for (auto& r : m.rounds)
      std::stable_sort(r.events.begin(), r.events.end(),
                       [](const PunchEvent& a, const PunchEvent& b) {
                         return a.t_start < b.t_start;
                       });
  return records;
}

std::vector<MatchRecord> parse_event_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_event_log(in);
}

void serialize_event_log(const std::vector<MatchRecord>& records, std::ostream& out) {
  for (const auto& m : records) {
    ojson jm{{"type", "match"},
             {"match_id", m.match_id},
             {"date", format_date(m.date)},
             {"boxer_a", m.boxer_a},
             {"boxer_b", m.boxer_b},
             {"winner", std::string(1, m.winner)}};
    out << jm.dump() << '\n';
    for (const auto& r : m.rounds) {
      ojson jr{{"type", "round"},
               {"match_id", m.match_id},
               {"round_id", r.round_id},
               {"duration", r.duration}};
      out << jr.dump() << '\n';
      for (const auto& e : r.events) {
        ojson je{{"type", "event"},       {"match_id", m.match_id},
                 {"round_id", r.round_id}, {"boxer", e.boxer_id},
                 {"t_start", e.t_start},   {"t_end", e.t_end},
                 {"hand", to_string(e.hand)},   {"dist", to_string(e.dist)},
                 {"tech", to_string(e.tech)},   {"target", to_string(e.target)},
                 {"eff", to_string(e.eff)}};
        out << je.dump() << '\n';
      }
    }
  }
}

std::string serialize_event_log(const std::vector<MatchRecord>& records) {
  std::ostringstream out;
  serialize_event_log(records, out);
  return out.str();
}

std::vector<std::string> validate_match(const MatchRecord& m) {
  std::vector<std::string> violations;
  if (m.winner != 'a' && m.winner != 'b')
    violations.push_back("winner must be 'a' or 'b'");
  for (const auto& r : m.rounds) {
    std::set<std::string> ids;
    for (const auto& e : r.events) ids.insert(e.boxer_id);
    if (ids.size() > 2)
      violations.push_back("round " + r.round_id + ": at most two boxers may appear");
    for (const auto& id : ids)
      if (id != m.boxer_a && id != m.boxer_b)
        violations.push_back("round " + r.round_id + ": boxer \"" + id +
                             "\" not listed in match");
    if (!(r.duration > 0))
      violations.push_back("round " + r.round_id + ": duration must be positive");
    for (std::size_t i = 0; i < r.events.size(); ++i) {
      const auto& e = r.events[i];
      if (!(e.t_start < e.t_end))
        violations.push_back("round " + r.round_id + ": t_start < t_end violated");
      if (e.t_start < 0 || e.t_end > r.duration)
        violations.push_back("round " + r.round_id + ": event time outside round duration");
      if (i > 0 && e.t_start < r.events[i - 1].t_start)
        violations.push_back("round " + r.round_id + ": events not sorted by t_start");
    }
  }
  return violations;
}

}  // namespace boxmind
