#pragma once

#include "boxmind/types.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace boxmind {

enum class Hand { lead, rear };
enum class Dist { long_range, mid, close };
enum class Tech { straight, hook, uppercut };
enum class Target { head, torso };
enum class Eff { effective, ineffective };

const std::string& to_string(Hand h);
const std::string& to_string(Dist d);
const std::string& to_string(Tech t);
const std::string& to_string(Target t);
const std::string& to_string(Eff e);

// One atomic strike. Times are seconds from round start.
struct PunchEvent {
  std::string boxer_id;
  double t_start = 0.0;
  double t_end = 0.0;
  Hand hand = Hand::lead;
  Dist dist = Dist::long_range;
  Tech tech = Tech::straight;
  Target target = Target::head;
  Eff eff = Eff::ineffective;

  friend bool operator==(const PunchEvent&, const PunchEvent&) = default;
};

struct RoundRecord {
  std::string round_id;
  double duration = 180.0;
  std::vector<PunchEvent> events;  // sorted by t_start, stable on ties

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct MatchRecord {
  std::string match_id;
  Date date;
  std::string boxer_a;
  std::string boxer_b;
  char winner = 'a';  // 'a' or 'b'
  std::vector<RoundRecord> rounds;

  const std::string& winner_id() const { return winner == 'a' ? boxer_a : boxer_b; }

  friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

// Parse failure, carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Line-delimited JSON event log (see README for the line schemas).
std::vector<MatchRecord> parse_event_log(std::istream& in);
std::vector<MatchRecord> parse_event_log_file(const std::string& path);

void serialize_event_log(const std::vector<MatchRecord>& records, std::ostream& out);
std::string serialize_event_log(const std::vector<MatchRecord>& records);

// Returns every violated invariant; empty iff the record is valid.
std::vector<std::string> validate_match(const MatchRecord& record);

}  // namespace boxmind
