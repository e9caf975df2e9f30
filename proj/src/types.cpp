#include "boxmind/types.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace boxmind {

Date parse_date(const std::string& iso) {
  int y = 0, m = 0, d = 0;
  char sep1 = 0, sep2 = 0;
  if (std::sscanf(iso.c_str(), "%d%c%d%c%d", &y, &sep1, &m, &sep2, &d) != 5 ||
      sep1 != '-' || sep2 != '-') {
    throw std::invalid_argument("bad date: " + iso);
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                  std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw std::invalid_argument("bad date: " + iso);
  auto days = std::chrono::sys_days{ymd}.time_since_epoch().count();
  return Date{days};
}

std::string format_date(Date d) {
  std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{d.days}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

}  // namespace boxmind
