#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>

namespace boxmind {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec18 = Eigen::Matrix<double, 18, 1>;

inline constexpr int kNumIndicators = 18;

// Table of indicator display names, index 0 holds indicator 1.
inline const std::array<std::string, 18>& indicator_names() {
  static const std::array<std::string, 18> names = {
      "Prop. of Close- & Mid-Range Punches",
      "No. of Effective Close- & Mid-Range Punches (per minute)",
      "No. of Effective Long-Range Punches (per minute)",
      "Prop. of Lead Hand Punches",
      "No. of Effective Lead Hand Punches (per minute)",
      "No. of Effective Rear Hand Punches (per minute)",
      "Prop. of Torso Punches",
      "No. of Effective Torso Punches (per minute)",
      "No. of Effective Head Punches (per minute)",
      "Prop. of Straight Punches",
      "No. of Effective Straight Punches (per minute)",
      "Prop. of Mid- & Long-Range Hook Punches",
      "No. of Effective Mid- & Long-Range Hook Punches (per minute)",
      "Prop. of Proactive Punches",
      "Prop. of Counter Punches",
      "Prop. of Straight-Straight Combo",
      "Prop. of Hook Combo",
      "Prop. of Uppercut Combo"};
  return names;
}

// Indicator indices (1-based, as in the reporting convention) that are
// proportions in [0,1]; the rest are per-minute rates >= 0.
inline bool indicator_is_proportion(int index1) {
  switch (index1) {
    case 1: case 4: case 7: case 10: case 12:
    case 14: case 15: case 16: case 17: case 18:
      return true;
    default:
      return false;
  }
}

// Calendar date stored as days since 1970-01-01 plus a parsed form.
struct Date {
  std::int64_t days = 0;  // days since epoch

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date&, const Date&) = default;
};

Date parse_date(const std::string& iso);   // "YYYY-MM-DD", throws on bad input
std::string format_date(Date d);

}  // namespace boxmind
