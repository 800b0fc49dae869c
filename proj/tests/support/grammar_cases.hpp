#pragma once

#include <cstddef>
#include <vector>

namespace grammar {

struct Malformed {
  const char* text;
  std::size_t offset;  // byte offset the error must point at
};

// Each entry breaks exactly one rule.
inline const std::vector<Malformed>& malformed() {
  static const std::vector<Malformed> kCases = {
      {"", 0},
      {"perm", 4},
      {"tmp: every month +10", 0},
      {"permanent: every month +10", 0},
      {"perm every month +10", 5},
      {"perm: each month +10", 6},
      {"perm: every +10", 12},
      {"perm: every mon +10", 12},
      {"perm: every june +10", 12},
      {"perm: every month %5", 18},
      {"perm: every month 10", 18},
      {"perm: every month +", 19},
      {"perm: every month +ten", 19},
      {"temp: every jun-aug on weekends /0", 33},
      {"temp: every jun-aug on weekends / 0.0", 34},
      {"temp: every month ^-2", 19},
      {"temp: every jun- on weekends /2", 17},
      {"temp: every jun-xyz on weekends /2", 16},
      {"temp: every month on +2", 21},
      {"temp: every month on weekend /2", 21},
      {"temp: every dec on 32 *2", 19},
      {"temp: every dec on 00 *2", 19},
      {"temp: every dec on 30-25 *2", 19},
      {"temp: every dec on 25-32 *2", 22},
      {"temp: every month on sat-mon *2", 21},
      {"temp: every month on fri-xyz *2", 25},
      {"temp: every month +2 extra", 21},
      {"temp: every month +2 +3", 21},
      {"temp: every month +1e999", 20},
  };
  return kCases;
}

}  // namespace grammar
