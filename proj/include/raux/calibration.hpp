#pragma once

// Empirical constants for the error radii of the fast R(s) evaluation.
// Stored in a versioned key = value text file (data/calibration.txt); the
// `calibrate` CLI command regenerates it.

#include <map>
#include <string>

namespace raux {

struct Calibration {
  int version = 0;
  // |R(s) - sum_{n<=K} n^{-s}| <= sum_remainder_c * K^{-sigma}
  double sum_remainder_c = 0.0;
  // |R(s) - (sum + C0 term)| <= corrected_remainder_c * a^{-sigma-1}, a = sqrt(t/2pi)
  double corrected_remainder_c = 0.0;
  std::string source;  // path the constants were read from, or "builtin"

  static Calibration parse(const std::string& text, const std::string& source);
  static Calibration load(const std::string& path);
  std::string serialize() const;
};

// Read once: $RAUX_CALIBRATION, else <source dir>/data/calibration.txt, else
// the builtin copy of version 1.
const Calibration& calibration();

}  // namespace raux
