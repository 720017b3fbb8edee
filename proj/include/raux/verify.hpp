#pragma once

// Published numerical constants, recomputed: the ten cap norms, a and b of
// the Mellin bound, and the large-values factor at T = 4.

#include <string>
#include <vector>

#include "json.hpp"

namespace raux {

struct ConstantItem {
  std::string name;
  double value = 0.0, expected = 0.0, tol = 0.0;
  bool pass = false;
};

struct ConstantsResult {
  std::vector<ConstantItem> items;
  bool pass() const;
  nlohmann::json to_json() const;
};

ConstantsResult constants_suite();

}  // namespace raux
