#pragma once

#include <string>

#include "json.hpp"

namespace raux {

// Outcome of checking one inequality lhs <= rhs, possibly as the worst case
// over many instances.
struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs (0 when both vanish)
  std::string worst_point;
  bool pass = true;
  nlohmann::json extra = nlohmann::json::object();

  static constexpr double kTolerance = 1e-9;

  static InequalityReport make(std::string name, double lhs, double rhs, std::string worst = {});
  // Keep the instance with the larger ratio; pass is the conjunction.
  void absorb(const InequalityReport& other);
  nlohmann::json to_json() const;
  static InequalityReport from_json(const nlohmann::json& j);
};

}  // namespace raux
