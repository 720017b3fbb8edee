#include "raux/report.hpp"

#include <cmath>

namespace raux {

InequalityReport InequalityReport::make(std::string name, double lhs, double rhs, std::string worst) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  if (lhs == 0.0)
    r.ratio = 0.0;
  else
    r.ratio = rhs > 0.0 ? lhs / rhs : INFINITY;
  r.worst_point = std::move(worst);
  r.pass = std::isfinite(r.ratio) && r.ratio <= 1.0 + kTolerance;
  return r;
}

void InequalityReport::absorb(const InequalityReport& other) {
  const bool pass_all = pass && other.pass;
  if (other.ratio > ratio || !std::isfinite(other.ratio)) {
    lhs = other.lhs;
    rhs = other.rhs;
    ratio = other.ratio;
    worst_point = other.worst_point;
  }
  pass = pass_all;
}

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json j{{"name", name},   {"lhs", lhs},
                   {"rhs", rhs},     {"ratio", std::isfinite(ratio) ? nlohmann::json(ratio) : nlohmann::json("inf")},
                   {"worst_point", worst_point}, {"pass", pass}};
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

InequalityReport InequalityReport::from_json(const nlohmann::json& j) {
  InequalityReport r;
  r.name = j.at("name").get<std::string>();
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.ratio = j.at("ratio").is_string() ? INFINITY : j.at("ratio").get<double>();
  r.worst_point = j.at("worst_point").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  if (j.contains("extra")) r.extra = j.at("extra");
  return r;
}

}  // namespace raux
