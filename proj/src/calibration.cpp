#include "raux/calibration.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "raux/errors.hpp"

namespace raux {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Calibration builtin() {
  Calibration c;
  c.version = 1;
  c.sum_remainder_c = 0.75219366384687913;
  c.corrected_remainder_c = 0.13906337737173288;
  c.source = "builtin";
  return c;
}

}  // namespace

Calibration Calibration::parse(const std::string& text, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError(source + ":" + std::to_string(lineno) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw DomainError(source + ": missing key " + key);
    return it->second;
  };
  Calibration c;
  c.version = std::stoi(need("version"));
  c.sum_remainder_c = std::stod(need("sum_remainder_c"));
  c.corrected_remainder_c = std::stod(need("corrected_remainder_c"));
  if (c.sum_remainder_c <= 0 || c.corrected_remainder_c <= 0)
    throw DomainError(source + ": calibration constants must be positive");
  c.source = source;
  return c;
}

Calibration Calibration::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open calibration file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str(), path);
}

std::string Calibration::serialize() const {
  std::ostringstream o;
  o << std::setprecision(17);
  o << "# Error-radius constants for the fast R(s) evaluation.\n"
    << "# Each is 1.5x the largest ratio observed against the contour integral.\n"
    << "version = " << version << "\n"
    << "sum_remainder_c = " << sum_remainder_c << "\n"
    << "corrected_remainder_c = " << corrected_remainder_c << "\n";
  return o.str();
}

const Calibration& calibration() {
  static const Calibration c = [] {
    if (const char* env = std::getenv("RAUX_CALIBRATION")) return Calibration::load(env);
#ifdef RAUX_SOURCE_DIR
    std::ifstream probe(std::string(RAUX_SOURCE_DIR) + "/data/calibration.txt");
    if (probe) return Calibration::load(std::string(RAUX_SOURCE_DIR) + "/data/calibration.txt");
#endif
    return builtin();
  }();
  return c;
}

}  // namespace raux
