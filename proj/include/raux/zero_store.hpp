#pragma once

// Persistent collection of located zeros. A store directory holds
//   zeros.jsonl     append-only; header lines ({"header": ...}) open each
//                   writing session, every other line is one zero
//   coverage.json   manifest of fully scanned rectangles with their windings
// Records within 1e-6 of an existing one (both coordinates) are dropped.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "raux/zeros.hpp"

namespace raux {

// Tool version, seed and calibration version; written at the top of every
// output file the tools produce.
struct RunHeader {
  std::string tool_version;
  unsigned long long seed = 0;
  int calibration_version = 0;
  static RunHeader current(unsigned long long seed = 0);
  nlohmann::json to_json() const;
  static RunHeader from_json(const nlohmann::json& j);
};

struct CoverageEntry {
  Rectangle rect;
  long band = -1;  // -1 for ad-hoc rectangles
  int winding = 0;
  int located = 0;
  std::vector<double> sigma_cuts;
  nlohmann::json to_json() const;
  static CoverageEntry from_json(const nlohmann::json& j);
};

class ZeroStore {
 public:
  inline static constexpr double kDedupeRadius = 1e-6;
  inline static constexpr const char* kMethod = "winding+newton";

  // Opens (creating if needed) the store in dir. Throws CoverageError if the
  // existing data was written under a different calibration version.
  explicit ZeroStore(std::filesystem::path dir, unsigned long long seed = 0);

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<ZeroRecord>& records() const { return records_; }
  const std::vector<CoverageEntry>& coverage() const { return coverage_; }

  // Appends the scan's zeros and registers its rectangle. Incomplete scans
  // (located != winding somewhere) are refused with CoverageError.
  // Returns the number of new records.
  int add_scan(const BandScan& scan, long band = -1);

  bool has_band(long K, const std::vector<double>& sigma_cuts = {}) const;

  // True if rect is inside the union of scanned rectangles. A scanned
  // rectangle whose left side is at the zero-free left edge counts as open
  // to the left; one starting at kBottomEdge counts as starting at 0.
  bool covers(const Rectangle& rect) const;

  // Zeros inside rect (half-open in t), sorted by gamma. CoverageError if
  // rect is not covered.
  std::vector<ZeroRecord> zeros_in(const Rectangle& rect) const;
  int count_in(const Rectangle& rect) const;  // with multiplicity
  // Largest T such that (0, T] x [sigma_lo, sigma_hi] is covered.
  double covered_height(double sigma_lo, double sigma_hi) const;

  // Rewrites zeros.jsonl with one header, records sorted by gamma.
  void compact();

 private:
  void load();
  void write_manifest() const;
  bool is_duplicate(const ZeroRecord& z) const;

  std::filesystem::path dir_;
  RunHeader header_;
  bool header_written_ = false;  // this session
  std::vector<ZeroRecord> records_;
  std::vector<CoverageEntry> coverage_;
};

}  // namespace raux
