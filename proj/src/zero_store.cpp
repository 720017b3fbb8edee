#include "raux/zero_store.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "raux/calibration.hpp"
#include "raux/errors.hpp"

namespace raux {

namespace fs = std::filesystem;
using nlohmann::json;

RunHeader RunHeader::current(unsigned long long seed) {
  return {RAUX_VERSION, seed, calibration().version};
}

json RunHeader::to_json() const {
  return {{"tool", "raux"}, {"tool_version", tool_version}, {"seed", seed}, {"calibration_version", calibration_version}};
}

RunHeader RunHeader::from_json(const json& j) {
  return {j.at("tool_version").get<std::string>(), j.at("seed").get<unsigned long long>(),
          j.at("calibration_version").get<int>()};
}

json CoverageEntry::to_json() const {
  return {{"rect", rect.to_json()}, {"band", band}, {"winding", winding}, {"located", located}, {"sigma_cuts", sigma_cuts}};
}

CoverageEntry CoverageEntry::from_json(const json& j) {
  CoverageEntry e;
  e.rect = Rectangle::from_json(j.at("rect"));
  e.band = j.at("band").get<long>();
  e.winding = j.at("winding").get<int>();
  e.located = j.at("located").get<int>();
  e.sigma_cuts = j.value("sigma_cuts", std::vector<double>{});
  return e;
}

namespace {

// Effective extent of a scanned rectangle (see covers()).
Rectangle effective(const Rectangle& r) {
  Rectangle e = r;
  if (r.sigma_lo <= left_edge(r.t_hi) + 1e-12) e.sigma_lo = -std::numeric_limits<double>::infinity();
  if (r.sigma_hi >= kRightEdge) e.sigma_hi = std::numeric_limits<double>::infinity();
  if (r.t_lo <= kBottomEdge) e.t_lo = std::min(r.t_lo, 0.0);
  return e;
}

json zero_line(const ZeroRecord& z, int calibration_version) {
  json j = z.to_json();
  j["method"] = ZeroStore::kMethod;
  j["calibration_version"] = calibration_version;
  return j;
}

void write_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

}  // namespace

ZeroStore::ZeroStore(fs::path dir, unsigned long long seed) : dir_(std::move(dir)), header_(RunHeader::current(seed)) {
  fs::create_directories(dir_);
  load();
}

void ZeroStore::load() {
  const fs::path zf = dir_ / "zeros.jsonl";
  if (fs::exists(zf)) {
    std::ifstream in(zf);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error&) {
        // A torn final line from an interrupted append is dropped; anything
        // earlier is corruption.
        if (in.peek() == EOF) break;
        throw Error(zf.string() + ":" + std::to_string(lineno) + ": malformed line");
      }
      if (j.contains("header")) {
        const RunHeader h = RunHeader::from_json(j.at("header"));
        if (h.calibration_version != header_.calibration_version)
          throw CoverageError("store " + dir_.string() + " was written with calibration version " +
                              std::to_string(h.calibration_version) + ", current is " +
                              std::to_string(header_.calibration_version));
        continue;
      }
      ZeroRecord z = ZeroRecord::from_json(j);
      if (!is_duplicate(z)) records_.push_back(z);
    }
  }
  const fs::path mf = dir_ / "coverage.json";
  if (fs::exists(mf)) {
    std::ifstream in(mf);
    const json j = json::parse(in);
    for (const auto& e : j.at("entries")) coverage_.push_back(CoverageEntry::from_json(e));
  }
}

bool ZeroStore::is_duplicate(const ZeroRecord& z) const {
  return std::any_of(records_.begin(), records_.end(), [&](const ZeroRecord& r) {
    return std::abs(r.gamma - z.gamma) <= kDedupeRadius && std::abs(r.beta - z.beta) <= kDedupeRadius;
  });
}

void ZeroStore::write_manifest() const {
  json entries = json::array();
  for (const auto& e : coverage_) entries.push_back(e.to_json());
  const json j = {{"header", header_.to_json()}, {"entries", entries}};
  write_atomic(dir_ / "coverage.json", j.dump(1) + "\n");
}

int ZeroStore::add_scan(const BandScan& scan, long band) {
  if (!scan.complete()) throw CoverageError("refusing to store an incomplete scan of " + scan.rect.to_json().dump());
  std::ostringstream buf;
  if (!header_written_) buf << json{{"header", header_.to_json()}}.dump() << "\n";
  int added = 0;
  for (const auto& z : scan.zeros) {
    if (is_duplicate(z)) continue;
    records_.push_back(z);
    buf << zero_line(z, header_.calibration_version).dump() << "\n";
    ++added;
  }
  {
    std::ofstream out(dir_ / "zeros.jsonl", std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot append to " + (dir_ / "zeros.jsonl").string());
    out << buf.str();
    out.flush();
    if (!out) throw Error("append failed: " + (dir_ / "zeros.jsonl").string());
  }
  header_written_ = true;
  // Records go first: a crash between the two writes leaves zeros without
  // coverage, and the rescan that follows dedupes them.
  CoverageEntry e;
  e.rect = scan.rect;
  e.band = band;
  e.winding = scan.total_winding;
  int located = 0;
  for (const auto& z : scan.zeros) located += z.multiplicity;
  e.located = located;
  if (band >= 0) {
    for (double x : scan.sigma_lines)
      if (x != scan.rect.sigma_lo && x != scan.rect.sigma_hi) e.sigma_cuts.push_back(x);
  }
  coverage_.push_back(e);
  write_manifest();
  return added;
}

bool ZeroStore::has_band(long K, const std::vector<double>& sigma_cuts) const {
  return std::any_of(coverage_.begin(), coverage_.end(), [&](const CoverageEntry& e) {
    if (e.band != K) return false;
    return std::all_of(sigma_cuts.begin(), sigma_cuts.end(), [&](double c) {
      return std::any_of(e.sigma_cuts.begin(), e.sigma_cuts.end(), [&](double x) { return std::abs(x - c) < 1e-5; });
    });
  });
}

double ZeroStore::covered_height(double sigma_lo, double sigma_hi) const {
  std::vector<std::pair<double, double>> iv;
  for (const auto& c : coverage_) {
    const Rectangle e = effective(c.rect);
    if (e.sigma_lo <= sigma_lo && e.sigma_hi >= sigma_hi) iv.emplace_back(e.t_lo, e.t_hi);
  }
  std::sort(iv.begin(), iv.end());
  double reach = 0.0;
  for (const auto& [lo, hi] : iv) {
    if (lo > reach) break;
    reach = std::max(reach, hi);
  }
  return reach;
}

bool ZeroStore::covers(const Rectangle& rect) const {
  rect.validate();
  std::vector<std::pair<double, double>> iv;
  for (const auto& c : coverage_) {
    const Rectangle e = effective(c.rect);
    if (e.sigma_lo <= rect.sigma_lo && e.sigma_hi >= rect.sigma_hi) iv.emplace_back(e.t_lo, e.t_hi);
  }
  std::sort(iv.begin(), iv.end());
  double reach = rect.t_lo;
  for (const auto& [lo, hi] : iv) {
    if (lo > reach) break;
    reach = std::max(reach, hi);
    if (reach >= rect.t_hi) return true;
  }
  return reach >= rect.t_hi;
}

std::vector<ZeroRecord> ZeroStore::zeros_in(const Rectangle& rect) const {
  if (!covers(rect)) throw CoverageError("store does not cover " + rect.to_json().dump());
  std::vector<ZeroRecord> out;
  for (const auto& z : records_)
    if (rect.contains(z.beta, z.gamma)) out.push_back(z);
  std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    return a.gamma != b.gamma ? a.gamma < b.gamma : a.beta < b.beta;
  });
  return out;
}

int ZeroStore::count_in(const Rectangle& rect) const {
  int n = 0;
  for (const auto& z : zeros_in(rect)) n += z.multiplicity;
  return n;
}

void ZeroStore::compact() {
  std::sort(records_.begin(), records_.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    return a.gamma != b.gamma ? a.gamma < b.gamma : a.beta < b.beta;
  });
  std::sort(coverage_.begin(), coverage_.end(), [](const CoverageEntry& a, const CoverageEntry& b) {
    return a.rect.t_lo != b.rect.t_lo ? a.rect.t_lo < b.rect.t_lo : a.rect.sigma_lo < b.rect.sigma_lo;
  });
  std::ostringstream buf;
  buf << json{{"header", header_.to_json()}}.dump() << "\n";
  for (const auto& z : records_) buf << zero_line(z, header_.calibration_version).dump() << "\n";
  write_atomic(dir_ / "zeros.jsonl", buf.str());
  header_written_ = true;
  write_manifest();
}

}  // namespace raux
