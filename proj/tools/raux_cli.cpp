// raux: command-line front end. Exit codes: 0 all checks passed, 1 a check
// failed, 2 usage error, 3 coverage/convergence failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "raux/calibration.hpp"
#include "raux/density.hpp"
#include "raux/dirichlet_mv.hpp"
#include "raux/errors.hpp"
#include "raux/raux_core.hpp"
#include "raux/verify.hpp"
#include "raux/xray.hpp"
#include "raux/zero_store.hpp"
#include "raux/zeros.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace raux;

namespace {

constexpr int kExitCheck = 1, kExitUsage = 2, kExitCoverage = 3;

struct Globals {
  int jobs = 1;
  unsigned long long seed = 0;
  std::string store = "./raux-store";
  bool quiet = false;
} g;

std::string header_line() {
  const RunHeader h = RunHeader::current(g.seed);
  return "raux " + h.tool_version + " seed=" + std::to_string(h.seed) +
         " calibration_version=" + std::to_string(h.calibration_version);
}

json with_header(json body) {
  body["header"] = RunHeader::current(g.seed).to_json();
  return body;
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  out << text;
}

void say(const std::string& s) {
  if (!g.quiet) std::cerr << s << "\n";
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("not a number: '" + item + "'");
    }
  }
  return out;
}

std::pair<long, long> parse_bands(const std::string& s) {
  static const std::regex re(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw DomainError("bands: expected K or K1..K2, got '" + s + "'");
  const long a = std::stol(m[1]), b = m[2].matched ? std::stol(m[2]) : a;
  if (b < a) throw DomainError("bands: K2 < K1");
  return {a, b};
}

// "0.5+14.1i", "s=-3-2i", "2", "14i"
cplx parse_complex(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
  if (s.rfind("s=", 0) == 0) s = s.substr(2);
  static const std::regex full(R"(^([+-]?[0-9.]+(?:[eE][+-]?\d+)?)([+-][0-9.]*(?:[eE][+-]?\d+)?)[ij]$)");
  static const std::regex real_only(R"(^[+-]?[0-9.]+(?:[eE][+-]?\d+)?$)");
  static const std::regex imag_only(R"(^([+-]?[0-9.]*(?:[eE][+-]?\d+)?)[ij]$)");
  std::smatch m;
  auto num = [](std::string t) {
    if (t == "+" || t.empty()) return 1.0;
    if (t == "-") return -1.0;
    return std::stod(t);
  };
  try {
    if (std::regex_match(s, m, full)) return {std::stod(m[1]), num(m[2])};
    if (std::regex_match(s, real_only)) return {std::stod(s), 0.0};
    if (std::regex_match(s, m, imag_only)) return {0.0, num(m[1])};
  } catch (const std::exception&) {
  }
  throw DomainError("cannot parse complex number '" + s + "' (use sigma+ti)");
}

template <class F>
void parallel_for(long n, F&& body) {
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex mu;
  auto worker = [&] {
    for (long i; (i = next++) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!err) err = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 1; k < std::min<long>(g.jobs, n); ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---- eval ------------------------------------------------------------------

struct EvalOpts {
  std::string s, method = "auto";
};

int cmd_eval(const EvalOpts& o) {
  const cplx s = parse_complex(o.s);
  EvalResult r;
  if (o.method == "auto")
    r = r_aux(s);
  else if (o.method == "integral")
    r = r_aux_integral(s);
  else if (o.method == "sum")
    r = r_aux_sum(s, std::max(1L, static_cast<long>(std::floor(std::sqrt(std::max(s.imag(), 0.0) / kTwoPi)))));
  else if (o.method == "corrected")
    r = r_aux_corrected(s);
  else
    throw DomainError("unknown method " + o.method);
  emit(with_header({{"s", {s.real(), s.imag()}},
                    {"value", {r.value.real(), r.value.imag()}},
                    {"abs", std::abs(r.value)},
                    {"err", r.err},
                    {"method", std::string(to_string(r.method))}}));
  return 0;
}

// ---- zeros -----------------------------------------------------------------

struct ScanOpts {
  std::string bands, rect, alphas;
  bool force = false;
};

int cmd_zeros_scan(const ScanOpts& o) {
  ZeroStore store(g.store, g.seed);
  ScanOptions opt;
  if (!o.alphas.empty()) opt.sigma_cuts = parse_list(o.alphas);
  json out = json::array();
  bool ok = true;
  if (!o.rect.empty()) {
    const auto v = parse_list(o.rect);
    if (v.size() != 4) throw DomainError("--rect needs sigma_lo,sigma_hi,t_lo,t_hi");
    const BandScan s = scan_rectangle({v[0], v[1], v[2], v[3]}, opt);
    ok = s.complete();
    if (ok) store.add_scan(s, -1);
    out.push_back(s.summary());
  } else {
    if (o.bands.empty()) throw DomainError("zeros scan: give --bands or --rect");
    const auto [k1, k2] = parse_bands(o.bands);
    std::vector<long> todo;
    for (long K = k1; K <= k2; ++K)
      if (o.force || !store.has_band(K, opt.sigma_cuts)) todo.push_back(K);
    say("scanning " + std::to_string(todo.size()) + " band(s) with " + std::to_string(g.jobs) + " job(s)");
    std::vector<std::optional<BandScan>> res(todo.size());
    std::mutex mu;
    parallel_for(static_cast<long>(todo.size()), [&](long i) {
      BandScan s = scan_band(todo[i], opt);
      for (auto& z : s.zeros) z.band = todo[i];
      std::lock_guard lock(mu);
      res[i] = std::move(s);
      say("  band " + std::to_string(todo[i]) + ": " + std::to_string(res[i]->total_winding) + " zeros");
    });
    // Single writer, band order: output bytes do not depend on --jobs.
    for (std::size_t i = 0; i < todo.size(); ++i) {
      json sj = res[i]->summary();
      sj["band"] = todo[i];
      if (!res[i]->complete()) {
        ok = false;
      } else {
        sj["new_records"] = store.add_scan(*res[i], todo[i]);
      }
      out.push_back(sj);
    }
  }
  emit(with_header({{"scans", out}, {"store", g.store}, {"records", store.records().size()}}));
  if (!ok) throw CoverageError("a scan was incomplete (located zeros != winding); nothing stored for it");
  return 0;
}

int cmd_zeros_compact() {
  ZeroStore store(g.store, g.seed);
  store.compact();
  emit(with_header({{"store", g.store}, {"records", store.records().size()}, {"coverage", store.coverage().size()}}));
  return 0;
}

// ---- count -----------------------------------------------------------------

struct CountOpts {
  double alpha = 0.5, T = 0.0;
};

int cmd_count(const CountOpts& o) {
  const int n = n_alpha_T(o.alpha, o.T);
  json j = {{"alpha", o.alpha}, {"T", o.T}, {"N", n}};
  bool ok = true;
  ZeroStore store(g.store, g.seed);
  if (store.covers({std::min(o.alpha, 0.5), 1.0, 0.0, o.T})) {
    const int m = stored_n_alpha_T(store, o.alpha, o.T);
    j["N_store"] = m;
    ok = m == n;
  }
  j["consistent"] = ok;
  emit(with_header(j));
  say("N(" + std::to_string(o.alpha) + ", " + std::to_string(o.T) + ") = " + std::to_string(n));
  return ok ? 0 : kExitCheck;
}

// ---- density ---------------------------------------------------------------

struct DensityOpts {
  std::string alphas = "0.55,0.6,0.7,0.8", Ts, bands, out = "density-out";
};

std::vector<double> band_tops(const std::string& bands) {
  const auto [k1, k2] = parse_bands(bands);
  std::vector<double> Ts;
  for (long K = k1; K <= k2; ++K) Ts.push_back(kTwoPi * double(K) * K);
  return Ts;
}

int cmd_density(const DensityOpts& o) {
  ZeroStore store(g.store, g.seed);
  const auto alphas = parse_list(o.alphas);
  std::vector<double> Ts;
  if (!o.Ts.empty())
    Ts = parse_list(o.Ts);
  else if (!o.bands.empty())
    Ts = band_tops(o.bands);
  else
    throw DomainError("density: give --Ts or --bands");
  const DensityTable tab = density_table(store, alphas, Ts);
  const fs::path dir(o.out);
  write_file(dir / "density.csv", "# " + header_line() + "\n" + tab.to_csv());
  write_file(dir / "density.md", "<!-- " + header_line() + " -->\n\n" + tab.to_markdown());
  const double T = *std::max_element(Ts.begin(), Ts.end());
  const OmegaResult om = omega_count(store, ThresholdFn::loglog_over_log(5.0), T, Ts);
  const json summary = with_header({{"summary", tab.summary()}, {"omega", om.to_json()}});
  write_file(dir / "density.json", summary.dump(2) + "\n");
  emit(summary);
  bool ok = true;
  for (const auto& s : tab.summary()) ok = ok && s.at("non_exploding").get<bool>();
  return ok ? 0 : kExitCheck;
}

// ---- verify ----------------------------------------------------------------

struct VerifyOpts {
  std::string suite = "all";
  int trials = 1000;
};

int cmd_verify(const VerifyOpts& o) {
  std::vector<std::string> suites;
  if (o.suite == "all") {
    suites.push_back("constants");
    for (const auto& n : inequality_suite_names()) suites.push_back(n);
  } else {
    suites.push_back(o.suite);
  }
  json results = json::array();
  bool ok = true;
  for (const auto& s : suites) {
    if (s == "constants") {
      const ConstantsResult c = constants_suite();
      for (const auto& i : c.items)
        say((i.pass ? "  ok   " : "  FAIL ") + i.name + " = " + std::to_string(i.value) + " (published " +
            std::to_string(i.expected) + ")");
      ok = ok && c.pass();
      results.push_back(c.to_json());
    } else {
      const SuiteResult r = run_inequality_suite(s, o.trials, g.seed, g.jobs);
      say("  " + s + ": " + std::to_string(r.failures) + "/" + std::to_string(r.trials) +
          " failures, worst ratio " + std::to_string(r.worst.ratio));
      ok = ok && r.failures == 0;
      results.push_back(r.to_json());
    }
  }
  emit(with_header({{"suites", results}, {"pass", ok}}));
  return ok ? 0 : kExitCheck;
}

// ---- xray ------------------------------------------------------------------

struct XrayOpts {
  std::string field = "rotated", window, res, out = "xray-out";
};

int cmd_xray(const XrayOpts& o) {
  const FieldId id = field_from_string(o.field);
  const auto w = parse_list(o.window);
  if (w.size() != 4) throw DomainError("--window needs x0,x1,y0,y1");
  const Window win{w[0], w[1], w[2], w[3]};
  auto [nx, ny] = default_resolution(id, win);
  if (!o.res.empty()) {
    const auto r = parse_list(o.res);
    if (r.size() != 2) throw DomainError("--res needs nx,ny");
    nx = static_cast<int>(r[0]);
    ny = static_cast<int>(r[1]);
  }
  const XRayField f = field_grid(id, win, nx, ny, g.jobs);
  const CurveSet c = trace_curves(f);
  const fs::path dir(o.out);
  write_file(dir / "curves.csv", curves_to_csv(c, header_line()));
  write_file(dir / "xray.svg", render_svg(c, f, to_string(id)));
  {
    std::ostringstream cs;
    cs << "# " << header_line() << "\nx,y\n" << std::setprecision(17);
    for (const auto& p : c.crossings) cs << p.x << ',' << p.y << '\n';
    write_file(dir / "crossings.csv", cs.str());
  }
  json j = {{"field", to_string(id)},
            {"window", w},
            {"nx", nx},
            {"ny", ny},
            {"masked_cells", f.masked_cells},
            {"real_lines", c.real_lines.size()},
            {"imag_lines", c.imag_lines.size()},
            {"crossings", c.crossings.size()},
            {"intersections", c.intersections.size()},
            {"saddle_cells", c.saddle_cells}};
  // Crossing check against sign changes of Z where the axis is in view.
  bool ok = true;
  std::optional<std::pair<double, double>> zrange;
  if (id == FieldId::rotated_r && win.y_lo <= 0.0 && 0.0 <= win.y_hi) zrange = {std::max(win.x_lo, 0.0), win.x_hi};
  if (id == FieldId::completed_r && win.x_lo <= 0.5 && 0.5 <= win.x_hi && win.y_hi > 0.0)
    zrange = {std::max(win.y_lo, 0.0), win.y_hi};
  if (zrange && zrange->second > zrange->first) {
    const auto zz = z_zeros(zrange->first, zrange->second);
    std::vector<double> xs;
    for (double x : crossing_positions(c, id))
      if (x > zrange->first) xs.push_back(x);
    const double cell = id == FieldId::rotated_r ? (win.x_hi - win.x_lo) / nx : (win.y_hi - win.y_lo) / ny;
    double dev = 0.0;
    ok = xs.size() == zz.size();
    if (ok)
      for (std::size_t i = 0; i < xs.size(); ++i) dev = std::max(dev, std::abs(xs[i] - zz[i]));
    ok = ok && dev <= cell;
    j["z_sign_changes"] = zz.size();
    j["axis_crossings"] = xs.size();
    j["max_deviation"] = dev;
    j["crossings_match"] = ok;
  }
  const json out = with_header(j);
  write_file(dir / "xray.json", out.dump(2) + "\n");
  emit(out);
  return ok ? 0 : kExitCheck;
}

// ---- pair ------------------------------------------------------------------

struct PairOpts {
  long band = -1;
  std::string window;
};

int cmd_pair(const PairOpts& o) {
  PairingReport rep;
  if (!o.window.empty()) {
    const auto w = parse_list(o.window);
    if (w.size() != 2) throw DomainError("--window needs t0,t1");
    // Direct scan of the window; no store involved.
    const BandScan s = scan_rectangle({left_edge(w[1]), kRightEdge, w[0], w[1]});
    if (!s.complete()) throw CoverageError("window scan incomplete");
    const double pad = 2.0 * mean_z_gap(w[1]);
    rep = pair_zeros(s.zeros, z_zeros(std::max(0.0, w[0] - pad), w[1] + pad), w[0], w[1]);
  } else {
    if (o.band < 0) throw DomainError("pair: give --band or --window");
    ZeroStore store(g.store, g.seed);
    rep = pair_with_z_zeros(store, o.band);
  }
  emit(with_header(rep.to_json()));
  say("R zeros " + std::to_string(rep.r_zeros) + ", Z zeros " + std::to_string(rep.z_zeros) + ", flanked " +
      std::to_string(rep.fraction_flanked()));
  return 0;
}

// ---- report ----------------------------------------------------------------

struct ReportOpts {
  std::string out = "report-out";
};

int cmd_report(const ReportOpts& o) {
  ZeroStore store(g.store, g.seed);
  json j;
  const ConstantsResult c = constants_suite();
  j["constants"] = c.to_json();
  const double inf = std::numeric_limits<double>::infinity();
  const double T = store.covered_height(-inf, inf);
  j["covered_height"] = T;
  j["records"] = store.records().size();
  bool ok = c.pass();
  std::ostringstream md;
  md << "<!-- " << header_line() << " -->\n\n# raux report\n\n";
  md << "Constants: " << (c.pass() ? "all reproduced" : "MISMATCH") << "\n\n";
  if (T > 2.0 * kTwoPi) {
    const auto rc = r_count_asymptotic_check(store, T);
    const auto zc = z_count_asymptotic_check(T);
    j["r_count"] = rc.to_json();
    j["z_count"] = zc.to_json();
    md << "Zeros of R up to T = " << T << ": " << rc.lhs << " (main term " << rc.rhs << ")\n\n";
    md << "Sign changes of Z up to T: " << zc.lhs << " (main term " << zc.rhs << ")\n\n";
    ok = ok && rc.pass && zc.pass;
    std::vector<double> Ts;
    for (long K = 2; kTwoPi * double(K) * K <= T; ++K) Ts.push_back(kTwoPi * double(K) * K);
    if (store.covers({0.5, 1.0, 0.0, Ts.back()})) {
      const DensityTable tab = density_table(store, {0.55, 0.6, 0.7, 0.8}, Ts);
      j["density"] = tab.summary();
      md << "## N(alpha, T) / (T^(3/2-alpha) (log T)^3)\n\n" << tab.to_markdown() << "\n";
      write_file(fs::path(o.out) / "density.csv", "# " + header_line() + "\n" + tab.to_csv());
    }
  } else {
    md << "Store covers no full band; zero statistics skipped.\n";
  }
  j["pass"] = ok;
  write_file(fs::path(o.out) / "report.json", with_header(j).dump(2) + "\n");
  write_file(fs::path(o.out) / "report.md", md.str());
  emit(with_header(j));
  return ok ? 0 : kExitCheck;
}

// ---- calibrate -------------------------------------------------------------

struct CalibrateOpts {
  int samples = 20000;
  double t_max = 5e4;
  std::string out;
};

int cmd_calibrate(const CalibrateOpts& o) {
  const Calibration c = run_calibration(o.samples, g.seed, o.t_max);
  if (!o.out.empty()) write_file(o.out, c.serialize());
  emit(with_header({{"version", c.version},
                    {"sum_remainder_c", c.sum_remainder_c},
                    {"corrected_remainder_c", c.corrected_remainder_c},
                    {"written", o.out}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"raux: zeros and inequalities for the auxiliary function R(s)"};
  app.set_config("--config", "", "TOML file mirroring the flags; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--jobs,-j", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--store", g.store, "zero store directory");
  app.add_flag("--quiet,-q", g.quiet, "no human summary on stderr");

  std::function<int()> run;

  EvalOpts eo;
  auto* eval = app.add_subcommand("eval", "evaluate R(s)");
  eval->add_option("s", eo.s, "s as sigma+ti")->required();
  eval->add_option("--method", eo.method)->check(CLI::IsMember({"auto", "sum", "integral", "corrected"}));
  eval->callback([&] { run = [&] { return cmd_eval(eo); }; });

  auto* zeros = app.add_subcommand("zeros", "zero store operations");
  zeros->require_subcommand(1);
  ScanOpts so;
  auto* scan = zeros->add_subcommand("scan", "scan bands (or a rectangle) into the store");
  scan->add_option("--bands", so.bands, "K or K1..K2");
  scan->add_option("--rect", so.rect, "sigma_lo,sigma_hi,t_lo,t_hi");
  scan->add_option("--alpha", so.alphas, "extra vertical grid lines, comma separated");
  scan->add_flag("--force", so.force, "rescan bands already in the store");
  scan->callback([&] { run = [&] { return cmd_zeros_scan(so); }; });
  auto* compact = zeros->add_subcommand("compact", "rewrite the store sorted, one header");
  compact->callback([&] { run = [] { return cmd_zeros_compact(); }; });

  CountOpts co;
  auto* count = app.add_subcommand("count", "N(alpha, T) by winding numbers");
  count->add_option("--alpha", co.alpha)->required();
  count->add_option("--T", co.T)->required()->check(CLI::PositiveNumber);
  count->callback([&] { run = [&] { return cmd_count(co); }; });

  DensityOpts dop;
  auto* density = app.add_subcommand("density", "N(alpha, T) table from the store");
  density->add_option("--alphas", dop.alphas);
  density->add_option("--Ts", dop.Ts, "heights, comma separated");
  density->add_option("--bands", dop.bands, "use T = 2 pi K^2 for K1..K2");
  density->add_option("--out", dop.out);
  density->callback([&] { run = [&] { return cmd_density(dop); }; });

  VerifyOpts vo;
  auto* verify = app.add_subcommand("verify", "constants and randomized inequality suites");
  std::vector<std::string> suite_names{"all", "constants"};
  for (const auto& n : inequality_suite_names()) suite_names.push_back(n);
  verify->add_option("--suite", vo.suite)->check(CLI::IsMember(suite_names));
  verify->add_option("--trials", vo.trials)->check(CLI::PositiveNumber);
  verify->callback([&] { run = [&] { return cmd_verify(vo); }; });

  XrayOpts xo;
  auto* xray = app.add_subcommand("xray", "curves Re f = 0 and Im f = 0");
  xray->add_option("--field", xo.field)->check(CLI::IsMember({"rotated", "completed", "rotated_r", "completed_r"}));
  xray->add_option("--window", xo.window, "x0,x1,y0,y1")->required();
  xray->add_option("--res", xo.res, "nx,ny (cells)");
  xray->add_option("--out", xo.out);
  xray->callback([&] { run = [&] { return cmd_xray(xo); }; });

  PairOpts po;
  auto* pair = app.add_subcommand("pair", "pair zeros of R with sign changes of Z");
  pair->add_option("--band", po.band);
  pair->add_option("--window", po.window, "t0,t1 (scanned directly)");
  pair->callback([&] { run = [&] { return cmd_pair(po); }; });

  ReportOpts ro;
  auto* report = app.add_subcommand("report", "summary of constants and stored zeros");
  report->add_option("--out", ro.out);
  report->callback([&] { run = [&] { return cmd_report(ro); }; });

  CalibrateOpts cao;
  auto* calibrate = app.add_subcommand("calibrate", "refit the error constants of the fast evaluator");
  calibrate->add_option("--samples", cao.samples)->check(CLI::PositiveNumber);
  calibrate->add_option("--t-max", cao.t_max);
  calibrate->add_option("--out", cao.out, "write a calibration file here");
  calibrate->callback([&] { run = [&] { return cmd_calibrate(cao); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }
  try {
    return run();
  } catch (const CoverageError& e) {
    std::cerr << "coverage: " << e.what() << "\n";
    return kExitCoverage;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence: " << e.what() << "\n";
    return kExitCoverage;
  } catch (const BoundaryZeroError& e) {
    std::cerr << "boundary zero: " << e.what() << "\n";
    return kExitCoverage;
  } catch (const DomainError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCoverage;
  }
}
