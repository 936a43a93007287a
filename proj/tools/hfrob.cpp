// Command-line driver: plan -> basis -> matrix -> bounds -> zeta.

#include "hfrob/errors.hpp"
#include "hfrob/frobenius.hpp"
#include "hfrob/geometry.hpp"
#include "hfrob/groebner.hpp"
#include "hfrob/precision.hpp"
#include "hfrob/reduction.hpp"
#include "hfrob/spectral.hpp"
#include "hfrob/zeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hfrob;

namespace {

enum Exit {
  kOk = 0,
  kInternal = 1,
  kInput = 2,
  kSingular = 3,
  kPrecision = 4,
  kCap = 5,
  kMemory = 6,
  kVerification = 7,
};

const std::vector<std::string> kModes = {"plan", "basis", "matrix", "bounds", "zeta", "full"};

struct Config {
  std::string problem_path;
  std::string mode;
  int precision = 0;
  int prescreen = 0;
  int workers = 1;
  std::string cache_dir;
  int imax = 0;
  std::string report_path;
  std::string matrix_out;
  std::string matrix_in;
  double memory_limit_mb = 4096;
  double count_cap = 4294967296.0;
  bool json_stdout = false;
  bool inline_matrix = false;
  u64 p = 0;
  int n = 0;
};

int mode_rank(const std::string& m) {
  for (std::size_t i = 0; i < kModes.size(); ++i)
    if (kModes[i] == m) return static_cast<int>(i);
  return -1;
}

class Clock {
 public:
  Clock() : wall_(std::chrono::steady_clock::now()), cpu_(std::clock()) {}
  json lap() {
    auto w = std::chrono::steady_clock::now();
    std::clock_t c = std::clock();
    json j = {{"wall_seconds", std::chrono::duration<double>(w - wall_).count()},
              {"cpu_seconds", static_cast<double>(c - cpu_) / CLOCKS_PER_SEC}};
    wall_ = w;
    cpu_ = c;
    return j;
  }

 private:
  std::chrono::steady_clock::time_point wall_;
  std::clock_t cpu_;
};

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string spec_hash(const HypersurfaceSpec& spec) {
  std::ostringstream os;
  os << spec.p << "|" << spec.n << "|" << to_string(spec.lift);
  std::ostringstream hex;
  hex << std::hex << fnv1a(os.str());
  return hex.str();
}

std::string precision_label(const FrobMatrix& M) {
  std::string s = "mod " + std::to_string(M.p) + "^" + std::to_string(M.r);
  return M.heuristic ? s + " (heuristic)" : s;
}

json plan_json(const FrobeniusSetup& st, const PrecisionPlan& f0_plan) {
  json j;
  j["r"] = st.plan.r;
  j["s"] = st.plan.s;
  j["j_max"] = st.plan.j_max;
  j["s_f0_only"] = f0_plan.s;
  j["refined"] = st.plan.refined;
  j["loss_table"] = st.plan.table.values();
  j["working_exponent"] = st.w;
  j["top_pole"] = st.top_pole;
  j["heuristic"] = st.heuristic;
  return j;
}

StrongGB cached_gb(const HypersurfaceSpec& spec, int w, const std::string& cache_dir) {
  const int max_degree = socle_degree(spec.n, spec.d);
  const std::string key = gb_cache_key(spec, w, max_degree);
  std::string path;
  if (!cache_dir.empty()) {
    fs::create_directories(cache_dir);
    path = (fs::path(cache_dir) / ("gb-" + key + ".txt")).string();
    if (auto gb = load_gb(path, key)) {
      std::cerr << "groebner basis loaded from cache\n";
      return *gb;
    }
  }
  StrongGB gb = strong_groebner(spec, w, max_degree);
  if (!path.empty()) save_gb(path, gb, key);
  return gb;
}

u64 cached_count(const HypersurfaceSpec& spec, int i, const Config& cfg) {
  std::string path;
  if (!cfg.cache_dir.empty()) {
    fs::create_directories(cfg.cache_dir);
    path = (fs::path(cfg.cache_dir) / ("count-" + spec_hash(spec) + "-" + std::to_string(i) + ".txt")).string();
    std::ifstream is(path);
    u64 v = 0;
    if (is >> v) return v;
  }
  CountOptions opt;
  opt.workers = cfg.workers;
  opt.cap = static_cast<u64>(cfg.count_cap);
  u64 c = count_points(spec, i, opt);
  if (!path.empty()) {
    std::ofstream os(path + ".tmp");
    os << c << "\n";
    os.close();
    fs::rename(path + ".tmp", path);
  }
  return c;
}

json bounds_json(const FrobMatrix& M, const TateBoundReport& rep, int arith) {
  json j;
  j["precision"] = precision_label(M);
  j["status"] = M.heuristic ? "heuristic - insufficient certified precision" : "certified";
  j["arithmetic_picard_bound"] = arith;
  j["geometric_picard_bound"] = rep.geometric;
  j["b2"] = rep.b2;
  j["mixed_bound"] = rep.mixed_bound;
  j["ord_bound_raw"] = rep.ord_bound_raw;
  j["ord_bound"] = rep.ord_bound;
  j["parity"] = rep.parity_adjusted ? "ord bound lowered by 1 to match the parity of b2" : "no adjustment";
  j["normalized_charpoly_precision"] = rep.normalized_precision;
  if (!rep.normalized_note.empty()) j["normalized_charpoly_note"] = rep.normalized_note;
  json levels = json::array();
  for (const auto& l : rep.levels) {
    json e;
    e["n"] = l.n;
    e["phi"] = l.phi;
    e["bound"] = l.bound;
    e["integral_bound"] = l.integral_bound;
    e["normalized_bound"] = l.normalized_bound;
    if (l.corank >= 0) e["corank"] = l.corank;
    e["method"] = l.method;
    levels.push_back(e);
  }
  j["levels"] = levels;
  return j;
}

void print_summary(const json& r) {
  std::cout << "status: " << r.value("status", "?") << "\n";
  if (r.contains("problem"))
    std::cout << "hypersurface: degree " << r["problem"]["d"] << " in P^" << r["problem"]["n"] << " over F_"
              << r["problem"]["p"] << "\n";
  if (r.contains("plan")) {
    const auto& pl = r["plan"];
    std::cout << "plan: r=" << pl["r"] << " s=" << pl["s"] << " (f0 only: " << pl["s_f0_only"] << ")";
    if (pl.contains("working_exponent")) std::cout << ", working modulus p^" << pl["working_exponent"];
    std::cout << "\n";
  }
  if (r.contains("basis"))
    std::cout << "basis: D=" << r["basis"]["dimension"] << " profile " << r["basis"]["hodge_profile"].dump() << "\n";
  if (r.contains("matrix"))
    std::cout << "matrix: " << r["matrix"]["precision"].get<std::string>() << ", trace " << r["matrix"]["trace"]
              << ", rank mod p " << r["matrix"]["rank_mod_p"] << "\n";
  if (r.contains("bounds")) {
    const auto& b = r["bounds"];
    std::cout << "arithmetic Picard bound: " << b["arithmetic_picard_bound"] << " [" << b["status"].get<std::string>()
              << "]\n";
    std::cout << "geometric Picard bound: " << b["geometric_picard_bound"] << " (b2=" << b["b2"] << ")\n";
  }
  if (r.contains("zeta"))
    for (const auto& v : r["zeta"]["verdicts"])
      std::cout << "count F_p^" << v["i"] << ": " << v["count"] << " " << (v["ok"].get<bool>() ? "consistent" : "MISMATCH")
                << " mod p^" << v["precision"] << "\n";
  if (r.contains("zeta") && r["zeta"].contains("stopped"))
    std::cout << "counting stopped: " << r["zeta"]["stopped"].get<std::string>() << "\n";
  if (r.contains("error"))
    std::cout << "error (" << r["error"]["type"].get<std::string>() << "): " << r["error"]["message"].get<std::string>()
              << "\n";
}

int run(const Config& cfg, json& report, json& timings) {
  Clock clock;
  const int stage = mode_rank(cfg.mode);
  if (stage < 0) throw InputError("unknown mode " + cfg.mode);

  std::optional<ProblemFile> problem;
  if (!cfg.problem_path.empty()) problem = parse_and_lift(read_file(cfg.problem_path));
  const int r = cfg.precision > 0 ? cfg.precision : (problem && problem->precision ? *problem->precision : 2);
  const int prescreen = cfg.prescreen > 0 ? cfg.prescreen : (problem && problem->prescreen ? *problem->prescreen : 0);
  if (r < 1) throw InputError("precision must be positive");

  if (!problem) {
    if (stage != 0 || cfg.p == 0 || cfg.n == 0) throw InputError("a problem file is required (or --p and --n for mode plan)");
    if (!is_prime(cfg.p)) throw InputError("p not prime");
    PrecisionPlan plan = choose_working_precision(r, cfg.n, cfg.p);
    PrecisionPlan f0_plan = choose_working_precision(r, cfg.n, cfg.p, false);
    report["plan"] = {{"p", cfg.p}, {"n", cfg.n}, {"r", plan.r}, {"s", plan.s}, {"j_max", plan.j_max},
                      {"s_f0_only", f0_plan.s}, {"refined", plan.refined}, {"loss_table", plan.table.values()}};
    report["status"] = "certified";
    timings["plan"] = clock.lap();
    return kOk;
  }

  const HypersurfaceSpec& spec = problem->spec;
  report["problem"] = {{"p", spec.p},
                       {"n", spec.n},
                       {"d", spec.d},
                       {"variables", spec.var_names},
                       {"polynomial", to_string(spec.P, spec.var_names)},
                       {"lift", to_string(spec.lift, spec.var_names)},
                       {"explicit_lift", spec.explicit_lift}};

  SmoothnessResult sm = check_smooth(spec);
  if (!sm.smooth) throw SingularHypersurface(sm.witness_degree, sm.quotient_dim);
  auto [basis, profile] = build_basis(spec);
  AssembleOptions aopt;
  aopt.workers = cfg.workers;
  aopt.s_override = prescreen;
  FrobeniusSetup setup = plan_frobenius(spec, basis, r, aopt);
  PrecisionPlan f0_plan = choose_working_precision(r, spec.n, spec.p, false);
  report["plan"] = plan_json(setup, f0_plan);
  const bool heuristic = setup.heuristic;
  report["status"] = heuristic ? "heuristic" : "certified";
  timings["plan"] = clock.lap();
  if (stage == 0) return kOk;

  json bj;
  bj["dimension"] = basis.dimension();
  bj["hodge_profile"] = profile.counts;
  json elems = json::array();
  for (const auto& b : basis.elements())
    elems.push_back(monomial_to_string(b.mono, spec.var_names) + " / P^" + std::to_string(b.pole));
  bj["elements"] = elems;
  report["basis"] = bj;
  timings["basis"] = clock.lap();
  if (stage == 1) return kOk;

  const double ws = static_cast<double>(reduction_workspace_bytes(spec.n, spec.d, setup.top_pole)) *
                    std::max(1, cfg.workers);
  report["estimates"] = {{"reduction_workspace_bytes", ws}, {"memory_limit_bytes", cfg.memory_limit_mb * 1048576.0}};

  FrobMatrix M;
  if (!cfg.matrix_in.empty()) {
    std::ifstream is(cfg.matrix_in);
    if (!is) throw InputError("cannot read " + cfg.matrix_in);
    M = read_matrix(is);
    if (M.p != spec.p || M.n != spec.n || M.D != basis.dimension())
      throw InputError("matrix file does not match the problem");
  } else {
    if (ws > cfg.memory_limit_mb * 1048576.0)
      throw MemoryBudgetExceeded("estimated reduction workspace " + std::to_string(static_cast<long>(ws / 1048576)) +
                                 " MB exceeds the limit; lower --workers, raise --memory-limit or run columns in batches");
    StrongGB gb = cached_gb(spec, setup.w, cfg.cache_dir);
    timings["groebner"] = clock.lap();
    ReductionTables tables(spec, basis, setup.w, &gb);
    timings["tables"] = clock.lap();
    M = assemble_matrix(spec, basis, setup, tables, aopt);
    timings["matrix"] = clock.lap();
  }
  json mj;
  mj["precision"] = precision_label(M);
  mj["convention"] = "Frobenius on primitive middle cohomology, p^-1 times the action on H^n of the complement";
  mj["shift"] = M.shift;
  if (M.shift > 0) mj["note"] = "entries are p^shift times the matrix, modulo p^(r + shift)";
  mj["certified_digits"] = M.certified;
  mj["heuristic"] = M.heuristic;
  mj["trace"] = trace_mod(M);
  mj["rank_mod_p"] = rank_mod_p(M);
  if (!cfg.matrix_out.empty()) {
    std::ofstream os(cfg.matrix_out);
    write_matrix(os, M, spec.var_names);
    mj["file"] = cfg.matrix_out;
  }
  if (cfg.inline_matrix || cfg.matrix_out.empty()) {
    json rows = json::array();
    for (std::size_t i = 0; i < M.D; ++i) {
      json row = json::array();
      for (std::size_t k = 0; k < M.D; ++k) row.push_back(M.at(i, k));
      rows.push_back(row);
    }
    mj["entries"] = rows;
  }
  report["matrix"] = mj;
  if (stage == 2) return kOk;

  const ResidueMatrix A = to_residue_matrix(M);
  if (stage == 3 || stage == 5) {
    UniPoly C = charpoly_mod(A);
    json cj;
    cj["of"] = M.shift > 0 ? "p^shift M" : "M";
    cj["precision"] = "mod " + std::to_string(M.p) + "^" + std::to_string(M.r + M.shift) +
                      (M.heuristic ? " (heuristic)" : "");
    cj["coefficients_ascending"] = C.coeffs();
    report["charpoly"] = cj;
    if (spec.n == 3) {
      int arith = arithmetic_picard_bound(M);
      TateBoundReport rep = geometric_picard_bound(M);
      report["bounds"] = bounds_json(M, rep, arith);
    }
    timings["bounds"] = clock.lap();
  }
  if (stage == 3) return kOk;

  // point counts and trace consistency
  const int imax = cfg.imax > 0 ? cfg.imax : (problem->imax ? *problem->imax : 3);
  std::vector<u64> counts;
  std::string stopped;
  for (int i = 1; i <= imax; ++i) {
    try {
      counts.push_back(cached_count(spec, i, cfg));
    } catch (const CapExceeded& e) {
      if (counts.empty()) throw;
      stopped = e.what();
      break;
    }
  }
  timings["counts"] = clock.lap();
  json zj;
  zj["counts"] = counts;
  if (!stopped.empty()) zj["stopped"] = stopped;
  json verdicts = json::array();
  bool all_ok = true;
  for (const auto& v : trace_consistency(M, counts)) {
    verdicts.push_back({{"i", v.i}, {"count", v.count}, {"predicted_mod", v.predicted}, {"precision", v.precision},
                        {"ok", v.ok}});
    all_ok = all_ok && v.ok;
  }
  zj["verdicts"] = verdicts;
  if (spec.n == 2) {
    const int g = (spec.d - 1) * (spec.d - 2) / 2;
    if (static_cast<int>(counts.size()) >= g) {
      auto expect = curve_charpoly_from_counts(spec.p, g, counts);
      UniPoly C = charpoly_mod(A);
      bool same = C.degree() == 2 * g;
      std::vector<std::string> ex;
      for (int k = 0; k <= 2 * g; ++k) {
        ex.push_back(expect[k].str());
        same = same && C.coeff(k) == A.ring.from_big(expect[k]);
      }
      zj["curve_charpoly_from_counts"] = ex;
      zj["curve_charpoly_matches"] = same;
      all_ok = all_ok && same;
    }
  }
  report["zeta"] = zj;
  if (!all_ok && !heuristic) return kVerification;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  if (const char* env = std::getenv("HFROB_CACHE_DIR")) cfg.cache_dir = env;
  CLI::App app{"Certified Frobenius matrices and Picard number bounds for smooth hypersurfaces"};
  app.add_option("problem", cfg.problem_path, "problem file (JSON)");
  app.add_option("--mode", cfg.mode, "plan, basis, matrix, bounds, zeta or full")
      ->check(CLI::IsMember(kModes));
  app.add_option("--precision,-r", cfg.precision, "target precision r (matrix mod p^r)");
  app.add_option("--prescreen", cfg.prescreen, "truncate at this s instead of the certified one; output is heuristic");
  app.add_option("--workers,-j", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", cfg.cache_dir, "cache directory (default $HFROB_CACHE_DIR)");
  app.add_option("--imax", cfg.imax, "count points over F_p^i for i <= imax");
  app.add_option("--report", cfg.report_path, "write the JSON report here");
  app.add_option("--matrix-out", cfg.matrix_out, "write the matrix artifact here");
  app.add_option("--matrix-in", cfg.matrix_in, "read the matrix instead of computing it");
  app.add_option("--memory-limit", cfg.memory_limit_mb, "reduction workspace limit in MB");
  app.add_option("--count-cap", cfg.count_cap, "largest p^(i n) allowed for point counting");
  app.add_option("--p", cfg.p, "prime (mode plan without a problem file)");
  app.add_option("--n", cfg.n, "projective dimension (mode plan without a problem file)");
  app.add_flag("--json", cfg.json_stdout, "print the JSON report instead of the summary");
  app.add_flag("--inline-matrix", cfg.inline_matrix, "include matrix entries in the report");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }
  if (cfg.mode.empty()) cfg.mode = "full";

  json report;
  report["tool"] = "hfrob";
  report["format"] = 1;
  report["mode"] = cfg.mode;
  json timings;
  int code = kOk;
  auto fail = [&](int c, const char* type, const std::string& msg) {
    code = c;
    report["status"] = "error";
    report["error"] = {{"type", type}, {"message", msg}};
  };
  try {
    if (!cfg.problem_path.empty() && cfg.mode == "full" && cfg.precision == 0) {
      // a mode in the problem file applies when none was given on the command line
      ProblemFile pf = parse_and_lift(read_file(cfg.problem_path));
      if (pf.mode && app.count("--mode") == 0) {
        if (mode_rank(*pf.mode) < 0) throw InputError("unknown mode " + *pf.mode);
        cfg.mode = *pf.mode;
        report["mode"] = cfg.mode;
      }
    }
    code = run(cfg, report, timings);
    if (code == kVerification) fail(code, "verification", "point counts disagree with the Frobenius matrix");
  } catch (const InputError& e) {
    fail(kInput, "input", e.what());
  } catch (const ParseError& e) {
    fail(kInput, "input", e.what());
  } catch (const nlohmann::json::exception& e) {
    fail(kInput, "input", e.what());
  } catch (const SingularHypersurface& e) {
    fail(kSingular, "singular", e.what());
  } catch (const PrecisionExhausted& e) {
    fail(kPrecision, "precision_exhausted", e.what());
  } catch (const CapExceeded& e) {
    fail(kCap, "cap_exceeded", e.what());
  } catch (const MemoryBudgetExceeded& e) {
    fail(kMemory, "memory", e.what());
  } catch (const std::bad_alloc&) {
    fail(kMemory, "memory", "out of memory");
  } catch (const std::exception& e) {
    fail(kInternal, "internal", e.what());
  }
  report["exit_code"] = code;
  report["timings"] = timings;
  if (!cfg.report_path.empty()) {
    std::ofstream os(cfg.report_path);
    os << report.dump(2) << "\n";
  }
  if (cfg.json_stdout)
    std::cout << report.dump(2) << "\n";
  else
    print_summary(report);
  return code;
}
