#include "wgf/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "wgf/errors.hpp"

namespace wgf {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Parser {
  std::vector<std::string> errors;

  bool parse_double(const std::string& key, const std::string& v,
                    std::optional<double>& out) {
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty() || !std::isfinite(d)) {
      errors.push_back(key + ": expected a finite number, got '" + v + "'");
      return false;
    }
    out = d;
    return true;
  }
  bool parse_int(const std::string& key, const std::string& v,
                 std::optional<int>& out) {
    int i = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), i);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      errors.push_back(key + ": expected an integer, got '" + v + "'");
      return false;
    }
    out = i;
    return true;
  }
  bool parse_u64(const std::string& key, const std::string& v,
                 std::optional<std::uint64_t>& out) {
    std::uint64_t i = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), i);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
      errors.push_back(key + ": expected a nonnegative integer, got '" + v +
                       "'");
      return false;
    }
    out = i;
    return true;
  }
  bool parse_bool(const std::string& key, const std::string& v,
                  std::optional<bool>& out) {
    if (v == "true" || v == "1" || v == "on") {
      out = true;
      return true;
    }
    if (v == "false" || v == "0" || v == "off") {
      out = false;
      return true;
    }
    errors.push_back(key + ": expected true/false, got '" + v + "'");
    return false;
  }
};

}  // namespace

ParseResult parse_config(const std::string& text) {
  RunConfig rc;
  Parser p;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.errors.push_back("line " + std::to_string(lineno) +
                         ": expected 'key = value'");
      continue;
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) {
      p.errors.push_back("line " + std::to_string(lineno) + ": empty key");
      continue;
    }

    if (key == "preset") {
      rc.preset = val;
    } else if (key == "grid.n") {
      p.parse_int(key, val, rc.grid_n);
    } else if (key == "grid.h") {
      p.parse_double(key, val, rc.grid_h);
    } else if (key == "time.dt") {
      p.parse_double(key, val, rc.dt);
    } else if (key == "time.t_end") {
      p.parse_double(key, val, rc.t_end);
    } else if (key == "time.snapshot_every") {
      p.parse_int(key, val, rc.snapshot_every);
    } else if (key == "solver.tau") {
      p.parse_double(key, val, rc.tau);
    } else if (key == "solver.sigma") {
      p.parse_double(key, val, rc.sigma);
    } else if (key == "solver.tolerance") {
      p.parse_double(key, val, rc.tolerance);
    } else if (key == "solver.iter_max") {
      p.parse_int(key, val, rc.iter_max);
    } else if (key == "solver.check_stepsize") {
      p.parse_bool(key, val, rc.check_stepsize);
    } else if (key == "solver.cold_start") {
      p.parse_bool(key, val, rc.cold_start);
    } else if (key == "solver.convex_splitting") {
      p.parse_bool(key, val, rc.convex_splitting);
    } else if (key == "mobility.mode") {
      if (val != "implicit" && val != "semi_implicit")
        p.errors.push_back("mobility.mode: expected implicit or "
                           "semi_implicit, got '" + val + "'");
      else
        rc.mobility_mode = val;
    } else if (key == "box.lower") {
      p.parse_double(key, val, rc.box_lower);
    } else if (key == "box.upper") {
      p.parse_double(key, val, rc.box_upper);
    } else if (key == "output.dir") {
      rc.output_dir = val;
    } else if (key == "output.format") {
      if (val != "csv" && val != "binary")
        p.errors.push_back("output.format: expected csv or binary, got '" +
                           val + "'");
      else
        rc.output_format = val;
    } else if (key == "seed") {
      p.parse_u64(key, val, rc.seed);
    } else {
      p.errors.push_back("unknown key '" + key + "'");
    }
  }

  // validation against invariants, collecting every violation
  if (rc.preset.empty()) {
    p.errors.push_back("missing preset");
  } else {
    const auto& names = preset_names();
    if (std::find(names.begin(), names.end(), rc.preset) == names.end())
      p.errors.push_back("unknown preset '" + rc.preset + "'");
  }
  if (rc.grid_n && rc.grid_h)
    p.errors.push_back("grid.n and grid.h are mutually exclusive");
  if (rc.grid_n && *rc.grid_n < 1) p.errors.push_back("grid.n: must be >= 1");
  if (rc.grid_h && *rc.grid_h <= 0) p.errors.push_back("grid.h: must be > 0");
  if (rc.dt && *rc.dt <= 0) p.errors.push_back("time.dt: must be > 0");
  if (rc.t_end && *rc.t_end < 0)
    p.errors.push_back("time.t_end: must be >= 0");
  if (rc.snapshot_every && *rc.snapshot_every < 1)
    p.errors.push_back("time.snapshot_every: must be >= 1");
  if (rc.tau && *rc.tau <= 0) p.errors.push_back("solver.tau: must be > 0");
  if (rc.sigma && *rc.sigma <= 0)
    p.errors.push_back("solver.sigma: must be > 0");
  if (rc.tolerance && *rc.tolerance <= 0)
    p.errors.push_back("solver.tolerance: must be > 0");
  if (rc.iter_max && *rc.iter_max < 1)
    p.errors.push_back("solver.iter_max: must be >= 1");
  if (rc.box_lower && rc.box_upper && !(*rc.box_lower < *rc.box_upper))
    p.errors.push_back("box: lower must be strictly below upper");

  ParseResult out;
  out.errors = std::move(p.errors);
  if (out.errors.empty()) out.config = std::move(rc);
  return out;
}

ResolvedRun resolve_run(const RunConfig& rc) {
  ResolvedRun run;
  run.preset = load_preset(rc.preset);
  const Preset& ps = run.preset;

  run.mode = MobilityMode::Implicit;
  if (rc.mobility_mode && *rc.mobility_mode == "semi_implicit") {
    if (!ps.semi_implicit_available)
      throw DomainError("preset '" + ps.name +
                        "': semi-implicit mobility not available");
    run.mode = MobilityMode::SemiImplicit;
  }
  const bool semi = run.mode == MobilityMode::SemiImplicit;

  if (rc.grid_n)
    run.grid = ps.make_grid_n(*rc.grid_n);
  else if (rc.grid_h)
    run.grid = ps.make_grid_h(*rc.grid_h);
  else
    run.grid = ps.make_grid();

  run.loop = ps.loop;
  if (semi && ps.semi_dt > 0.0) run.loop.dt = ps.semi_dt;
  if (rc.dt) run.loop.dt = *rc.dt;
  if (rc.t_end) run.loop.t_end = *rc.t_end;
  if (rc.snapshot_every) run.loop.snapshot_every = *rc.snapshot_every;

  run.solver = ps.solver;
  if (semi && ps.semi_tau > 0.0) run.solver.tau = ps.semi_tau;
  if (semi && ps.semi_sigma > 0.0) run.solver.sigma = ps.semi_sigma;
  if (rc.tau) {
    run.solver.tau = *rc.tau;
    run.solver.sigma = 1.0 / *rc.tau;  // default pairing unless sigma is set
  }
  if (rc.sigma) run.solver.sigma = *rc.sigma;
  if (rc.tolerance) run.solver.tolerance = *rc.tolerance;
  if (rc.iter_max) run.solver.iter_max = *rc.iter_max;
  if (rc.check_stepsize) run.solver.check_stepsize = *rc.check_stepsize;
  if (rc.cold_start) run.solver.cold_start = *rc.cold_start;
  if (rc.convex_splitting) run.solver.convex_splitting = *rc.convex_splitting;

  BoxBounds box = ps.box;
  if (rc.box_lower) box.lo = *rc.box_lower;
  if (rc.box_upper) box.hi = *rc.box_upper;
  if (!(box.lo < box.hi))
    throw DomainError("resolve_run: box lower bound must be below upper");

  run.output_dir = rc.output_dir.value_or("");
  run.output_format = rc.output_format.value_or("csv");
  run.seed = rc.seed.value_or(ps.default_seed);

  run.problem = ps.make_problem(run.grid, run.mode, box);
  run.rho0 = ps.initial(run.grid, run.seed);
  return run;
}

std::string dump_config(const ResolvedRun& run) {
  std::ostringstream os;
  os << "preset = " << run.preset.name << "\n";
  os << "grid.n = " << run.grid.n << "\n";
  os << "time.dt = " << format_double(run.loop.dt) << "\n";
  os << "time.t_end = " << format_double(run.loop.t_end) << "\n";
  os << "time.snapshot_every = " << run.loop.snapshot_every << "\n";
  os << "solver.tau = " << format_double(run.solver.tau) << "\n";
  os << "solver.sigma = " << format_double(run.solver.sigma) << "\n";
  os << "solver.tolerance = " << format_double(run.solver.tolerance) << "\n";
  os << "solver.iter_max = " << run.solver.iter_max << "\n";
  os << "solver.check_stepsize = "
     << (run.solver.check_stepsize ? "true" : "false") << "\n";
  os << "solver.cold_start = " << (run.solver.cold_start ? "true" : "false")
     << "\n";
  os << "solver.convex_splitting = "
     << (run.solver.convex_splitting ? "true" : "false") << "\n";
  os << "mobility.mode = "
     << (run.mode == MobilityMode::SemiImplicit ? "semi_implicit"
                                                : "implicit")
     << "\n";
  os << "box.lower = " << format_double(run.problem.box.lo) << "\n";
  os << "box.upper = " << format_double(run.problem.box.hi) << "\n";
  if (!run.output_dir.empty()) os << "output.dir = " << run.output_dir << "\n";
  os << "output.format = " << run.output_format << "\n";
  os << "seed = " << run.seed << "\n";
  return os.str();
}

}  // namespace wgf
