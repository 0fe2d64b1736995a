// Command-line front end: check, cycles, displacement, verify, portrait.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 hypothesis
// violation, 3 verification discrepancy.
#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pwlc/analytic.hpp"
#include "pwlc/cycles.hpp"
#include "pwlc/families.hpp"
#include "pwlc/hypotheses.hpp"
#include "pwlc/io.hpp"
#include "pwlc/oracle.hpp"
#include "pwlc/parallel.hpp"
#include "pwlc/portrait.hpp"

namespace pwlc::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kHypothesis = 2, kDiscrepancy = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

/// Options after merging the config file and the flags (flags win).
struct RunConfig {
  SystemDescriptor system;
  double y_lo = 0.0;
  double y_hi = 0.0;
  double step = 1e-4;
  double tol = 1e-10;          // root tolerance
  double verify_tol = 1e-6;    // oracle-vs-analytic tolerance
  int points = 100;            // displacement / verify grid
  int grid_points = 4096;      // hypothesis grid
  int k_max = 5;               // oscillatory family-aware enumeration
  int iters = 30;              // return-map iterations for stability
  int turns = 3;               // portrait
  bool skip_check = false;
  std::string format = "csv";
  std::string out;
  std::string csv_out;
  std::vector<double> window;  // portrait x_min x_max y_min y_max
};

/// Raw flag values; unset flags keep their optional empty.
struct Flags {
  std::string config;
  std::optional<double> gamma, alpha, step, tol, verify_tol;
  std::optional<int> n, points, grid_points, k_max, iters, turns;
  std::optional<std::string> family, format, out, csv_out;
  std::vector<double> range, window;
  bool skip_check = false;
};

namespace detail {

inline void default_range(RunConfig& c) {
  const auto& b = c.system.boundary;
  switch (b.family) {
    case FamilyKind::sine:
    case FamilyKind::cosine:
      c.y_lo = 0.1;
      c.y_hi = 2.0 * b.n + 2.0;
      break;
    case FamilyKind::oscillatory:
      c.y_lo = 0.5 * oscillatory_root(c.k_max);
      c.y_hi = 1.0;
      break;
    case FamilyKind::table:
      c.y_hi = b.samples.size() > 1 ? b.samples.back().y : 4.0;
      c.y_lo = 0.01 * c.y_hi;
      break;
    default:
      c.y_lo = 0.1;
      c.y_hi = 4.0;
  }
}

inline RunConfig merge(const Flags& f) {
  RunConfig c;
  json file = json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw UsageError("cannot open config file '" + f.config + "'");
    try {
      in >> file;
    } catch (const json::exception& e) {
      throw UsageError(std::string("config file is not valid JSON: ") + e.what());
    }
  }

  bool gamma_set = false;
  if (file.contains("gamma")) {
    c.system = system_from_json(file);
    gamma_set = true;
  } else if (file.contains("boundary")) {
    c.system.boundary = boundary_from_json(file.at("boundary"));
  }
  try {
    if (file.contains("range")) {
      c.y_lo = file.at("range").at(0).get<double>();
      c.y_hi = file.at("range").at(1).get<double>();
    }
    c.step = file.value("step", c.step);
    c.tol = file.value("tol", c.tol);
    c.verify_tol = file.value("verify_tol", c.verify_tol);
    c.points = file.value("points", c.points);
    c.grid_points = file.value("grid_points", c.grid_points);
    c.k_max = file.value("k_max", c.k_max);
    c.iters = file.value("iters", c.iters);
    c.turns = file.value("turns", c.turns);
    c.format = file.value("format", c.format);
    c.out = file.value("out", c.out);
    c.csv_out = file.value("csv_out", c.csv_out);
    if (file.contains("window")) c.window = file.at("window").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed config file: ") + e.what());
  }

  if (f.family) {
    BoundaryDescriptor d;
    d.family = family_from_string(*f.family);
    if (d.family == FamilyKind::table || d.family == FamilyKind::custom) {
      throw UsageError("family '" + *f.family + "' can only be given through --config");
    }
    if (d.family == c.system.boundary.family) d = c.system.boundary;
    c.system.boundary = d;
  }
  auto& b = c.system.boundary;
  if (f.n) b.n = *f.n;
  if (f.alpha) b.alpha = *f.alpha;
  if (f.gamma) {
    c.system.gamma = *f.gamma;
    gamma_set = true;
  }
  if (!gamma_set && b.family == FamilyKind::oscillatory) c.system.gamma = 1.0;
  if ((b.family == FamilyKind::sine || b.family == FamilyKind::cosine) && b.n == 0) b.n = 1;
  if (b.family == FamilyKind::oscillatory && b.alpha == 0.0) {
    throw UsageError("the oscillatory family needs --alpha");
  }

  if (f.step) c.step = *f.step;
  if (f.tol) c.tol = *f.tol;
  if (f.verify_tol) c.verify_tol = *f.verify_tol;
  if (f.points) c.points = *f.points;
  if (f.grid_points) c.grid_points = *f.grid_points;
  if (f.k_max) c.k_max = *f.k_max;
  if (f.iters) c.iters = *f.iters;
  if (f.turns) c.turns = *f.turns;
  if (f.format) c.format = *f.format;
  if (f.out) c.out = *f.out;
  if (f.csv_out) c.csv_out = *f.csv_out;
  if (!f.window.empty()) c.window = f.window;
  c.skip_check = f.skip_check || file.value("skip_check", false);

  if (f.range.size() == 2) {
    c.y_lo = f.range[0];
    c.y_hi = f.range[1];
  }
  if (c.y_lo == 0.0 && c.y_hi == 0.0) default_range(c);
  if (!(c.y_lo > 0.0) || !(c.y_hi > c.y_lo)) throw UsageError("--range needs 0 < LO < HI");
  if (c.points < 2 || c.grid_points < 2) throw UsageError("grids need at least two points");
  if (c.k_max < 1 || c.iters < 1 || c.turns < 1) throw UsageError("counts must be positive");
  if (c.format != "csv" && c.format != "json") throw UsageError("--format must be csv or json");
  if (!c.window.empty() && c.window.size() != 4) throw UsageError("--window needs four numbers");
  return c;
}

// Writes to the --out file when given, else to `out`.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream(std::ostream& fallback) { return file_.is_open() ? file_ : fallback; }

 private:
  std::ofstream file_;
};

inline std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline IntegrationOptions integration_options(const RunConfig& c) {
  IntegrationOptions o;
  o.step = c.step;
  o.event_tol = std::min(1e-12, 0.5 * c.step);
  return o;
}

inline CycleOptions cycle_options(const RunConfig& c) {
  CycleOptions o;
  o.root_tol = c.tol;
  o.hypothesis_points = static_cast<std::size_t>(c.grid_points);
  o.skip_hypothesis_check = c.skip_check;
  return o;
}

inline CycleSearch search_cycles(const PWLSystem& system, const RunConfig& c) {
  if (system.boundary().family() == FamilyKind::oscillatory) {
    return enumerate_oscillatory_cycles(system, c.k_max, cycle_options(c));
  }
  return find_limit_cycles(system, c.y_lo, c.y_hi, cycle_options(c));
}

// Return-map perturbation for the cycle at index i: a quarter of the gap to
// the nearest neighbouring cycle (or to the origin).
inline double probe_eps(const std::vector<CycleReport>& cycles, std::size_t i) {
  double gap = cycles[i].y_star;
  if (i > 0) gap = std::min(gap, cycles[i].y_star - cycles[i - 1].y_star);
  if (i + 1 < cycles.size()) gap = std::min(gap, cycles[i + 1].y_star - cycles[i].y_star);
  return 0.25 * gap;
}

// ---------------------------------------------------------------------------
// Subcommands

inline int cmd_check(const RunConfig& c, std::ostream& out) {
  const PWLSystem system = make_system(c.system.gamma, c.system.boundary);
  const auto matrix = check_matrix_hypotheses(system.params());
  const auto report = check_boundary_hypotheses(
      system, geometric_grid(c.y_lo, c.y_hi, static_cast<std::size_t>(c.grid_points)));
  json j = {{"system", to_json(c.system)},
            {"matrix", {{"h1", matrix.h1}, {"h2", matrix.h2}}},
            {"report", to_json(report)},
            {"passed", report.passed()}};
  out << j.dump(2) << '\n';
  return report.passed() ? kOk : kHypothesis;
}

inline int cmd_cycles(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const PWLSystem system = make_system(c.system.gamma, c.system.boundary);
  CycleSearch search;
  try {
    search = search_cycles(system, c);
  } catch (const HypothesisRefusal& e) {
    err << "error: " << e.what() << '\n';
    out << to_json(e.report()).dump(2) << '\n';
    return kHypothesis;
  }
  if (search.continuum) {
    err << "notice: h vanishes on the whole range; the origin is a global center "
           "(a continuum of periodic orbits, no limit cycles)\n";
  }
  Sink sink(c.out);
  auto& os = sink.stream(out);
  if (c.format == "json") {
    json j = {{"system", to_json(c.system)},
              {"continuum", search.continuum},
              {"origin", to_string(classify_origin(system))},
              {"cycles", json::array()}};
    for (const auto& r : search.cycles) j["cycles"].push_back(to_json(r));
    os << j.dump(2) << '\n';
  } else {
    write_cycles_csv(os, search.cycles);
  }
  return kOk;
}

struct DisplacementRow {
  double y, h, analytic, numeric;
};

inline std::vector<DisplacementRow> displacement_scan(const PWLSystem& system, const RunConfig& c) {
  const auto ys = uniform_grid(c.y_lo, c.y_hi, static_cast<std::size_t>(c.points));
  std::vector<DisplacementRow> rows(ys.size());
  const auto opts = integration_options(c);
  parallel_for(ys.size(), [&](std::size_t i) {
    rows[i] = {ys[i], system.boundary().value(ys[i]), displacement(ys[i], system),
               numeric_displacement(system, ys[i], opts)};
  });
  return rows;
}

inline int cmd_displacement(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const PWLSystem system = make_system(c.system.gamma, c.system.boundary);
  const auto rows = displacement_scan(system, c);
  Sink sink(c.out);
  auto& os = sink.stream(out);
  os << "y,h,f_analytic,f_numeric,abs_diff\n";
  double worst = 0.0;
  for (const auto& r : rows) {
    const double d = std::abs(r.analytic - r.numeric);
    worst = std::max(worst, d);
    os << fmt12(r.y) << ',' << fmt12(r.h) << ',' << fmt12(r.analytic) << ',' << fmt12(r.numeric)
       << ',' << fmt12(d) << '\n';
  }
  err << "max |f_analytic - f_numeric| = " << worst << " over " << rows.size() << " points\n";
  return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const PWLSystem system = make_system(c.system.gamma, c.system.boundary);
  const auto opts = integration_options(c);
  CycleSearch search;
  try {
    search = search_cycles(system, c);
  } catch (const HypothesisRefusal& e) {
    err << "error: " << e.what() << '\n';
    out << to_json(e.report()).dump(2) << '\n';
    return kHypothesis;
  }

  std::vector<std::string> discrepancies;
  json cycles = json::array();
  const auto& cs = search.cycles;
  std::vector<json> rows(cs.size());
  std::vector<std::vector<std::string>> issues(cs.size());
  parallel_for(cs.size(), [&](std::size_t i) {
    const auto& r = cs[i];
    const auto turn = return_map(system, r.lower_crossing.y, opts);
    const double residual = std::abs(turn.y_out - turn.y_in);
    const double period_error = std::abs(turn.flight_time - 2.0 * kPi);
    const auto verdict = resolve_stability(system, r.y_star, probe_eps(cs, i), c.iters, opts);
    const std::string where = "cycle y* = " + fmt12(r.y_star) + ": ";
    if (residual > c.verify_tol * 0.1 * std::max(1.0, std::abs(turn.y_in))) {
      issues[i].push_back(where + "return-map fixed-point residual " + fmt12(residual));
    }
    if (period_error > c.verify_tol) {
      issues[i].push_back(where + "flight time differs from 2 pi by " + fmt12(period_error));
    }
    if (turn.sigma_crossings != 1) {
      issues[i].push_back(where + std::to_string(turn.sigma_crossings) + " switching-curve crossings");
    }
    if (verdict.stability != r.stability) {
      issues[i].push_back(where + "oracle stability " + to_string(verdict.stability) +
                          " vs analytic " + to_string(r.stability));
    }
    rows[i] = {{"y_star", r.y_star},
               {"analytic_stability", to_string(r.stability)},
               {"oracle_stability", to_string(verdict.stability)},
               {"fixed_point_residual", residual},
               {"flight_time", turn.flight_time},
               {"sigma_crossings", turn.sigma_crossings},
               {"confirmed", issues[i].empty()}};
  });
  for (std::size_t i = 0; i < cs.size(); ++i) {
    cycles.push_back(rows[i]);
    for (auto& s : issues[i]) discrepancies.push_back(s);
  }

  if (search.continuum) {
    for (double y_in : {-0.5, -1.0, -2.0}) {
      const auto turn = return_map(system, y_in, opts);
      if (std::abs(turn.y_out - y_in) > c.verify_tol * 0.1 * std::abs(y_in)) {
        discrepancies.push_back("center: return map moves y_in = " + fmt12(y_in) + " to " +
                                fmt12(turn.y_out));
      }
    }
  }

  double worst = 0.0, worst_y = 0.0;
  for (const auto& r : displacement_scan(system, c)) {
    const double d = std::abs(r.analytic - r.numeric);
    if (d > worst) {
      worst = d;
      worst_y = r.y;
    }
    if ((r.analytic > 0.0) != (r.h > 0.0) || (r.analytic < 0.0) != (r.h < 0.0)) {
      discrepancies.push_back("displacement sign differs from sign(h) at y = " + fmt12(r.y));
    }
  }
  if (worst > c.verify_tol) {
    discrepancies.push_back("max |f_analytic - f_numeric| = " + fmt12(worst) + " at y = " +
                            fmt12(worst_y));
  }

  json j = {{"system", to_json(c.system)},
            {"continuum", search.continuum},
            {"cycles", cycles},
            {"displacement", {{"points", c.points}, {"max_abs_diff", worst}}},
            {"discrepancies", discrepancies},
            {"passed", discrepancies.empty()}};
  Sink sink(c.out);
  sink.stream(out) << j.dump(2) << '\n';
  for (const auto& d : discrepancies) err << "discrepancy: " << d << '\n';
  return discrepancies.empty() ? kOk : kDiscrepancy;
}

inline int cmd_portrait(const RunConfig& c, std::ostream& err) {
  if (c.out.empty()) throw UsageError("portrait needs --out PATH");
  const PWLSystem system = make_system(c.system.gamma, c.system.boundary);
  PortraitSpec spec;
  spec.turns = c.turns;
  // Seeds are placed on the positive y-axis up to `reach`.
  double reach = std::min(c.y_hi, 6.0) * 1.1;
  if (!c.window.empty()) {
    spec.x_min = c.window[0];
    spec.x_max = c.window[1];
    spec.y_min = c.window[2];
    spec.y_max = c.window[3];
    reach = spec.y_max;
  }

  CycleSearch search;
  try {
    search = search_cycles(system, c);
  } catch (const HypothesisRefusal& e) {
    err << "error: " << e.what() << '\n';
    return kHypothesis;
  }
  const std::vector<CycleReport>& cycles = search.cycles;
  // Seeds between consecutive cycles (or evenly spaced for the center).
  std::vector<double> marks{0.0};
  for (const auto& r : cycles) marks.push_back(r.y_star);
  marks.push_back(std::max(reach, marks.back() * 1.1));
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    spec.seeds.push_back({0.0, 0.5 * (marks[i] + marks[i + 1])});
  }
  if (cycles.empty()) {
    spec.seeds.clear();
    for (int k = 1; k <= 5; ++k) spec.seeds.push_back({0.0, reach * k / 6.0});
  }

  IntegrationOptions opts = integration_options(c);
  opts.step = std::max(opts.step, 1e-3);
  if (c.window.empty()) spec = fit_window(system, spec, cycles, opts);
  const std::string svg = render(system, spec, cycles, opts);
  {
    std::ofstream f(c.out);
    if (!f) throw UsageError("cannot open output file '" + c.out + "'");
    f << svg;
  }
  if (!c.csv_out.empty()) {
    std::ofstream f(c.csv_out);
    if (!f) throw UsageError("cannot open output file '" + c.csv_out + "'");
    IntegrationOptions o = opts;
    o.sample_stride = 10;
    std::vector<TrajectorySegment> segs;
    for (const auto& s : spec.seeds) {
      for (auto& seg : sample_orbit(system, s, spec.turns, o)) segs.push_back(std::move(seg));
    }
    write_csv(f, segs);
  }
  err << "wrote " << c.out << " (" << cycles.size() << " cycles, " << spec.seeds.size()
      << " orbits)\n";
  return kOk;
}

inline void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (flags override it)");
  sub->add_option("--gamma", f.gamma, "contraction/expansion rate gamma > 0");
  sub->add_option("--family", f.family, "boundary family: zero, sine, oscillatory, cosine");
  sub->add_option("--n", f.n, "number of cycles for the sine/cosine families");
  sub->add_option("--alpha", f.alpha, "amplitude of the oscillatory family");
  sub->add_option("--range", f.range, "ordinate range LO HI")->expected(2);
  sub->add_option("--out", f.out, "output path");
  sub->add_option("--step", f.step, "RK4 step of the numerical oracle");
  sub->add_option("--tol", f.tol, "root tolerance");
  sub->add_option("--verify-tol", f.verify_tol, "oracle-vs-analytic tolerance");
  sub->add_option("--points", f.points, "displacement grid size");
  sub->add_option("--grid-points", f.grid_points, "hypothesis grid size");
  sub->add_option("--k-max", f.k_max, "oscillatory family: number of cycles to enumerate");
  sub->add_option("--iters", f.iters, "return-map iterations for stability");
  sub->add_option("--format", f.format, "csv or json");
  sub->add_flag("--no-check", f.skip_check, "skip hypothesis certification");
}

}  // namespace detail

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Limit cycles of planar two-zone piecewise-linear systems", "pwl_cycles"};
  app.require_subcommand(1);
  Flags flags;
  auto* check = app.add_subcommand("check", "certify the hypotheses on a grid");
  auto* cycles = app.add_subcommand("cycles", "locate and classify limit cycles");
  auto* disp = app.add_subcommand("displacement", "analytic vs numeric displacement scan");
  auto* verify = app.add_subcommand("verify", "cross-check every analytic claim with the oracle");
  auto* portrait = app.add_subcommand("portrait", "render an SVG phase portrait");
  for (auto* sub : {check, cycles, disp, verify, portrait}) detail::add_common(sub, flags);
  portrait->add_option("--turns", flags.turns, "turns per sampled orbit");
  portrait->add_option("--window", flags.window, "x_min x_max y_min y_max")->expected(4);
  portrait->add_option("--csv", flags.csv_out, "CSV of the sampled orbits");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  try {
    const RunConfig config = detail::merge(flags);
    if (check->parsed()) return detail::cmd_check(config, out);
    if (cycles->parsed()) return detail::cmd_cycles(config, out, err);
    if (disp->parsed()) return detail::cmd_displacement(config, out, err);
    if (verify->parsed()) return detail::cmd_verify(config, out, err);
    return detail::cmd_portrait(config, err);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const HypothesisError& e) {
    err << "hypothesis error: " << e.what() << '\n';
    return kHypothesis;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace pwlc::cli
