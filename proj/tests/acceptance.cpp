// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pwlc/cli.hpp"
#include "pwlc/pwlc.hpp"

namespace {

using namespace pwlc;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

BoundaryDescriptor descriptor(FamilyKind kind, int n = 0, double alpha = 0.0) {
  BoundaryDescriptor d;
  d.family = kind;
  d.n = n;
  d.alpha = alpha;
  return d;
}

double probe_eps(const std::vector<CycleReport>& cycles, std::size_t i) {
  double gap = cycles[i].y_star;
  if (i > 0) gap = std::min(gap, cycles[i].y_star - cycles[i - 1].y_star);
  if (i + 1 < cycles.size()) gap = std::min(gap, cycles[i + 1].y_star - cycles[i].y_star);
  return 0.25 * gap;
}

// 1. Sine family: n cycles at y* = k with alternating stability.
Outcome sine_cycles() {
  Outcome o;
  const double g = 0.75;
  int checked = 0;
  for (int n : {1, 2, 3, 5}) {
    const auto sys = make_system(g, descriptor(FamilyKind::sine, n));
    const auto res = find_limit_cycles(sys, 0.1, 2.0 * n + 2.0);
    if (res.cycles.size() != static_cast<std::size_t>(n)) {
      o.fail("n = " + std::to_string(n) + ": found " + std::to_string(res.cycles.size()) + " cycles");
      continue;
    }
    for (int k = 1; k <= n; ++k) {
      const auto& c = res.cycles[k - 1];
      const std::string where = "n = " + std::to_string(n) + ", k = " + std::to_string(k) + ": ";
      if (std::abs(c.y_star - k) >= 1e-9) o.fail(where + "y* = " + num(c.y_star));
      const double lower = left_exit_y(c.y_star, sys);
      if (std::abs(lower + k * std::exp(-g * kPi)) >= 1e-9) o.fail(where + "lower crossing " + num(lower));
      const auto expected = k % 2 == 0 ? StabilityClass::stable : StabilityClass::unstable;
      if (c.stability != expected) o.fail(where + "classified " + to_string(c.stability));
      const auto v = resolve_stability(sys, c.y_star, probe_eps(res.cycles, k - 1), 30);
      if (v.stability != expected) o.fail(where + "oracle says " + to_string(v.stability));
      ++checked;
    }
  }
  o.detail = o.pass ? std::to_string(checked) + " cycles over n in {1,2,3,5}, oracle agrees" : o.detail;
  return o;
}

// 2. Cosine family: n semi-stable cycles at y* = 2k.
Outcome cosine_cycles() {
  Outcome o;
  int checked = 0;
  for (int n : {1, 2}) {
    const auto sys = make_system(0.4, descriptor(FamilyKind::cosine, n));
    const auto res = find_limit_cycles(sys, 0.1, 2.0 * n + 2.0);
    if (res.cycles.size() != static_cast<std::size_t>(n)) {
      o.fail("n = " + std::to_string(n) + ": found " + std::to_string(res.cycles.size()) + " cycles");
      continue;
    }
    for (int k = 1; k <= n; ++k) {
      const auto& c = res.cycles[k - 1];
      const std::string where = "n = " + std::to_string(n) + ", k = " + std::to_string(k) + ": ";
      if (std::abs(c.y_star - 2.0 * k) >= 1e-6) o.fail(where + "y* = " + num(c.y_star));
      if (!is_semi_stable(c.stability)) o.fail(where + "classified " + to_string(c.stability));
      const auto v = resolve_stability(sys, c.y_star, probe_eps(res.cycles, k - 1), 30);
      if (v.stability != c.stability) o.fail(where + "oracle says " + to_string(v.stability));
      ++checked;
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " semi-stable cycles (repelling inside, attracting outside)";
  return o;
}

// 3. Oscillatory family: cycles at 1/(k pi), stability decided by the sign of h'.
Outcome oscillatory_cycles() {
  Outcome o;
  const double alpha = 0.3;
  const auto sys = make_system(1.0, descriptor(FamilyKind::oscillatory, 0, alpha));
  const auto res = enumerate_oscillatory_cycles(sys, 5);
  if (res.cycles.size() != 5) {
    o.fail("found " + std::to_string(res.cycles.size()) + " cycles");
    return o;
  }
  std::string record;
  StabilityClass prev = StabilityClass::undetermined;
  for (std::size_t i = 0; i < res.cycles.size(); ++i) {
    const auto& c = res.cycles[i];
    const int k = static_cast<int>(std::lround(1.0 / (kPi * c.y_star)));
    const std::string where = "k = " + std::to_string(k) + ": ";
    if (std::abs(c.y_star - 1.0 / (k * kPi)) >= 1e-10) o.fail(where + "y* = " + num(c.y_star));
    const double hp = -alpha * (k % 2 == 0 ? 1.0 : -1.0);
    if (std::abs(c.h_prime - hp) > 1e-12) o.fail(where + "h' = " + num(c.h_prime));
    const auto by_slope = hp > 0.0 ? StabilityClass::stable : StabilityClass::unstable;
    if (c.stability != by_slope) o.fail(where + "classified " + to_string(c.stability));
    if (i > 0 && c.stability == prev) o.fail(where + "stability does not alternate");
    prev = c.stability;
    const auto v = resolve_stability(sys, c.y_star, probe_eps(res.cycles, i), 30);
    if (v.stability != by_slope) o.fail(where + "oracle says " + to_string(v.stability));
    record += (record.empty() ? "" : ", ") + std::to_string(k) + ":" + to_string(v.stability);
  }
  if (o.pass) o.detail = "oracle verdicts " + record;
  return o;
}

// 4. Cycle crossings and period on random instances.
Outcome crossing_law() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_ratio = 0.0, worst_period = 0.0, worst_flight = 0.0;
  int instances = 0;
  while (instances < 200) {
    const int pick = instances % 3;
    BoundaryDescriptor d;
    double g = 1.0;
    if (pick == 0) {
      g = 0.05 + (0.95 * sine_gamma_limit() - 0.05) * unit(rng);
      d = descriptor(FamilyKind::sine, 1 + static_cast<int>(unit(rng) * 5));
    } else if (pick == 1) {
      g = 0.05 + (0.95 * cosine_gamma_limit() - 0.05) * unit(rng);
      d = descriptor(FamilyKind::cosine, 1 + static_cast<int>(unit(rng) * 3));
    } else {
      d = descriptor(FamilyKind::oscillatory, 0, 0.05 + 0.3 * unit(rng));
    }
    const auto sys = make_system(g, d);
    const auto res = pick == 2 ? enumerate_oscillatory_cycles(sys, 5)
                               : find_limit_cycles(sys, 0.1, 2.0 * d.n + 2.0);
    if (res.cycles.empty()) {
      o.fail("instance without cycles");
      break;
    }
    const auto& c = res.cycles[static_cast<std::size_t>(unit(rng) * res.cycles.size())];
    const double contraction = -std::exp(-g * kPi);
    worst_ratio = std::max({worst_ratio, std::abs(left_exit_y(c.y_star, sys) / c.y_star - contraction),
                            std::abs(right_entry_y(c.y_star, sys) / c.y_star - contraction)});
    const double period = crossing_time_left(c.y_star, sys) - crossing_time_right(c.y_star, sys);
    worst_period = std::max(worst_period, std::abs(period - 2.0 * kPi));
    const auto turn = return_map(sys, contraction * c.y_star);
    worst_flight = std::max(worst_flight, std::abs(turn.flight_time - 2.0 * kPi));
    ++instances;
  }
  if (worst_ratio > 1e-12) o.fail("crossing ratio error " + num(worst_ratio));
  if (worst_period > 1e-9) o.fail("analytic period error " + num(worst_period));
  if (worst_flight > 1e-6) o.fail("oracle flight-time error " + num(worst_flight));
  if (o.pass) {
    o.detail = "200 instances: ratio err " + num(worst_ratio) + ", period err " + num(worst_period) +
               ", flight err " + num(worst_flight);
  }
  return o;
}

// 5. sign(f) = sign(h) and antisymmetry of F.
Outcome sign_law() {
  Outcome o;
  struct Case {
    std::string name;
    PWLSystem system;
    double lo, hi;
  };
  const std::vector<Case> cases{
      {"sine", make_system(0.75, descriptor(FamilyKind::sine, 3)), 0.01, 8.0},
      {"cosine", make_system(0.4, descriptor(FamilyKind::cosine, 2)), 0.01, 7.0},
      {"oscillatory", make_system(1.0, descriptor(FamilyKind::oscillatory, 0, 0.3)), 0.02, 1.5},
  };
  int exceptions = 0;
  for (const auto& c : cases) {
    for (int i = 0; i < 1000; ++i) {
      // offset grid: stays off the exact roots
      const double y = c.lo + (c.hi - c.lo) * (i + 0.37) / 1000.0;
      const double h = c.system.boundary().value(y);
      const double f = displacement(y, c.system);
      if ((f > 0.0) != (h > 0.0) || (f < 0.0) != (h < 0.0)) {
        ++exceptions;
        o.fail(c.name + ": sign mismatch at y = " + num(y));
      }
    }
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const SystemParams p(0.05 + 2.0 * unit(rng));
    const double y = 0.01 + 5.0 * unit(rng);
    const double x = (2.0 * unit(rng) - 1.0) * 0.999 * y / p.gamma();
    worst = std::max(worst, std::abs(delta_difference(y, -x, p) + delta_difference(y, x, p)));
  }
  if (worst > 1e-12) o.fail("F antisymmetry error " + num(worst));
  if (o.pass) o.detail = "3000 grid points, 0 sign exceptions; F antisymmetry err " + num(worst);
  return o;
}

// 6. Closed-form third derivative against finite differences.
Outcome third_derivative() {
  Outcome o;
  struct Root {
    PWLSystem system;
    double y;
  };
  std::vector<Root> roots;
  for (double g : {0.1, 0.3, 0.5, 0.6, 0.75}) {
    const auto sys = make_system(g, descriptor(FamilyKind::sine, 5));
    for (int k = 1; k <= 5; ++k) roots.push_back({sys, static_cast<double>(k)});
  }
  for (double a : {0.15, 0.2, 0.25, 0.3, 0.35}) {
    const auto sys = make_system(1.0, descriptor(FamilyKind::oscillatory, 0, a));
    for (int k = 1; k <= 5; ++k) roots.push_back({sys, oscillatory_root(k)});
  }
  double worst_rel = 0.0, worst_low = 0.0;
  for (const auto& r : roots) {
    const double hp = r.system.boundary().derivative(r.y);
    const double f3 = displacement_f3_at_root(r.y, hp, r.system.params());
    const double e = 1e-3 * std::min(1.0, r.y * r.y);
    auto f = [&](double v) { return displacement(v, r.system); };
    const double fm2 = f(r.y - 2 * e), fm1 = f(r.y - e), f0 = f(r.y), fp1 = f(r.y + e), fp2 = f(r.y + 2 * e);
    const double d3 = (fp2 - 2 * fp1 + 2 * fm1 - fm2) / (2 * e * e * e);
    const double d1 = (fp1 - fm1) / (2 * e);
    const double d2 = (fp1 - 2 * f0 + fm1) / (e * e);
    const double rel = std::abs(d3 - f3) / std::abs(f3);
    worst_rel = std::max(worst_rel, rel);
    const double scale = std::max(1.0, std::abs(f3));
    worst_low = std::max({worst_low, std::abs(d1) / scale, std::abs(d2) / scale});
    if (rel >= 1e-3) o.fail("y* = " + num(r.y) + ": relative error " + num(rel));
  }
  if (roots.size() != 50) o.fail("expected 50 roots, have " + std::to_string(roots.size()));
  if (worst_low >= 1e-6) o.fail("|f'| or |f''| at a root reaches " + num(worst_low));
  if (o.pass) {
    o.detail = "50 roots: max rel err " + num(worst_rel) + ", max |f'|,|f''|/scale " + num(worst_low);
  }
  return o;
}

// 7. Oracle versus closed form, and fourth-order convergence of the integrator.
Outcome oracle_equivalence() {
  Outcome o;
  struct Case {
    std::string name;
    PWLSystem system;
    double lo, hi;
  };
  const std::vector<Case> cases{
      {"sine", make_system(0.75, descriptor(FamilyKind::sine, 2)), 0.1, 4.0},
      {"cosine", make_system(0.4, descriptor(FamilyKind::cosine, 2)), 0.1, 6.0},
      {"oscillatory", make_system(1.0, descriptor(FamilyKind::oscillatory, 0, 0.3)), 0.5 / (5 * kPi), 1.0},
      {"zero", make_system(0.75, BoundaryDescriptor{}), 0.1, 4.0},
  };
  IntegrationOptions opts;
  opts.step = 1e-4;
  std::string summary;
  for (const auto& c : cases) {
    const auto ys = uniform_grid(c.lo, c.hi, 100);
    std::vector<double> diff(ys.size());
    parallel_for(ys.size(), [&](std::size_t i) {
      diff[i] = std::abs(numeric_displacement(c.system, ys[i], opts) - displacement(ys[i], c.system));
    });
    const double worst = *std::max_element(diff.begin(), diff.end());
    if (worst >= 1e-6) o.fail(c.name + ": max diff " + num(worst));
    summary += c.name + " " + num(worst) + "; ";
  }

  const auto center = make_system(0.75, BoundaryDescriptor{});
  auto turn_error = [&](double step) {
    const Point half = propagate(center, Zone::left, {0.0, 1.0}, kPi, step);
    const Point full = propagate(center, Zone::right, half, kPi, step);
    return norm(full - Point{0.0, 1.0});
  };
  const double ratio = turn_error(0.02) / turn_error(0.01);
  if (ratio < 12.0 || ratio > 20.0) o.fail("step-halving error ratio " + num(ratio));
  if (o.pass) o.detail = "max diff: " + summary + "order ratio " + num(ratio);
  return o;
}

// 8. The straight switching line gives a global center.
Outcome center_degeneracy() {
  Outcome o;
  const auto sys = make_system(0.75, BoundaryDescriptor{});
  for (int i = 1; i <= 1000; ++i) {
    const double y = 0.01 * i;
    if (displacement(y, sys) != 0.0) o.fail("displacement nonzero at y = " + num(y));
  }
  double worst = 0.0;
  for (int i = 0; i <= 29; ++i) {
    const double y_in = -3.0 + 2.9 * i / 29.0;
    worst = std::max(worst, std::abs(return_map(sys, y_in).y_out - y_in));
  }
  if (worst > 1e-7) o.fail("return map moves a point by " + num(worst));
  const auto res = find_limit_cycles(sys, 0.1, 5.0);
  if (!res.continuum || !res.cycles.empty()) o.fail("center not reported as a continuum");
  if (o.pass) o.detail = "f == 0 exactly, return-map err " + num(worst) + ", continuum reported";
  return o;
}

// 9. Orbits cross the switching curve transversally, once per turn.
Outcome transversality() {
  Outcome o;
  struct Case {
    std::string name;
    PWLSystem system;
    double lo, hi;
  };
  const std::vector<Case> cases{
      {"sine", make_system(0.75, descriptor(FamilyKind::sine, 3)), 0.01, 8.0},
      {"cosine", make_system(0.4, descriptor(FamilyKind::cosine, 2)), 0.01, 7.0},
      {"oscillatory", make_system(1.0, descriptor(FamilyKind::oscillatory, 0, 0.3)), 1e-3, 1.5},
      {"zero", make_system(0.75, BoundaryDescriptor{}), 0.01, 8.0},
  };
  std::size_t points = 0, turns = 0;
  for (const auto& c : cases) {
    for (double y : geometric_grid(c.lo, c.hi, 4096)) {
      const auto t = check_transversality(c.system, y);
      if (!(t.left_ip < 0.0 && t.right_ip < 0.0)) o.fail(c.name + ": not transversal at y = " + num(y));
      ++points;
    }
    const double contraction = std::exp(-c.system.gamma() * kPi);
    for (int i = 0; i < 25; ++i) {
      const double y_top = c.lo + (0.8 * c.hi - c.lo) * (i + 0.5) / 25.0;
      const auto turn = return_map(c.system, -contraction * y_top);
      if (turn.sigma_crossings != 1) {
        o.fail(c.name + ": " + std::to_string(turn.sigma_crossings) + " crossings in one turn");
      }
      ++turns;
    }
  }
  if (o.pass) {
    o.detail = std::to_string(points) + " grid points strictly negative, " + std::to_string(turns) +
               " turns with one crossing each";
  }
  return o;
}

// 10. Parameter ranges enforced by the check command.
Outcome parameter_ranges() {
  Outcome o;
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    args.insert(args.begin(), "pwl_cycles");
    return cli::run(args, out, err);
  };
  const int sine_bad = run({"check", "--family", "sine", "--gamma", "0.8", "--n", "2"});
  const int sine_ok = run({"check", "--family", "sine", "--gamma", "0.75", "--n", "2"});
  const int osc_bad = run({"check", "--family", "oscillatory", "--alpha", "0.4"});
  const int osc_ok = run({"check", "--family", "oscillatory", "--alpha", "0.36"});
  if (sine_bad == 0) o.fail("sine gamma = 0.8 accepted");
  if (osc_bad == 0) o.fail("oscillatory alpha = 0.4 accepted");
  if (sine_ok != 0) o.fail("sine gamma = 0.75 rejected (exit " + std::to_string(sine_ok) + ")");
  if (osc_ok != 0) o.fail("oscillatory alpha = 0.36 rejected (exit " + std::to_string(osc_ok) + ")");
  if (o.pass) {
    o.detail = "exit codes: sine 0.8 -> " + std::to_string(sine_bad) + ", 0.75 -> " +
               std::to_string(sine_ok) + "; alpha 0.4 -> " + std::to_string(osc_bad) +
               ", 0.36 -> " + std::to_string(osc_ok);
  }
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"AC1 sine family: n cycles at y* = k, stable for even k", sine_cycles},
      {"AC2 cosine family: semi-stable cycles at y* = 2k", cosine_cycles},
      {"AC3 oscillatory family: cycles at 1/(k pi), stability from sign of h'", oscillatory_cycles},
      {"AC4 crossing ratio -exp(-gamma pi) and period 2 pi", crossing_law},
      {"AC5 sign(f) = sign(h), F odd", sign_law},
      {"AC6 closed-form f''' at roots", third_derivative},
      {"AC7 oracle matches closed form; RK4 order 4", oracle_equivalence},
      {"AC8 straight switching line is a global center", center_degeneracy},
      {"AC9 transversal crossing, once per turn", transversality},
      {"AC10 family parameter ranges enforced", parameter_ranges},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %s -- %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", c.name, out.detail.c_str(), secs);
    failed += !out.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
