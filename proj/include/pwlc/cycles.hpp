// Limit cycles: roots of h, their stability, and assembled cycle reports.
//
// A periodic orbit passes through (h(y*), y*) iff h(y*) = 0; it then crosses
// the y-axis at (0, y*) and (0, -e^{-gamma pi} y*). Stability follows from the
// sign of h on either side of y*:
//   h < 0 just inside  -> stable from the interior  (h > 0 -> unstable)
//   h > 0 just outside -> stable from the exterior  (h < 0 -> unstable)
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "pwlc/analytic.hpp"
#include "pwlc/families.hpp"
#include "pwlc/hypotheses.hpp"

namespace pwlc {

enum class StabilityClass {
  stable,
  unstable,
  semi_stable_outer_stable,  // repels on the inside, attracts on the outside
  semi_stable_inner_stable,  // attracts on the inside, repels on the outside
  undetermined,
};

inline const char* to_string(StabilityClass s) {
  switch (s) {
    case StabilityClass::stable: return "stable";
    case StabilityClass::unstable: return "unstable";
    case StabilityClass::semi_stable_outer_stable: return "semi_stable_outer_stable";
    case StabilityClass::semi_stable_inner_stable: return "semi_stable_inner_stable";
    case StabilityClass::undetermined: return "undetermined";
  }
  return "undetermined";
}

inline bool is_semi_stable(StabilityClass s) {
  return s == StabilityClass::semi_stable_outer_stable ||
         s == StabilityClass::semi_stable_inner_stable;
}

/// Per-side verdict: +1 attracting, -1 repelling, 0 unknown.
inline StabilityClass combine_sides(int interior, int exterior) {
  if (interior == 0 || exterior == 0) return StabilityClass::undetermined;
  if (interior > 0 && exterior > 0) return StabilityClass::stable;
  if (interior < 0 && exterior < 0) return StabilityClass::unstable;
  return interior < 0 ? StabilityClass::semi_stable_outer_stable
                      : StabilityClass::semi_stable_inner_stable;
}

// ---------------------------------------------------------------------------
// Roots

struct RootScan {
  bool continuum = false;  // h vanishes on the whole scan (the linear center)
  std::vector<double> roots;
};

namespace detail {

template <class F>
double bisect_sign_change(F&& fn, double lo, double hi, double tol) {
  double flo = fn(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Minimizer of |h| on [lo, hi]: bisection on h' when it changes sign, golden
// section on |h| otherwise.
inline double refine_tangency(const Boundary& b, double lo, double hi, double tol) {
  const double dlo = b.derivative(lo);
  const double dhi = b.derivative(hi);
  if (dlo == 0.0) return lo;
  if (dhi == 0.0) return hi;
  if ((dlo < 0.0) != (dhi < 0.0)) {
    return bisect_sign_change([&](double y) { return b.derivative(y); }, lo, hi,
                              std::min(tol, 1e-14 * std::max(1.0, hi)));
  }
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, c = hi;
  double x1 = c - phi * (c - a), x2 = a + phi * (c - a);
  double f1 = std::abs(b.value(x1)), f2 = std::abs(b.value(x2));
  for (int it = 0; it < 200 && c - a > tol; ++it) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - phi * (c - a);
      f1 = std::abs(b.value(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (c - a);
      f2 = std::abs(b.value(x2));
    }
  }
  return 0.5 * (a + c);
}

}  // namespace detail

/// Roots of h on [y_min, y_max]: sign changes refined by bisection to tol, plus
/// tangential zeros found at local minima of |h| and accepted when the refined
/// |h| is below tol^(2/3).
inline RootScan find_roots(const Boundary& boundary, double y_min, double y_max,
                           std::size_t scan_points = 4000, double tol = 1e-10) {
  if (!(y_min > 0.0)) throw DomainError("find_roots: y_min must be positive");
  if (!(y_max > y_min)) throw DomainError("find_roots: need y_min < y_max");
  if (scan_points < 2) throw DomainError("find_roots: need at least two scan points");
  if (!(tol > 0.0)) throw DomainError("find_roots: tol must be positive");

  const auto ys = uniform_grid(y_min, y_max, scan_points);
  std::vector<double> hs(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) hs[i] = boundary.value(ys[i]);

  RootScan scan;
  if (std::all_of(hs.begin(), hs.end(), [&](double v) { return std::abs(v) <= tol; })) {
    scan.continuum = true;
    return scan;
  }

  auto h = [&](double y) { return boundary.value(y); };
  const double tangency_threshold = std::pow(tol, 2.0 / 3.0);
  std::vector<double> roots;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    // Exact zeros, and range endpoints where h rounds to within tol of zero
    // (no bracket or neighbourhood is available there).
    const bool endpoint = i == 0 || i + 1 == ys.size();
    if (hs[i] == 0.0 || (endpoint && std::abs(hs[i]) <= tol)) {
      roots.push_back(ys[i]);
      continue;
    }
    if (i + 1 < ys.size() && hs[i + 1] != 0.0 && (hs[i] < 0.0) != (hs[i + 1] < 0.0)) {
      roots.push_back(detail::bisect_sign_change(h, ys[i], ys[i + 1], tol));
    }
    if (i > 0 && i + 1 < ys.size()) {
      const bool same_sign = (hs[i - 1] < 0.0) == (hs[i] < 0.0) &&
                             (hs[i + 1] < 0.0) == (hs[i] < 0.0) && hs[i - 1] != 0.0 &&
                             hs[i + 1] != 0.0;
      const bool local_min =
          std::abs(hs[i]) <= std::abs(hs[i - 1]) && std::abs(hs[i]) <= std::abs(hs[i + 1]);
      if (same_sign && local_min) {
        const double y = detail::refine_tangency(boundary, ys[i - 1], ys[i + 1], tol);
        if (std::abs(boundary.value(y)) < tangency_threshold) roots.push_back(y);
      }
    }
  }

  std::sort(roots.begin(), roots.end());
  for (double r : roots) {
    if (scan.roots.empty() || r - scan.roots.back() > std::max(10.0 * tol, 1e-9 * r)) {
      scan.roots.push_back(r);
    }
  }
  return scan;
}

// ---------------------------------------------------------------------------
// Classification

struct ClassifyOptions {
  double probe_fraction = 1e-3;   // first probe = probe_fraction * y*
  double shrink = 0.25;
  double floor_fraction = 1e-12;  // give up below floor_fraction * y*
  double hyperbolic_tol = 1e-8;   // |h'(y*)| above this takes the hyperbolic shortcut
};

namespace detail {

// Stable sign of h on one side of y* (direction -1 inside, +1 outside), 0 if none.
inline int side_sign(const Boundary& b, double y_star, double direction, double probe,
                     const ClassifyOptions& opts) {
  const double floor = opts.floor_fraction * y_star;
  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  while (probe >= floor) {
    const int s1 = sgn(b.value(y_star + direction * probe));
    const int s2 = sgn(b.value(y_star + direction * probe * opts.shrink));
    if (s1 == s2 && s1 != 0) return s1;
    probe *= opts.shrink;
  }
  return 0;
}

}  // namespace detail

/// Stability of the periodic orbit through (0, y*), y* a root of h.
inline StabilityClass classify(const Boundary& boundary, double y_star,
                               const ClassifyOptions& opts = {}) {
  if (!(y_star > 0.0)) throw DomainError("classify: y* must be positive");
  const double hp = boundary.derivative(y_star);
  if (std::abs(hp) > opts.hyperbolic_tol) {
    return hp > 0.0 ? StabilityClass::stable : StabilityClass::unstable;
  }
  const double probe = opts.probe_fraction * y_star;
  const int inside = detail::side_sign(boundary, y_star, -1.0, probe, opts);
  const int outside = detail::side_sign(boundary, y_star, +1.0, probe, opts);
  // interior attracts when h < 0 inside, exterior attracts when h > 0 outside
  return combine_sides(-inside, outside);
}

// ---------------------------------------------------------------------------
// Reports

struct CycleReport {
  double y_star = 0.0;
  Point upper_crossing;
  Point lower_crossing;
  double period = 0.0;
  StabilityClass stability = StabilityClass::undetermined;
  double h_prime = 0.0;
  double f3 = 0.0;
  bool hyperbolic = false;
};

inline CycleReport make_cycle_report(const PWLSystem& system, double y_star,
                                     const ClassifyOptions& opts = {}) {
  CycleReport r;
  r.y_star = y_star;
  r.upper_crossing = {0.0, y_star};
  r.lower_crossing = {0.0, -std::exp(-system.gamma() * kPi) * y_star};
  r.period = crossing_time_left(y_star, system) - crossing_time_right(y_star, system);
  r.stability = classify(system.boundary(), y_star, opts);
  r.h_prime = system.boundary().derivative(y_star);
  r.f3 = displacement_f3_at_root(y_star, r.h_prime, system.params());
  r.hyperbolic = std::abs(r.h_prime) > opts.hyperbolic_tol;
  return r;
}

struct CycleOptions {
  std::size_t scan_points = 4000;
  double root_tol = 1e-10;
  std::size_t hypothesis_points = 4096;
  bool skip_hypothesis_check = false;
  ClassifyOptions classify;
};

struct CycleSearch {
  bool continuum = false;
  std::vector<CycleReport> cycles;  // sorted by y*
  HypothesisReport hypotheses;
};

/// Raised when the boundary hypotheses fail on the search range.
class HypothesisRefusal : public Error {
 public:
  explicit HypothesisRefusal(HypothesisReport report)
      : Error("boundary hypotheses fail on the requested range (" +
              std::to_string(report.violations.size()) + " violations)"),
        report_(std::move(report)) {}

  const HypothesisReport& report() const { return report_; }

 private:
  HypothesisReport report_;
};

namespace detail {

inline HypothesisReport certify_or_refuse(const PWLSystem& system, double y_min, double y_max,
                                          const CycleOptions& opts) {
  HypothesisReport report;
  if (!opts.skip_hypothesis_check) {
    report = check_boundary_hypotheses(system, geometric_grid(y_min, y_max, opts.hypothesis_points));
    if (!report.passed()) throw HypothesisRefusal(std::move(report));
  }
  return report;
}

}  // namespace detail

/// All limit cycles whose upper crossing lies in [y_min, y_max].
inline CycleSearch find_limit_cycles(const PWLSystem& system, double y_min, double y_max,
                                     const CycleOptions& opts = {}) {
  CycleSearch out;
  out.hypotheses = detail::certify_or_refuse(system, y_min, y_max, opts);
  const auto scan = find_roots(system.boundary(), y_min, y_max, opts.scan_points, opts.root_tol);
  out.continuum = scan.continuum;
  for (double y : scan.roots) out.cycles.push_back(make_cycle_report(system, y, opts.classify));
  return out;
}

/// Cycles of the oscillatory family at y* = 1/(k pi), k = 1..k_max, sorted by y*.
inline CycleSearch enumerate_oscillatory_cycles(const PWLSystem& system, int k_max,
                                                const CycleOptions& opts = {}) {
  if (system.boundary().family() != FamilyKind::oscillatory) {
    throw DomainError("enumerate_oscillatory_cycles: boundary is not the oscillatory family");
  }
  if (k_max < 1) throw DomainError("enumerate_oscillatory_cycles: k_max must be >= 1");
  CycleSearch out;
  out.hypotheses = detail::certify_or_refuse(system, 0.5 * oscillatory_root(k_max),
                                             2.0 * oscillatory_root(1), opts);
  for (int k = k_max; k >= 1; --k) {
    out.cycles.push_back(make_cycle_report(system, oscillatory_root(k), opts.classify));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The equilibrium

enum class OriginKind {
  attracting_focus,       // h > 0 near 0: orbits spiral in
  repelling_focus,        // h < 0 near 0
  center,                 // h == 0 near 0
  cycle_accumulation,     // h changes sign arbitrarily close to 0; Lyapunov stable
};

inline const char* to_string(OriginKind k) {
  switch (k) {
    case OriginKind::attracting_focus: return "stable focus";
    case OriginKind::repelling_focus: return "unstable focus";
    case OriginKind::center: return "center";
    case OriginKind::cycle_accumulation: return "stable focus (accumulating cycles)";
  }
  return "center";
}

/// Classifies the origin from the sign of h on y_ref * 2^-k, k = 0..59.
inline OriginKind classify_origin(const PWLSystem& system, double y_ref = 1e-2) {
  int pos = 0, neg = 0;
  double y = y_ref;
  for (int k = 0; k < 60; ++k, y *= 0.5) {
    const double h = system.boundary().value(y);
    pos += h > 0.0;
    neg += h < 0.0;
  }
  if (pos > 0 && neg > 0) return OriginKind::cycle_accumulation;
  if (pos > 0) return OriginKind::attracting_focus;
  if (neg > 0) return OriginKind::repelling_focus;
  return OriginKind::center;
}

}  // namespace pwlc
