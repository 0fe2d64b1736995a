// Numerical ground truth for the closed-form results: fixed-step RK4
// integration of each linear zone with bisection-localized zone exits,
// half-return and full-return maps, and stability by return-map iteration.
//
// The section {x = 0, y < 0} is part of the switching set {H = 0}, so every
// trajectory piece ends at a zone exit; the exit is either on the curved part
// of the switching set (y > 0) or on the section (y <= 0).
#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "pwlc/analytic.hpp"
#include "pwlc/cycles.hpp"

namespace pwlc {

class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// The start lies on the switching set and the flow is tangent to it there.
class TangencyError : public IntegrationError {
 public:
  using IntegrationError::IntegrationError;
};

struct IntegrationOptions {
  double step = 1e-4;
  double event_tol = 1e-12;  // bound on |H| at a localized exit
  double max_time = 100.0;
  std::size_t sample_stride = 1;  // record every n-th step; 0 keeps only the endpoints

  void validate() const {
    if (!(step > 0.0)) throw DomainError("IntegrationOptions: step must be positive");
    if (!(event_tol > 0.0) || !(event_tol < step)) {
      throw DomainError("IntegrationOptions: need 0 < event_tol < step");
    }
    if (!(max_time > 0.0)) throw DomainError("IntegrationOptions: max_time must be positive");
  }
};

enum class Direction { forward, backward };

enum class TerminalEvent {
  boundary_cross,  // left the zone through the curved switching set (y > 0)
  axis_cross,      // left the zone through the section {x = 0, y <= 0}
  time_out,
};

inline const char* to_string(TerminalEvent e) {
  switch (e) {
    case TerminalEvent::boundary_cross: return "boundary_cross";
    case TerminalEvent::axis_cross: return "axis_cross";
    case TerminalEvent::time_out: return "time_out";
  }
  return "time_out";
}

struct TrajectorySample {
  double t;  // signed: negative along a backward segment
  Point p;
};

struct TrajectorySegment {
  Zone zone = Zone::right;
  Direction direction = Direction::forward;
  std::vector<TrajectorySample> states;
  TerminalEvent terminal_event = TerminalEvent::time_out;

  Point start() const { return states.front().p; }
  Point terminal() const { return states.back().p; }
  double duration() const { return std::abs(states.back().t - states.front().t); }
};

namespace detail {

inline Point rk4_step(const Matrix2& a, Point p, double h) {
  const Point k1 = a * p;
  const Point k2 = a * (p + (0.5 * h) * k1);
  const Point k3 = a * (p + (0.5 * h) * k2);
  const Point k4 = a * (p + h * k3);
  return p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline bool outside(Zone zone, double g) { return zone == Zone::left ? g >= 0.0 : g < 0.0; }

}  // namespace detail

/// Integrates X' = G_zone X (negated for backward) from `start` until the
/// trajectory leaves `zone`. The exit is bracketed between steps and bisected
/// until |H| <= event_tol; the returned terminal state is the first bisection
/// point on the far side.
inline TrajectorySegment integrate_in_zone(const PWLSystem& system, Zone zone, Point start,
                                           Direction direction,
                                           const IntegrationOptions& opts = {}) {
  opts.validate();
  if (!is_finite(start)) throw IntegrationError("integrate_in_zone: non-finite start");

  const double sign = direction == Direction::forward ? 1.0 : -1.0;
  const Matrix2& g0 = system.matrices().of(zone);
  const Matrix2 a{sign * g0.a11, sign * g0.a12, sign * g0.a21, sign * g0.a22};

  TrajectorySegment seg;
  seg.zone = zone;
  seg.direction = direction;
  seg.states.push_back({0.0, start});

  const Point v0 = a * start;
  if (v0.x == 0.0 && v0.y == 0.0) {
    seg.states.push_back({sign * opts.max_time, start});
    seg.terminal_event = TerminalEvent::time_out;
    return seg;
  }

  const double h_start = manifold_value(system, start);
  if (std::abs(h_start) > opts.event_tol) {
    if (detail::outside(zone, h_start)) {
      throw IntegrationError(std::string("integrate_in_zone: start is not in the ") +
                             to_string(zone) + " zone");
    }
  } else {
    const double rate = dot(manifold_gradient(system, start), v0);
    if (std::abs(rate) <= opts.event_tol * std::max(1.0, norm(start))) {
      throw TangencyError("integrate_in_zone: flow is tangent to the switching set at the start");
    }
    if ((zone == Zone::left) != (rate < 0.0)) {
      throw IntegrationError(std::string("integrate_in_zone: flow leaves the ") + to_string(zone) +
                             " zone immediately");
    }
  }

  Point p = start;
  double elapsed = 0.0;
  std::size_t steps = 0;
  while (true) {
    const double h = std::min(opts.step, opts.max_time - elapsed);
    const Point next = detail::rk4_step(a, p, h);
    if (!is_finite(next)) throw EvaluationError("integrate_in_zone: state became non-finite");

    if (detail::outside(zone, manifold_value(system, next))) {
      double lo = 0.0, hi = h;
      Point far = next;
      for (int it = 0; it < 200; ++it) {
        if (std::abs(manifold_value(system, far)) <= opts.event_tol) break;
        if (hi - lo <= 1e-16 * std::max(1.0, elapsed)) break;
        const double mid = 0.5 * (lo + hi);
        const Point q = detail::rk4_step(a, p, mid);
        if (detail::outside(zone, manifold_value(system, q))) {
          hi = mid;
          far = q;
        } else {
          lo = mid;
        }
      }
      elapsed += hi;
      seg.states.push_back({sign * elapsed, far});
      seg.terminal_event = far.y > 0.0 ? TerminalEvent::boundary_cross : TerminalEvent::axis_cross;
      return seg;
    }

    p = next;
    elapsed += h;
    ++steps;
    if (elapsed >= opts.max_time) {
      seg.states.push_back({sign * elapsed, p});
      seg.terminal_event = TerminalEvent::time_out;
      return seg;
    }
    if (opts.sample_stride != 0 && steps % opts.sample_stride == 0) {
      seg.states.push_back({sign * elapsed, p});
    }
  }
}

/// Fixed-time RK4 propagation of one zone's linear field, ignoring the
/// switching set. The duration is split into ceil(|duration| / step) equal steps.
inline Point propagate(const PWLSystem& system, Zone zone, Point start, double duration,
                       double step) {
  if (!(step > 0.0)) throw DomainError("propagate: step must be positive");
  const auto n = static_cast<long>(std::ceil(std::abs(duration) / step));
  if (n == 0) return start;
  const double h = duration / static_cast<double>(n);
  Point p = start;
  for (long i = 0; i < n; ++i) p = detail::rk4_step(system.matrices().of(zone), p, h);
  return p;
}

/// Zone an orbit through p enters: the zone of p, or for p on the switching
/// set, the side the right-zone field points to (both fields agree at crossings).
inline Zone entering_zone(const PWLSystem& system, Point p, double tol = 1e-12) {
  const double g = manifold_value(system, p);
  if (std::abs(g) > tol) return g < 0.0 ? Zone::left : Zone::right;
  const double rate = dot(manifold_gradient(system, p), zone_field(system, Zone::right, p));
  return rate < 0.0 ? Zone::left : Zone::right;
}

/// Numeric counterpart of displacement(y): forward through the left zone and
/// backward through the right zone from (h(y), y) to the section.
inline double numeric_displacement(const PWLSystem& system, double y,
                                   const IntegrationOptions& opts = {}) {
  if (!(y > 0.0)) throw DomainError("numeric_displacement: y must be positive");
  IntegrationOptions o = opts;
  o.sample_stride = 0;
  const Point start{system.boundary().value(y), y};
  const auto fwd = integrate_in_zone(system, Zone::left, start, Direction::forward, o);
  const auto bwd = integrate_in_zone(system, Zone::right, start, Direction::backward, o);
  if (fwd.terminal_event != TerminalEvent::axis_cross ||
      bwd.terminal_event != TerminalEvent::axis_cross) {
    throw IntegrationError("numeric_displacement: half-orbit from y = " + std::to_string(y) +
                           " did not reach the section");
  }
  return fwd.terminal().y - bwd.terminal().y;
}

struct ReturnMapResult {
  double y_in = 0.0;
  double y_out = 0.0;
  double flight_time = 0.0;
  Point sigma_point;        // first crossing of the curved switching set
  int sigma_crossings = 0;  // curved switching-set crossings during the turn
  std::vector<TrajectorySegment> segments;  // populated when keep_segments is set
};

/// One forward turn of the Poincare map on {x = 0, y < 0}.
inline ReturnMapResult return_map(const PWLSystem& system, double y_in,
                                  const IntegrationOptions& opts = {}, bool keep_segments = false) {
  if (!(y_in < 0.0)) throw DomainError("return_map: y_in must be negative");
  IntegrationOptions o = opts;
  if (!keep_segments) o.sample_stride = 0;

  ReturnMapResult r;
  r.y_in = y_in;
  Point p{0.0, y_in};
  Zone zone = Zone::right;
  double remaining = opts.max_time;
  for (int leg = 0; leg < 64; ++leg) {
    o.max_time = remaining;
    auto seg = integrate_in_zone(system, zone, p, Direction::forward, o);
    r.flight_time += seg.duration();
    remaining -= seg.duration();
    const TerminalEvent ev = seg.terminal_event;
    p = seg.terminal();
    if (keep_segments) r.segments.push_back(std::move(seg));
    if (ev == TerminalEvent::time_out) {
      throw IntegrationError("return_map: no return to the section within max_time");
    }
    if (ev == TerminalEvent::boundary_cross) {
      if (r.sigma_crossings == 0) r.sigma_point = p;
      ++r.sigma_crossings;
    }
    if (ev == TerminalEvent::axis_cross && zone == Zone::left) {
      r.y_out = p.y;
      return r;
    }
    zone = zone == Zone::left ? Zone::right : Zone::left;
    if (remaining <= 0.0) break;
  }
  throw IntegrationError("return_map: no return to the section within max_time");
}

struct StabilityVerdict {
  StabilityClass stability = StabilityClass::undetermined;
  int interior = 0;  // +1 attracting, -1 repelling, 0 ambiguous
  int exterior = 0;
  std::vector<double> interior_iterates;  // section ordinates, starting value first
  std::vector<double> exterior_iterates;
};

namespace detail {

// +1 if the distance to `fixed` shrinks at every iterate, -1 if it grows at
// every iterate, 0 otherwise (including crossing the fixed point).
inline int monotone_trend(const std::vector<double>& ys, double fixed) {
  const double noise = 1e-13 * std::max(1.0, std::abs(fixed));
  int trend = 0;
  const bool below = ys.front() < fixed;
  for (std::size_t k = 0; k + 1 < ys.size(); ++k) {
    if ((ys[k + 1] < fixed) != below) return 0;
    const double change = std::abs(ys[k + 1] - fixed) - std::abs(ys[k] - fixed);
    if (std::abs(change) <= noise) return 0;
    const int s = change < 0.0 ? 1 : -1;
    if (trend != 0 && s != trend) return 0;
    trend = s;
  }
  return trend;
}

}  // namespace detail

/// Empirical stability of the cycle through (0, y*): iterates the return map
/// from the section points of orbits through (0, y* - eps) and (0, y* + eps).
inline StabilityVerdict resolve_stability(const PWLSystem& system, double y_star, double eps,
                                          int iters = 30, const IntegrationOptions& opts = {}) {
  if (!(y_star > 0.0)) throw DomainError("resolve_stability: y* must be positive");
  if (!(eps > 0.0) || !(eps < y_star)) throw DomainError("resolve_stability: need 0 < eps < y*");
  if (iters < 1) throw DomainError("resolve_stability: iters must be >= 1");

  const double contraction = std::exp(-system.gamma() * kPi);
  const double fixed = -contraction * y_star;
  auto iterate = [&](double y_upper) {
    std::vector<double> ys{-contraction * y_upper};
    for (int k = 0; k < iters; ++k) ys.push_back(return_map(system, ys.back(), opts).y_out);
    return ys;
  };

  StabilityVerdict v;
  v.interior_iterates = iterate(y_star - eps);
  v.exterior_iterates = iterate(y_star + eps);
  v.interior = detail::monotone_trend(v.interior_iterates, fixed);
  v.exterior = detail::monotone_trend(v.exterior_iterates, fixed);
  v.stability = combine_sides(v.interior, v.exterior);
  return v;
}

/// CSV rows t,x,y,zone for a list of segments.
inline void write_csv(std::ostream& out, const std::vector<TrajectorySegment>& segments) {
  out << "t,x,y,zone\n";
  char buf[128];
  for (const auto& seg : segments) {
    for (const auto& s : seg.states) {
      std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%s\n", s.t, s.p.x, s.p.y,
                    to_string(seg.zone));
      out << buf;
    }
  }
}

}  // namespace pwlc
