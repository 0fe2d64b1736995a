// Phase portraits: sampled orbits, the switching curve and the limit cycles,
// rendered as a deterministic SVG 1.1 document. Stable cycles are bold and
// solid, unstable cycles dashed, semi-stable cycles dash-dotted, the switching
// curve dashed.
#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "pwlc/analytic.hpp"
#include "pwlc/cycles.hpp"
#include "pwlc/oracle.hpp"

namespace pwlc {

struct PortraitStyle {
  double orbit_width = 0.7;
  double cycle_width = 2.6;
  double unstable_width = 1.6;
  double sigma_width = 1.2;
  std::string orbit_color = "#7a7a7a";
  std::string cycle_color = "#000000";
  std::string sigma_color = "#c0392b";
  std::string unstable_dash = "7,5";
  std::string semi_dash = "9,4,2,4";
  std::string sigma_dash = "4,3";
};

struct PortraitSpec {
  double x_min = -3.0;
  double x_max = 3.0;
  double y_min = -3.0;
  double y_max = 3.0;
  std::vector<Point> seeds;
  int turns = 1;
  bool include_cycles = true;
  int width_px = 600;
  int height_px = 600;
  PortraitStyle style;

  void validate() const {
    if (!(x_max > x_min) || !(y_max > y_min)) throw DomainError("PortraitSpec: degenerate window");
    if (turns < 1) throw DomainError("PortraitSpec: turns must be >= 1");
    if (width_px < 1 || height_px < 1) throw DomainError("PortraitSpec: empty canvas");
  }
};

/// Integrates an orbit from `seed` through 2 * turns zone exits (one turn is
/// one crossing of the switching curve plus one crossing of the section).
/// Stops early at a time-out, e.g. for an orbit collapsing onto the origin.
inline std::vector<TrajectorySegment> sample_orbit(const PWLSystem& system, Point seed, int turns,
                                                   const IntegrationOptions& opts = {}) {
  if (seed.x == 0.0 && seed.y == 0.0) throw DomainError("sample_orbit: seed is the equilibrium");
  if (turns < 1) throw DomainError("sample_orbit: turns must be >= 1");
  std::vector<TrajectorySegment> out;
  Zone zone = entering_zone(system, seed, opts.event_tol);
  Point p = seed;
  double remaining = opts.max_time;
  for (int exits = 0; exits < 2 * turns && remaining > 0.0; ++exits) {
    IntegrationOptions o = opts;
    o.max_time = remaining;
    auto seg = integrate_in_zone(system, zone, p, Direction::forward, o);
    remaining -= seg.duration();
    p = seg.terminal();
    const bool done = seg.terminal_event == TerminalEvent::time_out;
    out.push_back(std::move(seg));
    if (done) break;
    zone = zone == Zone::left ? Zone::right : Zone::left;
  }
  return out;
}

/// Closed curve of the cycle through (0, y*) from the closed-form flows:
/// half a turn in the left zone, then half a turn in the right zone.
inline std::vector<Point> cycle_polyline(const PWLSystem& system, double y_star,
                                         int points_per_turn = 720) {
  const int half = points_per_turn / 2;
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(2 * half + 1));
  const Point top{0.0, y_star};
  for (int i = 0; i <= half; ++i) pts.push_back(flow(Zone::left, kPi * i / half, top, system.params()));
  const Point bottom{0.0, -std::exp(-system.gamma() * kPi) * y_star};
  for (int i = 1; i <= half; ++i) {
    pts.push_back(flow(Zone::right, kPi * i / half, bottom, system.params()));
  }
  return pts;
}

/// Window enclosing the seeds' orbits and the cycles with a 6% margin, with
/// equal x and y spans (the canvas is drawn without distortion when square).
inline PortraitSpec fit_window(const PWLSystem& system, PortraitSpec spec,
                               const std::vector<CycleReport>& cycles,
                               const IntegrationOptions& opts = {}) {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
  auto take = [&](Point p) {
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
  };
  for (const auto& c : cycles) {
    for (Point p : cycle_polyline(system, c.y_star)) take(p);
  }
  IntegrationOptions o = opts;
  o.sample_stride = std::max<std::size_t>(1, static_cast<std::size_t>(0.01 / o.step));
  for (const auto& seed : spec.seeds) {
    for (const auto& seg : sample_orbit(system, seed, spec.turns, o)) {
      for (const auto& s : seg.states) take(s.p);
    }
  }
  if (x_hi - x_lo <= 0.0 && y_hi - y_lo <= 0.0) return spec;
  const double span = 1.12 * std::max(x_hi - x_lo, y_hi - y_lo);
  const double cx = 0.5 * (x_lo + x_hi);
  const double cy = 0.5 * (y_lo + y_hi);
  spec.x_min = cx - 0.5 * span;
  spec.x_max = cx + 0.5 * span;
  spec.y_min = cy - 0.5 * span;
  spec.y_max = cy + 0.5 * span;
  return spec;
}

namespace detail {

class SvgCanvas {
 public:
  explicit SvgCanvas(const PortraitSpec& spec) : spec_(spec) {}

  std::string path(const std::vector<Point>& pts) const {
    std::string d;
    char buf[64];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.3f %.3f", i == 0 ? "M" : " L", px(pts[i].x), py(pts[i].y));
      d += buf;
    }
    return d;
  }

  double px(double x) const {
    return kMargin + (x - spec_.x_min) / (spec_.x_max - spec_.x_min) * spec_.width_px;
  }
  double py(double y) const {
    return kMargin + (spec_.y_max - y) / (spec_.y_max - spec_.y_min) * spec_.height_px;
  }

  static constexpr double kMargin = 20.0;

 private:
  const PortraitSpec& spec_;
};

inline std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

}  // namespace detail

/// SVG document for the portrait. Output depends only on the inputs.
inline std::string render(const PWLSystem& system, const PortraitSpec& spec,
                          const std::vector<CycleReport>& cycles,
                          const IntegrationOptions& opts = {}) {
  spec.validate();
  const detail::SvgCanvas canvas(spec);
  const auto& st = spec.style;
  const double m = detail::SvgCanvas::kMargin;
  const double w = spec.width_px + 2 * m;
  const double h = spec.height_px + 2 * m;

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         detail::fmt("%.0f", w) + "\" height=\"" + detail::fmt("%.0f", h) + "\" viewBox=\"0 0 " +
         detail::fmt("%.0f", w) + " " + detail::fmt("%.0f", h) + "\">\n";
  svg += "<defs><clipPath id=\"window\"><rect x=\"" + detail::fmt("%.3f", m) + "\" y=\"" +
         detail::fmt("%.3f", m) + "\" width=\"" + std::to_string(spec.width_px) + "\" height=\"" + std::to_string(spec.height_px) +
         "\"/></clipPath></defs>\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<g clip-path=\"url(#window)\" fill=\"none\" stroke-linejoin=\"round\">\n";

  // axes
  svg += "<g id=\"axes\" stroke=\"#bbbbbb\" stroke-width=\"0.8\">\n";
  svg += "<path d=\"" + canvas.path({{spec.x_min, 0.0}, {spec.x_max, 0.0}}) + "\"/>\n";
  svg += "<path d=\"" + canvas.path({{0.0, spec.y_min}, {0.0, spec.y_max}}) + "\"/>\n";
  svg += "</g>\n";

  // switching curve x = h(y), y > 0
  if (spec.y_max > 0.0) {
    std::vector<Point> sigma;
    const int n = 1000;
    const double y0 = std::max(spec.y_min, 0.0);
    for (int i = 0; i <= n; ++i) {
      const double y = y0 + (spec.y_max - y0) * i / n;
      sigma.push_back({system.boundary().value(y), y});
    }
    svg += "<path id=\"sigma\" stroke=\"" + st.sigma_color + "\" stroke-width=\"" +
           detail::fmt("%.2f", st.sigma_width) + "\" stroke-dasharray=\"" + st.sigma_dash +
           "\" d=\"" + canvas.path(sigma) + "\"/>\n";
  }

  // orbits
  if (!spec.seeds.empty()) {
    svg += "<g id=\"orbits\" stroke=\"" + st.orbit_color + "\" stroke-width=\"" +
           detail::fmt("%.2f", st.orbit_width) + "\">\n";
    IntegrationOptions o = opts;
    o.sample_stride = std::max<std::size_t>(1, static_cast<std::size_t>(0.01 / o.step));
    for (const auto& seed : spec.seeds) {
      std::vector<Point> pts;
      for (const auto& seg : sample_orbit(system, seed, spec.turns, o)) {
        for (const auto& s : seg.states) pts.push_back(s.p);
      }
      svg += "<path d=\"" + canvas.path(pts) + "\"/>\n";
    }
    svg += "</g>\n";
  }

  // cycles
  if (spec.include_cycles && !cycles.empty()) {
    svg += "<g id=\"cycles\" stroke=\"" + st.cycle_color + "\">\n";
    for (const auto& c : cycles) {
      std::string attrs;
      if (c.stability == StabilityClass::stable) {
        attrs = "stroke-width=\"" + detail::fmt("%.2f", st.cycle_width) + "\"";
      } else if (c.stability == StabilityClass::unstable) {
        attrs = "stroke-width=\"" + detail::fmt("%.2f", st.unstable_width) +
                "\" stroke-dasharray=\"" + st.unstable_dash + "\"";
      } else {
        attrs = "stroke-width=\"" + detail::fmt("%.2f", st.unstable_width) +
                "\" stroke-dasharray=\"" + st.semi_dash + "\"";
      }
      svg += "<path class=\"cycle " + std::string(to_string(c.stability)) + "\" " + attrs +
             " d=\"" + canvas.path(cycle_polyline(system, c.y_star)) + " Z\"/>\n";
    }
    svg += "</g>\n";
  }

  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace pwlc
