// Closed-form zone flows, half-return maps and the displacement function.
//
// A point (h(y), y) on the switching curve is flowed forward through the left
// zone and backward through the right zone until each orbit meets the section
// {x = 0, y < 0}. The displacement f(y) is the difference of the two landing
// ordinates; its zeros are exactly the periodic orbits.
#pragma once

#include <array>
#include <cmath>
#include <string>

#include "pwlc/core.hpp"

namespace pwlc {

/// phi(t, p) of the linear field of `zone` (right: G+, left: G-).
inline Point flow(Zone zone, double t, Point p, const SystemParams& params) {
  const double g = params.gamma();
  const double s = zone_sign(zone);
  const double e = std::exp(s * g * t);
  const double sn = std::sin(t);
  const double cs = std::cos(t);
  return {e * ((s * g * p.x - p.y) * sn + p.x * cs),
          e * ((g * g * p.x - s * g * p.y + p.x) * sn + p.y * cs)};
}

struct HalfReturn {
  double crossing_time;  // t_L in (pi/2, 3pi/2) or t_R in (-3pi/2, -pi/2)
  double exit_y;         // ordinate on {x = 0, y < 0}, always negative
};

namespace detail {

// The half-return formulas need y + gamma h > 0 and y - gamma h > 0.
inline double checked_boundary_value(double y, const PWLSystem& system, const char* op) {
  if (!(y > 0.0)) {
    throw DomainError(std::string(op) + ": y must be positive, got " + std::to_string(y));
  }
  const double h = system.boundary().value(y);
  if (!(std::abs(h) < y / system.gamma())) {
    throw HypothesisError(std::string(op) + ": |h(y)| < y/gamma fails at y = " +
                          std::to_string(y) + " (h = " + std::to_string(h) + ")");
  }
  return h;
}

}  // namespace detail

/// Smallest positive time at which the left flow from (h(y), y) reaches x = 0 with y < 0.
inline double crossing_time_left(double y, const PWLSystem& system) {
  const double h = detail::checked_boundary_value(y, system, "crossing_time_left");
  return kPi + std::atan(h / (y + system.gamma() * h));
}

/// Largest negative time at which the right flow from (h(y), y) reaches x = 0 with y < 0.
inline double crossing_time_right(double y, const PWLSystem& system) {
  const double h = detail::checked_boundary_value(y, system, "crossing_time_right");
  return -kPi + std::atan(h / (y - system.gamma() * h));
}

inline double left_exit_y(double y, const PWLSystem& system) {
  const double g = system.gamma();
  const double h = detail::checked_boundary_value(y, system, "left_exit_y");
  const double u = y + g * h;
  return -std::exp(-g * kPi - g * std::atan(h / u)) * std::sqrt(u * u + h * h);
}

inline double right_entry_y(double y, const PWLSystem& system) {
  const double g = system.gamma();
  const double h = detail::checked_boundary_value(y, system, "right_entry_y");
  const double u = y - g * h;
  return -std::exp(-g * kPi + g * std::atan(h / u)) * std::sqrt(u * u + h * h);
}

inline HalfReturn left_half_return(double y, const PWLSystem& system) {
  return {crossing_time_left(y, system), left_exit_y(y, system)};
}

inline HalfReturn right_half_return(double y, const PWLSystem& system) {
  return {crossing_time_right(y, system), right_entry_y(y, system)};
}

// ---------------------------------------------------------------------------
// delta_y(x) and F_y(x) = delta_y(x) - delta_y(-x), with f(y) = e^{-pi gamma} F_y(h(y)).

inline double delta(double y, double x, const SystemParams& params) {
  const double g = params.gamma();
  if (!(y > 0.0)) throw DomainError("delta: y must be positive");
  if (!(std::abs(x) < y / g)) throw DomainError("delta: requires |x| < y/gamma");
  const double q = y * y - 2.0 * g * y * x + (1.0 + g * g) * x * x;
  return std::exp(g * std::atan(x / (y - g * x))) * std::sqrt(q);
}

inline double delta_difference(double y, double x, const SystemParams& params) {
  return delta(y, x, params) - delta(y, -x, params);
}

/// d/dx [delta_y(x)^2 - delta_y(-x)^2]; positive on (0, y/gamma).
inline double delta_squared_difference_derivative(double y, double x, const SystemParams& params) {
  const double g = params.gamma();
  const double c = 2.0 * x * (1.0 + g * g);
  return c * std::exp(2.0 * g * std::atan(x / (y - g * x))) -
         c * std::exp(-2.0 * g * std::atan(x / (y + g * x)));
}

namespace detail {

// Same quantity as delta_squared_difference_derivative, arranged so that the
// bracket is expm1 of a sum of same-signed angles (no cancellation near x = 0).
inline double delta_squared_difference_integrand(double y, double s, double g) {
  const double a1 = std::atan(s / (y - g * s));
  const double a2 = std::atan(s / (y + g * s));
  return 2.0 * s * (1.0 + g * g) * std::exp(-2.0 * g * a2) * std::expm1(2.0 * g * (a1 + a2));
}

// delta_y(x)^2 - delta_y(-x)^2 as the integral of its derivative from 0.
inline double delta_squared_difference(double y, double x, double g) {
  static constexpr std::array<double, 5> kNodes = {0.1488743389816312, 0.4333953941292472,
                                                   0.6794095682990244, 0.8650633666889845,
                                                   0.9739065285171717};
  static constexpr std::array<double, 5> kWeights = {0.2955242247147529, 0.2692667193099963,
                                                     0.2190863625159820, 0.1494513491505806,
                                                     0.0666713443086881};
  constexpr int kPanels = 4;
  const double width = x / kPanels;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * width;
    const double half = 0.5 * width;
    double panel = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      panel += kWeights[i] * (delta_squared_difference_integrand(y, mid - half * kNodes[i], g) +
                              delta_squared_difference_integrand(y, mid + half * kNodes[i], g));
    }
    total += half * panel;
  }
  return total;
}

}  // namespace detail

/// f(y) evaluated literally as the difference of the two landing ordinates.
/// Loses relative accuracy near roots of h, where f = O(h^3).
inline double displacement_direct(double y, const PWLSystem& system) {
  return left_exit_y(y, system) - right_entry_y(y, system);
}

/// Displacement function f(y) = phi2-(t_L) - phi2+(t_R). f > 0 means the orbit
/// through (h(y), y) moves towards the origin over one turn.
inline double displacement(double y, const PWLSystem& system) {
  const double g = system.gamma();
  const double h = detail::checked_boundary_value(y, system, "displacement");
  if (h == 0.0) return 0.0;
  const double numerator = detail::delta_squared_difference(y, h, g);
  const double denominator = delta(y, h, system.params()) + delta(y, -h, system.params());
  return std::exp(-g * kPi) * numerator / denominator;
}

/// f'''(y*) at a root of h, where f'(y*) = f''(y*) = 0.
inline double displacement_f3_at_root(double y_star, double h_prime, const SystemParams& params) {
  if (!(y_star > 0.0)) throw DomainError("displacement_f3_at_root: y* must be positive");
  const double g = params.gamma();
  return 8.0 * g * (1.0 + g * g) * std::exp(-kPi * g) * h_prime * h_prime * h_prime /
         (y_star * y_star);
}

}  // namespace pwlc
