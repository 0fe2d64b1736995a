// Boundary families: the straight line, the sine and cosine windows, the
// y^2 sin(1/y) oscillation, tabulated boundaries and user callbacks.
#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pwlc/core.hpp"

namespace pwlc {

/// Upper gamma bound for the sine family: sqrt(3/5).
inline double sine_gamma_limit() { return std::sqrt(3.0 / 5.0); }
/// Upper gamma bound for the cosine family: sqrt(3/13).
inline double cosine_gamma_limit() { return std::sqrt(3.0 / 13.0); }
/// Upper alpha bound for the oscillatory family: (sqrt(3) - 1)/2.
inline double oscillatory_alpha_limit() { return (std::sqrt(3.0) - 1.0) / 2.0; }

/// 2 gamma / ((gamma^2 + 1) pi), the common amplitude of the sine and cosine families.
inline double family_amplitude(const SystemParams& params) {
  const double g = params.gamma();
  return 2.0 * g / ((g * g + 1.0) * kPi);
}

inline Boundary make_zero() {
  return Boundary([](double) { return 0.0; }, [](double) { return 0.0; }, BoundaryDescriptor{});
}

/// c sin(pi y) on [0, (2n+1)/2], then the constant c (-1)^n.
inline Boundary make_sine(const SystemParams& params, int n) {
  const double g = params.gamma();
  if (!(g < sine_gamma_limit())) {
    std::ostringstream msg;
    msg << "sine family requires 0 < gamma < sqrt(3/5) = " << sine_gamma_limit()
        << ", got gamma = " << g;
    throw ParameterError(msg.str());
  }
  if (n < 1) throw ParameterError("sine family requires n >= 1, got " + std::to_string(n));
  const double c = family_amplitude(params);
  const double knee = (2.0 * n + 1.0) / 2.0;
  const double tail = (n % 2 == 0) ? c : -c;
  BoundaryDescriptor d;
  d.family = FamilyKind::sine;
  d.n = n;
  return Boundary([=](double y) { return y <= knee ? c * std::sin(kPi * y) : tail; },
                  [=](double y) { return y <= knee ? c * kPi * std::cos(kPi * y) : 0.0; },
                  std::move(d));
}

/// alpha y^2 sin(1/y) for y > 0, 0 at y = 0. The paired gamma must be 1.
inline Boundary make_oscillatory(double alpha) {
  if (!(alpha > 0.0 && alpha < oscillatory_alpha_limit())) {
    std::ostringstream msg;
    msg << "oscillatory family requires 0 < alpha < (sqrt(3)-1)/2 = " << oscillatory_alpha_limit()
        << ", got alpha = " << alpha;
    throw ParameterError(msg.str());
  }
  BoundaryDescriptor d;
  d.family = FamilyKind::oscillatory;
  d.alpha = alpha;
  return Boundary(
      [=](double y) { return y > 0.0 ? alpha * y * y * std::sin(1.0 / y) : 0.0; },
      [=](double y) {
        return y > 0.0 ? 2.0 * alpha * y * std::sin(1.0 / y) - alpha * std::cos(1.0 / y) : 0.0;
      },
      std::move(d));
}

/// k-th root 1/(k pi) of the oscillatory family, k >= 1.
inline double oscillatory_root(int k) {
  if (k < 1) throw DomainError("oscillatory_root: k must be >= 1");
  return 1.0 / (k * kPi);
}

/// c (1 - cos(pi y)) on [0, 2n+1], then the constant 2c. Non-negative.
inline Boundary make_cosine(const SystemParams& params, int n) {
  const double g = params.gamma();
  if (!(g < cosine_gamma_limit())) {
    std::ostringstream msg;
    msg << "cosine family requires 0 < gamma < sqrt(3/13) = " << cosine_gamma_limit()
        << ", got gamma = " << g;
    throw ParameterError(msg.str());
  }
  if (n < 1) throw ParameterError("cosine family requires n >= 1, got " + std::to_string(n));
  const double c = family_amplitude(params);
  const double knee = 2.0 * n + 1.0;
  BoundaryDescriptor d;
  d.family = FamilyKind::cosine;
  d.n = n;
  return Boundary([=](double y) { return y <= knee ? c * (1.0 - std::cos(kPi * y)) : 2.0 * c; },
                  [=](double y) { return y <= knee ? c * kPi * std::sin(kPi * y) : 0.0; },
                  std::move(d));
}

namespace detail {

// Fritsch-Carlson slopes for samples whose slope is missing.
inline void fill_monotone_slopes(std::vector<TableSample>& s) {
  const std::size_t n = s.size();
  std::vector<double> secant(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) secant[i] = (s[i + 1].h - s[i].h) / (s[i + 1].y - s[i].y);

  std::vector<double> m(n);
  m[0] = secant[0];
  m[n - 1] = secant[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    m[i] = (secant[i - 1] * secant[i] <= 0.0) ? 0.0 : 0.5 * (secant[i - 1] + secant[i]);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (secant[i] == 0.0) {
      m[i] = m[i + 1] = 0.0;
      continue;
    }
    const double a = m[i] / secant[i];
    const double b = m[i + 1] / secant[i];
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      m[i] = t * a * secant[i];
      m[i + 1] = t * b * secant[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(s[i].slope)) s[i].slope = m[i];
  }
}

struct HermiteTable {
  std::vector<TableSample> s;

  std::size_t segment(double y) const {
    auto it = std::upper_bound(s.begin(), s.end(), y,
                               [](double v, const TableSample& t) { return v < t.y; });
    const auto idx = static_cast<std::size_t>(std::distance(s.begin(), it));
    return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, s.size() - 2);
  }

  double value(double y) const {
    if (y >= s.back().y) return s.back().h + s.back().slope * (y - s.back().y);
    if (y <= 0.0) return 0.0;
    const std::size_t i = segment(y);
    const double w = s[i + 1].y - s[i].y;
    const double t = (y - s[i].y) / w;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * s[i].h + (t3 - 2 * t2 + t) * w * s[i].slope +
           (-2 * t3 + 3 * t2) * s[i + 1].h + (t3 - t2) * w * s[i + 1].slope;
  }

  double derivative(double y) const {
    if (y >= s.back().y) return s.back().slope;
    if (y < 0.0) return 0.0;
    const std::size_t i = segment(y);
    const double w = s[i + 1].y - s[i].y;
    const double t = (y - s[i].y) / w;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * s[i].h + (3 * t2 - 4 * t + 1) * w * s[i].slope +
            (-6 * t2 + 6 * t) * s[i + 1].h) / w +
           (3 * t2 - 2 * t) * s[i + 1].slope;
  }
};

}  // namespace detail

/// Piecewise-cubic Hermite boundary through (y, h, h') samples. Missing slopes
/// are filled with Fritsch-Carlson monotone estimates; beyond the last sample
/// the boundary continues linearly with the last slope.
inline Boundary make_table(std::vector<TableSample> samples) {
  if (samples.size() < 2) throw ParameterError("table boundary needs at least two samples");
  if (samples.front().y != 0.0 || samples.front().h != 0.0) {
    throw ParameterError("table boundary must start at (y, h) = (0, 0)");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.y) || !std::isfinite(s.h) || std::isinf(s.slope)) {
      throw ParameterError("table boundary sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(s.y > samples[i - 1].y)) {
      throw ParameterError("table boundary samples must be strictly increasing in y (index " +
                           std::to_string(i) + ")");
    }
  }
  BoundaryDescriptor d;
  d.family = FamilyKind::table;
  d.samples = samples;
  detail::fill_monotone_slopes(samples);
  auto table = std::make_shared<const detail::HermiteTable>(detail::HermiteTable{std::move(samples)});
  return Boundary([table](double y) { return table->value(y); },
                  [table](double y) { return table->derivative(y); }, std::move(d));
}

/// Arbitrary user boundary. Not serializable beyond its label.
inline Boundary make_custom(Boundary::Fn value, Boundary::Fn derivative, std::string label) {
  BoundaryDescriptor d;
  d.family = FamilyKind::custom;
  d.label = std::move(label);
  return Boundary(std::move(value), std::move(derivative), std::move(d));
}

/// Builds the boundary named by a descriptor, enforcing each family's parameter range.
inline Boundary make_boundary(const SystemParams& params, const BoundaryDescriptor& d) {
  switch (d.family) {
    case FamilyKind::zero: return make_zero();
    case FamilyKind::sine: return make_sine(params, d.n);
    case FamilyKind::cosine: return make_cosine(params, d.n);
    case FamilyKind::oscillatory:
      if (params.gamma() != 1.0) {
        throw ParameterError("oscillatory family requires gamma = 1, got gamma = " +
                             std::to_string(params.gamma()));
      }
      return make_oscillatory(d.alpha);
    case FamilyKind::table: return make_table(d.samples);
    case FamilyKind::custom:
      throw ParameterError("custom boundaries cannot be rebuilt from a descriptor");
  }
  throw ParameterError("unknown boundary family");
}

inline PWLSystem make_system(double gamma, const BoundaryDescriptor& d) {
  SystemParams params(gamma);
  return PWLSystem(params, make_boundary(params, d));
}

}  // namespace pwlc
