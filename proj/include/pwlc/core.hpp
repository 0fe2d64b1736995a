// Two-zone planar piecewise-linear system with a curved switching boundary.
//
//   X' = G- X  if H(X) <  0
//   X' = G+ X  if H(X) >= 0
//
//   G+- = [[+-2 gamma, -1], [gamma^2 + 1, 0]],   H(x, y) = x for y <= 0, x - h(y) for y > 0.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pwlc {

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value produced by a boundary or flow evaluation.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A boundary-level hypothesis (|h(y)| < y/gamma etc.) fails where a formula needs it.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

/// Family parameters outside the range for which the construction is valid.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Points and zones

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point a, Point b) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point p) { return std::hypot(p.x, p.y); }
inline bool is_finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

enum class Zone { left, right };

inline const char* to_string(Zone z) { return z == Zone::left ? "left" : "right"; }

/// +1 for the expanding right zone, -1 for the contracting left zone.
inline constexpr double zone_sign(Zone z) { return z == Zone::right ? 1.0 : -1.0; }

// ---------------------------------------------------------------------------
// Parameters and matrices

class SystemParams {
 public:
  explicit SystemParams(double gamma) : gamma_(gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw DomainError("gamma must be a finite positive number, got " + std::to_string(gamma));
    }
  }

  double gamma() const { return gamma_; }

 private:
  double gamma_;
};

struct Matrix2 {
  double a11, a12, a21, a22;

  Point operator*(Point p) const { return {a11 * p.x + a12 * p.y, a21 * p.x + a22 * p.y}; }
  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  double discriminant() const { return trace() * trace() - 4.0 * det(); }
};

struct ZoneMatrices {
  Matrix2 plus;
  Matrix2 minus;

  explicit ZoneMatrices(const SystemParams& params)
      : plus{2.0 * params.gamma(), -1.0, params.gamma() * params.gamma() + 1.0, 0.0},
        minus{-2.0 * params.gamma(), -1.0, params.gamma() * params.gamma() + 1.0, 0.0} {}

  const Matrix2& of(Zone z) const { return z == Zone::right ? plus : minus; }
};

// ---------------------------------------------------------------------------
// Boundary descriptor (serialization tag for a boundary function)

enum class FamilyKind { zero, sine, oscillatory, cosine, table, custom };

inline const char* to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::zero: return "zero";
    case FamilyKind::sine: return "sine";
    case FamilyKind::oscillatory: return "oscillatory";
    case FamilyKind::cosine: return "cosine";
    case FamilyKind::table: return "table";
    case FamilyKind::custom: return "custom";
  }
  return "custom";
}

/// One row of a tabulated boundary. A NaN slope means "estimate it".
struct TableSample {
  double y = 0.0;
  double h = 0.0;
  double slope = std::numeric_limits<double>::quiet_NaN();
};

struct BoundaryDescriptor {
  FamilyKind family = FamilyKind::zero;
  int n = 0;           // sine, cosine
  double alpha = 0.0;  // oscillatory
  std::vector<TableSample> samples;  // table
  std::string label;   // custom
};

// ---------------------------------------------------------------------------
// Boundary: the C^1 function h with h(0) = 0 and its derivative.

class Boundary {
 public:
  using Fn = std::function<double(double)>;

  Boundary(Fn value, Fn derivative, BoundaryDescriptor descriptor)
      : impl_(std::make_shared<const Impl>(Impl{std::move(value), std::move(derivative),
                                                 std::move(descriptor)})) {
    const double h0 = impl_->value(0.0);
    if (h0 != 0.0) {
      throw DomainError("boundary must satisfy h(0) = 0, got h(0) = " + std::to_string(h0));
    }
  }

  /// h(y); throws EvaluationError on a non-finite result.
  double value(double y) const {
    const double v = impl_->value(y);
    if (!std::isfinite(v)) {
      throw EvaluationError("boundary value is not finite at y = " + std::to_string(y));
    }
    return v;
  }

  /// h'(y); throws EvaluationError on a non-finite result.
  double derivative(double y) const {
    const double v = impl_->derivative(y);
    if (!std::isfinite(v)) {
      throw EvaluationError("boundary derivative is not finite at y = " + std::to_string(y));
    }
    return v;
  }

  double operator()(double y) const { return value(y); }

  const BoundaryDescriptor& descriptor() const { return impl_->descriptor; }
  FamilyKind family() const { return impl_->descriptor.family; }

 private:
  struct Impl {
    Fn value;
    Fn derivative;
    BoundaryDescriptor descriptor;
  };
  std::shared_ptr<const Impl> impl_;
};

struct DerivativeMismatch {
  double y;
  double analytic;
  double finite_difference;
};

/// Compares h' against a central difference of h at each sample point. Returns
/// the points where |h' - fd| > tol * max(1, |h'|).
inline std::vector<DerivativeMismatch> derivative_mismatches(const Boundary& boundary,
                                                             const std::vector<double>& ys,
                                                             double tol = 1e-6) {
  std::vector<DerivativeMismatch> out;
  for (double y : ys) {
    const double step = 1e-6 * std::max(1.0, std::abs(y));
    const double lo = std::max(0.0, y - step);
    const double hi = y + step;
    const double fd = (boundary.value(hi) - boundary.value(lo)) / (hi - lo);
    const double d = boundary.derivative(y);
    if (std::abs(d - fd) > tol * std::max(1.0, std::abs(d))) out.push_back({y, d, fd});
  }
  return out;
}

// ---------------------------------------------------------------------------
// The system

class PWLSystem {
 public:
  PWLSystem(SystemParams params, Boundary boundary)
      : params_(params), matrices_(params), boundary_(std::move(boundary)) {}

  const SystemParams& params() const { return params_; }
  double gamma() const { return params_.gamma(); }
  const ZoneMatrices& matrices() const { return matrices_; }
  const Boundary& boundary() const { return boundary_; }

 private:
  SystemParams params_;
  ZoneMatrices matrices_;
  Boundary boundary_;
};

/// H(p): x for y <= 0, x - h(y) for y > 0.
inline double manifold_value(const PWLSystem& system, Point p) {
  if (!is_finite(p)) throw EvaluationError("manifold_value: non-finite point");
  if (p.y <= 0.0) return p.x;
  return p.x - system.boundary().value(p.y);
}

/// grad H(p): (1, 0) for y <= 0, (1, -h'(y)) for y > 0.
inline Point manifold_gradient(const PWLSystem& system, Point p) {
  if (p.y <= 0.0) return {1.0, 0.0};
  return {1.0, -system.boundary().derivative(p.y)};
}

/// Zone containing p; H = 0 belongs to the right zone.
inline Zone zone_of(const PWLSystem& system, Point p) {
  return manifold_value(system, p) < 0.0 ? Zone::left : Zone::right;
}

inline Point zone_field(const PWLSystem& system, Zone zone, Point p) {
  return system.matrices().of(zone) * p;
}

inline Point vector_field(const PWLSystem& system, Point p) {
  return zone_field(system, zone_of(system, p), p);
}

}  // namespace pwlc
