// Certification of the matrix hypotheses, the boundary hypotheses on a grid
// of ordinates, and the transversality (no-sliding) inequalities.
//
//   H1'  |h(y)| < y / gamma
//   H2'  h(y) (2 gamma - (1 + gamma^2) h'(y)) < y
//   H3'  h(y) (2 gamma + (1 + gamma^2) h'(y)) > -y
#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "pwlc/core.hpp"

namespace pwlc {

struct MatrixHypotheses {
  bool h1 = false;  // g12+- < 0
  bool h2 = false;  // complex eigenvalues, Re < 0 on the left and > 0 on the right
};

inline MatrixHypotheses check_matrix_hypotheses(const SystemParams& params) {
  const ZoneMatrices m(params);
  MatrixHypotheses out;
  out.h1 = m.plus.a12 < 0.0 && m.minus.a12 < 0.0;
  const bool complex_pair = m.plus.discriminant() < 0.0 && m.minus.discriminant() < 0.0;
  // Real part of a complex pair is trace / 2.
  out.h2 = complex_pair && m.minus.trace() / 2.0 < 0.0 && m.plus.trace() / 2.0 > 0.0;
  return out;
}

struct Transversality {
  double left_ip;   // <grad H, G- (h(y), y)>
  double right_ip;  // <grad H, G+ (h(y), y)>
  bool crossing;    // both negative: orbits cross from right to left
};

inline Transversality check_transversality(const PWLSystem& system, double y) {
  if (!(y > 0.0)) throw DomainError("check_transversality: y must be positive");
  const double g = system.gamma();
  const double h = system.boundary().value(y);
  const double hp = system.boundary().derivative(y);
  Transversality t;
  t.right_ip = -y + h * (2.0 * g - (1.0 + g * g) * hp);
  t.left_ip = -y + h * (-2.0 * g - (1.0 + g * g) * hp);
  t.crossing = t.left_ip < 0.0 && t.right_ip < 0.0;
  return t;
}

struct Violation {
  std::string hypothesis;  // "H1'", "H2'", "H3'", "transversality"
  double y;
  double lhs;
  double rhs;
};

struct GridVerdict {
  double y;
  bool h1p;
  bool h2p;
  bool h3p;
  bool transversal;
};

struct HypothesisReport {
  bool h1_matrix = false;
  bool h2_matrix = false;
  std::vector<GridVerdict> samples;
  std::vector<Violation> violations;  // sorted by y
  std::vector<Violation> warnings;    // satisfied, but within 1e-9 of the bound

  bool passed() const { return h1_matrix && h2_matrix && violations.empty(); }
};

inline constexpr double kNearViolation = 1e-9;

/// Evaluates H1'-H3' and transversality at every grid ordinate.
inline HypothesisReport check_boundary_hypotheses(const PWLSystem& system,
                                                  const std::vector<double>& y_grid) {
  if (y_grid.empty()) throw DomainError("check_boundary_hypotheses: empty grid");
  for (std::size_t i = 0; i < y_grid.size(); ++i) {
    if (!(y_grid[i] > 0.0)) throw DomainError("check_boundary_hypotheses: grid must be positive");
    if (i > 0 && !(y_grid[i] > y_grid[i - 1])) {
      throw DomainError("check_boundary_hypotheses: grid must be strictly increasing");
    }
  }

  HypothesisReport report;
  const auto mh = check_matrix_hypotheses(system.params());
  report.h1_matrix = mh.h1;
  report.h2_matrix = mh.h2;

  const double g = system.gamma();
  const double k = 1.0 + g * g;
  report.samples.reserve(y_grid.size());
  for (double y : y_grid) {
    double h = 0.0;
    double hp = 0.0;
    try {
      h = system.boundary().value(y);
      hp = system.boundary().derivative(y);
    } catch (const EvaluationError& e) {
      throw EvaluationError(std::string("hypothesis check failed at y = ") + std::to_string(y) +
                            ": " + e.what());
    }

    // lhs < rhs form for each inequality
    const Violation h1{"H1'", y, std::abs(h), y / g};
    const Violation h2{"H2'", y, h * (2.0 * g - k * hp), y};
    const Violation h3{"H3'", y, -y, h * (2.0 * g + k * hp)};
    GridVerdict v{y, h1.lhs < h1.rhs, h2.lhs < h2.rhs, h3.lhs < h3.rhs, false};
    const auto tr = check_transversality(system, y);
    v.transversal = tr.crossing;
    report.samples.push_back(v);

    auto record = [&](const Violation& c, bool ok, Violation shown) {
      if (!ok) {
        report.violations.push_back(shown);
      } else if (c.rhs - c.lhs < kNearViolation) {
        report.warnings.push_back(shown);
      }
    };
    record(h1, v.h1p, h1);
    record(h2, v.h2p, h2);
    // H3' is reported as written, lhs > rhs.
    record(h3, v.h3p, Violation{"H3'", y, h3.rhs, h3.lhs});
    if (!tr.crossing) {
      report.violations.push_back({"transversality", y, std::max(tr.left_ip, tr.right_ip), 0.0});
    }
  }
  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.y < b.y; });
  return report;
}

/// n points with geometric spacing from y_min to y_max.
inline std::vector<double> geometric_grid(double y_min, double y_max, std::size_t n = 4096) {
  if (!(y_min > 0.0) || !(y_max > y_min)) throw DomainError("geometric_grid: need 0 < y_min < y_max");
  if (n < 2) throw DomainError("geometric_grid: need at least two points");
  std::vector<double> out(n);
  const double ratio = std::log(y_max / y_min);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = y_min;
  out.back() = y_max;
  return out;
}

/// n points with uniform spacing from y_min to y_max.
inline std::vector<double> uniform_grid(double y_min, double y_max, std::size_t n) {
  if (!(y_max > y_min)) throw DomainError("uniform_grid: need y_min < y_max");
  if (n < 2) throw DomainError("uniform_grid: need at least two points");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = y_min + (y_max - y_min) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace pwlc
