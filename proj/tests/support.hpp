// Shared fixtures: the three families at their reference parameters.
#pragma once

#include <cmath>

#include "pwlc/pwlc.hpp"

namespace pwlc::test {

inline BoundaryDescriptor sine_desc(int n) {
  BoundaryDescriptor d;
  d.family = FamilyKind::sine;
  d.n = n;
  return d;
}

inline BoundaryDescriptor cosine_desc(int n) {
  BoundaryDescriptor d;
  d.family = FamilyKind::cosine;
  d.n = n;
  return d;
}

inline BoundaryDescriptor oscillatory_desc(double alpha) {
  BoundaryDescriptor d;
  d.family = FamilyKind::oscillatory;
  d.alpha = alpha;
  return d;
}

inline PWLSystem center(double gamma = 0.75) { return make_system(gamma, BoundaryDescriptor{}); }
inline PWLSystem sine_system(int n = 2, double gamma = 0.75) { return make_system(gamma, sine_desc(n)); }
inline PWLSystem cosine_system(int n = 2, double gamma = 0.4) {
  return make_system(gamma, cosine_desc(n));
}
inline PWLSystem oscillatory_system(double alpha = 0.3) {
  return make_system(1.0, oscillatory_desc(alpha));
}

/// Linear boundary h(y) = slope * y.
inline PWLSystem linear_system(double gamma, double slope) {
  return PWLSystem(SystemParams(gamma),
                   make_custom([slope](double y) { return y > 0.0 ? slope * y : 0.0; },
                               [slope](double) { return slope; }, "linear"));
}

}  // namespace pwlc::test
