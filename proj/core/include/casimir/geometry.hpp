#pragma once

#include <stdexcept>

namespace casimir {

/// Sphere of radius R above a plane, closest surface-surface gap L.
struct Geometry {
  double R;  // m
  double L;  // m

  Geometry(double radius, double gap) : R(radius), L(gap) {
    if (!(R > 0.0) || !(L > 0.0))
      throw std::invalid_argument("geometry: R and L must be > 0");
  }

  double center_distance() const { return L + R; }  // plane to sphere center
  double aspect() const { return R / L; }
};

}  // namespace casimir
