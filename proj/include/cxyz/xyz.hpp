#pragma once

namespace cxyz {

// Canonical XYZ interaction strengths (angular frequency per spin unit):
//   H = chi_x Jx^2 + chi_y Jy^2 + chi_z Jz^2.
// casimir_gauge records the coefficient of the J.J term that was folded into
// the three couplings; it shifts all of chi_x/y/z equally and is dynamically
// irrelevant inside a fixed-J manifold.
struct XYZCouplings {
  double chi_x = 0.0;
  double chi_y = 0.0;
  double chi_z = 0.0;
  double casimir_gauge = 0.0;
};

}  // namespace cxyz
