#pragma once

#include <vector>

#include "hyperdet/detmap.hpp"
#include "hyperdet/ternary_form.hpp"

namespace hyperdet {

/// Independent closed-form solver for conics.
///
/// With D = diag(d1, d2) and R = [[r11, r12], [r12, r22]],
///   det(tI + xD + yR) = t^2 + (d1 + d2) tx + (r11 + r22) ty + d1 d2 x^2
///                       + (d1 r22 + d2 r11) xy + (r11 r22 - r12^2) y^2,
/// so d1, d2 are the roots of p(t, -1, 0), the ty and xy coefficients give a
/// 2x2 linear system for r11, r22, and r12 = +-sqrt(r11 r22 - coeff(y^2)).
struct ConicSolutionSet {
  std::vector<SymPair> solutions;
};

/// Enumerates the 2 orderings x 2 signs of the fiber over a strictly
/// hyperbolic conic. Throws RepeatedD when d1 = d2 within 1e-9 and
/// InternalInconsistency when r12^2 comes out negative.
ConicSolutionSet solve_conic(const TernaryForm& p);

/// coeff_distance(phi_coeffs(z), p) < 1e-8.
bool brute_coeff_match(const TernaryForm& p, const SymPair& z);

}  // namespace hyperdet
