#include "hyperdet/oracle.hpp"

#include <cmath>

#include "hyperdet/error.hpp"

namespace hyperdet {

ConicSolutionSet solve_conic(const TernaryForm& input) {
  if (input.degree() != 2) throw Error(ErrorCode::InvalidArgument, "solve_conic needs a degree-2 form");
  if (!input.is_real()) throw Error(ErrorCode::NotReal, "solve_conic needs real coefficients");
  const TernaryForm p = normalize_leading(input);
  const double c_tx = p.coeff({1, 1, 0}).real();
  const double c_ty = p.coeff({1, 0, 1}).real();
  const double c_xx = p.coeff({0, 2, 0}).real();
  const double c_xy = p.coeff({0, 1, 1}).real();
  const double c_yy = p.coeff({0, 0, 2}).real();

  // p(t, -1, 0) = t^2 - c_tx t + c_xx.
  const double disc = c_tx * c_tx - 4.0 * c_xx;
  const double scale = 1.0 + std::abs(c_tx);
  if (disc < -1e-12 * scale * scale) {
    throw Error(ErrorCode::InternalInconsistency, "p(t, -1, 0) has non-real roots");
  }
  const double root = std::sqrt(std::max(disc, 0.0));
  const double d_hi = 0.5 * (c_tx + root);
  const double d_lo = 0.5 * (c_tx - root);
  if (d_hi - d_lo < 1e-9) throw Error(ErrorCode::RepeatedD, "d1 = d2");

  ConicSolutionSet out;
  for (const auto& [d1, d2] : {std::pair{d_lo, d_hi}, std::pair{d_hi, d_lo}}) {
    const double r11 = (d1 * c_ty - c_xy) / (d1 - d2);
    const double r22 = c_ty - r11;
    double r12_sq = r11 * r22 - c_yy;
    const double tol = 1e-12 * (1.0 + std::abs(r11 * r22) + std::abs(c_yy));
    if (r12_sq < -tol) {
      throw Error(ErrorCode::InternalInconsistency, "negative r12^2 contradicts hyperbolicity");
    }
    const double r12 = std::sqrt(std::max(r12_sq, 0.0));
    for (double sign : {1.0, -1.0}) {
      SymPair z(2);
      z.diag(0) = d1;
      z.diag(1) = d2;
      z.sym(0, 0) = r11;
      z.sym(1, 1) = r22;
      z.sym(0, 1) = sign * r12;
      out.solutions.push_back(std::move(z));
    }
  }
  return out;
}

bool brute_coeff_match(const TernaryForm& p, const SymPair& z) {
  if (p.degree() != z.d()) throw Error(ErrorCode::DegreeMismatch, "brute_coeff_match");
  return coeff_distance(phi_coeffs(z), p) < 1e-8;
}

}  // namespace hyperdet
