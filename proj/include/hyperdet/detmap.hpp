#pragma once

#include <Eigen/Dense>

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <vector>

#include "hyperdet/ternary_form.hpp"

namespace hyperdet {

/// A point (D, R) of the space of pairs: D diagonal, R symmetric.
///
/// The m = d(d+3)/2 coordinates are laid out as the d diagonal entries of D
/// followed by the upper triangle of R in row-major order
/// (r_00, r_01, ..., r_0{d-1}, r_11, ...).
class SymPair {
 public:
  SymPair() = default;
  explicit SymPair(int d);
  SymPair(int d, std::vector<cplx> coords);
  static SymPair from_matrices(const Eigen::VectorXcd& diag, const Eigen::MatrixXcd& sym);

  static std::size_t dimension(int d) noexcept {
    return static_cast<std::size_t>(d) * static_cast<std::size_t>(d + 3) / 2;
  }
  static std::size_t sym_index(int d, int j, int k) noexcept;

  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return coords_.size(); }

  cplx diag(int k) const { return coords_[static_cast<std::size_t>(k)]; }
  cplx& diag(int k) { return coords_[static_cast<std::size_t>(k)]; }
  cplx sym(int j, int k) const { return coords_[sym_index(d_, j, k)]; }
  cplx& sym(int j, int k) { return coords_[sym_index(d_, j, k)]; }

  const std::vector<cplx>& coords() const noexcept { return coords_; }
  std::vector<cplx>& coords() noexcept { return coords_; }

  Eigen::VectorXcd diag_vector() const;
  Eigen::MatrixXcd sym_matrix() const;

  double max_imag() const noexcept;
  bool is_real(double tol = 1e-12) const noexcept { return max_imag() < tol; }
  double norm() const noexcept;

 private:
  int d_ = 0;
  std::vector<cplx> coords_;
};

/// t*I + x*D + y*R.
Eigen::MatrixXcd pencil_at(const SymPair& z, const Point3& pt);

/// det(t*I + x*D + y*R) by LU with partial pivoting.
cplx phi_eval(const SymPair& z, const Point3& pt);

struct ValueAndGradient {
  cplx value;
  Eigen::VectorXcd grad;
};

/// Determinant together with its gradient in the m pair coordinates, from a
/// single adjugate of the pencil.
ValueAndGradient phi_eval_grad(const SymPair& z, const Point3& pt);

/// Adjugate of a square matrix: det(M) * M^{-1} away from singularity, a
/// cofactor expansion otherwise.
Eigen::MatrixXcd adjugate(const Eigen::MatrixXcd& m);

/// Full coefficient vector of det(t*I + x*D + y*R).
///
/// The dehomogenized determinant det(I + xD + yR) has degree at most d in
/// each of x and y, so sampling (x, y) on the (d+1) x (d+1) grid of roots of
/// unity and applying the inverse 2-D DFT recovers every coefficient through
/// a unitary map.
TernaryForm phi_coeffs(const SymPair& z);

/// Jacobian of the m free coefficients of phi_coeffs (all monomials except
/// t^d, in graded-lex order) with respect to the m pair coordinates.
Eigen::MatrixXcd phi_coeffs_jacobian(const SymPair& z);

/// Sorted real roots of p(t, -1, 0): the diagonal of D in every
/// representation of p.
std::vector<double> extract_D_candidates(const TernaryForm& p);

struct FiberCardinality {
  boost::multiprecision::cpp_int complex_count;
  boost::multiprecision::cpp_int real_count;
};

/// Number of complex and real points in a fiber over a smooth hyperbolic
/// polynomial of degree d, with g = binom(d-1, 2):
/// 2^{g-1} (2^g + 1) 2^{d-1} d! complex and 2^g 2^{d-1} d! real.
FiberCardinality fiber_cardinality(int d);

}  // namespace hyperdet
