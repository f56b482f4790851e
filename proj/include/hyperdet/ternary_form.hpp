#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hyperdet {

using cplx = std::complex<double>;
using Point3 = std::array<cplx, 3>;

/// Exponent triple (i, j, k) of the monomial t^i x^j y^k.
struct Exponent {
  int t = 0;
  int x = 0;
  int y = 0;
  friend bool operator==(const Exponent&, const Exponent&) = default;
};

/// Dense homogeneous polynomial of degree d in (t, x, y).
///
/// Coefficients are stored in graded-lexicographic order with t > x > y, so
/// index 0 is always t^d. A form of degree d has binom(d+2, 2) coefficients.
class TernaryForm {
 public:
  TernaryForm() = default;
  explicit TernaryForm(int degree);

  static TernaryForm t_power(int degree);
  static std::size_t size_for(int degree) noexcept {
    return static_cast<std::size_t>(degree + 1) * static_cast<std::size_t>(degree + 2) / 2;
  }
  static std::size_t index_of(int degree, const Exponent& e) noexcept;
  static Exponent exponent_at(int degree, std::size_t index) noexcept;

  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  cplx coeff(const Exponent& e) const { return coeffs_[index_of(degree_, e)]; }
  cplx& coeff(const Exponent& e) { return coeffs_[index_of(degree_, e)]; }
  cplx operator[](std::size_t idx) const { return coeffs_[idx]; }
  cplx& operator[](std::size_t idx) { return coeffs_[idx]; }

  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::span<cplx> coeffs() noexcept { return coeffs_; }

  /// True when every coefficient has |Im| < tol.
  bool is_real(double tol = 1e-12) const noexcept;
  double max_abs_coeff() const noexcept;

  TernaryForm& operator+=(const TernaryForm& other);
  TernaryForm& operator-=(const TernaryForm& other);
  TernaryForm& operator*=(cplx scale) noexcept;

  friend TernaryForm operator+(TernaryForm a, const TernaryForm& b) { return a += b; }
  friend TernaryForm operator-(TernaryForm a, const TernaryForm& b) { return a -= b; }
  friend TernaryForm operator*(cplx s, TernaryForm a) { return a *= s; }

 private:
  int degree_ = 0;
  std::vector<cplx> coeffs_{cplx(0.0)};
};

/// Sampled hyperbolicity certificate. Roots are compared after normalizing
/// by (1 + |root|); this is numerical evidence, not a proof.
struct HyperbolicityReport {
  bool is_hyperbolic = false;
  bool is_strict = false;
  double max_imag = 0.0;
  double min_gap = 0.0;
  std::array<double, 2> witness_direction{1.0, 0.0};
};

cplx evaluate(const TernaryForm& f, const Point3& pt);

/// Coefficients of f(t, u, v) as a polynomial in t, highest power first.
std::vector<cplx> restrict_direction(const TernaryForm& f, double u, double v);

/// Roots of a univariate polynomial given highest power first, via the
/// eigenvalues of the balanced companion matrix followed by a Newton polish.
std::vector<cplx> univariate_roots(std::span<const cplx> coeffs);

/// Evaluates a univariate polynomial (highest power first) at z.
cplx horner(std::span<const cplx> coeffs, cplx z) noexcept;

inline constexpr int kDefaultDirections = 64;
inline constexpr double kDefaultHyperbolicTol = 1e-7;

HyperbolicityReport check_hyperbolic(const TernaryForm& f, int n_dirs = kDefaultDirections,
                                     double tol = kDefaultHyperbolicTol);

std::array<cplx, 3> gradient_at(const TernaryForm& f, const Point3& pt);

/// k-th derivative with respect to t; the result has degree d - k.
TernaryForm diff_t(const TernaryForm& f, int k);

/// Max over monomials of |coeff_f - coeff_g|.
double coeff_distance(const TernaryForm& f, const TernaryForm& g);

/// Divides through by coeff(t^d). Throws LeadingCoefficientZero when it
/// vanishes.
TernaryForm normalize_leading(const TernaryForm& f);

/// Product of a binary form in (x, y), given as coefficients of
/// x^a y^{deg-a} for a = deg..0, with a ternary form.
TernaryForm multiply_binary(std::span<const cplx> binary, const TernaryForm& f);

/// Drops imaginary parts. Callers check is_real() first.
TernaryForm real_part(const TernaryForm& f);

}  // namespace hyperdet
