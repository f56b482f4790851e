#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "hyperdet/ternary_form.hpp"

namespace hyperdet {

/// The linear form a*x + b*y.
struct LinearForm {
  double a = 0.0;
  double b = 0.0;
};

/// Sequence of linear forms driving the randomized path. For a path of
/// degree d it needs at least max(d, 2) forms, none identically zero.
struct LinearFormSet {
  std::vector<LinearForm> forms;

  std::size_t size() const noexcept { return forms.size(); }
  /// Stable FNV-1a hash of the bit patterns, used for cache keys.
  std::uint64_t hash() const noexcept;
};

/// Draws `count` forms with coefficients uniform in [-1, 1], rejecting any
/// with |a| + |b| < 0.1.
LinearFormSet sample_linear_forms(int count, std::uint64_t seed);

struct OriginalPath {};
struct RandomizedPath {
  LinearFormSet forms;
};
using PathKind = std::variant<OriginalPath, RandomizedPath>;

inline bool is_randomized(const PathKind& kind) noexcept {
  return std::holds_alternative<RandomizedPath>(kind);
}

/// p + s * l * dp/dt.
TernaryForm apply_T(const TernaryForm& f, const LinearForm& l, cplx s);

/// p(t, s*x, s*y).
TernaryForm apply_G(const TernaryForm& f, cplx s);

/// Composition of T operators: (T^x)^d (T^y)^d for the original path,
/// T^{l_1} ... T^{l_e} for the randomized one. The rightmost factor is
/// applied first.
TernaryForm apply_F(const TernaryForm& f, cplx s, const PathKind& kind);

/// Closed form sum_k s^k sigma_k(l_1, ..., l_e) d^k/dt^k f of the randomized
/// F operator.
TernaryForm expand_F_randomized(const TernaryForm& f, cplx s, const LinearFormSet& forms);

/// Universal endpoint F_1(t^d) of every path of degree d and the given kind.
/// Throws EndpointNotStrict when the strict hyperbolicity certificate fails.
TernaryForm fixed_endpoint(int degree, const PathKind& kind);

/// Randomized path kind for degree d with forms resampled (up to ten times)
/// until fixed_endpoint certifies strictness.
PathKind make_randomized_kind(int degree, std::uint64_t seed);

/// The family s -> N_s(p) = F_{1-s} G_s (p).
///
/// Each coefficient is a polynomial in s of degree at most 2d. It is
/// recovered once, by interpolation at 2d+1 Chebyshev nodes on [0, 1], and
/// stored in the Chebyshev basis of the variable 2s - 1, which keeps both
/// evaluation and differentiation well conditioned.
class NuijFamily {
 public:
  NuijFamily(TernaryForm base, PathKind kind);

  const TernaryForm& base() const noexcept { return base_; }
  const PathKind& kind() const noexcept { return kind_; }
  int degree() const noexcept { return base_.degree(); }

  /// Chebyshev coefficients of the monomial at `index`.
  const std::vector<cplx>& s_poly(std::size_t index) const { return s_polys_[index]; }

  TernaryForm at(cplx s) const;
  TernaryForm s_derivative(cplx s) const;

 private:
  TernaryForm base_;
  PathKind kind_;
  std::vector<std::vector<cplx>> s_polys_;
};

inline TernaryForm family_at(const NuijFamily& fam, cplx s) { return fam.at(s); }
inline TernaryForm family_s_derivative(const NuijFamily& fam, cplx s) {
  return fam.s_derivative(s);
}

/// Direct evaluation F_{1-s}(G_s(p)) without the interpolated representation.
TernaryForm nuij_direct(const TernaryForm& p, cplx s, const PathKind& kind);

/// Observed s-degree of the family: the largest k such that some coefficient
/// polynomial has a degree-k term above 1e-10 * scale.
int s_degree_profile(const NuijFamily& fam);

}  // namespace hyperdet
