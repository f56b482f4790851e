#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numeric>
#include <random>
#include <tuple>
#include <vector>

#include "hyperdet/detmap.hpp"
#include "hyperdet/ternary_form.hpp"
#include "hyperdet/text_parser.hpp"

namespace fixtures {

using hyperdet::cplx;
using hyperdet::SymPair;
using hyperdet::TernaryForm;

inline constexpr const char* kSextic =
    "-36 x^6 - 157 x^4 y^2 - 20 x^3 y^3 - 109 x^2 y^4 + 246 x y^5 - 92 y^6 - 12 x^3 y^2 t"
    " + 90 x^2 y^3 t + 10 x y^4 t + 76 y^5 t + 49 x^4 t^2 + 156 x^2 y^2 t^2 - 16 x y^3 t^2"
    " + 132 y^4 t^2 + 12 x y^2 t^3 - 14 y^3 t^3 - 14 x^2 t^4 - 27 y^2 t^4 + t^6";

inline constexpr const char* kQuartic =
    "1/19*(19*t^4 - 31*x^2*t^2 - 86*y^2*t^2 + 9*x^4 + 41*x^2*y^2 + 39*y^4)";

// Smooth quartic whose path meets the singular quartic at s = 9/10.
inline constexpr const char* kQuarticR =
    "(124659 t^4 - 221616 t^3 (x+y) - 324 t^2 (205 x^2 - 912 x y + 1580 y^2)"
    " + 1440 t (98 x^3 + 41 x^2 y + 316 x y^2 + 373 y^3)"
    " + 40 (1099 x^4 - 1568 x^3 y + 5540 x^2 y^2 - 5968 x y^3 + 5849 y^4)) / 124659";

// Exact preimage of the singular quartic under the family at s = 1/9.
inline constexpr const char* kQuarticPreimage =
    "(19 t^4 - 2432 t^3 x - 2432 t^3 y + 143409 t^2 x^2 + 233472 t^2 x y + 138954 t^2 y^2"
    " - 4508736 t x^3 - 9178176 t x^2 y - 8893056 t x y^2 - 4223616 t y^3"
    " + 62217129 x^4 + 144279552 x^3 y + 174916041 x^2 y^2 + 135155712 x y^3"
    " + 56711559 y^4) / 19";

inline TernaryForm sextic() { return hyperdet::parse_polynomial_text(kSextic); }
inline TernaryForm quartic() { return hyperdet::parse_polynomial_text(kQuartic); }

inline SymPair sextic_pair() {
  const int R[6][6] = {{0, 1, -1, 1, 2, 1},  {1, 0, -1, -2, 1, -1}, {-1, -1, 0, 1, 2, 1},
                       {1, -2, 1, 0, -1, 1}, {2, 1, 2, -1, 0, -2}, {1, -1, 1, 1, -2, 0}};
  const int D[6] = {-3, -2, -1, 1, 2, 3};
  SymPair z(6);
  for (int j = 0; j < 6; ++j) {
    z.diag(j) = D[j];
    for (int k = j; k < 6; ++k) z.sym(j, k) = R[j][k];
  }
  return z;
}

// Six-digit fiber point over the fixed sextic endpoint.
inline SymPair six_digit_endpoint_pair() {
  const double D[6] = {.222847, 1.18893, 2.99274, 5.77514, 9.83747, 15.9829};
  const double R[6][6] = {{6, 2.51352, 1.19571, 4.04309, 1.42786, -1.98597},
                          {2.51352, 6, 3.08656, .468873, 2.38468, 1.05948},
                          {1.19571, 3.08656, 6, .785785, 4.66027, 2.29433},
                          {4.04309, .468873, .785785, 6, 1.6226, .933245},
                          {1.42786, 2.38468, 4.66027, 1.6226, 6, 3.50198},
                          {-1.98597, 1.05948, 2.29433, .933245, 3.50198, 6}};
  SymPair z(6);
  for (int j = 0; j < 6; ++j) {
    z.diag(j) = D[j];
    for (int k = j; k < 6; ++k) z.sym(j, k) = R[j][k];
  }
  return z;
}

inline SymPair random_real_pair(int d, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  SymPair z(d);
  for (auto& c : z.coords()) c = u(rng);
  return z;
}

inline SymPair random_complex_pair(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SymPair z(d);
  for (auto& c : z.coords()) c = cplx(u(rng), u(rng));
  return z;
}

inline hyperdet::Point3 random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
}

// Sparse polynomial in (t, x, y) used by the independent determinant oracle.
using Mono = std::tuple<int, int, int>;
using Sparse = std::map<Mono, cplx>;

inline Sparse multiply(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      const Mono e{std::get<0>(ea) + std::get<0>(eb), std::get<1>(ea) + std::get<1>(eb),
                   std::get<2>(ea) + std::get<2>(eb)};
      out[e] += ca * cb;
    }
  }
  return out;
}

// det(tI + xD + yR) by the Leibniz expansion over all permutations.
inline TernaryForm leibniz_det(const SymPair& z) {
  const int d = z.d();
  std::vector<int> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), 0);
  Sparse total;
  do {
    int inversions = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Sparse term{{Mono{0, 0, 0}, cplx(inversions % 2 ? -1.0 : 1.0)}};
    for (int i = 0; i < d; ++i) {
      const int j = perm[i];
      Sparse entry;
      if (i == j) {
        entry[Mono{1, 0, 0}] = 1.0;
        entry[Mono{0, 1, 0}] = z.diag(i);
      }
      entry[Mono{0, 0, 1}] = z.sym(std::min(i, j), std::max(i, j));
      term = multiply(term, entry);
    }
    for (const auto& [e, c] : term) total[e] += c;
  } while (std::next_permutation(perm.begin(), perm.end()));
  TernaryForm f(d);
  for (const auto& [e, c] : total) f.coeff({std::get<0>(e), std::get<1>(e), std::get<2>(e)}) += c;
  return f;
}

inline double max_abs(const TernaryForm& f) {
  double m = 0.0;
  for (cplx c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

inline double rel_distance(const TernaryForm& f, const TernaryForm& g) {
  return hyperdet::coeff_distance(f, g) / std::max(1.0, max_abs(g));
}

}  // namespace fixtures
