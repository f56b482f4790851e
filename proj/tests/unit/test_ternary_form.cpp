#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hyperdet/error.hpp"
#include "hyperdet/ternary_form.hpp"
#include "hyperdet/text_parser.hpp"

using namespace hyperdet;

namespace {

std::vector<double> sorted_real(const std::vector<cplx>& roots) {
  std::vector<double> out;
  for (cplx r : roots) out.push_back(r.real());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("graded-lex layout starts at t^d") {
  for (int d = 0; d <= 7; ++d) {
    CHECK(TernaryForm::size_for(d) == static_cast<std::size_t>((d + 1) * (d + 2) / 2));
    CHECK(TernaryForm::exponent_at(d, 0) == Exponent{d, 0, 0});
    for (std::size_t i = 0; i < TernaryForm::size_for(d); ++i) {
      const Exponent e = TernaryForm::exponent_at(d, i);
      CHECK(e.t + e.x + e.y == d);
      CHECK(TernaryForm::index_of(d, e) == i);
    }
  }
}

TEST_CASE("evaluate at simple points") {
  CHECK(std::abs(evaluate(TernaryForm::t_power(5), {1.0, 0.0, 0.0}) - 1.0) < 1e-15);
  const TernaryForm p = fixtures::sextic();
  CHECK(std::abs(evaluate(p, {1.0, 0.0, 0.0}) - 1.0) < 1e-12);
  CHECK(std::abs(evaluate(p, {0.0, 1.0, 1.0}) - (-168.0)) < 1e-9);
}

TEST_CASE("evaluate is homogeneous of degree d") {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 6; ++d) {
    const TernaryForm f = phi_coeffs(fixtures::random_complex_pair(d, rng));
    const Point3 pt = fixtures::random_point(rng);
    const cplx lambda(0.7, -1.3);
    const cplx lhs = evaluate(f, {lambda * pt[0], lambda * pt[1], lambda * pt[2]});
    const cplx rhs = std::pow(lambda, d) * evaluate(f, pt);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST_CASE("restrict_direction") {
  const auto c = restrict_direction(TernaryForm::t_power(4), 0.3, -0.8);
  REQUIRE(c.size() == 5);
  CHECK(c[0] == cplx(1.0));
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(std::abs(c[i]) == 0.0);

  const auto roots = sorted_real(univariate_roots(restrict_direction(fixtures::sextic(), -1.0, 0.0)));
  const std::vector<double> expected{-3, -2, -1, 1, 2, 3};
  REQUIRE(roots.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(roots[i] == doctest::Approx(expected[i]).epsilon(1e-8));

  std::mt19937_64 rng(3);
  const SymPair z = fixtures::random_real_pair(4, rng);
  const auto r = sorted_real(univariate_roots(restrict_direction(phi_coeffs(z), -1.0, 0.0)));
  std::vector<double> diag;
  for (int k = 0; k < 4; ++k) diag.push_back(z.diag(k).real());
  std::sort(diag.begin(), diag.end());
  for (int k = 0; k < 4; ++k) CHECK(std::abs(r[k] - diag[k]) < 1e-8);
}

TEST_CASE("univariate_roots") {
  const std::vector<cplx> quad{1.0, 0.0, -1.0};
  auto r = sorted_real(univariate_roots(quad));
  CHECK(r[0] == doctest::Approx(-1.0));
  CHECK(r[1] == doctest::Approx(1.0));

  const std::vector<cplx> dbl{1.0, -2.0, 1.0};
  for (cplx root : univariate_roots(dbl)) CHECK(std::abs(root - 1.0) < 1e-6);

  const std::vector<cplx> cubic{2.0, 0.0, 0.0, -16.0};
  for (cplx root : univariate_roots(cubic)) CHECK(std::abs(std::pow(root, 3) - 8.0) < 1e-10);
}

TEST_CASE("check_hyperbolic examples") {
  const auto circle = check_hyperbolic(parse_polynomial_text("t^2 - x^2 - y^2"));
  CHECK(circle.is_hyperbolic);
  CHECK(circle.is_strict);

  const auto q = check_hyperbolic(fixtures::quartic());
  CHECK(q.is_hyperbolic);
  CHECK(q.is_strict);

  const auto cusp = check_hyperbolic(parse_polynomial_text("t^2*(t - x)"));
  CHECK(cusp.is_hyperbolic);
  CHECK_FALSE(cusp.is_strict);

  const auto empty = check_hyperbolic(parse_polynomial_text("t^2 + x^2 + y^2"));
  CHECK_FALSE(empty.is_hyperbolic);
  CHECK(empty.max_imag > 0.4);
}

TEST_CASE("image of a real pair is strictly hyperbolic") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;
    const auto rep = check_hyperbolic(phi_coeffs(fixtures::random_real_pair(d, rng)));
    CHECK(rep.is_hyperbolic);
  }
}

TEST_CASE("gradient_at examples") {
  auto g = gradient_at(TernaryForm::t_power(5), {1.0, 0.0, 0.0});
  CHECK(std::abs(g[0] - 5.0) < 1e-14);
  CHECK(std::abs(g[1]) < 1e-14);
  CHECK(std::abs(g[2]) < 1e-14);

  g = gradient_at(fixtures::sextic(), {1.0, 0.0, 0.0});
  CHECK(std::abs(g[0] - 6.0) < 1e-12);
  CHECK(std::abs(g[1]) < 1e-12);
  CHECK(std::abs(g[2]) < 1e-12);

  const TernaryForm q = fixtures::quartic();
  const cplx i(0.0, 1.0);
  for (double sx : {1.0, -1.0}) {
    for (double sy : {1.0, -1.0}) {
      const auto grad = gradient_at(q, {1.0, 2.0 * sx, sy * i});
      const double norm = std::sqrt(std::norm(grad[0]) + std::norm(grad[1]) + std::norm(grad[2]));
      CHECK(norm / fixtures::max_abs(q) < 1e-8);
    }
  }
}

TEST_CASE("gradient_at matches central differences") {
  std::mt19937_64 rng(17);
  for (int d = 1; d <= 6; ++d) {
    const TernaryForm f = phi_coeffs(fixtures::random_complex_pair(d, rng));
    const Point3 pt = fixtures::random_point(rng);
    const auto grad = gradient_at(f, pt);
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
      Point3 a = pt, b = pt;
      a[k] += h;
      b[k] -= h;
      const cplx fd = (evaluate(f, a) - evaluate(f, b)) / (2.0 * h);
      CHECK(std::abs(fd - grad[k]) <= 1e-6 * (1.0 + std::abs(grad[k])));
    }
  }
}

TEST_CASE("diff_t") {
  const TernaryForm d1 = diff_t(TernaryForm::t_power(5), 1);
  CHECK(d1.degree() == 4);
  CHECK(d1.coeff({4, 0, 0}) == cplx(5.0));
  const TernaryForm d5 = diff_t(TernaryForm::t_power(5), 5);
  CHECK(d5.degree() == 0);
  CHECK(d5[0] == cplx(120.0));
  const TernaryForm txx = diff_t(parse_polynomial_text("t^2*x"), 1);
  CHECK(coeff_distance(txx, parse_polynomial_text("2*t*x")) == 0.0);
  CHECK_THROWS_AS(diff_t(TernaryForm::t_power(2), 3), Error);
}

TEST_CASE("coeff_distance") {
  const TernaryForm p = fixtures::sextic();
  CHECK(coeff_distance(p, p) == 0.0);
  CHECK(coeff_distance(parse_polynomial_text("t^2 - x^2"), parse_polynomial_text("t^2")) == 1.0);
  CHECK(coeff_distance(p, phi_coeffs(fixtures::sextic_pair())) < 1e-9);
  CHECK_THROWS_AS(coeff_distance(p, TernaryForm::t_power(2)), Error);
}

TEST_CASE("normalize_leading") {
  const TernaryForm f = normalize_leading(parse_polynomial_text("2*t^2 - 4*x*y"));
  CHECK(f.coeff({2, 0, 0}) == cplx(1.0));
  CHECK(f.coeff({0, 1, 1}) == cplx(-2.0));
  CHECK_THROWS_AS(normalize_leading(parse_polynomial_text("x^2 - y^2")), Error);
}

TEST_CASE("multiply_binary") {
  const std::vector<cplx> xy_plus_y2{0.0, 1.0, 1.0};  // x y + y^2
  const TernaryForm f = multiply_binary(xy_plus_y2, parse_polynomial_text("t + x"));
  CHECK(coeff_distance(f, parse_polynomial_text("(x*y + y^2)*(t + x)")) < 1e-15);
}
