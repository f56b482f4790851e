#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hyperdet/detmap.hpp"
#include "hyperdet/error.hpp"
#include "hyperdet/text_parser.hpp"

using namespace hyperdet;

TEST_CASE("SymPair layout") {
  CHECK(SymPair::dimension(1) == 2);
  CHECK(SymPair::dimension(6) == 27);
  SymPair z(3);
  z.sym(2, 0) = 5.0;
  CHECK(z.sym(0, 2) == cplx(5.0));
  CHECK(z.coords()[3 + 2] == cplx(5.0));
  CHECK(z.sym_matrix()(2, 0) == cplx(5.0));
  CHECK_THROWS_AS(SymPair(3, std::vector<cplx>(8)), Error);
  CHECK_THROWS_AS(SymPair(0), Error);
}

TEST_CASE("pencil_at") {
  std::mt19937_64 rng(1);
  const SymPair z = fixtures::random_complex_pair(4, rng);
  CHECK(pencil_at(z, {1.0, 0.0, 0.0}).isApprox(Eigen::MatrixXcd::Identity(4, 4)));
  const SymPair pz = fixtures::sextic_pair();
  CHECK(pencil_at(pz, {0.0, 1.0, 0.0}).isApprox(Eigen::MatrixXcd(pz.diag_vector().asDiagonal())));
  CHECK(pencil_at(pz, {0.0, 0.0, 1.0}).isApprox(pz.sym_matrix()));
  CHECK(pz.sym(3, 1) == cplx(-2.0));
}

TEST_CASE("phi_eval") {
  std::mt19937_64 rng(2);
  CHECK(std::abs(phi_eval(fixtures::random_complex_pair(5, rng), {1.0, 0.0, 0.0}) - 1.0) < 1e-14);
  const SymPair pz = fixtures::sextic_pair();
  CHECK(std::abs(phi_eval(pz, {1.0, -1.0, 0.0})) < 1e-12);
  const TernaryForm p = fixtures::sextic();
  for (int trial = 0; trial < 10; ++trial) {
    const Point3 pt = fixtures::random_point(rng);
    const cplx expect = evaluate(p, pt);
    CHECK(std::abs(phi_eval(pz, pt) - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
  }
}

TEST_CASE("phi_eval_grad examples") {
  std::mt19937_64 rng(3);
  const auto at_identity = phi_eval_grad(fixtures::random_complex_pair(4, rng), {1.0, 0.0, 0.0});
  CHECK(std::abs(at_identity.value - 1.0) < 1e-14);
  CHECK(at_identity.grad.norm() < 1e-14);

  SymPair z(1);
  z.diag(0) = 2.5;
  z.sym(0, 0) = -0.5;
  const Point3 pt{cplx(0.3, 0.1), cplx(-1.2, 0.4), cplx(0.7, -0.9)};
  const auto vg = phi_eval_grad(z, pt);
  CHECK(std::abs(vg.value - (pt[0] + 2.5 * pt[1] - 0.5 * pt[2])) < 1e-14);
  CHECK(std::abs(vg.grad(0) - pt[1]) < 1e-14);
  CHECK(std::abs(vg.grad(1) - pt[2]) < 1e-14);
}

TEST_CASE("phi_eval_grad matches central differences") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 24; ++trial) {
    const int d = 1 + trial % 8;
    const SymPair z = fixtures::random_complex_pair(d, rng);
    const Point3 pt = fixtures::random_point(rng);
    const auto vg = phi_eval_grad(z, pt);
    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      SymPair a = z, b = z;
      a.coords()[i] += h;
      b.coords()[i] -= h;
      const cplx fd = (phi_eval(a, pt) - phi_eval(b, pt)) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - vg.grad(static_cast<Eigen::Index>(i))) /
                                  std::max(1.0, vg.grad.cwiseAbs().maxCoeff()));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("adjugate") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXcd m(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = cplx(u(rng), u(rng));
  const Eigen::MatrixXcd adj = adjugate(m);
  CHECK((m * adj - m.determinant() * Eigen::MatrixXcd::Identity(4, 4)).norm() < 1e-12);

  Eigen::MatrixXcd sing = m;
  sing.col(3) = sing.col(0) + sing.col(1);
  const Eigen::MatrixXcd adj_s = adjugate(sing);
  CHECK((sing * adj_s).norm() < 1e-12);
  CHECK(adj_s.norm() > 1e-6);

  Eigen::MatrixXcd rank2 = Eigen::MatrixXcd::Zero(4, 4);
  rank2(0, 0) = 1.0;
  rank2(1, 1) = 1.0;
  CHECK(adjugate(rank2).norm() < 1e-14);
}

TEST_CASE("phi_coeffs examples") {
  for (int d = 1; d <= 6; ++d) CHECK(coeff_distance(phi_coeffs(SymPair(d)), TernaryForm::t_power(d)) < 1e-14);

  SymPair diag(3);
  diag.diag(0) = 1.0;
  diag.diag(1) = -2.0;
  diag.diag(2) = 0.5;
  CHECK(coeff_distance(phi_coeffs(diag), parse_polynomial_text("(t + x)*(t - 2*x)*(t + 0.5*x)")) < 1e-13);

  const TernaryForm phi = phi_coeffs(fixtures::sextic_pair());
  const TernaryForm p = fixtures::sextic();
  CHECK(coeff_distance(phi, p) < 1e-9);
  CHECK(phi.coeff({0, 6, 0}).real() == doctest::Approx(-36.0));
  CHECK(phi.coeff({0, 1, 5}).real() == doctest::Approx(246.0));
  CHECK(phi.coeff({4, 0, 2}).real() == doctest::Approx(-27.0));
}

TEST_CASE("phi_coeffs agrees with the Leibniz expansion") {
  std::mt19937_64 rng(6);
  for (int d = 1; d <= 6; ++d) {
    for (int trial = 0; trial < 3; ++trial) {
      const SymPair z = fixtures::random_complex_pair(d, rng);
      const TernaryForm oracle = fixtures::leibniz_det(z);
      CHECK(fixtures::rel_distance(phi_coeffs(z), oracle) < 1e-12);
    }
  }
}

TEST_CASE("phi_coeffs invariant under the symmetry group") {
  std::mt19937_64 rng(7);
  const int d = 5;
  const SymPair z = fixtures::random_real_pair(d, rng);
  const std::vector<int> perm{3, 0, 4, 1, 2};
  const std::vector<double> sign{1, -1, -1, 1, -1};
  SymPair w(d);
  for (int j = 0; j < d; ++j) {
    w.diag(j) = z.diag(perm[j]);
    for (int k = j; k < d; ++k) w.sym(j, k) = sign[j] * sign[k] * z.sym(perm[j], perm[k]);
  }
  CHECK(fixtures::rel_distance(phi_coeffs(w), phi_coeffs(z)) < 1e-13);
}

TEST_CASE("phi_coeffs_jacobian matches central differences") {
  std::mt19937_64 rng(8);
  for (int d = 1; d <= 5; ++d) {
    const SymPair z = fixtures::random_complex_pair(d, rng);
    const Eigen::MatrixXcd J = phi_coeffs_jacobian(z);
    const auto m = static_cast<Eigen::Index>(SymPair::dimension(d));
    REQUIRE(J.rows() == m);
    REQUIRE(J.cols() == m);
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < m; ++i) {
      SymPair a = z, b = z;
      a.coords()[i] += h;
      b.coords()[i] -= h;
      const TernaryForm fa = phi_coeffs(a), fb = phi_coeffs(b);
      for (Eigen::Index r = 0; r < m; ++r) {
        const cplx fd = (fa[r + 1] - fb[r + 1]) / (2.0 * h);
        CHECK(std::abs(fd - J(r, i)) <= 1e-6 * std::max(1.0, J.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("extract_D_candidates") {
  const auto D = extract_D_candidates(fixtures::sextic());
  const std::vector<double> expected{-3, -2, -1, 1, 2, 3};
  REQUIRE(D.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(D[i] == doctest::Approx(expected[i]).epsilon(1e-8));

  const auto two = extract_D_candidates(parse_polynomial_text("t^2 - x^2"));
  CHECK(two[0] == doctest::Approx(-1.0));
  CHECK(two[1] == doctest::Approx(1.0));

  std::mt19937_64 rng(9);
  for (int d = 2; d <= 6; ++d) {
    const SymPair z = fixtures::random_real_pair(d, rng);
    std::vector<double> diag;
    for (int k = 0; k < d; ++k) diag.push_back(z.diag(k).real());
    std::sort(diag.begin(), diag.end());
    const auto got = extract_D_candidates(phi_coeffs(z));
    for (int k = 0; k < d; ++k) CHECK(std::abs(got[k] - diag[k]) < 1e-8);
  }

  CHECK_THROWS_AS(extract_D_candidates(parse_polynomial_text("t^2 + x^2")), Error);
}

TEST_CASE("fiber_cardinality") {
  auto c = fiber_cardinality(2);
  CHECK(c.complex_count == 4);
  CHECK(c.real_count == 4);
  c = fiber_cardinality(3);
  CHECK(c.complex_count == 72);
  CHECK(c.real_count == 48);
  c = fiber_cardinality(6);
  using boost::multiprecision::cpp_int;
  CHECK(c.complex_count == cpp_int(512) * 1025 * 32 * 720);
  CHECK(c.real_count == cpp_int(1024) * 32 * 720);
  c = fiber_cardinality(12);
  CHECK(c.complex_count > c.real_count);
  CHECK_THROWS_AS(fiber_cardinality(0), Error);
}
