#include <doctest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "hyperdet/error.hpp"
#include "hyperdet/homotopy.hpp"

using namespace hyperdet;

namespace {

Eigen::MatrixXcd evaluation_matrix(const DualBasis& basis) {
  const int d = basis.d;
  const auto m = static_cast<Eigen::Index>(basis.points.size());
  Eigen::MatrixXcd E(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Exponent e = TernaryForm::exponent_at(d, static_cast<std::size_t>(j + 1));
      const Point3& pt = basis.points[static_cast<std::size_t>(i)];
      E(i, j) = std::pow(pt[0], e.t) * std::pow(pt[1], e.x) * std::pow(pt[2], e.y);
    }
  }
  return E;
}

}  // namespace

TEST_CASE("dual basis shape and determinism") {
  const DualBasis b1 = make_dual_basis(1, 5);
  CHECK(b1.points.size() == 2);
  const Eigen::MatrixXcd E1 = evaluation_matrix(b1);
  CHECK(std::abs(E1.determinant()) > 1e-3);

  const DualBasis b6 = make_dual_basis(6, 5);
  CHECK(b6.points.size() == 27);
  for (const auto& pt : b6.points)
    for (cplx c : pt) CHECK(std::abs(std::abs(c) - 1.0) < 1e-14);

  const DualBasis again = make_dual_basis(6, 5);
  for (std::size_t i = 0; i < b6.points.size(); ++i)
    for (int k = 0; k < 3; ++k) CHECK(again.points[i][k] == b6.points[i][k]);

  for (int d = 1; d <= 8; ++d) {
    const DualBasis b = make_dual_basis(d, 100 + d);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(evaluation_matrix(b));
    const double cond = svd.singularValues()(0) / svd.singularValues().tail(1)(0);
    CHECK(cond < 1e4);
    CHECK(b.cond_estimate < 1e8);
  }
  CHECK_THROWS_AS(make_dual_basis(0, 1), Error);
}

TEST_CASE("residual vanishes on the fiber") {
  const NuijFamily fam(fixtures::sextic(), OriginalPath{});
  const DualBasis basis = make_dual_basis(6, 1);
  CHECK(residual(fixtures::sextic_pair(), 1.0, fam, basis).norm() < 1e-9);
  CHECK(residual(SymPair(6), 1.0, fam, basis).norm() > 1.0);

  const NuijFamily flat(TernaryForm::t_power(3), OriginalPath{});
  CHECK(residual(SymPair(3), 1.0, flat, make_dual_basis(3, 2)).norm() < 1e-12);

  std::mt19937_64 rng(3);
  const SymPair z = fixtures::random_real_pair(4, rng);
  const NuijFamily fam4(phi_coeffs(z), make_randomized_kind(4, 3));
  CHECK(relative_residual(z, 1.0, fam4, make_dual_basis(4, 3)) < 1e-13);
}

TEST_CASE("jacobian_z and partial_s match central differences") {
  std::mt19937_64 rng(7);
  for (int d = 1; d <= 6; ++d) {
    const NuijFamily fam(phi_coeffs(fixtures::random_real_pair(d, rng)), OriginalPath{});
    const DualBasis basis = make_dual_basis(d, 9);
    const SymPair z = fixtures::random_complex_pair(d, rng);
    const cplx s(0.4, 0.1);
    const Eigen::MatrixXcd J = jacobian_z(z, s, fam, basis);
    const double h = 1e-6;
    const double scale = std::max(1.0, J.cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < z.size(); ++i) {
      SymPair a = z, b = z;
      a.coords()[i] += h;
      b.coords()[i] -= h;
      const Eigen::VectorXcd fd = (residual(a, s, fam, basis) - residual(b, s, fam, basis)) / (2.0 * h);
      CHECK((fd - J.col(static_cast<Eigen::Index>(i))).cwiseAbs().maxCoeff() <= 1e-6 * scale);
    }
    const Eigen::VectorXcd ps = partial_s(z, s, fam, basis);
    const Eigen::VectorXcd fd_s = (residual(z, s + h, fam, basis) - residual(z, s - h, fam, basis)) / (2.0 * h);
    CHECK((fd_s - ps).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, ps.cwiseAbs().maxCoeff()));
  }

  const NuijFamily flat(TernaryForm::t_power(3), OriginalPath{});
  const DualBasis basis = make_dual_basis(3, 4);
  // F_{1-s}(t^3) has degree 3 in s: its fourth difference vanishes.
  const SymPair z(3);
  const double h = 0.2;
  Eigen::VectorXcd diff4 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(z.size()));
  const double w[5] = {1, -4, 6, -4, 1};
  for (int k = 0; k < 5; ++k) diff4 += w[k] * partial_s(z, 0.1 + k * h, flat, basis);
  CHECK(diff4.norm() < 1e-10);
}

TEST_CASE("jacobian_z on a 1x1 pair") {
  const NuijFamily fam(TernaryForm::t_power(1), OriginalPath{});
  const DualBasis basis = make_dual_basis(1, 1);
  SymPair z(1);
  z.diag(0) = 0.3;
  z.sym(0, 0) = -0.4;
  const Eigen::MatrixXcd J = jacobian_z(z, 0.5, fam, basis);
  for (std::size_t i = 0; i < basis.points.size(); ++i) {
    CHECK(std::abs(J(static_cast<Eigen::Index>(i), 0) - basis.points[i][1]) < 1e-14);
    CHECK(std::abs(J(static_cast<Eigen::Index>(i), 1) - basis.points[i][2]) < 1e-14);
  }
}

TEST_CASE("newton_correct") {
  std::mt19937_64 rng(11);
  const SymPair exact = fixtures::random_real_pair(4, rng);
  const NuijFamily fam(phi_coeffs(exact), OriginalPath{});
  const DualBasis basis = make_dual_basis(4, 2);
  TrackerSettings settings;

  auto nr = newton_correct(exact, 1.0, fam, basis, settings);
  CHECK(nr.converged);
  CHECK(nr.iters == 1);
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(std::abs(nr.z.coords()[i] - exact.coords()[i]) < 1e-12);

  SymPair perturbed = exact;
  std::uniform_real_distribution<double> u(-1e-4, 1e-4);
  for (auto& c : perturbed.coords()) c += u(rng);
  settings.newton_max_iters = 6;
  nr = newton_correct(perturbed, 1.0, fam, basis, settings);
  CHECK(nr.converged);
  double err = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) err = std::max(err, std::abs(nr.z.coords()[i] - exact.coords()[i]));
  CHECK(err < 1e-10);

  SymPair far = exact;
  for (auto& c : far.coords()) c += 25.0 * u(rng) * 1e4;
  settings.newton_max_iters = 3;
  nr = newton_correct(far, 1.0, fam, basis, settings);
  CHECK_FALSE(nr.converged);
}

TEST_CASE("track on a constant path only corrects") {
  std::mt19937_64 rng(13);
  const SymPair exact = fixtures::random_real_pair(3, rng);
  const NuijFamily fam(phi_coeffs(exact), OriginalPath{});
  const DualBasis basis = make_dual_basis(3, 2);
  const auto res = track(exact, SPath::straight(1.0, 1.0), fam, basis, TrackerSettings{});
  CHECK(res.status == TrackStatus::Success);
  CHECK(res.steps_taken == 0);
  for (std::size_t i = 0; i < exact.size(); ++i)
    CHECK(std::abs(res.endpoint.coords()[i] - exact.coords()[i]) < 1e-12);
}

TEST_CASE("track a conic to the fixed endpoint") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const SymPair z = fixtures::random_real_pair(2, rng);
    const NuijFamily fam(phi_coeffs(z), OriginalPath{});
    const DualBasis basis = make_dual_basis(2, 5);
    const auto res = track(z, SPath::straight(1.0, 0.0), fam, basis, TrackerSettings{});
    REQUIRE(res.status == TrackStatus::Success);
    CHECK(fixtures::rel_distance(phi_coeffs(res.endpoint), fixed_endpoint(2, OriginalPath{})) < 1e-9);
    CHECK(res.max_imag_seen < 1e-12);
    CHECK(res.endpoint.is_real(1e-12));
  }
}

TEST_CASE("track is consistent across predictors and stays real") {
  std::mt19937_64 rng(19);
  const SymPair z = fixtures::random_real_pair(3, rng);
  const NuijFamily fam(phi_coeffs(z), OriginalPath{});
  const DualBasis basis = make_dual_basis(3, 6);
  TrackerSettings rk4;
  TrackerSettings euler;
  euler.predictor = Predictor::Euler;
  euler.h_init = 0.01;
  const auto a = track(z, SPath::straight(1.0, 0.0), fam, basis, rk4);
  const auto b = track(z, SPath::straight(1.0, 0.0), fam, basis, euler);
  REQUIRE(a.status == TrackStatus::Success);
  REQUIRE(b.status == TrackStatus::Success);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(std::abs(a.endpoint.coords()[i] - b.endpoint.coords()[i]) < 1e-8);
  CHECK(a.max_imag_seen < 1e-10);
  CHECK(a.max_residual_seen < 10.0 * rk4.newton_tol);

  // A detour through the upper half-plane leaves the reals and returns.
  const auto c = track(z, SPath::detour(1.0, cplx(0.5, 0.3), 0.0), fam, basis, rk4);
  REQUIRE(c.status == TrackStatus::Success);
  CHECK(c.max_imag_seen > 1e-6);
  CHECK(fixtures::rel_distance(phi_coeffs(c.endpoint), fixed_endpoint(3, OriginalPath{})) < 1e-9);
}

TEST_CASE("tracker settings validation") {
  TrackerSettings bad;
  bad.h_min = 0.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = TrackerSettings{};
  bad.h_init = 1e-10;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = TrackerSettings{};
  bad.max_steps = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  CHECK(std::string(to_string(TrackStatus::SingularEndpoint)) == "SingularEndpoint");
}
