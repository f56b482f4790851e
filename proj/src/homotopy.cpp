#include "hyperdet/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hyperdet/error.hpp"

namespace hyperdet {

namespace {

double max_abs(const Eigen::VectorXcd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

SymPair shifted(const SymPair& z, const Eigen::VectorXcd& delta) {
  SymPair out = z;
  for (std::size_t i = 0; i < out.size(); ++i) out.coords()[i] += delta(static_cast<Eigen::Index>(i));
  return out;
}

Eigen::PartialPivLU<Eigen::MatrixXcd> factor_checked(const Eigen::MatrixXcd& j) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(j);
  const auto& packed = lu.matrixLU();
  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    max_pivot = std::max(max_pivot, std::abs(packed(i, i)));
    min_pivot = std::min(min_pivot, std::abs(packed(i, i)));
  }
  if (!(max_pivot > 0.0) || !(min_pivot >= 1e-14 * max_pivot)) {
    throw Error(ErrorCode::SingularJacobian, "Jacobian pivot below 1e-14 of the largest");
  }
  return lu;
}

Eigen::VectorXcd family_values(const NuijFamily& fam, cplx s, const DualBasis& basis) {
  const TernaryForm f = fam.at(s);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.points.size()));
  for (std::size_t i = 0; i < basis.points.size(); ++i) v(static_cast<Eigen::Index>(i)) = evaluate(f, basis.points[i]);
  return v;
}

// dz/ds along the solution curve through (z, s).
Eigen::VectorXcd tangent(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis) {
  const auto lu = factor_checked(jacobian_z(z, s, fam, basis));
  return lu.solve(-partial_s(z, s, fam, basis));
}

SymPair predict(const SymPair& z, cplx s, cplx ds, const NuijFamily& fam, const DualBasis& basis,
                Predictor predictor) {
  const Eigen::VectorXcd k1 = tangent(z, s, fam, basis);
  if (predictor == Predictor::Euler) return shifted(z, ds * k1);
  const Eigen::VectorXcd k2 = tangent(shifted(z, 0.5 * ds * k1), s + 0.5 * ds, fam, basis);
  const Eigen::VectorXcd k3 = tangent(shifted(z, 0.5 * ds * k2), s + 0.5 * ds, fam, basis);
  const Eigen::VectorXcd k4 = tangent(shifted(z, ds * k3), s + ds, fam, basis);
  return shifted(z, (ds / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace

bool SPath::is_real() const noexcept {
  return std::all_of(waypoints.begin(), waypoints.end(), [](const cplx& w) { return w.imag() == 0.0; });
}

void TrackerSettings::validate() const {
  if (!(h_min > 0.0 && h_min < h_init && h_init <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "tracker needs 0 < h_min < h_init <= 1");
  }
  if (!(newton_tol > 0.0) || !(residual_floor >= 0.0) || newton_max_iters < 1 || max_steps < 1) {
    throw Error(ErrorCode::InvalidArgument, "tracker tolerances must be positive");
  }
}

const char* to_string(TrackStatus status) noexcept {
  switch (status) {
    case TrackStatus::Success: return "Success";
    case TrackStatus::MinStepReached: return "MinStepReached";
    case TrackStatus::MaxStepsReached: return "MaxStepsReached";
    case TrackStatus::DivergedCorrector: return "DivergedCorrector";
    case TrackStatus::SingularEndpoint: return "SingularEndpoint";
  }
  return "Unknown";
}

DualBasis make_dual_basis(int d, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "degree must be at least 1");
  const auto m = static_cast<Eigen::Index>(SymPair::dimension(d));
  const int n = d + 1;
  const double two_pi = 2.0 * std::numbers::pi;
  std::uniform_real_distribution<double> angle(0.0, two_pi);
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(attempt));
    const double th0 = angle(rng), th1 = angle(rng), th2 = angle(rng);
    std::vector<Point3> grid;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        grid.push_back({std::polar(1.0, th0), std::polar(1.0, th1 + two_pi * a / n),
                        std::polar(1.0, th2 + two_pi * b / n)});
      }
    }
    // Monomials other than t^d, evaluated on every grid point.
    auto eval_matrix = [&](const std::vector<Point3>& pts) {
      Eigen::MatrixXcd e(static_cast<Eigen::Index>(pts.size()), m);
      for (std::size_t i = 0; i < pts.size(); ++i) {
        for (Eigen::Index col = 0; col < m; ++col) {
          const auto ex = TernaryForm::exponent_at(d, static_cast<std::size_t>(col) + 1);
          const auto& pt = pts[i];
          e(static_cast<Eigen::Index>(i), col) = std::pow(pt[0], ex.t) * std::pow(pt[1], ex.x) * std::pow(pt[2], ex.y);
        }
      }
      return e;
    };
    const Eigen::MatrixXcd full = eval_matrix(grid);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(full.transpose());
    DualBasis basis;
    basis.d = d;
    for (Eigen::Index i = 0; i < m; ++i) basis.points.push_back(grid[static_cast<std::size_t>(qr.colsPermutation().indices()(i))]);
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(eval_matrix(basis.points));
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    basis.cond_estimate = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
    if (basis.cond_estimate < 1e8) return basis;
  }
  throw Error(ErrorCode::BasisConditioningFailed, "no well-conditioned dual basis after 20 draws");
}

Eigen::VectorXcd residual(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis) {
  if (z.d() != fam.degree() || basis.d != fam.degree()) {
    throw Error(ErrorCode::DegreeMismatch, "pair, family and basis degrees differ");
  }
  Eigen::VectorXcd h = -family_values(fam, s, basis);
  for (std::size_t i = 0; i < basis.points.size(); ++i) h(static_cast<Eigen::Index>(i)) += phi_eval(z, basis.points[i]);
  return h;
}

double relative_residual(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis) {
  const Eigen::VectorXcd target = family_values(fam, s, basis);
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.points.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    worst = std::max(worst, std::abs(phi_eval(z, basis.points[i]) - target(k)));
  }
  return worst / (1.0 + max_abs(target));
}

double evaluation_noise(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis) {
  const Eigen::VectorXcd target = family_values(fam, s, basis);
  double worst = 0.0;
  for (const auto& pt : basis.points) worst = std::max(worst, std::pow(pencil_at(z, pt).norm(), z.d()));
  return std::numeric_limits<double>::epsilon() * worst / (1.0 + max_abs(target));
}

Eigen::MatrixXcd jacobian_z(const SymPair& z, cplx /*s*/, const NuijFamily& fam, const DualBasis& basis) {
  if (z.d() != fam.degree()) throw Error(ErrorCode::DegreeMismatch, "pair and family degrees differ");
  const auto m = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXcd jac(static_cast<Eigen::Index>(basis.points.size()), m);
  for (std::size_t i = 0; i < basis.points.size(); ++i) {
    jac.row(static_cast<Eigen::Index>(i)) = phi_eval_grad(z, basis.points[i]).grad.transpose();
  }
  return jac;
}

Eigen::VectorXcd partial_s(const SymPair& /*z*/, cplx s, const NuijFamily& fam, const DualBasis& basis) {
  const TernaryForm df = fam.s_derivative(s);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.points.size()));
  for (std::size_t i = 0; i < basis.points.size(); ++i) v(static_cast<Eigen::Index>(i)) = -evaluate(df, basis.points[i]);
  return v;
}

NewtonResult newton_correct(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis,
                            const TrackerSettings& settings) {
  NewtonResult result{z, false, 0, 0.0};
  double previous = std::numeric_limits<double>::infinity();
  while (result.iters < settings.newton_max_iters) {
    const auto lu = factor_checked(jacobian_z(result.z, s, fam, basis));
    const Eigen::VectorXcd delta = lu.solve(-residual(result.z, s, fam, basis));
    result.z = shifted(result.z, delta);
    ++result.iters;
    const double update = delta.norm() / (1.0 + result.z.norm());
    result.last_update = update;
    if (!std::isfinite(update)) return result;
    if (update < settings.newton_tol) {
      result.converged = true;
      return result;
    }
    const double floor = std::max(settings.residual_floor, 10.0 * evaluation_noise(result.z, s, fam, basis));
    if (relative_residual(result.z, s, fam, basis) <= floor) {
      result.converged = true;
      return result;
    }
    if (update > previous) return result;
    previous = update;
  }
  return result;
}

TrackResult track(const SymPair& z_start, const SPath& path, const NuijFamily& fam,
                  const DualBasis& basis, const TrackerSettings& settings) {
  settings.validate();
  if (path.waypoints.empty()) throw Error(ErrorCode::InvalidArgument, "empty s-path");

  TrackResult result;
  result.endpoint = z_start;
  const cplx s_end = path.waypoints.back();
  SymPair z = z_start;

  auto record = [&](const SymPair& point, cplx s) {
    result.max_residual_seen = std::max(result.max_residual_seen, relative_residual(point, s, fam, basis));
    result.max_imag_seen = std::max(result.max_imag_seen, point.max_imag());
  };

  TrackerSettings final_settings = settings;
  final_settings.newton_max_iters = std::max(settings.newton_max_iters, 8);

  auto finish = [&](const SymPair& point, cplx s) {
    try {
      const auto nr = newton_correct(point, s, fam, basis, final_settings);
      result.endpoint = nr.z;
      result.final_update = nr.last_update;
      if (nr.converged) {
        result.status = TrackStatus::Success;
        record(nr.z, s);
      } else {
        result.status = TrackStatus::DivergedCorrector;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularJacobian) throw;
      result.status = TrackStatus::SingularEndpoint;
    }
    return result;
  };

  record(z, path.waypoints.front());
  for (std::size_t seg = 0; seg + 1 < path.waypoints.size(); ++seg) {
    const cplx a = path.waypoints[seg];
    const cplx b = path.waypoints[seg + 1];
    const double length = std::abs(b - a);
    if (length == 0.0) continue;
    const cplx dir = (b - a) / length;
    double tau = 0.0;
    double h = settings.h_init;
    int streak = 0;
    while (tau < length) {
      if (result.steps_taken + result.rejected_steps >= settings.max_steps) {
        result.status = TrackStatus::MaxStepsReached;
        result.endpoint = z;
        return result;
      }
      const double step = std::min(h, length - tau);
      const bool last = tau + step >= length;
      const cplx s0 = a + tau * dir;
      const cplx s1 = last ? b : a + (tau + step) * dir;
      bool accepted = false;
      SymPair next;
      try {
        const SymPair guess = predict(z, s0, s1 - s0, fam, basis, settings.predictor);
        const auto nr = newton_correct(guess, s1, fam, basis, settings);
        if (nr.converged) {
          next = nr.z;
          accepted = true;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::SingularJacobian) throw;
        if (seg + 2 == path.waypoints.size() && std::abs(s0 - s_end) < 1e-4) {
          result.status = TrackStatus::SingularEndpoint;
          result.endpoint = z;
          return result;
        }
      }
      if (accepted) {
        z = std::move(next);
        tau = last ? length : tau + step;
        ++result.steps_taken;
        record(z, s1);
        if (++streak >= 3) {
          h = std::min(2.0 * h, settings.h_init);
          streak = 0;
        }
      } else {
        ++result.rejected_steps;
        streak = 0;
        h *= 0.5;
        if (h < settings.h_min) {
          result.status = TrackStatus::MinStepReached;
          result.endpoint = z;
          return result;
        }
      }
    }
  }
  return finish(z, s_end);
}

}  // namespace hyperdet
