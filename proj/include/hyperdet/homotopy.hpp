#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

#include "hyperdet/detmap.hpp"
#include "hyperdet/nuij.hpp"

namespace hyperdet {

/// m = d(d+3)/2 point evaluations e_i(f) = f(t_i, x_i, y_i) with every
/// coordinate on the unit circle. Together with the pinned t^d coefficient
/// they determine a form of degree d.
///
/// The points are picked from a (d+1) x (d+1) grid (a, b) ->
/// (e^{i th0}, e^{i th1} w^a, e^{i th2} w^b), w = e^{2 pi i / (d+1)}, with
/// random phases th from the seed; pivoted QR selects the m rows.
struct DualBasis {
  int d = 0;
  std::vector<Point3> points;
  double cond_estimate = 0.0;
};

DualBasis make_dual_basis(int d, std::uint64_t seed);

/// Piecewise-linear route of the homotopy parameter s in the complex plane.
struct SPath {
  std::vector<cplx> waypoints;

  static SPath straight(cplx from, cplx to) { return SPath{{from, to}}; }
  static SPath detour(cplx from, cplx via, cplx to) { return SPath{{from, via, to}}; }
  bool is_real() const noexcept;
};

enum class Predictor { Euler, RK4 };

struct TrackerSettings {
  double h_init = 0.05;
  double h_min = 1e-8;
  double newton_tol = 1e-10;
  int newton_max_iters = 3;
  /// Newton also stops once the relative residual is at or below this level;
  /// the update norm stalls there on an ill-conditioned Jacobian.
  double residual_floor = 1e-12;
  int max_steps = 10000;
  Predictor predictor = Predictor::RK4;

  void validate() const;
};

enum class TrackStatus {
  Success,
  MinStepReached,
  MaxStepsReached,
  DivergedCorrector,
  /// The Jacobian became singular within 1e-4 of the path end; the target
  /// itself sits on the ramification locus.
  SingularEndpoint,
};

const char* to_string(TrackStatus status) noexcept;

struct TrackResult {
  TrackStatus status = TrackStatus::DivergedCorrector;
  SymPair endpoint;
  int steps_taken = 0;
  int rejected_steps = 0;
  /// Largest relative residual over accepted points.
  double max_residual_seen = 0.0;
  /// Largest |Im| of any coordinate over accepted points.
  double max_imag_seen = 0.0;
  /// Relative Newton update of the final correction.
  double final_update = 0.0;
};

/// h_i = det(t_i I + x_i D + y_i R) - N_s(p)(t_i, x_i, y_i).
Eigen::VectorXcd residual(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis);

/// max_i |h_i| / (1 + max_i |e_i(N_s(p))|).
double relative_residual(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis);

/// Round-off bound for relative_residual: eps * max_i ||M_i||_F^d over
/// (1 + max_i |e_i(N_s(p))|), M_i the pencil at the i-th basis point.
double evaluation_noise(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis);

Eigen::MatrixXcd jacobian_z(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis);

/// dh/ds = -e_i(dN_s(p)/ds).
Eigen::VectorXcd partial_s(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis);

struct NewtonResult {
  SymPair z;
  bool converged = false;
  int iters = 0;
  double last_update = 0.0;
};

/// Plain Newton iteration on the square system h(., s) = 0. Converges when
/// ||dz|| / (1 + ||z||) < newton_tol or, after at least one step, when
/// relative_residual <= max(residual_floor, 10 * evaluation_noise). Gives up after newton_max_iters or
/// when the update grows while the residual is above the floor. Throws
/// SingularJacobian when a pivot drops below 1e-14 of the largest.
NewtonResult newton_correct(const SymPair& z, cplx s, const NuijFamily& fam, const DualBasis& basis,
                            const TrackerSettings& settings);

/// Tracks the solution z_start at path.waypoints.front() along the path,
/// segment by segment, with an adaptive predictor-corrector.
TrackResult track(const SymPair& z_start, const SPath& path, const NuijFamily& fam,
                  const DualBasis& basis, const TrackerSettings& settings);

}  // namespace hyperdet
