#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "hyperdet/detmap.hpp"
#include "hyperdet/homotopy.hpp"
#include "hyperdet/nuij.hpp"

namespace hyperdet {

enum class PathChoice { Original, Randomized };
enum class DetourMode { Off, Auto, Always };

struct SolveOptions {
  PathChoice path = PathChoice::Original;
  /// Linear forms for the randomized path; sampled from `seed` when unset.
  std::optional<LinearFormSet> forms;
  std::uint64_t seed = 0;
  DetourMode detour = DetourMode::Auto;
  std::optional<cplx> detour_c;
  /// N_{1 - perturb_eps}(p) replaces a hyperbolic but not strictly
  /// hyperbolic input.
  double perturb_eps = 1e-3;
  int max_retries = 5;
  int parallel_attempts = 1;
  TrackerSettings tracker;

  void validate() const;
};

/// Path kind for degree d under these options.
PathKind resolve_kind(int d, const SolveOptions& opts);

struct PhaseStats {
  std::string phase;
  TrackStatus status = TrackStatus::Success;
  int steps_taken = 0;
  int rejected_steps = 0;
  double max_residual_seen = 0.0;
  double max_imag_seen = 0.0;
  bool from_cache = false;
};

struct Representation {
  /// Canonical pair; real whenever is_real.
  SymPair pair;
  /// coeff_distance(Phi(pair), target) where target is the normalized input
  /// (or its N_{1-eps} replacement when `approximate`).
  double residual = 0.0;
  bool is_real = true;
  bool approximate = false;
  bool ambiguous_sign = false;
  int attempts = 0;
  std::vector<PhaseStats> stats;
  std::vector<std::string> diagnostics;

  std::vector<double> D() const;
  Eigen::MatrixXd R() const;
};

/// Fiber points over the fixed endpoints, keyed by (d, path kind, L-hash).
///
/// Entries live in memory and, when a directory is configured, as one JSON
/// file per key written through a temporary file and a rename. An entry is
/// discarded on load unless Phi of the stored pair matches the current
/// fixed endpoint to 1e-8 relative to its largest coefficient.
class EndpointCache {
 public:
  EndpointCache() = default;
  explicit EndpointCache(std::string directory) : directory_(std::move(directory)) {}

  std::optional<SymPair> load(int d, const PathKind& kind);
  void store(int d, const PathKind& kind, const SymPair& pair);

  static std::string key_name(int d, const PathKind& kind);
  const std::string& directory() const noexcept { return directory_; }

 private:
  std::string directory_;
  std::mutex mutex_;
  std::map<std::string, SymPair> memory_;
};

/// Builds a fiber point over fixed_endpoint(d, kind): samples a random real
/// pair with strictly hyperbolic image q and tracks N_s(q) from s = 1 to 0.
SymPair phase1(int d, const SolveOptions& opts, EndpointCache* cache = nullptr,
               std::vector<PhaseStats>* stats = nullptr);

/// Tracks N_s(p) from the endpoint pair z0 at s = 0 to s = 1 (through
/// detour_c when set). Throws SolveFailed with the tracker status on failure,
/// except SingularEndpoint, which returns the last accepted point.
SymPair phase2(const TernaryForm& p, const SymPair& z0, const SolveOptions& opts,
               PhaseStats* stats = nullptr, std::uint64_t basis_seed = 0);

Representation solve(const TernaryForm& p, const SolveOptions& opts, EndpointCache* cache = nullptr);

struct CanonicalPair {
  SymPair pair;
  bool ambiguous_sign = false;
};

/// Quotients the 2^{d-1} d! symmetry of a fiber: sorts D ascending, then
/// picks the sign matrix S (S_00 = +1) making, in every column k >= 1, the
/// first entry R[j,k] (j < k) with |R[j,k]| > 1e-9 positive.
CanonicalPair canonicalize(const SymPair& z);

/// coeff_distance(Phi(rep.pair), p) with p normalized to coeff(t^d) = 1.
double verify(const TernaryForm& p, const Representation& rep);

/// Newton iteration on the monomial coefficients of Phi(z) - p. With
/// `keep_real` the iterates stay real.
SymPair polish(const SymPair& z, const TernaryForm& p, bool keep_real, int max_iters = 20);

}  // namespace hyperdet
