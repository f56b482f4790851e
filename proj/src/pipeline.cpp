#include "hyperdet/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "hyperdet/error.hpp"
#include "hyperdet/serialize.hpp"

namespace hyperdet {

namespace {

constexpr double kSuccessResidual = 1e-6;
constexpr double kRealDropThreshold = 1e-6;

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a ^ rotated b.
  std::uint64_t z = a ^ (b * 0x9e3779b97f4a7c15ULL + 0x7f4a7c159e3779b9ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t kind_hash(const PathKind& kind) {
  if (const auto* r = std::get_if<RandomizedPath>(&kind)) return r->forms.hash();
  return 0;
}

std::uint64_t form_hash(const TernaryForm& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& c : f.coeffs()) {
    for (double part : {c.real(), c.imag()}) {
      h ^= std::bit_cast<std::uint64_t>(part);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

double relative_distance(const TernaryForm& f, const TernaryForm& g) {
  return coeff_distance(f, g) / std::max(1.0, g.max_abs_coeff());
}

PhaseStats stats_from(const std::string& phase, const TrackResult& r) {
  PhaseStats s;
  s.phase = phase;
  s.status = r.status;
  s.steps_taken = r.steps_taken;
  s.rejected_steps = r.rejected_steps;
  s.max_residual_seen = r.max_residual_seen;
  s.max_imag_seen = r.max_imag_seen;
  return s;
}

bool is_t_power(const TernaryForm& p) {
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] != 0.0) return false;
  }
  return true;
}

struct AttemptOutcome {
  std::optional<Representation> rep;
  std::vector<std::string> diagnostics;
};

// One seed's run of the fallback ladder: plain tracking, a fresh dual basis,
// a complex detour, then random real perturbations of p.
AttemptOutcome solve_with_seed(const TernaryForm& p, const SolveOptions& opts, std::uint64_t seed,
                               EndpointCache* cache) {
  AttemptOutcome outcome;
  const int d = p.degree();
  std::vector<PhaseStats> phase1_stats;
  SymPair z0;
  try {
    z0 = phase1(d, opts, cache, &phase1_stats);
  } catch (const Error& e) {
    outcome.diagnostics.push_back(std::string("phase1: ") + e.what());
    return outcome;
  }

  std::mt19937_64 rng(mix(seed, 0xd1b54a32d192ed03ULL));
  std::uniform_real_distribution<double> detour_imag(0.25, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);

  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    SolveOptions local = opts;
    TernaryForm target = p;
    const std::uint64_t basis_seed = mix(seed, static_cast<std::uint64_t>(attempt));
    std::string label = "plain";

    const bool detour_step = opts.detour == DetourMode::Always ||
                             (opts.detour == DetourMode::Auto && attempt == 2);
    if (detour_step) {
      if (!local.detour_c) local.detour_c = cplx(0.5, detour_imag(rng));
      label = "detour";
    } else {
      local.detour_c.reset();
    }
    const bool perturb_step = attempt >= 3 || (attempt == 2 && opts.detour == DetourMode::Off);
    if (perturb_step) {
      for (std::size_t i = 1; i < target.size(); ++i) target[i] += 1e-6 * unit(rng);
      label += "+perturbed";
    }
    if (attempt == 1) label = detour_step ? "detour+fresh-basis" : "fresh-basis";

    PhaseStats phase2_stats;
    try {
      SymPair z = phase2(target, z0, local, &phase2_stats, basis_seed);
      const bool real = z.max_imag() < kRealDropThreshold;
      if (real) {
        for (auto& c : z.coords()) c = c.real();
      }
      z = polish(z, p, real);
      Representation rep;
      rep.is_real = real;
      if (real) {
        auto canon = canonicalize(z);
        rep.pair = std::move(canon.pair);
        rep.ambiguous_sign = canon.ambiguous_sign;
      } else {
        rep.pair = std::move(z);
      }
      rep.residual = coeff_distance(phi_coeffs(rep.pair), p);
      rep.attempts = attempt + 1;
      rep.stats = phase1_stats;
      rep.stats.push_back(phase2_stats);
      if (rep.residual < kSuccessResidual) {
        rep.diagnostics = outcome.diagnostics;
        outcome.rep = std::move(rep);
        return outcome;
      }
      std::ostringstream msg;
      msg << "attempt " << attempt + 1 << " (" << label << "): residual " << rep.residual;
      outcome.diagnostics.push_back(msg.str());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SolveFailed && e.code() != ErrorCode::SingularJacobian &&
          e.code() != ErrorCode::DegenerateD && e.code() != ErrorCode::IllConditionedNodes &&
          e.code() != ErrorCode::BasisConditioningFailed) {
        throw;
      }
      outcome.diagnostics.push_back("attempt " + std::to_string(attempt + 1) + " (" + label + "): " + e.what());
    }
  }
  return outcome;
}

}  // namespace

void SolveOptions::validate() const {
  if (!(perturb_eps > 0.0 && perturb_eps < 0.5)) {
    throw Error(ErrorCode::InvalidArgument, "perturb_eps must lie in (0, 0.5)");
  }
  if (detour_c && detour_c->imag() == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "detour waypoint needs a nonzero imaginary part");
  }
  if (max_retries < 1) throw Error(ErrorCode::InvalidArgument, "max_retries must be positive");
  if (parallel_attempts < 1) throw Error(ErrorCode::InvalidArgument, "parallel_attempts must be positive");
  if (forms && forms->forms.empty()) throw Error(ErrorCode::InvalidArgument, "empty linear form set");
  tracker.validate();
}

PathKind resolve_kind(int d, const SolveOptions& opts) {
  if (opts.path == PathChoice::Original) return OriginalPath{};
  if (opts.forms) {
    if (static_cast<int>(opts.forms->size()) < std::max(d, 2)) {
      throw Error(ErrorCode::InvalidArgument, "randomized path needs at least max(d, 2) linear forms");
    }
    return RandomizedPath{*opts.forms};
  }
  return make_randomized_kind(d, mix(opts.seed, static_cast<std::uint64_t>(d)));
}

std::vector<double> Representation::D() const {
  std::vector<double> out;
  for (int k = 0; k < pair.d(); ++k) out.push_back(pair.diag(k).real());
  return out;
}

Eigen::MatrixXd Representation::R() const { return pair.sym_matrix().real(); }

std::string EndpointCache::key_name(int d, const PathKind& kind) {
  std::ostringstream name;
  name << "endpoint-d" << d << '-' << (is_randomized(kind) ? "randomized" : "original") << '-' << std::hex
       << kind_hash(kind) << ".json";
  return name.str();
}

std::optional<SymPair> EndpointCache::load(int d, const PathKind& kind) {
  const std::string key = key_name(d, kind);
  std::optional<SymPair> candidate;
  {
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(key); it != memory_.end()) candidate = it->second;
  }
  if (!candidate && !directory_.empty()) {
    const auto path = std::filesystem::path(directory_) / key;
    std::ifstream in(path);
    if (in) {
      try {
        std::stringstream buffer;
        buffer << in.rdbuf();
        const json j = parse_json_text(buffer.str());
        if (j.at("d").get<int>() == d) candidate = pair_from_json(j.at("pair"));
      } catch (const std::exception&) {
        candidate.reset();
      }
    }
  }
  if (!candidate || candidate->d() != d) return std::nullopt;
  const TernaryForm endpoint = apply_F(TernaryForm::t_power(d), 1.0, kind);
  if (relative_distance(phi_coeffs(*candidate), endpoint) >= 1e-8) return std::nullopt;
  std::lock_guard lock(mutex_);
  memory_[key] = *candidate;
  return candidate;
}

void EndpointCache::store(int d, const PathKind& kind, const SymPair& pair) {
  const std::string key = key_name(d, kind);
  {
    std::lock_guard lock(mutex_);
    memory_[key] = pair;
  }
  if (directory_.empty()) return;
  const TernaryForm endpoint = apply_F(TernaryForm::t_power(d), 1.0, kind);
  json j = {{"d", d},
            {"path", is_randomized(kind) ? "randomized" : "original"},
            {"endpoint_poly_hash", form_hash(endpoint)},
            {"pair", pair_to_json(pair)}};
  if (const auto* r = std::get_if<RandomizedPath>(&kind)) j["forms"] = forms_to_json(r->forms)["forms"];

  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  const auto final_path = std::filesystem::path(directory_) / key;
  std::ostringstream tmp_name;
  tmp_name << key << ".tmp" << std::hex << std::hash<std::thread::id>{}(std::this_thread::get_id());
  const auto tmp_path = std::filesystem::path(directory_) / tmp_name.str();
  {
    std::ofstream out(tmp_path, std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write cache file " + tmp_path.string());
    out << j.dump(2) << '\n';
    if (!out) throw Error(ErrorCode::Io, "cannot write cache file " + tmp_path.string());
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot move cache file into place: " + ec.message());
}

SymPair phase1(int d, const SolveOptions& opts, EndpointCache* cache, std::vector<PhaseStats>* stats) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "degree must be at least 1");
  const PathKind kind = resolve_kind(d, opts);
  if (cache) {
    if (auto cached = cache->load(d, kind)) {
      if (stats) {
        PhaseStats s;
        s.phase = "phase1";
        s.from_cache = true;
        stats->push_back(s);
      }
      return *cached;
    }
  }

  // The start pair does not depend on the user seed, so cached and rebuilt
  // endpoints agree.
  const std::uint64_t base_seed = mix(0x243f6a8885a308d3ULL ^ kind_hash(kind), static_cast<std::uint64_t>(d));
  const TernaryForm endpoint = apply_F(TernaryForm::t_power(d), 1.0, kind);
  std::vector<std::string> failures;
  for (int attempt = 0; attempt < opts.max_retries; ++attempt) {
    std::mt19937_64 rng(mix(base_seed, static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    SymPair start(d);
    bool strict = false;
    for (int draw = 0; draw < 10 && !strict; ++draw) {
      // Evenly spaced diagonal with jitter keeps q away from the boundary of
      // the strictly hyperbolic region.
      std::vector<double> diag;
      for (int k = 0; k < d; ++k) diag.push_back(k - 0.5 * (d - 1) + 0.3 * unit(rng));
      std::shuffle(diag.begin(), diag.end(), rng);
      for (int k = 0; k < d; ++k) start.diag(k) = diag[static_cast<std::size_t>(k)];
      for (int j = 0; j < d; ++j) {
        for (int k = j; k < d; ++k) start.sym(j, k) = unit(rng);
      }
      strict = check_hyperbolic(real_part(phi_coeffs(start))).is_strict;
    }
    if (!strict) throw Error(ErrorCode::StartNotStrict, "no strictly hyperbolic start pair in 10 draws");

    const TernaryForm q = real_part(phi_coeffs(start));
    const NuijFamily fam(q, kind);
    const DualBasis basis = make_dual_basis(d, mix(base_seed, 0x5851f42d4c957f2dULL + attempt));
    const TrackResult result = track(start, SPath::straight(1.0, 0.0), fam, basis, opts.tracker);
    if (result.status != TrackStatus::Success) {
      failures.push_back(to_string(result.status));
      continue;
    }
    SymPair z0 = result.endpoint;
    const bool real = z0.max_imag() < kRealDropThreshold;
    if (real) {
      for (auto& c : z0.coords()) c = c.real();
    }
    z0 = polish(z0, endpoint, real);
    if (relative_distance(phi_coeffs(z0), endpoint) >= 1e-8) {
      failures.push_back("endpoint residual too large");
      continue;
    }
    if (stats) stats->push_back(stats_from("phase1", result));
    if (cache) cache->store(d, kind, z0);
    return z0;
  }
  std::string msg = "phase 1 failed for degree " + std::to_string(d) + ":";
  for (const auto& f : failures) msg += " " + f;
  throw Error(ErrorCode::SolveFailed, msg);
}

SymPair phase2(const TernaryForm& p, const SymPair& z0, const SolveOptions& opts, PhaseStats* stats,
               std::uint64_t basis_seed) {
  const int d = p.degree();
  if (z0.d() != d) throw Error(ErrorCode::DegreeMismatch, "start pair and polynomial degrees differ");
  const PathKind kind = resolve_kind(d, opts);
  const NuijFamily fam(p, kind);
  const DualBasis basis = make_dual_basis(d, basis_seed);
  const SPath path = opts.detour_c ? SPath::detour(0.0, *opts.detour_c, 1.0) : SPath::straight(0.0, 1.0);
  const TrackResult result = track(z0, path, fam, basis, opts.tracker);
  if (stats) *stats = stats_from("phase2", result);
  // A singular endpoint still leaves the last accepted point close to the
  // target; the caller's polish decides whether it is usable.
  if (result.status != TrackStatus::Success && result.status != TrackStatus::SingularEndpoint) {
    throw Error(ErrorCode::SolveFailed, std::string("phase 2 tracker: ") + to_string(result.status));
  }
  return result.endpoint;
}

SymPair polish(const SymPair& z, const TernaryForm& p, bool keep_real, int max_iters) {
  const int d = z.d();
  if (p.degree() != d) throw Error(ErrorCode::DegreeMismatch, "polish");
  SymPair current = z;
  const auto m = static_cast<Eigen::Index>(z.size());
  const double scale = std::max(1.0, p.max_abs_coeff());
  double best = coeff_distance(phi_coeffs(current), p);
  for (int it = 0; it < max_iters && best > 1e-14 * scale; ++it) {
    const TernaryForm f = phi_coeffs(current);
    Eigen::VectorXcd r(m);
    for (Eigen::Index i = 0; i < m; ++i) r(i) = f[static_cast<std::size_t>(i) + 1] - p[static_cast<std::size_t>(i) + 1];
    Eigen::MatrixXcd jac = phi_coeffs_jacobian(current);
    Eigen::VectorXcd delta;
    if (keep_real) {
      const Eigen::MatrixXd jr = jac.real();
      const Eigen::VectorXd rr = r.real();
      delta = jr.partialPivLu().solve(-rr).cast<cplx>();
    } else {
      delta = jac.partialPivLu().solve(-r);
    }
    if (!delta.allFinite()) break;
    // Backtracking: near the ramification locus full steps overshoot.
    bool improved = false;
    double lambda = 1.0;
    for (int halving = 0; halving < 6 && !improved; ++halving, lambda *= 0.5) {
      SymPair next = current;
      for (Eigen::Index i = 0; i < m; ++i) next.coords()[static_cast<std::size_t>(i)] += lambda * delta(i);
      const double dist = coeff_distance(phi_coeffs(next), p);
      if (dist < best) {
        best = dist;
        current = std::move(next);
        improved = true;
      }
    }
    if (!improved) break;
  }
  return current;
}

CanonicalPair canonicalize(const SymPair& z) {
  const int d = z.d();
  if (!z.is_real(1e-12)) throw Error(ErrorCode::InvalidArgument, "canonicalize needs a real pair");
  std::vector<int> order(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&z](int a, int b) { return z.diag(a).real() < z.diag(b).real(); });
  for (int k = 1; k < d; ++k) {
    if (z.diag(order[k]).real() - z.diag(order[k - 1]).real() < 1e-9) {
      throw Error(ErrorCode::DegenerateD, "diagonal entries of D are not distinct");
    }
  }
  SymPair out(d);
  for (int j = 0; j < d; ++j) {
    out.diag(j) = z.diag(order[j]).real();
    for (int k = j; k < d; ++k) out.sym(j, k) = z.sym(order[j], order[k]).real();
  }

  CanonicalPair result;
  std::vector<double> sign(static_cast<std::size_t>(d), 1.0);
  for (int k = 1; k < d; ++k) {
    bool found = false;
    for (int j = 0; j < k; ++j) {
      const double v = out.sym(j, k).real();
      if (std::abs(v) > 1e-9) {
        sign[k] = (v > 0.0 ? 1.0 : -1.0) * sign[j];
        found = true;
        break;
      }
    }
    if (!found) result.ambiguous_sign = true;
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) out.sym(j, k) *= sign[j] * sign[k];
  }
  result.pair = std::move(out);
  return result;
}

double verify(const TernaryForm& p, const Representation& rep) {
  if (p.degree() != rep.pair.d()) throw Error(ErrorCode::DegreeMismatch, "verify");
  return coeff_distance(phi_coeffs(rep.pair), normalize_leading(p));
}

Representation solve(const TernaryForm& input, const SolveOptions& opts, EndpointCache* cache) {
  opts.validate();
  if (!input.is_real()) throw Error(ErrorCode::NotReal, "solve needs real coefficients");
  if (input.degree() < 1) throw Error(ErrorCode::InvalidArgument, "degree must be at least 1");
  TernaryForm p = real_part(normalize_leading(input));
  const int d = p.degree();

  if (is_t_power(p)) {
    Representation rep;
    rep.pair = SymPair(d);
    rep.ambiguous_sign = d > 1;
    return rep;
  }

  const auto report = check_hyperbolic(p);
  if (!report.is_hyperbolic) {
    throw Error(ErrorCode::NotHyperbolic, "max normalized imaginary root part " + std::to_string(report.max_imag));
  }
  bool approximate = false;
  if (!report.is_strict) {
    p = real_part(nuij_direct(p, 1.0 - opts.perturb_eps, resolve_kind(d, opts)));
    approximate = true;
  }

  const int k = opts.parallel_attempts;
  std::vector<AttemptOutcome> outcomes(static_cast<std::size_t>(k));
  if (k == 1) {
    outcomes[0] = solve_with_seed(p, opts, opts.seed, cache);
  } else {
    std::vector<std::future<AttemptOutcome>> futures;
    for (int i = 0; i < k; ++i) {
      const std::uint64_t seed = i == 0 ? opts.seed : mix(opts.seed, 0xa0761d6478bd642fULL + i);
      futures.push_back(std::async(std::launch::async, solve_with_seed, std::cref(p), std::cref(opts), seed, cache));
    }
    for (int i = 0; i < k; ++i) outcomes[i] = futures[i].get();
  }

  std::vector<std::string> diagnostics;
  for (auto& outcome : outcomes) {
    if (outcome.rep) {
      Representation rep = std::move(*outcome.rep);
      rep.approximate = approximate;
      return rep;
    }
    diagnostics.insert(diagnostics.end(), outcome.diagnostics.begin(), outcome.diagnostics.end());
  }
  std::string msg = "retries exhausted";
  for (const auto& line : diagnostics) msg += "\n  " + line;
  throw Error(ErrorCode::SolveFailed, msg);
}

}  // namespace hyperdet
