#include "hyperdet/nuij.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>

#include "hyperdet/error.hpp"

namespace hyperdet {

std::uint64_t LinearFormSet::hash() const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (const auto& l : forms) {
    mix(l.a);
    mix(l.b);
  }
  return h;
}

LinearFormSet sample_linear_forms(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  LinearFormSet set;
  while (static_cast<int>(set.forms.size()) < count) {
    LinearForm l{unit(rng), unit(rng)};
    if (std::abs(l.a) + std::abs(l.b) < 0.1) continue;
    set.forms.push_back(l);
  }
  return set;
}

TernaryForm apply_T(const TernaryForm& f, const LinearForm& l, cplx s) {
  TernaryForm out = f;
  if (s == 0.0 || f.degree() == 0) return out;
  const TernaryForm df = diff_t(f, 1);
  const cplx binary[2] = {s * l.a, s * l.b};
  out += multiply_binary(binary, df);
  return out;
}

TernaryForm apply_G(const TernaryForm& f, cplx s) {
  const int d = f.degree();
  std::vector<cplx> sp(static_cast<std::size_t>(d) + 1, cplx(1.0));
  for (int i = 1; i <= d; ++i) sp[i] = sp[i - 1] * s;
  TernaryForm out = f;
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const auto e = TernaryForm::exponent_at(d, idx);
    out[idx] *= sp[static_cast<std::size_t>(e.x + e.y)];
  }
  return out;
}

TernaryForm apply_F(const TernaryForm& f, cplx s, const PathKind& kind) {
  TernaryForm out = f;
  if (const auto* r = std::get_if<RandomizedPath>(&kind)) {
    for (auto it = r->forms.forms.rbegin(); it != r->forms.forms.rend(); ++it) {
      out = apply_T(out, *it, s);
    }
    return out;
  }
  const int d = f.degree();
  for (int i = 0; i < d; ++i) out = apply_T(out, {0.0, 1.0}, s);
  for (int i = 0; i < d; ++i) out = apply_T(out, {1.0, 0.0}, s);
  return out;
}

TernaryForm expand_F_randomized(const TernaryForm& f, cplx s, const LinearFormSet& forms) {
  // sigma[k] holds the binary form sigma_k(l_1..l_e) as coefficients of
  // x^a y^{k-a}, a = k..0.
  const std::size_t e = forms.size();
  std::vector<std::vector<cplx>> sigma(e + 1);
  sigma[0] = {1.0};
  for (std::size_t k = 1; k <= e; ++k) sigma[k].assign(k + 1, 0.0);
  for (std::size_t n = 0; n < e; ++n) {
    const auto& l = forms.forms[n];
    for (std::size_t k = n + 1; k >= 1; --k) {
      // sigma_k += l * sigma_{k-1}
      const auto& prev = sigma[k - 1];
      for (std::size_t i = 0; i < prev.size(); ++i) {
        sigma[k][i] += l.a * prev[i];
        sigma[k][i + 1] += l.b * prev[i];
      }
    }
  }

  const int d = f.degree();
  TernaryForm out(d);
  cplx sk = 1.0;
  for (std::size_t k = 0; k <= e && static_cast<int>(k) <= d; ++k) {
    if (k > 0) sk *= s;
    TernaryForm term = multiply_binary(sigma[k], diff_t(f, static_cast<int>(k)));
    term *= sk;
    out += term;
  }
  return out;
}

TernaryForm fixed_endpoint(int degree, const PathKind& kind) {
  if (degree < 1) throw Error(ErrorCode::InvalidArgument, "degree must be at least 1");
  TernaryForm endpoint = apply_F(TernaryForm::t_power(degree), 1.0, kind);
  const auto report = check_hyperbolic(endpoint);
  if (!report.is_strict) {
    throw Error(ErrorCode::EndpointNotStrict,
                "fixed endpoint of degree " + std::to_string(degree) +
                    " failed the strictness certificate");
  }
  return endpoint;
}

PathKind make_randomized_kind(int degree, std::uint64_t seed) {
  const int count = std::max(degree, 2);
  for (int attempt = 0; attempt < 10; ++attempt) {
    PathKind kind = RandomizedPath{sample_linear_forms(count, seed + 0x632be59bd9b4e019ULL * attempt)};
    try {
      fixed_endpoint(degree, kind);
      return kind;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EndpointNotStrict) throw;
    }
  }
  throw Error(ErrorCode::EndpointNotStrict, "no strict randomized endpoint after 10 draws");
}

TernaryForm nuij_direct(const TernaryForm& p, cplx s, const PathKind& kind) {
  return apply_F(apply_G(p, s), 1.0 - s, kind);
}

namespace {

// Clenshaw evaluation of sum c_k T_k(x) and of its x-derivative.
std::pair<cplx, cplx> chebyshev_eval(const std::vector<cplx>& c, cplx x) {
  const std::size_t n = c.size();
  cplx b1 = 0.0, b2 = 0.0;
  for (std::size_t k = n; k-- > 1;) {
    const cplx b0 = 2.0 * x * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  const cplx value = x * b1 - b2 + c[0];

  if (n < 2) return {value, 0.0};
  std::vector<cplx> dc(n - 1, 0.0);
  dc[n - 2] = 2.0 * static_cast<double>(n - 1) * c[n - 1];
  if (n >= 3) {
    for (std::size_t k = n - 2; k-- > 0;) {
      dc[k] = (k + 2 < dc.size() ? dc[k + 2] : cplx(0.0)) + 2.0 * static_cast<double>(k + 1) * c[k + 1];
    }
  }
  dc[0] *= 0.5;
  b1 = 0.0;
  b2 = 0.0;
  for (std::size_t k = dc.size(); k-- > 1;) {
    const cplx b0 = 2.0 * x * b1 - b2 + dc[k];
    b2 = b1;
    b1 = b0;
  }
  return {value, x * b1 - b2 + dc[0]};
}

}  // namespace

NuijFamily::NuijFamily(TernaryForm base, PathKind kind) : base_(std::move(base)), kind_(std::move(kind)) {
  const int d = base_.degree();
  const std::size_t nodes = 2 * static_cast<std::size_t>(d) + 1;
  std::vector<double> xs(nodes);
  std::vector<TernaryForm> samples;
  samples.reserve(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    xs[j] = std::cos(std::numbers::pi * (static_cast<double>(j) + 0.5) / static_cast<double>(nodes));
    samples.push_back(nuij_direct(base_, 0.5 * (1.0 + xs[j]), kind_));
  }
  s_polys_.assign(base_.size(), std::vector<cplx>(nodes, 0.0));
  for (std::size_t k = 0; k < nodes; ++k) {
    const double w = (k == 0 ? 1.0 : 2.0) / static_cast<double>(nodes);
    for (std::size_t j = 0; j < nodes; ++j) {
      const double tk = std::cos(static_cast<double>(k) * std::acos(xs[j]));
      for (std::size_t idx = 0; idx < base_.size(); ++idx) s_polys_[idx][k] += w * tk * samples[j][idx];
    }
  }
}

TernaryForm NuijFamily::at(cplx s) const {
  TernaryForm out(base_.degree());
  const cplx x = 2.0 * s - 1.0;
  for (std::size_t idx = 0; idx < out.size(); ++idx) out[idx] = chebyshev_eval(s_polys_[idx], x).first;
  return out;
}

TernaryForm NuijFamily::s_derivative(cplx s) const {
  TernaryForm out(base_.degree());
  const cplx x = 2.0 * s - 1.0;
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out[idx] = 2.0 * chebyshev_eval(s_polys_[idx], x).second;
  }
  return out;
}

int s_degree_profile(const NuijFamily& fam) {
  double scale = 0.0;
  for (std::size_t idx = 0; idx < fam.base().size(); ++idx) {
    for (const auto& c : fam.s_poly(idx)) scale = std::max(scale, std::abs(c));
  }
  int degree = 0;
  for (std::size_t idx = 0; idx < fam.base().size(); ++idx) {
    const auto& poly = fam.s_poly(idx);
    for (std::size_t k = poly.size(); k-- > 0;) {
      if (std::abs(poly[k]) > 1e-10 * scale) {
        degree = std::max(degree, static_cast<int>(k));
        break;
      }
    }
  }
  return degree;
}

}  // namespace hyperdet
