#include "hyperdet/ternary_form.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hyperdet/error.hpp"

namespace hyperdet {

TernaryForm::TernaryForm(int degree) : degree_(degree), coeffs_(size_for(degree), cplx(0.0)) {
  if (degree < 0) throw Error(ErrorCode::InvalidArgument, "negative degree");
}

TernaryForm TernaryForm::t_power(int degree) {
  TernaryForm f(degree);
  f.coeffs_[0] = 1.0;
  return f;
}

std::size_t TernaryForm::index_of(int degree, const Exponent& e) noexcept {
  // a = total (x, y)-degree; within a block, x-power decreases.
  const auto a = static_cast<std::size_t>(degree - e.t);
  return a * (a + 1) / 2 + (a - static_cast<std::size_t>(e.x));
}

Exponent TernaryForm::exponent_at(int degree, std::size_t index) noexcept {
  std::size_t a = 0;
  while ((a + 1) * (a + 2) / 2 <= index) ++a;
  const std::size_t offset = index - a * (a + 1) / 2;
  const int x = static_cast<int>(a - offset);
  return {degree - static_cast<int>(a), x, static_cast<int>(a) - x};
}

bool TernaryForm::is_real(double tol) const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [tol](const cplx& c) { return std::abs(c.imag()) < tol; });
}

double TernaryForm::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

TernaryForm& TernaryForm::operator+=(const TernaryForm& other) {
  if (other.degree_ != degree_) throw Error(ErrorCode::DegreeMismatch, "form addition");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

TernaryForm& TernaryForm::operator-=(const TernaryForm& other) {
  if (other.degree_ != degree_) throw Error(ErrorCode::DegreeMismatch, "form subtraction");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

TernaryForm& TernaryForm::operator*=(cplx scale) noexcept {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

namespace {

std::vector<cplx> powers(cplx base, int n) {
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1);
  out[0] = 1.0;
  for (int i = 1; i <= n; ++i) out[i] = out[i - 1] * base;
  return out;
}

// Parlett-Reinsch balancing with radix-2 scaling; leaves eigenvalues intact.
template <class Matrix>
void balance(Matrix& a) {
  const Eigen::Index n = a.rows();
  constexpr double radix = 2.0;
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

cplx horner_derivative(std::span<const cplx> coeffs, cplx z) noexcept {
  const std::size_t n = coeffs.size() - 1;
  cplx acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc = acc * z + coeffs[i] * static_cast<double>(n - i);
  return acc;
}

}  // namespace

cplx horner(std::span<const cplx> coeffs, cplx z) noexcept {
  cplx acc = 0.0;
  for (const auto& c : coeffs) acc = acc * z + c;
  return acc;
}

cplx evaluate(const TernaryForm& f, const Point3& pt) {
  const int d = f.degree();
  const auto tp = powers(pt[0], d);
  const auto xp = powers(pt[1], d);
  const auto yp = powers(pt[2], d);
  cplx acc = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto e = TernaryForm::exponent_at(d, idx);
    acc += f[idx] * tp[e.t] * xp[e.x] * yp[e.y];
  }
  return acc;
}

std::vector<cplx> restrict_direction(const TernaryForm& f, double u, double v) {
  if (u == 0.0 && v == 0.0) throw Error(ErrorCode::ZeroDirection, "direction (0, 0)");
  const int d = f.degree();
  std::vector<double> up(d + 1, 1.0);
  std::vector<double> vp(d + 1, 1.0);
  for (int i = 1; i <= d; ++i) {
    up[i] = up[i - 1] * u;
    vp[i] = vp[i - 1] * v;
  }
  std::vector<cplx> out(static_cast<std::size_t>(d) + 1, cplx(0.0));
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto e = TernaryForm::exponent_at(d, idx);
    out[static_cast<std::size_t>(d - e.t)] += f[idx] * up[e.x] * vp[e.y];
  }
  return out;
}

std::vector<cplx> univariate_roots(std::span<const cplx> coeffs) {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient list");
  double scale = 0.0;
  for (const auto& c : coeffs) scale = std::max(scale, std::abs(c));
  const cplx lead = coeffs[0];
  if (scale == 0.0 || std::abs(lead) <= 1e-300 * scale) {
    throw Error(ErrorCode::DegenerateLeadingCoefficient, "leading coefficient vanishes");
  }
  const auto n = static_cast<Eigen::Index>(coeffs.size() - 1);
  std::vector<cplx> roots;
  if (n == 0) return roots;
  roots.reserve(static_cast<std::size_t>(n));

  const bool real = std::all_of(coeffs.begin(), coeffs.end(),
                                [](const cplx& c) { return c.imag() == 0.0; });
  if (real) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) comp(0, j) = -(coeffs[j + 1] / lead).real();
    for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    balance(comp);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) comp(0, j) = -coeffs[j + 1] / lead;
    for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    balance(comp);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (Eigen::Index i = 0; i < n; ++i) roots.push_back(es.eigenvalues()[i]);
  }

  for (auto& r : roots) {
    cplx value = horner(coeffs, r);
    for (int it = 0; it < 3 && value != 0.0; ++it) {
      const cplx slope = horner_derivative(coeffs, r);
      if (slope == 0.0) break;
      const cplx candidate = r - value / slope;
      const cplx cv = horner(coeffs, candidate);
      if (std::abs(cv) >= std::abs(value)) break;
      r = candidate;
      value = cv;
    }
  }
  return roots;
}

HyperbolicityReport check_hyperbolic(const TernaryForm& f, int n_dirs, double tol) {
  if (!f.is_real()) throw Error(ErrorCode::NotReal, "hyperbolicity needs real coefficients");
  if (n_dirs < 1) throw Error(ErrorCode::InvalidArgument, "n_dirs must be positive");

  std::vector<double> angles;
  angles.reserve(2 * static_cast<std::size_t>(n_dirs));
  for (int k = 0; k < n_dirs; ++k) angles.push_back(std::numbers::pi * k / n_dirs);
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  for (int k = 0; k < n_dirs; ++k) angles.push_back(angle(rng));

  HyperbolicityReport report;
  report.min_gap = std::numeric_limits<double>::infinity();
  double worst_gap_dir = 0.0;
  double worst_imag_dir = 0.0;
  for (double theta : angles) {
    const double u = std::cos(theta);
    const double v = std::sin(theta);
    const auto roots = univariate_roots(restrict_direction(f, u, v));
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const double im = std::abs(roots[i].imag()) / (1.0 + std::abs(roots[i]));
      if (im > report.max_imag) {
        report.max_imag = im;
        worst_imag_dir = theta;
      }
      for (std::size_t j = i + 1; j < roots.size(); ++j) {
        const double scale = 1.0 + std::max(std::abs(roots[i]), std::abs(roots[j]));
        const double gap = std::abs(roots[i] - roots[j]) / scale;
        if (gap < report.min_gap) {
          report.min_gap = gap;
          worst_gap_dir = theta;
        }
      }
    }
  }
  if (!std::isfinite(report.min_gap)) report.min_gap = 0.0;
  // degree 1 has no pairs; treat its single root as trivially separated.
  if (f.degree() <= 1) report.min_gap = 1.0;

  report.is_hyperbolic = report.max_imag < tol;
  report.is_strict = report.is_hyperbolic && report.min_gap > tol;
  const double witness = report.is_hyperbolic ? worst_gap_dir : worst_imag_dir;
  report.witness_direction = {std::cos(witness), std::sin(witness)};
  return report;
}

std::array<cplx, 3> gradient_at(const TernaryForm& f, const Point3& pt) {
  const int d = f.degree();
  const auto tp = powers(pt[0], d);
  const auto xp = powers(pt[1], d);
  const auto yp = powers(pt[2], d);
  std::array<cplx, 3> g{};
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto e = TernaryForm::exponent_at(d, idx);
    const cplx c = f[idx];
    if (e.t > 0) g[0] += c * static_cast<double>(e.t) * tp[e.t - 1] * xp[e.x] * yp[e.y];
    if (e.x > 0) g[1] += c * static_cast<double>(e.x) * tp[e.t] * xp[e.x - 1] * yp[e.y];
    if (e.y > 0) g[2] += c * static_cast<double>(e.y) * tp[e.t] * xp[e.x] * yp[e.y - 1];
  }
  return g;
}

TernaryForm diff_t(const TernaryForm& f, int k) {
  const int d = f.degree();
  if (k < 0 || k > d) throw Error(ErrorCode::InvalidArgument, "derivative order out of range");
  TernaryForm out(d - k);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto e = TernaryForm::exponent_at(d, idx);
    if (e.t < k) continue;
    double falling = 1.0;
    for (int r = 0; r < k; ++r) falling *= static_cast<double>(e.t - r);
    out.coeff({e.t - k, e.x, e.y}) = f[idx] * falling;
  }
  return out;
}

double coeff_distance(const TernaryForm& f, const TernaryForm& g) {
  if (f.degree() != g.degree()) throw Error(ErrorCode::DegreeMismatch, "coeff_distance");
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i] - g[i]));
  return m;
}

TernaryForm normalize_leading(const TernaryForm& f) {
  const cplx lead = f[0];
  if (std::abs(lead) <= 1e-300 || std::abs(lead) <= 1e-14 * f.max_abs_coeff()) {
    throw Error(ErrorCode::LeadingCoefficientZero, "coefficient of t^d vanishes");
  }
  TernaryForm out = f;
  out *= 1.0 / lead;
  out[0] = 1.0;
  return out;
}

TernaryForm multiply_binary(std::span<const cplx> binary, const TernaryForm& f) {
  const int b = static_cast<int>(binary.size()) - 1;
  const int d = f.degree();
  TernaryForm out(d + b);
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    const auto e = TernaryForm::exponent_at(d, idx);
    if (f[idx] == 0.0) continue;
    for (int a = 0; a <= b; ++a) {
      const cplx c = binary[static_cast<std::size_t>(b - a)];
      if (c == 0.0) continue;
      out.coeff({e.t, e.x + a, e.y + b - a}) += f[idx] * c;
    }
  }
  return out;
}

TernaryForm real_part(const TernaryForm& f) {
  TernaryForm out = f;
  for (auto& c : out.coeffs()) c = c.real();
  return out;
}

}  // namespace hyperdet
