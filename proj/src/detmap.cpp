#include "hyperdet/detmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hyperdet/error.hpp"

namespace hyperdet {

SymPair::SymPair(int d) : d_(d), coords_(dimension(d), cplx(0.0)) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "pair size must be at least 1");
}

SymPair::SymPair(int d, std::vector<cplx> coords) : d_(d), coords_(std::move(coords)) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "pair size must be at least 1");
  if (coords_.size() != dimension(d)) {
    throw Error(ErrorCode::InvalidArgument, "pair needs d(d+3)/2 coordinates");
  }
}

SymPair SymPair::from_matrices(const Eigen::VectorXcd& diag, const Eigen::MatrixXcd& sym) {
  const int d = static_cast<int>(diag.size());
  if (sym.rows() != d || sym.cols() != d) {
    throw Error(ErrorCode::InvalidArgument, "R must be d x d");
  }
  SymPair z(d);
  for (int k = 0; k < d; ++k) z.diag(k) = diag(k);
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      if (std::abs(sym(j, k) - sym(k, j)) > 1e-12 * (1.0 + std::abs(sym(j, k)))) {
        throw Error(ErrorCode::InvalidArgument, "R is not symmetric");
      }
      z.sym(j, k) = sym(j, k);
    }
  }
  return z;
}

std::size_t SymPair::sym_index(int d, int j, int k) noexcept {
  if (j > k) std::swap(j, k);
  // Rows 0..j-1 of the upper triangle hold d + (d-1) + ... + (d-j+1) entries.
  const auto row_start = static_cast<std::size_t>(j) * static_cast<std::size_t>(2 * d - j + 1) / 2;
  return static_cast<std::size_t>(d) + row_start + static_cast<std::size_t>(k - j);
}

Eigen::VectorXcd SymPair::diag_vector() const {
  Eigen::VectorXcd v(d_);
  for (int k = 0; k < d_; ++k) v(k) = diag(k);
  return v;
}

Eigen::MatrixXcd SymPair::sym_matrix() const {
  Eigen::MatrixXcd r(d_, d_);
  for (int j = 0; j < d_; ++j) {
    for (int k = j; k < d_; ++k) {
      r(j, k) = sym(j, k);
      r(k, j) = r(j, k);
    }
  }
  return r;
}

double SymPair::max_imag() const noexcept {
  double m = 0.0;
  for (const auto& c : coords_) m = std::max(m, std::abs(c.imag()));
  return m;
}

double SymPair::norm() const noexcept {
  double s = 0.0;
  for (const auto& c : coords_) s += std::norm(c);
  return std::sqrt(s);
}

Eigen::MatrixXcd pencil_at(const SymPair& z, const Point3& pt) {
  const int d = z.d();
  Eigen::MatrixXcd m(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      m(j, k) = pt[2] * z.sym(j, k);
      m(k, j) = m(j, k);
    }
    m(j, j) += pt[0] + pt[1] * z.diag(j);
  }
  return m;
}

cplx phi_eval(const SymPair& z, const Point3& pt) {
  return pencil_at(z, pt).partialPivLu().determinant();
}

Eigen::MatrixXcd adjugate(const Eigen::MatrixXcd& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) return Eigen::MatrixXcd::Ones(1, 1);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  const auto& packed = lu.matrixLU();
  double max_pivot = 0.0;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    max_pivot = std::max(max_pivot, std::abs(packed(i, i)));
    min_pivot = std::min(min_pivot, std::abs(packed(i, i)));
  }
  if (max_pivot > 0.0 && min_pivot > 1e-13 * max_pivot) {
    return lu.determinant() * lu.inverse();
  }
  // Near-singular pencil: cofactor expansion stays accurate where the inverse
  // does not exist.
  Eigen::MatrixXcd adj(n, n);
  Eigen::MatrixXcd minor(n - 1, n - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (Eigen::Index c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc++) = m(r, c);
        }
        ++mr;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      adj(j, i) = sign * minor.fullPivLu().determinant();
    }
  }
  return adj;
}

ValueAndGradient phi_eval_grad(const SymPair& z, const Point3& pt) {
  const int d = z.d();
  const Eigen::MatrixXcd m = pencil_at(z, pt);
  const cplx value = m.partialPivLu().determinant();
  const Eigen::MatrixXcd adj = adjugate(m);
  Eigen::VectorXcd grad(static_cast<Eigen::Index>(z.size()));
  for (int k = 0; k < d; ++k) grad(k) = pt[1] * adj(k, k);
  for (int j = 0; j < d; ++j) {
    for (int k = j; k < d; ++k) {
      const auto idx = static_cast<Eigen::Index>(SymPair::sym_index(d, j, k));
      grad(idx) = (j == k) ? pt[2] * adj(j, j) : 2.0 * pt[2] * adj(j, k);
    }
  }
  return {value, grad};
}

namespace {

struct GridSamples {
  int n = 0;
  std::vector<cplx> roots;  // n-th roots of unity
};

GridSamples grid_for(int d) {
  GridSamples g;
  g.n = d + 1;
  g.roots.resize(static_cast<std::size_t>(g.n));
  for (int a = 0; a < g.n; ++a) g.roots[a] = std::polar(1.0, 2.0 * std::numbers::pi * a / g.n);
  return g;
}

// Inverse 2-D DFT of values on the grid; out(j, k) is the coefficient of
// x^j y^k in det(I + xD + yR).
template <class Sample>
std::vector<Sample> grid_coefficients(const GridSamples& g, const std::vector<Sample>& values) {
  const int n = g.n;
  std::vector<Sample> out(values.size(), values.front() * cplx(0.0));
  const double inv = 1.0 / static_cast<double>(n * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      Sample acc = values.front() * cplx(0.0);
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const cplx w = std::conj(g.roots[static_cast<std::size_t>((a * j + b * k) % n)]);
          acc += values[static_cast<std::size_t>(a * n + b)] * w;
        }
      }
      out[static_cast<std::size_t>(j * n + k)] = acc * inv;
    }
  }
  return out;
}

}  // namespace

TernaryForm phi_coeffs(const SymPair& z) {
  const int d = z.d();
  const auto g = grid_for(d);
  std::vector<cplx> values(static_cast<std::size_t>(g.n * g.n));
  double scale = 0.0;
  for (int a = 0; a < g.n; ++a) {
    for (int b = 0; b < g.n; ++b) {
      const cplx v = phi_eval(z, {1.0, g.roots[a], g.roots[b]});
      values[static_cast<std::size_t>(a * g.n + b)] = v;
      scale = std::max(scale, std::abs(v));
    }
  }
  const auto grid = grid_coefficients(g, values);

  TernaryForm out(d);
  double aliased = 0.0;
  for (int j = 0; j < g.n; ++j) {
    for (int k = 0; k < g.n; ++k) {
      const cplx c = grid[static_cast<std::size_t>(j * g.n + k)];
      if (j + k <= d) {
        out.coeff({d - j - k, j, k}) = c;
      } else {
        aliased = std::max(aliased, std::abs(c));
      }
    }
  }
  // Monomials beyond total degree d must vanish; a large value means the
  // samples did not come from a degree-d form.
  if (aliased > 1e-9 * std::max(1.0, scale)) {
    throw Error(ErrorCode::IllConditionedNodes,
                "coefficient recovery residual " + std::to_string(aliased));
  }
  out[0] = 1.0;
  return out;
}

Eigen::MatrixXcd phi_coeffs_jacobian(const SymPair& z) {
  const int d = z.d();
  const auto g = grid_for(d);
  std::vector<Eigen::VectorXcd> grads(static_cast<std::size_t>(g.n * g.n));
  for (int a = 0; a < g.n; ++a) {
    for (int b = 0; b < g.n; ++b) {
      grads[static_cast<std::size_t>(a * g.n + b)] = phi_eval_grad(z, {1.0, g.roots[a], g.roots[b]}).grad;
    }
  }
  const auto grid = grid_coefficients(g, grads);
  const auto m = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXcd jac(m, m);
  for (Eigen::Index row = 0; row < m; ++row) {
    const auto e = TernaryForm::exponent_at(d, static_cast<std::size_t>(row) + 1);
    jac.row(row) = grid[static_cast<std::size_t>(e.x * g.n + e.y)].transpose();
  }
  return jac;
}

std::vector<double> extract_D_candidates(const TernaryForm& p) {
  const auto roots = univariate_roots(restrict_direction(p, -1.0, 0.0));
  std::vector<double> out;
  out.reserve(roots.size());
  for (const auto& r : roots) {
    if (std::abs(r.imag()) >= 1e-7) {
      throw Error(ErrorCode::NonRealRoots, "p(t, -1, 0) has non-real roots");
    }
    out.push_back(r.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FiberCardinality fiber_cardinality(int d) {
  using boost::multiprecision::cpp_int;
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "degree must be at least 1");
  const unsigned g = static_cast<unsigned>((d - 1) * (d - 2) / 2);
  cpp_int factorial = 1;
  for (int i = 2; i <= d; ++i) factorial *= i;
  const cpp_int signs = cpp_int(1) << static_cast<unsigned>(d - 1);
  const cpp_int two_g = cpp_int(1) << g;
  // 2^{g-1} (2^g + 1) written as (2^{2g} + 2^g) / 2 so g = 0 stays integral.
  const cpp_int classes = (two_g * two_g + two_g) / 2;
  return {classes * signs * factorial, two_g * signs * factorial};
}

}  // namespace hyperdet
