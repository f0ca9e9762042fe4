#include "shadowlab/linalg.hpp"

#include <algorithm>
#include <sstream>

#include "shadowlab/error.hpp"

namespace shadowlab {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DomainError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

Point operator+(Point const& a, Point const& b) {
  require_same_dim(a.dim(), b.dim());
  Point r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r[i] = a[i] + b[i];
  }
  return r;
}

Point operator-(Point const& a, Point const& b) {
  require_same_dim(a.dim(), b.dim());
  Point r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r[i] = a[i] - b[i];
  }
  return r;
}

Point operator*(Rational const& s, Point const& a) {
  Point r(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    r[i] = s * a[i];
  }
  return r;
}

Rational sup_norm(Point const& a) {
  Rational m = 0;
  for (auto const& c : a.coords()) {
    Rational const v = abs(c);
    if (v > m) {
      m = v;
    }
  }
  return m;
}

Rational dist(Point const& a, Point const& b) { return sup_norm(a - b); }

std::string format(Point const& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i != 0) {
      s += ", ";
    }
    s += format(p[i]);
  }
  return s + "]";
}

Matrix::Matrix(std::size_t dim, std::vector<Rational> entries) : dim_(dim), a_(std::move(entries)) {
  if (dim_ < 1 || dim_ > 2 || a_.size() != dim_ * dim_) {
    throw DomainError("matrix must be 1x1 or 2x2");
  }
  if (determinant() == 0) {
    throw DomainError("matrix " + format(*this) + " is singular");
  }
}

Matrix Matrix::identity(std::size_t dim) {
  std::vector<Rational> e(dim * dim, Rational(0));
  for (std::size_t i = 0; i < dim; ++i) {
    e[i * dim + i] = 1;
  }
  return Matrix(dim, std::move(e));
}

Matrix Matrix::diagonal(std::vector<Rational> const& diag) {
  std::size_t const n = diag.size();
  std::vector<Rational> e(n * n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    e[i * n + i] = diag[i];
  }
  return Matrix(n, std::move(e));
}

Rational Matrix::determinant() const {
  if (dim_ == 1) {
    return a_[0];
  }
  return a_[0] * a_[3] - a_[1] * a_[2];
}

Matrix Matrix::inverse() const {
  Rational const det = determinant();
  if (dim_ == 1) {
    return Matrix(1, {Rational(1) / det});
  }
  return Matrix(2, {a_[3] / det, -a_[1] / det, -a_[2] / det, a_[0] / det});
}

bool Matrix::is_diagonal() const { return dim_ == 1 || (a_[1] == 0 && a_[2] == 0); }
bool Matrix::is_lower_triangular() const { return dim_ == 1 || a_[1] == 0; }
bool Matrix::is_upper_triangular() const { return dim_ == 1 || a_[2] == 0; }

Rational Matrix::operator_norm() const {
  Rational best = 0;
  for (std::size_t r = 0; r < dim_; ++r) {
    Rational row = 0;
    for (std::size_t c = 0; c < dim_; ++c) {
      row += abs((*this)(r, c));
    }
    best = std::max(best, row);
  }
  return best;
}

Matrix operator*(Matrix const& x, Matrix const& y) {
  require_same_dim(x.dim(), y.dim());
  std::size_t const n = x.dim();
  std::vector<Rational> e(n * n, Rational(0));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < n; ++k) {
        e[r * n + c] += x(r, k) * y(k, c);
      }
    }
  }
  return Matrix(n, std::move(e));
}

std::vector<Rational> residual(Matrix const& x, Matrix const& y) {
  require_same_dim(x.dim(), y.dim());
  std::vector<Rational> r(x.entries().size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    r[i] = x.entries()[i] - y.entries()[i];
  }
  return r;
}

Point operator*(Matrix const& m, Point const& p) {
  require_same_dim(m.dim(), p.dim());
  Point r(p.dim());
  for (std::size_t i = 0; i < p.dim(); ++i) {
    for (std::size_t k = 0; k < p.dim(); ++k) {
      r[i] += m(i, k) * p[k];
    }
  }
  return r;
}

Matrix power(Matrix const& m, std::int64_t k) {
  Matrix base = k < 0 ? m.inverse() : m;
  std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
  Matrix result = Matrix::identity(m.dim());
  while (e != 0) {
    if (e & 1U) {
      result = result * base;
    }
    e >>= 1U;
    if (e != 0) {
      base = base * base;
    }
  }
  return result;
}

std::string format(Matrix const& m) {
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < m.dim(); ++r) {
    out << (r ? ", [" : "[");
    for (std::size_t c = 0; c < m.dim(); ++c) {
      out << (c ? ", " : "") << format(m(r, c));
    }
    out << "]";
  }
  out << "]";
  return out.str();
}

}  // namespace shadowlab
