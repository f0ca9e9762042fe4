#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "shadowlab/rational.hpp"

namespace shadowlab {

// A point of Q^d, d in {1, 2}. Distances are sup-norm throughout the library.
class Point {
 public:
  Point() = default;
  explicit Point(std::size_t dim) : coords_(dim) {}
  Point(std::initializer_list<Rational> coords) : coords_(coords) {}
  explicit Point(std::vector<Rational> coords) : coords_(std::move(coords)) {}

  std::size_t dim() const noexcept { return coords_.size(); }
  Rational const& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }

  // Coordinate projections.
  Rational const& p1() const { return coords_.at(0); }
  Rational const& p2() const { return coords_.at(1); }

  std::vector<Rational> const& coords() const noexcept { return coords_; }

  friend bool operator==(Point const& a, Point const& b) { return a.coords_ == b.coords_; }
  friend bool operator<(Point const& a, Point const& b) { return a.coords_ < b.coords_; }

 private:
  std::vector<Rational> coords_;
};

Point operator+(Point const& a, Point const& b);
Point operator-(Point const& a, Point const& b);
Point operator*(Rational const& s, Point const& a);

Rational sup_norm(Point const& a);
Rational dist(Point const& a, Point const& b);

std::string format(Point const& p);  // "[p/q, p/q]"

// Square exact rational matrix (1x1 or 2x2) with non-zero determinant.
class Matrix {
 public:
  Matrix() = default;
  // Row-major entries; size must be dim*dim.
  Matrix(std::size_t dim, std::vector<Rational> entries);

  static Matrix identity(std::size_t dim);
  static Matrix diagonal(std::vector<Rational> const& diag);

  std::size_t dim() const noexcept { return dim_; }
  Rational const& operator()(std::size_t r, std::size_t c) const { return a_[r * dim_ + c]; }

  Rational determinant() const;
  Matrix inverse() const;
  bool is_diagonal() const;
  bool is_lower_triangular() const;
  bool is_upper_triangular() const;

  // Sup-norm induced operator norm (max absolute row sum).
  Rational operator_norm() const;

  std::vector<Rational> const& entries() const noexcept { return a_; }

  friend bool operator==(Matrix const& x, Matrix const& y) {
    return x.dim_ == y.dim_ && x.a_ == y.a_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<Rational> a_;
};

Matrix operator*(Matrix const& x, Matrix const& y);
// Entry-wise x - y, row-major; may be singular so it is not a Matrix.
std::vector<Rational> residual(Matrix const& x, Matrix const& y);
Point operator*(Matrix const& m, Point const& p);

// m^k by repeated squaring; negative k uses the inverse.
Matrix power(Matrix const& m, std::int64_t k);

std::string format(Matrix const& m);  // "[[a, b], [c, d]]"

}  // namespace shadowlab
