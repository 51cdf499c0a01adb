#pragma once

#include <optional>
#include <vector>

#include "primforms/exactnum.hpp"

namespace pf {

struct RowEchelon;

// Dense rational matrix. Operators act on column vectors: T x = M x.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols) : r_(rows), c_(cols), a_(rows * cols, Rational(0)) {}
  static Matrix identity(size_t n);
  static Matrix from_rows(const std::vector<std::vector<Rational>>& rows, size_t cols = 0);

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  Rational& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const Rational& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }
  std::vector<Rational> row(size_t i) const;
  std::vector<Rational> col(size_t j) const;
  void set_row(size_t i, const std::vector<Rational>& v);

  Matrix transpose() const;
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Rational& s, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }
  std::vector<Rational> apply(const std::vector<Rational>& x) const;  // M x
  bool is_zero() const;
  bool is_integral() const;
  Rational trace() const;

  using Echelon = RowEchelon;
  // Reduced row echelon form by fraction-free elimination with content removal.
  Echelon rref() const;
  size_t rank() const;
  // Rows form a basis of {x : M x = 0}.
  Matrix kernel() const;
  // Solves M x = b; nullopt when inconsistent.
  std::optional<std::vector<Rational>> solve(const std::vector<Rational>& b) const;
  // Characteristic polynomial det(X I - M) via Hessenberg reduction.
  RatPoly charpoly() const;

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<Rational> a_;
};

struct RowEchelon {
  Matrix rref;                 // nonzero rows only, pivots normalized to 1
  std::vector<size_t> pivots;  // pivot column of each row
};

// Evaluates a polynomial at a square matrix (Horner).
Matrix poly_eval(const RatPoly& p, const Matrix& m);

// A subspace of Q^n given by an RREF row basis.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(size_t ambient) : n_(ambient) {}
  // Row span of the given vectors.
  static Subspace span(const Matrix& rows, size_t ambient);
  static Subspace whole(size_t n);

  size_t ambient() const { return n_; }
  size_t dim() const { return basis_.rows(); }
  const Matrix& basis() const { return basis_; }
  const std::vector<size_t>& pivots() const { return pivots_; }
  std::vector<Rational> vector(size_t i) const { return basis_.row(i); }

  // Coordinates of v in this basis; nullopt if v is not in the subspace.
  std::optional<std::vector<Rational>> coordinates(const std::vector<Rational>& v) const;
  bool contains(const std::vector<Rational>& v) const { return coordinates(v).has_value(); }
  // Linear combination sum c_i basis_i.
  std::vector<Rational> combine(const std::vector<Rational>& c) const;

  // Matrix of the operator m (acting on Q^n) restricted to this invariant subspace,
  // column convention. Throws ConsistencyError if the subspace is not invariant.
  Matrix restrict(const Matrix& m) const;

  Subspace intersect(const Subspace& o) const;
  Subspace sum(const Subspace& o) const;

 private:
  size_t n_ = 0;
  Matrix basis_;
  std::vector<size_t> pivots_;
};

// Kernel of the operator m restricted to w, as a subspace of the ambient space.
Subspace kernel_on(const Matrix& m, const Subspace& w);
// Image m(w) as a subspace of the ambient space.
Subspace image_of(const Matrix& m, const Subspace& w);

}  // namespace pf
