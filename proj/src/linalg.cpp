#include "primforms/linalg.hpp"

#include <utility>

namespace pf {

Matrix Matrix::identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<Rational>>& rows, size_t cols) {
  if (!rows.empty()) cols = rows[0].size();
  Matrix m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw DomainError("ragged matrix rows");
    for (size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

std::vector<Rational> Matrix::row(size_t i) const {
  return std::vector<Rational>(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
}

std::vector<Rational> Matrix::col(size_t j) const {
  std::vector<Rational> v(r_);
  for (size_t i = 0; i < r_; ++i) v[i] = (*this)(i, j);
  return v;
}

void Matrix::set_row(size_t i, const std::vector<Rational>& v) {
  for (size_t j = 0; j < c_; ++j) (*this)(i, j) = v[j];
}

Matrix Matrix::transpose() const {
  Matrix t(c_, r_);
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.c_ != b.r_) throw DomainError("matrix dimension mismatch in product");
  Matrix m(a.r_, b.c_);
  Rational t;
  for (size_t i = 0; i < a.r_; ++i)
    for (size_t k = 0; k < a.c_; ++k) {
      const Rational& x = a(i, k);
      if (x == 0) continue;
      for (size_t j = 0; j < b.c_; ++j) {
        if (b(k, j) == 0) continue;
        t = x * b(k, j);
        m(i, j) += t;
      }
    }
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw DomainError("matrix dimension mismatch in sum");
  Matrix m = a;
  for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] += b.a_[i];
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.r_ != b.r_ || a.c_ != b.c_) throw DomainError("matrix dimension mismatch in difference");
  Matrix m = a;
  for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] -= b.a_[i];
  return m;
}

Matrix operator*(const Rational& s, const Matrix& a) {
  Matrix m = a;
  for (auto& x : m.a_) x *= s;
  return m;
}

std::vector<Rational> Matrix::apply(const std::vector<Rational>& x) const {
  if (x.size() != c_) throw DomainError("matrix-vector dimension mismatch");
  std::vector<Rational> y(r_, Rational(0));
  for (size_t i = 0; i < r_; ++i)
    for (size_t j = 0; j < c_; ++j)
      if ((*this)(i, j) != 0 && x[j] != 0) y[i] += (*this)(i, j) * x[j];
  return y;
}

bool Matrix::is_zero() const {
  for (auto& x : a_)
    if (x != 0) return false;
  return true;
}

bool Matrix::is_integral() const {
  for (auto& x : a_)
    if (x.get_den() != 1) return false;
  return true;
}

Rational Matrix::trace() const {
  Rational t = 0;
  for (size_t i = 0; i < std::min(r_, c_); ++i) t += (*this)(i, i);
  return t;
}

namespace {

// Scales a rational row to a primitive integer row (same span).
std::vector<Integer> primitive_row(const Rational* src, size_t n) {
  Integer l = 1;
  for (size_t j = 0; j < n; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), src[j].get_den_mpz_t());
  std::vector<Integer> out(n);
  for (size_t j = 0; j < n; ++j) out[j] = src[j].get_num() * (l / src[j].get_den());
  return out;
}

void remove_content(std::vector<Integer>& row) {
  Integer g = 0;
  for (auto& x : row) {
    if (x == 0) continue;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) return;
  }
  if (g <= 1) return;
  for (auto& x : row)
    if (x != 0) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

}  // namespace

Matrix::Echelon Matrix::rref() const {
  std::vector<std::vector<Integer>> m;
  m.reserve(r_);
  for (size_t i = 0; i < r_; ++i) m.push_back(primitive_row(&a_[i * c_], c_));
  std::vector<size_t> pivots;
  size_t prow = 0;
  Integer t;
  for (size_t col = 0; col < c_ && prow < m.size(); ++col) {
    // choose the pivot with the smallest absolute value
    size_t best = m.size();
    for (size_t i = prow; i < m.size(); ++i) {
      if (m[i][col] == 0) continue;
      if (best == m.size() || mpz_cmpabs(m[i][col].get_mpz_t(), m[best][col].get_mpz_t()) < 0) best = i;
    }
    if (best == m.size()) continue;
    std::swap(m[prow], m[best]);
    const std::vector<Integer>& p = m[prow];
    for (size_t i = 0; i < m.size(); ++i) {
      if (i == prow || m[i][col] == 0) continue;
      std::vector<Integer>& row = m[i];
      Integer g;
      mpz_gcd(g.get_mpz_t(), p[col].get_mpz_t(), row[col].get_mpz_t());
      Integer a = p[col] / g, b = row[col] / g;
      // row = a*row - b*p
      for (size_t j = 0; j < c_; ++j) {
        if (a != 1) row[j] *= a;
        if (p[j] != 0) {
          mpz_mul(t.get_mpz_t(), b.get_mpz_t(), p[j].get_mpz_t());
          row[j] -= t;
        }
      }
      remove_content(row);
    }
    pivots.push_back(col);
    ++prow;
  }
  Echelon e;
  e.pivots = pivots;
  e.rref = Matrix(pivots.size(), c_);
  for (size_t i = 0; i < pivots.size(); ++i) {
    const Integer& piv = m[i][pivots[i]];
    for (size_t j = 0; j < c_; ++j)
      if (m[i][j] != 0) e.rref(i, j) = make_rational(m[i][j], piv);
  }
  return e;
}

size_t Matrix::rank() const { return rref().pivots.size(); }

Matrix Matrix::kernel() const {
  Echelon e = rref();
  std::vector<bool> is_piv(c_, false);
  for (size_t p : e.pivots) is_piv[p] = true;
  std::vector<size_t> free;
  for (size_t j = 0; j < c_; ++j)
    if (!is_piv[j]) free.push_back(j);
  Matrix k(free.size(), c_);
  for (size_t f = 0; f < free.size(); ++f) {
    k(f, free[f]) = 1;
    for (size_t i = 0; i < e.pivots.size(); ++i) k(f, e.pivots[i]) = -e.rref(i, free[f]);
  }
  return k;
}

std::optional<std::vector<Rational>> Matrix::solve(const std::vector<Rational>& b) const {
  if (b.size() != r_) throw DomainError("solve: right-hand side has wrong length");
  Matrix aug(r_, c_ + 1);
  for (size_t i = 0; i < r_; ++i) {
    for (size_t j = 0; j < c_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, c_) = b[i];
  }
  Echelon e = aug.rref();
  std::vector<Rational> x(c_, Rational(0));
  for (size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == c_) return std::nullopt;
    x[e.pivots[i]] = e.rref(i, c_);
  }
  return x;
}

RatPoly Matrix::charpoly() const {
  if (r_ != c_) throw DomainError("charpoly of a non-square matrix");
  const size_t n = r_;
  Matrix h = *this;
  // reduce to upper Hessenberg form by similarity transforms
  for (size_t m = 1; m + 1 < n + 1 && m < n; ++m) {
    size_t piv = n;
    for (size_t i = m; i < n; ++i)
      if (h(i, m - 1) != 0) {
        piv = i;
        break;
      }
    if (piv == n) continue;
    if (piv != m) {
      for (size_t j = 0; j < n; ++j) std::swap(h(piv, j), h(m, j));
      for (size_t i = 0; i < n; ++i) std::swap(h(i, piv), h(i, m));
    }
    for (size_t i = m + 1; i < n; ++i) {
      if (h(i, m - 1) == 0) continue;
      Rational u = h(i, m - 1) / h(m, m - 1);
      for (size_t j = 0; j < n; ++j) h(i, j) -= u * h(m, j);
      for (size_t j = 0; j < n; ++j) h(j, m) += u * h(j, i);
    }
  }
  // p_k(X) = charpoly of leading k x k block
  std::vector<RatPoly> p(n + 1);
  p[0] = RatPoly({Rational(1)});
  for (size_t k = 1; k <= n; ++k) {
    RatPoly xm = RatPoly({-h(k - 1, k - 1), Rational(1)});
    RatPoly acc = xm * p[k - 1];
    Rational prod = 1;
    for (size_t i = 1; i < k; ++i) {
      prod *= h(k - i, k - i - 1);
      if (prod == 0) break;
      Rational coef = prod * h(k - i - 1, k - 1);
      if (coef != 0) acc = acc - coef * p[k - i - 1];
    }
    p[k] = acc;
  }
  return p[n];
}

Matrix poly_eval(const RatPoly& p, const Matrix& m) {
  const size_t n = m.rows();
  Matrix acc(n, n);
  for (int i = p.degree(); i >= 0; --i) {
    acc = acc * m;
    if (p.coeff(i) != 0)
      for (size_t j = 0; j < n; ++j) acc(j, j) += p.coeff(i);
  }
  return acc;
}

// ---------------------------------------------------------------- Subspace

Subspace Subspace::span(const Matrix& rows, size_t ambient) {
  Subspace s(ambient);
  if (rows.rows() == 0) {
    s.basis_ = Matrix(0, ambient);
    return s;
  }
  if (rows.cols() != ambient) throw DomainError("span: vector length mismatch");
  Matrix::Echelon e = rows.rref();
  s.basis_ = e.rref;
  s.pivots_ = e.pivots;
  return s;
}

Subspace Subspace::whole(size_t n) { return span(Matrix::identity(n), n); }

std::optional<std::vector<Rational>> Subspace::coordinates(const std::vector<Rational>& v) const {
  if (v.size() != n_) throw DomainError("coordinates: vector length mismatch");
  std::vector<Rational> c(dim());
  for (size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
  std::vector<Rational> back = combine(c);
  if (back != v) return std::nullopt;
  return c;
}

std::vector<Rational> Subspace::combine(const std::vector<Rational>& c) const {
  std::vector<Rational> v(n_, Rational(0));
  for (size_t i = 0; i < dim(); ++i) {
    if (c[i] == 0) continue;
    for (size_t j = 0; j < n_; ++j)
      if (basis_(i, j) != 0) v[j] += c[i] * basis_(i, j);
  }
  return v;
}

Matrix Subspace::restrict(const Matrix& m) const {
  Matrix r(dim(), dim());
  for (size_t j = 0; j < dim(); ++j) {
    auto img = m.apply(basis_.row(j));
    auto c = coordinates(img);
    if (!c) throw ConsistencyError("subspace is not invariant under the operator");
    for (size_t i = 0; i < dim(); ++i) r(i, j) = (*c)[i];
  }
  return r;
}

Subspace Subspace::sum(const Subspace& o) const {
  Matrix all(dim() + o.dim(), n_);
  for (size_t i = 0; i < dim(); ++i) all.set_row(i, basis_.row(i));
  for (size_t i = 0; i < o.dim(); ++i) all.set_row(dim() + i, o.basis_.row(i));
  return span(all, n_);
}

Subspace Subspace::intersect(const Subspace& o) const {
  // x = sum a_i u_i = sum b_j w_j  <=>  [U^T | -W^T] (a,b) = 0
  const size_t d1 = dim(), d2 = o.dim();
  Matrix sys(n_, d1 + d2);
  for (size_t j = 0; j < n_; ++j) {
    for (size_t i = 0; i < d1; ++i) sys(j, i) = basis_(i, j);
    for (size_t i = 0; i < d2; ++i) sys(j, d1 + i) = -o.basis_(i, j);
  }
  Matrix k = sys.kernel();
  Matrix vecs(k.rows(), n_);
  for (size_t r = 0; r < k.rows(); ++r) {
    std::vector<Rational> a(d1);
    for (size_t i = 0; i < d1; ++i) a[i] = k(r, i);
    vecs.set_row(r, combine(a));
  }
  return span(vecs, n_);
}

Subspace kernel_on(const Matrix& m, const Subspace& w) {
  // vectors sum c_i w_i with m(sum c_i w_i) = 0
  const size_t n = w.ambient(), d = w.dim();
  Matrix img(n, d);
  for (size_t i = 0; i < d; ++i) {
    auto v = m.apply(w.vector(i));
    for (size_t j = 0; j < n; ++j) img(j, i) = v[j];
  }
  Matrix k = img.kernel();
  Matrix vecs(k.rows(), n);
  for (size_t r = 0; r < k.rows(); ++r) vecs.set_row(r, w.combine(k.row(r)));
  return Subspace::span(vecs, n);
}

Subspace image_of(const Matrix& m, const Subspace& w) {
  const size_t n = w.ambient(), d = w.dim();
  Matrix vecs(d, n);
  for (size_t i = 0; i < d; ++i) vecs.set_row(i, m.apply(w.vector(i)));
  return Subspace::span(vecs, n);
}

}  // namespace pf
