#pragma once

#include <algorithm>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "primforms/exactnum.hpp"

namespace pf {

// Truncated power series a_0 + a_1 q + ... + a_{prec-1} q^{prec-1}.
// Coefficients beyond prec are unknown, never zero-filled.
template <typename T>
class QSeries {
 public:
  QSeries() = default;
  explicit QSeries(size_t prec) : c_(prec, T(0)) {}
  explicit QSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {}
  static QSeries constant(const T& v, size_t prec) {
    QSeries s(prec);
    if (prec) s.c_[0] = v;
    return s;
  }
  static QSeries monomial(size_t n, const T& v, size_t prec) {
    QSeries s(prec);
    if (n < prec) s.c_[n] = v;
    return s;
  }

  size_t prec() const { return c_.size(); }
  const T& operator[](size_t n) const { return c_.at(n); }
  T& operator[](size_t n) { return c_.at(n); }
  const std::vector<T>& coeffs() const { return c_; }

  QSeries truncate(size_t n) const {
    if (n > c_.size()) throw PrecisionError("truncate beyond known precision");
    return QSeries(std::vector<T>(c_.begin(), c_.begin() + n));
  }
  // Index of the first nonzero coefficient, or prec() if none is known.
  size_t valuation() const {
    for (size_t i = 0; i < c_.size(); ++i)
      if (!(c_[i] == T(0))) return i;
    return c_.size();
  }
  bool is_zero() const { return valuation() == c_.size(); }

  QSeries& operator+=(const QSeries& o) {
    shrink_to(o.prec());
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  QSeries& operator-=(const QSeries& o) {
    shrink_to(o.prec());
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  QSeries& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  QSeries operator-() const {
    QSeries r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
  }
  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator*(QSeries a, const T& s) { return a *= s; }
  friend QSeries operator*(const T& s, QSeries a) { return a *= s; }

  // Equality of the common known prefix.
  bool agrees_with(const QSeries& o, size_t upto) const {
    if (upto > prec() || upto > o.prec()) throw PrecisionError("comparison beyond known precision");
    for (size_t i = 0; i < upto; ++i)
      if (!(c_[i] == o.c_[i])) return false;
    return true;
  }
  // First index < upto where the series differ, or upto if none.
  size_t first_difference(const QSeries& o, size_t upto) const {
    if (upto > prec() || upto > o.prec()) throw PrecisionError("comparison beyond known precision");
    for (size_t i = 0; i < upto; ++i)
      if (!(c_[i] == o.c_[i])) return i;
    return upto;
  }
  friend bool operator==(const QSeries& a, const QSeries& b) { return a.c_ == b.c_; }

  std::string str(size_t terms) const;

 private:
  void shrink_to(size_t p) {
    if (p < c_.size()) c_.resize(p);
  }
  std::vector<T> c_;
};

using RSeries = QSeries<Rational>;
using KSeries = QSeries<QuadExt>;

namespace detail {

// Integer convolution of two coefficient vectors truncated to n terms.
inline std::vector<Integer> int_convolve(const std::vector<Integer>& a, const std::vector<Integer>& b,
                                         size_t n) {
  std::vector<Integer> r(n, 0);
  size_t la = std::min(a.size(), n), lb = std::min(b.size(), n);
  for (size_t i = 0; i < la; ++i) {
    if (a[i] == 0) continue;
    mpz_srcptr ai = a[i].get_mpz_t();
    for (size_t j = 0; j < lb && i + j < n; ++j) {
      if (b[j] == 0) continue;
      mpz_addmul(r[i + j].get_mpz_t(), ai, b[j].get_mpz_t());
    }
  }
  return r;
}

// Clears denominators: v = ints / den.
inline std::vector<Integer> clear_denominators(const std::vector<Rational>& v, Integer& den) {
  den = 1;
  for (auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_num() * (den / v[i].get_den());
  return out;
}

inline std::vector<Rational> rational_convolve(const std::vector<Rational>& a,
                                               const std::vector<Rational>& b, size_t n) {
  Integer da, db;
  auto ia = clear_denominators(a, da);
  auto ib = clear_denominators(b, db);
  auto r = int_convolve(ia, ib, n);
  Integer d = da * db;
  std::vector<Rational> out(n);
  for (size_t i = 0; i < n; ++i) {
    if (r[i] == 0) continue;
    out[i] = Rational(r[i], d);
    out[i].canonicalize();
  }
  return out;
}

}  // namespace detail

inline RSeries operator*(const RSeries& f, const RSeries& g) {
  size_t n = std::min(f.prec(), g.prec());
  return RSeries(detail::rational_convolve(f.coeffs(), g.coeffs(), n));
}

// Quadratic-coefficient product; all irrational parts must share one radicand.
inline KSeries operator*(const KSeries& f, const KSeries& g) {
  size_t n = std::min(f.prec(), g.prec());
  Integer d = 1;
  auto scan = [&d](const KSeries& s) {
    for (auto& x : s.coeffs()) {
      if (x.radicand() == 1) continue;
      if (d == 1)
        d = x.radicand();
      else if (d != x.radicand())
        throw FieldMismatchError("series coefficients from different quadratic fields");
    }
  };
  scan(f);
  scan(g);
  auto split = [n](const KSeries& s, std::vector<Rational>& r, std::vector<Rational>& i) {
    r.resize(n);
    i.resize(n);
    for (size_t k = 0; k < n; ++k) {
      r[k] = s[k].rat();
      i[k] = s[k].irr();
    }
  };
  std::vector<Rational> fr, fi, gr, gi;
  split(f, fr, fi);
  split(g, gr, gi);
  auto rr = detail::rational_convolve(fr, gr, n);
  auto ii = detail::rational_convolve(fi, gi, n);
  auto ri = detail::rational_convolve(fr, gi, n);
  auto ir = detail::rational_convolve(fi, gr, n);
  std::vector<QuadExt> out(n);
  for (size_t k = 0; k < n; ++k) out[k] = QuadExt(rr[k] + ii[k] * d, ri[k] + ir[k], d);
  return KSeries(std::move(out));
}

template <typename T>
QSeries<T> series_pow(const QSeries<T>& f, unsigned long e) {
  QSeries<T> result = QSeries<T>::constant(T(1), f.prec());
  QSeries<T> base = f;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

// f(q^h) at the input precision; higher input coefficients are dropped.
template <typename T>
QSeries<T> series_substitute(const QSeries<T>& f, long h) {
  if (h <= 0) throw DomainError("substitution exponent must be positive");
  QSeries<T> r(f.prec());
  for (size_t i = 0; i * h < f.prec(); ++i) r[i * h] = f[i];
  return r;
}

// f(q^h) with every coefficient that the input determines (precision prec*h).
template <typename T>
QSeries<T> series_substitute_expand(const QSeries<T>& f, long h) {
  if (h <= 0) throw DomainError("substitution exponent must be positive");
  QSeries<T> r(f.prec() * static_cast<size_t>(h));
  for (size_t i = 0; i < f.prec(); ++i) r[i * h] = f[i];
  return r;
}

// Inverse of substitution: g with g(q^h) = f; every coefficient off the lattice must vanish.
template <typename T>
QSeries<T> series_unsubstitute(const QSeries<T>& f, long h) {
  if (h <= 0) throw DomainError("substitution exponent must be positive");
  for (size_t i = 0; i < f.prec(); ++i)
    if (i % h && !(f[i] == T(0)))
      throw InexactDivisionError("series is not a function of q^" + std::to_string(h), i);
  size_t n = (f.prec() + h - 1) / h;
  QSeries<T> r(n);
  for (size_t i = 0; i < n; ++i) r[i] = f[i * h];
  return r;
}

// q^{-s} f, requiring the first s coefficients to vanish.
template <typename T>
QSeries<T> series_shift_down(const QSeries<T>& f, size_t s) {
  for (size_t i = 0; i < std::min(s, f.prec()); ++i)
    if (!(f[i] == T(0))) throw InexactDivisionError("shift would drop a nonzero coefficient", i);
  if (s > f.prec()) return QSeries<T>(0);
  return QSeries<T>(std::vector<T>(f.coeffs().begin() + s, f.coeffs().end()));
}

// f / g where g has valuation v; f must vanish below v. Result precision is
// min(prec f, prec g) - v.
template <typename T>
QSeries<T> series_divide_exact(const QSeries<T>& f, const QSeries<T>& g) {
  size_t v = g.valuation();
  if (v == g.prec()) throw DomainError("division by a series with no known nonzero coefficient");
  size_t n0 = std::min(f.prec(), g.prec());
  for (size_t i = 0; i < std::min(v, n0); ++i)
    if (!(f[i] == T(0))) throw InexactDivisionError("inexact series division", i);
  if (n0 <= v) return QSeries<T>(0);
  size_t n = n0 - v;
  QSeries<T> r(n);
  const T& lead = g[v];
  for (size_t i = 0; i < n; ++i) {
    T acc = f[i + v];
    for (size_t j = 1; j <= i; ++j)
      if (!(g[v + j] == T(0)) && !(r[i - j] == T(0))) acc -= g[v + j] * r[i - j];
    r[i] = acc / lead;
  }
  return r;
}

inline KSeries to_quad(const RSeries& f) {
  std::vector<QuadExt> v(f.prec());
  for (size_t i = 0; i < f.prec(); ++i) v[i] = QuadExt(f[i]);
  return KSeries(std::move(v));
}

template <typename T>
std::string QSeries<T>::str(size_t terms) const {
  std::string out;
  size_t n = std::min(terms, prec());
  for (size_t i = 0; i < n; ++i) {
    if (c_[i] == T(0)) continue;
    std::string c;
    if constexpr (std::is_same_v<T, Rational>)
      c = c_[i].get_str();
    else
      c = c_[i].str();
    bool compound = c.find(' ') != std::string::npos;
    bool neg = !compound && c[0] == '-';
    if (neg && !out.empty()) c.erase(0, 1);
    if (!out.empty()) out += neg ? " - " : " + ";
    if (i == 0) {
      out += compound ? "(" + c + ")" : c;
      continue;
    }
    if (c == "-1")
      out += "-";
    else if (c != "1")
      out += (compound ? "(" + c + ")" : c) + "*";
    out += "q";
    if (i > 1) out += "^" + std::to_string(i);
  }
  if (out.empty()) out = "0";
  out += " + O(q^" + std::to_string(prec()) + ")";
  return out;
}

}  // namespace pf
