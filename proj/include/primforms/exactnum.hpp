#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "primforms/errors.hpp"

namespace pf {

using Integer = mpz_class;
using Rational = mpq_class;  // gmpxx keeps arithmetic results canonical

// num/den reduced; throws DomainError on zero denominator.
Rational make_rational(const Integer& num, const Integer& den);
std::string to_string(const Integer& z);
std::string to_string(const Rational& q);
Integer ipow(const Integer& base, unsigned long e);
Rational rpow(const Rational& base, unsigned long e);

// n = s * f^2 with s squarefree. Deterministic; fully factors n when needed.
struct SquarefreeParts {
  Integer s;
  Integer f;
};
SquarefreeParts squarefree_decompose(const Integer& n);

// Prime factorization (ascending, with multiplicity exponents).
std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n);

// Primes below limit (sieve).
std::vector<unsigned long> primes_below(unsigned long limit);
bool is_prime_small(long n);

// Element rat + irr * sqrt(radicand) of a real quadratic field.
class QuadExt {
 public:
  QuadExt() : rat_(0), irr_(0), rad_(1) {}
  QuadExt(long v) : rat_(v), irr_(0), rad_(1) {}  // NOLINT(google-explicit-constructor)
  QuadExt(const Rational& v) : rat_(v), irr_(0), rad_(1) {}  // NOLINT
  // radicand is canonicalized to its squarefree part; negative radicands rejected.
  QuadExt(const Rational& rat, const Rational& irr, const Integer& radicand);

  // Caller guarantees radicand is squarefree and positive; skips factoring.
  static QuadExt from_squarefree(const Rational& rat, const Rational& irr, const Integer& radicand);
  // sqrt(x) for rational x >= 0, canonical form.
  static QuadExt sqrt_of(const Rational& x);

  const Rational& rat() const { return rat_; }
  const Rational& irr() const { return irr_; }
  const Integer& radicand() const { return rad_; }
  bool is_rational() const { return irr_ == 0; }
  bool is_zero() const { return rat_ == 0 && irr_ == 0; }

  QuadExt conj() const;
  Rational norm() const;
  Rational trace() const { return 2 * rat_; }

  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);
  QuadExt operator-() const;

  friend QuadExt operator+(QuadExt a, const QuadExt& b) { return a += b; }
  friend QuadExt operator-(QuadExt a, const QuadExt& b) { return a -= b; }
  friend QuadExt operator*(QuadExt a, const QuadExt& b) { return a *= b; }
  friend QuadExt operator/(QuadExt a, const QuadExt& b) { return a /= b; }
  friend bool operator==(const QuadExt& a, const QuadExt& b);
  friend bool operator!=(const QuadExt& a, const QuadExt& b) { return !(a == b); }

  // "a", "b*sqrt(D)", "a + b*sqrt(D)"
  std::string str() const;

 private:
  struct Raw {};
  QuadExt(Raw, Rational rat, Rational irr, Integer rad)
      : rat_(std::move(rat)), irr_(std::move(irr)), rad_(std::move(rad)) {}
  const Integer& common_radicand(const QuadExt& o) const;
  void normalize();

  Rational rat_;
  Rational irr_;
  Integer rad_;
};

std::ostream& operator<<(std::ostream& os, const QuadExt& x);

enum class QuadOp { add, sub, mul, div };
QuadExt quad_arith(const QuadExt& a, const QuadExt& b, QuadOp op);

// Dense integer polynomial, coefficient i multiplies X^i.
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(std::vector<Integer> coeffs);
  static IntPoly monomial(unsigned deg, const Integer& c = 1);
  static IntPoly linear_root(const Integer& r);  // X - r

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  const std::vector<Integer>& coeffs() const { return c_; }
  Integer coeff(int i) const;
  const Integer& lead() const { return c_.back(); }

  Integer eval(const Integer& x) const;
  IntPoly derivative() const;

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b);
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

  // Division by a monic divisor; returns {quotient, remainder}.
  std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& d) const;

  std::string str(const std::string& var = "X") const;

 private:
  void trim();
  std::vector<Integer> c_;
};

// Rational polynomial used for gcds and characteristic polynomials.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rational> coeffs);
  static RatPoly from_int(const IntPoly& p);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  const Rational& lead() const { return c_.back(); }

  RatPoly monic() const;
  RatPoly derivative() const;
  Rational eval(const Rational& x) const;
  bool is_integral_monic() const;
  IntPoly to_int() const;  // requires integral coefficients

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(const Rational& s, const RatPoly& a);
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }
  std::pair<RatPoly, RatPoly> divmod(const RatPoly& d) const;

  std::string str(const std::string& var = "X") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

RatPoly poly_gcd(const RatPoly& a, const RatPoly& b);  // monic gcd
bool is_squarefree(const RatPoly& p);

// Squarefree factorization (Yun) of a monic integer polynomial: pairs (piece, multiplicity).
std::vector<std::pair<IntPoly, int>> squarefree_factorization(const IntPoly& p);

// Complete factorization over Q of a monic integer polynomial into monic irreducibles.
std::vector<std::pair<IntPoly, int>> factor_irreducible(const IntPoly& p);

struct IntFactorization {
  std::vector<std::pair<IntPoly, int>> factors;  // irreducible factors of degree <= max
  IntPoly residual;                              // product of everything else (1 if none)
  bool residual_flagged = false;                 // true when residual is nontrivial
  bool residual_irreducible = false;             // residual is a single irreducible factor
};

// Splits off irreducible factors of degree <= max_factor_degree.
IntFactorization factor_int_poly(const IntPoly& p, int max_factor_degree = 2);

// "(X^2 - 1)*(X + 3)^2" style; trivial factor list prints "1".
std::string factorization_str(const std::vector<std::pair<IntPoly, int>>& f,
                              const std::string& var = "X");

}  // namespace pf
