#include "primforms/exactnum.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>

namespace pf {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const Integer& z) { return z.get_str(); }
std::string to_string(const Rational& q) { return q.get_str(); }

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational rpow(const Rational& base, unsigned long e) {
  Rational r(ipow(base.get_num(), e), ipow(base.get_den(), e));
  return r;  // already canonical
}

// ---------------------------------------------------------------- integers

std::vector<unsigned long> primes_below(unsigned long limit) {
  std::vector<unsigned long> out;
  if (limit < 3) return out;
  std::vector<bool> comp(limit, false);
  for (unsigned long i = 2; i < limit; ++i) {
    if (comp[i]) continue;
    out.push_back(i);
    for (unsigned long j = i * i; j < limit; j += i) comp[j] = true;
  }
  return out;
}

bool is_prime_small(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

constexpr unsigned long kTrialLimit = 1ul << 21;

const std::vector<unsigned long>& trial_primes() {
  static const std::vector<unsigned long> primes = primes_below(kTrialLimit);
  return primes;
}

bool is_probable_prime(const Integer& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

// Brent's variant of Pollard rho; n composite, odd, not a perfect power of small
// primes. Returns a nontrivial factor.
Integer rho_factor(const Integer& n) {
  for (unsigned long c = 1;; ++c) {
    Integer y = 2, x, q = 1, g = 1, ys;
    unsigned long r = 1, m = 128;
    auto f = [&](const Integer& v) {
      Integer t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Integer d = abs(x - y);
          q = (q * d) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Integer d = abs(x - ys);
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_large(const Integer& n, std::map<Integer, unsigned>& out, unsigned mult) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    out[n] += mult;
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    factor_large(r, out, 2 * mult);
    return;
  }
  Integer d = rho_factor(n);
  Integer e = n / d;
  factor_large(d, out, mult);
  factor_large(e, out, mult);
}

}  // namespace

std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n_in) {
  if (n_in <= 0) throw DomainError("factor_integer requires n >= 1");
  Integer n = n_in;
  std::map<Integer, unsigned> out;
  for (unsigned long p : trial_primes()) {
    if (Integer(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      out[Integer(p)]++;
    }
  }
  factor_large(n, out, 1);
  return {out.begin(), out.end()};
}

SquarefreeParts squarefree_decompose(const Integer& n_in) {
  if (n_in <= 0) throw DomainError("squarefree_decompose requires n >= 1");
  Integer n = n_in, s = 1, f = 1;
  unsigned long last = 1;
  for (unsigned long p : trial_primes()) {
    if (Integer(p) * p * p > n) break;
    last = p;
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    if (e == 0) continue;
    if (e % 2) s *= p;
    f *= ipow(Integer(p), e / 2);
  }
  if (n == 1) return {s, f};
  // The cofactor has no prime factor <= last. When n < (last+1)^3 it is p, p^2 or pq.
  Integer bound = Integer(last + 1);
  bound = bound * bound * bound;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return {s, f * r};
  }
  if (n < bound) return {s * n, f};
  std::map<Integer, unsigned> fac;
  factor_large(n, fac, 1);
  for (auto& [p, e] : fac) {
    if (e % 2) s *= p;
    f *= ipow(p, e / 2);
  }
  return {s, f};
}

// ---------------------------------------------------------------- QuadExt

QuadExt::QuadExt(const Rational& rat, const Rational& irr, const Integer& radicand)
    : rat_(rat), irr_(irr), rad_(1) {
  if (radicand <= 0) throw DomainError("quadratic radicand must be positive");
  SquarefreeParts sp = squarefree_decompose(radicand);
  irr_ *= sp.f;
  rad_ = sp.s;
  normalize();
}

QuadExt QuadExt::from_squarefree(const Rational& rat, const Rational& irr, const Integer& radicand) {
  if (radicand <= 0) throw DomainError("quadratic radicand must be positive");
  QuadExt r(Raw{}, rat, irr, radicand);
  r.normalize();
  return r;
}

QuadExt QuadExt::sqrt_of(const Rational& x) {
  if (x < 0) throw DomainError("sqrt of negative rational");
  // sqrt(p/q) = sqrt(p*q)/q
  Integer pq = x.get_num() * x.get_den();
  if (pq == 0) return QuadExt();
  SquarefreeParts sp = squarefree_decompose(pq);
  Rational c(sp.f, x.get_den());
  c.canonicalize();
  QuadExt r(Raw{}, Rational(0), c, sp.s);
  r.normalize();
  return r;
}

void QuadExt::normalize() {
  // callers may hand in unreduced mpq values
  rat_.canonicalize();
  irr_.canonicalize();
  if (rad_ == 1) {
    rat_ += irr_;
    irr_ = 0;
  }
  if (irr_ == 0) rad_ = 1;
}

const Integer& QuadExt::common_radicand(const QuadExt& o) const {
  if (rad_ == 1) return o.rad_;
  if (o.rad_ == 1 || o.rad_ == rad_) return rad_;
  throw FieldMismatchError("radicand mismatch: " + rad_.get_str() + " vs " + o.rad_.get_str());
}

QuadExt QuadExt::conj() const { return QuadExt(Raw{}, rat_, -irr_, rad_); }

Rational QuadExt::norm() const { return rat_ * rat_ - irr_ * irr_ * rad_; }

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  rad_ = common_radicand(o);
  rat_ += o.rat_;
  irr_ += o.irr_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) {
  rad_ = common_radicand(o);
  rat_ -= o.rat_;
  irr_ -= o.irr_;
  normalize();
  return *this;
}

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  Integer d = common_radicand(o);
  Rational r = rat_ * o.rat_ + irr_ * o.irr_ * d;
  Rational i = rat_ * o.irr_ + irr_ * o.rat_;
  rat_ = std::move(r);
  irr_ = std::move(i);
  rad_ = std::move(d);
  normalize();
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) {
  if (o.is_zero()) throw DomainError("division by zero in quadratic field");
  Integer d = common_radicand(o);
  Rational n = o.norm();
  QuadExt c = o.conj();
  *this *= c;
  rat_ /= n;
  irr_ /= n;
  (void)d;
  normalize();
  return *this;
}

QuadExt QuadExt::operator-() const { return QuadExt(Raw{}, -rat_, -irr_, rad_); }

bool operator==(const QuadExt& a, const QuadExt& b) {
  return a.rat_ == b.rat_ && a.irr_ == b.irr_ && (a.irr_ == 0 || a.rad_ == b.rad_);
}

std::string QuadExt::str() const {
  std::ostringstream os;
  if (irr_ == 0) {
    os << rat_.get_str();
    return os.str();
  }
  if (rat_ != 0) {
    os << rat_.get_str() << (irr_ < 0 ? " - " : " + ");
    Rational a = abs(irr_);
    if (a != 1) os << a.get_str() << "*";
  } else {
    if (irr_ == -1)
      os << "-";
    else if (irr_ != 1)
      os << irr_.get_str() << "*";
  }
  os << "sqrt(" << rad_.get_str() << ")";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const QuadExt& x) { return os << x.str(); }

QuadExt quad_arith(const QuadExt& a, const QuadExt& b, QuadOp op) {
  switch (op) {
    case QuadOp::add: return a + b;
    case QuadOp::sub: return a - b;
    case QuadOp::mul: return a * b;
    case QuadOp::div: return a / b;
  }
  throw DomainError("unknown quadratic operation");
}

// ---------------------------------------------------------------- IntPoly

IntPoly::IntPoly(std::vector<Integer> coeffs) : c_(std::move(coeffs)) { trim(); }

IntPoly IntPoly::monomial(unsigned deg, const Integer& c) {
  std::vector<Integer> v(deg + 1, 0);
  v[deg] = c;
  return IntPoly(std::move(v));
}

IntPoly IntPoly::linear_root(const Integer& r) { return IntPoly({-r, 1}); }

void IntPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Integer IntPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

Integer IntPoly::eval(const Integer& x) const {
  Integer r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

IntPoly IntPoly::derivative() const {
  if (c_.size() <= 1) return IntPoly();
  std::vector<Integer> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return IntPoly(std::move(d));
}

IntPoly operator+(const IntPoly& a, const IntPoly& b) {
  std::vector<Integer> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return IntPoly(std::move(r));
}

IntPoly operator-(const IntPoly& a, const IntPoly& b) {
  std::vector<Integer> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
  return IntPoly(std::move(r));
}

IntPoly operator*(const IntPoly& a, const IntPoly& b) {
  if (a.is_zero() || b.is_zero()) return IntPoly();
  std::vector<Integer> r(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j)
      mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
  return IntPoly(std::move(r));
}

std::pair<IntPoly, IntPoly> IntPoly::divmod_monic(const IntPoly& d) const {
  if (!d.is_monic()) throw DomainError("divmod_monic requires a monic divisor");
  std::vector<Integer> r = c_;
  int dd = d.degree();
  int n = degree();
  if (n < dd) return {IntPoly(), *this};
  std::vector<Integer> q(n - dd + 1, 0);
  for (int i = n; i >= dd; --i) {
    Integer c = r[i];
    if (c == 0) continue;
    q[i - dd] = c;
    for (int j = 0; j <= dd; ++j) r[i - dd + j] -= c * d.c_[j];
  }
  r.resize(dd);
  return {IntPoly(std::move(q)), IntPoly(std::move(r))};
}

namespace {

template <typename C>
std::string poly_str(const std::vector<C>& c, const std::string& var) {
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    C a = abs(c[i]);
    bool neg = c[i] < 0;
    if (first)
      os << (neg ? "-" : "");
    else
      os << (neg ? " - " : " + ");
    first = false;
    if (i == 0) {
      os << a.get_str();
      continue;
    }
    if (a != 1) os << a.get_str() << "*";
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

}  // namespace

std::string IntPoly::str(const std::string& var) const { return poly_str(c_, var); }

// ---------------------------------------------------------------- RatPoly

RatPoly::RatPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

RatPoly RatPoly::from_int(const IntPoly& p) {
  std::vector<Rational> v(p.coeffs().begin(), p.coeffs().end());
  return RatPoly(std::move(v));
}

void RatPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational RatPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return 0;
  return c_[i];
}

RatPoly RatPoly::monic() const {
  if (c_.empty()) return *this;
  std::vector<Rational> v = c_;
  Rational l = c_.back();
  for (auto& x : v) x /= l;
  return RatPoly(std::move(v));
}

RatPoly RatPoly::derivative() const {
  if (c_.size() <= 1) return RatPoly();
  std::vector<Rational> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return RatPoly(std::move(d));
}

Rational RatPoly::eval(const Rational& x) const {
  Rational r = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

bool RatPoly::is_integral_monic() const {
  if (c_.empty() || c_.back() != 1) return false;
  for (auto& x : c_)
    if (x.get_den() != 1) return false;
  return true;
}

IntPoly RatPoly::to_int() const {
  std::vector<Integer> v;
  v.reserve(c_.size());
  for (auto& x : c_) {
    if (x.get_den() != 1) throw DomainError("polynomial has non-integral coefficient");
    v.push_back(x.get_num());
  }
  return IntPoly(std::move(v));
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return RatPoly(std::move(r));
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), 0);
  for (size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
  return RatPoly(std::move(r));
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return RatPoly();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, 0);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return RatPoly(std::move(r));
}

RatPoly operator*(const Rational& s, const RatPoly& a) {
  std::vector<Rational> r = a.c_;
  for (auto& x : r) x *= s;
  return RatPoly(std::move(r));
}

std::pair<RatPoly, RatPoly> RatPoly::divmod(const RatPoly& d) const {
  if (d.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> r = c_;
  int dd = d.degree(), n = degree();
  if (n < dd) return {RatPoly(), *this};
  std::vector<Rational> q(n - dd + 1, 0);
  for (int i = n; i >= dd; --i) {
    if (r[i] == 0) continue;
    Rational c = r[i] / d.c_.back();
    q[i - dd] = c;
    for (int j = 0; j <= dd; ++j) r[i - dd + j] -= c * d.c_[j];
  }
  r.resize(dd);
  return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

std::string RatPoly::str(const std::string& var) const { return poly_str(c_, var); }

RatPoly poly_gcd(const RatPoly& a_in, const RatPoly& b_in) {
  RatPoly a = a_in, b = b_in;
  while (!b.is_zero()) {
    RatPoly r = a.divmod(b).second;
    a = b.monic();
    b = r.is_zero() ? r : r.monic();
  }
  return a.monic();
}

bool is_squarefree(const RatPoly& p) {
  if (p.degree() <= 1) return true;
  return poly_gcd(p, p.derivative()).degree() == 0;
}

std::vector<std::pair<IntPoly, int>> squarefree_factorization(const IntPoly& p) {
  if (!p.is_monic()) throw DomainError("squarefree_factorization expects a monic polynomial");
  std::vector<std::pair<IntPoly, int>> out;
  RatPoly f = RatPoly::from_int(p);
  if (f.degree() == 0) return out;
  // Yun's algorithm
  RatPoly fp = f.derivative();
  RatPoly a = poly_gcd(f, fp);
  RatPoly b = f.divmod(a).first;
  RatPoly c = fp.divmod(a).first;
  RatPoly d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    RatPoly g = poly_gcd(b, d);
    if (g.degree() > 0) out.emplace_back(g.monic().to_int(), i);
    RatPoly nb = b.divmod(g).first;
    c = d.divmod(g).first;
    b = nb;
    d = c - b.derivative();
    ++i;
  }
  return out;
}

std::string factorization_str(const std::vector<std::pair<IntPoly, int>>& f, const std::string& var) {
  if (f.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < f.size(); ++i) {
    if (i) os << "*";
    os << "(" << f[i].first.str(var) << ")";
    if (f[i].second > 1) os << "^" << f[i].second;
  }
  return os.str();
}

}  // namespace pf
