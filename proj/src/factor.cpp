// Factorization of monic integer polynomials over Q.
// Roots are approximated with the Aberth iteration in MPFR; candidate factors are
// products over root subsets, rounded to integers and confirmed by exact division.

#include <mpfr.h>

#include <algorithm>
#include <cmath>

#include "primforms/exactnum.hpp"

namespace pf {
namespace {

class Mp {
 public:
  explicit Mp(mpfr_prec_t p) { mpfr_init2(v_, p); mpfr_set_ui(v_, 0, MPFR_RNDN); }
  Mp(const Mp& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Mp& operator=(const Mp& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  ~Mp() { mpfr_clear(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

 private:
  mpfr_t v_;
};

struct Cx {
  explicit Cx(mpfr_prec_t p) : re(p), im(p) {}
  Mp re, im;
};

void cx_mul(Cx& r, const Cx& a, const Cx& b, Mp& t1, Mp& t2) {
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  Mp re(t1.prec());
  mpfr_sub(re.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_add(r.im.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_set(r.re.get(), re.get(), MPFR_RNDN);
}

void cx_div(Cx& r, const Cx& a, const Cx& b, Mp& t1, Mp& t2) {
  mpfr_prec_t p = t1.prec();
  Mp den(p), re(p), im(p);
  mpfr_sqr(t1.get(), b.re.get(), MPFR_RNDN);
  mpfr_sqr(t2.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(den.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
  mpfr_add(re.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_mul(t1.get(), a.im.get(), b.re.get(), MPFR_RNDN);
  mpfr_mul(t2.get(), a.re.get(), b.im.get(), MPFR_RNDN);
  mpfr_sub(im.get(), t1.get(), t2.get(), MPFR_RNDN);
  mpfr_div(r.re.get(), re.get(), den.get(), MPFR_RNDN);
  mpfr_div(r.im.get(), im.get(), den.get(), MPFR_RNDN);
}

void cx_abs(Mp& r, const Cx& a) { mpfr_hypot(r.get(), a.re.get(), a.im.get(), MPFR_RNDN); }

long max_bits(const IntPoly& p) {
  long b = 1;
  for (auto& c : p.coeffs()) b = std::max<long>(b, static_cast<long>(mpz_sizeinbase(c.get_mpz_t(), 2)));
  return b;
}

// Approximates all complex roots; returns false when the iteration did not settle.
bool aberth(const IntPoly& f, mpfr_prec_t prec, std::vector<Cx>& roots) {
  const int n = f.degree();
  std::vector<Mp> c;
  for (auto& z : f.coeffs()) {
    Mp m(prec);
    mpfr_set_z(m.get(), z.get_mpz_t(), MPFR_RNDN);
    c.push_back(m);
  }
  // Fujiwara-type radius, used only to spread the starting points.
  double logr = 0;
  for (int i = 1; i <= n; ++i) {
    const Integer& a = f.coeffs()[n - i];
    if (a == 0) continue;
    double l = std::log2(std::max(1.0, mpz_get_d(Integer(abs(a)).get_mpz_t()))) / i;
    if (mpz_sizeinbase(a.get_mpz_t(), 2) > 1000)
      l = static_cast<double>(mpz_sizeinbase(a.get_mpz_t(), 2)) / i;
    logr = std::max(logr, l);
  }
  double radius = std::exp2(logr + 1.0);
  roots.clear();
  for (int k = 0; k < n; ++k) {
    Cx z(prec);
    double ang = 2.0 * M_PI * k / n + 0.4 + 0.13 * static_cast<double>(prec % 11);
    double rk = radius * (0.5 + 0.5 * (k + 1) / n);
    mpfr_set_d(z.re.get(), rk * std::cos(ang), MPFR_RNDN);
    mpfr_set_d(z.im.get(), rk * std::sin(ang), MPFR_RNDN);
    roots.push_back(z);
  }
  Mp t1(prec), t2(prec), absw(prec), absz(prec), tol(prec);
  Cx pv(prec), dv(prec), w(prec), s(prec), tmp(prec), one(prec);
  mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
  const int max_iter = 4000 + 20 * n;
  for (int it = 0; it < max_iter; ++it) {
    bool done = true;
    for (int k = 0; k < n; ++k) {
      Cx& z = roots[k];
      // Horner for f and f'
      mpfr_set(pv.re.get(), c[n].get(), MPFR_RNDN);
      mpfr_set_ui(pv.im.get(), 0, MPFR_RNDN);
      mpfr_set_ui(dv.re.get(), 0, MPFR_RNDN);
      mpfr_set_ui(dv.im.get(), 0, MPFR_RNDN);
      for (int i = n - 1; i >= 0; --i) {
        cx_mul(dv, dv, z, t1, t2);
        mpfr_add(dv.re.get(), dv.re.get(), pv.re.get(), MPFR_RNDN);
        mpfr_add(dv.im.get(), dv.im.get(), pv.im.get(), MPFR_RNDN);
        cx_mul(pv, pv, z, t1, t2);
        mpfr_add(pv.re.get(), pv.re.get(), c[i].get(), MPFR_RNDN);
      }
      if (mpfr_zero_p(pv.re.get()) && mpfr_zero_p(pv.im.get())) continue;
      if (mpfr_zero_p(dv.re.get()) && mpfr_zero_p(dv.im.get())) {
        mpfr_mul_d(z.re.get(), z.re.get(), 1.01, MPFR_RNDN);
        mpfr_add_d(z.im.get(), z.im.get(), 0.01, MPFR_RNDN);
        done = false;
        continue;
      }
      cx_div(w, pv, dv, t1, t2);
      mpfr_set_ui(s.re.get(), 0, MPFR_RNDN);
      mpfr_set_ui(s.im.get(), 0, MPFR_RNDN);
      for (int j = 0; j < n; ++j) {
        if (j == k) continue;
        mpfr_sub(tmp.re.get(), z.re.get(), roots[j].re.get(), MPFR_RNDN);
        mpfr_sub(tmp.im.get(), z.im.get(), roots[j].im.get(), MPFR_RNDN);
        cx_div(tmp, one, tmp, t1, t2);
        mpfr_add(s.re.get(), s.re.get(), tmp.re.get(), MPFR_RNDN);
        mpfr_add(s.im.get(), s.im.get(), tmp.im.get(), MPFR_RNDN);
      }
      cx_mul(tmp, w, s, t1, t2);
      mpfr_ui_sub(tmp.re.get(), 1, tmp.re.get(), MPFR_RNDN);
      mpfr_neg(tmp.im.get(), tmp.im.get(), MPFR_RNDN);
      cx_div(tmp, w, tmp, t1, t2);
      mpfr_sub(z.re.get(), z.re.get(), tmp.re.get(), MPFR_RNDN);
      mpfr_sub(z.im.get(), z.im.get(), tmp.im.get(), MPFR_RNDN);
      if (!mpfr_number_p(z.re.get()) || !mpfr_number_p(z.im.get())) return false;
      cx_abs(absw, tmp);
      cx_abs(absz, z);
      mpfr_add_ui(absz.get(), absz.get(), 1, MPFR_RNDN);
      mpfr_mul_2si(tol.get(), absz.get(), -static_cast<long>(prec) / 2, MPFR_RNDN);
      if (mpfr_cmp(absw.get(), tol.get()) > 0) done = false;
    }
    if (done) return true;
  }
  return false;
}

// Rounds the monic product of the given roots; false if not near-integral.
bool round_product(const std::vector<Cx>& roots, const std::vector<int>& idx, mpfr_prec_t prec,
                   IntPoly& out) {
  const size_t m = idx.size();
  std::vector<Cx> poly;
  poly.reserve(m + 1);
  for (size_t i = 0; i <= m; ++i) poly.emplace_back(prec);
  mpfr_set_ui(poly[0].re.get(), 1, MPFR_RNDN);
  Mp t1(prec), t2(prec);
  Cx tmp(prec);
  size_t deg = 0;
  for (int id : idx) {
    // poly *= (X - r): new[i] = old[i-1] - r*old[i]
    const Cx& r = roots[id];
    for (size_t i = deg + 2; i-- > 0;) {
      cx_mul(tmp, poly[i], r, t1, t2);
      if (i > 0) {
        mpfr_sub(poly[i].re.get(), poly[i - 1].re.get(), tmp.re.get(), MPFR_RNDN);
        mpfr_sub(poly[i].im.get(), poly[i - 1].im.get(), tmp.im.get(), MPFR_RNDN);
      } else {
        mpfr_neg(poly[0].re.get(), tmp.re.get(), MPFR_RNDN);
        mpfr_neg(poly[0].im.get(), tmp.im.get(), MPFR_RNDN);
      }
    }
    ++deg;
  }
  // poly[i] is the coefficient of X^i
  std::vector<Integer> coeffs(m + 1);
  Mp rnd(prec), diff(prec);
  for (size_t i = 0; i <= m; ++i) {
    if (!mpfr_number_p(poly[i].re.get()) || !mpfr_number_p(poly[i].im.get())) return false;
    mpfr_round(rnd.get(), poly[i].re.get());
    mpfr_sub(diff.get(), poly[i].re.get(), rnd.get(), MPFR_RNDN);
    mpfr_abs(diff.get(), diff.get(), MPFR_RNDN);
    if (mpfr_cmp_d(diff.get(), 1e-6) > 0) return false;
    mpfr_abs(diff.get(), poly[i].im.get(), MPFR_RNDN);
    if (mpfr_cmp_d(diff.get(), 1e-6) > 0) return false;
    Integer z;
    mpfr_get_z(z.get_mpz_t(), rnd.get(), MPFR_RNDN);
    coeffs[i] = z;
  }
  out = IntPoly(std::move(coeffs));
  return out.is_monic();
}

// Factors a monic squarefree integer polynomial into irreducibles.
std::vector<IntPoly> factor_squarefree(const IntPoly& f) {
  const int n = f.degree();
  if (n <= 1) return {f};
  if (n == 2) {
    Integer disc = f.coeff(1) * f.coeff(1) - 4 * f.coeff(0);
    if (disc >= 0 && mpz_perfect_square_p(disc.get_mpz_t())) {
      Integer s;
      mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
      Integer r1 = (-f.coeff(1) + s) / 2, r2 = (-f.coeff(1) - s) / 2;
      std::vector<IntPoly> out{IntPoly::linear_root(r2), IntPoly::linear_root(r1)};
      return out;
    }
    return {f};
  }
  mpfr_prec_t prec = 128 + 3 * max_bits(f) + 16 * n;
  for (int attempt = 0; attempt < 5; ++attempt, prec *= 2) {
    std::vector<Cx> roots;
    if (!aberth(f, prec, roots)) continue;
    std::vector<IntPoly> found;
    std::vector<int> alive(n);
    for (int i = 0; i < n; ++i) alive[i] = i;
    IntPoly rest = f;
    for (int size = 1; 2 * size <= static_cast<int>(alive.size()); ++size) {
      bool again = true;
      while (again && 2 * size <= static_cast<int>(alive.size())) {
        again = false;
        const int m = static_cast<int>(alive.size());
        std::vector<int> comb(size);
        for (int i = 0; i < size; ++i) comb[i] = i;
        while (true) {
          std::vector<int> idx(size);
          for (int i = 0; i < size; ++i) idx[i] = alive[comb[i]];
          IntPoly cand;
          if (round_product(roots, idx, prec, cand)) {
            auto [q, r] = rest.divmod_monic(cand);
            if (r.is_zero()) {
              found.push_back(cand);
              rest = q;
              std::vector<int> keep;
              for (int a : alive)
                if (std::find(idx.begin(), idx.end(), a) == idx.end()) keep.push_back(a);
              alive = keep;
              again = true;
              break;
            }
          }
          int i = size - 1;
          while (i >= 0 && comb[i] == m - size + i) --i;
          if (i < 0) break;
          ++comb[i];
          for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
        }
      }
    }
    if (rest.degree() > 0) found.push_back(rest);
    // product check
    IntPoly prod = IntPoly({1});
    for (auto& g : found) prod = prod * g;
    if (prod != f) continue;
    return found;
  }
  throw ConsistencyError("root approximation for factorization did not converge");
}

bool poly_less(const IntPoly& a, const IntPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i)
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  return false;
}

}  // namespace

std::vector<std::pair<IntPoly, int>> factor_irreducible(const IntPoly& p) {
  if (!p.is_monic()) throw DomainError("factor_irreducible expects a monic polynomial");
  std::vector<std::pair<IntPoly, int>> out;
  for (auto& [piece, mult] : squarefree_factorization(p))
    for (auto& g : factor_squarefree(piece)) out.emplace_back(g, mult);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return poly_less(a.first, b.first);
    return a.second < b.second;
  });
  return out;
}

IntFactorization factor_int_poly(const IntPoly& p, int max_factor_degree) {
  if (!p.is_monic()) throw DomainError("factor_int_poly expects a monic polynomial");
  IntFactorization res;
  res.residual = IntPoly({1});
  int residual_parts = 0;
  for (auto& [g, mult] : factor_irreducible(p)) {
    if (g.degree() <= max_factor_degree) {
      res.factors.emplace_back(g, mult);
    } else {
      for (int i = 0; i < mult; ++i) res.residual = res.residual * g;
      residual_parts += mult;
    }
  }
  res.residual_flagged = residual_parts > 0;
  res.residual_irreducible = residual_parts == 1;
  return res;
}

}  // namespace pf
