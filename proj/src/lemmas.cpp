#include <numeric>

#include "primforms/hecke.hpp"

namespace pf {

namespace {

const Rational& need(const std::map<long, Rational>& s, long n) {
  auto it = s.find(n);
  if (it == s.end()) throw PrecisionError("coefficient a_" + std::to_string(n) + " of sigma not supplied");
  return it->second;
}

}  // namespace

PairSplit pair_split(const std::map<long, Rational>& sigma, long p, int k, int N) {
  if (p < 2 || !is_prime_small(p)) throw DomainError("pair_split: p must be prime");
  if (N % p == 0) throw DomainError("pair_split: p divides the level");
  Rational P(ipow(Integer(p), k - 1));
  const Rational& s1 = need(sigma, p);
  const Rational& s2 = need(sigma, p * p);
  PairSplit r;
  r.ap_phi_sq = -s1 * s1 + s2 + P;
  r.ap2_over_ap = 2 * s1;
  r.ap3_over_ap = 2 * s1 * s1 + s2 - P;
  return r;
}

Rational phi_cross(const std::map<long, Rational>& sigma, long l, long m) {
  if (std::gcd(l, m) != 1) throw DomainError("phi_cross: l and m must be coprime");
  return need(sigma, l * m) - need(sigma, l) * need(sigma, m);
}

QuadExt phi_compose(const std::map<long, Rational>& sigma, long l, long m, const QuadExt& al_phi,
                    const QuadExt& am_phi) {
  if (std::gcd(l, m) != 1) throw DomainError("phi_compose: l and m must be coprime");
  return QuadExt(need(sigma, l)) * am_phi + al_phi * QuadExt(need(sigma, m));
}

IntPoly newton_charpoly(const std::vector<Rational>& sigma_pp, int r, long p, int k) {
  if (r < 2 || r > 5) throw DomainError("newton_charpoly: r must be between 2 and 5");
  if (static_cast<int>(sigma_pp.size()) < r)
    throw PrecisionError("newton_charpoly needs a_p .. a_{p^r} of sigma");
  const Rational P(ipow(Integer(p), k - 1));
  // a^j in the basis a_{p^i}: a * a_{p^i} = a_{p^(i+1)} + P a_{p^(i-1)}, a_1 = 1
  std::vector<Rational> sig(r + 1);
  sig[0] = r;
  for (int i = 1; i <= r; ++i) sig[i] = sigma_pp[i - 1];
  std::vector<Rational> pw(r + 1);  // power sums of the a_p
  std::vector<Rational> u = {1};    // a^0
  for (int j = 1; j <= r; ++j) {
    std::vector<Rational> v(j + 1, Rational(0));
    for (size_t i = 0; i < u.size(); ++i) {
      if (u[i] == 0) continue;
      v[i + 1] += u[i];
      if (i >= 1) v[i - 1] += P * u[i];
    }
    u = std::move(v);
    for (int i = 0; i <= j; ++i) pw[j] += u[i] * sig[i];
  }
  // Newton's identities: j e_j = sum_{i=1..j} (-1)^(i-1) e_{j-i} pw_i
  std::vector<Rational> e(r + 1);
  e[0] = 1;
  for (int j = 1; j <= r; ++j) {
    Rational acc = 0;
    for (int i = 1; i <= j; ++i) acc += (i % 2 ? 1 : -1) * e[j - i] * pw[i];
    e[j] = acc / j;
  }
  std::vector<Rational> c(r + 1);  // ascending
  for (int j = 0; j <= r; ++j) c[r - j] = (j % 2 ? -1 : 1) * e[j];
  std::vector<Integer> ic;
  for (auto& x : c) {
    if (x.get_den() != 1) throw ConsistencyError("newton_charpoly: non-integral coefficient " + x.get_str());
    ic.push_back(x.get_num());
  }
  return IntPoly(std::move(ic));
}

}  // namespace pf
