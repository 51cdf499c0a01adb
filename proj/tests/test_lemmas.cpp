#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "primforms/hecke.hpp"

using namespace pf;

namespace {

std::map<long, Rational> half_trace(int N, int k, const std::string& cls, size_t prec) {
  RSeries t = trace_series(N, k, cls, prec);
  std::map<long, Rational> s;
  for (size_t n = 1; n < prec; ++n) s[static_cast<long>(n)] = t[n] / 2;
  return s;
}

// a_{p^j} of an eigenform with a_p = a, j = 1..r
std::vector<Integer> prime_powers(const Integer& a, int r, const Integer& P) {
  std::vector<Integer> out = {1, a};
  for (int j = 2; j <= r; ++j) out.push_back(a * out[j - 1] - P * out[j - 2]);
  return out;
}

IntPoly brute_product(const std::vector<Integer>& roots) {
  IntPoly p({Integer(1)});
  for (const auto& a : roots) p = p * IntPoly::linear_root(a);
  return p;
}

}  // namespace

TEST_CASE("pair splitting from trace data") {
  auto s1 = half_trace(1, 24, "1", 10);
  PairSplit a = pair_split(s1, 2, 24, 1);
  CHECK(a.ap_phi_sq == Rational(144) * 144169);
  CHECK(a.ap2_over_ap == 1080);

  auto s2 = half_trace(2, 26, "1", 20);
  PairSplit b = pair_split(s2, 3, 26, 2);
  CHECK(b.ap_phi_sq == Rational(4800 * 4800) * 106705);
  CHECK_THROWS_AS(pair_split(s2, 2, 26, 2), DomainError);

  // phi = 0 when the pair collapses to one eigenform
  auto d = half_trace(1, 12, "1", 10);
  for (auto& [n, v] : d) v *= 2;  // sigma = Delta1 itself
  CHECK(pair_split(d, 2, 12, 1).ap_phi_sq == 0);
  CHECK(phi_cross(d, 2, 3) == 0);

  // a_l(phi) a_m(phi) against the explicit pair
  auto f = eigen_decompose(1, 24);
  QuadExt phi2 = (f[0].a(2) - f[1].a(2)) / QuadExt(2);
  QuadExt phi3 = (f[0].a(3) - f[1].a(3)) / QuadExt(2);
  QuadExt phi6 = (f[0].a(6) - f[1].a(6)) / QuadExt(2);
  CHECK(QuadExt(phi_cross(s1, 2, 3)) == phi2 * phi3);
  CHECK(phi_compose(s1, 2, 3, phi2, phi3) == phi6);
  // a_4(phi) / a_2(phi) and a_8(phi) / a_2(phi)
  CHECK(QuadExt(a.ap2_over_ap) * phi2 == (f[0].a(4) - f[1].a(4)) / QuadExt(2));
  CHECK(QuadExt(a.ap3_over_ap) * phi2 == (f[0].a(8) - f[1].a(8)) / QuadExt(2));
}

TEST_CASE("newton_charpoly on the level-8 weight-18 cell") {
  RSeries t = trace_series(8, 18, "", 100);
  IntPoly q = newton_charpoly({t[3], t[9], t[27], t[81]}, 4, 3, 18);
  IntPoly a({Integer(-117696240), Integer(-11592), Integer(1)});
  IntPoly b({Integer(-140413680), Integer(952), Integer(1)});
  CHECK(q == a * b);
  CHECK(q.coeff(3) == -10640);

  // all forms equal: (X - a)^r
  Integer P = ipow(Integer(2), 11);
  auto pw = prime_powers(Integer(-24), 5, P);
  for (int r = 2; r <= 5; ++r) {
    std::vector<Rational> s;
    for (int j = 1; j <= r; ++j) s.emplace_back(r * pw[j]);
    CHECK(newton_charpoly(s, r, 2, 12) == brute_product(std::vector<Integer>(r, Integer(-24))));
  }
  CHECK_THROWS_AS(newton_charpoly({1, 2}, 6, 2, 12), DomainError);
  CHECK_THROWS_AS(newton_charpoly({1}, 3, 2, 12), PrecisionError);
}

TEST_CASE("newton_charpoly against brute force") {
  std::mt19937 rng(31337);
  const long primes[] = {2, 3, 5, 7};
  int cases = 0;
  for (int t = 0; t < 1200; ++t) {
    int r = 2 + t % 4;
    long p = primes[t % 4];
    int k = 2 * (1 + static_cast<int>(rng() % 12));
    Integer P = ipow(Integer(p), static_cast<unsigned long>(k - 1));
    std::uniform_int_distribution<long> d(-100000, 100000);
    std::vector<Integer> roots;
    std::vector<Rational> sigma(r, Rational(0));
    for (int i = 0; i < r; ++i) {
      roots.emplace_back(d(rng));
      auto pw = prime_powers(roots.back(), r, P);
      for (int j = 1; j <= r; ++j) sigma[j - 1] += pw[j];
    }
    REQUIRE(newton_charpoly(sigma, r, p, k) == brute_product(roots));
    ++cases;
  }
  CHECK(cases >= 1000);
}
