#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "primforms/exactnum.hpp"

using namespace pf;

namespace {

// trial division up to sqrt(n), independent of squarefree_decompose
std::pair<Integer, Integer> squarefree_by_trial(Integer n) {
  Integer s = 1, f = 1;
  for (Integer p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) f *= p;
    if (e % 2) s *= p;
  }
  return {s * n, f};
}

IntPoly poly(std::initializer_list<long> c) {
  std::vector<Integer> v;
  for (long x : c) v.emplace_back(x);
  return IntPoly(v);
}

IntPoly product(const std::vector<std::pair<IntPoly, int>>& fs) {
  IntPoly p = poly({1});
  for (const auto& [g, m] : fs)
    for (int i = 0; i < m; ++i) p = p * g;
  return p;
}

}  // namespace

TEST_CASE("rationals stay reduced") {
  Rational q = make_rational(6, -4);
  CHECK(q.get_num() == -3);
  CHECK(q.get_den() == 2);
  Rational r = q;
  r.canonicalize();
  CHECK(r == q);
  CHECK_THROWS_AS(make_rational(1, 0), DomainError);
  CHECK(to_string(make_rational(5, 10)) == "1/2");
}

TEST_CASE("squarefree_decompose") {
  auto a = squarefree_decompose(1);
  CHECK(a.s == 1);
  CHECK(a.f == 1);
  auto b = squarefree_decompose(12);
  CHECK(b.s == 3);
  CHECK(b.f == 2);
  auto [s, f] = squarefree_by_trial(144169);
  auto c = squarefree_decompose(144169);
  CHECK(c.s == s);
  CHECK(c.f == f);
  CHECK(c.s * c.f * c.f == 144169);
  for (long n = 1; n < 3000; ++n) {
    auto [s2, f2] = squarefree_by_trial(n);
    auto d = squarefree_decompose(n);
    REQUIRE(d.s == s2);
    REQUIRE(d.f == f2);
  }
}

TEST_CASE("factor_integer and primes") {
  auto fs = factor_integer(Integer(360));
  REQUIRE(fs.size() == 3);
  CHECK(fs[0].first == 2);
  CHECK(fs[0].second == 3);
  CHECK(fs[2].first == 5);
  CHECK(primes_below(30).size() == 10);
  CHECK(is_prime_small(97));
  CHECK_FALSE(is_prime_small(91));
}

TEST_CASE("quadratic field arithmetic") {
  QuadExt x(Rational(540), Rational(12), Integer(144169));
  QuadExt zero;
  CHECK(quad_arith(zero, x, QuadOp::add) == x);
  QuadExt prod = x * x.conj();
  CHECK(prod.is_rational());
  CHECK(prod.radicand() == 1);
  CHECK(prod == QuadExt(Rational(540 * 540 - 144 * 144169)));
  CHECK(prod.rat() == -20468736);  // 540^2 - 144*144169
  // canonicalized radicand: 2*sqrt(40) = 4*sqrt(10)
  QuadExt y(Rational(0), Rational(2), Integer(40));
  CHECK(y.radicand() == 10);
  CHECK(y.irr() == 4);
  CHECK(y.str() == "4*sqrt(10)");
  CHECK(QuadExt(Rational(1), Rational(3), Integer(9)) == QuadExt(Rational(10)));
  CHECK_THROWS(QuadExt(Rational(0), Rational(1), Integer(-5)));
  CHECK_THROWS_AS(QuadExt(Rational(0), Rational(1), Integer(2)) + QuadExt(Rational(0), Rational(1), Integer(3)),
                  FieldMismatchError);
  CHECK((x / x) == QuadExt(1));
  CHECK(x.norm() == -20468736);
  CHECK(QuadExt::sqrt_of(Rational(360)) == QuadExt(Rational(0), Rational(6), Integer(10)));
}

TEST_CASE("quadratic multiplication is commutative and associative") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> d(-50, 50);
  const long D[] = {2, 5, 10, 114, 144169};
  for (int i = 0; i < 1000; ++i) {
    Integer rad = D[i % 5];
    auto rnd = [&] {
      int den = d(rng);
      if (den == 0) den = 1;
      return QuadExt(make_rational(d(rng), std::abs(den)), make_rational(d(rng), 7), rad);
    };
    QuadExt a = rnd(), b = rnd(), c = rnd();
    REQUIRE(a * b == b * a);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("integer polynomials") {
  IntPoly p = poly({-1, 0, 1});
  CHECK(p.str() == "X^2 - 1");
  CHECK(p.degree() == 2);
  CHECK(IntPoly().degree() == -1);
  auto [q, r] = (p * poly({3, 1})).divmod_monic(poly({3, 1}));
  CHECK(q == p);
  CHECK(r.is_zero());
  CHECK(p.eval(Integer(5)) == 24);
}

TEST_CASE("factor_int_poly") {
  auto f = factor_int_poly(poly({-1, 0, 1}));
  REQUIRE(f.factors.size() == 2);
  CHECK(product(f.factors) == poly({-1, 0, 1}));
  CHECK(factorization_str(f.factors) == "(X - 1)*(X + 1)");
  CHECK_FALSE(f.residual_flagged);

  IntPoly a = poly({-117696240, -11592, 1});
  IntPoly b = poly({-140413680, 952, 1});
  auto g = factor_int_poly(a * b);
  REQUIRE(g.factors.size() == 2);
  CHECK(((g.factors[0].first == a && g.factors[1].first == b) ||
         (g.factors[0].first == b && g.factors[1].first == a)));
  CHECK(product(g.factors) == a * b);

  // the level-9 quartic does not split over Q
  IntPoly quartic = poly({108573696000L, 0, -1446840, 0, 1});
  auto h = factor_int_poly(quartic);
  CHECK(h.factors.empty());
  CHECK(h.residual_flagged);
  CHECK(h.residual_irreducible);
  CHECK(h.residual == quartic);
  auto full = factor_irreducible(quartic);
  REQUIRE(full.size() == 1);
  CHECK(full[0].first == quartic);
}

TEST_CASE("factorization products equal the input") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-30, 30);
  for (int i = 0; i < 200; ++i) {
    IntPoly p = poly({1});
    int parts = 1 + i % 3;
    for (int j = 0; j < parts; ++j) {
      if (rng() % 2)
        p = p * poly({d(rng), 1});
      else
        p = p * poly({d(rng), d(rng), 1});
    }
    auto f = factor_int_poly(p);
    REQUIRE(product(f.factors) * f.residual == p);
    REQUIRE(product(factor_irreducible(p)) == p);
    auto sq = squarefree_factorization(p);
    REQUIRE(product(sq) == p);
  }
}

TEST_CASE("rational polynomials") {
  RatPoly p({Rational(-2), Rational(0), Rational(1)});
  RatPoly q({Rational(1, 2), Rational(1)});
  CHECK((p * q).divmod(q).first == p);
  CHECK(poly_gcd(p * q, q * q).degree() == 1);
  CHECK(is_squarefree(p));
  CHECK_FALSE(is_squarefree(p * p));
  CHECK(RatPoly::from_int(poly({24, 1})).to_int() == poly({24, 1}));
}
