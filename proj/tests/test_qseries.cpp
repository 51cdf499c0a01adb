#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "primforms/qseries.hpp"
#include "primforms/specialseries.hpp"

using namespace pf;

namespace {

RSeries rs(std::initializer_list<long> c) {
  std::vector<Rational> v;
  for (long x : c) v.emplace_back(x);
  return RSeries(v);
}

RSeries random_series(std::mt19937& rng, size_t prec) {
  std::uniform_int_distribution<int> d(-9, 9);
  RSeries s(prec);
  for (size_t i = 0; i < prec; ++i) s[i] = make_rational(d(rng), 1 + (d(rng) + 9) % 4);
  return s;
}

}  // namespace

TEST_CASE("linear combinations") {
  RSeries f = rs({1, 2, 3, 4});
  CHECK(f + RSeries(4) == f);
  CHECK((f - f).is_zero());
  // precision is the minimum
  CHECK((f + rs({1, 1})).prec() == 2);
  CHECK_THROWS_AS(f.truncate(5), PrecisionError);

  const size_t P = 60;
  RSeries F3 = character_series(DirichletCharacter::rho3(), P);
  RSeries alpha9 = Rational(1, 6) * (F3 - series_substitute(F3, 3));
  CHECK(alpha9 == alpha_series(9, P));
  RSeries E2 = eisenstein(2, P);
  CHECK(Rational(2) * series_substitute(E2, 2) - E2 == level_series(2, P));
}

TEST_CASE("products and powers") {
  const size_t P = 80;
  RSeries E4 = eisenstein(4, P), E6 = eisenstein(6, P);
  CHECK(E4 * RSeries::constant(Rational(1), P) == E4);
  CHECK(E4 * E4 == eisenstein(8, P));
  CHECK(series_pow(E4, 2) * E6 == eisenstein(14, P));
  CHECK(series_pow(E4, 0) == RSeries::constant(Rational(1), P));
}

TEST_CASE("substitution") {
  RSeries f = rs({0, 1, 1, 0, 0, 0});
  CHECK(series_substitute(f, 1) == f);
  CHECK(series_substitute(f, 2) == rs({0, 0, 1, 0, 1, 0}));
  CHECK_THROWS_AS(series_substitute(f, 0), DomainError);
  CHECK(series_substitute_expand(rs({1, 2}), 3) == rs({1, 0, 0, 2, 0, 0}));
  CHECK(series_unsubstitute(rs({1, 0, 0, 2, 0, 0}), 3) == rs({1, 2}));
  CHECK_THROWS_AS(series_unsubstitute(rs({1, 1}), 2), InexactDivisionError);

  // Delta1(q^3) by reindexing equals the direct expansion at q^3
  const size_t P = 90;
  RSeries D = delta_series(1, P);
  RSeries E4 = eisenstein(4, P * 3), E6 = eisenstein(6, P * 3);
  RSeries direct = Rational(1, 1728) * (series_pow(series_substitute(E4, 3), 3) - series_pow(series_substitute(E6, 3), 2));
  CHECK(series_substitute_expand(D, 3) == direct);
}

TEST_CASE("exact division") {
  RSeries f = rs({1, 2, 3});
  CHECK(series_divide_exact(f, RSeries::constant(Rational(1), 3)) == f);
  CHECK_THROWS_AS(series_divide_exact(rs({1, 2, 3}), rs({0, 1, 1})), InexactDivisionError);
  CHECK(series_divide_exact(rs({0, 0, 1, 1}), rs({0, 1, 1, 0})) == rs({0, 1, 0}));
  CHECK_THROWS_AS(series_shift_down(rs({1, 0}), 1), InexactDivisionError);

  const size_t P = 80;
  RSeries C2 = level_series(2, P), E6 = eisenstein(6, P);
  RSeries d2 = Rational(8) * delta_series(2, P);
  RSeries lhs = series_divide_exact(E6 * series_substitute(E6, 2), C2 * C2);
  CHECK(lhs == series_pow(C2, 4) - Rational(81) * d2);

  RSeries C3 = level_series(3, P), E4 = eisenstein(4, P);
  RSeries d3 = Rational(3) * delta_series(3, P);
  CHECK(series_divide_exact(E4 * series_substitute(E4, 3), C3) == series_pow(C3, 3) + Rational(64) * d3);
}

TEST_CASE("ring laws on random series") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    size_t P = 6 + i % 5;
    RSeries a = random_series(rng, P), b = random_series(rng, P), c = random_series(rng, P);
    REQUIRE(a * b == b * a);
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    long h = 1 + i % 3;
    REQUIRE(series_substitute(a * b, h) == series_substitute(a, h) * series_substitute(b, h));
    RSeries u = b;
    u[0] = 1 + (i % 4);
    REQUIRE(series_divide_exact(a * u, u) == a);
  }
}

TEST_CASE("quadratic-coefficient series") {
  QuadExt r(Rational(0), Rational(1), Integer(10));
  KSeries f(std::vector<QuadExt>{QuadExt(1), r, QuadExt(3)});
  KSeries g = f * f;
  CHECK(g[1] == QuadExt(2) * r);
  CHECK(g[2] == QuadExt(6) + r * r);
  CHECK(to_quad(rs({1, 2})) == KSeries(std::vector<QuadExt>{QuadExt(1), QuadExt(2)}));
  CHECK(rs({0, 1, -24}).str(3) == "q - 24*q^2 + O(q^3)");
}
