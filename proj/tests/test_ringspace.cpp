#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "primforms/hecke.hpp"
#include "primforms/ringspace.hpp"
#include "primforms/specialseries.hpp"

using namespace pf;

namespace {

const int kLevels[] = {1, 2, 3, 4, 6, 8, 9};

using Mono = std::vector<std::pair<int, int>>;

size_t coefficient_rank(const FormSpace& S) {
  Matrix m(S.dim(), S.prec);
  for (size_t i = 0; i < S.dim(); ++i)
    for (size_t j = 0; j < S.prec; ++j) m(i, j) = S.basis[i][j];
  return m.rank();
}

}  // namespace

TEST_CASE("monomials") {
  CHECK(monomials(1, 12) == Mono{{3, 0}, {0, 2}});
  CHECK(monomials(2, 8) == Mono{{4, 0}, {2, 1}, {0, 2}});
  CHECK(monomials(6, 4) == Mono{{4, 0}, {3, 1}, {2, 2}, {1, 3}, {0, 4}});
  CHECK(monomials(3, 5).empty());
  CHECK(dim_Mk(1, 12) == 2);
  for (int k = 0; k <= 40; k += 2) {
    int count = 0;
    for (int a = 0; 4 * a <= k; ++a)
      if ((k - 4 * a) % 6 == 0) ++count;
    REQUIRE(dim_Mk(1, k) == count);
  }
}

TEST_CASE("sturm bounds") {
  CHECK(sturm_precision(1, 12) == 11);
  CHECK(sturm_precision(6, 24) == 34);
  CHECK(level_index(9) == 12);
  CHECK(level_index(8) == 12);
  CHECK(level_index(6) == 12);
}

TEST_CASE("spaces") {
  CHECK(coefficient_rank(basis_Mk(6, 12, 60)) == 13);
  FormSpace S12 = basis_Sk(1, 12, 30);
  REQUIRE(S12.dim() == 1);
  CHECK(S12.basis[0] == delta_series(1, 30));
  CHECK(basis_Sk(2, 16, 40).dim() == 3);
  CHECK(basis_Sk(1, 10, 20).dim() == 0);
  CHECK(dim_Sk(2, 16) == 3);
}

TEST_CASE("monomial bases are independent up to weight 40") {
  for (int N : kLevels)
    for (int k = 2; k <= 40; k += 2) {
      CAPTURE(N);
      CAPTURE(k);
      FormSpace M = basis_Mk(N, k, sturm_precision(N, k));
      REQUIRE(coefficient_rank(M) == M.dim());
      REQUIRE(M.echelon.size() == M.dim());
    }
}

TEST_CASE("cusp dimensions match the divisor sum of newform counts") {
  for (int N : kLevels)
    for (int k = 2; k <= 40; k += 2) {
      CAPTURE(N);
      CAPTURE(k);
      REQUIRE(dim_Sk(N, k) == predicted_cusp_dim(N, k));
      REQUIRE(static_cast<int>(basis_Sk(N, k, sturm_precision(N, k)).dim()) == predicted_cusp_dim(N, k));
    }
}

TEST_CASE("solve_in_basis") {
  const size_t P = 40;
  FormSpace M12 = basis_Mk(1, 12, P);
  auto m = solve_in_basis(delta_series(1, P), M12);
  REQUIRE(m.member);
  CHECK(m.coords == std::vector<Rational>{Rational(1, 1728), Rational(-1, 1728)});
  auto z = solve_in_basis(RSeries(P), M12);
  REQUIRE(z.member);
  CHECK(z.coords == std::vector<Rational>{0, 0});
  FormSpace S12 = basis_Sk(1, 12, P);
  RSeries E4 = eisenstein(4, P);
  auto e = solve_in_basis(E4 * E4 * E4, S12);
  CHECK_FALSE(e.member);
  CHECK(e.witness == 0);
  CHECK_THROWS_AS(solve_in_basis(RSeries(5), M12), PrecisionError);
}

TEST_CASE("Delta_N times random forms lands in the cusp space") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> d(-20, 20);
  for (int N : kLevels)
    for (int k : {16, 24}) {
      int w = delta_weight(N);
      size_t P = sturm_precision(N, k) + 5;
      FormSpace M = basis_Mk(N, k - w, P);
      FormSpace S = basis_Sk(N, k, P);
      RSeries g(P);
      std::vector<Rational> c;
      for (size_t i = 0; i < M.dim(); ++i) {
        c.push_back(make_rational(d(rng), 1 + (i % 3)));
        g += Rational(c.back()) * M.basis[i];
      }
      RSeries f = delta_series(N, P) * g;
      auto sol = solve_in_basis(f, S);
      REQUIRE(sol.member);
      CHECK(sol.coords == c);
    }
}
