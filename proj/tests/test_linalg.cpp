#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "primforms/linalg.hpp"

using namespace pf;

namespace {

Matrix random_matrix(std::mt19937& rng, size_t r, size_t c, int span = 9) {
  std::uniform_int_distribution<int> d(-span, span);
  Matrix m(r, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) m(i, j) = make_rational(d(rng), 1 + (d(rng) + span) % 3);
  return m;
}

// Leverrier-free oracle: det(X I - M) by cofactor expansion over Q[X] for tiny sizes.
RatPoly charpoly_by_cofactors(const Matrix& m) {
  size_t n = m.rows();
  if (n == 0) return RatPoly({Rational(1)});
  std::vector<std::vector<RatPoly>> a(n, std::vector<RatPoly>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      a[i][j] = i == j ? RatPoly({-m(i, j), Rational(1)}) : RatPoly({-m(i, j)});
  std::function<RatPoly(std::vector<size_t>, size_t)> det = [&](std::vector<size_t> cols, size_t row) {
    if (cols.empty()) return RatPoly({Rational(1)});
    RatPoly s;
    for (size_t t = 0; t < cols.size(); ++t) {
      std::vector<size_t> rest = cols;
      rest.erase(rest.begin() + static_cast<long>(t));
      RatPoly term = a[row][cols[t]] * det(rest, row + 1);
      s = (t % 2) ? s - term : s + term;
    }
    return s;
  };
  std::vector<size_t> cols(n);
  for (size_t i = 0; i < n; ++i) cols[i] = i;
  return det(cols, 0);
}

}  // namespace

TEST_CASE("products and identities") {
  std::mt19937 rng(3);
  Matrix a = random_matrix(rng, 4, 4), b = random_matrix(rng, 4, 4);
  CHECK(a * Matrix::identity(4) == a);
  CHECK((a * b).transpose() == b.transpose() * a.transpose());
  CHECK((a + b).trace() == a.trace() + b.trace());
}

TEST_CASE("rank, kernel and solve") {
  Matrix m = Matrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
  CHECK(m.rank() == 2);
  Matrix k = m.kernel();
  REQUIRE(k.rows() == 1);
  CHECK(m.apply(k.row(0)) == std::vector<Rational>(3, Rational(0)));
  auto x = m.solve({6, 12, 2});
  REQUIRE(x.has_value());
  CHECK(m.apply(*x) == std::vector<Rational>{6, 12, 2});
  CHECK_FALSE(m.solve({1, 0, 0}).has_value());
}

TEST_CASE("charpoly agrees with cofactor expansion") {
  std::mt19937 rng(11);
  for (int t = 0; t < 60; ++t) {
    size_t n = 1 + t % 5;
    Matrix m = random_matrix(rng, n, n);
    RatPoly c = m.charpoly();
    REQUIRE(c == charpoly_by_cofactors(m));
    // Cayley-Hamilton
    REQUIRE(poly_eval(c, m).is_zero());
  }
}

TEST_CASE("subspaces") {
  Subspace a = Subspace::span(Matrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}}), 4);
  Subspace b = Subspace::span(Matrix::from_rows({{0, 1, 0, 0}, {0, 0, 1, 0}}), 4);
  CHECK(a.intersect(b).dim() == 1);
  CHECK(a.sum(b).dim() == 3);
  CHECK(a.contains({3, 4, 0, 0}));
  CHECK_FALSE(a.contains({0, 0, 1, 0}));
  auto c = a.coordinates({3, 4, 0, 0});
  REQUIRE(c.has_value());
  CHECK(a.combine(*c) == std::vector<Rational>{3, 4, 0, 0});

  // diag(1,1,2,3) restricted to a
  Matrix d(4, 4);
  d(0, 0) = 1;
  d(1, 1) = 1;
  d(2, 2) = 2;
  d(3, 3) = 3;
  CHECK(a.restrict(d) == Matrix::identity(2));
  CHECK(kernel_on(d - Matrix::identity(4), Subspace::whole(4)).dim() == 2);
  CHECK(image_of(d, b).dim() == 2);
  Matrix swap = Matrix::from_rows({{0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}});
  CHECK_THROWS_AS(a.restrict(swap), ConsistencyError);
}
