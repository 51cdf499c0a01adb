#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "primforms/hecke.hpp"

using namespace pf;

namespace {

IntPoly poly(std::initializer_list<long> c) {
  std::vector<Integer> v;
  for (long x : c) v.emplace_back(x);
  return IntPoly(v);
}

bool is_prime(long n) { return is_prime_small(n); }

// a_l a_m = a_lm for coprime l, m; p-power recursion; boundary a_p.
void check_eigenform(const Eigenform& f, size_t upto) {
  if (f.field == Eigenform::Field::charpoly_only) return;
  size_t n = std::min(upto, f.coeffs.prec());
  int N = f.level, k = f.weight;
  CHECK(f.a(0) == QuadExt(0));
  CHECK(f.a(1) == QuadExt(1));
  for (size_t l = 2; l < n; ++l)
    for (size_t m = 2; l * m < n; ++m)
      if (std::gcd(l, m) == 1) REQUIRE(f.a(l) * f.a(m) == f.a(l * m));
  for (long p = 2; p < static_cast<long>(n); ++p) {
    if (!is_prime(p)) continue;
    bool bad = N % p == 0;
    Integer pk1 = ipow(Integer(p), static_cast<unsigned long>(k - 1));
    for (size_t q = p; q * p < n; q *= p) {
      QuadExt expect = f.a(p) * f.a(q);
      if (!bad) expect -= QuadExt(Rational(pk1)) * f.a(q / p);
      REQUIRE(f.a(q * p) == expect);
    }
    if (bad) {
      if (N % (p * p) == 0) {
        REQUIRE(f.a(p) == QuadExt(0));
      } else {
        Integer pk = ipow(Integer(p), static_cast<unsigned long>(f.kappa));
        REQUIRE((f.a(p) == QuadExt(Rational(pk)) || f.a(p) == QuadExt(Rational(-pk))));
      }
    }
  }
}

}  // namespace

TEST_CASE("hecke images") {
  const size_t P = 60;
  RSeries D1 = delta_series(1, P);
  RSeries img = hecke_image(D1, 2, 12, 1);
  CHECK(img.prec() == (P - 1) / 2 + 1);
  CHECK(img == Rational(-24) * D1.truncate(img.prec()));
  RSeries D2 = delta_series(2, P);
  RSeries u = hecke_image(D2, 2, 8, 2);
  CHECK(u == Rational(-8) * D2.truncate(u.prec()));
  CHECK(hecke_image(RSeries(P), 3, 12, 1).is_zero());
}

TEST_CASE("hecke matrices") {
  FormSpace S12 = basis_Sk(1, 12, 2 * sturm_precision(1, 12));
  Matrix T = hecke_matrix(S12, 2);
  REQUIRE(T.rows() == 1);
  CHECK(T(0, 0) == -24);

  FormSpace S24 = basis_Sk(1, 24, 3 * sturm_precision(1, 24));
  Matrix T2 = hecke_matrix(S24, 2), T3 = hecke_matrix(S24, 3);
  CHECK(T2.trace() == 1080);
  CHECK(T2.charpoly() == RatPoly::from_int(poly({540 * 540 - 144 * 144169, -1080, 1})));
  CHECK(T2 * T3 == T3 * T2);
  FormSpace low = basis_Sk(1, 24, sturm_precision(1, 24));
  CHECK_THROWS_AS(hecke_matrix(low, 3), PrecisionError);
}

TEST_CASE("eigenforms of small cells") {
  auto f12 = eigen_decompose(1, 12);
  REQUIRE(f12.size() == 1);
  CHECK(f12[0].field == Eigenform::Field::rational);
  CHECK(f12[0].a(2) == QuadExt(-24));
  CHECK(f12[0].a(3) == QuadExt(252));

  auto f24 = eigen_decompose(1, 24);
  REQUIRE(f24.size() == 2);
  QuadExt a2(Rational(540), Rational(12), Integer(144169));
  CHECK(f24[0].a(2) == a2);
  CHECK(f24[1].a(2) == a2.conj());
  CHECK(f24[0].radicand == 144169);

  auto f818 = eigen_decompose(8, 18);
  REQUIRE(f818.size() == 4);
  std::vector<Integer> rads;
  for (const auto& f : f818) rads.push_back(f.radicand);
  std::sort(rads.begin(), rads.end());
  CHECK(rads == std::vector<Integer>{114, 114, 2146, 2146});
  CHECK(class_charpoly(8, 18, "", 3) == poly({-117696240, -11592, 1}) * poly({-140413680, 952, 1}));
  CHECK(class_charpoly(1, 12, "", 2) == poly({24, 1}));
  CHECK_THROWS_AS(class_charpoly(8, 18, "", 2), DomainError);
  CHECK_THROWS_AS(class_charpoly(1, 12, "", 4), DomainError);

  for (const auto& c : {std::pair{1, 24}, {2, 26}, {3, 18}, {4, 18}, {6, 24}, {8, 18}, {9, 14}})
    for (const auto& f : eigen_decompose(c.first, c.second, "", 120)) check_eigenform(f, 120);
}

TEST_CASE("distinct forms are separated by the Sturm bound") {
  auto fs = eigen_decompose(6, 24);
  size_t B = sturm_precision(6, 24);
  for (size_t i = 0; i < fs.size(); ++i)
    for (size_t j = i + 1; j < fs.size(); ++j) {
      bool differ = false;
      if (fs[i].field == Eigenform::Field::charpoly_only || fs[j].field == Eigenform::Field::charpoly_only) {
        differ = fs[i].trace.first_difference(fs[j].trace, B) < B;
      } else {
        for (size_t n = 0; n < B; ++n) differ |= fs[i].a(n) != fs[j].a(n);
      }
      CHECK(differ);
    }
}

TEST_CASE("newform splits") {
  auto s64 = newform_split(6, 4);
  REQUIRE(s64.newforms.size() == 1);
  CHECK(s64.old.empty());
  CHECK(s64.newforms[0].trace.truncate(40) == delta_series(6, 40));

  auto s212 = newform_split(2, 12);
  CHECK(s212.newforms.empty());
  REQUIRE(s212.old.size() == 2);
  std::vector<int> shifts;
  for (const auto& o : s212.old) {
    CHECK(o.source_level == 1);
    shifts.push_back(o.shift);
  }
  std::sort(shifts.begin(), shifts.end());
  CHECK(shifts == std::vector<int>{1, 2});

  auto s912 = newform_split(9, 12);
  RSeries tw = twist(delta_series(1, 60), DirichletCharacter::rho3());
  bool found = false;
  for (const auto& f : s912.newforms)
    if (f.field == Eigenform::Field::rational && f.trace.truncate(60) == tw) found = true;
  CHECK(found);
}

TEST_CASE("sign classes") {
  CHECK(classify_sign(eigen_decompose(2, 8)[0]) == 2);
  CHECK(classify_sign(eigen_decompose(3, 6)[0]) == 1);
  CHECK(classify_sign(eigen_decompose(6, 4)[0]) == 6);
  CHECK(eigen_decompose(2, 8)[0].cls == "2");
  CHECK(class_labels(6) == std::vector<std::string>{"1", "2", "3", "6"});
}

TEST_CASE("twists and the level-9 classification") {
  const size_t P = 80;
  RSeries D1 = delta_series(1, P);
  RSeries t = twist(D1, DirichletCharacter::rho3());
  for (size_t n = 0; n < P; ++n) REQUIRE(t[n] == D1[n] * DirichletCharacter::rho3()(static_cast<long>(n)));
  // twisting twice only loses the multiples of 3
  RSeries tt = twist(t, DirichletCharacter::rho3());
  for (size_t n = 0; n < P; ++n) REQUIRE(tt[n] == (n % 3 ? D1[n] : Rational(0)));

  // Delta3 (x) rho3 is a weight-6 level-9 cusp form
  size_t B = sturm_precision(9, 6);
  RSeries t3 = twist(delta_series(3, B + 5), DirichletCharacter::rho3());
  CHECK(solve_in_basis(t3, basis_Sk(9, 6, B + 5)).member);

  auto f4 = eigen_decompose(9, 4);
  REQUIRE(f4.size() == 1);
  CHECK(cm_and_twist_classify(f4[0]) == NineClass::p0);
  for (long p : {2, 5, 11, 17, 23}) CHECK(f4[0].a(p) == QuadExt(0));

  bool twist_found = false;
  for (const auto& f : eigen_decompose(9, 12))
    if (f.field == Eigenform::Field::rational && f.trace.truncate(P) == twist(D1, DirichletCharacter::rho3())) {
      twist_found = true;
      CHECK(cm_and_twist_classify(f) == NineClass::p1);
      CHECK(f.is_twist);
    }
  CHECK(twist_found);

  // weight-8 P0 pair: a_2 = +-6 sqrt(10)
  auto f8 = eigen_decompose(9, 8, "*");
  REQUIRE(f8.size() == 2);
  CHECK(f8[0].a(2) * f8[0].a(2) == QuadExt(360));
  CHECK(f8[0].radicand == 10);
}

TEST_CASE("trace series") {
  RSeries t = trace_series(1, 24, "1", 10);
  CHECK(t[1] == 2);
  CHECK(t[2] == 1080);
  CHECK(trace_series(1, 10, "1", 10).is_zero());
  RSeries t9 = trace_series(9, 20, "*", 40);
  CHECK(t9[1] == 4);
  CHECK(t9[2] == 0);
  CHECK(class_charpoly(9, 20, "*", 2) == poly({108573696000L, 0, -1446840, 0, 1}));
  // trace is the sum over the computed eigenforms
  RSeries sum(40);
  for (const auto& f : eigen_decompose(9, 20, "", 40)) {
    if (f.field == Eigenform::Field::charpoly_only) {
      sum += f.trace.truncate(40);
      continue;
    }
    for (size_t n = 0; n < 40; ++n) sum[n] += f.a(n).rat();
  }
  CHECK(sum == trace_series(9, 20, "", 40));
}

TEST_CASE("predicted counts") {
  CHECK(predicted_count(1, 12) == 1);
  CHECK(predicted_count(8, 18) == 4);
  CHECK(predicted_count(1, 14) == 0);
  CHECK(predicted_count(1, 2) == 0);
  CHECK(predicted_count(6, 24, "1") == 2);
  for (int N : {1, 2, 3, 4, 6, 8})
    for (int k = 2; k <= 30; k += 2) {
      int total = 0;
      for (const auto& c : class_labels(N)) total += class_dimension(N, k, c);
      REQUIRE(total == predicted_total(N, k));
    }
  CHECK(first_good_prime(6) == 5);
  CHECK(next_good_prime(6, 5) == 7);
  CHECK(proper_divisors(6) == std::vector<int>{1, 2, 3});
}
