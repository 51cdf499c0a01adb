#include "primforms/ringspace.hpp"

#include "primforms/specialseries.hpp"

namespace pf {

GeneratorSet generator_set(int N) {
  switch (N) {
    case 1: return {1, {"E4", 4}, {"E6", 6}, false};
    case 2: return {2, {"C2", 2}, {"alpha2", 4}, false};
    case 3: return {3, {"F3", 1}, {"alpha3", 3}, true};
    case 4: return {4, {"F4", 1}, {"alpha4", 2}, true};
    case 6: return {6, {"F3", 1}, {"alpha6", 1}, true};
    case 8: return {8, {"F4", 1}, {"alpha8", 1}, true};
    case 9: return {9, {"F3", 1}, {"alpha9", 1}, true};
  }
  throw DomainError("unsupported level " + std::to_string(N));
}

std::vector<std::pair<int, int>> monomials(int N, int k) {
  GeneratorSet g = generator_set(N);
  std::vector<std::pair<int, int>> out;
  if (k < 0 || (g.even_only && k % 2)) return out;
  for (int b = 0; b * g.second.weight <= k; ++b) {
    int rest = k - b * g.second.weight;
    if (rest % g.first.weight == 0) out.emplace_back(rest / g.first.weight, b);
  }
  return out;
}

int dim_Mk(int N, int k) { return static_cast<int>(monomials(N, k).size()); }

int dim_Sk(int N, int k) {
  int w = delta_weight(N);
  return k < w ? 0 : dim_Mk(N, k - w);
}

int level_index(int N) {
  switch (N) {
    case 1: return 1;
    case 2: return 3;
    case 3: return 4;
    case 4: return 6;
    case 6: return 12;
    case 8: return 12;
    case 9: return 12;
  }
  throw DomainError("unsupported level " + std::to_string(N));
}

size_t sturm_precision(int N, int k) {
  long num = static_cast<long>(k) * level_index(N);
  return static_cast<size_t>((num + 11) / 12 + 10);
}

std::optional<std::vector<Rational>> FormSpace::echelon_coordinates(const RSeries& f) const {
  size_t n = std::min(prec, f.prec());
  std::vector<Rational> c(dim());
  for (size_t i = 0; i < dim(); ++i) {
    if (pivots[i] >= n) throw PrecisionError("series too short to read echelon coordinates");
    c[i] = f[pivots[i]];
  }
  RSeries back = echelon_combine(c).truncate(n);
  if (!back.agrees_with(f.truncate(n), n)) return std::nullopt;
  return c;
}

RSeries FormSpace::echelon_combine(const std::vector<Rational>& c) const {
  RSeries r(prec);
  for (size_t i = 0; i < dim(); ++i) {
    if (c[i] == 0) continue;
    const RSeries& e = echelon[i];
    for (size_t n = 0; n < prec; ++n)
      if (e[n] != 0) r[n] += c[i] * e[n];
  }
  return r;
}

namespace {

void build_echelon(FormSpace& S) {
  const size_t d = S.dim(), P = S.prec;
  S.echelon.clear();
  S.pivots.clear();
  if (d == 0) {
    S.transform = Matrix(0, 0);
    return;
  }
  Matrix aug(d, P + d);
  for (size_t i = 0; i < d; ++i) {
    for (size_t n = 0; n < P; ++n) aug(i, n) = S.basis[i][n];
    aug(i, P + i) = 1;
  }
  Matrix::Echelon e = aug.rref();
  if (e.pivots.size() != d || e.pivots.back() >= P)
    throw ConsistencyError("monomial basis of weight " + std::to_string(S.weight) + " level " +
                           std::to_string(S.level) + " is dependent at precision " +
                           std::to_string(P));
  S.transform = Matrix(d, d);
  for (size_t i = 0; i < d; ++i) {
    RSeries row(P);
    for (size_t n = 0; n < P; ++n) row[n] = e.rref(i, n);
    S.echelon.push_back(std::move(row));
    for (size_t j = 0; j < d; ++j) S.transform(i, j) = e.rref(i, P + j);
  }
  S.pivots = e.pivots;
}

FormSpace monomial_space(int N, int k, size_t prec, const RSeries* factor) {
  GeneratorSet g = generator_set(N);
  FormSpace S;
  S.level = N;
  S.weight = k;
  S.prec = prec;
  S.kind = factor ? FormSpace::Kind::cusp : FormSpace::Kind::full;
  int inner = factor ? k - delta_weight(N) : k;
  S.exponents = monomials(N, inner);
  if (S.exponents.empty()) {
    build_echelon(S);
    return S;
  }
  int amax = 0, bmax = 0;
  for (auto [a, b] : S.exponents) {
    amax = std::max(amax, a);
    bmax = std::max(bmax, b);
  }
  RSeries x = named_series(g.first.name, prec).series;
  RSeries y = named_series(g.second.name, prec).series;
  std::vector<RSeries> xp{RSeries::constant(Rational(1), prec)}, yp{RSeries::constant(Rational(1), prec)};
  for (int i = 1; i <= amax; ++i) xp.push_back(xp.back() * x);
  for (int i = 1; i <= bmax; ++i) yp.push_back(yp.back() * y);
  for (auto [a, b] : S.exponents) {
    RSeries m = xp[a] * yp[b];
    if (factor) m = m * *factor;
    S.basis.push_back(std::move(m));
  }
  build_echelon(S);
  return S;
}

}  // namespace

FormSpace basis_Mk(int N, int k, size_t prec) {
  if (k < 0 || k % 2) throw DomainError("basis_Mk: weight must be even and nonnegative");
  return monomial_space(N, k, prec, nullptr);
}

FormSpace basis_Sk(int N, int k, size_t prec) {
  if (k < 0 || k % 2) throw DomainError("basis_Sk: weight must be even and nonnegative");
  RSeries delta = named_series("Delta" + std::to_string(N), prec).series;
  return monomial_space(N, k, prec, &delta);
}

Membership solve_in_basis(const RSeries& f, const FormSpace& S) {
  size_t need = sturm_precision(S.level, S.weight);
  if (f.prec() < need)
    throw PrecisionError("solve_in_basis needs " + std::to_string(need) + " coefficients, got " +
                         std::to_string(f.prec()));
  if (S.prec < need) throw PrecisionError("form space precision below the Sturm bound");
  Membership m;
  size_t n = std::min(S.prec, f.prec());
  std::vector<Rational> c(S.dim());
  for (size_t i = 0; i < S.dim(); ++i) c[i] = f[S.pivots[i]];
  RSeries diff = f.truncate(n) - S.echelon_combine(c).truncate(n);
  size_t w = diff.valuation();
  if (w < n) {
    m.witness = w;
    return m;
  }
  m.member = true;
  // echelon coords -> monomial coords: f = sum c_i E_i = sum_j (c^T T)_j B_j
  m.coords.assign(S.dim(), Rational(0));
  for (size_t i = 0; i < S.dim(); ++i)
    if (c[i] != 0)
      for (size_t j = 0; j < S.dim(); ++j) m.coords[j] += c[i] * S.transform(i, j);
  return m;
}

}  // namespace pf
