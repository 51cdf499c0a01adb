#include "primforms/specialseries.hpp"

#include <map>
#include <mutex>
#include <numeric>

namespace pf {

int DirichletCharacter::operator()(long n) const {
  long r = ((n % modulus) + modulus) % modulus;
  if (modulus == 3) return r == 1 ? 1 : (r == 2 ? -1 : 0);
  if (modulus == 4) return r == 1 ? 1 : (r == 3 ? -1 : 0);
  throw DomainError("unsupported character modulus " + std::to_string(modulus));
}

Rational bernoulli(int k) {
  if (k < 2 || k % 2) throw DomainError("bernoulli: k must be even and >= 2");
  static std::mutex mu;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= k) {
    int m = static_cast<int>(table.size());
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    Rational s = 0;
    Integer binom = 1;  // C(m+1, 0)
    for (int j = 0; j < m; ++j) {
      s += binom * table[j];
      binom = binom * (m + 1 - j) / (j + 1);
    }
    table.push_back(-s / (m + 1));
  }
  return table[k];
}

std::vector<Integer> divisor_sums(unsigned e, size_t limit) {
  std::vector<Integer> s(limit, 0);
  for (size_t d = 1; d < limit; ++d) {
    Integer de = ipow(Integer(static_cast<unsigned long>(d)), e);
    for (size_t m = d; m < limit; m += d) s[m] += de;
  }
  return s;
}

RSeries eisenstein(int k, size_t prec) {
  if (k < 2 || k % 2) throw DomainError("eisenstein: weight must be even and >= 2");
  Rational factor = Rational(-2 * k) / bernoulli(k);
  auto sig = divisor_sums(k - 1, prec);
  RSeries e(prec);
  if (prec) e[0] = 1;
  for (size_t n = 1; n < prec; ++n) e[n] = factor * sig[n];
  return e;
}

RSeries character_series(const DirichletCharacter& chi, size_t prec) {
  int scale;
  if (chi.modulus == 3)
    scale = 6;
  else if (chi.modulus == 4)
    scale = 4;
  else
    throw DomainError("character_series: unsupported character");
  std::vector<long> s(prec, 0);
  for (size_t d = 1; d < prec; ++d) {
    int v = chi(static_cast<long>(d));
    if (!v) continue;
    for (size_t m = d; m < prec; m += d) s[m] += v;
  }
  RSeries f(prec);
  if (prec) f[0] = 1;
  for (size_t n = 1; n < prec; ++n) f[n] = scale * s[n];
  return f;
}

bool supported_level(int N) {
  return N == 1 || N == 2 || N == 3 || N == 4 || N == 6 || N == 8 || N == 9;
}

int delta_weight(int N) {
  switch (N) {
    case 1: return 12;
    case 2: return 8;
    case 3: return 6;
    case 4: return 6;
    case 6: return 4;
    case 8: return 4;
    case 9: return 4;
  }
  throw DomainError("unsupported level " + std::to_string(N));
}

namespace {

// f(q^h) truncated to prec; f needs only ceil(prec/h) terms.
RSeries sub_of(const RSeries& f, long h, size_t prec) {
  return series_substitute_expand(f, h).truncate(prec);
}

size_t base_prec(size_t prec, long h) { return (prec + h - 1) / h; }

}  // namespace

RSeries level_series(int N, size_t prec) {
  if (N != 2 && N != 3 && N != 4 && N != 6 && N != 8 && N != 9)
    throw DomainError("level_series: unsupported N " + std::to_string(N));
  RSeries e2 = eisenstein(2, prec);
  RSeries e2n = sub_of(eisenstein(2, base_prec(prec, N)), N, prec);
  Rational g = std::gcd(N - 1, 24);
  RSeries c = e2n * Rational(N) - e2;
  c *= Rational(1) / g;
  return c;
}

RSeries alpha_series(int N, size_t prec) {
  auto f3 = [](size_t p) { return character_series(DirichletCharacter::rho3(), p); };
  auto f4 = [](size_t p) { return character_series(DirichletCharacter::rho4(), p); };
  switch (N) {
    case 6: {
      RSeries r = f3(prec) - sub_of(f3(base_prec(prec, 2)), 2, prec);
      return r * Rational(1, 6);
    }
    case 8: {
      RSeries r = f4(prec) - sub_of(f4(base_prec(prec, 2)), 2, prec);
      return r * Rational(1, 4);
    }
    case 9: {
      RSeries r = f3(prec) - sub_of(f3(base_prec(prec, 3)), 3, prec);
      return r * Rational(1, 6);
    }
    case 4: return sub_of(f4(base_prec(prec, 2)), 2, prec) * alpha_series(8, prec);
    case 2: return level_series(4, prec) * alpha_series(4, prec);
    case 3: return level_series(9, prec) * alpha_series(9, prec);
  }
  throw DomainError("alpha_series: unsupported N " + std::to_string(N));
}

RSeries delta_series(int N, size_t prec) {
  if (prec < 2) throw DomainError("delta_series needs prec >= 2");
  auto F3 = [&] { return character_series(DirichletCharacter::rho3(), prec); };
  auto F4 = [&] { return character_series(DirichletCharacter::rho4(), prec); };
  switch (N) {
    case 1: {
      RSeries e4 = eisenstein(4, prec), e6 = eisenstein(6, prec);
      RSeries d = series_pow(e4, 3) - e6 * e6;
      return d * Rational(1, 1728);
    }
    case 2: {
      RSeries a2 = alpha_series(2, prec), c2 = level_series(2, prec);
      return a2 * (c2 * c2 - a2 * Rational(64));
    }
    case 3: {
      RSeries a3 = alpha_series(3, prec);
      return a3 * (series_pow(F3(), 3) - a3 * Rational(27));
    }
    case 4: {
      RSeries a2 = alpha_series(2, prec);
      return a2 * (level_series(4, prec) - alpha_series(4, prec) * Rational(16));
    }
    case 6: {
      RSeries f = F3(), a = alpha_series(6, prec);
      return a * (f - a * Rational(3)) * (f - a * Rational(4)) * (f - a * Rational(12));
    }
    case 8: {
      RSeries f = F4();
      return alpha_series(4, prec) * f * (f - alpha_series(8, prec) * Rational(8));
    }
    case 9: {
      return alpha_series(3, prec) * (F3() - alpha_series(9, prec) * Rational(9));
    }
  }
  throw DomainError("delta_series: unsupported N " + std::to_string(N));
}

namespace {

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}
std::map<std::string, NamedSeries>& cache() {
  static std::map<std::string, NamedSeries> c;
  return c;
}

NamedSeries build_named(const std::string& name, size_t prec) {
  auto num = [&](size_t from) { return std::stoi(name.substr(from)); };
  if (name == "E2") return {name, 1, 2, eisenstein(2, prec)};
  if (name.size() > 1 && name[0] == 'E') {
    int k = num(1);
    return {name, 1, k, eisenstein(k, prec)};
  }
  if (name == "F3") return {name, 3, 1, character_series(DirichletCharacter::rho3(), prec)};
  if (name == "F4") return {name, 4, 1, character_series(DirichletCharacter::rho4(), prec)};
  if (name.size() > 1 && name[0] == 'C') {
    int N = num(1);
    return {name, N, 2, level_series(N, prec)};
  }
  if (name.rfind("alpha", 0) == 0) {
    int N = num(5);
    int w = N == 2 ? 4 : N == 3 ? 3 : N == 4 ? 2 : 1;
    return {name, N, w, alpha_series(N, prec)};
  }
  if (name.rfind("Delta", 0) == 0) {
    int N = num(5);
    return {name, N, delta_weight(N), delta_series(N, prec)};
  }
  throw DomainError("unknown named series " + name);
}

}  // namespace

NamedSeries named_series(const std::string& name, size_t prec) {
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find(name);
    if (it != cache().end() && it->second.series.prec() >= prec) {
      NamedSeries r = it->second;
      r.series = r.series.truncate(prec);
      return r;
    }
  }
  NamedSeries built = build_named(name, prec);
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto& slot = cache()[name];
  if (slot.series.prec() < built.series.prec()) slot = built;
  return built;
}

}  // namespace pf
