#pragma once

#include <string>

#include "primforms/qseries.hpp"

namespace pf {

// Nontrivial character mod 3 or mod 4 (the only ones used here).
struct DirichletCharacter {
  int modulus;  // 3 or 4
  int operator()(long n) const;
  static DirichletCharacter rho3() { return {3}; }
  static DirichletCharacter rho4() { return {4}; }
};

struct NamedSeries {
  std::string name;
  int level;
  int weight;
  RSeries series;
};

Rational bernoulli(int k);

// Eisenstein series 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; k = 2 is quasi-modular.
RSeries eisenstein(int k, size_t prec);
RSeries character_series(const DirichletCharacter& chi, size_t prec);  // F3 or F4
RSeries level_series(int N, size_t prec);                              // C_N
RSeries alpha_series(int N, size_t prec);                              // alpha_N
RSeries delta_series(int N, size_t prec);                              // Delta_N

int delta_weight(int N);
bool supported_level(int N);

// Cached by (name, prec); thread-safe.
NamedSeries named_series(const std::string& name, size_t prec);

// sigma_{e}(n) for n < limit, via sieve.
std::vector<Integer> divisor_sums(unsigned e, size_t limit);

}  // namespace pf
