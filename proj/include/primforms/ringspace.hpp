#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "primforms/linalg.hpp"
#include "primforms/qseries.hpp"

namespace pf {

struct Generator {
  std::string name;  // key for named_series
  int weight;
};

// Two-generator presentation of the graded ring M(N).
struct GeneratorSet {
  int level;
  Generator first, second;
  bool even_only;
};

GeneratorSet generator_set(int N);

// Exponents (a, b) with a*w1 + b*w2 = k, ordered by increasing b.
std::vector<std::pair<int, int>> monomials(int N, int k);
int dim_Mk(int N, int k);
int dim_Sk(int N, int k);

// Index of Gamma_0(N) in SL2(Z) for the supported levels.
int level_index(int N);
size_t sturm_precision(int N, int k);

// A weight-k space with its monomial basis and an echelon basis of the same span.
struct FormSpace {
  enum class Kind { full, cusp };
  int level = 1;
  int weight = 0;
  Kind kind = Kind::full;
  size_t prec = 0;
  std::vector<std::pair<int, int>> exponents;  // monomial per basis element
  std::vector<RSeries> basis;                  // monomial (times Delta_N for cusp)
  // echelon[i] = sum_j transform(i, j) basis[j]; echelon[i][pivots[i]] = 1 and
  // echelon[r][pivots[i]] = 0 for r != i.
  std::vector<RSeries> echelon;
  std::vector<size_t> pivots;
  Matrix transform;

  size_t dim() const { return basis.size(); }
  // Coordinates in the echelon basis, checked on every coefficient below
  // min(prec, f.prec()). nullopt when f is not in the span.
  std::optional<std::vector<Rational>> echelon_coordinates(const RSeries& f) const;
  RSeries echelon_combine(const std::vector<Rational>& c) const;
};

FormSpace basis_Mk(int N, int k, size_t prec);
// Delta_N * M_{k - w}(N); empty when k < w.
FormSpace basis_Sk(int N, int k, size_t prec);

struct Membership {
  bool member = false;
  std::vector<Rational> coords;  // on the monomial basis
  size_t witness = 0;            // first failing coefficient when not a member
};

// Exact coordinates of f on the monomial basis of S. Requires
// f.prec() >= sturm_precision(S.level, S.weight).
Membership solve_in_basis(const RSeries& f, const FormSpace& S);

}  // namespace pf
