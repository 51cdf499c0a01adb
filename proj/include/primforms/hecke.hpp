#pragma once

#include <map>
#include <string>
#include <vector>

#include "primforms/linalg.hpp"
#include "primforms/qseries.hpp"
#include "primforms/ringspace.hpp"
#include "primforms/specialseries.hpp"

namespace pf {

// a_n -> a_{pn} + [p does not divide N] p^{k-1} a_{n/p}. Output has (prec-1)/p + 1 terms.
RSeries hecke_image(const RSeries& f, long p, int k, int N);
// Matrix of T_p (or U_p) on the echelon basis of a cusp space, column convention.
Matrix hecke_matrix(const FormSpace& S, long p);

struct Eigenform {
  enum class Field { rational, quadratic, charpoly_only };

  int level = 1;
  int weight = 0;
  int kappa = 0;
  Field field = Field::rational;
  Integer radicand = 1;
  int degree = 1;                  // size of the Galois orbit
  KSeries coeffs;                  // a_0, a_1, ...; empty when charpoly_only
  RSeries trace;                   // sum over the Galois orbit
  std::map<long, IntPoly> charpolys;  // prod over the orbit of (X - a_p)
  std::string cls;                 // sign class; "0", "*" or "tw" at level 9
  bool is_new = true;
  bool is_twist = false;           // level 9 twist of a level 1 or 3 form
  bool has_cm = false;             // a_p = 0 for every p = 2 mod 3 below precision
  int conjugate = 0;               // 0 or 1 inside a quadratic pair
  std::vector<QuadExt> coords;     // echelon coordinates in S_k(N); trace coords if charpoly_only

  // Number of newforms this record stands for.
  int count() const { return field == Field::charpoly_only ? degree : 1; }
  const QuadExt& a(size_t n) const { return coeffs[n]; }
};

// Class labels for a level, in output order.
std::vector<std::string> class_labels(int N);
// Dimension of the class piece (number of newforms in the class).
int class_dimension(int N, int k, const std::string& cls);
// Newforms of one class (or all classes when cls is empty), with at least prec coefficients.
std::vector<Eigenform> eigen_decompose(int N, int k, const std::string& cls = "", size_t prec = 0);
// Decomposes a whole level-1 cusp space given explicitly.
std::vector<Eigenform> eigen_decompose(const FormSpace& S, const std::vector<long>& primes);

// prod over the class of (X - a_n(f)); n squarefree and coprime to N.
IntPoly class_charpoly(int N, int k, const std::string& cls, long n);
// Coefficients currently held for the cusp space S_k(N); 0 before anything was computed.
size_t cell_precision(int N, int k);
// Sum of the newforms of a class (all classes when cls is empty).
RSeries trace_series(int N, int k, const std::string& cls, size_t prec);

struct OldForm {
  int source_level;
  int shift;  // g(q^shift)
  Eigenform form;
};
struct NewformSplit {
  std::vector<Eigenform> newforms;
  std::vector<OldForm> old;
};
NewformSplit newform_split(int N, int k);

// Product of the primes p | N^x with a_p = -p^kappa.
int classify_sign(const Eigenform& f);

RSeries twist(const RSeries& f, const DirichletCharacter& chi);
KSeries twist(const KSeries& f, const DirichletCharacter& chi);

enum class NineClass { p0, p1 };
NineClass cm_and_twist_classify(const Eigenform& f);

// Table counts. For N = 9 the default class gives the #P^0 column and "tw" gives #P(1)+#P(3).
int predicted_count(int N, int k, const std::string& cls = "");
// #P_k(N) over all classes (including twists at level 9).
int predicted_total(int N, int k);
// sum_{M | N} tau(N/M) #P_k(M)
int predicted_cusp_dim(int N, int k);

// First prime not dividing N, and the next one.
long first_good_prime(int N);
long next_good_prime(int N, long p);
std::vector<int> proper_divisors(int N);

// Pair splitting for sigma = (f+g)/2, phi = (f-g)/2 at a prime p not dividing N.
struct PairSplit {
  Rational ap_phi_sq;    // a_p(phi)^2
  Rational ap2_over_ap;  // a_{p^2}(phi) / a_p(phi)
  Rational ap3_over_ap;  // a_{p^3}(phi) / a_p(phi)
};
PairSplit pair_split(const std::map<long, Rational>& sigma, long p, int k, int N);
// a_l(phi) a_m(phi) for coprime l, m
Rational phi_cross(const std::map<long, Rational>& sigma, long l, long m);
// a_{lm}(phi) from a_l(phi), a_m(phi) for coprime l, m
QuadExt phi_compose(const std::map<long, Rational>& sigma, long l, long m, const QuadExt& al_phi,
                    const QuadExt& am_phi);

// prod_{i<=r} (X - a_p(f_i)) from the coefficients a_p, a_{p^2}, ..., a_{p^r} of
// sigma = f_1 + ... + f_r (fewer entries are fine for small r).
IntPoly newton_charpoly(const std::vector<Rational>& sigma_pp, int r, long p, int k);

}  // namespace pf
