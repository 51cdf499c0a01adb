#include "primforms/hecke.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>

namespace pf {

namespace {

std::vector<long> prime_divisors(long n) {
  std::vector<long> out;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) out.push_back(n);
  return out;
}

bool is_prime_long(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int num_divisors(int n) {
  int c = 0;
  for (int d = 1; d <= n; ++d)
    if (n % d == 0) ++c;
  return c;
}

Integer power_k1(long p, int k) { return ipow(Integer(p), static_cast<unsigned long>(k - 1)); }

}  // namespace

// ------------------------------------------------------------ operators

RSeries hecke_image(const RSeries& f, long p, int k, int N) {
  if (!is_prime_long(p)) throw DomainError("hecke_image: p must be prime");
  size_t m = f.prec() / static_cast<size_t>(p);
  RSeries out(m);
  bool good = N % p != 0;
  Integer pk = power_k1(p, k);
  for (size_t n = 0; n < m; ++n) {
    out[n] = f[n * p];
    if (good && n % p == 0) out[n] += pk * f[n / p];
  }
  return out;
}

Matrix hecke_matrix(const FormSpace& S, long p) {
  if (S.kind != FormSpace::Kind::cusp) throw DomainError("hecke_matrix needs a cusp space");
  const size_t d = S.dim();
  if (S.prec / p < sturm_precision(S.level, S.weight))
    throw PrecisionError("hecke_matrix: precision " + std::to_string(S.prec) +
                         " too low for T_" + std::to_string(p));
  Matrix m(d, d);
  for (size_t j = 0; j < d; ++j) {
    RSeries img = hecke_image(S.echelon[j], p, S.weight, S.level);
    auto c = S.echelon_coordinates(img);
    if (!c)
      throw ConsistencyError("T_" + std::to_string(p) + " image leaves S_" + std::to_string(S.weight) +
                             "(" + std::to_string(S.level) + ")");
    for (size_t i = 0; i < d; ++i) m(i, j) = (*c)[i];
  }
  return m;
}

// ------------------------------------------------------------ bookkeeping

std::vector<std::string> class_labels(int N) {
  switch (N) {
    case 1: return {"1"};
    case 2: return {"1", "2"};
    case 3: return {"1", "3"};
    case 4: return {"1"};
    case 6: return {"1", "2", "3", "6"};
    case 8: return {"1"};
    case 9: return {"0", "*", "tw"};
  }
  throw DomainError("unsupported level " + std::to_string(N));
}

long first_good_prime(int N) { return next_good_prime(N, 1); }

long next_good_prime(int N, long p) {
  for (long q = p + 1;; ++q)
    if (is_prime_long(q) && N % q != 0) return q;
}

std::vector<int> proper_divisors(int N) {
  std::vector<int> out;
  for (int d = 1; d < N; ++d)
    if (N % d == 0) out.push_back(d);
  return out;
}

// ------------------------------------------------------------ tables

namespace {

struct Entry {
  int iota, c, n;  // iota*min(1,n) + c + n*n
};

int eval_entry(Entry e, int n) { return e.iota * std::min(1, n) + e.c + e.n * n; }

// Rows k = 2,4,...,12 (mod 12): columns P(1), P(3;1), P(3;3), P(4), P0(9)
const Entry kTable12[6][5] = {
    {{-1, 0, 1}, {1, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 2}},
    {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 1, 2}},
    {{0, 0, 1}, {0, 1, 1}, {0, 0, 1}, {0, 1, 1}, {0, 0, 2}},
    {{0, 0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 0, 1}, {0, 2, 2}},
    {{0, 0, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 2}},
    {{0, 1, 1}, {0, 0, 1}, {0, 1, 1}, {0, 1, 1}, {0, 2, 2}},
};

// Rows k = 2,4,...,24 (mod 24): columns P(2;1), P(2;2), P(6;1), P(6;2), P(6;3), P(6;6)
const Entry kTable24[12][6] = {
    {{1, 0, 1}, {0, 0, 1}, {-1, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}},
    {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 1, 1}},
    {{0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 0, 1}},
    {{0, 0, 1}, {0, 1, 1}, {0, 1, 1}, {0, 0, 1}, {0, 0, 1}, {0, 0, 1}},
    {{0, 1, 1}, {0, 0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 0, 1}, {0, 0, 1}},
    {{0, 0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 1, 1}, {0, 0, 1}, {0, 1, 1}},
    {{0, 1, 1}, {0, 1, 1}, {0, 0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 0, 1}},
    {{0, 0, 1}, {0, 1, 1}, {0, 1, 1}, {0, 0, 1}, {0, 1, 1}, {0, 1, 1}},
    {{0, 1, 1}, {0, 0, 1}, {0, 0, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}},
    {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 0, 1}, {0, 1, 1}},
    {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}, {0, 0, 1}},
    {{0, 0, 1}, {0, 1, 1}, {0, 2, 1}, {0, 1, 1}, {0, 1, 1}, {0, 1, 1}},
};

int table12(int k, int col) {
  int row = ((k - 2) % 12) / 2;
  int n = (k - 2) / 12;
  return eval_entry(kTable12[row][col], n);
}

int table24(int k, int col) {
  int row = ((k - 2) % 24) / 2;
  int n = (k - 2) / 24;
  return eval_entry(kTable24[row][col], n);
}

}  // namespace

int predicted_count(int N, int k, const std::string& cls) {
  if (k < 2 || k % 2) throw DomainError("predicted_count: weight must be even and >= 2");
  auto bad = [&]() -> int {
    throw DomainError("predicted_count: no table column for level " + std::to_string(N) +
                      " class '" + cls + "'");
  };
  switch (N) {
    case 1:
      if (cls.empty() || cls == "1") return table12(k, 0);
      return bad();
    case 3:
      if (cls == "1") return table12(k, 1);
      if (cls == "3") return table12(k, 2);
      if (cls.empty()) return table12(k, 1) + table12(k, 2);
      return bad();
    case 4:
      if (cls.empty() || cls == "1") return table12(k, 3);
      return bad();
    case 9:
      if (cls.empty() || cls == "P0") return table12(k, 4);
      if (cls == "tw") return predicted_count(1, k) + predicted_count(3, k);
      return bad();
    case 2:
      if (cls == "1") return table24(k, 0);
      if (cls == "2") return table24(k, 1);
      if (cls.empty()) return table24(k, 0) + table24(k, 1);
      return bad();
    case 6:
      if (cls == "1") return table24(k, 2);
      if (cls == "2") return table24(k, 3);
      if (cls == "3") return table24(k, 4);
      if (cls == "6") return table24(k, 5);
      if (cls.empty()) return table24(k, 2) + table24(k, 3) + table24(k, 4) + table24(k, 5);
      return bad();
    case 8: {
      if (!cls.empty() && cls != "1") return bad();
      int sign = (k / 2) % 2 ? -1 : 1;
      return (k - 1 + sign) / 4;
    }
  }
  throw DomainError("predicted_count: unsupported level " + std::to_string(N));
}

int predicted_total(int N, int k) {
  if (N == 9) return predicted_count(9, k) + predicted_count(9, k, "tw");
  return predicted_count(N, k);
}

int predicted_cusp_dim(int N, int k) {
  int s = 0;
  for (int M = 1; M <= N; ++M)
    if (N % M == 0) s += num_divisors(N / M) * predicted_total(M, k);
  return s;
}

// ------------------------------------------------------------ per-(N,k) cells

namespace {

struct Cell {
  int N = 1, k = 0;
  size_t sturm = 0;
  std::recursive_mutex mu;
  FormSpace S;
  bool built = false;
  std::map<long, Matrix> mats;
  bool classes_done = false;
  std::map<std::string, Subspace> pieces;
  std::map<std::string, std::vector<Eigenform>> forms;
};

std::mutex g_registry_mu;
std::map<std::pair<int, int>, std::unique_ptr<Cell>>& registry() {
  static std::map<std::pair<int, int>, std::unique_ptr<Cell>> r;
  return r;
}

Cell& get_cell(int N, int k) {
  if (!supported_level(N)) throw DomainError("unsupported level " + std::to_string(N));
  if (k < 2 || k % 2) throw DomainError("weight must be even and >= 2");
  std::lock_guard<std::mutex> lock(g_registry_mu);
  auto& slot = registry()[{N, k}];
  if (!slot) {
    slot = std::make_unique<Cell>();
    slot->N = N;
    slot->k = k;
    slot->sturm = sturm_precision(N, k);
  }
  return *slot;
}

long max_prime_at_start(int N) {
  long p = first_good_prime(N);
  for (long q : prime_divisors(N)) p = std::max(p, q);
  return p;
}

void ensure_prec(Cell& c, size_t P) {
  P = std::max<size_t>(P, 101);
  if (c.built && c.S.prec >= P) return;
  if (!c.built) P = std::max(P, static_cast<size_t>(max_prime_at_start(c.N)) * c.sturm);
  c.S = basis_Sk(c.N, c.k, P);
  c.built = true;
}

const Matrix& op(Cell& c, long p) {
  auto it = c.mats.find(p);
  if (it != c.mats.end()) return it->second;
  ensure_prec(c, static_cast<size_t>(p) * c.sturm);
  return c.mats.emplace(p, hecke_matrix(c.S, p)).first->second;
}

Rational coef_at(const FormSpace& S, const std::vector<Rational>& x, size_t n) {
  Rational r = 0;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0 && S.echelon[i][n] != 0) r += x[i] * S.echelon[i][n];
  return r;
}

std::vector<Rational> coords_in(const Cell& c, const RSeries& f, const char* what) {
  auto x = c.S.echelon_coordinates(f);
  if (!x)
    throw ConsistencyError(std::string(what) + " is not in S_" + std::to_string(c.k) + "(" +
                           std::to_string(c.N) + ")");
  return *x;
}

Subspace span_of(const std::vector<std::vector<Rational>>& vecs, size_t n) {
  Matrix m(vecs.size(), n);
  for (size_t i = 0; i < vecs.size(); ++i) m.set_row(i, vecs[i]);
  return Subspace::span(m, n);
}

// T-stable complement of K inside X, cut out as the image of charpoly_K(T) on X.
Subspace split_off(Cell& c, const Subspace& X, const Subspace& K) {
  if (K.dim() == 0) return X;
  const size_t n = X.ambient();
  std::vector<std::vector<Rational>> kx;
  for (size_t i = 0; i < K.dim(); ++i) {
    auto v = X.coordinates(K.vector(i));
    if (!v) throw ConsistencyError("split_off: K is not inside X");
    kx.push_back(*v);
  }
  Subspace Kx = span_of(kx, X.dim());
  long q0 = first_good_prime(c.N), q1 = next_good_prime(c.N, q0);
  Matrix A0 = X.restrict(op(c, q0));
  for (int coef = 0; coef <= 6; ++coef) {
    Matrix A = A0;
    if (coef) A = A0 + Rational(coef) * X.restrict(op(c, q1));
    RatPoly chiK = Kx.restrict(A).charpoly();
    Subspace Vx = image_of(poly_eval(chiK, A), Subspace::whole(X.dim()));
    if (Vx.dim() != X.dim() - K.dim()) continue;
    RatPoly chiV = Vx.restrict(A).charpoly();
    if (poly_gcd(chiK, chiV).degree() != 0) continue;
    std::vector<std::vector<Rational>> vecs;
    for (size_t i = 0; i < Vx.dim(); ++i) vecs.push_back(X.combine(Vx.vector(i)));
    return span_of(vecs, n);
  }
  throw ConsistencyError("could not separate new from old eigen-systems at level " +
                         std::to_string(c.N) + " weight " + std::to_string(c.k));
}

int computed_total(int N, int k);

void compute_classes(Cell& c) {
  if (c.classes_done) return;
  ensure_prec(c, 0);
  const size_t d = c.S.dim();
  const int kappa = c.k / 2 - 1;
  Subspace whole = Subspace::whole(d);
  auto scalar = [d](const Rational& s) { return s * Matrix::identity(d); };
  switch (c.N) {
    case 1:
      c.pieces["1"] = whole;
      break;
    case 2:
    case 3:
    case 6:
      for (const auto& label : class_labels(c.N)) {
        int i = std::stoi(label);
        Subspace W = whole;
        for (long p : prime_divisors(c.N)) {
          Rational eig(ipow(Integer(p), kappa));
          if (i % p == 0) eig = -eig;
          W = kernel_on(op(c, p) - scalar(eig), W);
        }
        c.pieces[label] = W;
      }
      break;
    case 4:
    case 8:
    case 9: {
      long p = c.N == 9 ? 3 : 2;
      int lower = c.N / static_cast<int>(p);
      Subspace X = kernel_on(op(c, p), whole);
      const size_t P = c.S.prec;
      FormSpace low = basis_Sk(lower, c.k, P);
      std::vector<std::vector<Rational>> old;
      size_t small = (P + p - 1) / p;
      for (const RSeries& e : low.echelon) {
        old.push_back(coords_in(c, e, "lower-level form"));
        RSeries sub = series_substitute_expand(e.truncate(small), p).truncate(P);
        old.push_back(coords_in(c, sub, "substituted lower-level form"));
      }
      Subspace O = span_of(old, d);
      Subspace Kold = O.intersect(X);
      Subspace V = split_off(c, X, Kold);
      if (c.N != 9) {
        c.pieces["1"] = V;
        break;
      }
      FormSpace s3 = basis_Sk(3, c.k, P);
      std::vector<std::vector<Rational>> tw;
      for (const RSeries& e : s3.echelon) {
        RSeries t = twist(e, DirichletCharacter::rho3());
        if (t.is_zero()) continue;
        tw.push_back(coords_in(c, t, "twisted level-3 form"));
      }
      Subspace Tw = span_of(tw, d);
      int expect = computed_total(1, c.k) + computed_total(3, c.k);
      if (static_cast<int>(Tw.dim()) != expect)
        throw ConsistencyError("twist space at level 9 weight " + std::to_string(c.k) +
                               " has dimension " + std::to_string(Tw.dim()) + ", expected " +
                               std::to_string(expect));
      if (V.intersect(Tw).dim() != Tw.dim())
        throw ConsistencyError("twists of level 1 and 3 forms are not new at level 9");
      Subspace P0 = split_off(c, V, Tw);
      const Matrix& T2 = op(c, 2);
      c.pieces["0"] = kernel_on(T2, P0);
      c.pieces["*"] = image_of(T2, P0);
      c.pieces["tw"] = Tw;
      if (c.pieces["0"].dim() + c.pieces["*"].dim() != P0.dim())
        throw ConsistencyError("T_2 is not semisimple on the level-9 P0 space");
      break;
    }
  }
  // #new + sum_{M | N proper} tau(N/M) #P_k(M) = dim S_k(N)
  size_t total = 0;
  for (const auto& [label, W] : c.pieces) total += W.dim();
  for (int M : proper_divisors(c.N)) total += num_divisors(c.N / M) * computed_total(M, c.k);
  if (total != d)
    throw ConsistencyError("new/old count mismatch at level " + std::to_string(c.N) + " weight " +
                           std::to_string(c.k) + ": " + std::to_string(total) + " vs dim " +
                           std::to_string(d));
  c.classes_done = true;
}

int computed_total(int N, int k) {
  if (k < delta_weight(N)) return 0;
  Cell& c = get_cell(N, k);
  std::lock_guard<std::recursive_mutex> lock(c.mu);
  compute_classes(c);
  int s = 0;
  for (const auto& [label, W] : c.pieces) s += static_cast<int>(W.dim());
  return s;
}

// Fills coefficient series (and trace) of a record from its coordinates.
void fill_series(const Cell& c, Eigenform& f) {
  const FormSpace& S = c.S;
  std::vector<Rational> re(f.coords.size()), im(f.coords.size());
  for (size_t i = 0; i < f.coords.size(); ++i) {
    re[i] = f.coords[i].rat();
    im[i] = f.coords[i].irr();
  }
  RSeries fr = S.echelon_combine(re);
  if (f.field == Eigenform::Field::charpoly_only) {
    f.trace = fr;
    f.coeffs = KSeries();
    return;
  }
  if (f.field == Eigenform::Field::rational) {
    f.coeffs = to_quad(fr);
    f.trace = fr;
    return;
  }
  RSeries fi = S.echelon_combine(im);
  std::vector<QuadExt> v(S.prec);
  for (size_t n = 0; n < S.prec; ++n) v[n] = QuadExt::from_squarefree(fr[n], fi[n], f.radicand);
  f.coeffs = KSeries(std::move(v));
  f.trace = fr * Rational(2);
}

void set_flags(const Cell& c, Eigenform& f) {
  f.level = c.N;
  f.weight = c.k;
  f.kappa = c.k / 2 - 1;
  if (c.N != 9) return;
  f.is_twist = f.cls == "tw";
  bool cm = true;
  size_t lim = f.field == Eigenform::Field::charpoly_only ? 0 : f.coeffs.prec();
  if (f.field == Eigenform::Field::charpoly_only) {
    // sum of a_p^2 over the orbit is trace[p^2] + m p^{k-1}; it vanishes iff all a_p do
    for (long p = 2; static_cast<size_t>(p * p) < f.trace.prec(); ++p) {
      if (!is_prime_long(p) || p % 3 != 2) continue;
      Rational s = f.trace[p * p] + Rational(f.degree) * Rational(power_k1(p, c.k));
      if (s != 0) cm = false;
    }
  } else {
    for (size_t p = 2; p < lim; ++p)
      if (is_prime_long(static_cast<long>(p)) && p % 3 == 2 && !f.coeffs[p].is_zero()) cm = false;
  }
  f.has_cm = cm;
}

std::vector<Rational> operator_rows_solve(const Matrix& B, const std::vector<Rational>& ell) {
  const size_t m = B.rows();
  Matrix sys(m, m);
  std::vector<Rational> rhs(m);
  std::vector<Rational> row = ell;  // ell^T B^r
  Matrix Br = Matrix::identity(m);
  for (size_t r = 0; r < m; ++r) {
    sys.set_row(r, row);
    rhs[r] = Br.trace();
    // row <- row * B
    std::vector<Rational> next(m, Rational(0));
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < m; ++i)
        if (row[i] != 0 && B(i, j) != 0) next[j] += row[i] * B(i, j);
    row = std::move(next);
    Br = Br * B;
  }
  auto y = sys.solve(rhs);
  if (!y) throw ConsistencyError("trace functional system is singular");
  return *y;
}

std::vector<Eigenform> decompose_piece(Cell& c, const std::string& label) {
  const Subspace& W = c.pieces.at(label);
  const size_t m = W.dim();
  std::vector<Eigenform> out;
  if (m == 0) return out;
  const FormSpace& S0 = c.S;
  (void)S0;
  long q0 = first_good_prime(c.N), q1 = next_good_prime(c.N, q0);
  Matrix A0 = W.restrict(op(c, q0));
  Matrix B = A0;
  RatPoly chi = B.charpoly();
  for (int coef = 1; !is_squarefree(chi); ++coef) {
    if (coef > 12)
      throw ConsistencyError("repeated Hecke eigen-system in class " + label + " at level " +
                             std::to_string(c.N) + " weight " + std::to_string(c.k));
    B = A0 + Rational(coef) * W.restrict(op(c, q1));
    chi = B.charpoly();
  }
  if (!chi.is_integral_monic()) throw ConsistencyError("Hecke characteristic polynomial is not integral");
  auto factors = factor_irreducible(chi.to_int());
  Subspace Wx = Subspace::whole(m);
  const FormSpace& S = c.S;
  for (const auto& [g, mult] : factors) {
    if (mult != 1) throw ConsistencyError("non-squarefree Hecke polynomial after splitting");
    Subspace Ux = kernel_on(poly_eval(RatPoly::from_int(g), B), Wx);
    const int deg = g.degree();
    if (static_cast<int>(Ux.dim()) != deg) throw ConsistencyError("eigenspace dimension mismatch");
    if (deg == 1) {
      std::vector<Rational> x = W.combine(Ux.vector(0));
      Rational a1 = coef_at(S, x, 1);
      if (a1 == 0) throw ConsistencyError("eigenform with a_1 = 0");
      Eigenform f;
      f.cls = label;
      f.field = Eigenform::Field::rational;
      for (auto& v : x) f.coords.push_back(QuadExt(v / a1));
      out.push_back(std::move(f));
      continue;
    }
    if (deg == 2) {
      Matrix M = Ux.restrict(B);
      Integer b = g.coeff(1), cc = g.coeff(0);
      Integer disc = b * b - 4 * cc;
      // eigenvector (M01, lambda - M00) in Ux coordinates
      std::vector<Rational> u0 = Ux.vector(0), u1 = Ux.vector(1);
      std::vector<Rational> w0(m), w1(m);
      for (size_t i = 0; i < m; ++i) {
        w0[i] = M(0, 1) * u0[i] - M(0, 0) * u1[i];
        w1[i] = u1[i];
      }
      std::vector<Rational> x0 = W.combine(w0), x1 = W.combine(w1);
      const size_t d = x0.size();
      // lambda = (-b + sqrt(disc))/2: vector = cr + cs sqrt(disc)
      std::vector<Rational> cr(d), cs(d);
      for (size_t i = 0; i < d; ++i) {
        cr[i] = x0[i] - make_rational(b, 2) * x1[i];
        cs[i] = x1[i] / 2;
      }
      Rational A = coef_at(S, cr, 1), Bv = coef_at(S, cs, 1);
      Rational nrm = A * A - Bv * Bv * Rational(disc);
      if (nrm == 0) throw ConsistencyError("eigenform with a_1 = 0");
      std::vector<Rational> r2(d), s2(d);
      for (size_t i = 0; i < d; ++i) {
        r2[i] = (cr[i] * A - cs[i] * Bv * Rational(disc)) / nrm;
        s2[i] = (cs[i] * A - cr[i] * Bv) / nrm;
      }
      RSeries fs = S.echelon_combine(s2);
      // radicand: every s_n^2 disc is D times a square
      Integer gg = disc;
      int used = 0;
      size_t first_irr = 0;
      for (size_t n = 1; n < fs.prec() && used < 40; ++n) {
        if (fs[n] == 0) continue;
        if (!first_irr) first_irr = n;
        Rational v = fs[n] * fs[n] * Rational(disc);
        Integer z = v.get_num() * v.get_den();
        mpz_gcd(gg.get_mpz_t(), gg.get_mpz_t(), z.get_mpz_t());
        ++used;
      }
      Integer D = squarefree_decompose(gg).s;
      Integer q = disc / D, t;
      if (disc % D != 0 || !mpz_perfect_square_p(q.get_mpz_t()))
        throw ConsistencyError("discriminant is not the radicand times a square");
      mpz_sqrt(t.get_mpz_t(), q.get_mpz_t());
      Rational tr(t);
      if (first_irr && fs[first_irr] < 0) tr = -tr;
      for (int conj = 0; conj < 2; ++conj) {
        Eigenform f;
        f.cls = label;
        f.field = Eigenform::Field::quadratic;
        f.radicand = D;
        f.degree = 2;
        f.conjugate = conj;
        Rational sign = conj ? -tr : tr;
        for (size_t i = 0; i < d; ++i) f.coords.push_back(QuadExt::from_squarefree(r2[i], s2[i] * sign, D));
        out.push_back(std::move(f));
      }
      continue;
    }
    // degree > 2: trace of the orbit from ell(B^r y) = tr(B^r)
    Matrix Bu = Ux.restrict(B);
    std::vector<Rational> ell(deg);
    for (int j = 0; j < deg; ++j) ell[j] = coef_at(S, W.combine(Ux.vector(j)), 1);
    std::vector<Rational> y = operator_rows_solve(Bu, ell);
    std::vector<Rational> x = W.combine(Ux.combine(y));
    Eigenform f;
    f.cls = label;
    f.field = Eigenform::Field::charpoly_only;
    f.degree = deg;
    for (auto& v : x) f.coords.push_back(QuadExt(v));
    // ambient subspace for per-prime polynomials
    std::vector<std::vector<Rational>> uv;
    for (int j = 0; j < deg; ++j) uv.push_back(W.combine(Ux.vector(j)));
    Subspace U = span_of(uv, W.ambient());
    for (long p : {q0, q1}) f.charpolys[p] = U.restrict(op(c, p)).charpoly().to_int();
    out.push_back(std::move(f));
  }
  for (auto& f : out) {
    fill_series(c, f);
    set_flags(c, f);
    if (f.field != Eigenform::Field::charpoly_only)
      for (long p : {q0, q1}) {
        if (static_cast<size_t>(p) >= f.coeffs.prec()) continue;
        const QuadExt& ap = f.coeffs[p];
        if (f.field == Eigenform::Field::rational)
          f.charpolys[p] = IntPoly({Integer(-ap.rat().get_num()), Integer(1)});
        else {
          Rational tr = 2 * ap.rat(), nm = ap.norm();
          if (tr.get_den() != 1 || nm.get_den() != 1) throw ConsistencyError("non-integral a_p");
          f.charpolys[p] = IntPoly({nm.get_num(), Integer(-tr.get_num()), Integer(1)});
        }
      }
  }
  return out;
}

void refresh(Cell& c, std::vector<Eigenform>& forms) {
  for (auto& f : forms)
    if (f.trace.prec() < c.S.prec) {
      fill_series(c, f);
      set_flags(c, f);
    }
}

std::vector<Eigenform> forms_of(Cell& c, const std::string& label, size_t prec) {
  compute_classes(c);
  if (!c.pieces.count(label))
    throw DomainError("no class '" + label + "' at level " + std::to_string(c.N));
  if (prec) ensure_prec(c, prec);
  auto it = c.forms.find(label);
  if (it == c.forms.end()) it = c.forms.emplace(label, decompose_piece(c, label)).first;
  refresh(c, it->second);
  return it->second;
}

Subspace new_space(Cell& c, const std::string& cls) {
  compute_classes(c);
  if (!cls.empty()) {
    if (!c.pieces.count(cls)) throw DomainError("no class '" + cls + "' at level " + std::to_string(c.N));
    return c.pieces.at(cls);
  }
  Subspace W(c.S.dim());
  W = Subspace::span(Matrix(0, c.S.dim()), c.S.dim());
  for (const auto& [l, P] : c.pieces) W = W.sum(P);
  return W;
}

}  // namespace

int class_dimension(int N, int k, const std::string& cls) {
  if (k < delta_weight(N)) {
    class_labels(N);
    return 0;
  }
  Cell& c = get_cell(N, k);
  std::lock_guard<std::recursive_mutex> lock(c.mu);
  compute_classes(c);
  if (!c.pieces.count(cls)) throw DomainError("no class '" + cls + "' at level " + std::to_string(N));
  return static_cast<int>(c.pieces.at(cls).dim());
}

size_t cell_precision(int N, int k) {
  if (k < delta_weight(N)) return 0;
  Cell& c = get_cell(N, k);
  std::lock_guard<std::recursive_mutex> lock(c.mu);
  return c.built ? c.S.prec : 0;
}

std::vector<Eigenform> eigen_decompose(int N, int k, const std::string& cls, size_t prec) {
  std::vector<Eigenform> out;
  if (k < delta_weight(N)) return out;
  Cell& c = get_cell(N, k);
  std::lock_guard<std::recursive_mutex> lock(c.mu);
  compute_classes(c);
  std::vector<std::string> labels = cls.empty() ? class_labels(N) : std::vector<std::string>{cls};
  for (const auto& l : labels) {
    auto part = forms_of(c, l, prec);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<Eigenform> eigen_decompose(const FormSpace& S, const std::vector<long>& primes) {
  if (S.level != 1) throw DomainError("explicit-space decomposition is only for level 1");
  if (primes.empty()) throw DomainError("need at least one prime");
  for (long p : primes)
    if (static_cast<size_t>(p) * sturm_precision(1, S.weight) > S.prec)
      throw PrecisionError("space precision too low for T_" + std::to_string(p));
  return eigen_decompose(1, S.weight, "1", S.prec);
}

IntPoly class_charpoly(int N, int k, const std::string& cls, long n) {
  if (n < 1) throw DomainError("class_charpoly: n must be positive");
  if (std::gcd<long>(n, N) != 1)
    throw DomainError("n shares a prime with the level; read a_p = +-p^kappa instead");
  std::vector<long> ps = prime_divisors(n);
  long prod = 1;
  for (long p : ps) prod *= p;
  if (prod != n) throw DomainError("class_charpoly: n must be squarefree");
  if (k < delta_weight(N)) return IntPoly({Integer(1)});
  Cell& c = get_cell(N, k);
  std::lock_guard<std::recursive_mutex> lock(c.mu);
  Subspace W = new_space(c, cls);
  Matrix A = Matrix::identity(W.dim());
  for (long p : ps) A = A * W.restrict(op(c, p));
  RatPoly chi = A.charpoly();
  if (!chi.is_integral_monic()) throw ConsistencyError("non-integral class polynomial");
  return chi.to_int();
}

RSeries trace_series(int N, int k, const std::string& cls, size_t prec) {
  RSeries s(prec);
  for (const auto& f : eigen_decompose(N, k, cls, prec)) {
    // each member of a quadratic pair carries the pair's trace
    if (f.field == Eigenform::Field::quadratic)
      s += Rational(1, 2) * f.trace.truncate(prec);
    else
      s += f.trace.truncate(prec);
  }
  return s;
}

NewformSplit newform_split(int N, int k) {
  NewformSplit out;
  out.newforms = eigen_decompose(N, k);
  int total = 0;
  for (const auto& f : out.newforms) total += f.count();
  for (int M : proper_divisors(N)) {
    auto lower = eigen_decompose(M, k);
    for (int d = 1; d <= N / M; ++d) {
      if ((N / M) % d) continue;
      for (const auto& g : lower) {
        out.old.push_back({M, d, g});
        total += g.count();
      }
    }
  }
  if (total != dim_Sk(N, k))
    throw ConsistencyError("newform_split: " + std::to_string(total) + " forms against dim " +
                           std::to_string(dim_Sk(N, k)));
  return out;
}

int classify_sign(const Eigenform& f) {
  const int N = f.level;
  int i = 1;
  for (long p : prime_divisors(N)) {
    bool square = N % (p * p) == 0;
    if (f.field == Eigenform::Field::charpoly_only) {
      // U_p acts by a scalar on the class piece
      if (!square && f.cls != "tw" && std::stoi(f.cls) % p == 0) i *= static_cast<int>(p);
      continue;
    }
    const QuadExt& ap = f.coeffs[p];
    if (square) {
      if (!ap.is_zero())
        throw ConsistencyError("a_" + std::to_string(p) + " nonzero although p^2 divides the level");
      continue;
    }
    Rational pk(ipow(Integer(p), f.kappa));
    if (ap == QuadExt(-pk))
      i *= static_cast<int>(p);
    else if (ap != QuadExt(pk))
      throw ConsistencyError("a_" + std::to_string(p) + " = " + ap.str() + " is not +-p^kappa");
  }
  return i;
}

RSeries twist(const RSeries& f, const DirichletCharacter& chi) {
  RSeries r = f;
  for (size_t n = 0; n < f.prec(); ++n) r[n] *= chi(static_cast<long>(n));
  return r;
}

KSeries twist(const KSeries& f, const DirichletCharacter& chi) {
  KSeries r = f;
  for (size_t n = 0; n < f.prec(); ++n) r[n] = r[n] * QuadExt(static_cast<long>(chi(static_cast<long>(n))));
  return r;
}

NineClass cm_and_twist_classify(const Eigenform& f) {
  if (f.level != 9) throw DomainError("cm_and_twist_classify is for level 9");
  if (f.field == Eigenform::Field::charpoly_only) return f.is_twist ? NineClass::p1 : NineClass::p0;
  for (int M : {1, 3})
    for (const auto& g : eigen_decompose(M, f.weight, "", f.coeffs.prec())) {
      if (g.field == Eigenform::Field::charpoly_only) continue;
      if (g.field != f.field || g.radicand != f.radicand) continue;
      KSeries t = twist(g.coeffs, DirichletCharacter::rho3());
      size_t n = std::min(t.prec(), f.coeffs.prec());
      if (t.agrees_with(f.coeffs, n)) return NineClass::p1;
    }
  if (f.is_twist) throw ConsistencyError("form in the twist space matches no twist");
  return NineClass::p0;
}

}  // namespace pf
