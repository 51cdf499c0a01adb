#include <mutex>

#include "primforms/formula.hpp"
#include "primforms/specialseries.hpp"

namespace pf::formula {

// ------------------------------------------------------------ bindings

namespace {

// Memoized series by key; callers request a precision and get a truncation.
RSeries memo(const std::string& key, size_t prec, const std::function<RSeries(size_t)>& build) {
  static std::mutex mu;
  static std::map<std::string, RSeries> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end() && it->second.prec() >= prec) return it->second.truncate(prec);
  }
  RSeries s = build(prec);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (slot.prec() < s.prec()) slot = s;
  return s;
}

RSeries named(const std::string& n, size_t prec) { return named_series(n, prec).series; }

// f(q^h) to prec, with f built at ceil(prec/h)
RSeries at_power(const std::function<RSeries(size_t)>& f, long h, size_t prec) {
  size_t base = (prec + h - 1) / h;
  return series_substitute_expand(f(base), h).truncate(prec);
}

using Builder = std::function<RSeries(size_t)>;

void put(BindingSet& b, const std::string& sym, int weight, Builder f) {
  std::string key = b.name + ":" + sym;
  b.symbols[sym] = [key, f](size_t prec) { return memo(key, prec, f); };
  b.weights[sym] = weight;
}

void put_q(BindingSet& b) {
  b.symbols["q"] = [](size_t prec) { return RSeries::monomial(1, Rational(1), prec); };
  b.weights["q"] = 0;
}

const int kEisenstein[] = {4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26};

BindingSet make_level1() {
  BindingSet b{"level1", 1, {}, {}};
  for (int k : kEisenstein) put(b, "E" + std::to_string(k), k, [k](size_t p) { return eisenstein(k, p); });
  put(b, "d", 12, [](size_t p) { return named("Delta1", p) * Rational(12); });
  put_q(b);
  return b;
}

BindingSet make_level2() {
  BindingSet b{"level2", 2, {}, {}};
  auto C = [](size_t p) { return named("C2", p); };
  auto d = [](size_t p) { return named("Delta2", p) * Rational(8); };
  put(b, "C2", 2, C);
  put(b, "C", 2, C);
  put(b, "d", 8, d);
  put(b, "G", 4, [C](size_t p) { return series_pow(C(p), 2) - named("alpha2", p) * Rational(128); });
  put(b, "H", 8, [C, d](size_t p) { return series_pow(C(p), 4) + d(p) * Rational(18); });
  put(b, "I", 8, [C, d](size_t p) { return series_pow(C(p), 4) - d(p) * Rational(81); });
  put_q(b);
  return b;
}

BindingSet make_level3() {
  BindingSet b{"level3", 3, {}, {}};
  auto C = [](size_t p) { return named("C3", p); };
  auto d = [](size_t p) { return named("Delta3", p) * Rational(3); };
  put(b, "C3", 2, C);
  put(b, "C", 2, C);
  put(b, "d", 6, d);
  put(b, "G", 4, [](size_t p) {
    RSeries f = named("F3", p);
    return f * (series_pow(f, 3) - named("alpha3", p) * Rational(54));
  });
  put(b, "I", 6, [C, d](size_t p) { return series_pow(C(p), 3) + d(p) * Rational(64); });
  put_q(b);
  return b;
}

BindingSet make_level4() {
  BindingSet b{"level4", 4, {}, {}};
  for (int k : kEisenstein)
    put(b, "E" + std::to_string(k), k, [k](size_t p) { return at_power([k](size_t s) { return eisenstein(k, s); }, 2, p); });
  put(b, "d", 12, [](size_t p) { return at_power([](size_t s) { return named("Delta1", s) * Rational(192); }, 2, p); });
  put(b, "Delta1", 12, [](size_t p) { return at_power([](size_t s) { return named("Delta1", s); }, 2, p); });
  put_q(b);
  return b;
}

BindingSet make_level6() {
  BindingSet b{"level6", 6, {}, {}};
  auto C = [](size_t p) { return named("F3", p) * at_power([](size_t s) { return named("F3", s); }, 2, p); };
  auto d = [](size_t p) { return named("Delta6", p) * Rational(2); };
  auto C3 = [](size_t p) { return named("C3", p); };
  auto C3_2 = [](size_t p) { return at_power([](size_t s) { return named("C3", s); }, 2, p); };
  put(b, "C", 2, C);
  put(b, "d", 4, d);
  // G_n = (C3 + n C3^(2)) / (1 + n)
  put(b, "G2", 2, [C3, C3_2](size_t p) { return (C3(p) + C3_2(p) * Rational(2)) * Rational(1, 3); });
  put(b, "Gm2", 2, [C3, C3_2](size_t p) { return (C3(p) - C3_2(p) * Rational(2)) * Rational(-1); });
  put(b, "H", 4, [C, d](size_t p) { return series_pow(C(p), 2) + d(p) * Rational(6); });
  put(b, "I", 4, [C, d](size_t p) { return series_pow(C(p), 2) - d(p) * Rational(27); });
  put(b, "J", 4, [C, d](size_t p) { return series_pow(C(p), 2) - d(p) * Rational(50); });
  put_q(b);
  return b;
}

BindingSet make_level8() {
  BindingSet b{"level8", 8, {}, {}};
  auto C = [](size_t s) { return named("C2", s); };
  put(b, "C2", 2, [C](size_t p) { return at_power(C, 2, p); });
  put(b, "C", 2, [C](size_t p) { return at_power(C, 2, p); });
  put(b, "G", 4, [C](size_t p) {
    return at_power([C](size_t s) { return series_pow(C(s), 2) - named("alpha2", s) * Rational(128); }, 2, p);
  });
  put(b, "d", 8, [](size_t p) { return at_power([](size_t s) { return named("Delta2", s) * Rational(64); }, 2, p); });
  put_q(b);
  return b;
}

BindingSet make_level9() {
  BindingSet b{"level9", 9, {}, {}};
  for (int k : kEisenstein)
    put(b, "E" + std::to_string(k), k, [k](size_t p) { return at_power([k](size_t s) { return eisenstein(k, s); }, 3, p); });
  put(b, "d1", 12, [](size_t p) { return at_power([](size_t s) { return named("Delta1", s) * Rational(216); }, 3, p); });
  // d9 = 3 Delta9^(1/3), so d9^(3) = 3 Delta9
  put(b, "d9", 4, [](size_t p) { return named("Delta9", p) * Rational(3); });
  put_q(b);
  return b;
}

BindingSet make_raw() {
  BindingSet b{"raw", 0, {}, {}};
  std::vector<std::string> names{"E2", "F3", "F4"};
  for (int k : kEisenstein) names.push_back("E" + std::to_string(k));
  for (int N : {2, 3, 4, 6, 8, 9}) names.push_back("C" + std::to_string(N));
  for (int N : {2, 3, 4, 6, 8, 9}) names.push_back("alpha" + std::to_string(N));
  for (int N : {1, 2, 3, 4, 6, 8, 9}) names.push_back("Delta" + std::to_string(N));
  for (const auto& n : names) {
    int w = named_series(n, 2).weight;
    put(b, n, w, [n](size_t p) { return named(n, p); });
  }
  put_q(b);
  return b;
}

}  // namespace

const BindingSet& binding_set(const std::string& name) {
  static const std::map<std::string, BindingSet> sets = [] {
    std::map<std::string, BindingSet> m;
    for (auto b : {make_level1(), make_level2(), make_level3(), make_level4(), make_level6(), make_level8(),
                   make_level9(), make_raw()})
      m.emplace(b.name, b);
    return m;
  }();
  auto it = sets.find(name);
  if (it == sets.end()) throw DomainError("unknown binding set '" + name + "'");
  return it->second;
}

std::vector<std::string> binding_set_names() {
  return {"level1", "level2", "level3", "level4", "level6", "level8", "level9", "raw"};
}

std::vector<Identity> binding_identities() {
  return {
      {"E8", "E8", "E4^2"},
      {"E10", "E10", "E4*E6"},
      {"E14", "E14", "E4^2*E6"},
      {"level2 H", "C2^4+18*8*Delta2", "E4*E4 sub(2)"},
      {"level2 I", "(C2^4-81*8*Delta2)*C2^2", "E6*E6 sub(2)"},
      {"level3 I", "(C3^3+64*3*Delta3)*C3", "E4*E4 sub(3)"},
      {"level6 C", "(C2+3*C2 sub(3))/4", "F3*F3 sub(2)"},
      {"level6 H", "(F3*F3 sub(2))^2+6*2*Delta6", "C2*C2 sub(3)"},
      {"level6 I", "(F3*F3 sub(2))^2-27*2*Delta6", "((C3-3*C3 sub(2))/(-2))*(4*C3 sub(2)-3*C3)"},
      {"level6 J", "(F3*F3 sub(2))^2-50*2*Delta6", "((-C2+7*C2 sub(3))/6)*((-7*C2+9*C2 sub(3))/2)"},
      {"level9 d1", "216*Delta1 sub(3)", "((E4^3-E6^2)/8) sub(3)"},
  };
}

std::optional<size_t> check_identity(const Identity& id, size_t prec) {
  const BindingSet& raw = binding_set("raw");
  KSeries a = evaluate(parse(id.lhs), raw, prec), b = evaluate(parse(id.rhs), raw, prec);
  size_t i = a.first_difference(b, prec);
  if (i == prec) return std::nullopt;
  return i;
}

std::optional<int> expression_weight(const ExprPtr& e, const BindingSet& b) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::number:
    case K::var_v:
    case K::sqrt:
      return 0;
    case K::call: return std::nullopt;
    case K::symbol: {
      auto it = b.weights.find(e->name);
      if (it == b.weights.end()) return std::nullopt;
      return it->second;
    }
    case K::add:
    case K::sub: {
      auto l = expression_weight(e->kids[0], b), r = expression_weight(e->kids[1], b);
      if (!l || !r || *l != *r) return std::nullopt;
      return l;
    }
    case K::mul: {
      auto l = expression_weight(e->kids[0], b), r = expression_weight(e->kids[1], b);
      if (!l || !r) return std::nullopt;
      return *l + *r;
    }
    case K::div: {
      auto l = expression_weight(e->kids[0], b), r = expression_weight(e->kids[1], b);
      if (!l || !r || *r != 0) return std::nullopt;
      return l;
    }
    case K::neg:
    case K::pm:
    case K::subst:
      return expression_weight(e->kids[0], b);
    case K::pow: {
      auto w = expression_weight(e->kids[0], b);
      if (!w) return std::nullopt;
      return *w * static_cast<int>(e->exponent);
    }
    case K::equals: return std::nullopt;
  }
  return std::nullopt;
}

// ------------------------------------------------------------ algebra

namespace {

bool is_constant(const RSeries& s) {
  for (size_t i = 1; i < s.prec(); ++i)
    if (s[i] != 0) return false;
  return true;
}

RSeries scaled(const RSeries& s, const Rational& c) {
  RSeries r = s;
  r *= c;
  return r;
}

// Product that skips the convolution when either side is a constant.
RSeries times(const RSeries& a, const RSeries& b) {
  size_t n = std::min(a.prec(), b.prec());
  if (n == 0) return RSeries(0);
  if (is_constant(a)) return scaled(b.truncate(n), a[0]);
  if (is_constant(b)) return scaled(a.truncate(n), b[0]);
  return a * b;
}

void add_into(Alg& acc, unsigned m, const RSeries& s) {
  auto it = acc.find(m);
  if (it == acc.end())
    acc.emplace(m, s);
  else
    it->second += s;
}

void prune(Alg& a) {
  for (auto it = a.begin(); it != a.end();)
    it = it->second.is_zero() ? a.erase(it) : std::next(it);
}

size_t alg_prec(const Alg& a, size_t fallback) {
  size_t p = fallback;
  for (auto& [m, s] : a) p = std::min(p, s.prec());
  return p;
}

bool is_choice(const Generator& g) { return g.kind != Generator::Kind::radical; }

}  // namespace

Alg Evaluator::constant(const Rational& c, size_t prec) const {
  Alg a;
  if (c != 0) a.emplace(0u, RSeries::constant(c, prec));
  return a;
}

Alg Evaluator::mul(const Alg& a, const Alg& b) const {
  Alg out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      RSeries prod = times(ca, cb);
      unsigned common = ma & mb;
      Alg term{{ma ^ mb, prod}};
      for (unsigned i = 0; common; ++i) {
        if (!(common & (1u << i))) continue;
        common &= ~(1u << i);
        Alg sq;
        for (const auto& [mx, x] : ctx.gens[i].square) sq.emplace(mx, RSeries::constant(x, prod.prec()));
        term = mul(term, sq);
      }
      for (auto& [m, s] : term) add_into(out, m, s);
    }
  prune(out);
  return out;
}

Alg Evaluator::eval(const ExprPtr& e, size_t prec) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::number: return constant(Rational(e->value), prec);
    case K::symbol: {
      if (!bindings || !bindings->has(e->name))
        throw DomainError("unbound symbol '" + e->name + "'" + (bindings ? " in " + bindings->name : ""));
      RSeries s = bindings->symbols.at(e->name)(prec);
      Alg a;
      if (!s.is_zero()) a.emplace(0u, s);
      return a;
    }
    case K::var_v: {
      if (ctx.v_index < 0) {
        if (!ctx.v_square) throw DomainError("v used without its defining relation");
        Generator g{Generator::Kind::var_v, {{0u, *ctx.v_square}}, "v"};
        ctx.gens.push_back(g);
        ctx.v_index = static_cast<int>(ctx.gens.size()) - 1;
      }
      Alg a;
      a.emplace(1u << ctx.v_index, RSeries::constant(Rational(1), prec));
      return a;
    }
    case K::call: {
      if (!call) throw DomainError("coefficient function '" + e->name + "' outside a relation");
      return call(e->name, e->exponent);
    }
    case K::add:
    case K::sub: {
      Alg l = eval(e->kids[0], prec), r = eval(e->kids[1], prec);
      for (auto& [m, s] : r) add_into(l, m, e->kind == K::add ? s : -s);
      prune(l);
      return l;
    }
    case K::mul: return mul(eval(e->kids[0], prec), eval(e->kids[1], prec));
    case K::div: {
      Alg l = eval(e->kids[0], prec), r = eval(e->kids[1], prec);
      if (r.size() != 1 || r.begin()->first != 0 || !is_constant(r.begin()->second))
        throw DomainError("division only by a nonzero rational constant");
      Rational c = r.begin()->second[0];
      for (auto& [m, s] : l) s *= Rational(1) / c;
      return l;
    }
    case K::neg: {
      Alg a = eval(e->kids[0], prec);
      for (auto& [m, s] : a) s = -s;
      return a;
    }
    case K::pow: {
      Alg base = eval(e->kids[0], prec);
      Alg result = constant(Rational(1), prec);
      long n = e->exponent;
      while (n > 0) {
        if (n & 1) result = mul(result, base);
        n >>= 1;
        if (n) base = mul(base, base);
      }
      return result;
    }
    case K::sqrt: {
      Alg x = eval(e->kids[0], prec);
      std::map<unsigned, Rational> sq;
      for (auto& [m, s] : x) {
        if (!is_constant(s)) throw DomainError("sqrt of a non-constant series");
        if (s[0] != 0) sq[m] = s[0];
      }
      if (sq.empty()) return {};
      if (sq.size() == 1 && sq.begin()->first == 0) {
        const Rational& c = sq.begin()->second;
        if (c < 0) throw DomainError("sqrt of a negative number");
        if (mpz_perfect_square_p(c.get_num_mpz_t()) && mpz_perfect_square_p(c.get_den_mpz_t())) {
          Integer n, d;
          mpz_sqrt(n.get_mpz_t(), c.get_num_mpz_t());
          mpz_sqrt(d.get_mpz_t(), c.get_den_mpz_t());
          return constant(make_rational(n, d), prec);
        }
      }
      std::string key = print(e->kids[0]);
      auto it = ctx.radical_index.find(key);
      int idx;
      if (it != ctx.radical_index.end()) {
        idx = it->second;
      } else {
        if (ctx.gens.size() >= 30) throw CapabilityError("too many generators");
        ctx.gens.push_back({Generator::Kind::radical, sq, key});
        idx = static_cast<int>(ctx.gens.size()) - 1;
        ctx.radical_index[key] = idx;
      }
      Alg a;
      a.emplace(1u << idx, RSeries::constant(Rational(1), prec));
      return a;
    }
    case K::pm: {
      Alg inner = eval(e->kids[0], prec);
      if (ctx.gens.size() >= 30) throw CapabilityError("too many generators");
      ctx.gens.push_back({Generator::Kind::sign, {{0u, Rational(1)}}, "pm"});
      unsigned bit = 1u << (ctx.gens.size() - 1);
      Alg out;
      for (auto& [m, s] : inner) out.emplace(m | bit, s);
      return out;
    }
    case K::subst: {
      long h = e->exponent;
      size_t base = (prec + h - 1) / h;
      Alg inner = eval(e->kids[0], base);
      Alg out;
      for (auto& [m, s] : inner) out.emplace(m, series_substitute_expand(s, h).truncate(prec));
      return out;
    }
    case K::equals: throw DomainError("'=' is only allowed in relations");
  }
  throw DomainError("bad expression node");
}

Evaluated evaluate_alg(const ExprPtr& e, const BindingSet& b, size_t prec, const std::optional<Rational>& v_square,
                       const std::string& multiplier) {
  Evaluator ev;
  ev.bindings = &b;
  ev.ctx.v_square = v_square;
  Alg value = ev.eval(e, prec);
  if (!multiplier.empty() && multiplier != "1") {
    RSeries m = named_series(multiplier, prec).series;
    for (auto& [mask, s] : value) s = s * m;
  }
  Evaluated out;
  out.ctx = ev.ctx;
  out.value = std::move(value);
  out.prec = prec;
  int choices = 0;
  for (auto& g : out.ctx.gens)
    if (is_choice(g)) ++choices;
  out.conjugates = 1 << choices;
  return out;
}

namespace {

// sum over conjugates of a single component
bool component_survives(const AlgContext& ctx, unsigned m, bool& needs_radical) {
  needs_radical = false;
  bool has_choice = false, has_radical = false, has_sign = false;
  for (unsigned i = 0; i < ctx.gens.size(); ++i) {
    if (!(m & (1u << i))) continue;
    if (ctx.gens[i].kind == Generator::Kind::radical)
      has_radical = true;
    else
      has_choice = true;
    if (ctx.gens[i].kind == Generator::Kind::sign) has_sign = true;
  }
  if (m == 0) return true;
  if (has_sign) return false;  // cancels against the opposite sign
  if (has_radical) {
    needs_radical = true;
    return false;
  }
  (void)has_choice;
  return false;  // odd in v
}

}  // namespace

RSeries conjugate_sum(const Evaluated& ev) {
  RSeries out(alg_prec(ev.value, ev.prec));
  for (const auto& [m, s] : ev.value) {
    bool rad = false;
    if (component_survives(ev.ctx, m, rad)) {
      out += scaled(s, Rational(ev.conjugates));
    } else if (rad) {
      throw CapabilityError("conjugate sum leaves an unpaired radical");
    }
  }
  return out;
}

std::vector<Rational> power_sums(const Evaluated& ev, size_t n) {
  Evaluator e;
  e.ctx = ev.ctx;
  Alg a;
  for (const auto& [m, s] : ev.value) {
    if (n >= s.prec()) throw PrecisionError("coefficient beyond evaluated precision");
    if (s[n] != 0) a.emplace(m, RSeries::constant(s[n], 1));
  }
  std::vector<Rational> out;
  Alg pw = e.constant(Rational(1), 1);
  for (int j = 1; j <= ev.conjugates; ++j) {
    pw = e.mul(pw, a);
    Rational sum = 0;
    for (const auto& [m, s] : pw) {
      bool rad = false;
      if (component_survives(ev.ctx, m, rad))
        sum += s[0] * ev.conjugates;
      else if (rad)
        throw CapabilityError("power sum leaves an unpaired radical");
    }
    out.push_back(sum);
  }
  return out;
}

RatPoly conjugate_charpoly(const Evaluated& ev, size_t n) {
  auto p = power_sums(ev, n);
  const int c = ev.conjugates;
  // Newton: k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i
  std::vector<Rational> e(c + 1);
  e[0] = 1;
  for (int k = 1; k <= c; ++k) {
    Rational s = 0;
    for (int i = 1; i <= k; ++i) s += ((i % 2) ? 1 : -1) * e[k - i] * p[i - 1];
    e[k] = s / k;
  }
  std::vector<Rational> coeffs(c + 1);
  for (int k = 0; k <= c; ++k) coeffs[c - k] = (k % 2 ? -1 : 1) * e[k];
  return RatPoly(coeffs);
}

KSeries conjugate_series(const Evaluated& ev, const std::vector<int>& signs) {
  const auto& gens = ev.ctx.gens;
  std::vector<QuadExt> val(gens.size());
  size_t next = 0;
  try {
    for (size_t i = 0; i < gens.size(); ++i) {
      const Generator& g = gens[i];
      int sgn = 1;
      if (is_choice(g)) {
        if (next >= signs.size()) throw DomainError("not enough sign choices");
        sgn = signs[next++];
      }
      if (g.kind == Generator::Kind::sign) {
        val[i] = QuadExt(static_cast<long>(sgn));
        continue;
      }
      QuadExt x;
      for (const auto& [m, c] : g.square) {
        QuadExt t(c);
        for (size_t j = 0; j < i; ++j)
          if (m & (1u << j)) t = t * val[j];
        x = x + t;
      }
      if (!x.is_rational()) throw CapabilityError("eigenvalue field of degree > 2 (nested radical)");
      QuadExt r = QuadExt::sqrt_of(x.rat());
      val[i] = sgn > 0 ? r : -r;
    }
    size_t n = alg_prec(ev.value, ev.prec);
    std::vector<QuadExt> out(n);
    for (const auto& [m, s] : ev.value) {
      QuadExt f(1L);
      for (size_t j = 0; j < gens.size(); ++j)
        if (m & (1u << j)) f = f * val[j];
      for (size_t k = 0; k < n; ++k)
        if (s[k] != 0) out[k] = out[k] + f * QuadExt(s[k]);
    }
    return KSeries(std::move(out));
  } catch (const FieldMismatchError&) {
    throw CapabilityError("eigenvalue field of degree > 2 (two independent radicals)");
  }
}

std::vector<KSeries> all_conjugates(const Evaluated& ev) {
  int choices = 0;
  for (auto& g : ev.ctx.gens)
    if (is_choice(g)) ++choices;
  std::vector<KSeries> out;
  for (unsigned bits = 0; bits < (1u << choices); ++bits) {
    std::vector<int> signs(choices);
    for (int i = 0; i < choices; ++i) signs[i] = (bits >> i) & 1u ? -1 : 1;
    out.push_back(conjugate_series(ev, signs));
  }
  return out;
}

KSeries evaluate(const ExprPtr& e, const BindingSet& b, size_t prec) {
  Evaluated ev = evaluate_alg(e, b, prec);
  if (ev.conjugates != 1) throw DomainError("evaluate: expression has conjugates; use all_conjugates");
  return conjugate_series(ev, {});
}

RatPoly evaluate_poly(const ExprPtr& e) {
  using K = Expr::Kind;
  switch (e->kind) {
    case K::number: return RatPoly({Rational(e->value)});
    case K::symbol:
      if (e->name != "X") throw DomainError("polynomial displays use the variable X only");
      return RatPoly({Rational(0), Rational(1)});
    case K::add: return evaluate_poly(e->kids[0]) + evaluate_poly(e->kids[1]);
    case K::sub: return evaluate_poly(e->kids[0]) - evaluate_poly(e->kids[1]);
    case K::mul: return evaluate_poly(e->kids[0]) * evaluate_poly(e->kids[1]);
    case K::neg: return Rational(-1) * evaluate_poly(e->kids[0]);
    case K::div: {
      RatPoly d = evaluate_poly(e->kids[1]);
      if (d.degree() != 0) throw DomainError("division only by a constant");
      return (Rational(1) / d.coeff(0)) * evaluate_poly(e->kids[0]);
    }
    case K::pow: {
      RatPoly r({Rational(1)}), b = evaluate_poly(e->kids[0]);
      for (long i = 0; i < e->exponent; ++i) r = r * b;
      return r;
    }
    default: throw DomainError("unsupported node in a polynomial display");
  }
}

}  // namespace pf::formula
