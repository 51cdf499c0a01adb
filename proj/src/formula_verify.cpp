#include <atomic>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "primforms/formula.hpp"
#include "primforms/hecke.hpp"
#include "primforms/ringspace.hpp"

namespace pf::formula {

// ------------------------------------------------------------ dataset

std::string FormulaEntry::kind() const {
  auto it = notes.find("kind");
  return it == notes.end() ? "set" : it->second;
}

bool FormulaEntry::annotated_typo() const {
  auto it = notes.find("expected");
  return it != notes.end() && it->second == "fail-or-corrected";
}

const FormulaEntry* Dataset::find(const std::string& id) const {
  for (const auto& e : entries)
    if (e.id == id) return &e;
  return nullptr;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// ParseError text without its trailing " at position N"
std::string bare(const ParseError& e) {
  std::string s = e.what();
  auto at = s.rfind(" at position ");
  return at == std::string::npos ? s : s.substr(0, at);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

const std::set<std::string> kKinds{"set", "mean", "halfdiff", "prefix", "charpoly", "relation"};

}  // namespace

Dataset parse_dataset(const std::string& text) {
  Dataset ds;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::set<std::string> ids;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto fail = [&](const std::string& msg, size_t pos = 0) -> void {
      throw ParseError("line " + std::to_string(lineno) + ": " + msg, pos);
    };
    auto f = split(line, '|');
    if (f.size() != 7 && f.size() != 8) fail("expected 7 or 8 '|'-separated fields, got " + std::to_string(f.size()));
    FormulaEntry e;
    e.line = lineno;
    e.id = f[0];
    if (e.id.empty()) fail("empty id");
    if (!ids.insert(e.id).second) fail("duplicate id " + e.id);
    e.group = e.id.substr(0, e.id.find('.'));
    try {
      e.level = std::stoi(f[1]);
      e.weight = std::stoi(f[2]);
    } catch (const std::exception&) {
      fail("level and weight must be integers");
    }
    if (!supported_level(e.level)) fail("unsupported level " + f[1]);
    e.cls = f[3];
    e.multiplier = f[4];
    e.text = f[5];
    e.bindings = f[6];
    if (f.size() == 8 && !f[7].empty()) {
      for (const auto& item : split(f[7], ';')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
          e.notes[item] = "";
        else
          e.notes[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
      }
    }
    if (!kKinds.count(e.kind())) fail("unknown kind '" + e.kind() + "'");
    try {
      binding_set(e.bindings);
    } catch (const DomainError& err) {
      fail(err.what());
    }
    try {
      e.expr = parse(e.text);
    } catch (const ParseError& err) {
      // a typo entry may be unparseable as printed; its corrected text must parse
      if (!e.annotated_typo() || !e.notes.count("corrected"))
        throw ParseError("line " + std::to_string(lineno) + ": " + bare(err), err.position);
      e.notes["literal-error"] = err.what();
    }
    if (e.notes.count("corrected")) {
      try {
        parse(e.notes["corrected"]);
      } catch (const ParseError& err) {
        throw ParseError("line " + std::to_string(lineno) + ": corrected: " + bare(err), err.position);
      }
    }
    ds.entries.push_back(std::move(e));
  }
  return ds;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open dataset " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

std::string default_dataset_path() {
  if (const char* env = std::getenv("PRIMFORMS_DATASET"); env && *env) return env;
#ifdef PRIMFORMS_DATA_DIR
  return std::string(PRIMFORMS_DATA_DIR) + "/formulas.txt";
#else
  return "data/formulas.txt";
#endif
}

std::string status_name(EntryReport::Status s) {
  switch (s) {
    case EntryReport::Status::pass: return "pass";
    case EntryReport::Status::fail: return "fail";
    case EntryReport::Status::fail_annotated: return "fail-annotated";
    case EntryReport::Status::unsupported: return "unsupported";
  }
  return "?";
}

// ------------------------------------------------------------ checks

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
  std::optional<Mismatch> mismatch;
  size_t prec = 0;
  int conjugates = 0;
};

Outcome failed(std::string why) {
  Outcome o;
  o.detail = std::move(why);
  return o;
}

std::optional<Rational> v_square_of(const FormulaEntry& e) {
  auto it = e.notes.find("v2");
  if (it == e.notes.end()) return std::nullopt;
  RatPoly p = evaluate_poly(parse(it->second));
  if (p.degree() > 0) throw DomainError("v2 must be a number");
  return p.coeff(0);
}

int multiplier_weight(const std::string& m) { return m == "1" ? 0 : named_series(m, 2).weight; }

size_t precision_for(const FormulaEntry& e, PrecisionChoice prec_override) {
  return prec_override.fixed ? prec_override.fixed : sturm_precision(e.level, e.weight) + prec_override.margin;
}

Evaluated evaluate_entry(const FormulaEntry& e, size_t prec) {
  return evaluate_alg(e.expr, binding_set(e.bindings), prec, v_square_of(e), e.multiplier);
}

std::string coeff_str(const QuadExt& x) { return x.str(); }

bool agree(const KSeries& a, const KSeries& b, size_t n) {
  return a.prec() >= n && b.prec() >= n && a.agrees_with(b, n);
}

// Rational part of a quadratic pair member.
RSeries rat_part(const KSeries& f, size_t n) {
  RSeries r(n);
  for (size_t i = 0; i < n; ++i) r[i] = f[i].rat();
  return r;
}

KSeries irr_part(const KSeries& f, size_t n) {
  std::vector<QuadExt> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = f[i] - QuadExt(f[i].rat());
  return KSeries(std::move(out));
}

std::vector<Eigenform> pair_members(const std::vector<Eigenform>& forms) {
  std::vector<Eigenform> out;
  for (const auto& f : forms)
    if (f.field == Eigenform::Field::quadratic && f.conjugate == 0) out.push_back(f);
  return out;
}

Outcome check_weight(const FormulaEntry& e) {
  auto w = expression_weight(e.expr, binding_set(e.bindings));
  if (!w) return failed("expression is not homogeneous in the binding weights");
  int total = *w + multiplier_weight(e.multiplier);
  if (total != e.weight)
    return failed("weight bookkeeping gives " + std::to_string(total) + ", entry says " + std::to_string(e.weight));
  Outcome o;
  o.ok = true;
  return o;
}

// Sum of set-entry conjugates in the entry's group against the class size.
Outcome check_coverage(const FormulaEntry& e, const Dataset& ds, int conjugates) {
  Outcome o;
  o.ok = true;
  if (e.notes.count("alt") || e.notes.count("contains")) return o;
  int total = 0;
  for (const auto& other : ds.entries) {
    if (other.group != e.group || other.kind() != "set" || other.notes.count("alt")) continue;
    if (other.id == e.id) {
      total += conjugates;
      continue;
    }
    ExprPtr x = other.expr;
    if (!x && other.notes.count("corrected")) x = parse(other.notes.at("corrected"));
    if (!x) continue;
    total += (1 << count_pm(x)) * (uses_v(x) ? 2 : 1);
  }
  int dim = class_dimension(e.level, e.weight, e.cls);
  if (total != dim)
    return failed("coverage: group lists " + std::to_string(total) + " forms, class has " + std::to_string(dim));
  return o;
}

Outcome check_set_trace(const FormulaEntry& e, const Evaluated& ev, const std::vector<Eigenform>& forms,
                        size_t prec) {
  RSeries sum = conjugate_sum(ev);
  std::vector<std::pair<RSeries, const Eigenform*>> targets;
  for (const auto& f : forms)
    if (f.count() == ev.conjugates && f.field == Eigenform::Field::charpoly_only)
      targets.push_back({f.trace, &f});
  if (class_dimension(e.level, e.weight, e.cls) == ev.conjugates)
    targets.push_back({trace_series(e.level, e.weight, e.cls, prec), nullptr});
  if (targets.empty()) return failed("no orbit or class of size " + std::to_string(ev.conjugates) + " to compare with");
  Outcome best = failed("conjugate sum matches no orbit trace");
  size_t best_at = 0;
  for (const auto& [trace, form] : targets) {
    size_t n = std::min(prec, trace.prec());
    size_t at = sum.first_difference(trace, n);
    if (at < n) {
      if (at >= best_at) {
        best_at = at;
        best.mismatch = Mismatch{at, to_string(trace[at]), to_string(sum[at])};
      }
      continue;
    }
    // second invariant: the characteristic polynomial of a_q0
    long q0 = first_good_prime(e.level);
    RatPoly mine = conjugate_charpoly(ev, q0);
    RatPoly theirs = form && form->charpolys.count(q0)
                         ? RatPoly::from_int(form->charpolys.at(q0))
                         : RatPoly::from_int(class_charpoly(e.level, e.weight, e.cls, q0));
    if (!(mine == theirs)) {
      best = failed("traces agree but charpolys of a_" + std::to_string(q0) + " differ");
      best.mismatch = Mismatch{static_cast<size_t>(q0), theirs.str(), mine.str()};
      return best;
    }
    Outcome o;
    o.ok = true;
    o.detail = "conjugate sum equals the orbit trace; charpoly of a_" + std::to_string(q0) + " agrees";
    return o;
  }
  return best;
}

Outcome check_set(const FormulaEntry& e, const Dataset& ds, PrecisionChoice prec_override) {
  Outcome w = check_weight(e);
  if (!w.ok) return w;
  size_t prec = precision_for(e, prec_override);
  Evaluated ev = evaluate_entry(e, prec);
  Outcome cov = check_coverage(e, ds, ev.conjugates);
  if (!cov.ok) return cov;
  auto forms = eigen_decompose(e.level, e.weight, e.cls, prec);

  std::vector<KSeries> conj;
  bool pointwise = true;
  try {
    conj = all_conjugates(ev);
  } catch (const CapabilityError&) {
    pointwise = false;
  }
  bool have_coeffs = false;
  for (const auto& f : forms)
    if (f.field != Eigenform::Field::charpoly_only) have_coeffs = true;

  Outcome o;
  if (pointwise && have_coeffs) {
    std::vector<bool> used(forms.size(), false);
    for (const auto& c : conj) {
      bool found = false;
      size_t best_at = 0;
      std::optional<Mismatch> mm;
      for (size_t j = 0; j < forms.size(); ++j) {
        const auto& f = forms[j];
        if (f.field == Eigenform::Field::charpoly_only) continue;
        if (agree(c, f.coeffs, prec)) {
          if (!used[j]) {
            used[j] = found = true;
            break;
          }
          continue;
        }
        size_t at = c.first_difference(f.coeffs, std::min({prec, c.prec(), f.coeffs.prec()}));
        if (!mm || at > best_at) {
          best_at = at;
          mm = Mismatch{at, coeff_str(f.coeffs[at]), coeff_str(c[at])};
        }
      }
      if (!found) {
        Outcome bad = failed(mm ? "a conjugate matches no computed newform" : "conjugates coincide");
        bad.mismatch = mm;
        bad.prec = prec;
        bad.conjugates = ev.conjugates;
        // a degree > 2 orbit may still be the right comparison
        bool orbit = false;
        for (const auto& f : forms)
          if (f.field == Eigenform::Field::charpoly_only && f.count() == ev.conjugates) orbit = true;
        if (!orbit) return bad;
        o = check_set_trace(e, ev, forms, prec);
        o.prec = prec;
        o.conjugates = ev.conjugates;
        return o;
      }
    }
    o.ok = true;
    o.detail = std::to_string(conj.size()) + " conjugate(s) match computed newforms";
  } else {
    o = check_set_trace(e, ev, forms, prec);
  }
  o.prec = prec;
  o.conjugates = ev.conjugates;
  return o;
}

RSeries single_rational(const Evaluated& ev) {
  RSeries s = conjugate_sum(ev);
  s *= Rational(1, ev.conjugates);
  return s;
}

Outcome check_mean(const FormulaEntry& e, PrecisionChoice prec_override) {
  Outcome w = check_weight(e);
  if (!w.ok) return w;
  size_t prec = precision_for(e, prec_override);
  RSeries m = single_rational(evaluate_entry(e, prec));
  auto pairs = pair_members(eigen_decompose(e.level, e.weight, e.cls, prec));
  Outcome best = failed("no quadratic pair has this mean");
  size_t best_at = 0;
  for (const auto& f : pairs) {
    RSeries r = rat_part(f.coeffs, prec);
    size_t at = m.first_difference(r, prec);
    if (at == prec) {
      Outcome o;
      o.ok = true;
      o.detail = "mean of the pair over Q(sqrt(" + f.radicand.get_str() + "))";
      o.prec = prec;
      return o;
    }
    if (at >= best_at) {
      best_at = at;
      best.mismatch = Mismatch{at, to_string(r[at]), to_string(m[at])};
    }
  }
  return best;
}

Outcome check_halfdiff(const FormulaEntry& e, PrecisionChoice prec_override) {
  Outcome w = check_weight(e);
  if (!w.ok) return w;
  size_t prec = precision_for(e, prec_override);
  Evaluated ev = evaluate_entry(e, prec);
  if (ev.conjugates != 1) return failed("a half difference must not carry sign markers");
  KSeries phi = conjugate_series(ev, {});
  auto pairs = pair_members(eigen_decompose(e.level, e.weight, e.cls, prec));
  Outcome best = failed("no quadratic pair has this half difference");
  size_t best_at = 0;
  for (const auto& f : pairs) {
    KSeries d = irr_part(f.coeffs, prec);
    KSeries nd = -d;
    if (agree(phi, d, prec) || agree(phi, nd, prec)) {
      Outcome o;
      o.ok = true;
      o.detail = "half difference of the pair over Q(sqrt(" + f.radicand.get_str() + "))";
      o.prec = prec;
      return o;
    }
    size_t at = std::max(phi.first_difference(d, prec), phi.first_difference(nd, prec));
    if (at >= best_at) {
      best_at = at;
      best.mismatch = Mismatch{at, d[at].str(), phi[at].str()};
    }
  }
  return best;
}

Outcome check_prefix(const FormulaEntry& e, PrecisionChoice prec_override) {
  auto it = e.notes.find("order");
  if (it == e.notes.end()) return failed("prefix entries need order=");
  size_t order = std::stoul(it->second);
  size_t prec = std::max(order, precision_for(e, prec_override));
  RSeries p = single_rational(evaluate_entry(e, order));
  auto pairs = pair_members(eigen_decompose(e.level, e.weight, e.cls, prec));
  Outcome best = failed("no quadratic pair mean starts this way");
  size_t best_at = 0;
  for (const auto& f : pairs) {
    RSeries r = rat_part(f.coeffs, order);
    size_t at = p.first_difference(r, order);
    if (at == order) {
      Outcome o;
      o.ok = true;
      o.detail = "first " + std::to_string(order) + " coefficients of a pair mean";
      o.prec = order;
      return o;
    }
    if (at >= best_at) {
      best_at = at;
      best.mismatch = Mismatch{at, to_string(r[at]), to_string(p[at])};
    }
  }
  return best;
}

std::vector<std::string> id_list(const FormulaEntry& e) {
  std::vector<std::string> out;
  auto it = e.notes.find("of");
  if (it == e.notes.end()) return out;
  for (auto& s : split(it->second, ','))
    if (!s.empty()) out.push_back(s);
  return out;
}

const FormulaEntry& referenced(const Dataset& ds, const std::string& id) {
  const FormulaEntry* r = ds.find(id);
  if (!r) throw DomainError("unknown referenced entry " + id);
  if (!r->expr) throw DomainError("referenced entry " + id + " does not parse");
  return *r;
}

Outcome check_charpoly(const FormulaEntry& e, const Dataset& ds) {
  auto it = e.notes.find("n");
  if (it == e.notes.end()) return failed("charpoly entries need n=");
  long n = std::stol(it->second);
  RatPoly shown = evaluate_poly(e.expr);
  RatPoly computed = RatPoly::from_int(class_charpoly(e.level, e.weight, e.cls, n));
  if (!(shown == computed)) {
    Outcome o = failed("class charpoly of a_" + std::to_string(n) + " differs");
    o.mismatch = Mismatch{static_cast<size_t>(n), computed.str(), shown.str()};
    return o;
  }
  auto of = id_list(e);
  if (!of.empty()) {
    RatPoly prod({Rational(1)});
    for (const auto& id : of) {
      const FormulaEntry& r = referenced(ds, id);
      prod = prod * conjugate_charpoly(evaluate_entry(r, n + 1), n);
    }
    if (!(prod == shown)) {
      Outcome o = failed("charpoly of the listed set elements differs");
      o.mismatch = Mismatch{static_cast<size_t>(n), shown.str(), prod.str()};
      return o;
    }
  }
  Outcome o;
  o.ok = true;
  o.detail = of.empty() ? "matches the class charpoly" : "matches the class charpoly and the listed set";
  o.prec = cell_precision(e.level, e.weight);
  return o;
}

void max_call(const ExprPtr& x, long& m) {
  if (x->kind == Expr::Kind::call) m = std::max(m, x->exponent);
  for (auto& k : x->kids) max_call(k, m);
}

bool has_sign_bit(const AlgContext& ctx, unsigned mask) {
  for (unsigned i = 0; i < ctx.gens.size(); ++i)
    if ((mask & (1u << i)) && ctx.gens[i].kind == Generator::Kind::sign) return true;
  return false;
}

std::string alg_str(const AlgContext& ctx, const Alg& a) {
  if (a.empty()) return "0";
  std::string s;
  for (const auto& [m, x] : a) {
    if (!s.empty()) s += " + ";
    s += "(" + to_string(x[0]) + ")";
    for (unsigned i = 0; i < ctx.gens.size(); ++i)
      if (m & (1u << i)) {
        const auto& g = ctx.gens[i];
        s += g.kind == Generator::Kind::sign ? "*pm" : g.kind == Generator::Kind::var_v ? "*v" : "*sqrt(" + g.key + ")";
      }
  }
  return s;
}

Outcome check_relation(const FormulaEntry& e, const Dataset& ds) {
  auto of = id_list(e);
  if (of.size() != 1) return failed("relation entries need exactly one of=");
  const FormulaEntry& r = referenced(ds, of[0]);
  if (e.expr->kind != Expr::Kind::equals) return failed("relation entries need '='");
  long top = 1;
  max_call(e.expr, top);
  Evaluated ref = evaluate_entry(r, static_cast<size_t>(top) + 1);

  Evaluator ev;
  ev.bindings = &binding_set(r.bindings);
  ev.ctx = ref.ctx;
  if (!ev.ctx.v_square) ev.ctx.v_square = v_square_of(e);
  ev.call = [&](const std::string& name, long n) {
    Alg out;
    for (const auto& [m, s] : ref.value) {
      if (s[n] == 0) continue;
      bool sign = has_sign_bit(ref.ctx, m);
      if ((name == "s" && sign) || (name == "ph" && !sign)) continue;
      out.emplace(m, RSeries::constant(s[n], 1));
    }
    return out;
  };
  Alg first = ev.eval(e.expr->kids[0], 1);
  for (size_t i = 1; i < e.expr->kids.size(); ++i) {
    Alg other = ev.eval(e.expr->kids[i], 1);
    Alg diff = first;
    for (auto& [m, s] : other) {
      auto it = diff.find(m);
      if (it == diff.end())
        diff.emplace(m, -s);
      else
        it->second -= s;
    }
    bool zero = true;
    for (auto& [m, s] : diff)
      if (!s.is_zero()) zero = false;
    if (!zero) {
      Outcome o = failed("side " + std::to_string(i + 1) + " differs from side 1");
      o.mismatch = Mismatch{i, alg_str(ev.ctx, first), alg_str(ev.ctx, other)};
      return o;
    }
  }
  Outcome o;
  o.ok = true;
  o.detail = "holds for every conjugate of " + r.id;
  o.prec = static_cast<size_t>(top) + 1;
  return o;
}

Outcome check(const FormulaEntry& e, const Dataset& ds, PrecisionChoice prec_override) {
  std::string k = e.kind();
  if (k == "set") return check_set(e, ds, prec_override);
  if (k == "mean") return check_mean(e, prec_override);
  if (k == "halfdiff") return check_halfdiff(e, prec_override);
  if (k == "prefix") return check_prefix(e, prec_override);
  if (k == "charpoly") return check_charpoly(e, ds);
  if (k == "relation") return check_relation(e, ds);
  return failed("unknown kind " + k);
}

FormulaEntry corrected_variant(const FormulaEntry& e) {
  FormulaEntry c = e;
  if (auto it = e.notes.find("corrected"); it != e.notes.end()) {
    c.text = it->second;
    c.expr = parse(c.text);
  }
  if (auto it = e.notes.find("corrected-weight"); it != e.notes.end()) c.weight = std::stoi(it->second);
  return c;
}

}  // namespace

EntryReport verify_entry(const FormulaEntry& entry, const Dataset& ds, PrecisionChoice prec_override) {
  EntryReport r;
  r.id = entry.id;
  auto run = [&](const FormulaEntry& e) -> Outcome {
    if (!e.expr) return failed("does not parse: " + e.notes.at("literal-error"));
    try {
      return check(e, ds, prec_override);
    } catch (const CapabilityError&) {
      throw;
    } catch (const std::exception& ex) {
      return failed(ex.what());
    }
  };
  try {
    Outcome lit = run(entry);
    r.literal_pass = lit.ok;
    r.precision = lit.prec;
    r.conjugates = lit.conjugates;
    if (lit.ok) {
      r.status = EntryReport::Status::pass;
      r.detail = lit.detail;
      return r;
    }
    r.mismatch = lit.mismatch;
    r.detail = lit.detail;
    r.status = EntryReport::Status::fail;
    if (entry.annotated_typo()) {
      Outcome cor = run(corrected_variant(entry));
      r.corrected_pass = cor.ok;
      r.detail = "literal: " + lit.detail + "; corrected: " + (cor.ok ? "pass" : cor.detail);
      if (cor.ok) {
        r.status = EntryReport::Status::fail_annotated;
        r.precision = cor.prec;
        r.conjugates = cor.conjugates;
      }
    }
  } catch (const CapabilityError& ex) {
    r.status = EntryReport::Status::unsupported;
    r.detail = ex.what();
  }
  return r;
}

VerifyReport verify_dataset(const Dataset& ds, const std::vector<std::string>& only, PrecisionChoice prec_override,
                            unsigned threads) {
  std::vector<const FormulaEntry*> todo;
  for (const auto& e : ds.entries) {
    if (!only.empty()) {
      bool hit = false;
      for (const auto& o : only)
        if (e.id == o || e.group == o) hit = true;
      if (!hit) continue;
    }
    todo.push_back(&e);
  }
  VerifyReport rep;
  rep.entries.resize(todo.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<size_t>(todo.size(), 1));
  // biggest weights first so the slow cells start early
  std::vector<size_t> order(todo.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return todo[a]->weight > todo[b]->weight; });
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < order.size();) {
      size_t j = order[i];
      rep.entries[j] = verify_entry(*todo[j], ds, prec_override);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& r : rep.entries) {
    switch (r.status) {
      case EntryReport::Status::pass: ++rep.pass; break;
      case EntryReport::Status::fail: ++rep.fail; break;
      case EntryReport::Status::fail_annotated: ++rep.fail_annotated; break;
      case EntryReport::Status::unsupported: ++rep.unsupported; break;
    }
  }
  return rep;
}

std::string report_json_line(const EntryReport& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["status"] = status_name(r.status);
  j["detail"] = r.detail;
  j["precision"] = r.precision;
  j["conjugates"] = r.conjugates;
  j["literal_pass"] = r.literal_pass;
  if (r.corrected_pass) j["corrected_pass"] = *r.corrected_pass;
  if (r.mismatch) j["mismatch"] = {{"index", r.mismatch->index}, {"expected", r.mismatch->expected}, {"got", r.mismatch->got}};
  return j.dump();
}

}  // namespace pf::formula
