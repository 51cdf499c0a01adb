#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "primforms/exactnum.hpp"
#include "primforms/qseries.hpp"

namespace pf::formula {

// ------------------------------------------------------------ expressions

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    number,  // value
    symbol,  // name
    var_v,   // the bound variable v (v^2 = m)
    call,    // name(arg): a(n), s(n), ph(n)
    add,
    sub,
    mul,
    div,
    neg,
    pow,     // kids[0] ^ exponent
    sqrt,    // sqrt(kids[0])
    pm,      // +-kids[0]
    subst,   // kids[0] with q -> q^exponent
    equals,  // kids[0] = kids[1] (relations only)
  };
  Kind kind = Kind::number;
  Integer value = 0;
  std::string name;
  long exponent = 0;
  std::vector<ExprPtr> kids;
};

// Recursive descent; throws ParseError with the offending position.
ExprPtr parse(const std::string& text);
// Canonical text; parse(print(e)) reproduces e.
std::string print(const ExprPtr& e);
bool same_tree(const ExprPtr& a, const ExprPtr& b);

int count_pm(const ExprPtr& e);
bool uses_v(const ExprPtr& e);

// One expression per choice of each pm sign and of the root of v^2 = m.
// Signs of pm nodes are enumerated in tree order; v becomes +-sqrt(m).
std::vector<ExprPtr> expand_conjugates(const ExprPtr& e, const std::optional<Rational>& v_square);

// ------------------------------------------------------------ bindings

struct BindingSet {
  std::string name;
  int level = 1;
  // symbol -> series at the requested precision
  std::map<std::string, std::function<RSeries(size_t)>> symbols;
  std::map<std::string, int> weights;
  bool has(const std::string& s) const { return symbols.count(s) > 0; }
};

// "level1", "level2", "level3", "level4", "level6", "level8", "level9", "raw"
const BindingSet& binding_set(const std::string& name);
std::vector<std::string> binding_set_names();

// Pairs of expressions (in the "raw" set) that must agree as series.
struct Identity {
  std::string name;
  std::string lhs, rhs;
};
std::vector<Identity> binding_identities();
// First failing index, or nullopt if lhs == rhs to prec.
std::optional<size_t> check_identity(const Identity& id, size_t prec);

// Total modular weight of a homogeneous expression; nullopt when inhomogeneous
// or when a symbol has no weight.
std::optional<int> expression_weight(const ExprPtr& e, const BindingSet& b);

// ------------------------------------------------------------ evaluation

// Element of Q(gens)[[q]]: a sum over masks of series times a product of generators.
// Generators are pm signs (s^2 = 1), the bound variable (v^2 = m) and radicals
// (r^2 = x with x a constant in earlier generators).
struct Generator {
  enum class Kind { sign, var_v, radical };
  Kind kind;
  std::map<unsigned, Rational> square;  // x, a constant in earlier generators
  std::string key;
};

struct AlgContext {
  std::vector<Generator> gens;
  std::optional<Rational> v_square;
  int v_index = -1;
  std::map<std::string, int> radical_index;
};

using Alg = std::map<unsigned, RSeries>;

struct Evaluator {
  const BindingSet* bindings = nullptr;
  AlgContext ctx;
  // a(n), s(n), ph(n) for relations
  std::function<Alg(const std::string&, long)> call;

  Alg eval(const ExprPtr& e, size_t prec);
  Alg mul(const Alg& a, const Alg& b) const;
  Alg constant(const Rational& c, size_t prec) const;
};

// Multiplier times expression, all conjugates at once.
struct Evaluated {
  AlgContext ctx;
  Alg value;
  size_t prec = 0;
  int conjugates = 1;  // 2^(#pm + #v)
};
Evaluated evaluate_alg(const ExprPtr& e, const BindingSet& b, size_t prec,
                       const std::optional<Rational>& v_square = std::nullopt,
                       const std::string& multiplier = "1");

// Sum over all conjugates; rational by symmetry. CapabilityError if a radical
// survives without a sign partner.
RSeries conjugate_sum(const Evaluated& ev);
// Power sums sum_conj a^j of a single coefficient, j = 1..count.
std::vector<Rational> power_sums(const Evaluated& ev, size_t n);
// prod over conjugates of (X - a_n).
RatPoly conjugate_charpoly(const Evaluated& ev, size_t n);

// Single conjugate as a quadratic-coefficient series. signs[i] picks the sign of
// the i-th pm/v choice (in generator order). CapabilityError beyond degree 2.
KSeries conjugate_series(const Evaluated& ev, const std::vector<int>& signs);
// Every conjugate in sign-enumeration order.
std::vector<KSeries> all_conjugates(const Evaluated& ev);

// Single-conjugate evaluation of a pm/v-free expression.
KSeries evaluate(const ExprPtr& e, const BindingSet& b, size_t prec);
// Polynomial in X (charpoly displays).
RatPoly evaluate_poly(const ExprPtr& e);

// ------------------------------------------------------------ dataset

struct FormulaEntry {
  std::string id;
  std::string group;  // id before the first '.'
  int level = 1;
  int weight = 0;
  std::string cls;
  std::string multiplier;  // named series or "1"
  std::string text;
  ExprPtr expr;
  std::string bindings;
  std::map<std::string, std::string> notes;  // annotations
  int line = 0;

  std::string kind() const;
  bool annotated_typo() const;
};

struct Dataset {
  std::vector<FormulaEntry> entries;
  const FormulaEntry* find(const std::string& id) const;
};

// Throws ParseError carrying "line N: ..." on malformed records.
Dataset load_dataset(const std::string& path);
Dataset parse_dataset(const std::string& text);
std::string default_dataset_path();

struct Mismatch {
  size_t index = 0;
  std::string expected, got;
};

struct EntryReport {
  std::string id;
  enum class Status { pass, fail, fail_annotated, unsupported } status = Status::fail;
  std::string detail;
  std::optional<Mismatch> mismatch;
  bool literal_pass = false;
  std::optional<bool> corrected_pass;
  size_t precision = 0;
  int conjugates = 0;
};

std::string status_name(EntryReport::Status s);

// Fixed precision, or the Sturm bound plus a margin.
struct PrecisionChoice {
  size_t fixed = 0;
  size_t margin = 0;
  PrecisionChoice() = default;
  PrecisionChoice(size_t f) : fixed(f) {}  // NOLINT(google-explicit-constructor)
  PrecisionChoice(size_t f, size_t m) : fixed(f), margin(m) {}
};

EntryReport verify_entry(const FormulaEntry& entry, const Dataset& ds, PrecisionChoice prec = {});

struct VerifyReport {
  std::vector<EntryReport> entries;
  int pass = 0, fail = 0, fail_annotated = 0, unsupported = 0;
};
// Runs entries concurrently; output order follows the dataset.
VerifyReport verify_dataset(const Dataset& ds, const std::vector<std::string>& only = {},
                            PrecisionChoice prec = {}, unsigned threads = 0);

std::string report_json_line(const EntryReport& r);

}  // namespace pf::formula
