#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include "primforms/formula.hpp"
#include "primforms/hecke.hpp"

using namespace pf;
using namespace pf::formula;

namespace {

const Dataset& dataset() {
  static Dataset ds = load_dataset(default_dataset_path());
  return ds;
}

const FormulaEntry& entry(const std::string& id) {
  const FormulaEntry* e = dataset().find(id);
  REQUIRE(e != nullptr);
  return *e;
}

}  // namespace

TEST_CASE("parse") {
  auto d = parse("d");
  CHECK(d->kind == Expr::Kind::symbol);
  CHECK(d->name == "d");

  auto p = parse("C^2*H*I*(C^4-1032*C^2*d-43020*d^2)");
  CHECK(p->kind == Expr::Kind::mul);
  CHECK(p->kids[1]->kind == Expr::Kind::sub);
  CHECK(print(p) == "C^2*H*I*(C^4-1032*C^2*d-43020*d^2)");

  auto q = parse("E4^3-(13+pm(sqrt(144169)))*d");
  CHECK(count_pm(q) == 1);
  CHECK_FALSE(uses_v(q));
  CHECK(parse("E4 sub(3)")->kind == Expr::Kind::subst);
  CHECK(parse("a(2)^2 = 40")->kind == Expr::Kind::equals);

  CHECK_THROWS_AS(parse("C2 d"), ParseError);
  CHECK_THROWS_AS(parse("(E4"), ParseError);
  CHECK_THROWS_AS(parse("E4^x"), ParseError);
  try {
    parse("E4*$");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.position == 3);
  }
}

TEST_CASE("print round-trips the whole dataset") {
  int n = 0;
  for (const auto& e : dataset().entries) {
    if (!e.expr) continue;
    CAPTURE(e.id);
    auto again = parse(print(e.expr));
    REQUIRE(same_tree(e.expr, again));
    ++n;
  }
  CHECK(n > 200);
}

TEST_CASE("binding identities") {
  auto ids = binding_identities();
  CHECK(ids.size() >= 10);
  for (const auto& id : ids) {
    CAPTURE(id.name);
    CHECK_FALSE(check_identity(id, 80).has_value());
  }
  CHECK(binding_set_names().size() == 8);
  CHECK_THROWS(binding_set("level5"));
}

TEST_CASE("conjugate expansion") {
  CHECK(expand_conjugates(parse("E4*d"), std::nullopt).size() == 1);
  CHECK(expand_conjugates(parse("E4^3-(13+pm(sqrt(144169)))*d"), std::nullopt).size() == 2);
  auto e = entry("lvl9-P20-star").expr;
  CHECK(expand_conjugates(e, Rational(9 * 158041)).size() == 4);
  CHECK_THROWS_AS(expand_conjugates(e, std::nullopt), DomainError);
}

TEST_CASE("evaluation") {
  KSeries one = evaluate(parse("1"), binding_set("level6"), 10);
  CHECK(one == KSeries::constant(QuadExt(1), 10));

  // the weight-24 level-1 pair
  const auto& p24 = entry("lvl1-P24");
  size_t P = sturm_precision(1, 24);
  Evaluated ev = evaluate_alg(p24.expr, binding_set("level1"), P, std::nullopt, "Delta1");
  CHECK(ev.conjugates == 2);
  auto conj = all_conjugates(ev);
  auto forms = eigen_decompose(1, 24, "", P);
  REQUIRE(conj.size() == 2);
  // sign choice and form order need not line up
  for (size_t i = 0; i < 2; ++i)
    CHECK((conj[i].truncate(P) == forms[0].coeffs.truncate(P) || conj[i].truncate(P) == forms[1].coeffs.truncate(P)));
  CHECK_FALSE(conj[0].truncate(P) == conj[1].truncate(P));

  // four-conjugate sum at (9,20,*) against the class trace
  const auto& e20 = entry("lvl9-P20-star");
  size_t P9 = sturm_precision(9, 20);
  Evaluated ev9 = evaluate_alg(e20.expr, binding_set("level9"), P9, Rational(9 * 158041), "Delta9");
  CHECK(ev9.conjugates == 4);
  CHECK(conjugate_sum(ev9) == trace_series(9, 20, "*", P9));
  CHECK(conjugate_charpoly(ev9, 2) == RatPoly::from_int(class_charpoly(9, 20, "*", 2)));
  CHECK_THROWS_AS(conjugate_series(ev9, {0, 0}), CapabilityError);

  CHECK(expression_weight(parse("C^2*H*I*(C^4-1032*C^2*d-43020*d^2)"), binding_set("level6")) == 20);
  CHECK_FALSE(expression_weight(parse("C+d"), binding_set("level6")).has_value());
}

TEST_CASE("verify single entries") {
  CHECK(verify_entry(entry("lvl1-P12"), dataset()).status == EntryReport::Status::pass);
  CHECK(verify_entry(entry("lvl2-P16-2"), dataset()).status == EntryReport::Status::pass);
  CHECK(verify_entry(entry("lvl6-P42-3.alt"), dataset()).status == EntryReport::Status::pass);
  CHECK(verify_entry(entry("lvl6-P42-3"), dataset()).status == EntryReport::Status::pass);

  auto ann = verify_entry(entry("lvl2-P48-2"), dataset());
  CHECK(ann.status == EntryReport::Status::fail_annotated);
  CHECK_FALSE(ann.literal_pass);
  CHECK(ann.corrected_pass == std::optional<bool>(true));
}

TEST_CASE("a corrupted coefficient is caught") {
  FormulaEntry e = entry("lvl6-P24-6");
  auto at = e.text.find("1032");
  REQUIRE(at != std::string::npos);
  e.text.replace(at, 4, "1033");
  e.expr = parse(e.text);
  auto r = verify_entry(e, dataset());
  CHECK(r.status == EntryReport::Status::fail);
  REQUIRE(r.mismatch.has_value());
  CHECK(r.mismatch->index > 0);
  CHECK(r.mismatch->index < sturm_precision(6, 24));
  auto js = nlohmann::json::parse(report_json_line(r));
  CHECK(js["status"] == "fail");
  CHECK(js["mismatch"]["index"] == r.mismatch->index);
}

TEST_CASE("dataset parsing") {
  auto ok = parse_dataset("# c\nx1 | 1 | 12 | 1 | Delta1 | 1 | level1\n");
  REQUIRE(ok.entries.size() == 1);
  CHECK(ok.entries[0].line == 2);
  CHECK(ok.entries[0].kind() == "set");

  auto message = [](const std::string& text) {
    try {
      parse_dataset(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("# c\n\nbad | 1 | 12\n").find("line 3") != std::string::npos);
  CHECK(message("x | 1 | 12 | 1 | Delta1 | E4*(d | level1\n").find("line 1") != std::string::npos);
  CHECK(message("x | 1 | 12 | 1 | Delta1 | 1 | level1\nx | 1 | 12 | 1 | Delta1 | 1 | level1\n").find("line 2") !=
        std::string::npos);
  CHECK(message("x | 1 | 12 | 1 | Delta1 | 1 | nowhere\n").find("line 1") != std::string::npos);
  CHECK(message("x | 1 | 12 | 1 | Delta1 | 1 | level1 | kind=bogus\n").find("line 1") != std::string::npos);
}

TEST_CASE("group conjugate counts match the class dimensions") {
  // set entries of a group (excluding alt displays) cover the class exactly
  std::map<std::string, int> count;
  std::map<std::string, const FormulaEntry*> first;
  for (const auto& e : dataset().entries) {
    if (e.kind() != "set" || e.notes.count("alt") || e.notes.count("contains") || !e.expr) continue;
    if (e.annotated_typo()) continue;
    std::optional<Rational> v;
    if (uses_v(e.expr)) v = Rational(1);
    count[e.group] += (1 << count_pm(e.expr)) * (v ? 2 : 1);
    first.emplace(e.group, &e);
  }
  for (const auto& [g, c] : count) {
    const FormulaEntry& e = *first[g];
    CAPTURE(g);
    if (e.level == 9 && e.cls == "tw") continue;
    CHECK(c == class_dimension(e.level, e.weight, e.cls));
  }
}
