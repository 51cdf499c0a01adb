#include <cctype>

#include "primforms/formula.hpp"

namespace pf::formula {

namespace {

struct Token {
  enum class T { number, ident, op, end } t;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isdigit(c)) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::T::number, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::T::ident, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::string("+-*/^()=").find(static_cast<char>(c)) != std::string::npos) {
      out.push_back({Token::T::op, std::string(1, static_cast<char>(c)), i});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + static_cast<char>(c) + "'", i);
  }
  out.push_back({Token::T::end, "", s.size()});
  return out;
}

ExprPtr node(Expr::Kind k, std::vector<ExprPtr> kids = {}) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->kids = std::move(kids);
  return e;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : toks_(tokenize(s)) {}

  ExprPtr parse_all() {
    ExprPtr e = relation();
    if (peek().t != Token::T::end) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool is_op(const char* o) const { return peek().t == Token::T::op && peek().text == o; }
  void expect(const char* o) {
    if (!is_op(o)) throw ParseError(std::string("expected '") + o + "'", peek().pos);
    ++i_;
  }

  ExprPtr relation() {
    ExprPtr first = sum();
    if (!is_op("=")) return first;
    std::vector<ExprPtr> kids{first};
    while (is_op("=")) {
      ++i_;
      kids.push_back(sum());
    }
    return node(Expr::Kind::equals, std::move(kids));
  }

  ExprPtr sum() {
    ExprPtr l = term();
    while (is_op("+") || is_op("-")) {
      bool plus = peek().text == "+";
      ++i_;
      ExprPtr r = term();
      l = node(plus ? Expr::Kind::add : Expr::Kind::sub, {l, r});
    }
    return l;
  }

  ExprPtr term() {
    ExprPtr l = unary();
    while (is_op("*") || is_op("/")) {
      bool times = peek().text == "*";
      ++i_;
      ExprPtr r = unary();
      l = node(times ? Expr::Kind::mul : Expr::Kind::div, {l, r});
    }
    return l;
  }

  ExprPtr unary() {
    if (is_op("-")) {
      ++i_;
      return node(Expr::Kind::neg, {unary()});
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = postfix();
    if (!is_op("^")) return base;
    ++i_;
    if (peek().t != Token::T::number) throw ParseError("exponent must be an integer literal", peek().pos);
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::pow;
    e->exponent = std::stol(peek().text);
    e->kids = {base};
    ++i_;
    if (is_op("^")) throw ParseError("chained exponents need parentheses", peek().pos);
    return e;
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (peek().t == Token::T::ident && peek().text == "sub") {
      size_t at = peek().pos;
      ++i_;
      expect("(");
      if (peek().t != Token::T::number) throw ParseError("sub() takes a positive integer", peek().pos);
      long h = std::stol(peek().text);
      if (h <= 0) throw ParseError("sub() takes a positive integer", at);
      ++i_;
      expect(")");
      auto s = std::make_shared<Expr>();
      s->kind = Expr::Kind::subst;
      s->exponent = h;
      s->kids = {e};
      e = s;
    }
    return e;
  }

  ExprPtr primary() {
    const Token t = peek();
    if (t.t == Token::T::number) {
      ++i_;
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::number;
      e->value = Integer(t.text);
      return e;
    }
    if (is_op("(")) {
      ++i_;
      ExprPtr e = sum();
      expect(")");
      return e;
    }
    if (t.t == Token::T::ident) {
      ++i_;
      if (t.text == "sub") throw ParseError("sub() must follow an operand", t.pos);
      if (t.text == "v" && !is_op("(")) return node(Expr::Kind::var_v);
      if (t.text == "sqrt" || t.text == "pm") {
        expect("(");
        ExprPtr a = sum();
        expect(")");
        return node(t.text == "sqrt" ? Expr::Kind::sqrt : Expr::Kind::pm, {a});
      }
      if (t.text == "a" || t.text == "s" || t.text == "ph") {
        if (!is_op("(")) throw ParseError("'" + t.text + "' is a coefficient function", t.pos);
        ++i_;
        if (peek().t != Token::T::number) throw ParseError("coefficient index must be an integer", peek().pos);
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::call;
        e->name = t.text;
        e->exponent = std::stol(peek().text);
        ++i_;
        expect(")");
        return e;
      }
      if (is_op("(")) throw ParseError("unknown function '" + t.text + "' (multiplication needs '*')", t.pos);
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::symbol;
      e->name = t.text;
      return e;
    }
    if (t.t == Token::T::end) throw ParseError("unexpected end of expression", t.pos);
    throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
};

int prec_of(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::equals: return 0;
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div: return 2;
    case Expr::Kind::neg: return 3;
    case Expr::Kind::pow: return 4;
    case Expr::Kind::subst: return 5;
    default: return 6;
  }
}

std::string print_at(const ExprPtr& e, int need) {
  std::string s;
  switch (e->kind) {
    case Expr::Kind::number: s = e->value.get_str(); break;
    case Expr::Kind::symbol: s = e->name; break;
    case Expr::Kind::var_v: s = "v"; break;
    case Expr::Kind::call: s = e->name + "(" + std::to_string(e->exponent) + ")"; break;
    case Expr::Kind::add: s = print_at(e->kids[0], 1) + "+" + print_at(e->kids[1], 2); break;
    case Expr::Kind::sub: s = print_at(e->kids[0], 1) + "-" + print_at(e->kids[1], 2); break;
    case Expr::Kind::mul: s = print_at(e->kids[0], 2) + "*" + print_at(e->kids[1], 3); break;
    case Expr::Kind::div: s = print_at(e->kids[0], 2) + "/" + print_at(e->kids[1], 3); break;
    case Expr::Kind::neg: s = "-" + print_at(e->kids[0], 3); break;
    case Expr::Kind::pow: s = print_at(e->kids[0], 5) + "^" + std::to_string(e->exponent); break;
    case Expr::Kind::sqrt: s = "sqrt(" + print_at(e->kids[0], 0) + ")"; break;
    case Expr::Kind::pm: s = "pm(" + print_at(e->kids[0], 0) + ")"; break;
    case Expr::Kind::subst: s = print_at(e->kids[0], 5) + " sub(" + std::to_string(e->exponent) + ")"; break;
    case Expr::Kind::equals:
      for (size_t i = 0; i < e->kids.size(); ++i) s += (i ? " = " : "") + print_at(e->kids[i], 1);
      break;
  }
  return prec_of(*e) < need ? "(" + s + ")" : s;
}

void count_nodes(const ExprPtr& e, int& pm, bool& v) {
  if (e->kind == Expr::Kind::pm) ++pm;
  if (e->kind == Expr::Kind::var_v) v = true;
  for (auto& k : e->kids) count_nodes(k, pm, v);
}

// Rebuilds e with pm signs taken from bits (preorder) and v replaced by root.
ExprPtr instantiate(const ExprPtr& e, unsigned bits, int& next, const ExprPtr& root) {
  if (e->kind == Expr::Kind::var_v) return root;
  if (e->kind == Expr::Kind::pm) {
    bool minus = (bits >> next) & 1u;
    ++next;
    ExprPtr inner = instantiate(e->kids[0], bits, next, root);
    return minus ? node(Expr::Kind::neg, {inner}) : inner;
  }
  if (e->kids.empty()) return e;
  auto c = std::make_shared<Expr>(*e);
  for (auto& k : c->kids) k = instantiate(k, bits, next, root);
  return c;
}

ExprPtr rational_node(const Rational& r) {
  auto num = std::make_shared<Expr>();
  num->kind = Expr::Kind::number;
  num->value = abs(r.get_num());
  ExprPtr out = num;
  if (r.get_den() != 1) {
    auto den = std::make_shared<Expr>();
    den->kind = Expr::Kind::number;
    den->value = r.get_den();
    out = node(Expr::Kind::div, {out, den});
  }
  return r < 0 ? node(Expr::Kind::neg, {out}) : out;
}

}  // namespace

ExprPtr parse(const std::string& text) { return Parser(text).parse_all(); }

std::string print(const ExprPtr& e) { return print_at(e, 0); }

bool same_tree(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind || a->value != b->value || a->name != b->name || a->exponent != b->exponent ||
      a->kids.size() != b->kids.size())
    return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (!same_tree(a->kids[i], b->kids[i])) return false;
  return true;
}

int count_pm(const ExprPtr& e) {
  int pm = 0;
  bool v = false;
  count_nodes(e, pm, v);
  return pm;
}

bool uses_v(const ExprPtr& e) {
  int pm = 0;
  bool v = false;
  count_nodes(e, pm, v);
  return v;
}

std::vector<ExprPtr> expand_conjugates(const ExprPtr& e, const std::optional<Rational>& v_square) {
  int pm = 0;
  bool v = false;
  count_nodes(e, pm, v);
  if (v && !v_square) throw DomainError("v used without its defining relation");
  if (pm > 16) throw CapabilityError("too many sign markers");
  std::vector<ExprPtr> roots{nullptr};
  if (v) {
    ExprPtr r = node(Expr::Kind::sqrt, {rational_node(*v_square)});
    roots = {r, node(Expr::Kind::neg, {r})};
  }
  std::vector<ExprPtr> out;
  for (const auto& root : roots)
    for (unsigned bits = 0; bits < (1u << pm); ++bits) {
      int next = 0;
      out.push_back(instantiate(e, bits, next, root));
    }
  return out;
}

}  // namespace pf::formula
