#include "infaff/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace infaff::dsl {

namespace {

std::string format_error(ParseError::Kind kind, Position at, const std::string& expected, const std::string& found) {
  std::string where = "line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": ";
  if (kind == ParseError::Kind::syntax) return where + "expected " + expected + ", found " + found;
  return where + expected + (found.empty() ? "" : " '" + found + "'");
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Token::Kind::newline: return "end of line";
    case Token::Kind::end: return "end of input";
    default: return "'" + t.text + "'";
  }
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

ParseError::ParseError(Kind kind, Position at, Position statement, std::string expected, std::string found)
    : Error(format_error(kind, at, expected, found)),
      kind_(kind),
      at_(at),
      statement_(statement),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

// --- lexer -----------------------------------------------------------------

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Token::Kind kind, std::size_t len) {
    out.push_back({kind, std::string(text.substr(i, len)), {line, col}});
    i += len;
    col += static_cast<int>(len);
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      out.push_back({Token::Kind::newline, "\n", {line, col}});
      ++i;
      ++line;
      col = 1;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        ++i;
        ++col;
      }
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      push(Token::Kind::ident, j - i);
    } else if (is_digit(c)) {
      std::size_t j = i;
      while (j < text.size() && is_digit(text[j])) ++j;
      if (j + 1 < text.size() && text[j] == '/' && is_digit(text[j + 1])) {
        ++j;
        while (j < text.size() && is_digit(text[j])) ++j;
        push(Token::Kind::rational, j - i);
      } else {
        push(Token::Kind::integer, j - i);
      }
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Token::Kind::symbol, 2);
    } else if (std::string_view("()[]{},=+-*/^").find(c) != std::string_view::npos) {
      push(Token::Kind::symbol, 1);
    } else {
      std::size_t len = 1;
      while (i + len < text.size() && (static_cast<unsigned char>(text[i + len]) & 0xC0) == 0x80) ++len;
      push(Token::Kind::invalid, len);
    }
  }
  out.push_back({Token::Kind::end, "", {line, col}});
  return out;
}

// --- parser ----------------------------------------------------------------

namespace {

struct Shape {
  bool vector = false;
  long dim = 1;

  std::string describe() const { return dim != 1 ? "vector of dimension " + std::to_string(dim) : "scalar"; }
};

enum class Mode { value, map_body, gamma, relation, constant };

struct Symbol {
  enum class Kind { block, quotient, point, map, form, connection, retract };
  Kind kind;
  long a = 0;
  long b = 0;
};

std::string kind_name(Symbol::Kind k) {
  switch (k) {
    case Symbol::Kind::block: return "block";
    case Symbol::Kind::quotient: return "quotient";
    case Symbol::Kind::point: return "point";
    case Symbol::Kind::map: return "map";
    case Symbol::Kind::form: return "form";
    case Symbol::Kind::connection: return "connection";
    case Symbol::Kind::retract: return "retract";
  }
  return "name";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(tokenize(text)) {}

  Scenario scenario() {
    Scenario s;
    skip_newlines_always();
    if (peek().kind == Token::Kind::ident && peek().text == "version") {
      stmt_ = peek().pos;
      next();
      const Token& v = peek();
      long version = expect_int("version number");
      if (version != 1) semantic(v.pos, "unsupported format version", v.text);
      s.versioned = true;
      end_of_statement();
    }
    for (;;) {
      skip_newlines_always();
      if (peek().kind == Token::Kind::end) break;
      s.statements.push_back(statement());
      end_of_statement();
    }
    return s;
  }

  void declare_all(const Scenario& s) {
    for (const auto& st : s.statements) std::visit([this](const auto& d) { register_decl(d); }, st);
  }

  Expr standalone_expression() {
    stmt_ = peek().pos;
    Expr e = expression();
    if (peek().kind != Token::Kind::end) {
      if (peek().kind == Token::Kind::newline) skip_newlines_always();
      if (peek().kind != Token::Kind::end) fail("end of expression");
    }
    infer(e, Mode::value);
    return e;
  }

 private:
  // ---- token access ----
  const Token& peek() const {
    if (brace_depth_ > 0)
      while (toks_[pos_].kind == Token::Kind::newline) ++pos_;
    return toks_[pos_];
  }
  const Token& next() {
    const Token& t = peek();
    if (t.kind != Token::Kind::end) ++pos_;
    return t;
  }
  void skip_newlines_always() {
    while (toks_[pos_].kind == Token::Kind::newline) ++pos_;
  }
  bool is_symbol(std::string_view s) const { return peek().kind == Token::Kind::symbol && peek().text == s; }
  bool is_word(std::string_view w) const { return peek().kind == Token::Kind::ident && peek().text == w; }
  bool accept_symbol(std::string_view s) {
    if (!is_symbol(s)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(ParseError::Kind::syntax, peek().pos, stmt_, expected, describe(peek()));
  }
  [[noreturn]] void semantic(Position at, const std::string& message, const std::string& found) const {
    throw ParseError(ParseError::Kind::semantic, at, stmt_, message, found);
  }
  void expect_symbol(std::string_view s) {
    if (!accept_symbol(s)) fail("'" + std::string(s) + "'");
  }
  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("'" + std::string(w) + "'");
    next();
  }
  std::string expect_ident(const std::string& what) {
    if (peek().kind != Token::Kind::ident) fail(what);
    return next().text;
  }
  long expect_int(const std::string& what) {
    if (peek().kind != Token::Kind::integer) fail(what);
    const Token& t = next();
    if (t.text.size() > 9) semantic(t.pos, "integer too large", t.text);
    return std::stol(t.text);
  }
  Rational signed_rational() {
    bool negative = accept_symbol("-");
    if (peek().kind != Token::Kind::integer && peek().kind != Token::Kind::rational) fail("rational number");
    const Token& t = next();
    Rational v = literal(t);
    return negative ? Rational(-v) : v;
  }
  Rational literal(const Token& t) const {
    try {
      return parse_rational(t.text);
    } catch (const std::exception&) {
      semantic(t.pos, "invalid rational literal", t.text);
    }
  }
  void end_of_statement() {
    if (peek().kind == Token::Kind::newline || peek().kind == Token::Kind::end) return;
    fail("end of line");
  }
  void open_brace() {
    expect_symbol("{");
    ++brace_depth_;
  }
  void close_brace() {
    if (!is_symbol("}")) fail("'}'");
    --brace_depth_;
    ++pos_;
  }

  // ---- statements ----
  Statement statement() {
    stmt_ = {peek().pos.line, 1};
    if (peek().kind != Token::Kind::ident) fail("statement keyword");
    const std::string& w = peek().text;
    if (w == "block") return block();
    if (w == "quotient") return quotient();
    if (w == "point") return point();
    if (w == "map") return map();
    if (w == "form") return form();
    if (w == "connection") return connection();
    if (w == "retract") return retract();
    if (w == "check") return check();
    fail("statement keyword");
  }

  std::string new_name(const std::string& what) {
    const Token& t = peek();
    std::string name = expect_ident(what);
    if (name == "sqrt" || name == "GAMMA") semantic(t.pos, "reserved name", name);
    if (symbols_.count(name)) semantic(t.pos, "name already declared", name);
    name_pos_ = t.pos;
    return name;
  }

  long positive_int(const std::string& what, long min = 1) {
    const Token& t = peek();
    long v = expect_int(what);
    if (v < min) semantic(t.pos, what + " must be at least " + std::to_string(min), t.text);
    return v;
  }

  BlockDecl block() {
    BlockDecl d;
    d.span.pos = stmt_;
    next();
    d.name = new_name("block name");
    if (is_digit(d.name.back())) semantic(name_pos_, "block names must not end with a digit", d.name);
    if (algebra_ == Symbol::Kind::quotient) semantic(stmt_, "blocks cannot be combined with a quotient", d.name);
    expect_word("vars");
    d.vars = positive_int("generator count");
    expect_word("cap");
    d.cap = positive_int("cap", 0);
    register_decl(d);
    return d;
  }

  QuotientDecl quotient() {
    QuotientDecl d;
    d.span.pos = stmt_;
    next();
    d.name = new_name("quotient name");
    if (is_digit(d.name.back())) semantic(name_pos_, "quotient names must not end with a digit", d.name);
    if (algebra_) semantic(stmt_, "only one algebra declaration style per scenario", d.name);
    expect_word("vars");
    d.vars = positive_int("generator count");
    expect_word("degcap");
    d.degcap = positive_int("degree cap", 0);
    expect_word("relations");
    open_brace();
    relation_name_ = d.name;
    relation_vars_ = d.vars;
    if (!is_symbol("}")) {
      do {
        d.relations.push_back(expression());
      } while (accept_symbol(","));
    }
    close_brace();
    for (const auto& r : d.relations) {
      infer(r, Mode::relation);
      Polynomial p = relation_polynomial(r, d.name, d.vars);
      if (p.is_zero()) continue;
      if (!p.is_homogeneous()) semantic(r.span.pos, "relation is not homogeneous", render_expr(r));
      if (p.total_degree() == 0) semantic(r.span.pos, "constant relation", render_expr(r));
    }
    register_decl(d);
    return d;
  }

  PointDecl point() {
    PointDecl d;
    d.span.pos = stmt_;
    next();
    d.name = new_name("point name");
    expect_symbol("=");
    d.value = expression();
    infer(d.value, Mode::value);
    register_decl(d);
    return d;
  }

  MapDecl map() {
    MapDecl d;
    d.span.pos = stmt_;
    next();
    d.name = new_name("map name");
    expect_symbol("(");
    std::set<std::string> seen;
    do {
      const Token& t = peek();
      std::string p = expect_ident("parameter name");
      if (p == "sqrt" || !seen.insert(p).second) semantic(t.pos, "invalid or repeated parameter", p);
      d.params.push_back(p);
    } while (accept_symbol(","));
    expect_symbol(")");
    expect_symbol("->");
    d.outputs = positive_int("output dimension");
    open_brace();
    const Position body_pos = peek().pos;
    do {
      d.body.push_back(expression());
    } while (accept_symbol(","));
    close_brace();
    params_ = d.params;
    for (const auto& e : d.body) infer(e, Mode::map_body);
    if (static_cast<long>(d.body.size()) != d.outputs)
      semantic(body_pos, "map body has " + std::to_string(d.body.size()) + " components, declared " +
                             std::to_string(d.outputs), d.name);
    register_decl(d);
    return d;
  }

  FormDecl form() {
    FormDecl d;
    d.span.pos = stmt_;
    next();
    d.name = new_name("form name");
    expect_word("arity");
    d.arity = positive_int("arity");
    expect_word("dim");
    d.dim = positive_int("dimension");
    open_brace();
    std::set<std::vector<long>> seen;
    if (!is_symbol("}")) {
      do {
        const Position at = peek().pos;
        expect_symbol("[");
        FormEntry e;
        do {
          const Token& t = peek();
          long i = expect_int("index");
          if (i < 1 || i > d.dim) semantic(t.pos, "form index out of range", t.text);
          e.index.push_back(i);
        } while (accept_symbol(","));
        expect_symbol("]");
        if (static_cast<long>(e.index.size()) != d.arity) semantic(at, "form index has wrong length", d.name);
        if (!seen.insert(e.index).second) semantic(at, "repeated form entry", d.name);
        expect_symbol("=");
        e.value = signed_rational();
        d.entries.push_back(std::move(e));
      } while (accept_symbol(","));
    }
    close_brace();
    register_decl(d);
    return d;
  }

  ConnectionDecl connection() {
    ConnectionDecl d;
    d.span.pos = stmt_;
    next();
    d.name = new_name("connection name");
    expect_word("dim");
    d.dim = positive_int("dimension");
    open_brace();
    gamma_dim_ = d.dim;
    std::set<std::array<long, 3>> seen;
    if (!is_symbol("}")) {
      do {
        const Position at = peek().pos;
        expect_word("GAMMA");
        GammaEntry e;
        expect_symbol("[");
        e.i = gamma_index(d.dim);
        expect_symbol("]");
        expect_symbol("[");
        e.j = gamma_index(d.dim);
        expect_symbol(",");
        e.k = gamma_index(d.dim);
        expect_symbol("]");
        expect_symbol("=");
        e.value = expression();
        infer(e.value, Mode::gamma);
        if (!seen.insert({e.i, std::min(e.j, e.k), std::max(e.j, e.k)}).second)
          semantic(at, "repeated Christoffel entry (entries are symmetric in j, k)", d.name);
        d.entries.push_back(std::move(e));
      } while (accept_symbol(","));
    }
    close_brace();
    register_decl(d);
    return d;
  }

  long gamma_index(long dim) {
    const Token& t = peek();
    long v = expect_int("index");
    if (v < 1 || v > dim) semantic(t.pos, "Christoffel index out of range", t.text);
    return v;
  }

  RetractDecl retract() {
    RetractDecl d;
    d.span.pos = stmt_;
    next();
    d.name = new_name("retract name");
    if (is_word("iota")) {
      next();
      expect_symbol("=");
      const Token& t = peek();
      d.iota = expect_ident("map name");
      require(t.pos, *d.iota, Symbol::Kind::map);
    }
    expect_word("r");
    expect_symbol("=");
    const Token& rt = peek();
    d.r = expect_ident("map name");
    const Symbol& r = require(rt.pos, d.r, Symbol::Kind::map);
    if (d.iota) {
      const Symbol& i = symbols_.at(*d.iota);
      if (i.a != r.b || i.b != r.a)
        semantic(rt.pos, "retraction dimensions do not match the inclusion", d.r);
    } else if (r.a != r.b) {
      semantic(rt.pos, "without iota, r must map R^n to itself", d.r);
    }
    register_decl(d);
    return d;
  }

  // ---- checks ----
  CheckDecl check() {
    CheckDecl d;
    d.span.pos = stmt_;
    next();
    const Token& first = peek();
    d.kind = expect_ident("check kind");
    Position last_end{first.pos.line, first.pos.column + static_cast<int>(first.text.size())};
    while (is_symbol("-") && peek().pos == last_end) {
      next();
      const Token& part = peek();
      if (part.kind != Token::Kind::ident || part.pos.column != last_end.column + 1 || part.pos.line != last_end.line)
        fail("check kind");
      d.kind += "-" + next().text;
      last_end = {part.pos.line, part.pos.column + static_cast<int>(part.text.size())};
    }
    if (std::find(std::begin(kCheckKinds), std::end(kCheckKinds), d.kind) == std::end(kCheckKinds))
      semantic(first.pos, "unknown check kind", d.kind);

    if (d.kind == "in-Dk") {
      d.args.push_back(expression());
      d.k = int_option("k");
      vector_args(d.args, 1, 1);
    } else if (d.kind == "in-DNk") {
      expression_list(d.args);
      vector_args(d.args, 2, 0);
    } else if (d.kind == "i-tuple") {
      expression_list(d.args);
      d.k = int_option("k");
      vector_args(d.args, 1, 0);
    } else if (d.kind == "nilsquare") {
      expression_list(d.args);
      vector_args(d.args, 1, 0);
    } else if (d.kind == "i-morphism") {
      const Token& t = peek();
      d.target = expect_ident("map name");
      const Symbol& m = require(t.pos, d.target, Symbol::Kind::map);
      d.k = int_option("k");
      d.tuple = int_option("tuple", 2);
      if (is_word("base")) {
        next();
        expect_symbol("=");
        d.base = expression();
        constant_point(*d.base, m.a);
      }
    } else if (d.kind == "axioms") {
      long dim = handle(d);
      expect_word("points");
      expression_list(d.args);
      long got = vector_args(d.args, 1, 0);
      if (dim > 0 && got != dim) semantic(d.args[0].span.pos, "points have dimension " + std::to_string(got) +
                                                                  ", the action needs " + std::to_string(dim), "");
      if (is_word("weights")) {
        weight_block(d);
        expect_word("outer");
        d.outer = expression();
        weight_tuple(*d.outer, static_cast<long>(d.weights.size()));
      }
    } else if (d.kind == "equiv-connection") {
      long dim = handle(d);
      expect_word("at");
      d.base = expression();
      auto v = constant_point(*d.base, dim);
      (void)v;
    } else if (d.kind == "pullback-lemma") {
      const Token& t = peek();
      d.target = expect_ident("connection name");
      const Symbol& c = require(t.pos, d.target, Symbol::Kind::connection);
      expect_word("iota");
      expect_symbol("=");
      const Token& it = peek();
      d.iota = expect_ident("map name");
      const Symbol& m = require(it.pos, d.iota, Symbol::Kind::map);
      if (m.a != c.a || m.b != c.a)
        semantic(it.pos, "iota must map R^" + std::to_string(c.a) + " to itself", d.iota);
      expect_word("points");
      expression_list(d.args);
      long got = vector_args(d.args, 1, 0);
      if (got != c.a) semantic(d.args[0].span.pos, "points must have the connection's dimension", "");
      if (is_word("weights")) weight_block(d);
    } else if (d.kind == "idempotent") {
      const Token& t = peek();
      d.target = expect_ident("retract name");
      const Symbol& r = require(t.pos, d.target, Symbol::Kind::retract);
      expect_word("at");
      d.base = expression();
      constant_point(*d.base, r.a);
    }
    return d;
  }

  // Returns the handle's dimension or 0 if any dimension is acceptable.
  long handle(CheckDecl& d) {
    const Token& t = peek();
    d.handle = expect_ident("action (canonical, connection or retract)");
    if (d.handle == "canonical") {
      d.k = int_option("k");
      return 0;
    }
    if (d.handle == "connection" || d.handle == "retract") {
      const Token& nt = peek();
      d.target = expect_ident(d.handle + " name");
      const Symbol& s = require(nt.pos, d.target, d.handle == "connection" ? Symbol::Kind::connection : Symbol::Kind::retract);
      return s.a;
    }
    semantic(t.pos, "unknown action", d.handle);
  }

  void weight_block(CheckDecl& d) {
    expect_word("weights");
    open_brace();
    do {
      d.weights.push_back(expression());
    } while (accept_symbol(","));
    close_brace();
    for (const auto& w : d.weights) weight_tuple(w, static_cast<long>(d.args.size()));
  }

  void weight_tuple(const Expr& w, long size) {
    auto v = constant_vector(w);
    if (!v) semantic(w.span.pos, "weights must be rational constants", render_expr(w));
    if (static_cast<long>(v->size()) != size)
      semantic(w.span.pos, "expected " + std::to_string(size) + " weights", render_expr(w));
    Rational sum = 0;
    for (const auto& x : *v) sum += x;
    if (sum != 1) semantic(w.span.pos, "weights must sum to 1", render_expr(w));
  }

  std::vector<Rational> constant_point(const Expr& e, long dim) {
    auto v = constant_vector(e);
    if (!v) semantic(e.span.pos, "expected a rational point", render_expr(e));
    if (dim > 0 && static_cast<long>(v->size()) != dim)
      semantic(e.span.pos, "expected a point of dimension " + std::to_string(dim), render_expr(e));
    return *v;
  }

  long int_option(const std::string& key, long min = 1) {
    expect_word(key);
    expect_symbol("=");
    return positive_int(key, min);
  }

  void expression_list(std::vector<Expr>& out) {
    do {
      out.push_back(expression());
    } while (accept_symbol(","));
  }

  // All arguments must be vectors (scalars count as 1-vectors) of one dimension.
  long vector_args(const std::vector<Expr>& args, std::size_t min_count, std::size_t max_count) {
    if (args.size() < min_count)
      semantic(args.empty() ? stmt_ : args.back().span.pos, "expected at least " + std::to_string(min_count) + " arguments", "");
    if (max_count && args.size() > max_count) semantic(args[max_count].span.pos, "too many arguments", "");
    long dim = -1;
    for (const auto& a : args) {
      Shape s = infer(a, Mode::value);
      if (dim >= 0 && s.dim != dim)
        semantic(a.span.pos, "dimension mismatch: " + s.describe() + " vs dimension " + std::to_string(dim), render_expr(a));
      dim = s.dim;
    }
    return dim;
  }

  // ---- expressions ----
  Expr node(Expr::Kind k, Position at) {
    Expr e;
    e.kind = k;
    e.span.pos = at;
    return e;
  }

  Expr expression() {
    Expr lhs = term();
    while (is_symbol("+") || is_symbol("-")) {
      const Token& op = next();
      Expr n = node(op.text == "+" ? Expr::Kind::add : Expr::Kind::sub, op.pos);
      n.args.push_back(std::move(lhs));
      n.args.push_back(term());
      lhs = std::move(n);
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (is_symbol("*") || is_symbol("/")) {
      const Token& op = next();
      Expr n = node(op.text == "*" ? Expr::Kind::mul : Expr::Kind::div, op.pos);
      n.args.push_back(std::move(lhs));
      n.args.push_back(unary());
      lhs = std::move(n);
    }
    return lhs;
  }

  Expr unary() {
    if (is_symbol("-")) {
      Expr n = node(Expr::Kind::neg, next().pos);
      n.args.push_back(unary());
      return n;
    }
    Expr base = primary();
    if (is_symbol("^")) {
      Expr n = node(Expr::Kind::pow, next().pos);
      const Token& t = peek();
      long e = expect_int("non-negative integer exponent");
      if (e > 64) semantic(t.pos, "exponent too large", t.text);
      n.exponent = static_cast<unsigned>(e);
      n.args.push_back(std::move(base));
      return n;
    }
    return base;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::integer || t.kind == Token::Kind::rational) {
      next();
      Expr n = node(Expr::Kind::number, t.pos);
      n.value = literal(t);
      return n;
    }
    if (is_symbol("(")) {
      next();
      Expr first = expression();
      if (!is_symbol(",")) {
        expect_symbol(")");
        return first;
      }
      Expr n = node(Expr::Kind::tuple, t.pos);
      n.args.push_back(std::move(first));
      while (accept_symbol(",")) n.args.push_back(expression());
      expect_symbol(")");
      return n;
    }
    if (t.kind == Token::Kind::ident) {
      next();
      if (t.text == "sqrt") {
        Expr n = node(Expr::Kind::sqrt, t.pos);
        expect_symbol("(");
        n.args.push_back(expression());
        expect_symbol(")");
        return n;
      }
      if (is_symbol("[")) {
        next();
        Expr n = node(Expr::Kind::index, t.pos);
        n.name = t.text;
        n.index = expect_int("index");
        expect_symbol("]");
        return n;
      }
      if (is_symbol("(")) {
        next();
        Expr n = node(Expr::Kind::call, t.pos);
        n.name = t.text;
        do {
          n.args.push_back(expression());
        } while (accept_symbol(","));
        expect_symbol(")");
        return n;
      }
      Expr n = node(Expr::Kind::name, t.pos);
      n.name = t.text;
      return n;
    }
    fail("expression");
  }

  // ---- semantics ----
  const Symbol& require(Position at, const std::string& name, Symbol::Kind kind) const {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) semantic(at, "undeclared name", name);
    if (it->second.kind != kind) semantic(at, "'" + name + "' is a " + kind_name(it->second.kind) + ", expected a " + kind_name(kind), name);
    return it->second;
  }

  Shape infer(const Expr& e, Mode mode) const {
    const Shape scalar{};
    switch (e.kind) {
      case Expr::Kind::number:
        return scalar;
      case Expr::Kind::name: {
        if (mode == Mode::map_body) {
          if (std::find(params_.begin(), params_.end(), e.name) == params_.end())
            semantic(e.span.pos, "unknown map parameter", e.name);
          return scalar;
        }
        if (mode != Mode::value) semantic(e.span.pos, "names are not allowed here", e.name);
        const Symbol& s = require(e.span.pos, e.name, Symbol::Kind::point);
        return {s.a != 1, s.a};
      }
      case Expr::Kind::index: {
        if (mode == Mode::gamma) {
          if (e.name != "x") semantic(e.span.pos, "Christoffel entries use base coordinates x[i]", e.name);
          if (e.index < 1 || e.index > gamma_dim_) semantic(e.span.pos, "coordinate index out of range", render_expr(e));
          return scalar;
        }
        if (mode == Mode::relation) {
          if (e.name != relation_name_) semantic(e.span.pos, "relations use the quotient's own generators", e.name);
          if (e.index < 1 || e.index > relation_vars_) semantic(e.span.pos, "generator index out of range", render_expr(e));
          return scalar;
        }
        if (mode != Mode::value) semantic(e.span.pos, "indexed names are not allowed here", e.name);
        auto it = symbols_.find(e.name);
        if (it == symbols_.end()) semantic(e.span.pos, "undeclared name", e.name);
        const Symbol& s = it->second;
        if (s.kind != Symbol::Kind::block && s.kind != Symbol::Kind::quotient && s.kind != Symbol::Kind::point)
          semantic(e.span.pos, "only generators and point coordinates can be indexed", e.name);
        if (e.index < 1 || e.index > s.a) semantic(e.span.pos, "index out of range", render_expr(e));
        return scalar;
      }
      case Expr::Kind::call: {
        if (mode != Mode::value) semantic(e.span.pos, "calls are not allowed here", e.name);
        auto it = symbols_.find(e.name);
        if (it == symbols_.end()) semantic(e.span.pos, "undeclared name", e.name);
        const Symbol& s = it->second;
        if (s.kind == Symbol::Kind::map) {
          long dim = 0;
          if (e.args.size() == 1) {
            dim = infer(e.args[0], mode).dim;
          } else {
            for (const auto& a : e.args)
              if (infer(a, mode).dim != 1) semantic(a.span.pos, "multiple map arguments must be scalars", render_expr(a));
            dim = static_cast<long>(e.args.size());
          }
          if (dim != s.a)
            semantic(e.span.pos, "map '" + e.name + "' expects dimension " + std::to_string(s.a) + ", got " + std::to_string(dim), e.name);
          return {s.b != 1, s.b};
        }
        if (s.kind == Symbol::Kind::form) {
          if (static_cast<long>(e.args.size()) != s.a)
            semantic(e.span.pos, "form '" + e.name + "' takes " + std::to_string(s.a) + " vectors", e.name);
          for (const auto& a : e.args)
            if (infer(a, mode).dim != s.b) semantic(a.span.pos, "form argument has wrong dimension", render_expr(a));
          return scalar;
        }
        semantic(e.span.pos, "only maps and forms can be applied", e.name);
      }
      case Expr::Kind::tuple: {
        if (mode != Mode::value && mode != Mode::constant) semantic(e.span.pos, "tuples are not allowed here", render_expr(e));
        for (const auto& a : e.args)
          if (infer(a, mode).dim != 1) semantic(a.span.pos, "tuple entries must be scalars", render_expr(a));
        return {true, static_cast<long>(e.args.size())};
      }
      case Expr::Kind::neg:
        return infer(e.args[0], mode);
      case Expr::Kind::add:
      case Expr::Kind::sub: {
        Shape a = infer(e.args[0], mode), b = infer(e.args[1], mode);
        if (a.dim != b.dim)
          semantic(e.span.pos, "dimension mismatch: " + a.describe() + " and " + b.describe(), render_expr(e));
        return a;
      }
      case Expr::Kind::mul: {
        Shape a = infer(e.args[0], mode), b = infer(e.args[1], mode);
        if (a.dim != 1 && b.dim != 1) semantic(e.span.pos, "cannot multiply two vectors", render_expr(e));
        return a.dim != 1 ? a : b;
      }
      case Expr::Kind::div: {
        Shape a = infer(e.args[0], mode), b = infer(e.args[1], mode);
        if (b.dim != 1) semantic(e.span.pos, "cannot divide by a vector", render_expr(e));
        if (mode == Mode::gamma || mode == Mode::relation) {
          auto c = constant_vector(e.args[1]);
          if (!c || (*c)[0] == 0) semantic(e.span.pos, "only division by nonzero constants is allowed here", render_expr(e));
        }
        return a;
      }
      case Expr::Kind::pow: {
        if (infer(e.args[0], mode).dim != 1) semantic(e.span.pos, "cannot raise a vector to a power", render_expr(e));
        return scalar;
      }
      case Expr::Kind::sqrt: {
        if (mode == Mode::gamma || mode == Mode::relation) semantic(e.span.pos, "sqrt is not allowed here", render_expr(e));
        if (infer(e.args[0], mode).dim != 1) semantic(e.span.pos, "sqrt of a vector", render_expr(e));
        return scalar;
      }
    }
    return scalar;
  }

  Polynomial relation_polynomial(const Expr& r, const std::string& name, long vars) const {
    try {
      return expr_to_polynomial(r, static_cast<std::size_t>(vars), [&](const Expr& leaf) -> std::optional<std::size_t> {
        if (leaf.kind == Expr::Kind::index && leaf.name == name) return static_cast<std::size_t>(leaf.index - 1);
        return std::nullopt;
      });
    } catch (const Error& ex) {
      semantic(r.span.pos, ex.what(), render_expr(r));
    }
  }

  void add_symbol(const std::string& name, Symbol s) { symbols_[name] = s; }

  void register_decl(const BlockDecl& d) {
    add_symbol(d.name, {Symbol::Kind::block, d.vars, d.cap});
    algebra_ = Symbol::Kind::block;
  }
  void register_decl(const QuotientDecl& d) {
    add_symbol(d.name, {Symbol::Kind::quotient, d.vars, d.degcap});
    algebra_ = Symbol::Kind::quotient;
  }
  void register_decl(const PointDecl& d) {
    Shape s = infer(d.value, Mode::value);
    add_symbol(d.name, {Symbol::Kind::point, s.dim, 0});
  }
  void register_decl(const MapDecl& d) {
    add_symbol(d.name, {Symbol::Kind::map, static_cast<long>(d.params.size()), d.outputs});
  }
  void register_decl(const FormDecl& d) { add_symbol(d.name, {Symbol::Kind::form, d.arity, d.dim}); }
  void register_decl(const ConnectionDecl& d) { add_symbol(d.name, {Symbol::Kind::connection, d.dim, 0}); }
  void register_decl(const RetractDecl& d) {
    add_symbol(d.name, {Symbol::Kind::retract, symbols_.at(d.r).a, 0});
  }
  void register_decl(const CheckDecl&) {}

  std::vector<Token> toks_;
  mutable std::size_t pos_ = 0;
  int brace_depth_ = 0;
  Position stmt_;
  Position name_pos_;
  std::map<std::string, Symbol> symbols_;
  std::optional<Symbol::Kind> algebra_;
  std::vector<std::string> params_;
  long gamma_dim_ = 0;
  std::string relation_name_;
  long relation_vars_ = 0;
};

}  // namespace

Scenario parse_scenario(std::string_view text) { return Parser(text).scenario(); }

Expr parse_expression(std::string_view text, const Scenario& s) {
  Parser p(text);
  p.declare_all(s);
  return p.standalone_expression();
}

// --- helpers ---------------------------------------------------------------

Polynomial expr_to_polynomial(const Expr& e, std::size_t nvars,
                              const std::function<std::optional<std::size_t>(const Expr&)>& var_of) {
  switch (e.kind) {
    case Expr::Kind::number:
      return Polynomial::constant(nvars, e.value);
    case Expr::Kind::name:
    case Expr::Kind::index: {
      auto v = var_of(e);
      if (!v) throw InvalidArgument("'" + render_expr(e) + "' is not a variable here");
      return Polynomial::variable(nvars, *v);
    }
    case Expr::Kind::neg:
      return -expr_to_polynomial(e.args[0], nvars, var_of);
    case Expr::Kind::add:
      return expr_to_polynomial(e.args[0], nvars, var_of) + expr_to_polynomial(e.args[1], nvars, var_of);
    case Expr::Kind::sub:
      return expr_to_polynomial(e.args[0], nvars, var_of) - expr_to_polynomial(e.args[1], nvars, var_of);
    case Expr::Kind::mul:
      return expr_to_polynomial(e.args[0], nvars, var_of) * expr_to_polynomial(e.args[1], nvars, var_of);
    case Expr::Kind::pow:
      return expr_to_polynomial(e.args[0], nvars, var_of).pow(e.exponent);
    case Expr::Kind::div: {
      auto d = constant_vector(e.args[1]);
      if (!d || d->size() != 1 || (*d)[0] == 0) throw InvalidArgument("division by a non-constant or zero");
      return Rational(1 / (*d)[0]) * expr_to_polynomial(e.args[0], nvars, var_of);
    }
    case Expr::Kind::call:
    case Expr::Kind::tuple:
    case Expr::Kind::sqrt:
      break;
  }
  throw InvalidArgument("'" + render_expr(e) + "' is not a polynomial");
}

std::optional<std::vector<Rational>> constant_vector(const Expr& e) {
  using V = std::vector<Rational>;
  switch (e.kind) {
    case Expr::Kind::number:
      return V{e.value};
    case Expr::Kind::tuple: {
      V out;
      for (const auto& a : e.args) {
        auto v = constant_vector(a);
        if (!v || v->size() != 1 || a.kind == Expr::Kind::tuple) return std::nullopt;
        out.push_back((*v)[0]);
      }
      return out;
    }
    case Expr::Kind::neg: {
      auto v = constant_vector(e.args[0]);
      if (!v) return std::nullopt;
      for (auto& x : *v) x = -x;
      return v;
    }
    case Expr::Kind::add:
    case Expr::Kind::sub: {
      auto a = constant_vector(e.args[0]), b = constant_vector(e.args[1]);
      if (!a || !b || a->size() != b->size()) return std::nullopt;
      for (std::size_t i = 0; i < a->size(); ++i) (*a)[i] += e.kind == Expr::Kind::add ? (*b)[i] : Rational(-(*b)[i]);
      return a;
    }
    case Expr::Kind::mul: {
      auto a = constant_vector(e.args[0]), b = constant_vector(e.args[1]);
      if (!a || !b) return std::nullopt;
      if (a->size() == 1) std::swap(a, b);
      if (b->size() != 1) return std::nullopt;
      for (auto& x : *a) x *= (*b)[0];
      return a;
    }
    case Expr::Kind::div: {
      auto a = constant_vector(e.args[0]), b = constant_vector(e.args[1]);
      if (!a || !b || b->size() != 1 || (*b)[0] == 0) return std::nullopt;
      for (auto& x : *a) x /= (*b)[0];
      return a;
    }
    case Expr::Kind::pow: {
      auto a = constant_vector(e.args[0]);
      if (!a || a->size() != 1) return std::nullopt;
      Rational r = 1;
      for (unsigned i = 0; i < e.exponent; ++i) r *= (*a)[0];
      return V{r};
    }
    case Expr::Kind::sqrt: {
      auto a = constant_vector(e.args[0]);
      if (!a || a->size() != 1) return std::nullopt;
      auto r = exact_sqrt((*a)[0]);
      if (!r) return std::nullopt;
      return V{*r};
    }
    case Expr::Kind::name:
    case Expr::Kind::index:
    case Expr::Kind::call:
      break;
  }
  return std::nullopt;
}

// --- rendering -------------------------------------------------------------

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::add:
    case Expr::Kind::sub: return 1;
    case Expr::Kind::mul:
    case Expr::Kind::div: return 2;
    case Expr::Kind::neg: return 3;
    case Expr::Kind::pow: return 4;
    default: return 5;
  }
}

std::string render(const Expr& e, int min_prec);

std::string join(const std::vector<Expr>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + render(xs[i], 0);
  return s;
}

std::string render(const Expr& e, int min_prec) {
  std::string s;
  switch (e.kind) {
    case Expr::Kind::number: s = to_string(e.value); break;
    case Expr::Kind::name: s = e.name; break;
    case Expr::Kind::index: s = e.name + "[" + std::to_string(e.index) + "]"; break;
    case Expr::Kind::call: s = e.name + "(" + join(e.args) + ")"; break;
    case Expr::Kind::tuple: s = "(" + join(e.args) + ")"; break;
    case Expr::Kind::sqrt: s = "sqrt(" + render(e.args[0], 0) + ")"; break;
    case Expr::Kind::neg: s = "-" + render(e.args[0], 3); break;
    case Expr::Kind::add: s = render(e.args[0], 1) + " + " + render(e.args[1], 2); break;
    case Expr::Kind::sub: s = render(e.args[0], 1) + " - " + render(e.args[1], 2); break;
    case Expr::Kind::mul: s = render(e.args[0], 2) + " * " + render(e.args[1], 3); break;
    case Expr::Kind::div: s = render(e.args[0], 2) + " / " + render(e.args[1], 3); break;
    case Expr::Kind::pow: s = render(e.args[0], 5) + "^" + std::to_string(e.exponent); break;
  }
  if (precedence(e) < min_prec) return "(" + s + ")";
  return s;
}


std::string render_statement(const BlockDecl& d) {
  return "block " + d.name + " vars " + std::to_string(d.vars) + " cap " + std::to_string(d.cap);
}

std::string render_statement(const QuotientDecl& d) {
  return "quotient " + d.name + " vars " + std::to_string(d.vars) + " degcap " + std::to_string(d.degcap) +
         " relations { " + join(d.relations) + (d.relations.empty() ? "}" : " }");
}

std::string render_statement(const PointDecl& d) { return "point " + d.name + " = " + render(d.value, 0); }

std::string render_statement(const MapDecl& d) {
  std::string s = "map " + d.name + "(";
  for (std::size_t i = 0; i < d.params.size(); ++i) s += (i ? ", " : "") + d.params[i];
  return s + ") -> " + std::to_string(d.outputs) + " { " + join(d.body) + " }";
}

std::string render_statement(const FormDecl& d) {
  std::string s = "form " + d.name + " arity " + std::to_string(d.arity) + " dim " + std::to_string(d.dim) + " {";
  for (std::size_t e = 0; e < d.entries.size(); ++e) {
    s += e ? ", [" : " [";
    for (std::size_t i = 0; i < d.entries[e].index.size(); ++i)
      s += (i ? "," : "") + std::to_string(d.entries[e].index[i]);
    s += "] = " + to_string(d.entries[e].value);
  }
  return s + (d.entries.empty() ? "}" : " }");
}

std::string render_statement(const ConnectionDecl& d) {
  std::string s = "connection " + d.name + " dim " + std::to_string(d.dim) + " {";
  for (std::size_t e = 0; e < d.entries.size(); ++e) {
    const auto& g = d.entries[e];
    s += (e ? ", " : " ") + std::string("GAMMA[") + std::to_string(g.i) + "][" + std::to_string(g.j) + "," +
         std::to_string(g.k) + "] = " + render(g.value, 0);
  }
  return s + (d.entries.empty() ? "}" : " }");
}

std::string render_statement(const RetractDecl& d) {
  return "retract " + d.name + (d.iota ? " iota=" + *d.iota : "") + " r=" + d.r;
}

std::string render_handle(const CheckDecl& d) {
  if (d.handle == "canonical") return "canonical k=" + std::to_string(d.k.value_or(1));
  return d.handle + " " + d.target;
}

std::string render_weights(const CheckDecl& d) {
  if (d.weights.empty()) return "";
  std::string s = " weights { " + join(d.weights) + " }";
  if (d.outer) s += " outer " + render(*d.outer, 0);
  return s;
}

std::string render_statement(const CheckDecl& d) {
  std::string s = "check " + d.kind + " ";
  if (d.kind == "in-Dk" || d.kind == "i-tuple") return s + join(d.args) + " k=" + std::to_string(d.k.value_or(1));
  if (d.kind == "in-DNk" || d.kind == "nilsquare") return s + join(d.args);
  if (d.kind == "i-morphism") {
    s += d.target + " k=" + std::to_string(d.k.value_or(1)) + " tuple=" + std::to_string(d.tuple.value_or(2));
    if (d.base) s += " base=" + render(*d.base, 0);
    return s;
  }
  if (d.kind == "axioms") return s + render_handle(d) + " points " + join(d.args) + render_weights(d);
  if (d.kind == "equiv-connection") return s + render_handle(d) + " at " + render(*d.base, 0);
  if (d.kind == "pullback-lemma") return s + d.target + " iota=" + d.iota + " points " + join(d.args) + render_weights(d);
  if (d.kind == "idempotent") return s + d.target + " at " + render(*d.base, 0);
  return s;
}

}  // namespace

std::string render_expr(const Expr& e) { return render(e, 0); }

std::string render_scenario(const Scenario& s) {
  std::string out;
  if (s.versioned) out += "version 1\n";
  for (const auto& st : s.statements) out += std::visit([](const auto& d) { return render_statement(d); }, st) + "\n";
  return out;
}

}  // namespace infaff::dsl
