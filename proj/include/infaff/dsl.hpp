#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "infaff/errors.hpp"
#include "infaff/monomial.hpp"
#include "infaff/rational.hpp"

namespace infaff::dsl {

struct Position {
  int line = 1;
  int column = 1;

  friend auto operator<=>(const Position&, const Position&) = default;
};

/// Source location attached to syntax nodes. Never takes part in equality,
/// so scenarios compare by content only.
struct Span {
  Position pos;

  friend bool operator==(const Span&, const Span&) { return true; }
};

class ParseError : public Error {
 public:
  enum class Kind { syntax, semantic };

  ParseError(Kind kind, Position at, Position statement, std::string expected, std::string found);

  Kind kind() const { return kind_; }
  int line() const { return at_.line; }
  int column() const { return at_.column; }
  Position position() const { return at_; }
  /// Line of the statement that was being read (column 1).
  Position statement() const { return statement_; }
  const std::string& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  Kind kind_;
  Position at_;
  Position statement_;
  std::string expected_;
  std::string found_;
};

struct Expr {
  enum class Kind { number, name, index, call, tuple, neg, add, sub, mul, div, pow, sqrt };

  Kind kind = Kind::number;
  Rational value;
  std::string name;
  long index = 0;
  unsigned exponent = 0;
  std::vector<Expr> args;
  Span span;

  friend bool operator==(const Expr&, const Expr&) = default;
};

struct BlockDecl {
  std::string name;
  long vars = 0;
  long cap = 0;
  Span span;
  friend bool operator==(const BlockDecl&, const BlockDecl&) = default;
};

struct QuotientDecl {
  std::string name;
  long vars = 0;
  long degcap = 0;
  std::vector<Expr> relations;
  Span span;
  friend bool operator==(const QuotientDecl&, const QuotientDecl&) = default;
};

struct PointDecl {
  std::string name;
  Expr value;
  Span span;
  friend bool operator==(const PointDecl&, const PointDecl&) = default;
};

struct MapDecl {
  std::string name;
  std::vector<std::string> params;
  long outputs = 0;
  std::vector<Expr> body;
  Span span;
  friend bool operator==(const MapDecl&, const MapDecl&) = default;
};

struct FormEntry {
  std::vector<long> index;
  Rational value;
  friend bool operator==(const FormEntry&, const FormEntry&) = default;
};

struct FormDecl {
  std::string name;
  long arity = 0;
  long dim = 0;
  std::vector<FormEntry> entries;
  Span span;
  friend bool operator==(const FormDecl&, const FormDecl&) = default;
};

struct GammaEntry {
  long i = 0, j = 0, k = 0;
  Expr value;
  friend bool operator==(const GammaEntry&, const GammaEntry&) = default;
};

struct ConnectionDecl {
  std::string name;
  long dim = 0;
  std::vector<GammaEntry> entries;
  Span span;
  friend bool operator==(const ConnectionDecl&, const ConnectionDecl&) = default;
};

struct RetractDecl {
  std::string name;
  std::optional<std::string> iota;
  std::string r;
  Span span;
  friend bool operator==(const RetractDecl&, const RetractDecl&) = default;
};

/// `check KIND ...`. Which fields are used depends on the kind:
///   in-Dk           args, k
///   in-DNk          args
///   i-tuple         args, k
///   nilsquare       args
///   i-morphism      target (map), k, tuple, base?
///   axioms          handle, target | k, args (points), weights?, outer?
///   equiv-connection handle, target | k, base
///   pullback-lemma  target (connection), iota, args (points), weights?
///   idempotent      target (retract), base
struct CheckDecl {
  std::string kind;
  std::string handle;
  std::string target;
  std::string iota;
  std::vector<Expr> args;
  std::optional<long> k;
  std::optional<long> tuple;
  std::optional<Expr> base;
  std::vector<Expr> weights;
  std::optional<Expr> outer;
  Span span;
  friend bool operator==(const CheckDecl&, const CheckDecl&) = default;
};

using Statement = std::variant<BlockDecl, QuotientDecl, PointDecl, MapDecl, FormDecl, ConnectionDecl, RetractDecl, CheckDecl>;

struct Scenario {
  bool versioned = false;
  std::vector<Statement> statements;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

inline constexpr std::string_view kCheckKinds[] = {"in-Dk",  "in-DNk",           "i-tuple",        "nilsquare", "i-morphism",
                                                   "axioms", "equiv-connection", "pullback-lemma", "idempotent"};

Scenario parse_scenario(std::string_view text);
std::string render_scenario(const Scenario& s);

/// Parses a standalone expression and checks it against the declarations of `s`.
Expr parse_expression(std::string_view text, const Scenario& s);
std::string render_expr(const Expr& e);

/// Converts a polynomial-valued expression; `var_of` maps leaf nodes
/// (names / indexed names) to variable indices. Throws InvalidArgument for
/// anything that is not a polynomial (sqrt, division by a non-constant, ...).
Polynomial expr_to_polynomial(const Expr& e, std::size_t nvars,
                              const std::function<std::optional<std::size_t>(const Expr&)>& var_of);

/// Value of an expression built from numbers only.
std::optional<std::vector<Rational>> constant_vector(const Expr& e);

// --- tokens (exposed for tests and mutation tooling) -------------------------

struct Token {
  enum class Kind { ident, integer, rational, symbol, newline, end, invalid };
  Kind kind = Kind::end;
  std::string text;
  Position pos;
};

/// Tokenizes; comments are dropped, newlines are kept as tokens. Characters
/// outside the language become `invalid` tokens for the parser to reject.
std::vector<Token> tokenize(std::string_view text);

}  // namespace infaff::dsl
