#include "infaff/scenario_gen.hpp"

#include <cctype>
#include <vector>

namespace infaff::dsl {

namespace {

// Tokens of one statement; a glued token is written with no space before it.
struct Line {
  std::vector<std::pair<std::string, bool>> toks;

  Line& add(std::string t, bool glue = false) {
    toks.emplace_back(std::move(t), glue);
    return *this;
  }
  Line& seq(const std::vector<std::string>& ts) {
    for (const auto& t : ts) add(t);
    return *this;
  }
};

bool wordy(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Writer {
 public:
  explicit Writer(Sampler& rng) : rng_(rng) {}

  std::vector<std::string> rational() {
    long p = rng_.between(0, 4), q = rng_.between(1, 4);
    long scale = rng_.coin() ? rng_.between(1, 3) : 1;
    if (q == 1 && scale == 1) return {std::to_string(p)};
    return {std::to_string(p * scale) + "/" + std::to_string(q * scale)};
  }

  // Random expression over `leaves`; tokens only.
  std::vector<std::string> expr(const std::vector<std::vector<std::string>>& leaves, int depth, bool allow_div = true) {
    std::vector<std::string> out;
    const std::size_t pick = rng_.below(depth <= 0 ? 2 : 7);
    switch (pick) {
      case 0: out = leaves[rng_.below(leaves.size())]; break;
      case 1: out = rational(); break;
      case 2:
      case 3:
      case 4: {
        static const char* ops[] = {"+", "-", "*"};
        auto a = expr(leaves, depth - 1, allow_div), b = expr(leaves, depth - 1, allow_div);
        out = wrap(a);
        out.push_back(ops[pick - 2]);
        auto wb = wrap(b);
        out.insert(out.end(), wb.begin(), wb.end());
        break;
      }
      case 5: {
        out = wrap(expr(leaves, depth - 1, allow_div));
        if (allow_div) {
          out.push_back("/");
          out.push_back(std::to_string(rng_.between(1, 5)));
        } else {
          out.push_back("^");
          out.push_back(std::to_string(rng_.between(0, 3)));
        }
        break;
      }
      default: {
        out = {"("};
        auto a = leaves[rng_.below(leaves.size())];
        out.insert(out.end(), a.begin(), a.end());
        out.push_back(")");
        out.push_back("^");
        out.push_back(std::to_string(rng_.between(0, 3)));
        if (rng_.coin()) out.insert(out.begin(), "-");
        break;
      }
    }
    return out;
  }

  std::string join(const std::vector<Line>& lines) {
    std::string text;
    if (rng_.coin()) text += "# generated scenario\n";
    for (const auto& line : lines) {
      text += indent();
      int braces = 0;
      for (std::size_t i = 0; i < line.toks.size(); ++i) {
        const auto& [t, glue] = line.toks[i];
        if (i > 0 && !glue) {
          const std::string& prev = line.toks[i - 1].first;
          bool need = (wordy(prev.back()) && wordy(t.front())) || t == "/" || prev == "/";
          if (braces > 0 && prev == "," && rng_.below(4) == 0)
            text += "\n" + indent();
          else
            text += need ? std::string(1 + rng_.below(2), ' ') : std::string(rng_.below(2), ' ');
        }
        text += t;
        if (t == "{") ++braces;
        if (t == "}") --braces;
      }
      if (rng_.below(4) == 0) text += "  # note";
      text += "\n";
      if (rng_.below(5) == 0) text += rng_.coin() ? "\n" : "# --\n";
    }
    return text;
  }

 private:
  std::vector<std::string> wrap(std::vector<std::string> ts) {
    if (ts.size() == 1) return ts;
    ts.insert(ts.begin(), "(");
    ts.push_back(")");
    return ts;
  }

  std::string indent() { return std::string(rng_.below(3), rng_.coin() ? ' ' : '\t'); }

  Sampler& rng_;
};

std::vector<std::string> idx(const std::string& name, long i) { return {name, "[", std::to_string(i), "]"}; }

std::vector<std::string> tuple(std::vector<std::vector<std::string>> entries) {
  std::vector<std::string> out{"("};
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i) out.push_back(",");
    out.insert(out.end(), entries[i].begin(), entries[i].end());
  }
  out.push_back(")");
  return out;
}

}  // namespace

std::string random_scenario(Sampler& rng) {
  Writer w(rng);
  std::vector<Line> lines;
  if (rng.coin()) lines.push_back(Line().add("version").add("1"));

  // algebra: one or two truncated blocks, or a quotient
  std::vector<std::vector<std::string>> gens;
  if (rng.below(4) == 0) {
    lines.push_back(Line().seq({"quotient", "q", "vars", "2", "degcap", "2", "relations", "{"})
                        .seq({"q", "[", "1", "]", "^", "2", ","})
                        .seq({"q", "[", "1", "]", "*", "q", "[", "2", "]", "-", "q", "[", "2", "]", "^", "2", "}"}));
    gens = {idx("q", 1), idx("q", 2)};
  } else {
    static const char* names[] = {"eps", "d", "u", "alpha"};
    const std::size_t nblocks = 1 + rng.below(2);
    const std::size_t first = rng.below(3);
    for (std::size_t b = 0; b < nblocks; ++b) {
      std::string name = names[first + b];
      long vars = rng.between(1, 3);
      lines.push_back(Line().seq({"block", name, "vars", std::to_string(vars), "cap", std::to_string(rng.between(1, 3))}));
      for (long i = 1; i <= vars; ++i) gens.push_back(idx(name, i));
    }
  }

  std::vector<std::vector<std::string>> consts;
  for (int i = 0; i < 2; ++i) consts.push_back(w.rational());
  lines.push_back(Line().seq({"point", "P", "="}).seq(tuple({consts[0], consts[1]})));
  lines.push_back(Line().seq({"point", "Q", "=", "P", "+"}).seq(tuple({w.expr(gens, 2), w.expr(gens, 2)})));

  const std::vector<std::vector<std::string>> xy = {{"x"}, {"y"}};
  const long outs = rng.between(1, 2);
  Line f = Line().seq({"map", "f", "(", "x", ",", "y", ")", "->", std::to_string(outs), "{"});
  for (long i = 0; i < outs; ++i) {
    if (i) f.add(",");
    f.seq(w.expr(xy, 2));
  }
  lines.push_back(f.add("}"));
  lines.push_back(Line().seq({"map", "g", "(", "x", ",", "y", ")", "->", "2", "{", "x", "+", "y", "^", "2", ",", "y", "}"}));
  if (rng.coin())
    lines.push_back(Line().seq({"map", "n", "(", "x", ",", "y", ")", "->", "2", "{", "x", "/", "sqrt", "(", "x", "^", "2",
                                "+", "y", "^", "2", ")", ",", "y", "/", "sqrt", "(", "x", "^", "2", "+", "y", "^", "2", ")", "}"}));

  Line form = Line().seq({"form", "phi", "arity", "2", "dim", "2", "{"});
  form.seq({"[", "1", ",", "2", "]", "="}).seq(w.rational()).add(",");
  form.seq({"[", "2", ",", "1", "]", "=", "-"}).seq(w.rational());
  lines.push_back(form.add("}"));

  const std::vector<std::vector<std::string>> base = {idx("x", 1), idx("x", 2)};
  Line conn = Line().seq({"connection", "G", "dim", "2", "{"});
  conn.seq({"GAMMA", "[", "1", "]", "[", "1", ",", "2", "]", "="}).seq(w.expr(base, 2, false)).add(",");
  conn.seq({"GAMMA", "[", "2", "]", "[", "2", ",", "2", "]", "="}).seq(w.expr(base, 1, false));
  lines.push_back(conn.add("}"));
  lines.push_back(Line().seq({"retract", "R", "r", "=", "g"}));

  const long k = rng.between(1, 3);
  std::vector<Line> checks;
  checks.push_back(Line().seq({"check", "in"}).add("-", true).add("Dk", true).seq({"(", "Q", "-", "P", ")", "k", "=", std::to_string(k)}));
  checks.push_back(Line().seq({"check", "in"}).add("-", true).add("DNk", true).seq({"Q", "-", "P", ",", "phi", "(", "Q", "-", "P", ",", "Q", "-", "P", ")", "*", "(", "1", ",", "1", ")"}));
  checks.push_back(Line().seq({"check", "i"}).add("-", true).add("tuple", true).seq({"P", ",", "Q", ","}).seq(outs == 1 ? std::vector<std::string>{"f", "(", "Q", ")", "*", "(", "0", ",", "1", ")", "+", "P"} : std::vector<std::string>{"f", "(", "Q", ")", "-", "f", "(", "P", ")", "+", "P"}).seq({"k", "=", std::to_string(k)}));
  checks.push_back(Line().seq({"check", "nilsquare", "P", ",", "Q"}));
  checks.push_back(Line().seq({"check", "i"}).add("-", true).add("morphism", true).seq({"f", "k", "=", std::to_string(k), "tuple", "=", "3"}).seq(rng.coin() ? std::vector<std::string>{"base", "=", "(", "0", ",", "1/2", ")"} : std::vector<std::string>{}));
  Line ax = Line().seq({"check", "axioms", "canonical", "k", "=", "1", "points", "P", ",", "Q"});
  if (rng.coin()) ax.seq({"weights", "{", "(", "1/2", ",", "2/4", ")", ",", "(", "2", ",", "-", "1", ")", "}", "outer", "(", "1/3", ",", "2/3", ")"});
  checks.push_back(ax);
  checks.push_back(Line().seq({"check", "equiv"}).add("-", true).add("connection", true).seq({"connection", "G", "at", "(", "0", ",", "1", ")"}));
  checks.push_back(Line().seq({"check", "pullback"}).add("-", true).add("lemma", true).seq({"G", "iota", "=", "g", "points", "P", ",", "Q"}));
  checks.push_back(Line().seq({"check", "idempotent", "R", "at", "(", "1", ",", "0", ")"}));
  for (auto& c : checks)
    if (rng.below(3) != 0) lines.push_back(std::move(c));
  return w.join(lines);
}

Mutation mutate(const std::string& text, Sampler& rng) {
  std::vector<Token> toks = tokenize(text);
  std::vector<const Token*> candidates;
  for (const auto& t : toks)
    if (t.kind != Token::Kind::newline && t.kind != Token::Kind::end) candidates.push_back(&t);
  const Token& victim = *candidates[rng.below(candidates.size())];

  // byte offset of the victim
  std::size_t offset = 0;
  for (int line = 1; line < victim.pos.line; ++line) offset = text.find('\n', offset) + 1;
  offset += static_cast<std::size_t>(victim.pos.column - 1);

  static const char* replacements[] = {")", "(", "=", ",", "]", "{", "}", "^", "->", "check", "17", "@", "point", "+"};
  Mutation m;
  m.at = victim.pos;
  std::string edit;
  switch (rng.below(3)) {
    case 0:
      edit = " ";
      m.description = "delete '" + victim.text + "'";
      break;
    case 1: {
      std::string r = replacements[rng.below(std::size(replacements))];
      edit = " " + r + " ";
      m.description = "replace '" + victim.text + "' with '" + r + "'";
      break;
    }
    default:
      edit = victim.text + " " + victim.text;
      m.description = "duplicate '" + victim.text + "'";
      break;
  }
  m.text = text.substr(0, offset) + edit + text.substr(offset + victim.text.size());
  return m;
}

}  // namespace infaff::dsl
