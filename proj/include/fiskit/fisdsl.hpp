#pragma once

// Text format for complete inference systems ("<name>.fis", line oriented,
// '#' comments, case-sensitive identifiers):
//
//   system <name> kind=<mamdani|sugeno>
//   config and=<min|product> implication=<clip|scale> defuzz=<method> resolution=<int>
//   input <name> range [<lo>, <hi>]
//     term <name> <bell1|bell2|sigmoid|trapeze|singleton>(<params...>)
//   output <name> range [<lo>, <hi>]
//     term ...                         (required for mamdani, forbidden for sugeno)
//   rule: if <var> is <term> [and <var> is <term>]* then <out> is <consequent>
//
// A consequent is an output term name, singleton(<c0>) or
// ts(<d>[, <coeff>*<var>...]). The config line is optional and so are the
// trailing parameters of sigmoid (defaults 1, 0) and trapeze (defaults
// 1, 0, 0); bell1/bell2/singleton parameters are mandatory. The words
// `and is then if singleton ts` are reserved and cannot name anything.
//
// serialize() emits the canonical form: every config field explicit, one
// statement per line, antecedents and ts coefficients in input order, zero
// ts coefficients dropped, reals in shortest round-trip notation. This file
// format is unrelated to the binary .fis files of the Matlab Fuzzy Logic
// Toolbox.

#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fiskit/detail/numeric.hpp"
#include "fiskit/engine.hpp"
#include "fiskit/error.hpp"

namespace fiskit {

enum class ParseErrorKind { Syntax, UnknownName, BadParameter, KindMismatch };

inline constexpr std::string_view to_string(ParseErrorKind k) noexcept {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::UnknownName: return "unknown-name";
    case ParseErrorKind::BadParameter: return "bad-parameter";
    case ParseErrorKind::KindMismatch: return "kind-mismatch";
  }
  return "?";
}

/// Positioned parse failure; line and column (1-based) point at the first
/// offending token.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, ParseErrorKind kind, std::string message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        kind_(kind),
        message_(std::move(message)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  ParseErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  ParseErrorKind kind_;
  std::string message_;
};

/// A parsed, fully validated system plus its name.
struct FisModel {
  std::string name;
  RuleBase rulebase;
};

namespace detail {

struct Token {
  enum class Type { Ident, Number, Punct };
  Type type;
  std::string_view text;  // view into the source buffer
  double number = 0.0;
  std::size_t line = 0;    // 1-based
  std::size_t col = 0;     // 1-based
  std::size_t offset = 0;  // byte offset into the source
};

inline bool is_ident_start(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool is_ident_char(char c) noexcept {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
inline bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    const std::size_t start = i, scol = col;
    if (is_ident_start(c)) {
      while (i < src.size() && is_ident_char(src[i])) ++i;
      out.push_back({Token::Type::Ident, src.substr(start, i - start), 0.0, line, scol, start});
      col += i - start;
      continue;
    }
    if (is_digit(c) || c == '-' || c == '.') {
      std::size_t j = i;
      if (src[j] == '-') ++j;
      std::size_t digits = 0;
      while (j < src.size() && is_digit(src[j])) ++j, ++digits;
      if (j < src.size() && src[j] == '.') {
        ++j;
        while (j < src.size() && is_digit(src[j])) ++j, ++digits;
      }
      if (digits == 0)
        throw ParseError(line, scol, ParseErrorKind::Syntax,
                         std::string("unexpected character '") + c + "'");
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && is_digit(src[k])) {
          while (k < src.size() && is_digit(src[k])) ++k;
          j = k;
        }
      }
      const std::string_view text = src.substr(start, j - start);
      const auto value = parse_double(text);
      if (!value)
        throw ParseError(line, scol, ParseErrorKind::BadParameter,
                         "number '" + std::string(text) + "' is out of range");
      out.push_back({Token::Type::Number, text, *value, line, scol, start});
      col += j - start;
      i = j;
      continue;
    }
    if (std::string_view("=[](),*:").find(c) != std::string_view::npos) {
      out.push_back({Token::Type::Punct, src.substr(start, 1), 0.0, line, scol, start});
      ++i;
      ++col;
      continue;
    }
    throw ParseError(line, scol, ParseErrorKind::Syntax,
                     std::string("unexpected character '") + c + "'");
  }
  return out;
}

/// Tokens grouped into non-empty source lines.
inline std::vector<std::vector<Token>> tokenize_lines(std::string_view src) {
  std::vector<std::vector<Token>> lines;
  for (Token& t : tokenize(src)) {
    if (lines.empty() || lines.back().back().line != t.line) lines.emplace_back();
    lines.back().push_back(t);
  }
  return lines;
}

inline bool is_reserved_word(std::string_view s) noexcept {
  return s == "and" || s == "is" || s == "then" || s == "if" || s == "singleton" || s == "ts";
}

/// Cursor over one statement line with positioned expectation helpers.
class LineCursor {
 public:
  explicit LineCursor(const std::vector<Token>& tokens) : tokens_(tokens) {}

  bool done() const noexcept { return i_ == tokens_.size(); }

  const Token& peek() const {
    if (done()) fail(ParseErrorKind::Syntax, "unexpected end of line");
    return tokens_[i_];
  }

  [[noreturn]] void fail(ParseErrorKind kind, std::string msg) const {
    if (!done()) throw ParseError(tokens_[i_].line, tokens_[i_].col, kind, std::move(msg));
    const Token& last = tokens_.back();
    throw ParseError(last.line, last.col + last.text.size(), kind, std::move(msg));
  }

  Token ident(const std::string& what) {
    if (done() || tokens_[i_].type != Token::Type::Ident)
      fail(ParseErrorKind::Syntax, "expected " + what);
    return tokens_[i_++];
  }

  Token name(const std::string& what) {
    Token t = ident(what);
    if (is_reserved_word(t.text))
      throw ParseError(t.line, t.col, ParseErrorKind::Syntax,
                       "'" + std::string(t.text) + "' is a reserved word");
    return t;
  }

  void keyword(std::string_view kw) {
    if (done() || tokens_[i_].type != Token::Type::Ident || tokens_[i_].text != kw)
      fail(ParseErrorKind::Syntax, "expected '" + std::string(kw) + "'");
    ++i_;
  }

  Token number(const std::string& what) {
    if (done() || tokens_[i_].type != Token::Type::Number)
      fail(ParseErrorKind::Syntax, "expected " + what);
    return tokens_[i_++];
  }

  void punct(char c) {
    if (done() || tokens_[i_].type != Token::Type::Punct || tokens_[i_].text[0] != c)
      fail(ParseErrorKind::Syntax, std::string("expected '") + c + "'");
    ++i_;
  }

  bool try_punct(char c) {
    if (!done() && tokens_[i_].type == Token::Type::Punct && tokens_[i_].text[0] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  void end() const {
    if (!done())
      throw ParseError(tokens_[i_].line, tokens_[i_].col, ParseErrorKind::Syntax,
                       "unexpected token '" + std::string(tokens_[i_].text) + "'");
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t i_ = 0;
};

/// Builds one membership function from a family token and parameter tokens,
/// applying family defaults and validating every precondition in place.
/// `close` positions under-arity errors; `universe`, when given, bounds
/// singleton support points.
inline MembershipFunction make_family(const Token& family, const std::vector<Token>& params,
                                      const Token& close, const Universe* universe) {
  const auto arity = [&](std::size_t lo, std::size_t hi) {
    if (params.size() > hi) {
      const Token& extra = params[hi];
      throw ParseError(extra.line, extra.col, ParseErrorKind::BadParameter,
                       std::string(family.text) + " takes at most " + std::to_string(hi) +
                           " parameters");
    }
    if (params.size() < lo)
      throw ParseError(close.line, close.col, ParseErrorKind::BadParameter,
                       std::string(family.text) + " needs " + std::to_string(lo) + " parameters");
  };
  const auto value = [&](std::size_t i, double fallback) {
    return i < params.size() ? params[i].number : fallback;
  };
  const auto bad = [&](std::size_t i, const std::string& msg) -> ParseError {
    const Token& t = i < params.size() ? params[i] : close;
    return ParseError(t.line, t.col, ParseErrorKind::BadParameter, msg);
  };

  const std::string_view fam = family.text;
  if (fam == "bell1" || fam == "bell2") {
    arity(3, 3);
    const double a = value(0, 0), b = value(1, 0), c = value(2, 0);
    if (!(a != 0.0)) throw bad(0, std::string(fam) + ": width a must be nonzero");
    if (!(b > 0.0)) throw bad(1, std::string(fam) + ": exponent b must be positive");
    if (fam == "bell1") return Bell1{a, b, c};
    return Bell2{a, b, c};
  }
  if (fam == "sigmoid") {
    arity(0, 2);
    return Sigmoid{value(0, 1.0), value(1, 0.0)};
  }
  if (fam == "trapeze") {
    arity(0, 3);
    const double a = value(0, 1.0), b = value(1, 0.0), c = value(2, 0.0);
    if (!(a > 0.0)) throw bad(0, "trapeze: ramp width a must be positive");
    if (!(b >= 0.0)) throw bad(1, "trapeze: plateau half-width b must be nonnegative");
    return Trapeze{a, b, c};
  }
  if (fam == "singleton") {
    arity(1, 1);
    const double x0 = value(0, 0);
    if (universe != nullptr && !universe->contains(x0))
      throw bad(0, "singleton point lies outside the variable range");
    return Singleton{x0};
  }
  throw ParseError(family.line, family.col, ParseErrorKind::UnknownName,
                   "unknown membership function '" + std::string(family.text) + "'");
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lines_(tokenize_lines(src)) {}

  FisModel run() {
    parse_system();
    parse_config();
    while (next_keyword() == "input") parse_variable(/*is_output=*/false);
    if (variables_.empty()) fail_here(ParseErrorKind::Syntax, "expected 'input'");
    if (next_keyword() != "output") fail_here(ParseErrorKind::Syntax, "expected 'output'");
    parse_variable(/*is_output=*/true);
    while (next_keyword() == "rule") parse_rule();
    if (rules_.empty()) fail_here(ParseErrorKind::Syntax, "expected at least one rule");
    if (li_ < lines_.size()) fail_here(ParseErrorKind::Syntax, "expected 'rule'");
    check_wavg();
    return build();
  }

 private:
  struct VariableDecl {
    std::string name;
    double lo = 0, hi = 0;
    std::vector<Term> terms;
  };

  std::string_view next_keyword() const noexcept {
    if (li_ >= lines_.size()) return {};
    const Token& t = lines_[li_].front();
    return t.type == Token::Type::Ident ? t.text : std::string_view{};
  }

  [[noreturn]] void fail_here(ParseErrorKind kind, std::string msg) const {
    if (li_ < lines_.size()) {
      const Token& t = lines_[li_].front();
      throw ParseError(t.line, t.col, kind, std::move(msg));
    }
    if (lines_.empty()) throw ParseError(1, 1, kind, std::move(msg));
    const Token& last = lines_.back().back();
    throw ParseError(last.line, last.col + last.text.size(), kind, std::move(msg));
  }

  LineCursor take_line() { return LineCursor(lines_[li_++]); }

  void parse_system() {
    if (lines_.empty()) throw ParseError(1, 1, ParseErrorKind::Syntax, "expected 'system'");
    if (next_keyword() != "system") fail_here(ParseErrorKind::Syntax, "expected 'system'");
    LineCursor cur = take_line();
    cur.keyword("system");
    name_ = std::string(cur.name("system name").text);
    cur.keyword("kind");
    cur.punct('=');
    const Token kind = cur.ident("system kind");
    if (kind.text == "mamdani")
      kind_ = SystemKind::Mamdani;
    else if (kind.text == "sugeno")
      kind_ = SystemKind::Sugeno;
    else
      throw ParseError(kind.line, kind.col, ParseErrorKind::BadParameter,
                       "system kind must be 'mamdani' or 'sugeno'");
    cur.end();
  }

  void parse_config() {
    if (next_keyword() != "config") return;
    LineCursor cur = take_line();
    cur.keyword("config");
    bool seen_and = false, seen_imp = false, seen_defuzz = false, seen_res = false;
    while (!cur.done()) {
      const Token key = cur.ident("config key");
      cur.punct('=');
      const auto require_once = [&](bool& seen) {
        if (seen)
          throw ParseError(key.line, key.col, ParseErrorKind::BadParameter,
                           "duplicate config key '" + std::string(key.text) + "'");
        seen = true;
      };
      if (key.text == "and") {
        require_once(seen_and);
        const Token v = cur.ident("and operator");
        if (v.text == "min")
          config_.and_op = AndOp::Min;
        else if (v.text == "product")
          config_.and_op = AndOp::Product;
        else
          throw ParseError(v.line, v.col, ParseErrorKind::BadParameter,
                           "and operator must be 'min' or 'product'");
      } else if (key.text == "implication") {
        require_once(seen_imp);
        const Token v = cur.ident("implication operator");
        if (v.text == "clip")
          config_.implication = Implication::Clip;
        else if (v.text == "scale")
          config_.implication = Implication::Scale;
        else
          throw ParseError(v.line, v.col, ParseErrorKind::BadParameter,
                           "implication must be 'clip' or 'scale'");
      } else if (key.text == "defuzz") {
        require_once(seen_defuzz);
        const Token v = cur.ident("defuzzification method");
        const auto method = parse_defuzz_method(v.text);
        if (!method)
          throw ParseError(v.line, v.col, ParseErrorKind::BadParameter,
                           "defuzz must be one of centroid|bisector|mom|som|lom|wavg");
        config_.defuzz = *method;
        defuzz_token_ = v;
      } else if (key.text == "resolution") {
        require_once(seen_res);
        const Token v = cur.number("resolution value");
        if (v.number != std::floor(v.number) || v.number < 2 || v.number > 1e7)
          throw ParseError(v.line, v.col, ParseErrorKind::BadParameter,
                           "resolution must be an integer between 2 and 10000000");
        config_.resolution = static_cast<std::size_t>(v.number);
      } else {
        throw ParseError(key.line, key.col, ParseErrorKind::BadParameter,
                         "unknown config key '" + std::string(key.text) + "'");
      }
    }
  }

  void parse_variable(bool is_output) {
    LineCursor cur = take_line();
    cur.keyword(is_output ? "output" : "input");
    const Token name = cur.name("variable name");
    for (const VariableDecl& v : variables_)
      if (v.name == name.text)
        throw ParseError(name.line, name.col, ParseErrorKind::BadParameter,
                         "variable '" + std::string(name.text) + "' is already defined");
    cur.keyword("range");
    cur.punct('[');
    const Token lo = cur.number("range lower bound");
    cur.punct(',');
    const Token hi = cur.number("range upper bound");
    cur.punct(']');
    cur.end();
    if (!(lo.number < hi.number))
      throw ParseError(hi.line, hi.col, ParseErrorKind::BadParameter,
                       "range needs lo < hi");

    VariableDecl decl{std::string(name.text), lo.number, hi.number, {}};
    const Universe universe(decl.lo, decl.hi, config_.resolution);
    while (next_keyword() == "term") {
      if (is_output && kind_ == SystemKind::Sugeno) {
        const Token& t = lines_[li_].front();
        throw ParseError(t.line, t.col, ParseErrorKind::KindMismatch,
                         "sugeno output takes no terms");
      }
      parse_term(decl, universe);
    }
    if (decl.terms.empty() && !(is_output && kind_ == SystemKind::Sugeno))
      fail_here(ParseErrorKind::BadParameter,
                "variable '" + decl.name + "' needs at least one term");
    if (is_output)
      output_ = std::move(decl);
    else
      variables_.push_back(std::move(decl));
  }

  void parse_term(VariableDecl& decl, const Universe& universe) {
    LineCursor cur = take_line();
    cur.keyword("term");
    const Token name = cur.name("term name");
    for (const Term& t : decl.terms)
      if (t.name == name.text)
        throw ParseError(name.line, name.col, ParseErrorKind::BadParameter,
                         "term '" + std::string(name.text) + "' is already defined");
    const Token family = cur.ident("membership function family");
    cur.punct('(');
    std::vector<Token> params;
    Token close = cur.peek();
    if (!cur.try_punct(')')) {
      for (;;) {
        params.push_back(cur.number("parameter"));
        close = cur.peek();
        if (cur.try_punct(')')) break;
        cur.punct(',');
      }
    }
    cur.end();
    decl.terms.push_back({std::string(name.text), make_family(family, params, close, &universe)});
  }

  void parse_rule() {
    LineCursor cur = take_line();
    cur.keyword("rule");
    cur.punct(':');
    cur.keyword("if");
    Rule rule;
    for (;;) {
      const Token var = cur.ident("input variable name");
      const VariableDecl* decl = find_variable(var.text);
      if (decl == nullptr)
        throw ParseError(var.line, var.col, ParseErrorKind::UnknownName,
                         "no input variable named '" + std::string(var.text) + "'");
      for (const Antecedent& a : rule.antecedents)
        if (a.variable == decl->name)
          throw ParseError(var.line, var.col, ParseErrorKind::BadParameter,
                           "variable '" + decl->name + "' appears twice in the rule");
      cur.keyword("is");
      const Token term = cur.ident("term name");
      if (!has_term(*decl, term.text))
        throw ParseError(term.line, term.col, ParseErrorKind::UnknownName,
                         "variable '" + decl->name + "' has no term '" + std::string(term.text) + "'");
      rule.antecedents.push_back({decl->name, std::string(term.text)});
      const Token next = cur.ident("'and' or 'then'");
      if (next.text == "then") break;
      if (next.text != "and")
        throw ParseError(next.line, next.col, ParseErrorKind::Syntax, "expected 'and' or 'then'");
    }

    const Token out = cur.ident("output variable name");
    if (!output_ || out.text != output_->name)
      throw ParseError(out.line, out.col, ParseErrorKind::UnknownName,
                       "consequent must target the output variable '" +
                           (output_ ? output_->name : std::string("?")) + "'");
    cur.keyword("is");
    const Token cons = cur.ident("consequent");
    if (cons.text == "singleton") {
      if (kind_ != SystemKind::Mamdani)
        throw ParseError(cons.line, cons.col, ParseErrorKind::KindMismatch,
                         "singleton consequents belong to mamdani systems");
      cur.punct('(');
      const Token c0 = cur.number("singleton value");
      cur.punct(')');
      if (c0.number < output_->lo || c0.number > output_->hi)
        throw ParseError(c0.line, c0.col, ParseErrorKind::BadParameter,
                         "singleton value lies outside the output range");
      rule.consequent = MamdaniSingleton{c0.number};
    } else if (cons.text == "ts") {
      if (kind_ != SystemKind::Sugeno)
        throw ParseError(cons.line, cons.col, ParseErrorKind::KindMismatch,
                         "ts consequents belong to sugeno systems");
      cur.punct('(');
      TakagiSugeno f;
      f.d = cur.number("ts constant").number;
      while (!cur.try_punct(')')) {
        cur.punct(',');
        const Token coeff = cur.number("ts coefficient");
        cur.punct('*');
        const Token var = cur.ident("input variable name");
        const VariableDecl* decl = find_variable(var.text);
        if (decl == nullptr)
          throw ParseError(var.line, var.col, ParseErrorKind::UnknownName,
                           "no input variable named '" + std::string(var.text) + "'");
        for (const auto& [existing, unused] : f.coeffs)
          if (existing == decl->name)
            throw ParseError(var.line, var.col, ParseErrorKind::BadParameter,
                             "variable '" + decl->name + "' appears twice in ts()");
        f.coeffs.emplace_back(decl->name, coeff.number);
      }
      rule.consequent = f;
    } else {
      if (kind_ != SystemKind::Mamdani)
        throw ParseError(cons.line, cons.col, ParseErrorKind::KindMismatch,
                         "sugeno rules need a ts(...) consequent");
      bool found = false;
      for (const Term& t : output_->terms) found = found || t.name == cons.text;
      if (!found)
        throw ParseError(cons.line, cons.col, ParseErrorKind::UnknownName,
                         "output has no term '" + std::string(cons.text) + "'");
      rule.consequent = MamdaniTerm{std::string(cons.text)};
    }
    cur.end();
    rules_.push_back(std::move(rule));
  }

  void check_wavg() const {
    if (kind_ != SystemKind::Mamdani || config_.defuzz != DefuzzMethod::WeightedAverage) return;
    for (const Rule& r : rules_) {
      if (!std::holds_alternative<MamdaniSingleton>(r.consequent)) {
        const Token& t = *defuzz_token_;
        throw ParseError(t.line, t.col, ParseErrorKind::BadParameter,
                         "wavg defuzzification needs singleton consequents only");
      }
    }
  }

  const VariableDecl* find_variable(std::string_view name) const noexcept {
    for (const VariableDecl& v : variables_)
      if (v.name == name) return &v;
    return nullptr;
  }

  static bool has_term(const VariableDecl& decl, std::string_view term) noexcept {
    for (const Term& t : decl.terms)
      if (t.name == term) return true;
    return false;
  }

  FisModel build() const {
    std::vector<LinguisticVariable> inputs;
    inputs.reserve(variables_.size());
    for (const VariableDecl& v : variables_)
      inputs.emplace_back(v.name, Universe(v.lo, v.hi, config_.resolution), v.terms);
    const Universe out_universe(output_->lo, output_->hi, config_.resolution);
    if (kind_ == SystemKind::Mamdani) {
      LinguisticVariable output(output_->name, out_universe, output_->terms);
      return FisModel{name_, RuleBase::mamdani(std::move(inputs), std::move(output), rules_, config_)};
    }
    return FisModel{name_,
                    RuleBase::sugeno(std::move(inputs), OutputRange{output_->name, out_universe},
                                     rules_, config_)};
  }

  std::vector<std::vector<Token>> lines_;
  std::size_t li_ = 0;

  std::string name_;
  SystemKind kind_ = SystemKind::Mamdani;
  InferenceConfig config_;
  std::optional<Token> defuzz_token_;
  std::vector<VariableDecl> variables_;
  std::optional<VariableDecl> output_;
  std::vector<Rule> rules_;
};

}  // namespace detail

/// Parses a complete system definition. Validation applies every membership
/// and rule-base precondition at parse time; the first error wins and is
/// reported as a positioned ParseError.
inline FisModel parse(std::string_view text) { return detail::Parser(text).run(); }

/// Parses an inline membership-function spec such as "bell1(-1, 3, 4)".
inline MembershipFunction parse_mf_spec(std::string_view spec) {
  const auto lines = detail::tokenize_lines(spec);
  if (lines.empty()) throw ParseError(1, 1, ParseErrorKind::Syntax, "expected membership function");
  if (lines.size() > 1)
    throw ParseError(lines[1].front().line, lines[1].front().col, ParseErrorKind::Syntax,
                     "expected a single membership function");
  detail::LineCursor cur(lines[0]);
  const detail::Token family = cur.ident("membership function family");
  cur.punct('(');
  std::vector<detail::Token> params;
  detail::Token close = cur.peek();
  if (!cur.try_punct(')')) {
    for (;;) {
      params.push_back(cur.number("parameter"));
      close = cur.peek();
      if (cur.try_punct(')')) break;
      cur.punct(',');
    }
  }
  cur.end();
  return detail::make_family(family, params, close, nullptr);
}

namespace detail {

inline void append_mf(std::string& out, const MembershipFunction& mf) {
  std::visit(Overloaded{
                 [&](const Bell1& f) {
                   out += "bell1(" + format_double(f.a) + ", " + format_double(f.b) + ", " +
                          format_double(f.c) + ")";
                 },
                 [&](const Bell2& f) {
                   out += "bell2(" + format_double(f.a) + ", " + format_double(f.b) + ", " +
                          format_double(f.c) + ")";
                 },
                 [&](const Sigmoid& f) {
                   out += "sigmoid(" + format_double(f.a) + ", " + format_double(f.c) + ")";
                 },
                 [&](const Trapeze& f) {
                   out += "trapeze(" + format_double(f.a) + ", " + format_double(f.b) + ", " +
                          format_double(f.c) + ")";
                 },
                 [&](const Singleton& f) { out += "singleton(" + format_double(f.x0) + ")"; },
             },
             mf);
}

inline void append_variable(std::string& out, std::string_view keyword, std::string_view name,
                            const Universe& u, const std::vector<Term>& terms) {
  out += std::string(keyword) + " " + std::string(name) + " range [" + format_double(u.lo()) +
         ", " + format_double(u.hi()) + "]\n";
  for (const Term& t : terms) {
    out += "  term " + t.name + " ";
    append_mf(out, t.mf);
    out += "\n";
  }
}

}  // namespace detail

/// Canonical text form: fixed key order, every config field explicit, one
/// rule per line, shortest round-trip reals. Serializing any two semantically
/// equal models yields identical bytes.
inline std::string serialize(const FisModel& model) {
  using detail::format_double;
  const RuleBase& rb = model.rulebase;
  std::string out;
  out += "system " + model.name +
         " kind=" + (rb.kind() == SystemKind::Mamdani ? "mamdani" : "sugeno") + "\n";
  out += "config and=" + std::string(rb.config().and_op == AndOp::Min ? "min" : "product") +
         " implication=" + (rb.config().implication == Implication::Clip ? "clip" : "scale") +
         " defuzz=" + std::string(to_string(rb.config().defuzz)) +
         " resolution=" + std::to_string(rb.config().resolution) + "\n";
  for (const LinguisticVariable& v : rb.inputs())
    detail::append_variable(out, "input", v.name(), v.universe(), v.terms());
  detail::append_variable(out, "output", rb.output_name(), rb.output_universe(), rb.output_terms());
  for (const Rule& rule : rb.rules()) {
    out += "rule: if ";
    for (std::size_t i = 0; i < rule.antecedents.size(); ++i) {
      if (i > 0) out += " and ";
      out += rule.antecedents[i].variable + " is " + rule.antecedents[i].term;
    }
    out += " then " + rb.output_name() + " is ";
    std::visit(detail::Overloaded{
                   [&](const MamdaniTerm& c) { out += c.term; },
                   [&](const MamdaniSingleton& c) {
                     out += "singleton(" + format_double(c.c0) + ")";
                   },
                   [&](const TakagiSugeno& c) {
                     out += "ts(" + format_double(c.d);
                     for (const auto& [name, coeff] : c.coeffs)
                       out += ", " + format_double(coeff) + "*" + name;
                     out += ")";
                   },
               },
               rule.consequent);
    out += "\n";
  }
  return out;
}

}  // namespace fiskit
