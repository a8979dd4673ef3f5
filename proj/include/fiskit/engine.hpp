#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fiskit/defuzz.hpp"
#include "fiskit/error.hpp"
#include "fiskit/membership.hpp"

namespace fiskit {

// ---------------------------------------------------------------------------
// Linguistic variables
// ---------------------------------------------------------------------------

struct Term {
  std::string name;
  MembershipFunction mf;
};

namespace detail {

inline void validate_mf(const MembershipFunction& mf, const Universe& universe,
                        const std::string& where) {
  std::visit(
      Overloaded{
          [&](const Bell1& f) {
            if (!std::isfinite(f.a) || !std::isfinite(f.b) || !std::isfinite(f.c))
              throw ParameterError(where + ": bell1 parameters must be finite");
            if (!(f.a != 0.0)) throw ParameterError(where + ": bell1 width a must be nonzero");
            if (!(f.b > 0.0)) throw ParameterError(where + ": bell1 exponent b must be positive");
          },
          [&](const Bell2& f) {
            if (!std::isfinite(f.a) || !std::isfinite(f.b) || !std::isfinite(f.c))
              throw ParameterError(where + ": bell2 parameters must be finite");
            if (!(f.a != 0.0)) throw ParameterError(where + ": bell2 width a must be nonzero");
            if (!(f.b > 0.0)) throw ParameterError(where + ": bell2 exponent b must be positive");
          },
          [&](const Sigmoid& f) {
            if (!std::isfinite(f.a) || !std::isfinite(f.c))
              throw ParameterError(where + ": sigmoid parameters must be finite");
          },
          [&](const Trapeze& f) {
            if (!std::isfinite(f.a) || !std::isfinite(f.b) || !std::isfinite(f.c))
              throw ParameterError(where + ": trapeze parameters must be finite");
            if (!(f.a > 0.0)) throw ParameterError(where + ": trapeze ramp width a must be positive");
            if (!(f.b >= 0.0))
              throw ParameterError(where + ": trapeze plateau half-width b must be nonnegative");
          },
          [&](const Singleton& f) {
            if (!std::isfinite(f.x0)) throw ParameterError(where + ": singleton point must be finite");
            if (!universe.contains(f.x0))
              throw ParameterError(where + ": singleton point lies outside the universe");
          },
      },
      mf);
}

}  // namespace detail

/// A named variable over a universe of discourse with at least one named
/// term. Immutable after construction; all lookups are read-only.
class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, Universe universe, std::vector<Term> terms)
      : name_(std::move(name)), universe_(universe), terms_(std::move(terms)) {
    if (name_.empty()) throw ModelError("variable needs a name");
    if (terms_.empty()) throw ModelError("variable '" + name_ + "' needs at least one term");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].name.empty()) throw ModelError("variable '" + name_ + "' has an unnamed term");
      for (std::size_t j = 0; j < i; ++j)
        if (terms_[i].name == terms_[j].name)
          throw ModelError("variable '" + name_ + "' defines term '" + terms_[i].name + "' twice");
      detail::validate_mf(terms_[i].mf, universe_, name_ + "." + terms_[i].name);
    }
  }

  const std::string& name() const noexcept { return name_; }
  const Universe& universe() const noexcept { return universe_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  const MembershipFunction* find_term(std::string_view term) const noexcept {
    for (const Term& t : terms_)
      if (t.name == term) return &t.mf;
    return nullptr;
  }

 private:
  std::string name_;
  Universe universe_;
  std::vector<Term> terms_;
};

// ---------------------------------------------------------------------------
// Rules
// ---------------------------------------------------------------------------

/// One "variable is term" clause of a rule's conjunction.
struct Antecedent {
  std::string variable;
  std::string term;
};

/// Consequent "output is <term>".
struct MamdaniTerm {
  std::string term;
};

/// Consequent "output is singleton(c0)".
struct MamdaniSingleton {
  double c0 = 0.0;
};

/// Affine consequent d + sum(coeff * input). Coefficients are keyed by input
/// variable name; variables without a coefficient contribute nothing.
struct TakagiSugeno {
  double d = 0.0;
  std::vector<std::pair<std::string, double>> coeffs;
};

using Consequent = std::variant<MamdaniTerm, MamdaniSingleton, TakagiSugeno>;

/// A conjunction of antecedents with one consequent. Rules carry no weights.
struct Rule {
  std::vector<Antecedent> antecedents;
  Consequent consequent;
};

enum class AndOp { Min, Product };
enum class Implication { Clip, Scale };
enum class SystemKind { Mamdani, Sugeno };

/// Operator set of the inference pipeline. Aggregation is fixed to pointwise
/// max; resolution is the output grid size.
struct InferenceConfig {
  AndOp and_op = AndOp::Min;
  Implication implication = Implication::Clip;
  DefuzzMethod defuzz = DefuzzMethod::Centroid;
  std::size_t resolution = 201;
};

/// Output of a Takagi-Sugeno system: a named crisp range, no terms.
struct OutputRange {
  std::string name;
  Universe universe;
};

// ---------------------------------------------------------------------------
// Rule base
// ---------------------------------------------------------------------------

/// The complete inference system: input variables, output, homogeneous rule
/// list and operator configuration. Construction validates name resolution,
/// consequent-kind homogeneity and parameter ranges, and canonicalizes rule
/// storage (antecedents and TS coefficients in input order, zero TS
/// coefficients dropped). Immutable afterwards; evaluation is pure.
class RuleBase {
 public:
  static RuleBase mamdani(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
                          std::vector<Rule> rules, InferenceConfig config = {}) {
    return RuleBase(SystemKind::Mamdani, std::move(inputs), output.name(), output.universe(),
                    output.terms(), std::move(rules), config);
  }

  static RuleBase sugeno(std::vector<LinguisticVariable> inputs, OutputRange output,
                         std::vector<Rule> rules, InferenceConfig config = {}) {
    return RuleBase(SystemKind::Sugeno, std::move(inputs), std::move(output.name),
                    output.universe, {}, std::move(rules), config);
  }

  SystemKind kind() const noexcept { return kind_; }
  const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
  const std::string& output_name() const noexcept { return output_name_; }
  const Universe& output_universe() const noexcept { return output_universe_; }
  const std::vector<Term>& output_terms() const noexcept { return output_terms_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const InferenceConfig& config() const noexcept { return config_; }

  std::size_t input_index(std::string_view name) const {
    for (std::size_t i = 0; i < inputs_.size(); ++i)
      if (inputs_[i].name() == name) return i;
    throw UnknownNameError("no input variable named '" + std::string(name) + "'");
  }

  const MembershipFunction& output_term(std::string_view name) const {
    for (const Term& t : output_terms_)
      if (t.name == name) return t.mf;
    throw UnknownNameError("no output term named '" + std::string(name) + "'");
  }

 private:
  RuleBase(SystemKind kind, std::vector<LinguisticVariable> inputs, std::string output_name,
           Universe output_universe, std::vector<Term> output_terms, std::vector<Rule> rules,
           InferenceConfig config)
      : kind_(kind),
        inputs_(std::move(inputs)),
        output_name_(std::move(output_name)),
        output_universe_(output_universe),
        output_terms_(std::move(output_terms)),
        rules_(std::move(rules)),
        config_(config) {
    if (inputs_.empty()) throw ModelError("rule base needs at least one input variable");
    if (rules_.empty()) throw ModelError("rule base needs at least one rule");
    if (config_.resolution < 2) throw ModelError("output resolution must be at least 2");

    for (std::size_t i = 0; i < inputs_.size(); ++i) {
      if (inputs_[i].name() == output_name_)
        throw ModelError("variable name '" + output_name_ + "' used for both input and output");
      for (std::size_t j = 0; j < i; ++j)
        if (inputs_[i].name() == inputs_[j].name())
          throw ModelError("duplicate input variable '" + inputs_[i].name() + "'");
    }
    if (kind_ == SystemKind::Mamdani && output_terms_.empty())
      throw ModelError("mamdani output '" + output_name_ + "' needs at least one term");
    for (const Term& t : output_terms_)
      detail::validate_mf(t.mf, output_universe_, output_name_ + "." + t.name);

    for (Rule& rule : rules_) {
      validate_antecedents(rule);
      validate_consequent(rule);
    }
  }

  void validate_antecedents(Rule& rule) {
    if (rule.antecedents.empty()) throw ModelError("rule needs at least one antecedent");
    for (const Antecedent& a : rule.antecedents) {
      const LinguisticVariable& v = inputs_[input_index(a.variable)];
      if (v.find_term(a.term) == nullptr)
        throw UnknownNameError("variable '" + a.variable + "' has no term '" + a.term + "'");
    }
    // canonical order; also rejects duplicated variables
    std::stable_sort(rule.antecedents.begin(), rule.antecedents.end(),
                     [&](const Antecedent& x, const Antecedent& y) {
                       return input_index(x.variable) < input_index(y.variable);
                     });
    for (std::size_t i = 1; i < rule.antecedents.size(); ++i)
      if (rule.antecedents[i].variable == rule.antecedents[i - 1].variable)
        throw ModelError("rule mentions variable '" + rule.antecedents[i].variable + "' twice");
  }

  void validate_consequent(Rule& rule) {
    std::visit(detail::Overloaded{
                   [&](const MamdaniTerm& c) {
                     require_kind(SystemKind::Mamdani);
                     output_term(c.term);  // throws when unresolved
                   },
                   [&](const MamdaniSingleton& c) {
                     require_kind(SystemKind::Mamdani);
                     if (!std::isfinite(c.c0) || !output_universe_.contains(c.c0))
                       throw ModelError("singleton consequent lies outside the output range");
                   },
                   [&](TakagiSugeno& c) {
                     require_kind(SystemKind::Sugeno);
                     if (!std::isfinite(c.d)) throw ModelError("ts consequent constant must be finite");
                     std::vector<std::pair<std::size_t, double>> by_index;
                     for (const auto& [name, coeff] : c.coeffs) {
                       if (!std::isfinite(coeff))
                         throw ModelError("ts coefficient for '" + name + "' must be finite");
                       by_index.emplace_back(input_index(name), coeff);
                     }
                     std::sort(by_index.begin(), by_index.end(),
                               [](const auto& x, const auto& y) { return x.first < y.first; });
                     for (std::size_t i = 1; i < by_index.size(); ++i)
                       if (by_index[i].first == by_index[i - 1].first)
                         throw ModelError("ts consequent repeats variable '" +
                                          inputs_[by_index[i].first].name() + "'");
                     c.coeffs.clear();
                     for (const auto& [idx, coeff] : by_index)
                       if (coeff != 0.0) c.coeffs.emplace_back(inputs_[idx].name(), coeff);
                   },
               },
               rule.consequent);
  }

  void require_kind(SystemKind expected) const {
    if (kind_ != expected)
      throw ModelError(kind_ == SystemKind::Mamdani
                           ? "mamdani rule base cannot hold a ts consequent"
                           : "sugeno rule base cannot hold a mamdani consequent");
  }

  SystemKind kind_;
  std::vector<LinguisticVariable> inputs_;
  std::string output_name_;
  Universe output_universe_;
  std::vector<Term> output_terms_;
  std::vector<Rule> rules_;
  InferenceConfig config_;
};

// ---------------------------------------------------------------------------
// Fuzzification and rule firing
// ---------------------------------------------------------------------------

using CrispInputs = std::map<std::string, double>;
using InputGrades = std::map<std::string, std::map<std::string, double>>;

/// Singleton fuzzification: one grade per term, each the term's membership
/// function evaluated at x. Throws DomainError when x leaves the universe.
inline std::vector<std::pair<std::string, double>> fuzzify(const LinguisticVariable& variable,
                                                           double x) {
  if (!std::isfinite(x) || !variable.universe().contains(x))
    throw DomainError("input '" + variable.name() + "' is outside its universe of discourse");
  std::vector<std::pair<std::string, double>> grades;
  grades.reserve(variable.terms().size());
  for (const Term& t : variable.terms()) grades.emplace_back(t.name, evaluate(t.mf, x));
  return grades;
}

/// Firing degree: the and_op fold over the rule's antecedent grades.
inline double fire_rule(const Rule& rule, const InputGrades& grades, AndOp and_op) {
  if (rule.antecedents.empty()) throw ModelError("rule needs at least one antecedent");
  double alpha = 0.0;
  bool first = true;
  for (const Antecedent& a : rule.antecedents) {
    const auto vi = grades.find(a.variable);
    if (vi == grades.end())
      throw UnknownNameError("no grades for variable '" + a.variable + "'");
    const auto ti = vi->second.find(a.term);
    if (ti == vi->second.end())
      throw UnknownNameError("variable '" + a.variable + "' has no grade for term '" + a.term + "'");
    const double g = ti->second;
    if (first) {
      alpha = g;
      first = false;
    } else {
      alpha = and_op == AndOp::Min ? std::min(alpha, g) : alpha * g;
    }
  }
  return alpha;
}

namespace detail {

inline InputGrades fuzzify_all(const RuleBase& rb, const CrispInputs& inputs) {
  InputGrades grades;
  for (const LinguisticVariable& v : rb.inputs()) {
    const auto it = inputs.find(v.name());
    if (it == inputs.end()) throw ModelError("missing crisp value for input '" + v.name() + "'");
    auto& per_term = grades[v.name()];
    for (auto& [term, grade] : fuzzify(v, it->second)) per_term.emplace(std::move(term), grade);
  }
  if (inputs.size() != rb.inputs().size())
    for (const auto& [name, x] : inputs) rb.input_index(name);  // reports the unknown name
  return grades;
}

inline std::vector<double> firing_degrees(const RuleBase& rb, const InputGrades& grades) {
  std::vector<double> alphas;
  alphas.reserve(rb.rules().size());
  for (const Rule& rule : rb.rules()) alphas.push_back(fire_rule(rule, grades, rb.config().and_op));
  return alphas;
}

inline DiscretizedFuzzySet consequent_set(const RuleBase& rb, const Consequent& consequent,
                                          const Universe& grid) {
  if (const auto* t = std::get_if<MamdaniTerm>(&consequent)) return sample(rb.output_term(t->term), grid);
  if (const auto* s = std::get_if<MamdaniSingleton>(&consequent))
    return sample(Singleton{s->c0}, grid);
  throw ModelError("consequent is not of mamdani kind");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Inference
// ---------------------------------------------------------------------------

/// Mamdani inference: each rule's consequent set, sampled on the output grid,
/// is clipped (min) or scaled (product) by the rule's firing degree, and the
/// per-rule sets are aggregated pointwise by max. Throws ZeroActivationError
/// when every rule fires at exactly zero.
inline DiscretizedFuzzySet infer_mamdani(const RuleBase& rb, const CrispInputs& inputs) {
  if (rb.kind() != SystemKind::Mamdani) throw ModelError("infer_mamdani needs a mamdani rule base");
  const InputGrades grades = detail::fuzzify_all(rb, inputs);
  const std::vector<double> alphas = detail::firing_degrees(rb, grades);
  if (std::none_of(alphas.begin(), alphas.end(), [](double a) { return a > 0.0; }))
    throw ZeroActivationError("no rule fired");

  const Universe grid(rb.output_universe().lo(), rb.output_universe().hi(), rb.config().resolution);
  DiscretizedFuzzySet aggregate{grid, std::vector<double>(grid.size(), 0.0)};
  for (std::size_t i = 0; i < rb.rules().size(); ++i) {
    if (!(alphas[i] > 0.0)) continue;
    const DiscretizedFuzzySet cons = detail::consequent_set(rb, rb.rules()[i].consequent, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double v = rb.config().implication == Implication::Clip
                           ? std::min(alphas[i], cons.grades[k])
                           : alphas[i] * cons.grades[k];
      aggregate.grades[k] = std::max(aggregate.grades[k], v);
    }
  }
  return aggregate;
}

/// Takagi-Sugeno inference: normalized weighted average of the rule outputs,
/// sum(alpha_i * f_i(x)) / sum(alpha_i).
inline double infer_ts(const RuleBase& rb, const CrispInputs& inputs) {
  if (rb.kind() != SystemKind::Sugeno) throw ModelError("infer_ts needs a sugeno rule base");
  const InputGrades grades = detail::fuzzify_all(rb, inputs);
  double num = 0.0, den = 0.0;
  for (const Rule& rule : rb.rules()) {
    const double alpha = fire_rule(rule, grades, rb.config().and_op);
    const auto& f = std::get<TakagiSugeno>(rule.consequent);
    double value = f.d;
    for (const auto& [name, coeff] : f.coeffs) value += coeff * inputs.at(name);
    num += alpha * value;
    den += alpha;
  }
  if (!(den > 0.0)) throw ZeroActivationError("no rule fired");
  return num / den;
}

/// Brute-force sup-min composition oracle for infer_mamdani.
///
/// Per rule the explicit implication relation R_i(x_1..x_m, y) =
/// min(mu_A1(x_1), .., mu_Am(x_m), mu_B(y)) is materialized over the product
/// of the input grids and the output grid (variables absent from a rule are
/// unconstrained, grade 1). The input set A' is composed with each relation
/// by sup over input tuples of min(A'(tuple), R_i(tuple, y)) and the rule
/// results aggregate pointwise by max. With singleton inputs on grid points
/// and a min/clip/max configuration this equals infer_mamdani pointwise.
inline DiscretizedFuzzySet compose_relation(const RuleBase& rb,
                                            const std::map<std::string, DiscretizedFuzzySet>& input_sets,
                                            std::size_t max_entries = 1'000'000) {
  if (rb.kind() != SystemKind::Mamdani) throw ModelError("compose_relation needs a mamdani rule base");
  const std::size_t m = rb.inputs().size();

  std::vector<const std::vector<double>*> in_grades(m);
  std::vector<std::size_t> sizes(m);
  std::size_t tuple_count = 1;
  for (std::size_t v = 0; v < m; ++v) {
    const LinguisticVariable& var = rb.inputs()[v];
    const auto it = input_sets.find(var.name());
    if (it == input_sets.end()) throw ModelError("missing input set for '" + var.name() + "'");
    if (!(it->second.universe == var.universe()) || it->second.grades.size() != var.universe().size())
      throw ModelError("input set for '" + var.name() + "' is not on the variable's grid");
    in_grades[v] = &it->second.grades;
    sizes[v] = var.universe().size();
    if (tuple_count > max_entries / sizes[v]) throw RelationSizeError("relation exceeds the entry budget");
    tuple_count *= sizes[v];
  }

  const Universe grid(rb.output_universe().lo(), rb.output_universe().hi(), rb.config().resolution);
  const std::size_t n_out = grid.size();
  if (tuple_count > max_entries / n_out) throw RelationSizeError("relation exceeds the entry budget");

  DiscretizedFuzzySet aggregate{grid, std::vector<double>(n_out, 0.0)};
  std::vector<double> relation(tuple_count * n_out);

  for (const Rule& rule : rb.rules()) {
    // Antecedent grades per variable on that variable's own grid; nullptr
    // marks a variable the rule does not constrain.
    std::vector<std::vector<double>> ant(m);
    std::vector<bool> constrained(m, false);
    for (const Antecedent& a : rule.antecedents) {
      const std::size_t v = rb.input_index(a.variable);
      const MembershipFunction* mf = rb.inputs()[v].find_term(a.term);
      if (mf == nullptr)
        throw UnknownNameError("variable '" + a.variable + "' has no term '" + a.term + "'");
      ant[v] = sample(*mf, rb.inputs()[v].universe()).grades;
      constrained[v] = true;
    }
    const std::vector<double> cons = detail::consequent_set(rb, rule.consequent, grid).grades;

    // Materialize R_i.
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t t = 0; t < tuple_count; ++t) {
      double ant_min = 1.0;
      for (std::size_t v = 0; v < m; ++v)
        if (constrained[v]) ant_min = std::min(ant_min, ant[v][idx[v]]);
      double* row = relation.data() + t * n_out;
      for (std::size_t y = 0; y < n_out; ++y) row[y] = std::min(ant_min, cons[y]);
      for (std::size_t v = m; v-- > 0;) {
        if (++idx[v] < sizes[v]) break;
        idx[v] = 0;
      }
    }

    // B' = A' o R_i, then aggregate by max.
    std::fill(idx.begin(), idx.end(), 0);
    for (std::size_t t = 0; t < tuple_count; ++t) {
      double a_in = 1.0;
      for (std::size_t v = 0; v < m; ++v) a_in = std::min(a_in, (*in_grades[v])[idx[v]]);
      if (a_in > 0.0) {
        const double* row = relation.data() + t * n_out;
        for (std::size_t y = 0; y < n_out; ++y)
          aggregate.grades[y] = std::max(aggregate.grades[y], std::min(a_in, row[y]));
      }
      for (std::size_t v = m; v-- > 0;) {
        if (++idx[v] < sizes[v]) break;
        idx[v] = 0;
      }
    }
  }
  return aggregate;
}

/// Crisp-input oracle entry point: each input is fuzzified as a singleton on
/// its variable's grid before composition.
inline DiscretizedFuzzySet compose_relation(const RuleBase& rb, const CrispInputs& inputs,
                                            std::size_t max_entries = 1'000'000) {
  std::map<std::string, DiscretizedFuzzySet> sets;
  for (const LinguisticVariable& v : rb.inputs()) {
    const auto it = inputs.find(v.name());
    if (it == inputs.end()) throw ModelError("missing crisp value for input '" + v.name() + "'");
    if (!std::isfinite(it->second) || !v.universe().contains(it->second))
      throw DomainError("input '" + v.name() + "' is outside its universe of discourse");
    sets.emplace(v.name(), sample(Singleton{it->second}, v.universe()));
  }
  return compose_relation(rb, sets, max_entries);
}

/// Full pipeline to a crisp output. Sugeno systems run infer_ts; mamdani
/// systems run infer_mamdani followed by the configured (or overridden)
/// defuzzifier. WeightedAverage applies to the (c0, alpha) pairs of an
/// all-singleton mamdani system instead of a grid.
inline double evaluate(const RuleBase& rb, const CrispInputs& inputs,
                       std::optional<DefuzzMethod> defuzz_override = {}) {
  if (rb.kind() == SystemKind::Sugeno) {
    if (defuzz_override)
      throw ModelError("defuzz override applies to mamdani systems only");
    return infer_ts(rb, inputs);
  }
  const DefuzzMethod method = defuzz_override.value_or(rb.config().defuzz);
  if (method == DefuzzMethod::WeightedAverage) {
    const InputGrades grades = detail::fuzzify_all(rb, inputs);
    std::vector<WeightedSample> pairs;
    pairs.reserve(rb.rules().size());
    for (const Rule& rule : rb.rules()) {
      const auto* s = std::get_if<MamdaniSingleton>(&rule.consequent);
      if (s == nullptr)
        throw ModelError("wavg defuzzification needs singleton consequents only");
      pairs.push_back({s->c0, fire_rule(rule, grades, rb.config().and_op)});
    }
    return defuzz_weighted(pairs);
  }
  return defuzz(infer_mamdani(rb, inputs), method);
}

}  // namespace fiskit
