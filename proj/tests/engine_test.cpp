#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "fiskit/engine.hpp"
#include "support/generators.hpp"

using namespace fiskit;
using Catch::Matchers::WithinAbs;

namespace {

LinguisticVariable ramp_pair_variable(std::string name = "x") {
  // "low" peaks at 0, "high" peaks at 10; both supports end at 5.
  return LinguisticVariable(std::move(name), Universe(0, 10, 11),
                            {{"low", Trapeze{5, 0, 0}}, {"high", Trapeze{5, 0, 10}}});
}

LinguisticVariable temp_variable() {
  // full-range ramps: cold(2.5) = 0.75, warm(2.5) = 0.25
  return LinguisticVariable("temp", Universe(0, 10, 11),
                            {{"cold", Trapeze{10, 0, 0}}, {"warm", Trapeze{10, 0, 10}}});
}

InputGrades grades_for(const RuleBase& rb, const CrispInputs& xs) {
  InputGrades grades;
  for (const LinguisticVariable& v : rb.inputs()) {
    auto& per_term = grades[v.name()];
    for (const auto& [term, grade] : fuzzify(v, xs.at(v.name()))) per_term.emplace(term, grade);
  }
  return grades;
}

}  // namespace

TEST_CASE("fuzzify grades every term at the crisp point") {
  const auto v = ramp_pair_variable();
  const auto at0 = fuzzify(v, 0);
  REQUIRE(at0.size() == 2);
  CHECK(at0[0] == std::pair<std::string, double>{"low", 1.0});
  CHECK(at0[1] == std::pair<std::string, double>{"high", 0.0});

  const auto at5 = fuzzify(v, 5);
  CHECK(at5[0].second == 0.0);
  CHECK(at5[1].second == 0.0);

  const LinguisticVariable s("s", Universe(0, 10, 11), {{"rise", Sigmoid{1, 5}}});
  CHECK(fuzzify(s, 5)[0].second == 0.5);
}

TEST_CASE("fuzzify rejects out-of-universe inputs") {
  CHECK_THROWS_AS(fuzzify(ramp_pair_variable(), 10.5), DomainError);
  CHECK_THROWS_AS(fuzzify(ramp_pair_variable(), -0.1), DomainError);
}

TEST_CASE("firing degree folds the antecedent grades") {
  const InputGrades grades{{"x1", {{"A", 0.7}}}, {"x2", {{"B", 0.4}}}};
  const Rule rule{{{"x1", "A"}, {"x2", "B"}}, MamdaniTerm{"out"}};
  CHECK(fire_rule(rule, grades, AndOp::Min) == 0.4);
  CHECK_THAT(fire_rule(rule, grades, AndOp::Product), WithinAbs(0.28, 1e-15));

  const Rule single{{{"x1", "A"}}, MamdaniTerm{"out"}};
  CHECK(fire_rule(single, grades, AndOp::Min) == 0.7);
  CHECK(fire_rule(single, grades, AndOp::Product) == 0.7);

  const Rule missing{{{"x9", "A"}}, MamdaniTerm{"out"}};
  CHECK_THROWS_AS(fire_rule(missing, grades, AndOp::Min), UnknownNameError);
}

TEST_CASE("a rule firing at one reproduces its consequent set exactly") {
  LinguisticVariable out("power", Universe(0, 100, 2),
                         {{"big", Trapeze{20, 10, 70}}});
  InferenceConfig config;
  config.resolution = 101;
  const auto rb = RuleBase::mamdani({temp_variable()}, out,
                                    {Rule{{{"temp", "cold"}}, MamdaniTerm{"big"}}}, config);
  const auto result = infer_mamdani(rb, {{"temp", 0.0}});  // cold(0) = 1
  const auto expected = sample(Trapeze{20, 10, 70}, Universe(0, 100, 101));
  REQUIRE(result.grades == expected.grades);
}

TEST_CASE("identical consequents clipped at 0.75 and 0.25 keep the higher clip") {
  LinguisticVariable out("power", Universe(0, 100, 2), {{"big", Trapeze{20, 10, 70}}});
  InferenceConfig config;
  config.resolution = 101;
  const auto rb = RuleBase::mamdani({temp_variable()}, out,
                                    {Rule{{{"temp", "cold"}}, MamdaniTerm{"big"}},
                                     Rule{{{"temp", "warm"}}, MamdaniTerm{"big"}}},
                                    config);
  const auto result = infer_mamdani(rb, {{"temp", 2.5}});
  const auto term = sample(Trapeze{20, 10, 70}, Universe(0, 100, 101));
  for (std::size_t k = 0; k < term.grades.size(); ++k)
    REQUIRE(result.grades[k] == std::min(0.75, term.grades[k]));
}

TEST_CASE("mamdani inference raises when no rule fires") {
  LinguisticVariable out("power", Universe(0, 100, 2), {{"big", Trapeze{20, 10, 70}}});
  const auto rb = RuleBase::mamdani({ramp_pair_variable()}, out,
                                    {Rule{{{"x", "low"}}, MamdaniTerm{"big"}},
                                     Rule{{{"x", "high"}}, MamdaniTerm{"big"}}});
  CHECK_THROWS_AS(infer_mamdani(rb, {{"x", 5.0}}), ZeroActivationError);
}

TEST_CASE("takagi-sugeno weighted average") {
  SECTION("single affine rule") {
    const auto rb = RuleBase::sugeno({temp_variable()}, OutputRange{"u", Universe(0, 30, 2)},
                                     {Rule{{{"temp", "cold"}}, TakagiSugeno{1.0, {{"temp", 2.0}}}}});
    CHECK(infer_ts(rb, {{"temp", 3.0}}) == 7.0);
  }
  SECTION("two constant rules at firing degrees 0.75 / 0.25") {
    const auto rb = RuleBase::sugeno({temp_variable()}, OutputRange{"u", Universe(0, 10, 2)},
                                     {Rule{{{"temp", "warm"}}, TakagiSugeno{0.0, {}}},
                                      Rule{{{"temp", "cold"}}, TakagiSugeno{10.0, {}}}});
    CHECK_THAT(infer_ts(rb, {{"temp", 2.5}}), WithinAbs(7.5, 1e-12));
  }
  SECTION("zero activation raises") {
    const auto rb = RuleBase::sugeno({ramp_pair_variable()}, OutputRange{"u", Universe(0, 1, 2)},
                                     {Rule{{{"x", "low"}}, TakagiSugeno{1.0, {}}}});
    CHECK_THROWS_AS(infer_ts(rb, {{"x", 5.0}}), ZeroActivationError);
  }
}

TEST_CASE("relation composition with one-hot inputs clips the consequent") {
  LinguisticVariable out("power", Universe(0, 100, 2), {{"big", Trapeze{20, 10, 70}}});
  InferenceConfig config;
  config.resolution = 21;
  const auto rb = RuleBase::mamdani({temp_variable()}, out,
                                    {Rule{{{"temp", "cold"}}, MamdaniTerm{"big"}}}, config);
  const double x = Universe(0, 10, 11).point(3);  // grid point, cold(x) = 0.7
  const auto composed = compose_relation(rb, CrispInputs{{"temp", x}});
  const double alpha = eval_trapeze(x, 10, 0, 0);
  const auto term = sample(Trapeze{20, 10, 70}, Universe(0, 100, 21));
  for (std::size_t k = 0; k < term.grades.size(); ++k)
    REQUIRE(composed.grades[k] == std::min(alpha, term.grades[k]));
}

TEST_CASE("a zero-firing rule contributes an all-zero relation") {
  LinguisticVariable out("power", Universe(0, 100, 2), {{"big", Trapeze{20, 10, 70}}});
  const auto rb = RuleBase::mamdani({ramp_pair_variable()}, out,
                                    {Rule{{{"x", "high"}}, MamdaniTerm{"big"}}});
  const auto composed = compose_relation(rb, CrispInputs{{"x", 0.0}});
  CHECK(std::all_of(composed.grades.begin(), composed.grades.end(),
                    [](double g) { return g == 0.0; }));
}

TEST_CASE("relation size budget is enforced") {
  LinguisticVariable out("power", Universe(0, 100, 2), {{"big", Trapeze{20, 10, 70}}});
  const auto rb = RuleBase::mamdani({temp_variable()}, out,
                                    {Rule{{{"temp", "cold"}}, MamdaniTerm{"big"}}});
  CHECK_THROWS_AS(compose_relation(rb, CrispInputs{{"temp", 0.0}}, 100), RelationSizeError);
}

TEST_CASE("relational oracle equals direct mamdani inference", "[property]") {
  gen::Rng rng(9001);
  for (int i = 0; i < 25; ++i) {
    const RuleBase rb = gen::random_mamdani(rng);
    const CrispInputs xs = gen::random_grid_inputs(rng, rb);
    try {
      const auto direct = infer_mamdani(rb, xs);
      const auto composed = compose_relation(rb, xs);
      REQUIRE(direct.grades.size() == composed.grades.size());
      for (std::size_t k = 0; k < direct.grades.size(); ++k)
        REQUIRE_THAT(direct.grades[k], WithinAbs(composed.grades[k], 1e-12));
    } catch (const ZeroActivationError&) {
      const auto composed = compose_relation(rb, xs);
      REQUIRE(std::all_of(composed.grades.begin(), composed.grades.end(),
                          [](double g) { return g == 0.0; }));
    }
  }
}

TEST_CASE("constant-consequent sugeno equals singleton mamdani under wavg", "[property]") {
  gen::Rng rng(9002);
  for (int i = 0; i < 25; ++i) {
    const gen::ReductionPair pair = gen::random_reduction_pair(rng);
    for (int j = 0; j < 10; ++j) {
      const CrispInputs xs = gen::random_inputs(rng, pair.sugeno);
      try {
        const double ts = infer_ts(pair.sugeno, xs);
        REQUIRE_THAT(evaluate(pair.mamdani, xs), WithinAbs(ts, 1e-9));
      } catch (const ZeroActivationError&) {
        CHECK_THROWS_AS(evaluate(pair.mamdani, xs), ZeroActivationError);
      }
    }
  }
}

TEST_CASE("raising an antecedent grade never lowers the firing degree", "[property]") {
  gen::Rng rng(9003);
  for (int i = 0; i < 300; ++i) {
    InputGrades grades{{"a", {{"t", gen::uniform(rng, 0.0, 1.0)}}},
                       {"b", {{"t", gen::uniform(rng, 0.0, 1.0)}}},
                       {"c", {{"t", gen::uniform(rng, 0.0, 1.0)}}}};
    const Rule rule{{{"a", "t"}, {"b", "t"}, {"c", "t"}}, MamdaniTerm{"x"}};
    for (AndOp op : {AndOp::Min, AndOp::Product}) {
      const double before = fire_rule(rule, grades, op);
      auto& g = grades["b"]["t"];
      g = std::min(1.0, g + gen::uniform(rng, 0.0, 1.0));
      REQUIRE(fire_rule(rule, grades, op) >= before);
    }
  }
}

TEST_CASE("aggregate dominates each rule's contribution and stays below one", "[property]") {
  gen::Rng rng(9004);
  for (int i = 0; i < 20; ++i) {
    const RuleBase rb = gen::random_mamdani(rng, /*fixed_ops=*/false);
    const CrispInputs xs = gen::random_grid_inputs(rng, rb);
    try {
      const auto aggregate = infer_mamdani(rb, xs);
      const auto grades = grades_for(rb, xs);
      const Universe grid(rb.output_universe().lo(), rb.output_universe().hi(),
                          rb.config().resolution);
      for (const Rule& rule : rb.rules()) {
        const double alpha = fire_rule(rule, grades, rb.config().and_op);
        DiscretizedFuzzySet cons{grid, std::vector<double>(grid.size(), 0.0)};
        if (const auto* t = std::get_if<MamdaniTerm>(&rule.consequent))
          cons = sample(rb.output_term(t->term), grid);
        else
          cons = sample(Singleton{std::get<MamdaniSingleton>(rule.consequent).c0}, grid);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          const double contribution = rb.config().implication == Implication::Clip
                                          ? std::min(alpha, cons.grades[k])
                                          : alpha * cons.grades[k];
          REQUIRE(aggregate.grades[k] >= contribution);
          REQUIRE(aggregate.grades[k] <= 1.0);
        }
      }
    } catch (const ZeroActivationError&) {
      // nothing fired; nothing to dominate
    }
  }
}

TEST_CASE("aggregate height equals the top firing degree when terms reach one") {
  // grid step 1 and integer centers keep every consequent peak on the grid
  LinguisticVariable out("power", Universe(0, 100, 2),
                         {{"small", Trapeze{30, 5, 30}}, {"large", Trapeze{30, 5, 70}}});
  InferenceConfig config;
  config.resolution = 101;
  const auto rb = RuleBase::mamdani({temp_variable()}, out,
                                    {Rule{{{"temp", "cold"}}, MamdaniTerm{"small"}},
                                     Rule{{{"temp", "warm"}}, MamdaniTerm{"large"}}},
                                    config);
  const auto result = infer_mamdani(rb, {{"temp", 2.5}});
  CHECK(*std::max_element(result.grades.begin(), result.grades.end()) == 0.75);
}

TEST_CASE("evaluation is safe from concurrent threads") {
  gen::Rng rng(9005);
  const RuleBase rb = gen::random_mamdani(rng);
  const CrispInputs xs = gen::random_grid_inputs(rng, rb);
  double reference = -1;
  bool reference_threw = false;
  try {
    reference = evaluate(rb, xs);
  } catch (const Error&) {
    reference_threw = true;
  }
  std::vector<std::thread> workers;
  std::vector<double> results(8, -2);
  std::vector<bool> threw(8, false);
  for (int t = 0; t < 8; ++t)
    workers.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        try {
          results[t] = evaluate(rb, xs);
        } catch (const Error&) {
          threw[t] = true;
        }
      }
    });
  for (auto& w : workers) w.join();
  for (int t = 0; t < 8; ++t) {
    CHECK(threw[t] == reference_threw);
    if (!reference_threw) CHECK(results[t] == reference);
  }
}

TEST_CASE("rule base construction validates structure") {
  LinguisticVariable in = temp_variable();
  LinguisticVariable out("power", Universe(0, 100, 2), {{"big", Trapeze{20, 10, 70}}});

  SECTION("consequent kinds must be homogeneous") {
    CHECK_THROWS_AS(RuleBase::mamdani({in}, out,
                                      {Rule{{{"temp", "cold"}}, MamdaniTerm{"big"}},
                                       Rule{{{"temp", "warm"}}, TakagiSugeno{1.0, {}}}}),
                    ModelError);
    CHECK_THROWS_AS(RuleBase::sugeno({in}, OutputRange{"u", Universe(0, 1, 2)},
                                     {Rule{{{"temp", "cold"}}, MamdaniTerm{"big"}}}),
                    ModelError);
  }
  SECTION("duplicate antecedent variables are rejected") {
    CHECK_THROWS_AS(RuleBase::mamdani({in}, out,
                                      {Rule{{{"temp", "cold"}, {"temp", "warm"}},
                                            MamdaniTerm{"big"}}}),
                    ModelError);
  }
  SECTION("unresolved names are rejected") {
    CHECK_THROWS_AS(RuleBase::mamdani({in}, out, {Rule{{{"nope", "cold"}}, MamdaniTerm{"big"}}}),
                    UnknownNameError);
    CHECK_THROWS_AS(RuleBase::mamdani({in}, out, {Rule{{{"temp", "nope"}}, MamdaniTerm{"big"}}}),
                    UnknownNameError);
    CHECK_THROWS_AS(RuleBase::mamdani({in}, out, {Rule{{{"temp", "cold"}}, MamdaniTerm{"nope"}}}),
                    UnknownNameError);
  }
  SECTION("singleton consequents must lie inside the output range") {
    CHECK_THROWS_AS(RuleBase::mamdani({in}, out, {Rule{{{"temp", "cold"}}, MamdaniSingleton{101}}}),
                    ModelError);
  }
  SECTION("empty rule list is rejected") {
    CHECK_THROWS_AS(RuleBase::mamdani({in}, out, {}), ModelError);
  }
}

TEST_CASE("rule storage is canonicalized at construction") {
  LinguisticVariable a = temp_variable();
  LinguisticVariable b = ramp_pair_variable("speed");
  LinguisticVariable out("power", Universe(0, 100, 2), {{"big", Trapeze{20, 10, 70}}});
  const auto rb = RuleBase::mamdani(
      {a, b}, out, {Rule{{{"speed", "low"}, {"temp", "cold"}}, MamdaniTerm{"big"}}});
  REQUIRE(rb.rules()[0].antecedents[0].variable == "temp");
  REQUIRE(rb.rules()[0].antecedents[1].variable == "speed");

  const auto ts = RuleBase::sugeno(
      {a, b}, OutputRange{"u", Universe(0, 1, 2)},
      {Rule{{{"temp", "cold"}},
            TakagiSugeno{1.0, {{"speed", 2.0}, {"temp", 0.0}}}}});
  const auto& f = std::get<TakagiSugeno>(ts.rules()[0].consequent);
  REQUIRE(f.coeffs.size() == 1);  // zero coefficient dropped
  REQUIRE(f.coeffs[0].first == "speed");
}

TEST_CASE("evaluate drives the full pipeline") {
  LinguisticVariable out("power", Universe(0, 10, 2), {{"any", Trapeze{1, 10, 5}}});
  InferenceConfig wavg;
  wavg.defuzz = DefuzzMethod::WeightedAverage;
  const auto rb = RuleBase::mamdani({temp_variable()}, out,
                                    {Rule{{{"temp", "warm"}}, MamdaniSingleton{0}},
                                     Rule{{{"temp", "cold"}}, MamdaniSingleton{10}}},
                                    wavg);
  CHECK_THAT(evaluate(rb, {{"temp", 2.5}}), WithinAbs(7.5, 1e-12));

  SECTION("override applies to mamdani only") {
    const auto ts = RuleBase::sugeno({temp_variable()}, OutputRange{"u", Universe(0, 1, 2)},
                                     {Rule{{{"temp", "cold"}}, TakagiSugeno{1.0, {}}}});
    CHECK_THROWS_AS(evaluate(ts, {{"temp", 2.5}}, DefuzzMethod::Centroid), ModelError);
  }
  SECTION("wavg needs singleton consequents") {
    const auto terms = RuleBase::mamdani({temp_variable()}, out,
                                         {Rule{{{"temp", "cold"}}, MamdaniTerm{"any"}}});
    CHECK_THROWS_AS(evaluate(terms, {{"temp", 2.5}}, DefuzzMethod::WeightedAverage), ModelError);
  }
  SECTION("missing and unknown inputs are reported") {
    const auto terms = RuleBase::mamdani({temp_variable()}, out,
                                         {Rule{{{"temp", "cold"}}, MamdaniTerm{"any"}}});
    CHECK_THROWS_AS(evaluate(terms, {}), ModelError);
    CHECK_THROWS_AS(evaluate(terms, {{"temp", 1.0}, {"bogus", 1.0}}), UnknownNameError);
  }
}
