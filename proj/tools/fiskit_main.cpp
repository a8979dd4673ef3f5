// fiskit command line: validate and evaluate .fis models, sweep control
// surfaces, and sample membership functions as plain text for plotting.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fiskit/detail/numeric.hpp"
#include "fiskit/fiskit.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;  // domain or validation failure
constexpr int kUsage = 2;    // I/O or usage failure

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

std::optional<fiskit::FisModel> load_model(const std::string& path, int& status) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read '" << path << "'\n";
    status = kUsage;
    return std::nullopt;
  }
  try {
    return fiskit::parse(text);
  } catch (const fiskit::ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    status = kFailure;
    return std::nullopt;
  }
}

struct RangeSpec {
  double lo = 0, step = 0, hi = 0;
};

std::optional<RangeSpec> parse_range_spec(const std::string& s) {
  const auto p1 = s.find(':');
  const auto p2 = s.find(':', p1 == std::string::npos ? p1 : p1 + 1);
  if (p1 == std::string::npos || p2 == std::string::npos) return std::nullopt;
  const auto lo = fiskit::detail::parse_double(s.substr(0, p1));
  const auto step = fiskit::detail::parse_double(s.substr(p1 + 1, p2 - p1 - 1));
  const auto hi = fiskit::detail::parse_double(s.substr(p2 + 1));
  if (!lo || !step || !hi) return std::nullopt;
  return RangeSpec{*lo, *step, *hi};
}

int parse_inputs(const std::vector<std::string>& pairs, fiskit::CrispInputs& inputs) {
  for (const std::string& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::cerr << "error: --in expects name=value, got '" << p << "'\n";
      return kUsage;
    }
    const std::string name = p.substr(0, eq);
    const auto value = fiskit::detail::parse_double(p.substr(eq + 1));
    if (!value) {
      std::cerr << "error: --in value for '" << name << "' is not a number\n";
      return kUsage;
    }
    if (!inputs.emplace(name, *value).second) {
      std::cerr << "error: --in names '" << name << "' twice\n";
      return kUsage;
    }
  }
  return kOk;
}

std::optional<fiskit::DefuzzMethod> parse_defuzz_flag(const std::string& flag, int& status) {
  if (flag.empty()) return std::nullopt;
  const auto method = fiskit::parse_defuzz_method(flag);
  if (!method) {
    std::cerr << "error: --defuzz must be one of centroid|bisector|mom|som|lom|wavg\n";
    status = kUsage;
  }
  return method;
}

void clamp_inputs(const fiskit::RuleBase& rb, fiskit::CrispInputs& inputs) {
  for (const fiskit::LinguisticVariable& v : rb.inputs()) {
    const auto it = inputs.find(v.name());
    if (it != inputs.end()) it->second = std::clamp(it->second, v.universe().lo(), v.universe().hi());
  }
}

int cmd_validate(const std::string& path) {
  int status = kOk;
  const auto model = load_model(path, status);
  if (!model) return status;
  const fiskit::RuleBase& rb = model->rulebase;
  std::cout << model->name << ": "
            << (rb.kind() == fiskit::SystemKind::Mamdani ? "mamdani" : "sugeno") << ", "
            << rb.inputs().size() << " inputs, " << rb.rules().size() << " rules\n";
  return kOk;
}

int cmd_eval(const std::string& path, const std::vector<std::string>& in_flags,
             const std::string& defuzz_flag, bool clamp) {
  int status = kOk;
  const auto model = load_model(path, status);
  if (!model) return status;
  fiskit::CrispInputs inputs;
  if (const int rc = parse_inputs(in_flags, inputs); rc != kOk) return rc;
  const auto method_override = parse_defuzz_flag(defuzz_flag, status);
  if (status != kOk) return status;
  if (clamp) clamp_inputs(model->rulebase, inputs);
  try {
    std::cout << fiskit::detail::format_sig12(fiskit::evaluate(model->rulebase, inputs, method_override))
              << "\n";
    return kOk;
  } catch (const fiskit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

int cmd_surface(const std::string& path, const std::vector<std::string>& var_flags,
                const std::vector<std::string>& in_flags, const std::string& defuzz_flag,
                bool clamp) {
  int status = kOk;
  const auto model = load_model(path, status);
  if (!model) return status;
  const fiskit::RuleBase& rb = model->rulebase;

  struct Sweep {
    std::string name;
    std::vector<double> points;
  };
  std::vector<Sweep> sweeps;
  for (const std::string& flag : var_flags) {
    const auto eq = flag.find('=');
    const auto spec = eq == std::string::npos ? std::nullopt : parse_range_spec(flag.substr(eq + 1));
    if (eq == std::string::npos || eq == 0 || !spec) {
      std::cerr << "error: --var expects name=lo:step:hi, got '" << flag << "'\n";
      return kUsage;
    }
    try {
      sweeps.push_back({flag.substr(0, eq), fiskit::detail::expand_range(spec->lo, spec->step, spec->hi)});
    } catch (const fiskit::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
  }
  fiskit::CrispInputs fixed;
  if (const int rc = parse_inputs(in_flags, fixed); rc != kOk) return rc;
  const auto method_override = parse_defuzz_flag(defuzz_flag, status);
  if (status != kOk) return status;

  // Every input variable must be covered exactly once, swept or fixed.
  std::map<std::string, int> coverage;
  for (const Sweep& s : sweeps) ++coverage[s.name];
  for (const auto& [name, unused] : fixed) ++coverage[name];
  for (const auto& [name, count] : coverage) {
    try {
      rb.input_index(name);
    } catch (const fiskit::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kFailure;
    }
    if (count > 1) {
      std::cerr << "error: variable '" << name << "' is both swept and fixed\n";
      return kFailure;
    }
  }
  if (coverage.size() != rb.inputs().size()) {
    std::cerr << "error: every input variable needs a --var sweep or a fixed --in value\n";
    return kFailure;
  }

  std::string out;
  out += sweeps.size() == 1 ? "x,out\n" : "x,y,out\n";
  std::size_t failed = 0;
  const auto emit_row = [&](const fiskit::CrispInputs& point, const std::string& coords) {
    fiskit::CrispInputs inputs = point;
    if (clamp) clamp_inputs(rb, inputs);
    out += coords;
    try {
      out += fiskit::detail::format_double(fiskit::evaluate(rb, inputs, method_override));
    } catch (const fiskit::Error&) {
      out += "nan";
      ++failed;
    }
    out += "\n";
  };

  fiskit::CrispInputs point = fixed;
  if (sweeps.size() == 1) {
    for (double x : sweeps[0].points) {
      point[sweeps[0].name] = x;
      emit_row(point, fiskit::detail::format_double(x) + ",");
    }
  } else {
    for (double x : sweeps[0].points) {
      point[sweeps[0].name] = x;
      for (double y : sweeps[1].points) {
        point[sweeps[1].name] = y;
        emit_row(point,
                 fiskit::detail::format_double(x) + "," + fiskit::detail::format_double(y) + ",");
      }
    }
  }
  if (failed > 0) out += "# failed points: " + std::to_string(failed) + "\n";
  std::cout << out;
  return kOk;
}

int cmd_mfplot(const std::string& path, const std::string& term_flag, const std::string& mf_flag,
               const std::string& range_flag) {
  const auto spec = parse_range_spec(range_flag);
  if (!spec) {
    std::cerr << "error: --range expects lo:step:hi\n";
    return kUsage;
  }
  std::vector<double> xs;
  try {
    xs = fiskit::detail::expand_range(spec->lo, spec->step, spec->hi);
  } catch (const fiskit::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  fiskit::MembershipFunction mf = fiskit::Trapeze{};
  if (!mf_flag.empty()) {
    if (!path.empty() || !term_flag.empty()) {
      std::cerr << "error: give either a model term or --mf, not both\n";
      return kUsage;
    }
    try {
      mf = fiskit::parse_mf_spec(mf_flag);
    } catch (const fiskit::Error& e) {
      std::cerr << "error: bad --mf spec: " << e.what() << "\n";
      return kFailure;
    }
  } else {
    if (path.empty() || term_flag.empty()) {
      std::cerr << "error: mfplot needs a model with --term var.term, or an inline --mf spec\n";
      return kUsage;
    }
    const auto dot = term_flag.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == term_flag.size()) {
      std::cerr << "error: --term expects var.term\n";
      return kUsage;
    }
    int status = kOk;
    const auto model = load_model(path, status);
    if (!model) return status;
    const std::string var = term_flag.substr(0, dot);
    const std::string term = term_flag.substr(dot + 1);
    const fiskit::RuleBase& rb = model->rulebase;
    const fiskit::MembershipFunction* found = nullptr;
    for (const fiskit::LinguisticVariable& v : rb.inputs())
      if (v.name() == var) found = v.find_term(term);
    if (rb.output_name() == var)
      for (const fiskit::Term& t : rb.output_terms())
        if (t.name == term) found = &t.mf;
    if (found == nullptr) {
      std::cerr << "error: no term '" << term_flag << "' in the model\n";
      return kFailure;
    }
    mf = *found;
  }

  std::string out;
  for (double x : xs)
    out += fiskit::detail::format_double(x) + "\t" +
           fiskit::detail::format_double(fiskit::evaluate(mf, x)) + "\n";
  std::cout << out;
  return kOk;
}

void append_samples(std::string& out, const fiskit::MembershipFunction& mf, double lo, double step,
                    double hi) {
  for (double x : fiskit::detail::expand_range(lo, step, hi))
    out += fiskit::detail::format_double(x) + "\t" +
           fiskit::detail::format_double(fiskit::evaluate(mf, x)) + "\n";
}

void append_fig(std::string& out, const std::string& tag, const std::string& spec, double lo,
                double step, double hi) {
  out += "## " + tag + "\n";
  out += "# mfplot --mf " + spec + " --range " + fiskit::detail::format_double(lo) + ":" +
         fiskit::detail::format_double(step) + ":" + fiskit::detail::format_double(hi) + "\n";
  append_samples(out, fiskit::parse_mf_spec(spec), lo, step, hi);
}

constexpr const char* kPipelineModel =
    "system heater kind=mamdani\n"
    "config and=min implication=clip defuzz=centroid resolution=101\n"
    "input temp range [0, 10]\n"
    "  term cold trapeze(10, 0, 0)\n"
    "  term warm trapeze(10, 0, 10)\n"
    "output power range [0, 100]\n"
    "  term low trapeze(50, 0, 0)\n"
    "  term high trapeze(50, 0, 100)\n"
    "rule: if temp is cold then power is high\n"
    "rule: if temp is warm then power is low\n";

int cmd_demo() {
  std::string out;
  append_fig(out, "fig2", "bell1(-1, 3, 4)", 0, 0.1, 10);
  append_fig(out, "fig3", "bell2(-1, 3, 4)", 0, 0.1, 10);
  append_fig(out, "fig4", "sigmoid(1, 5)", 0, 0.1, 10);
  append_fig(out, "fig5", "trapeze(1, 0, 0)", 0, 0.1, 10);
  append_fig(out, "fig6", "trapeze(2, 0, 0)", -10, 5, 10);
  append_fig(out, "fig7", "trapeze(2, 2, 2)", 0, 1, 10);

  out += "## pipeline\n";
  out += "# two-rule mamdani evaluation at temp=2.5\n";
  const fiskit::FisModel model = fiskit::parse(kPipelineModel);
  out += fiskit::serialize(model);
  const fiskit::CrispInputs inputs{{"temp", 2.5}};
  fiskit::InputGrades grades;
  for (const fiskit::LinguisticVariable& v : model.rulebase.inputs()) {
    auto& per_term = grades[v.name()];
    for (const auto& [term, grade] : fiskit::fuzzify(v, inputs.at(v.name())))
      per_term.emplace(term, grade);
  }
  const auto& rules = model.rulebase.rules();
  for (std::size_t i = 0; i < rules.size(); ++i)
    out += "alpha[" + std::to_string(i + 1) +
           "] = " + fiskit::detail::format_double(
                        fiskit::fire_rule(rules[i], grades, model.rulebase.config().and_op)) +
           "\n";
  out += "power = " + fiskit::detail::format_double(fiskit::evaluate(model.rulebase, inputs)) + "\n";
  std::cout << out;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fuzzy inference systems: validate, evaluate and sample .fis models"};
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "parse a model and print a one-line summary");
  std::string v_path;
  validate->add_option("model", v_path, "path to a .fis file")->required();

  auto* eval = app.add_subcommand("eval", "evaluate a model at one crisp input point");
  std::string e_path, e_defuzz;
  std::vector<std::string> e_in;
  bool e_clamp = false;
  eval->add_option("model", e_path, "path to a .fis file")->required();
  eval->add_option("--in", e_in, "crisp input as name=value, one per input variable");
  eval->add_option("--defuzz", e_defuzz, "override the defuzzifier (mamdani only)");
  eval->add_flag("--clamp", e_clamp, "clamp out-of-range inputs onto the universe");

  auto* surface = app.add_subcommand("surface", "tabulate the input-output map as CSV");
  std::string s_path, s_defuzz;
  std::vector<std::string> s_var, s_in;
  bool s_clamp = false;
  surface->add_option("model", s_path, "path to a .fis file")->required();
  surface->add_option("--var", s_var, "swept variable as name=lo:step:hi (once or twice)");
  surface->add_option("--in", s_in, "fixed input as name=value");
  surface->add_option("--defuzz", s_defuzz, "override the defuzzifier (mamdani only)");
  surface->add_flag("--clamp", s_clamp, "clamp out-of-range inputs onto the universe");

  auto* mfplot = app.add_subcommand("mfplot", "sample one membership function as x<TAB>y lines");
  std::string m_path, m_term, m_mf, m_range;
  mfplot->add_option("model", m_path, "path to a .fis file");
  mfplot->add_option("--term", m_term, "model term reference var.term");
  mfplot->add_option("--mf", m_mf, "inline spec such as 'bell1(-1, 3, 4)'");
  mfplot->add_option("--range", m_range, "sample grid lo:step:hi")->required();

  auto* demo = app.add_subcommand("demo", "emit the bundled sample datasets and a worked example");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(v_path);
    if (eval->parsed()) return cmd_eval(e_path, e_in, e_defuzz, e_clamp);
    if (surface->parsed()) {
      if (s_var.empty() || s_var.size() > 2) {
        std::cerr << "error: surface needs one or two --var sweeps\n";
        return kUsage;
      }
      return cmd_surface(s_path, s_var, s_in, s_defuzz, s_clamp);
    }
    if (mfplot->parsed()) return cmd_mfplot(m_path, m_term, m_mf, m_range);
    if (demo->parsed()) return cmd_demo();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
