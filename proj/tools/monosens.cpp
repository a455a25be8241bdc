// Command-line front end: validate and compile model/tree files, run
// sensitivity and divergence sweeps, and search covariation schemes.

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "monosens/covariation.hpp"
#include "monosens/divergence.hpp"
#include "monosens/io.hpp"
#include "monosens/model.hpp"
#include "monosens/optimality.hpp"
#include "monosens/sensitivity.hpp"
#include "monosens/staged_tree.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitBadFlags = 3;

struct CommonOptions {
  std::string model_path;
  std::string tree_path;
  std::string out_path;
  std::size_t param = 0;  // 1-based on the command line
  double value = 0.0;
  bool has_value = false;
  std::size_t grid_n = 199;
  std::vector<std::string> schemes;
  std::vector<std::string> measures;
  std::vector<std::string> events;
  std::uint64_t seed = 0;
  std::size_t samples = 500;
  std::string log_base = "e";
};

void add_input_flags(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--model", opt.model_path, "model file (JSON)");
  cmd->add_option("--tree", opt.tree_path, "staged tree file (JSON)");
}

std::string g12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    monosens::write_file(out_path, content);
  }
}

// Loads the model either directly or by compiling a tree file.
monosens::MonomialModel load_input(const CommonOptions& opt) {
  bool has_model = !opt.model_path.empty();
  bool has_tree = !opt.tree_path.empty();
  if (has_model == has_tree) {
    throw CLI::ValidationError("input", "give exactly one of --model/--tree");
  }
  if (has_model) return monosens::load_model_file(opt.model_path);
  auto tree = monosens::load_tree_file(opt.tree_path);
  auto findings = monosens::validate_tree(tree);
  if (!findings.empty()) {
    throw monosens::ValidationError("invalid tree: " + findings.front());
  }
  return monosens::compile_to_mm(tree);
}

std::size_t resolve_param(const CommonOptions& opt,
                          const monosens::MonomialModel& model) {
  if (opt.param < 1 || opt.param > model.param_count()) {
    throw CLI::ValidationError(
        "--param", "parameter index must be between 1 and " +
                       std::to_string(model.param_count()));
  }
  return opt.param - 1;
}

// Event specs are comma-separated atom labels, 1-based indices or
// index ranges like 2-5. Labels win when a token matches one exactly.
monosens::AtomEvent resolve_event(const std::string& spec,
                                  const monosens::MonomialModel& model) {
  std::vector<std::size_t> atoms;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto& labels = model.atom_labels();
    if (std::find(labels.begin(), labels.end(), token) != labels.end()) {
      atoms.push_back(model.atom_index_of(token));
      continue;
    }
    auto dash = token.find('-');
    bool numeric =
        !token.empty() &&
        token.find_first_not_of("0123456789-") == std::string::npos &&
        token.find('-', dash == std::string::npos ? 0 : dash + 1) ==
            std::string::npos;
    if (numeric && dash != std::string::npos && dash > 0) {
      std::size_t lo = std::stoull(token.substr(0, dash));
      std::size_t hi = std::stoull(token.substr(dash + 1));
      if (lo < 1 || hi < lo) {
        throw std::invalid_argument("bad index range '" + token + "'");
      }
      for (std::size_t a = lo; a <= hi; ++a) atoms.push_back(a - 1);
    } else if (numeric && dash == std::string::npos) {
      std::size_t a = std::stoull(token);
      if (a < 1) throw std::invalid_argument("atom indices are 1-based");
      atoms.push_back(a - 1);
    } else {
      atoms.push_back(model.atom_index_of(token));  // throws with suggestions
    }
  }
  if (atoms.empty()) {
    throw std::invalid_argument("event '" + spec + "' selects no atoms");
  }
  return monosens::AtomEvent::of(std::move(atoms), model.atom_count());
}

std::vector<monosens::CovariationScheme> resolve_schemes(
    const CommonOptions& opt) {
  std::vector<monosens::CovariationScheme> schemes;
  if (opt.schemes.empty()) {
    schemes.push_back(monosens::CovariationScheme::proportional());
  }
  for (const auto& spec : opt.schemes) {
    schemes.push_back(monosens::CovariationScheme::parse(spec));
  }
  return schemes;
}

int run_validate(const CommonOptions& opt) {
  bool has_model = !opt.model_path.empty();
  bool has_tree = !opt.tree_path.empty();
  if (has_model == has_tree) {
    std::cerr << "validate: give exactly one of --model/--tree\n";
    return kExitBadFlags;
  }
  std::string text =
      monosens::read_file(has_model ? opt.model_path : opt.tree_path);
  if (has_tree) {
    std::optional<monosens::StagedTree> tree;
    try {
      tree = monosens::parse_tree(text);
    } catch (const monosens::ParseError& e) {
      std::cerr << "finding: " << e.what() << "\n";
      return kExitInvalid;
    }
    auto findings = monosens::validate_tree(*tree);
    for (const auto& f : findings) std::cerr << "finding: " << f << "\n";
    if (!findings.empty()) return kExitInvalid;
    auto model = monosens::compile_to_mm(*tree);
    std::cout << "valid staged tree: " << model.atom_count() << " atoms, "
              << model.param_count() << " parameters, "
              << (model.is_multilinear() ? "multilinear" : "non-multilinear")
              << "\n";
    return kExitOk;
  }
  try {
    auto model = monosens::parse_model(text);
    std::cout << "valid model: " << model.atom_count() << " atoms, "
              << model.param_count() << " parameters, "
              << (model.is_multilinear() ? "multilinear" : "non-multilinear")
              << "\n";
    return kExitOk;
  } catch (const monosens::ParseError& e) {
    std::cerr << "finding: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const monosens::ValidationError& e) {
    std::cerr << "finding: " << e.what() << "\n";
    return kExitInvalid;
  }
}

int run_compile(const CommonOptions& opt) {
  if (opt.tree_path.empty()) {
    std::cerr << "compile: --tree is required\n";
    return kExitBadFlags;
  }
  auto tree = monosens::load_tree_file(opt.tree_path);
  auto findings = monosens::validate_tree(tree);
  if (!findings.empty()) {
    for (const auto& f : findings) std::cerr << "finding: " << f << "\n";
    return kExitInvalid;
  }
  emit(opt.out_path, monosens::serialize_model(monosens::compile_to_mm(tree)));
  return kExitOk;
}

int run_sweep(const CommonOptions& opt) {
  auto model = load_input(opt);
  std::size_t param = resolve_param(opt, model);
  auto schemes = resolve_schemes(opt);
  auto grid = monosens::default_grid(opt.grid_n);

  std::vector<std::string> measures = opt.measures;
  if (measures.empty()) measures.push_back("sensitivity");
  bool sensitivity_mode =
      std::find(measures.begin(), measures.end(), "sensitivity") !=
      measures.end();
  if (sensitivity_mode && measures.size() > 1) {
    std::cerr << "sweep: sensitivity cannot be mixed with divergence "
                 "measures in one file\n";
    return kExitBadFlags;
  }

  std::ostringstream csv;
  if (sensitivity_mode) {
    if (opt.events.empty()) {
      std::cerr << "sweep: --event is required for sensitivity sweeps\n";
      return kExitBadFlags;
    }
    csv << "theta_tilde,value,scheme,event,target\n";
    for (const auto& event_spec : opt.events) {
      auto event = resolve_event(event_spec, model);
      for (const auto& scheme : schemes) {
        auto rows = monosens::sweep(model, event, param, scheme, grid);
        for (const auto& row : rows) {
          csv << g12(row.theta_tilde) << ","
              << (row.feasible ? g12(row.value) : std::string("infeasible"))
              << "," << csv_field(scheme.name()) << ","
              << csv_field(event_spec) << "," << (param + 1) << "\n";
        }
      }
    }
  } else {
    std::vector<monosens::Measure> resolved;
    for (const auto& name : measures) {
      resolved.push_back(monosens::Measure::by_name(name));
    }
    auto rows =
        monosens::divergence_sweep(model, param, schemes, resolved, grid);
    csv << "theta_tilde,scheme,measure,value\n";
    for (const auto& row : rows) {
      csv << g12(row.theta_tilde) << "," << csv_field(row.scheme) << ","
          << row.measure << ","
          << (row.feasible ? g12(row.value) : std::string("infeasible"))
          << "\n";
    }
  }
  emit(opt.out_path, csv.str());
  return kExitOk;
}

int run_divergence(const CommonOptions& opt) {
  auto model = load_input(opt);
  std::size_t param = resolve_param(opt, model);
  if (!opt.has_value) {
    std::cerr << "divergence: --value is required\n";
    return kExitBadFlags;
  }
  auto schemes = resolve_schemes(opt);
  std::vector<std::string> measures = opt.measures;
  if (measures.empty()) measures.push_back("cd");

  monosens::VariationTarget target{param, opt.value};
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& scheme : schemes) {
    for (const auto& name : measures) {
      auto measure = monosens::Measure::by_name(name);
      monosens::DivergenceReport report =
          measure.is_cd
              ? monosens::cd_distance_block(model, target, scheme)
              : monosens::phi_divergence_block(model, target, scheme,
                                               *measure.fn);
      nlohmann::ordered_json entry;
      entry["measure"] = measure.name;
      entry["scheme"] = scheme.name();
      entry["target_param"] = param + 1;
      entry["target_value"] = opt.value;
      entry["value"] = report.value;
      if (measure.is_cd) {
        entry["argmax_atom"] = model.atom_labels()[report.argmax_atom];
        entry["argmin_atom"] = model.atom_labels()[report.argmin_atom];
      }
      entry["path"] = report.path == monosens::ComputePath::ClosedForm
                          ? "closed-form"
                          : "brute-force";
      out.push_back(std::move(entry));
    }
  }
  emit(opt.out_path, out.dump(2) + "\n");
  return kExitOk;
}

int run_optimality(const CommonOptions& opt) {
  auto model = load_input(opt);
  std::size_t param = resolve_param(opt, model);
  if (!opt.has_value) {
    std::cerr << "optimality: --value is required\n";
    return kExitBadFlags;
  }
  auto verdict = monosens::search_schemes(model, {param, opt.value},
                                          opt.samples, opt.seed);
  nlohmann::ordered_json out;
  out["condition_holds"] = verdict.condition_holds;
  out["proportional_cd"] = verdict.proportional_cd;
  out["best_found_cd"] = verdict.best_found_cd;
  out["best_scheme"] = verdict.best_scheme.name();
  out["samples_tested"] = verdict.samples_tested;
  out["seed"] = verdict.seed;
  emit(opt.out_path, out.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sensitivity analysis for monomial models and staged trees"};
  app.require_subcommand(1);

  CommonOptions opt;

  auto* validate = app.add_subcommand("validate", "check a model or tree file");
  add_input_flags(validate, opt);

  auto* compile = app.add_subcommand("compile", "compile a tree to a model");
  compile->add_option("--tree", opt.tree_path, "staged tree file (JSON)");
  compile->add_option("--out", opt.out_path, "output model file");

  auto* sweep = app.add_subcommand(
      "sweep", "sweep sensitivity or divergence over a parameter grid");
  add_input_flags(sweep, opt);
  sweep->add_option("--param", opt.param, "varied parameter (1-based)")
      ->required();
  sweep->add_option("--grid", opt.grid_n, "number of interior grid points")
      ->default_val(std::size_t{199});
  sweep->add_option("--scheme", opt.schemes,
                    "covariation scheme (repeatable): proportional, uniform, "
                    "linear:d1,d2,..., linear-full:g...;d...");
  sweep->add_option("--measure", opt.measures,
                    "sensitivity (default) or cd|kl|inv-kl|chi2|tv");
  sweep->add_option("--event", opt.events,
                    "event: atom labels, 1-based indices or ranges "
                    "(comma separated, repeatable)");
  sweep->add_option("--out", opt.out_path, "output CSV file");
  sweep->add_option("--log-base", opt.log_base,
                    "logarithm base (only 'e' is supported)");

  auto* divergence = app.add_subcommand(
      "divergence", "divergence between original and covaried distributions");
  add_input_flags(divergence, opt);
  divergence->add_option("--param", opt.param, "varied parameter (1-based)")
      ->required();
  divergence->add_option("--value", opt.value, "new value for the parameter")
      ->required();
  divergence->add_option("--scheme", opt.schemes, "covariation scheme(s)");
  divergence->add_option("--measure", opt.measures, "cd|kl|inv-kl|chi2|tv");
  divergence->add_option("--out", opt.out_path, "output JSON file");
  divergence->add_option("--log-base", opt.log_base,
                         "logarithm base (only 'e' is supported)");

  auto* optimality = app.add_subcommand(
      "optimality", "search covariation schemes for the CD minimizer");
  add_input_flags(optimality, opt);
  optimality->add_option("--param", opt.param, "varied parameter (1-based)")
      ->required();
  optimality->add_option("--value", opt.value, "new value for the parameter")
      ->required();
  optimality->add_option("--samples", opt.samples, "number of random schemes")
      ->default_val(std::size_t{500});
  optimality->add_option("--seed", opt.seed, "random seed")
      ->default_val(std::uint64_t{0});
  optimality->add_option("--out", opt.out_path, "output JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadFlags;
  }

  opt.has_value = divergence->count("--value") || optimality->count("--value");
  if (opt.log_base != "e") {
    std::cerr << "only --log-base e is supported\n";
    return kExitBadFlags;
  }

  try {
    if (*validate) return run_validate(opt);
    if (*compile) return run_compile(opt);
    if (*sweep) return run_sweep(opt);
    if (*divergence) return run_divergence(opt);
    if (*optimality) return run_optimality(opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadFlags;
  } catch (const monosens::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const monosens::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadFlags;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitBadFlags;
}
