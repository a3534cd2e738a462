#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "locint/algebra.hpp"
#include "locint/error.hpp"
#include "locint/scenario.hpp"

using namespace locint;

namespace {

// Exit codes: 0 all good, 1 failed checks under --strict, 2 usage or
// parse/schema trouble.
constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

int run_verify(const std::string& path, bool as_json, bool strict, double tol,
               bool validate_only) {
  Scenario s = parse_scenario(path);
  Report report;
  if (validate_only) {
    report.scenario = s.name;
    report.digest = scenario_digest(s);
    try {
      build_scenario(s);
      report.checks.push_back({"validate", true, 0.0, ""});
    } catch (const Error& e) {
      report.checks.push_back({"validate", false, 0.0, e.what()});
    }
  } else {
    RunOptions options;
    options.tol = tol;
    report = run_scenario(s, options);
  }
  if (as_json) {
    std::cout << report_to_json(report, true).dump(2) << "\n";
  } else {
    std::cout << report_to_text(report);
  }
  if (!report.all_passed() && strict) return kCheckFailed;
  return kOk;
}

int run_commutant(const std::string& path, const std::vector<std::string>& names,
                  bool as_json, double tol) {
  Scenario s = parse_scenario(path);
  BuiltScenario built = build_scenario(s);
  OperatorSubspace m = [&] {
    if (names.empty()) return OperatorSubspace::diag_space(built.space);
    std::vector<LocalOperator> gens;
    for (const std::string& name : names) {
      auto it = built.operators.find(name);
      if (it == built.operators.end())
        throw Error(ErrorKind::SchemaViolation, "no operator named '" + name + "'");
      gens.push_back(it->second);
    }
    return span_closure(built.space, gens, true, true, true);
  }();
  OperatorSubspace comm = commutant(m);
  OperatorSubspace dec = OperatorSubspace::dec_space(built.space);
  nlohmann::json j;
  j["generating_dim"] = m.complex_dim();
  j["commutant_dim"] = comm.complex_dim();
  j["equals_dec"] = subspace_equal(comm, dec, tol);
  j["rank_warning"] = comm.rank_warning();
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "generating algebra dim " << m.complex_dim() << "\n"
              << "commutant dim " << comm.complex_dim() << "\n"
              << "equals decomposable algebra: "
              << (j["equals_dec"].get<bool>() ? "yes" : "no") << "\n";
    if (comm.rank_warning())
      std::cout << "note: singular values near the rank cutoff\n";
  }
  return kOk;
}

int run_classify(const std::string& path, const std::string& op_name,
                 bool as_json, double tol) {
  Scenario s = parse_scenario(path);
  BuiltScenario built = build_scenario(s);
  nlohmann::json all = nlohmann::json::object();
  for (const auto& [name, op] : built.operators) {
    if (!op_name.empty() && name != op_name) continue;
    ClassificationReport r = classify(op, tol);
    nlohmann::json j;
    j["locally_bounded"] = r.locally_bounded;
    j["decomposable"] = r.decomposable.has_value();
    j["diagonalizable"] = r.diagonalizable.has_value();
    if (!r.witness.empty()) j["witness"] = r.witness;
    all[name] = j;
  }
  if (!op_name.empty() && all.empty())
    throw Error(ErrorKind::SchemaViolation, "no operator named '" + op_name + "'");
  if (as_json) {
    std::cout << all.dump(2) << "\n";
  } else {
    for (const auto& [name, j] : all.items()) {
      std::cout << name << ": locally bounded";
      if (j["decomposable"].get<bool>()) std::cout << ", decomposable";
      if (j["diagonalizable"].get<bool>()) std::cout << ", diagonalizable";
      if (j.contains("witness")) std::cout << "  [" << j["witness"].get<std::string>() << "]";
      std::cout << "\n";
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite direct integrals and their operator algebras"};
  app.require_subcommand(1);
  app.fallthrough();

  bool as_json = false;
  bool strict = false;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  app.add_flag("--json", as_json, "machine readable output");
  app.add_flag("--strict", strict, "failed checks set the exit status");
  app.add_option("--tol", tol, "tolerance for subspace comparisons");
  app.add_option("--seed", seed, "seed for scenario generation");

  std::string path;
  auto* validate = app.add_subcommand("validate", "validate a scenario file");
  validate->add_option("file", path)->required();
  auto* verify = app.add_subcommand("verify", "run a scenario's checks");
  verify->add_option("file", path)->required();

  std::vector<std::string> generators;
  auto* comm = app.add_subcommand("commutant", "commutant of named operators (default: the diagonal algebra)");
  comm->add_option("file", path)->required();
  comm->add_option("--generators", generators, "operator names spanning the algebra");

  std::string op_name;
  auto* classify_cmd = app.add_subcommand("classify", "classify a scenario's operators");
  classify_cmd->add_option("file", path)->required();
  classify_cmd->add_option("--op", op_name, "classify only this operator");

  auto* random = app.add_subcommand("random", "emit a seeded random scenario");
  int max_levels = 3, max_atoms = 4, max_fiber_dim = 2;
  std::string out_path;
  random->add_option("--levels", max_levels, "maximum number of levels");
  random->add_option("--atoms", max_atoms, "maximum number of atoms");
  random->add_option("--fdim", max_fiber_dim, "maximum fiber dimension");
  random->add_option("--out", out_path, "write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return run_verify(path, as_json, strict, tol, true);
    if (verify->parsed()) return run_verify(path, as_json, strict, tol, false);
    if (comm->parsed()) return run_commutant(path, generators, as_json, tol);
    if (classify_cmd->parsed()) return run_classify(path, op_name, as_json, tol);
    if (random->parsed()) {
      Scenario s = random_scenario(seed, {max_levels, max_atoms, max_fiber_dim});
      std::string text = emit_scenario(s).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path);
        if (!out) throw Error(ErrorKind::ParseError, "cannot write '" + out_path + "'");
        out << text;
      }
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::ParseError:
      case ErrorKind::SchemaViolation:
      case ErrorKind::BudgetExceeded:
        return kUsage;
      default:
        return strict ? kCheckFailed : kUsage;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
