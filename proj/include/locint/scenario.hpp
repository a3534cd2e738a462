#pragma once

#include <complex>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "locint/algebra.hpp"
#include "locint/direct_integral.hpp"
#include "locint/operators.hpp"

namespace locint {

/// Declarative description of one verification run: a poset, a measure
/// system given by per-level atom weights, fiber filtrations, optional named
/// operators, and a list of checks. Serialized as a schema-versioned JSON
/// document; emission is canonical (sorted keys), so parse(emit(s)) == s.
struct Scenario {
  struct FiberDecl {
    int ambient = 0;
    std::map<std::string, int> dims;  // level label -> dimension
    bool operator==(const FiberDecl&) const = default;
  };
  struct OperatorDecl {
    std::string kind;  // "dense" | "decomposable" | "diagonal"
    Eigen::MatrixXcd dense;
    std::map<std::string, Eigen::MatrixXcd> family;       // atom -> fiber matrix
    std::map<std::string, std::complex<double>> symbol;   // atom -> scalar
  };

  int version = 1;
  std::string name;
  std::vector<std::string> levels;
  std::vector<std::pair<std::string, std::string>> relation;
  Weight::Mode mode = Weight::Mode::Rational;
  std::map<std::string, std::vector<std::string>> level_atoms;  // X_alpha
  std::vector<std::vector<std::string>> partition;  // empty: power-set algebras
  std::map<std::string, std::map<std::string, std::string>> weights;
  std::map<std::string, FiberDecl> fibers;
  std::map<std::string, OperatorDecl> operators;
  std::vector<std::string> checks;  // empty: {"theorems", "classify"}

  bool operator==(const Scenario& other) const;
};

Scenario parse_scenario_text(const std::string& text);
Scenario parse_scenario(const std::string& path);
nlohmann::json emit_scenario(const Scenario& s);

/// FNV-1a hash of the canonical serialization, as a hex string.
std::string scenario_digest(const Scenario& s);

struct BuiltScenario {
  std::shared_ptr<const DirectIntegralSpace> space;
  std::map<std::string, LocalOperator> operators;
};

/// Runs the full validation pipeline (poset, measure system, fibers, space,
/// operators); throws the first violation it meets.
BuiltScenario build_scenario(const Scenario& s);

struct RandomLimits {
  int max_levels = 3;
  int max_atoms = 4;
  int max_fiber_dim = 2;
};

/// Deterministic function of the seed; the generated system always validates
/// (memberships come from principal up-sets, dims from a monotone rank, and
/// weights are level-independent). Throws BudgetExceeded when the limits can
/// exceed the dimension budget.
Scenario random_scenario(std::uint64_t seed, RandomLimits limits);

/// A random operator supported on the locally bounded coordinate pairs.
LocalOperator random_local_operator(std::shared_ptr<const DirectIntegralSpace> space,
                                    std::mt19937_64& rng);
/// A random section witnessed at the given level.
Section random_section(const DirectIntegralSpace& space, int level,
                       std::mt19937_64& rng);

struct CheckResult {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string witness;
};

struct Report {
  std::string scenario;
  std::string digest;
  std::vector<CheckResult> checks;
  bool rank_warning = false;
  double wall_ms = 0.0;
  bool all_passed() const;
};

struct RunOptions {
  double tol = 1e-9;  // tolerance of the subspace comparisons reported
};

/// Executes the scenario's requested checks. Mathematical failures land in
/// the report; only scenario-shape problems throw.
Report run_scenario(const Scenario& s, const RunOptions& options = {});

/// Canonical serializations of a report. with_time controls the wall-clock
/// field, which is excluded from determinism comparisons.
nlohmann::json report_to_json(const Report& r, bool with_time);
std::string report_to_text(const Report& r);

}  // namespace locint
