#include "locint/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "locint/error.hpp"

namespace locint {

namespace {

using nlohmann::json;

json complex_to_json(std::complex<double> z) {
  return json::array({z.real(), z.imag()});
}

std::complex<double> json_to_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::SchemaViolation, "complex entries are [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd json_to_matrix(const json& j) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::SchemaViolation, "matrix literals are arrays of rows");
  int rows = static_cast<int>(j.size());
  int cols = static_cast<int>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
      throw Error(ErrorKind::SchemaViolation, "ragged matrix literal");
    for (int c = 0; c < cols; ++c) m(i, c) = json_to_complex(j[i][c]);
  }
  return m;
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw Error(ErrorKind::SchemaViolation, std::string("missing field '") + key + "'");
  return *it;
}

double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace

json emit_scenario(const Scenario& s) {
  json j;
  j["version"] = s.version;
  j["name"] = s.name;
  j["poset"]["elements"] = s.levels;
  json rel = json::array();
  for (const auto& [a, b] : s.relation) rel.push_back(json::array({a, b}));
  j["poset"]["relation"] = rel;
  json& m = j["measure"];
  m["mode"] = s.mode == Weight::Mode::Rational ? "rational" : "float";
  m["levels"] = json::object();
  for (const auto& [lvl, atoms] : s.level_atoms) m["levels"][lvl] = atoms;
  if (s.partition.empty()) {
    m["sigma"] = "power";
  } else {
    m["sigma"]["partition"] = s.partition;
  }
  m["weights"] = json::object();
  for (const auto& [lvl, table] : s.weights) {
    json t = json::object();
    for (const auto& [atom, literal] : table) t[atom] = literal;
    m["weights"][lvl] = t;
  }
  j["fibers"] = json::object();
  for (const auto& [atom, decl] : s.fibers) {
    json f;
    f["ambient"] = decl.ambient;
    f["dims"] = json::object();
    for (const auto& [lvl, d] : decl.dims) f["dims"][lvl] = d;
    j["fibers"][atom] = f;
  }
  if (!s.operators.empty()) {
    json ops = json::object();
    for (const auto& [name, decl] : s.operators) {
      json o;
      if (decl.kind == "dense") {
        o["dense"] = matrix_to_json(decl.dense);
      } else if (decl.kind == "decomposable") {
        json fam = json::object();
        for (const auto& [atom, mat] : decl.family) fam[atom] = matrix_to_json(mat);
        o["decomposable"] = fam;
      } else {
        json sym = json::object();
        for (const auto& [atom, z] : decl.symbol) sym[atom] = complex_to_json(z);
        o["diagonal"] = sym;
      }
      ops[name] = o;
    }
    j["operators"] = ops;
  }
  if (!s.checks.empty()) j["checks"] = s.checks;
  return j;
}

bool Scenario::operator==(const Scenario& other) const {
  return emit_scenario(*this) == emit_scenario(other);
}

Scenario parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  try {
    Scenario s;
    if (!j.is_object()) throw Error(ErrorKind::SchemaViolation, "document is not an object");
    s.version = field(j, "version").get<int>();
    if (s.version != 1)
      throw Error(ErrorKind::SchemaViolation, "unsupported schema version");
    s.name = j.value("name", std::string("unnamed"));
    const json& poset = field(j, "poset");
    s.levels = field(poset, "elements").get<std::vector<std::string>>();
    for (const json& pair : field(poset, "relation")) {
      if (!pair.is_array() || pair.size() != 2)
        throw Error(ErrorKind::SchemaViolation, "relation entries are [a, b] pairs");
      s.relation.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    std::set<std::string> level_set(s.levels.begin(), s.levels.end());
    auto known_level = [&](const std::string& lvl) {
      if (!level_set.count(lvl))
        throw Error(ErrorKind::SchemaViolation, "reference to undeclared level '" + lvl + "'");
    };
    for (const auto& [a, b] : s.relation) known_level(a), known_level(b);

    const json& measure = field(j, "measure");
    std::string mode = field(measure, "mode").get<std::string>();
    if (mode == "rational") {
      s.mode = Weight::Mode::Rational;
    } else if (mode == "float") {
      s.mode = Weight::Mode::Float;
    } else {
      throw Error(ErrorKind::SchemaViolation, "mode must be rational or float");
    }
    std::set<std::string> universe;
    for (const auto& [lvl, atoms] : field(measure, "levels").items()) {
      known_level(lvl);
      s.level_atoms[lvl] = atoms.get<std::vector<std::string>>();
      universe.insert(s.level_atoms[lvl].begin(), s.level_atoms[lvl].end());
    }
    auto known_atom = [&](const std::string& atom) {
      if (!universe.count(atom))
        throw Error(ErrorKind::SchemaViolation, "reference to undeclared atom '" + atom + "'");
    };
    const json& sigma = field(measure, "sigma");
    if (sigma.is_string()) {
      if (sigma.get<std::string>() != "power")
        throw Error(ErrorKind::SchemaViolation, "sigma must be \"power\" or a partition");
    } else {
      s.partition = field(sigma, "partition").get<std::vector<std::vector<std::string>>>();
      for (const auto& block : s.partition)
        for (const auto& atom : block) known_atom(atom);
    }
    for (const auto& [lvl, table] : field(measure, "weights").items()) {
      known_level(lvl);
      for (const auto& [atom, literal] : table.items()) {
        known_atom(atom);
        Weight::parse(literal.get<std::string>(), s.mode);  // validates the literal
        s.weights[lvl][atom] = literal.get<std::string>();
      }
    }

    for (const auto& [atom, f] : field(j, "fibers").items()) {
      known_atom(atom);
      Scenario::FiberDecl decl;
      decl.ambient = field(f, "ambient").get<int>();
      for (const auto& [lvl, d] : field(f, "dims").items()) {
        known_level(lvl);
        decl.dims[lvl] = d.get<int>();
        if (decl.dims[lvl] < 0)
          throw Error(ErrorKind::SchemaViolation, "negative fiber dimension");
      }
      s.fibers[atom] = decl;
    }

    if (j.contains("operators")) {
      for (const auto& [name, o] : j["operators"].items()) {
        Scenario::OperatorDecl decl;
        if (o.contains("dense")) {
          decl.kind = "dense";
          decl.dense = json_to_matrix(o["dense"]);
        } else if (o.contains("decomposable")) {
          decl.kind = "decomposable";
          for (const auto& [atom, mat] : o["decomposable"].items()) {
            known_atom(atom);
            decl.family[atom] = json_to_matrix(mat);
          }
        } else if (o.contains("diagonal")) {
          decl.kind = "diagonal";
          for (const auto& [atom, z] : o["diagonal"].items()) {
            known_atom(atom);
            decl.symbol[atom] = json_to_complex(z);
          }
        } else {
          throw Error(ErrorKind::SchemaViolation,
                      "operator '" + name + "' needs dense, decomposable or diagonal data");
        }
        s.operators[name] = decl;
      }
    }
    if (j.contains("checks")) {
      s.checks = j["checks"].get<std::vector<std::string>>();
      for (const std::string& c : s.checks)
        if (c != "theorems" && c != "classify")
          throw Error(ErrorKind::SchemaViolation, "unknown check '" + c + "'");
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::SchemaViolation, e.what());
  }
}

Scenario parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str());
}

std::string scenario_digest(const Scenario& s) {
  std::string dump = emit_scenario(s).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

BuiltScenario build_scenario(const Scenario& s) {
  DirectedPoset poset = DirectedPoset::validate(s.levels, s.relation);
  int top = poset.greatest();
  auto top_atoms_it = s.level_atoms.find(poset.label(top));
  if (top_atoms_it == s.level_atoms.end())
    throw Error(ErrorKind::SchemaViolation,
                "no atom list for level " + poset.label(top));
  std::vector<std::string> atoms = top_atoms_it->second;
  if (atoms.size() > 64)
    throw Error(ErrorKind::BudgetExceeded, "more than 64 atoms");
  auto atom_index = [&](const std::string& label) {
    auto it = std::find(atoms.begin(), atoms.end(), label);
    if (it == atoms.end())
      throw Error(ErrorKind::SchemaViolation,
                  "atom '" + label + "' is not in the greatest level");
    return static_cast<int>(it - atoms.begin());
  };

  std::vector<std::uint64_t> grounds(poset.size(), 0);
  for (int a = 0; a < poset.size(); ++a) {
    auto it = s.level_atoms.find(poset.label(a));
    if (it == s.level_atoms.end())
      throw Error(ErrorKind::SchemaViolation,
                  "no atom list for level " + poset.label(a));
    for (const std::string& atom : it->second)
      grounds[a] |= std::uint64_t{1} << atom_index(atom);
  }

  FiniteMeasurableSpace top_sigma = [&] {
    if (s.partition.empty()) return FiniteMeasurableSpace::power_set(grounds[top]);
    std::vector<std::uint64_t> blocks;
    for (const auto& block : s.partition) {
      std::uint64_t mask = 0;
      for (const std::string& atom : block) mask |= std::uint64_t{1} << atom_index(atom);
      blocks.push_back(mask);
    }
    return FiniteMeasurableSpace::closure(grounds[top], blocks);
  }();

  std::vector<MeasureLevel> levels;
  std::vector<std::vector<Weight>> level_weights(poset.size());
  for (int a = 0; a < poset.size(); ++a) {
    std::vector<Weight> w(atoms.size(), Weight::zero(s.mode));
    auto it = s.weights.find(poset.label(a));
    std::uint64_t seen = 0;
    if (it != s.weights.end()) {
      for (const auto& [atom, literal] : it->second) {
        int p = atom_index(atom);
        if (!((grounds[a] >> p) & 1u))
          throw Error(ErrorKind::SchemaViolation,
                      "weight for atom '" + atom + "' outside level " + poset.label(a));
        w[p] = Weight::parse(literal, s.mode);
        seen |= std::uint64_t{1} << p;
      }
    }
    if (seen != grounds[a])
      throw Error(ErrorKind::SchemaViolation,
                  "missing weights at level " + poset.label(a));
    level_weights[a] = w;
    levels.push_back(level_from_atoms(top_sigma.trace(grounds[a]), w));
  }

  InductiveMeasureSystem system = InductiveMeasureSystem::validate(
      poset, atoms, std::move(levels), s.mode);
  LocallyMeasureSpace measure(std::move(system));

  std::vector<FiberFiltration> fibers;
  for (std::size_t p = 0; p < atoms.size(); ++p) {
    auto it = s.fibers.find(atoms[p]);
    if (it == s.fibers.end())
      throw Error(ErrorKind::MissingLevel, "no fiber for atom '" + atoms[p] + "'");
    FiberFiltration f;
    f.atom = static_cast<int>(p);
    f.ambient_dim = it->second.ambient;
    f.level_dims.assign(poset.size(), -1);
    for (const auto& [lvl, d] : it->second.dims) {
      try {
        f.level_dims[poset.index_of(lvl)] = d;
      } catch (const Error&) {
        throw Error(ErrorKind::SchemaViolation,
                    "fiber dimension for undeclared level '" + lvl + "'");
      }
    }
    fibers.push_back(std::move(f));
  }

  auto space = std::make_shared<DirectIntegralSpace>(DirectIntegralSpace::build(
      std::move(measure), std::move(fibers), level_weights[top]));

  BuiltScenario built;
  built.space = space;
  for (const auto& [name, decl] : s.operators) {
    if (decl.kind == "dense") {
      built.operators.emplace(name, LocalOperator::validate(space, decl.dense));
    } else if (decl.kind == "decomposable") {
      DecomposableForm form;
      for (int p = 0; p < space->atom_count(); ++p) {
        auto it = decl.family.find(atoms[p]);
        form.family.push_back(it != decl.family.end()
                                  ? it->second
                                  : Eigen::MatrixXcd::Zero(space->fiber(p).ambient_dim,
                                                           space->fiber(p).ambient_dim)
                                        .eval());
      }
      built.operators.emplace(name, assemble_decomposable(space, form));
    } else {
      DiagonalSymbol symbol;
      for (int p = 0; p < space->atom_count(); ++p) {
        auto it = decl.symbol.find(atoms[p]);
        symbol.f.push_back(it != decl.symbol.end() ? it->second : 0.0);
      }
      built.operators.emplace(name, assemble_diagonalizable(space, symbol));
    }
  }
  return built;
}

Scenario random_scenario(std::uint64_t seed, RandomLimits limits) {
  if (limits.max_levels < 1 || limits.max_atoms < 1 || limits.max_fiber_dim < 1)
    throw Error(ErrorKind::BudgetExceeded, "limits must be positive");
  if (limits.max_atoms * limits.max_fiber_dim > 24)
    throw Error(ErrorKind::BudgetExceeded, "limits exceed the dimension budget");
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

  Scenario s;
  s.name = "random-" + std::to_string(seed);
  int nl = 1 + pick(limits.max_levels);
  for (int i = 0; i < nl; ++i) s.levels.push_back("L" + std::to_string(i));
  for (int i = 0; i < nl; ++i)
    for (int j = i + 1; j < nl; ++j)
      if (j == nl - 1 || pick(10) < 4) s.relation.emplace_back(s.levels[i], s.levels[j]);
  DirectedPoset poset = DirectedPoset::validate(s.levels, s.relation);

  int na = 1 + pick(limits.max_atoms);
  std::vector<std::string> atoms;
  std::vector<int> birth(na);
  for (int p = 0; p < na; ++p) {
    atoms.push_back("p" + std::to_string(p));
    birth[p] = pick(nl);
  }
  for (int a = 0; a < nl; ++a) {
    std::vector<std::string> members;
    for (int p = 0; p < na; ++p)
      if (poset.leq(birth[p], a)) members.push_back(atoms[p]);
    s.level_atoms[s.levels[a]] = members;
  }

  // Level-independent positive rational weights keep projectivity exact.
  std::vector<std::string> literal(na);
  for (int p = 0; p < na; ++p)
    literal[p] = Weight::rational(Rational(1 + pick(8), 1 + pick(4))).to_string();
  for (int a = 0; a < nl; ++a)
    for (const std::string& atom : s.level_atoms[s.levels[a]])
      s.weights[s.levels[a]][atom] =
          literal[std::stoi(atom.substr(1))];

  // Occasionally coarsen: blocks refine the birth-level classes, so every
  // level's ground set stays a union of blocks.
  if (pick(10) < 3) {
    for (int a = 0; a < nl; ++a) {
      std::vector<std::string> klass;
      for (int p = 0; p < na; ++p)
        if (birth[p] == a) klass.push_back(atoms[p]);
      if (klass.empty()) continue;
      if (klass.size() >= 2 && pick(2)) {
        std::size_t cut = 1 + pick(static_cast<int>(klass.size()) - 1);
        s.partition.emplace_back(klass.begin(), klass.begin() + cut);
        s.partition.emplace_back(klass.begin() + cut, klass.end());
      } else {
        s.partition.push_back(klass);
      }
    }
  }

  // rank(a) counts the levels below a; it grows along <=, so the dims do.
  std::vector<int> rank(nl, 0);
  for (int a = 0; a < nl; ++a)
    for (int d = 0; d < nl; ++d)
      if (poset.leq(d, a)) ++rank[a];
  for (int p = 0; p < na; ++p) {
    int base = 1 + pick(limits.max_fiber_dim);
    int step = pick(2);
    Scenario::FiberDecl decl;
    for (int a = 0; a < nl; ++a) {
      if (!poset.leq(birth[p], a)) continue;
      decl.dims[s.levels[a]] =
          std::min(base + step * (rank[a] - rank[birth[p]]), limits.max_fiber_dim);
    }
    decl.ambient = decl.dims[s.levels[poset.greatest()]];
    s.fibers[atoms[p]] = decl;
  }
  s.checks = {"theorems"};
  return s;
}

LocalOperator random_local_operator(std::shared_ptr<const DirectIntegralSpace> space,
                                    std::mt19937_64& rng) {
  int n = space->global_dim();
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (auto [i, j] : locally_bounded_units(*space, false))
    t(i, j) = std::complex<double>(2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0);
  return LocalOperator::validate(std::move(space), std::move(t));
}

Section random_section(const DirectIntegralSpace& space, int level,
                       std::mt19937_64& rng) {
  std::vector<Eigen::VectorXcd> values(space.atom_count());
  std::uint64_t ground = space.measure().system().ground(level);
  for (int p = 0; p < space.atom_count(); ++p) {
    values[p] = Eigen::VectorXcd::Zero(space.fiber(p).ambient_dim);
    if (!((ground >> p) & 1u)) continue;
    for (int i = 0; i < space.fiber(p).dim(level); ++i)
      values[p](i) = std::complex<double>(2.0 * u01(rng) - 1.0, 2.0 * u01(rng) - 1.0);
  }
  return make_section(space, std::move(values), level);
}

bool Report::all_passed() const {
  for (const CheckResult& c : checks)
    if (!c.passed) return false;
  return true;
}

Report run_scenario(const Scenario& s, const RunOptions& options) {
  auto start = std::chrono::steady_clock::now();
  Report report;
  report.scenario = s.name;
  report.digest = scenario_digest(s);
  std::vector<std::string> checks =
      s.checks.empty() ? std::vector<std::string>{"theorems", "classify"} : s.checks;

  BuiltScenario built;
  try {
    built = build_scenario(s);
    report.checks.push_back({"validate", true, 0.0, ""});
  } catch (const Error& e) {
    report.checks.push_back({"validate", false, 0.0, e.what()});
    return report;
  }

  for (const std::string& check : checks) {
    if (check == "theorems") {
      TheoremReport tr = verify_theorems(built.space);
      report.rank_warning = report.rank_warning || tr.rank_warning;
      for (const TheoremCheck& c : tr.checks)
        report.checks.push_back({c.name, c.passed, c.residual, c.witness});
    } else if (check == "classify") {
      for (const auto& [name, op] : built.operators) {
        ClassificationReport cr = classify(op, options.tol);
        std::string verdict = "locally_bounded";
        if (cr.decomposable) verdict += " decomposable";
        if (cr.diagonalizable) verdict += " diagonalizable";
        if (!cr.witness.empty()) verdict += " (" + cr.witness + ")";
        report.checks.push_back({"classify:" + name, true, 0.0, verdict});
      }
    }
  }
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

nlohmann::json report_to_json(const Report& r, bool with_time) {
  json j;
  j["scenario"] = r.scenario;
  j["digest"] = r.digest;
  j["all_passed"] = r.all_passed();
  j["rank_warning"] = r.rank_warning;
  json checks = json::array();
  for (const CheckResult& c : r.checks) {
    json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["residual"] = c.residual;
    e["witness"] = c.witness;
    checks.push_back(e);
  }
  j["checks"] = checks;
  if (with_time) j["wall_ms"] = r.wall_ms;
  return j;
}

std::string report_to_text(const Report& r) {
  std::ostringstream os;
  os << "scenario " << r.scenario << " (digest " << r.digest << ")\n";
  for (const CheckResult& c : r.checks) {
    os << "  " << (c.passed ? "PASS" : "FAIL") << "  " << c.name;
    if (c.residual != 0.0) os << "  residual=" << c.residual;
    if (!c.witness.empty()) os << "  [" << c.witness << "]";
    os << "\n";
  }
  if (r.rank_warning) os << "  note: singular values near the rank cutoff\n";
  os << (r.all_passed() ? "all checks passed" : "CHECKS FAILED") << "\n";
  return os.str();
}

}  // namespace locint
