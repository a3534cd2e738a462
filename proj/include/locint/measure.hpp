#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locint/poset.hpp"
#include "locint/weight.hpp"

namespace locint {

/// A finite measurable space: a ground set of atoms (bitmask over a global
/// atom universe of at most 64 atoms) together with a family of subsets that
/// is closed under complement and union. Sets are kept sorted for binary
/// search membership tests.
class FiniteMeasurableSpace {
 public:
  /// All subsets of the ground set. Throws BudgetExceeded past 20 atoms.
  static FiniteMeasurableSpace power_set(std::uint64_t ground);

  /// Smallest algebra on the ground set containing the generators.
  static FiniteMeasurableSpace closure(std::uint64_t ground,
                                       const std::vector<std::uint64_t>& generators);

  /// Validates an explicitly listed family (must contain the empty set and
  /// the ground set and be closed under complement and pairwise union).
  static FiniteMeasurableSpace from_sets(std::uint64_t ground,
                                         std::vector<std::uint64_t> sets);

  /// The trace algebra { E ∩ sub : E in this family } on sub.
  FiniteMeasurableSpace trace(std::uint64_t sub) const;

  std::uint64_t ground() const { return ground_; }
  const std::vector<std::uint64_t>& sets() const { return sets_; }
  bool contains(std::uint64_t e) const;
  int index_of(std::uint64_t e) const;  // -1 when absent

  /// Minimal nonempty sets (the atoms of the algebra); they partition ground.
  std::vector<std::uint64_t> blocks() const;

  bool operator==(const FiniteMeasurableSpace&) const = default;

  /// Empty placeholder; the factories produce the usable spaces.
  FiniteMeasurableSpace() = default;

 private:
  std::uint64_t ground_ = 0;
  std::vector<std::uint64_t> sets_;
};

/// One level of a projective measure system: the measurable space at that
/// level and the measure value of every set, aligned with space.sets().
struct MeasureLevel {
  FiniteMeasurableSpace space;
  std::vector<Weight> values;
};

/// Builds the set-value table of the measure determined by per-atom weights
/// (value of E = sum of weights over atoms of E, in increasing atom order).
MeasureLevel level_from_atoms(FiniteMeasurableSpace space,
                              const std::vector<Weight>& atom_weights);

/// The family {(X_alpha, Sigma_alpha, mu_alpha)} over a directed poset.
/// Certified invariants: inclusion of ground sets along <=, trace equality
/// Sigma_alpha = {E ∩ X_alpha : E in Sigma_beta} plus the membership
/// Sigma_alpha ⊆ Sigma_beta, additivity of each level measure, and
/// projectivity mu_alpha(E) = mu_beta(E) for E in Sigma_alpha.
class InductiveMeasureSystem {
 public:
  static InductiveMeasureSystem validate(DirectedPoset poset,
                                         std::vector<std::string> atom_labels,
                                         std::vector<MeasureLevel> levels,
                                         Weight::Mode mode);

  const DirectedPoset& poset() const { return poset_; }
  Weight::Mode mode() const { return mode_; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  const std::string& atom_label(int p) const { return atoms_[p]; }
  int atom_index(const std::string& label) const;  // throws NotMeasurable

  std::uint64_t ground(int level) const { return levels_[level].space.ground(); }
  const FiniteMeasurableSpace& sigma(int level) const { return levels_[level].space; }

  /// mu_level(e); throws NotMeasurable when e is not in Sigma_level.
  Weight mu(int level, std::uint64_t e) const;

 private:
  InductiveMeasureSystem() = default;

  DirectedPoset poset_;
  std::vector<std::string> atoms_;
  std::vector<MeasureLevel> levels_;
  Weight::Mode mode_ = Weight::Mode::Rational;
};

/// The limit (X, Sigma, mu) of a validated system. X = ground set at the
/// greatest level; Sigma = { E ⊆ X : E ∩ X_alpha in Sigma_alpha for all
/// alpha }; Sigma_0 = union of the level algebras; mu(E) = the value of the
/// monotone net at the greatest level.
class LocallyMeasureSpace {
 public:
  explicit LocallyMeasureSpace(InductiveMeasureSystem system);

  const InductiveMeasureSystem& system() const { return system_; }
  std::uint64_t total_set() const { return total_; }
  const std::vector<std::uint64_t>& limit_sigma() const { return sigma_; }
  const std::vector<std::uint64_t>& sigma_zero() const { return sigma_zero_; }
  bool sigma_zero_is_sigma() const { return sigma_zero_ == sigma_; }

  bool measurable(std::uint64_t e) const;
  Weight limit_measure(std::uint64_t e) const;  // throws NotMeasurable
  bool is_null(std::uint64_t e) const { return limit_measure(e).is_zero(); }

 private:
  InductiveMeasureSystem system_;
  std::uint64_t total_ = 0;
  std::vector<std::uint64_t> sigma_;
  std::vector<std::uint64_t> sigma_zero_;
};

}  // namespace locint
