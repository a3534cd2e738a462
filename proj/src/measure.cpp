#include "locint/measure.hpp"

#include <algorithm>
#include <bit>

#include "locint/error.hpp"

namespace locint {

namespace {

std::string set_to_string(std::uint64_t e, const std::vector<std::string>& atoms) {
  std::string out = "{";
  bool first = true;
  for (std::size_t p = 0; p < atoms.size(); ++p) {
    if ((e >> p) & 1u) {
      if (!first) out += ",";
      out += atoms[p];
      first = false;
    }
  }
  return out + "}";
}

}  // namespace

FiniteMeasurableSpace FiniteMeasurableSpace::power_set(std::uint64_t ground) {
  int m = std::popcount(ground);
  if (m > 20)
    throw Error(ErrorKind::BudgetExceeded, "power set over more than 20 atoms");
  // Enumerate subsets of the (possibly non-contiguous) ground mask.
  std::vector<int> bits;
  for (int p = 0; p < 64; ++p)
    if ((ground >> p) & 1u) bits.push_back(p);
  FiniteMeasurableSpace out;
  out.ground_ = ground;
  out.sets_.reserve(std::size_t{1} << m);
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k) {
    std::uint64_t e = 0;
    for (int i = 0; i < m; ++i)
      if ((k >> i) & 1u) e |= std::uint64_t{1} << bits[i];
    out.sets_.push_back(e);
  }
  std::sort(out.sets_.begin(), out.sets_.end());
  return out;
}

FiniteMeasurableSpace FiniteMeasurableSpace::closure(
    std::uint64_t ground, const std::vector<std::uint64_t>& generators) {
  std::vector<std::uint64_t> work{0, ground};
  for (std::uint64_t g : generators) work.push_back(g & ground);
  std::sort(work.begin(), work.end());
  work.erase(std::unique(work.begin(), work.end()), work.end());
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<std::uint64_t> add;
    auto have = [&](std::uint64_t e) {
      return std::binary_search(work.begin(), work.end(), e);
    };
    for (std::uint64_t e : work)
      if (!have(ground & ~e)) add.push_back(ground & ~e);
    for (std::size_t i = 0; i < work.size(); ++i)
      for (std::size_t j = i + 1; j < work.size(); ++j)
        if (!have(work[i] | work[j])) add.push_back(work[i] | work[j]);
    if (!add.empty()) {
      grew = true;
      work.insert(work.end(), add.begin(), add.end());
      std::sort(work.begin(), work.end());
      work.erase(std::unique(work.begin(), work.end()), work.end());
      if (work.size() > (std::size_t{1} << 20))
        throw Error(ErrorKind::BudgetExceeded, "generated algebra too large");
    }
  }
  FiniteMeasurableSpace out;
  out.ground_ = ground;
  out.sets_ = std::move(work);
  return out;
}

FiniteMeasurableSpace FiniteMeasurableSpace::from_sets(
    std::uint64_t ground, std::vector<std::uint64_t> sets) {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  if (sets.size() > 4096)
    throw Error(ErrorKind::BudgetExceeded, "explicit set family too large");
  auto have = [&](std::uint64_t e) {
    return std::binary_search(sets.begin(), sets.end(), e);
  };
  if (!have(0) || !have(ground))
    throw Error(ErrorKind::SchemaViolation, "family lacks the empty or ground set");
  for (std::uint64_t e : sets) {
    if (e & ~ground)
      throw Error(ErrorKind::SchemaViolation, "set escapes the ground set");
    if (!have(ground & ~e))
      throw Error(ErrorKind::SchemaViolation, "family not closed under complement");
  }
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      if (!have(sets[i] | sets[j]))
        throw Error(ErrorKind::SchemaViolation, "family not closed under union");
  FiniteMeasurableSpace out;
  out.ground_ = ground;
  out.sets_ = std::move(sets);
  return out;
}

FiniteMeasurableSpace FiniteMeasurableSpace::trace(std::uint64_t sub) const {
  std::vector<std::uint64_t> traced;
  traced.reserve(sets_.size());
  for (std::uint64_t e : sets_) traced.push_back(e & sub);
  std::sort(traced.begin(), traced.end());
  traced.erase(std::unique(traced.begin(), traced.end()), traced.end());
  FiniteMeasurableSpace out;
  out.ground_ = sub & ground_;
  out.sets_ = std::move(traced);
  return out;
}

bool FiniteMeasurableSpace::contains(std::uint64_t e) const {
  return std::binary_search(sets_.begin(), sets_.end(), e);
}

int FiniteMeasurableSpace::index_of(std::uint64_t e) const {
  auto it = std::lower_bound(sets_.begin(), sets_.end(), e);
  if (it == sets_.end() || *it != e) return -1;
  return static_cast<int>(it - sets_.begin());
}

std::vector<std::uint64_t> FiniteMeasurableSpace::blocks() const {
  std::vector<std::uint64_t> out;
  for (int p = 0; p < 64; ++p) {
    if (!((ground_ >> p) & 1u)) continue;
    std::uint64_t b = ground_;
    for (std::uint64_t e : sets_) b &= ((e >> p) & 1u) ? e : (ground_ & ~e);
    if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
  }
  return out;
}

MeasureLevel level_from_atoms(FiniteMeasurableSpace space,
                              const std::vector<Weight>& atom_weights) {
  MeasureLevel level;
  level.values.reserve(space.sets().size());
  for (std::uint64_t e : space.sets()) {
    Weight sum;
    bool first = true;
    for (std::size_t p = 0; p < atom_weights.size(); ++p) {
      if ((e >> p) & 1u) {
        sum = first ? atom_weights[p] : sum + atom_weights[p];
        first = false;
      }
    }
    if (first) sum = Weight::zero(atom_weights.empty() ? Weight::Mode::Rational
                                                       : atom_weights[0].mode());
    level.values.push_back(sum);
  }
  level.space = std::move(space);
  return level;
}

InductiveMeasureSystem InductiveMeasureSystem::validate(
    DirectedPoset poset, std::vector<std::string> atom_labels,
    std::vector<MeasureLevel> levels, Weight::Mode mode) {
  if (levels.size() != static_cast<std::size_t>(poset.size()))
    throw Error(ErrorKind::MissingLevel, "one measure level required per poset element");
  if (atom_labels.size() > 64)
    throw Error(ErrorKind::BudgetExceeded, "more than 64 atoms");
  for (std::size_t i = 0; i < atom_labels.size(); ++i)
    for (std::size_t j = i + 1; j < atom_labels.size(); ++j)
      if (atom_labels[i] == atom_labels[j])
        throw Error(ErrorKind::SchemaViolation, "duplicate atom '" + atom_labels[i] + "'");

  // Per-level checks: table shape, mu(empty) = 0, additivity over the
  // partition of each set into the algebra's minimal blocks.
  for (int a = 0; a < poset.size(); ++a) {
    const MeasureLevel& lv = levels[a];
    const auto& sets = lv.space.sets();
    if (lv.values.size() != sets.size())
      throw Error(ErrorKind::SchemaViolation,
                  "measure table at level " + poset.label(a) + " is not total");
    for (const Weight& w : lv.values)
      if (w.mode() != mode)
        throw Error(ErrorKind::SchemaViolation, "mixed weight modes");
    int empty = lv.space.index_of(0);
    if (!lv.values[empty].is_zero())
      throw Error(ErrorKind::NotAdditive,
                  "mu(empty) nonzero at level " + poset.label(a));
    std::vector<std::uint64_t> blocks = lv.space.blocks();
    for (std::size_t i = 0; i < sets.size(); ++i) {
      Weight sum = Weight::zero(mode);
      for (std::uint64_t b : blocks)
        if ((b & sets[i]) == b && b != 0) sum = sum + lv.values[lv.space.index_of(b)];
      if (sum != lv.values[i])
        throw Error(ErrorKind::NotAdditive,
                    "level " + poset.label(a) + ", set " +
                        set_to_string(sets[i], atom_labels));
    }
  }

  // Cross-level checks on every comparable pair.
  for (auto [a, b] : poset.comparable_pairs()) {
    if (a == b) continue;
    const MeasureLevel& la = levels[a];
    const MeasureLevel& lb = levels[b];
    if (la.space.ground() & ~lb.space.ground())
      throw Error(ErrorKind::InclusionViolation,
                  "X_" + poset.label(a) + " not contained in X_" + poset.label(b));
    if (!(la.space == lb.space.trace(la.space.ground())))
      throw Error(ErrorKind::TraceMismatch,
                  "Sigma_" + poset.label(a) + " is not the trace of Sigma_" +
                      poset.label(b));
    for (std::size_t i = 0; i < la.space.sets().size(); ++i) {
      std::uint64_t e = la.space.sets()[i];
      int j = lb.space.index_of(e);
      // Membership upstairs keeps the union of the level algebras inside the
      // limit algebra; trace equality alone does not give it.
      if (j < 0)
        throw Error(ErrorKind::TraceMismatch,
                    "set " + set_to_string(e, atom_labels) + " of Sigma_" +
                        poset.label(a) + " missing from Sigma_" + poset.label(b));
      if (la.values[i] != lb.values[j])
        throw Error(ErrorKind::ProjectivityViolation,
                    "mu_" + poset.label(a) + " and mu_" + poset.label(b) +
                        " disagree on " + set_to_string(e, atom_labels));
    }
  }

  InductiveMeasureSystem out;
  out.poset_ = std::move(poset);
  out.atoms_ = std::move(atom_labels);
  out.levels_ = std::move(levels);
  out.mode_ = mode;
  return out;
}

int InductiveMeasureSystem::atom_index(const std::string& label) const {
  auto it = std::find(atoms_.begin(), atoms_.end(), label);
  if (it == atoms_.end())
    throw Error(ErrorKind::NotMeasurable, "unknown atom '" + label + "'");
  return static_cast<int>(it - atoms_.begin());
}

Weight InductiveMeasureSystem::mu(int level, std::uint64_t e) const {
  int i = levels_[level].space.index_of(e);
  if (i < 0)
    throw Error(ErrorKind::NotMeasurable,
                "set " + set_to_string(e, atoms_) + " not in Sigma_" +
                    poset_.label(level));
  return levels_[level].values[i];
}

LocallyMeasureSpace::LocallyMeasureSpace(InductiveMeasureSystem system)
    : system_(std::move(system)) {
  const DirectedPoset& poset = system_.poset();
  int top = poset.greatest();
  total_ = system_.ground(top);
  // Every limit-measurable set meets X = X_top in itself, so the limit
  // algebra is carved out of the top-level one.
  for (std::uint64_t e : system_.sigma(top).sets()) {
    bool ok = true;
    for (int a = 0; a < poset.size() && ok; ++a)
      ok = system_.sigma(a).contains(e & system_.ground(a));
    if (ok) sigma_.push_back(e);
  }
  for (int a = 0; a < poset.size(); ++a) {
    const auto& sets = system_.sigma(a).sets();
    sigma_zero_.insert(sigma_zero_.end(), sets.begin(), sets.end());
  }
  std::sort(sigma_zero_.begin(), sigma_zero_.end());
  sigma_zero_.erase(std::unique(sigma_zero_.begin(), sigma_zero_.end()),
                    sigma_zero_.end());
}

bool LocallyMeasureSpace::measurable(std::uint64_t e) const {
  return std::binary_search(sigma_.begin(), sigma_.end(), e);
}

Weight LocallyMeasureSpace::limit_measure(std::uint64_t e) const {
  if (!measurable(e))
    throw Error(ErrorKind::NotMeasurable,
                "set " + set_to_string(e, system_.atoms()) + " not in the limit algebra");
  // The net alpha -> mu_alpha(E ∩ X_alpha) is monotone along <=; at finite
  // scale its limit is its value at the greatest element.
  return system_.mu(system_.poset().greatest(), e);
}

}  // namespace locint
