#include "locint/fibers.hpp"

#include <algorithm>

#include "locint/error.hpp"

namespace locint {

std::vector<FiberFiltration> validate_filtration(
    std::vector<FiberFiltration> candidates, const DirectedPoset& poset,
    const InductiveMeasureSystem& system) {
  if (candidates.size() != static_cast<std::size_t>(system.atom_count()))
    throw Error(ErrorKind::MissingLevel, "one fiber required per atom");
  std::sort(candidates.begin(), candidates.end(),
            [](const FiberFiltration& x, const FiberFiltration& y) {
              return x.atom < y.atom;
            });
  for (int p = 0; p < system.atom_count(); ++p) {
    const FiberFiltration& f = candidates[p];
    if (f.atom != p)
      throw Error(ErrorKind::MissingLevel,
                  "fiber data missing for atom " + system.atom_label(p));
    if (f.level_dims.size() != static_cast<std::size_t>(poset.size()))
      throw Error(ErrorKind::MissingLevel,
                  "fiber of " + system.atom_label(p) + " not declared on every level");
    if (f.ambient_dim < 1)
      throw Error(ErrorKind::SchemaViolation,
                  "fiber of " + system.atom_label(p) + " has no ambient dimension");
    for (int a = 0; a < poset.size(); ++a) {
      bool in_level = (system.ground(a) >> p) & 1u;
      if (in_level != f.member(a))
        throw Error(ErrorKind::MissingLevel,
                    "fiber of " + system.atom_label(p) +
                        " declared on the wrong levels (level " + poset.label(a) + ")");
      if (f.member(a) && f.dim(a) > f.ambient_dim)
        throw Error(ErrorKind::SchemaViolation,
                    "fiber of " + system.atom_label(p) + " exceeds its ambient at level " +
                        poset.label(a));
    }
    for (auto [a, b] : poset.comparable_pairs()) {
      if (!f.member(a) || !f.member(b)) continue;
      if (f.dim(a) > f.dim(b))
        throw Error(ErrorKind::NonMonotoneDims,
                    "fiber of " + system.atom_label(p) + ": dim at " + poset.label(a) +
                        " exceeds dim at " + poset.label(b));
    }
    int top = poset.greatest();
    if (!f.member(top) || f.dim(top) != f.ambient_dim)
      throw Error(ErrorKind::NonMonotoneDims,
                  "fiber of " + system.atom_label(p) +
                      " does not reach its ambient at the greatest level");
  }
  return candidates;
}

}  // namespace locint
