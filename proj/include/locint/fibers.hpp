#pragma once

#include <vector>

#include "locint/measure.hpp"
#include "locint/poset.hpp"

namespace locint {

/// Nested coordinate subspaces of one finite-dimensional fiber: the level-a
/// subspace is the span of the first level_dims[a] ambient coordinates
/// (canonical prefix convention). level_dims[a] == -1 marks levels whose
/// ground set does not contain the atom.
struct FiberFiltration {
  int atom = -1;
  int ambient_dim = 0;
  std::vector<int> level_dims;

  bool member(int level) const { return level_dims[level] >= 0; }
  int dim(int level) const { return level_dims[level]; }
};

/// Certifies a family of fiber candidates against a measure system sharing
/// the same poset: dims are declared exactly on the levels containing the
/// atom, grow monotonically along <=, and reach ambient_dim at the greatest
/// element. Returns the candidates ordered by atom index, one per atom.
std::vector<FiberFiltration> validate_filtration(
    std::vector<FiberFiltration> candidates, const DirectedPoset& poset,
    const InductiveMeasureSystem& system);

}  // namespace locint
