#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "locint/fibers.hpp"
#include "locint/measure.hpp"

namespace locint {

/// Global coordinate model of the direct integral: coordinates are the pairs
/// (atom p, fiber index i) laid out atom by atom. Level a keeps the
/// coordinates { (p, i) : p in X_a, i < dim_a(p) }; the union of the level
/// subspaces is the whole space because the greatest level keeps everything.
class DirectIntegralSpace {
 public:
  /// atom_weights are the top-level weights used for inner products and the
  /// a.e. identification; they must be consistent with the limit measure
  /// (every limit-measurable set's value is the sum of its atom weights).
  static DirectIntegralSpace build(LocallyMeasureSpace space,
                                   std::vector<FiberFiltration> fibers,
                                   std::vector<Weight> atom_weights);

  const LocallyMeasureSpace& measure() const { return measure_; }
  const DirectedPoset& poset() const { return measure_.system().poset(); }
  int atom_count() const { return static_cast<int>(fibers_.size()); }
  const FiberFiltration& fiber(int p) const { return fibers_[p]; }
  int fiber_offset(int p) const { return offsets_[p]; }
  int global_dim() const { return global_dim_; }

  const Weight& atom_weight(int p) const { return weights_[p]; }
  double atom_weight_value(int p) const { return weights_[p].to_double(); }
  bool positive_weight(int p) const { return !weights_[p].is_zero(); }

  /// Global coordinate indices kept at a level, in layout order.
  const std::vector<int>& level_mask(int level) const { return masks_[level]; }
  int level_dim(int level) const { return static_cast<int>(masks_[level].size()); }
  bool in_level(int level, int coord) const;

  /// Orthogonal projection of the global space onto the level subspace.
  Eigen::MatrixXcd projection(int level) const;

  /// Inclusion of the level-alpha coordinate space into the level-beta one
  /// (alpha <= beta); an isometry for the weighted inner products.
  Eigen::MatrixXcd inclusion(int beta, int alpha) const;

  /// Coordinate chart of a level: level_dim x global_dim selector matrix.
  Eigen::MatrixXcd chart(int level) const;

 private:
  DirectIntegralSpace(LocallyMeasureSpace m, std::vector<FiberFiltration> f,
                      std::vector<Weight> w);

  LocallyMeasureSpace measure_;
  std::vector<FiberFiltration> fibers_;
  std::vector<Weight> weights_;
  std::vector<int> offsets_;
  int global_dim_ = 0;
  std::vector<std::vector<int>> masks_;
};

/// An element of the direct integral: one complex vector per atom (of the
/// fiber's ambient length) plus a witnessing level. At the witnessing level,
/// positive-weight atoms outside X_level carry zero vectors and coordinates
/// at or past the level dimension vanish.
struct Section {
  std::vector<Eigen::VectorXcd> values;
  int level = -1;
};

/// Builds and validates a section; throws NotInLevel on a support or fiber
/// membership violation at a positive-weight atom, ShapeMismatch on bad
/// vector lengths.
Section make_section(const DirectIntegralSpace& space,
                     std::vector<Eigen::VectorXcd> values, int level);

/// Zeroes the values on weight-zero atoms (the a.e. representative).
Section canonicalize(const DirectIntegralSpace& space, Section u);

bool section_equal(const DirectIntegralSpace& space, const Section& u,
                   const Section& v, double tol);

/// Sum over atoms, in declared atom order, of weight(p) * <u(p), v(p)>;
/// conjugate-linear in the first argument.
std::complex<double> inner_product(const DirectIntegralSpace& space,
                                   const Section& u, const Section& v);

/// Same sum restricted to the atoms of X_level; u, v must lie in the level.
std::complex<double> inner_product_at_level(const DirectIntegralSpace& space,
                                            int level, const Section& u,
                                            const Section& v);

/// The least admissible witnessing level (ties broken by declared order);
/// throws NoAdmissibleLevel when the values fit no level.
int minimal_level(const DirectIntegralSpace& space,
                  const std::vector<Eigen::VectorXcd>& values);

/// Coordinates of a level-"level" section in the level's chart; NotInLevel
/// when the section does not lie in the level.
Eigen::VectorXcd v_alpha(const DirectIntegralSpace& space, int level,
                         const Section& u);

/// Pullback of a chart vector to a section witnessed at the level.
Section v_alpha_inverse(const DirectIntegralSpace& space, int level,
                        const Eigen::VectorXcd& x);

/// Weighted inner product on a level's chart coordinates.
std::complex<double> chart_inner_product(const DirectIntegralSpace& space,
                                         int level, const Eigen::VectorXcd& x,
                                         const Eigen::VectorXcd& y);

/// Flattens a section onto the global layout (and back).
Eigen::VectorXcd section_to_global(const DirectIntegralSpace& space,
                                   const Section& u);
Section global_to_section(const DirectIntegralSpace& space,
                          const Eigen::VectorXcd& vec, int level);

}  // namespace locint
