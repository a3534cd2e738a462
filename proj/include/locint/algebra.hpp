#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "locint/operators.hpp"

namespace locint {

/// Coordinate pairs (i, j) of the global layout whose matrix unit E_ij is
/// locally bounded (no level mask separates i from j). With essential_only,
/// both coordinates must belong to positive-weight fibers; the span of those
/// units is the ambient algebra for all commutant work (operators are
/// identified when they agree off null fibers).
std::vector<std::pair<int, int>> locally_bounded_units(
    const DirectIntegralSpace& space, bool essential_only);

/// All coordinate pairs over positive-weight fibers: the ambient of the
/// classical (unconstrained) matrix algebra modulo null fibers.
std::vector<std::pair<int, int>> essential_units(const DirectIntegralSpace& space);

/// A linear subspace of locally bounded operators, held as an orthonormal
/// real basis of vectorized matrices (real parts stacked over imaginary
/// parts, column-major; 2 n^2 rows). Complex-linear subspaces have even real
/// dimension; complex_dim reports half of it.
class OperatorSubspace {
 public:
  static OperatorSubspace from_operators(
      std::shared_ptr<const DirectIntegralSpace> space,
      const std::vector<LocalOperator>& generators, bool complex_linear = true);

  /// Canonical basis of the decomposable operators: within each
  /// positive-weight fiber, all matrix units respecting every level prefix of
  /// that fiber. Unital, star- and product-closed by construction.
  static OperatorSubspace dec_space(std::shared_ptr<const DirectIntegralSpace> space);

  /// Canonical basis of the diagonalizable operators: the identity block of
  /// each positive-weight fiber.
  static OperatorSubspace diag_space(std::shared_ptr<const DirectIntegralSpace> space);

  const DirectIntegralSpace& space() const { return *space_; }
  const std::shared_ptr<const DirectIntegralSpace>& space_ptr() const { return space_; }
  const Eigen::MatrixXd& basis() const { return basis_; }
  int real_dim() const { return static_cast<int>(basis_.cols()); }
  int complex_dim() const;  // real_dim / 2; throws when the space is not i-closed

  Eigen::MatrixXcd element(int k) const;  // devectorized k-th basis column

  bool rank_warning() const { return rank_warning_; }
  bool contains_identity = false;
  bool star_closed = false;
  bool product_closed = false;

 private:
  friend OperatorSubspace commutant(const OperatorSubspace&);
  friend OperatorSubspace commutant_within(const OperatorSubspace&,
                                           const std::vector<std::pair<int, int>>&);
  friend OperatorSubspace span_closure(
      std::shared_ptr<const DirectIntegralSpace>,
      const std::vector<LocalOperator>&, bool, bool, bool);

  OperatorSubspace(std::shared_ptr<const DirectIntegralSpace> space,
                   Eigen::MatrixXd basis)
      : space_(std::move(space)), basis_(std::move(basis)) {}

  std::shared_ptr<const DirectIntegralSpace> space_;
  Eigen::MatrixXd basis_;
  bool rank_warning_ = false;
};

/// Smallest subspace containing the generators, closed under the requested
/// operations (adjoint, operator product, unit adjunction). Iteration
/// terminates because dimensions are bounded by the square of the layout.
OperatorSubspace span_closure(std::shared_ptr<const DirectIntegralSpace> space,
                              const std::vector<LocalOperator>& generators,
                              bool with_star, bool with_product, bool with_unit);

/// All locally bounded operators (modulo null fibers) commuting with every
/// element of m: the nullspace of the stacked commutator maps inside the
/// span of the locally bounded units, cut by singular values below
/// 1e-10 * sigma_max per constraint block.
OperatorSubspace commutant(const OperatorSubspace& m);

/// Same computation with an explicit ambient given as a list of matrix units
/// (coordinate pairs). With essential_units this is the classical commutant
/// modulo null fibers, the ambient in which the algebras satisfy M'' = M;
/// the locally bounded ambient is strictly smaller when levels cut fibers.
OperatorSubspace commutant_within(const OperatorSubspace& m,
                                  const std::vector<std::pair<int, int>>& units);

/// Frobenius distance between the orthogonal projectors onto the two spans.
double subspace_distance(const OperatorSubspace& a, const OperatorSubspace& b);
bool subspace_equal(const OperatorSubspace& a, const OperatorSubspace& b, double tol);
/// Whether every basis element of b lies in span(a) up to tol.
bool subspace_contains(const OperatorSubspace& a, const OperatorSubspace& b, double tol);

struct DoubleCommutantResult {
  bool equal = false;
  double residual = 0.0;
  bool rank_warning = false;
};
DoubleCommutantResult double_commutant_check(const OperatorSubspace& m);

struct TheoremCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  std::string witness;
};

struct TheoremReport {
  std::vector<TheoremCheck> checks;
  bool rank_warning = false;
  bool all_passed() const;
};

/// Runs the whole battery on one space: both canonical algebras are unital
/// star- and product-closed with M'' = M; the diagonal algebra is abelian;
/// the containments into each other's commutant hold; the decomposable
/// algebra equals the commutant of the diagonal one; level restrictions are
/// compatible and land in the level algebras; chart conjugates of commutant
/// elements are fiberwise block-diagonal at every level.
TheoremReport verify_theorems(std::shared_ptr<const DirectIntegralSpace> space);

}  // namespace locint
