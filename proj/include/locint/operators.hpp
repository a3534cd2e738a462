#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "locint/direct_integral.hpp"

namespace locint {

/// A locally bounded operator on the direct integral, stored as its action
/// on the whole space (the greatest level). Every level subspace reduces the
/// matrix: entries coupling a level's coordinates with their complement
/// vanish, so the operator and its adjoint both preserve every level.
class LocalOperator {
 public:
  /// Certifies level reduction for every level (off-block entries at most
  /// tol in absolute value, then zeroed so restrictions are exact).
  static LocalOperator validate(std::shared_ptr<const DirectIntegralSpace> space,
                                Eigen::MatrixXcd matrix, double tol = 1e-14);

  const DirectIntegralSpace& space() const { return *space_; }
  const std::shared_ptr<const DirectIntegralSpace>& space_ptr() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }

  LocalOperator adjoint() const;
  LocalOperator scale(std::complex<double> lambda) const;
  LocalOperator operator+(const LocalOperator& other) const;
  LocalOperator operator*(const LocalOperator& other) const;

 private:
  LocalOperator(std::shared_ptr<const DirectIntegralSpace> space,
                Eigen::MatrixXcd mat)
      : space_(std::move(space)), mat_(std::move(mat)) {}

  std::shared_ptr<const DirectIntegralSpace> space_;
  Eigen::MatrixXcd mat_;
};

/// Fiberwise form of a decomposable operator: one ambient matrix per atom.
struct DecomposableForm {
  std::vector<Eigen::MatrixXcd> family;
};

/// Scalar symbol of a diagonalizable operator: one scalar per atom.
struct DiagonalSymbol {
  std::vector<std::complex<double>> f;
};

struct ClassificationReport {
  bool locally_bounded = false;
  std::optional<DecomposableForm> decomposable;
  std::optional<DiagonalSymbol> diagonalizable;
  std::string witness;  // first violation found, empty when diagonalizable
};

/// Operator norm of the level block; exact for diagonal blocks.
double seminorm(const LocalOperator& t, int level);

/// The level-alpha block of a level-beta block matrix (alpha <= beta); with
/// beta the greatest level this is the restriction of the operator itself.
/// Blocks are indexed by the level masks in layout order; extraction is an
/// exact submatrix copy, so restricting through an intermediate level equals
/// restricting directly.
Eigen::MatrixXcd restrict_block(const DirectIntegralSpace& space,
                                const Eigen::MatrixXcd& block_beta, int beta,
                                int alpha);
Eigen::MatrixXcd level_block(const LocalOperator& t, int level);

/// Assembles the block-diagonal operator of a fiber family; each fiber
/// matrix must reduce the fiber's own prefix filtration.
LocalOperator assemble_decomposable(std::shared_ptr<const DirectIntegralSpace> space,
                                    const DecomposableForm& family);

/// Assembles f(p) times the identity on every fiber.
LocalOperator assemble_diagonalizable(std::shared_ptr<const DirectIntegralSpace> space,
                                      const DiagonalSymbol& f);

/// Tests a raw matrix for local boundedness, then block-diagonality across
/// positive-weight fibers (decomposable) and scalar fiber blocks
/// (diagonalizable). Weight-zero fibers are ignored; the recovered family is
/// reported as zero there.
ClassificationReport classify(const DirectIntegralSpace& space,
                              const Eigen::MatrixXcd& matrix,
                              double tol = 1e-12);
ClassificationReport classify(const LocalOperator& t, double tol = 1e-12);

}  // namespace locint
