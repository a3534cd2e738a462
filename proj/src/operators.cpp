#include "locint/operators.hpp"

#include <algorithm>
#include <cmath>

#include "locint/error.hpp"

namespace locint {

namespace {

// allowed(i, j) == 1 iff no level mask separates the two coordinates.
Eigen::MatrixXi allowed_entries(const DirectIntegralSpace& space) {
  int n = space.global_dim();
  Eigen::MatrixXi allowed = Eigen::MatrixXi::Ones(n, n);
  for (int a = 0; a < space.poset().size(); ++a) {
    std::vector<char> in(n, 0);
    for (int c : space.level_mask(a)) in[c] = 1;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (in[i] != in[j]) allowed(i, j) = 0;
  }
  return allowed;
}

std::string coord_name(const DirectIntegralSpace& space, int c) {
  int p = 0;
  while (p + 1 < space.atom_count() && space.fiber_offset(p + 1) <= c) ++p;
  return "(" + space.measure().system().atom_label(p) + "," +
         std::to_string(c - space.fiber_offset(p)) + ")";
}

}  // namespace

LocalOperator LocalOperator::validate(
    std::shared_ptr<const DirectIntegralSpace> space, Eigen::MatrixXcd matrix,
    double tol) {
  int n = space->global_dim();
  if (matrix.rows() != n || matrix.cols() != n)
    throw Error(ErrorKind::ShapeMismatch, "matrix does not match the global layout");
  Eigen::MatrixXi allowed = allowed_entries(*space);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!allowed(i, j)) {
        if (std::abs(matrix(i, j)) > tol)
          throw Error(ErrorKind::NotLocallyBounded,
                      "entry " + coord_name(*space, i) + " <- " +
                          coord_name(*space, j) + " couples a level with its complement");
        matrix(i, j) = 0.0;  // keep level blocks exactly reducing
      }
  return LocalOperator(std::move(space), std::move(matrix));
}

LocalOperator LocalOperator::adjoint() const {
  return LocalOperator(space_, mat_.adjoint());
}

LocalOperator LocalOperator::scale(std::complex<double> lambda) const {
  return LocalOperator(space_, lambda * mat_);
}

LocalOperator LocalOperator::operator+(const LocalOperator& other) const {
  if (space_ != other.space_)
    throw Error(ErrorKind::ShapeMismatch, "operators live on different spaces");
  return LocalOperator(space_, mat_ + other.mat_);
}

LocalOperator LocalOperator::operator*(const LocalOperator& other) const {
  if (space_ != other.space_)
    throw Error(ErrorKind::ShapeMismatch, "operators live on different spaces");
  return LocalOperator(space_, mat_ * other.mat_);
}

double seminorm(const LocalOperator& t, int level) {
  const DirectIntegralSpace& space = t.space();
  if (level < 0 || level >= space.poset().size())
    throw Error(ErrorKind::UnknownLevel, "bad level index");
  Eigen::MatrixXcd block = level_block(t, level);
  if (block.rows() == 0) return 0.0;
  bool diagonal = true;
  for (int i = 0; i < block.rows() && diagonal; ++i)
    for (int j = 0; j < block.cols() && diagonal; ++j)
      if (i != j && block(i, j) != std::complex<double>(0.0, 0.0)) diagonal = false;
  if (diagonal) {
    double m = 0.0;
    for (int i = 0; i < block.rows(); ++i) m = std::max(m, std::abs(block(i, i)));
    return m;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block);
  return svd.singularValues()(0);
}

Eigen::MatrixXcd restrict_block(const DirectIntegralSpace& space,
                                const Eigen::MatrixXcd& block_beta, int beta,
                                int alpha) {
  if (!space.poset().leq(alpha, beta))
    throw Error(ErrorKind::NotComparable,
                space.poset().label(alpha) + " is not below " + space.poset().label(beta));
  if (block_beta.rows() != space.level_dim(beta) ||
      block_beta.cols() != space.level_dim(beta))
    throw Error(ErrorKind::ShapeMismatch, "block does not match the level dimension");
  const std::vector<int>& ma = space.level_mask(alpha);
  const std::vector<int>& mb = space.level_mask(beta);
  std::vector<int> pos(ma.size());
  for (std::size_t j = 0; j < ma.size(); ++j)
    pos[j] = static_cast<int>(
        std::lower_bound(mb.begin(), mb.end(), ma[j]) - mb.begin());
  Eigen::MatrixXcd out(ma.size(), ma.size());
  for (std::size_t i = 0; i < ma.size(); ++i)
    for (std::size_t j = 0; j < ma.size(); ++j)
      out(i, j) = block_beta(pos[i], pos[j]);
  return out;
}

Eigen::MatrixXcd level_block(const LocalOperator& t, int level) {
  return restrict_block(t.space(), t.matrix(), t.space().poset().greatest(), level);
}

LocalOperator assemble_decomposable(
    std::shared_ptr<const DirectIntegralSpace> space,
    const DecomposableForm& family) {
  if (family.family.size() != static_cast<std::size_t>(space->atom_count()))
    throw Error(ErrorKind::ShapeMismatch, "one fiber matrix required per atom");
  int n = space->global_dim();
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
  for (int p = 0; p < space->atom_count(); ++p) {
    const FiberFiltration& fib = space->fiber(p);
    const Eigen::MatrixXcd& tp = family.family[p];
    if (tp.rows() != fib.ambient_dim || tp.cols() != fib.ambient_dim)
      throw Error(ErrorKind::ShapeMismatch,
                  "fiber matrix at atom " + space->measure().system().atom_label(p) +
                      " has the wrong shape");
    for (int a = 0; a < space->poset().size(); ++a) {
      if (!fib.member(a)) continue;
      int d = fib.dim(a);
      for (int i = 0; i < fib.ambient_dim; ++i)
        for (int j = 0; j < fib.ambient_dim; ++j)
          if ((i < d) != (j < d) && tp(i, j) != std::complex<double>(0.0, 0.0))
            throw Error(ErrorKind::FiberReductionViolation,
                        "fiber matrix at atom " +
                            space->measure().system().atom_label(p) +
                            " does not reduce level " + space->poset().label(a));
    }
    mat.block(space->fiber_offset(p), space->fiber_offset(p), fib.ambient_dim,
              fib.ambient_dim) = tp;
  }
  return LocalOperator::validate(std::move(space), std::move(mat));
}

LocalOperator assemble_diagonalizable(
    std::shared_ptr<const DirectIntegralSpace> space, const DiagonalSymbol& f) {
  if (f.f.size() != static_cast<std::size_t>(space->atom_count()))
    throw Error(ErrorKind::ShapeMismatch, "one scalar required per atom");
  int n = space->global_dim();
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(n, n);
  for (int p = 0; p < space->atom_count(); ++p)
    for (int i = 0; i < space->fiber(p).ambient_dim; ++i) {
      int c = space->fiber_offset(p) + i;
      mat(c, c) = f.f[p];
    }
  return LocalOperator::validate(std::move(space), std::move(mat));
}

ClassificationReport classify(const DirectIntegralSpace& space,
                              const Eigen::MatrixXcd& matrix, double tol) {
  ClassificationReport report;
  int n = space.global_dim();
  if (matrix.rows() != n || matrix.cols() != n)
    throw Error(ErrorKind::ShapeMismatch, "matrix does not match the global layout");
  Eigen::MatrixXi allowed = allowed_entries(space);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!allowed(i, j) && std::abs(matrix(i, j)) > 1e-14) {
        report.witness = "entry " + coord_name(space, i) + " <- " +
                         coord_name(space, j) + " couples a level with its complement";
        return report;
      }
  report.locally_bounded = true;

  // Decomposable: rows of every positive-weight fiber only see their own
  // fiber (the action at an a.e.-relevant point depends on nothing else).
  for (int p = 0; p < space.atom_count(); ++p) {
    if (!space.positive_weight(p)) continue;
    int off = space.fiber_offset(p);
    int d = space.fiber(p).ambient_dim;
    for (int i = off; i < off + d; ++i)
      for (int j = 0; j < n; ++j)
        if ((j < off || j >= off + d) && std::abs(matrix(i, j)) > tol) {
          report.witness = "entry " + coord_name(space, i) + " <- " +
                           coord_name(space, j) + " couples distinct fibers";
          return report;
        }
  }
  DecomposableForm form;
  for (int p = 0; p < space.atom_count(); ++p) {
    int d = space.fiber(p).ambient_dim;
    form.family.push_back(
        space.positive_weight(p)
            ? matrix.block(space.fiber_offset(p), space.fiber_offset(p), d, d)
            : Eigen::MatrixXcd::Zero(d, d).eval());
  }
  report.decomposable = std::move(form);

  // Diagonalizable: each positive-weight fiber block is scalar.
  DiagonalSymbol symbol;
  for (int p = 0; p < space.atom_count(); ++p) {
    if (!space.positive_weight(p)) {
      symbol.f.push_back(0.0);
      continue;
    }
    const Eigen::MatrixXcd& b = report.decomposable->family[p];
    int d = space.fiber(p).ambient_dim;
    std::complex<double> mean = b.trace() / static_cast<double>(d);
    Eigen::MatrixXcd dev =
        b - mean * Eigen::MatrixXcd::Identity(d, d);
    if (dev.norm() > 1e-9 * std::max(1.0, b.norm())) {
      report.witness = "fiber block at atom " +
                       space.measure().system().atom_label(p) + " is not scalar";
      return report;
    }
    symbol.f.push_back(mean);
  }
  report.diagonalizable = std::move(symbol);
  return report;
}

ClassificationReport classify(const LocalOperator& t, double tol) {
  return classify(t.space(), t.matrix(), tol);
}

}  // namespace locint
