#include "locint/algebra.hpp"

#include <algorithm>
#include <cmath>

#include "locint/error.hpp"

namespace locint {

namespace {

int coord_atom(const DirectIntegralSpace& space, int c) {
  int p = 0;
  while (p + 1 < space.atom_count() && space.fiber_offset(p + 1) <= c) ++p;
  return p;
}

// Layout of vectorized matrices: real parts column-major, then imaginary
// parts column-major.
Eigen::VectorXd vec_real(const Eigen::MatrixXcd& t) {
  int n = static_cast<int>(t.rows());
  Eigen::VectorXd v(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      v(j * n + i) = t(i, j).real();
      v(n * n + j * n + i) = t(i, j).imag();
    }
  return v;
}

Eigen::MatrixXcd devec(const Eigen::VectorXd& v, int n) {
  Eigen::MatrixXcd t(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      t(i, j) = std::complex<double>(v(j * n + i), v(n * n + j * n + i));
  return t;
}

// The a.e. representative: zero every row and column of a null fiber.
Eigen::MatrixXcd essential_part(const DirectIntegralSpace& space,
                                Eigen::MatrixXcd t) {
  for (int p = 0; p < space.atom_count(); ++p) {
    if (space.positive_weight(p)) continue;
    int off = space.fiber_offset(p);
    int d = space.fiber(p).ambient_dim;
    t.middleRows(off, d).setZero();
    t.middleCols(off, d).setZero();
  }
  return t;
}

Eigen::MatrixXcd essential_identity(const DirectIntegralSpace& space) {
  return essential_part(space,
                        Eigen::MatrixXcd::Identity(space.global_dim(), space.global_dim()));
}

// Orthonormal column basis of the column span, singular values cut at
// 1e-10 * sigma_max; flags values within a factor 10 of the cutoff.
Eigen::MatrixXd orthonormal_span(const Eigen::MatrixXd& cols, bool* warning) {
  if (cols.cols() == 0 || cols.norm() == 0.0)
    return Eigen::MatrixXd(cols.rows(), 0);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  double cutoff = 1e-10 * sv(0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
    if (warning && sv(i) > 0.1 * cutoff && sv(i) < 10.0 * cutoff) *warning = true;
  }
  return svd.matrixU().leftCols(rank);
}

void check_budget(const DirectIntegralSpace& space) {
  if (space.global_dim() > 24)
    throw Error(ErrorKind::DimensionBudgetExceeded,
                "global dimension above 24");
}

}  // namespace

std::vector<std::pair<int, int>> locally_bounded_units(
    const DirectIntegralSpace& space, bool essential_only) {
  int n = space.global_dim();
  std::vector<char> essential(n, 1);
  if (essential_only)
    for (int c = 0; c < n; ++c)
      essential[c] = space.positive_weight(coord_atom(space, c));
  std::vector<std::vector<char>> in(space.poset().size(), std::vector<char>(n, 0));
  for (int a = 0; a < space.poset().size(); ++a)
    for (int c : space.level_mask(a)) in[a][c] = 1;
  std::vector<std::pair<int, int>> units;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!essential[i] || !essential[j]) continue;
      bool ok = true;
      for (int a = 0; a < space.poset().size() && ok; ++a)
        ok = in[a][i] == in[a][j];
      if (ok) units.emplace_back(i, j);
    }
  return units;
}

OperatorSubspace OperatorSubspace::from_operators(
    std::shared_ptr<const DirectIntegralSpace> space,
    const std::vector<LocalOperator>& generators, bool complex_linear) {
  check_budget(*space);
  int n = space->global_dim();
  int per = complex_linear ? 2 : 1;
  Eigen::MatrixXd cols(2 * n * n, per * generators.size());
  for (std::size_t k = 0; k < generators.size(); ++k) {
    Eigen::MatrixXcd t = essential_part(*space, generators[k].matrix());
    cols.col(per * k) = vec_real(t);
    if (complex_linear)
      cols.col(per * k + 1) = vec_real(std::complex<double>(0, 1) * t);
  }
  bool warning = false;
  OperatorSubspace out(space, orthonormal_span(cols, &warning));
  out.rank_warning_ = warning;
  return out;
}

OperatorSubspace OperatorSubspace::dec_space(
    std::shared_ptr<const DirectIntegralSpace> space) {
  check_budget(*space);
  int n = space->global_dim();
  std::vector<std::pair<int, int>> units;
  for (int p = 0; p < space->atom_count(); ++p) {
    if (!space->positive_weight(p)) continue;
    const FiberFiltration& fib = space->fiber(p);
    int off = space->fiber_offset(p);
    for (int i = 0; i < fib.ambient_dim; ++i)
      for (int j = 0; j < fib.ambient_dim; ++j) {
        bool ok = true;
        for (int a = 0; a < space->poset().size() && ok; ++a)
          if (fib.member(a)) ok = (i < fib.dim(a)) == (j < fib.dim(a));
        if (ok) units.emplace_back(off + i, off + j);
      }
  }
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * n * n, 2 * units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    auto [i, j] = units[u];
    basis(j * n + i, 2 * u) = 1.0;
    basis(n * n + j * n + i, 2 * u + 1) = 1.0;
  }
  OperatorSubspace out(std::move(space), std::move(basis));
  out.contains_identity = true;
  out.star_closed = true;
  out.product_closed = true;
  return out;
}

OperatorSubspace OperatorSubspace::diag_space(
    std::shared_ptr<const DirectIntegralSpace> space) {
  check_budget(*space);
  int n = space->global_dim();
  std::vector<int> atoms;
  for (int p = 0; p < space->atom_count(); ++p)
    if (space->positive_weight(p)) atoms.push_back(p);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * n * n, 2 * atoms.size());
  for (std::size_t u = 0; u < atoms.size(); ++u) {
    int p = atoms[u];
    int d = space->fiber(p).ambient_dim;
    double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) {
      int c = space->fiber_offset(p) + i;
      basis(c * n + c, 2 * u) = scale;
      basis(n * n + c * n + c, 2 * u + 1) = scale;
    }
  }
  OperatorSubspace out(std::move(space), std::move(basis));
  out.contains_identity = true;
  out.star_closed = true;
  out.product_closed = true;
  return out;
}

int OperatorSubspace::complex_dim() const {
  if (real_dim() % 2 != 0)
    throw Error(ErrorKind::RankAmbiguity,
                "subspace is not closed under multiplication by i");
  return real_dim() / 2;
}

Eigen::MatrixXcd OperatorSubspace::element(int k) const {
  return devec(basis_.col(k), space_->global_dim());
}

OperatorSubspace span_closure(std::shared_ptr<const DirectIntegralSpace> space,
                              const std::vector<LocalOperator>& generators,
                              bool with_star, bool with_product, bool with_unit) {
  check_budget(*space);
  int n = space->global_dim();
  std::vector<Eigen::VectorXd> seed;
  for (const LocalOperator& g : generators) {
    Eigen::MatrixXcd t = essential_part(*space, g.matrix());
    seed.push_back(vec_real(t));
    seed.push_back(vec_real(std::complex<double>(0, 1) * t));
  }
  if (with_unit) {
    Eigen::MatrixXcd id = essential_identity(*space);
    seed.push_back(vec_real(id));
    seed.push_back(vec_real(std::complex<double>(0, 1) * id));
  }
  Eigen::MatrixXd cols(2 * n * n, seed.size());
  for (std::size_t k = 0; k < seed.size(); ++k) cols.col(k) = seed[k];
  bool warning = false;
  Eigen::MatrixXd basis = orthonormal_span(cols, &warning);

  while (true) {
    int before = static_cast<int>(basis.cols());
    std::vector<Eigen::VectorXd> extra;
    std::vector<Eigen::MatrixXcd> mats;
    for (int k = 0; k < before; ++k) mats.push_back(devec(basis.col(k), n));
    if (with_star)
      for (const auto& m : mats) extra.push_back(vec_real(m.adjoint().eval()));
    if (with_product)
      for (const auto& a : mats)
        for (const auto& b : mats) extra.push_back(vec_real((a * b).eval()));
    if (extra.empty()) break;
    Eigen::MatrixXd all(2 * n * n, before + extra.size());
    all.leftCols(before) = basis;
    for (std::size_t k = 0; k < extra.size(); ++k)
      all.col(before + k) = extra[k];
    basis = orthonormal_span(all, &warning);
    if (static_cast<int>(basis.cols()) == before) break;
    if (basis.cols() > 2 * n * n)
      throw Error(ErrorKind::DimensionBudgetExceeded, "closure does not stabilize");
  }

  OperatorSubspace out(space, std::move(basis));
  out.rank_warning_ = warning;
  out.star_closed = with_star;
  out.product_closed = with_product;
  Eigen::VectorXd id = vec_real(essential_identity(*space));
  out.contains_identity =
      (out.basis_ * (out.basis_.transpose() * id) - id).norm() <= 1e-9 * std::max(1.0, id.norm());
  return out;
}

std::vector<std::pair<int, int>> essential_units(const DirectIntegralSpace& space) {
  int n = space.global_dim();
  std::vector<char> essential(n, 1);
  for (int c = 0; c < n; ++c)
    essential[c] = space.positive_weight(coord_atom(space, c));
  std::vector<std::pair<int, int>> units;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (essential[i] && essential[j]) units.emplace_back(i, j);
  return units;
}

OperatorSubspace commutant(const OperatorSubspace& m) {
  return commutant_within(m, locally_bounded_units(m.space(), true));
}

OperatorSubspace commutant_within(const OperatorSubspace& m,
                                  const std::vector<std::pair<int, int>>& units) {
  const DirectIntegralSpace& space = m.space();
  check_budget(space);
  int n = space.global_dim();
  int nu = static_cast<int>(units.size());

  // Parameters: a real and an imaginary coefficient per ambient unit. The
  // solution space starts as everything and is intersected with the
  // nullspace of one commutator map per basis element of m.
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(2 * nu, 2 * nu);
  bool warning = m.rank_warning();
  for (int c = 0; c < m.real_dim() && k.cols() > 0; ++c) {
    Eigen::MatrixXcd b = m.element(c);
    Eigen::MatrixXd a(2 * n * n, 2 * nu);
    for (int u = 0; u < nu; ++u) {
      auto [i, j] = units[u];
      // [E_ij, B] = e_i row_j(B) - col_i(B) e_j^T, assembled directly.
      Eigen::MatrixXcd comm = Eigen::MatrixXcd::Zero(n, n);
      comm.row(i) += b.row(j);
      comm.col(j) -= b.col(i);
      a.col(2 * u) = vec_real(comm);
      a.col(2 * u + 1) = vec_real((std::complex<double>(0, 1) * comm).eval());
    }
    Eigen::MatrixXd constrained = a * k;
    if (a.norm() == 0.0 || constrained.norm() == 0.0) continue;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(constrained, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    // The scale reference is the unrestricted map: when the current solution
    // space already satisfies the constraint, the product is pure rounding
    // noise and a cutoff relative to its own largest singular value would
    // mistake that noise for full rank.
    double cutoff = 1e-10 * a.norm();
    int rank = 0;
    for (int s = 0; s < sv.size(); ++s) {
      if (sv(s) > cutoff) ++rank;
      if (sv(s) > 0.1 * cutoff && sv(s) < 10.0 * cutoff) warning = true;
    }
    k = k * svd.matrixV().rightCols(k.cols() - rank);
  }

  // Map parameter vectors back to vectorized matrices. Distinct units hit
  // disjoint coordinates, so orthonormality carries over.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(2 * n * n, k.cols());
  for (int u = 0; u < nu; ++u) {
    auto [i, j] = units[u];
    basis.row(j * n + i) = k.row(2 * u);
    basis.row(n * n + j * n + i) = k.row(2 * u + 1);
  }
  OperatorSubspace out(m.space_ptr(), std::move(basis));
  out.rank_warning_ = warning;
  out.contains_identity = true;
  out.product_closed = true;
  out.star_closed = m.star_closed;
  return out;
}

double subspace_distance(const OperatorSubspace& a, const OperatorSubspace& b) {
  // Frobenius distance of the projectors, computed from the projection
  // residuals of each basis onto the other span. Equivalent to
  // sqrt(rA + rB - 2 |A^T B|_F^2) but free of the cancellation that floors
  // that expression near sqrt(dim * machine epsilon).
  double d2 = (b.basis() - a.basis() * (a.basis().transpose() * b.basis()))
                  .squaredNorm() +
              (a.basis() - b.basis() * (b.basis().transpose() * a.basis()))
                  .squaredNorm();
  return std::sqrt(d2);
}

bool subspace_equal(const OperatorSubspace& a, const OperatorSubspace& b,
                    double tol) {
  return a.real_dim() == b.real_dim() && subspace_distance(a, b) <= tol;
}

bool subspace_contains(const OperatorSubspace& a, const OperatorSubspace& b,
                       double tol) {
  for (int c = 0; c < b.real_dim(); ++c) {
    Eigen::VectorXd v = b.basis().col(c);
    if ((a.basis() * (a.basis().transpose() * v) - v).norm() > tol) return false;
  }
  return true;
}

DoubleCommutantResult double_commutant_check(const OperatorSubspace& m) {
  // The von Neumann property lives in the classical ambient: levels cut the
  // locally bounded class below the algebra's own commutation footprint, so
  // the bicommutant is taken over all essential matrix units.
  std::vector<std::pair<int, int>> ambient = essential_units(m.space());
  OperatorSubspace first = commutant_within(m, ambient);
  OperatorSubspace second = commutant_within(first, ambient);
  DoubleCommutantResult out;
  out.residual = subspace_distance(second, m);
  out.equal = second.real_dim() == m.real_dim() && out.residual <= 1e-9;
  out.rank_warning = first.rank_warning() || second.rank_warning();
  return out;
}

namespace {

// Matrix units of the decomposable algebra of the branch at one level, in
// the level's own (mask-local) coordinates.
std::vector<std::pair<int, int>> level_dec_units(const DirectIntegralSpace& space,
                                                 int level) {
  const std::vector<int>& mask = space.level_mask(level);
  std::vector<std::pair<int, int>> out;
  for (std::size_t r = 0; r < mask.size(); ++r)
    for (std::size_t s = 0; s < mask.size(); ++s) {
      int p = coord_atom(space, mask[r]);
      if (p != coord_atom(space, mask[s]) || !space.positive_weight(p)) continue;
      int i = mask[r] - space.fiber_offset(p);
      int j = mask[s] - space.fiber_offset(p);
      bool ok = true;
      for (int a = 0; a < space.poset().size() && ok; ++a) {
        if (!space.poset().leq(a, level) || !space.fiber(p).member(a)) continue;
        ok = (i < space.fiber(p).dim(a)) == (j < space.fiber(p).dim(a));
      }
      if (ok) out.emplace_back(static_cast<int>(r), static_cast<int>(s));
    }
  return out;
}

void add_check(TheoremReport& report, const std::string& name, bool passed,
               double residual, const std::string& witness = "") {
  report.checks.push_back({name, passed, residual, passed ? "" : witness});
}

}  // namespace

bool TheoremReport::all_passed() const {
  for (const TheoremCheck& c : checks)
    if (!c.passed) return false;
  return true;
}

TheoremReport verify_theorems(std::shared_ptr<const DirectIntegralSpace> space) {
  check_budget(*space);
  TheoremReport report;
  int n = space->global_dim();
  const DirectedPoset& poset = space->poset();
  OperatorSubspace dec = OperatorSubspace::dec_space(space);
  OperatorSubspace diag = OperatorSubspace::diag_space(space);

  // Unital *-algebra structure of the decomposable algebra. Its basis is a
  // set of matrix units, and E_ij E_kl is E_il or zero, so span closure under
  // product, adjoint and unit reduces to closure of the index set: exact.
  {
    std::vector<std::vector<char>> is_unit(n, std::vector<char>(n, 0));
    for (int c = 0; c < dec.real_dim(); c += 2) {
      Eigen::MatrixXcd e = dec.element(c);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (e(i, j) != std::complex<double>(0.0, 0.0)) is_unit[i][j] = 1;
    }
    bool closed = true;
    for (int c = 0; c < n && closed; ++c)
      if (space->positive_weight(coord_atom(*space, c))) closed = is_unit[c][c];
    for (int i = 0; i < n && closed; ++i)
      for (int j = 0; j < n && closed; ++j) {
        if (!is_unit[i][j]) continue;
        closed = is_unit[j][i];
        for (int l = 0; l < n && closed; ++l)
          if (is_unit[j][l]) closed = is_unit[i][l];
      }
    add_check(report, "dec_unital_star_product_closed", closed, closed ? 0.0 : 1.0,
              "the unit index set is not closed");
  }

  // Same structure for the diagonal algebra, checked numerically (few basis
  // elements: one indicator block per positive-weight atom).
  {
    double worst = 0.0;
    Eigen::VectorXd id = vec_real(essential_identity(*space));
    worst = std::max(worst,
                     (diag.basis() * (diag.basis().transpose() * id) - id).norm());
    for (int a = 0; a < diag.real_dim(); ++a) {
      Eigen::VectorXd star = vec_real(diag.element(a).adjoint().eval());
      worst = std::max(
          worst, (diag.basis() * (diag.basis().transpose() * star) - star).norm());
      for (int b = 0; b < diag.real_dim(); ++b) {
        Eigen::VectorXd prod = vec_real((diag.element(a) * diag.element(b)).eval());
        worst = std::max(
            worst, (diag.basis() * (diag.basis().transpose() * prod) - prod).norm());
      }
    }
    add_check(report, "diag_unital_star_product_closed", worst <= 1e-9, worst,
              "closure residual above 1e-9");
  }

  // Abelianness of the diagonal algebra.
  double comm_worst = 0.0;
  for (int a = 0; a < diag.real_dim(); ++a)
    for (int b = a + 1; b < diag.real_dim(); ++b) {
      Eigen::MatrixXcd x = diag.element(a), y = diag.element(b);
      comm_worst = std::max(comm_worst, (x * y - y * x).norm());
    }
  add_check(report, "diag_abelian", comm_worst <= 1e-12, comm_worst,
            "nonzero commutator inside the diagonal algebra");

  // Commutants in the locally bounded ambient carry the containments and the
  // commutation theorem; the von Neumann property M'' = M is classical and
  // holds in the ambient of all essential matrix units (within the locally
  // bounded ambient, diag'' collapses onto dec whenever a level cuts a
  // fiber, so that ambient cannot witness it).
  std::vector<std::pair<int, int>> full_ambient = essential_units(*space);
  OperatorSubspace diag_comm = commutant(diag);
  OperatorSubspace dec_comm = commutant(dec);
  OperatorSubspace dec_bicomm =
      commutant_within(commutant_within(dec, full_ambient), full_ambient);
  OperatorSubspace diag_bicomm =
      commutant_within(commutant_within(diag, full_ambient), full_ambient);
  report.rank_warning = report.rank_warning || diag_comm.rank_warning() ||
                        dec_comm.rank_warning() || dec_bicomm.rank_warning() ||
                        diag_bicomm.rank_warning();
  double dec_dcc = subspace_distance(dec_bicomm, dec);
  add_check(report, "dec_double_commutant",
            dec_bicomm.real_dim() == dec.real_dim() && dec_dcc <= 1e-9, dec_dcc,
            "dec'' differs from dec");
  double diag_dcc = subspace_distance(diag_bicomm, diag);
  add_check(report, "diag_double_commutant",
            diag_bicomm.real_dim() == diag.real_dim() && diag_dcc <= 1e-9,
            diag_dcc, "diag'' differs from diag");
  add_check(report, "diag_inside_dec", subspace_contains(dec, diag, 1e-9), 0.0,
            "a diagonal basis element escapes the decomposable algebra");
  add_check(report, "dec_inside_diag_commutant",
            subspace_contains(diag_comm, dec, 1e-9), 0.0,
            "a decomposable basis element does not commute with the diagonal algebra");
  add_check(report, "diag_inside_dec_commutant",
            subspace_contains(dec_comm, diag, 1e-9), 0.0,
            "a diagonal basis element does not commute with the decomposable algebra");
  double main_residual = subspace_distance(dec, diag_comm);
  add_check(report, "dec_equals_diag_commutant",
            dec.real_dim() == diag_comm.real_dim() && main_residual <= 1e-9,
            main_residual, "commutant of diag is not dec");

  // Level restrictions: composing through an intermediate level matches the
  // direct restriction exactly, and restricted basis elements land in the
  // branch algebras.
  double compose_worst = 0.0;
  double landing_worst = 0.0;
  int top = poset.greatest();
  for (auto [a, b] : poset.comparable_pairs()) {
    for (const auto* m : {&dec, &diag}) {
      for (int c = 0; c < m->real_dim(); ++c) {
        Eigen::MatrixXcd full = m->element(c);
        Eigen::MatrixXcd via =
            restrict_block(*space, restrict_block(*space, full, top, b), b, a);
        Eigen::MatrixXcd direct = restrict_block(*space, full, top, a);
        compose_worst = std::max(compose_worst, (via - direct).norm());
      }
    }
    if (a == b) continue;
    int da = space->level_dim(a);
    std::vector<std::vector<char>> allowed(da, std::vector<char>(da, 0));
    for (auto [r, s] : level_dec_units(*space, a)) allowed[r][s] = 1;
    for (int c = 0; c < dec.real_dim(); ++c) {
      Eigen::MatrixXcd r = restrict_block(*space, dec.element(c), top, a);
      for (int i = 0; i < r.rows(); ++i)
        for (int j = 0; j < r.cols(); ++j)
          if (std::abs(r(i, j)) > 1e-12 && !allowed[i][j])
            landing_worst = std::max(landing_worst, std::abs(r(i, j)));
    }
  }
  add_check(report, "restriction_compatibility", compose_worst == 0.0,
            compose_worst, "restrictions do not compose exactly");
  add_check(report, "restriction_lands_in_branch_algebra", landing_worst <= 1e-12,
            landing_worst, "a restricted basis element escapes the branch algebra");

  // Chart conjugates of commutant elements are fiberwise block-diagonal at
  // every level (the classical decomposable form).
  double chart_worst = 0.0;
  for (int c = 0; c < diag_comm.real_dim(); ++c) {
    Eigen::MatrixXcd t = diag_comm.element(c);
    for (int a = 0; a < poset.size(); ++a) {
      Eigen::MatrixXcd block = restrict_block(*space, t, top, a);
      const std::vector<int>& mask = space->level_mask(a);
      for (std::size_t r = 0; r < mask.size(); ++r)
        for (std::size_t s = 0; s < mask.size(); ++s) {
          int p = coord_atom(*space, mask[r]);
          int q = coord_atom(*space, mask[s]);
          if (p != q && space->positive_weight(p) && space->positive_weight(q))
            chart_worst = std::max(chart_worst, std::abs(block(r, s)));
        }
    }
  }
  add_check(report, "commutant_charts_decomposable", chart_worst <= 1e-12,
            chart_worst, "a chart conjugate couples distinct fibers");

  return report;
}

}  // namespace locint
