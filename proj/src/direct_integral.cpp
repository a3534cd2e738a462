#include "locint/direct_integral.hpp"

#include <algorithm>

#include "locint/error.hpp"

namespace locint {

namespace {

// A value family fits a level when positive-weight atoms outside the level's
// ground set carry zero and in-level values stay inside the level prefix.
bool fits_level(const DirectIntegralSpace& space, int level,
                const std::vector<Eigen::VectorXcd>& values) {
  std::uint64_t ground = space.measure().system().ground(level);
  for (int p = 0; p < space.atom_count(); ++p) {
    if (!space.positive_weight(p)) continue;
    const Eigen::VectorXcd& v = values[p];
    if (!((ground >> p) & 1u)) {
      if (v.squaredNorm() != 0.0) return false;
      continue;
    }
    for (int i = space.fiber(p).dim(level); i < space.fiber(p).ambient_dim; ++i)
      if (v(i) != std::complex<double>(0.0, 0.0)) return false;
  }
  return true;
}

void check_shapes(const DirectIntegralSpace& space,
                  const std::vector<Eigen::VectorXcd>& values) {
  if (values.size() != static_cast<std::size_t>(space.atom_count()))
    throw Error(ErrorKind::ShapeMismatch, "one value vector required per atom");
  for (int p = 0; p < space.atom_count(); ++p)
    if (values[p].size() != space.fiber(p).ambient_dim)
      throw Error(ErrorKind::ShapeMismatch,
                  "value at atom " + space.measure().system().atom_label(p) +
                      " has the wrong length");
}

// Sequential coordinate-order sum; Eigen's dot may reassociate, which would
// spoil the exact agreement between the chart and section inner products.
std::complex<double> fiber_dot(const Eigen::VectorXcd& u,
                               const Eigen::VectorXcd& v) {
  std::complex<double> sum = 0.0;
  for (int i = 0; i < u.size(); ++i) sum += std::conj(u(i)) * v(i);
  return sum;
}

}  // namespace

DirectIntegralSpace::DirectIntegralSpace(LocallyMeasureSpace m,
                                         std::vector<FiberFiltration> f,
                                         std::vector<Weight> w)
    : measure_(std::move(m)), fibers_(std::move(f)), weights_(std::move(w)) {
  offsets_.resize(fibers_.size());
  for (std::size_t p = 0; p < fibers_.size(); ++p) {
    offsets_[p] = global_dim_;
    global_dim_ += fibers_[p].ambient_dim;
  }
  const DirectedPoset& poset = measure_.system().poset();
  masks_.resize(poset.size());
  for (int a = 0; a < poset.size(); ++a)
    for (std::size_t p = 0; p < fibers_.size(); ++p)
      if (fibers_[p].member(a))
        for (int i = 0; i < fibers_[p].dim(a); ++i)
          masks_[a].push_back(offsets_[p] + i);
}

DirectIntegralSpace DirectIntegralSpace::build(LocallyMeasureSpace space,
                                               std::vector<FiberFiltration> fibers,
                                               std::vector<Weight> atom_weights) {
  const InductiveMeasureSystem& system = space.system();
  for (const FiberFiltration& f : fibers)
    if (f.level_dims.size() != static_cast<std::size_t>(system.poset().size()))
      throw Error(ErrorKind::InconsistentPoset,
                  "fiber levels do not match the measure system's poset");
  fibers = validate_filtration(std::move(fibers), system.poset(), system);
  if (atom_weights.size() != static_cast<std::size_t>(system.atom_count()))
    throw Error(ErrorKind::ShapeMismatch, "one atom weight required per atom");
  // The atom weights must disintegrate the limit measure.
  for (std::uint64_t e : space.limit_sigma()) {
    Weight sum = Weight::zero(system.mode());
    for (int p = 0; p < system.atom_count(); ++p)
      if ((e >> p) & 1u) sum = sum + atom_weights[p];
    if (sum != space.limit_measure(e))
      throw Error(ErrorKind::NotAdditive,
                  "atom weights inconsistent with the limit measure");
  }
  return DirectIntegralSpace(std::move(space), std::move(fibers),
                             std::move(atom_weights));
}

bool DirectIntegralSpace::in_level(int level, int coord) const {
  return std::binary_search(masks_[level].begin(), masks_[level].end(), coord);
}

Eigen::MatrixXcd DirectIntegralSpace::projection(int level) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(global_dim_, global_dim_);
  for (int c : masks_[level]) out(c, c) = 1.0;
  return out;
}

Eigen::MatrixXcd DirectIntegralSpace::inclusion(int beta, int alpha) const {
  if (!poset().leq(alpha, beta))
    throw Error(ErrorKind::NotComparable,
                poset().label(alpha) + " is not below " + poset().label(beta));
  Eigen::MatrixXcd out =
      Eigen::MatrixXcd::Zero(level_dim(beta), level_dim(alpha));
  for (int j = 0; j < level_dim(alpha); ++j) {
    auto it = std::lower_bound(masks_[beta].begin(), masks_[beta].end(),
                               masks_[alpha][j]);
    out(static_cast<int>(it - masks_[beta].begin()), j) = 1.0;
  }
  return out;
}

Eigen::MatrixXcd DirectIntegralSpace::chart(int level) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(level_dim(level), global_dim_);
  for (int r = 0; r < level_dim(level); ++r) out(r, masks_[level][r]) = 1.0;
  return out;
}

Section make_section(const DirectIntegralSpace& space,
                     std::vector<Eigen::VectorXcd> values, int level) {
  check_shapes(space, values);
  if (level < 0 || level >= space.poset().size())
    throw Error(ErrorKind::UnknownLevel, "bad witnessing level");
  if (!fits_level(space, level, values))
    throw Error(ErrorKind::NotInLevel,
                "values escape level " + space.poset().label(level));
  return Section{std::move(values), level};
}

Section canonicalize(const DirectIntegralSpace& space, Section u) {
  for (int p = 0; p < space.atom_count(); ++p)
    if (!space.positive_weight(p)) u.values[p].setZero();
  return u;
}

bool section_equal(const DirectIntegralSpace& space, const Section& u,
                   const Section& v, double tol) {
  for (int p = 0; p < space.atom_count(); ++p) {
    if (!space.positive_weight(p)) continue;
    if ((u.values[p] - v.values[p]).norm() > tol) return false;
  }
  return true;
}

std::complex<double> inner_product(const DirectIntegralSpace& space,
                                   const Section& u, const Section& v) {
  check_shapes(space, u.values);
  check_shapes(space, v.values);
  std::complex<double> sum = 0.0;
  for (int p = 0; p < space.atom_count(); ++p)
    sum += space.atom_weight_value(p) * fiber_dot(u.values[p], v.values[p]);
  return sum;
}

std::complex<double> inner_product_at_level(const DirectIntegralSpace& space,
                                            int level, const Section& u,
                                            const Section& v) {
  check_shapes(space, u.values);
  check_shapes(space, v.values);
  if (!fits_level(space, level, u.values) || !fits_level(space, level, v.values))
    throw Error(ErrorKind::NotInLevel,
                "section not in level " + space.poset().label(level));
  std::uint64_t ground = space.measure().system().ground(level);
  std::complex<double> sum = 0.0;
  for (int p = 0; p < space.atom_count(); ++p)
    if ((ground >> p) & 1u)
      sum += space.atom_weight_value(p) * fiber_dot(u.values[p], v.values[p]);
  return sum;
}

int minimal_level(const DirectIntegralSpace& space,
                  const std::vector<Eigen::VectorXcd>& values) {
  check_shapes(space, values);
  const DirectedPoset& poset = space.poset();
  std::vector<int> admissible;
  for (int a = 0; a < poset.size(); ++a)
    if (fits_level(space, a, values)) admissible.push_back(a);
  if (admissible.empty())
    throw Error(ErrorKind::NoAdmissibleLevel, "values fit no level");
  for (int a : admissible) {
    bool minimal = true;
    for (int b : admissible)
      if (b != a && poset.leq(b, a)) minimal = false;
    if (minimal) return a;
  }
  return admissible.front();  // unreachable: some admissible level is minimal
}

Eigen::VectorXcd v_alpha(const DirectIntegralSpace& space, int level,
                         const Section& u) {
  check_shapes(space, u.values);
  if (!fits_level(space, level, u.values))
    throw Error(ErrorKind::NotInLevel,
                "section not in level " + space.poset().label(level));
  Eigen::VectorXcd x(space.level_dim(level));
  const std::vector<int>& mask = space.level_mask(level);
  for (int r = 0; r < x.size(); ++r) {
    int c = mask[r];
    int p = 0;
    while (p + 1 < space.atom_count() && space.fiber_offset(p + 1) <= c) ++p;
    x(r) = u.values[p](c - space.fiber_offset(p));
  }
  return x;
}

Section v_alpha_inverse(const DirectIntegralSpace& space, int level,
                        const Eigen::VectorXcd& x) {
  if (x.size() != space.level_dim(level))
    throw Error(ErrorKind::ShapeMismatch, "chart vector has the wrong length");
  std::vector<Eigen::VectorXcd> values(space.atom_count());
  for (int p = 0; p < space.atom_count(); ++p)
    values[p] = Eigen::VectorXcd::Zero(space.fiber(p).ambient_dim);
  const std::vector<int>& mask = space.level_mask(level);
  for (int r = 0; r < x.size(); ++r) {
    int c = mask[r];
    int p = 0;
    while (p + 1 < space.atom_count() && space.fiber_offset(p + 1) <= c) ++p;
    values[p](c - space.fiber_offset(p)) = x(r);
  }
  return make_section(space, std::move(values), level);
}

std::complex<double> chart_inner_product(const DirectIntegralSpace& space,
                                         int level, const Eigen::VectorXcd& x,
                                         const Eigen::VectorXcd& y) {
  if (x.size() != space.level_dim(level) || y.size() != space.level_dim(level))
    throw Error(ErrorKind::ShapeMismatch, "chart vector has the wrong length");
  const std::vector<int>& mask = space.level_mask(level);
  std::complex<double> sum = 0.0;
  int r = 0;
  for (int p = 0; p < space.atom_count(); ++p) {
    std::complex<double> fiber_sum = 0.0;
    while (r < x.size() && mask[r] < space.fiber_offset(p) + space.fiber(p).ambient_dim) {
      fiber_sum += std::conj(x(r)) * y(r);
      ++r;
    }
    sum += space.atom_weight_value(p) * fiber_sum;
  }
  return sum;
}

Eigen::VectorXcd section_to_global(const DirectIntegralSpace& space,
                                   const Section& u) {
  check_shapes(space, u.values);
  Eigen::VectorXcd out(space.global_dim());
  for (int p = 0; p < space.atom_count(); ++p)
    out.segment(space.fiber_offset(p), space.fiber(p).ambient_dim) = u.values[p];
  return out;
}

Section global_to_section(const DirectIntegralSpace& space,
                          const Eigen::VectorXcd& vec, int level) {
  if (vec.size() != space.global_dim())
    throw Error(ErrorKind::ShapeMismatch, "global vector has the wrong length");
  std::vector<Eigen::VectorXcd> values(space.atom_count());
  for (int p = 0; p < space.atom_count(); ++p)
    values[p] = vec.segment(space.fiber_offset(p), space.fiber(p).ambient_dim);
  return make_section(space, std::move(values), level);
}

}  // namespace locint
