#include "conboltz/conserve.hpp"

#include <cmath>

namespace conboltz {

ConstraintSystem::ConstraintSystem(GridPtr grid, ConstraintKind kind) : grid_(std::move(grid)), kind_(kind) {
  if (!grid_) throw Error("constraint system needs a grid");
  const int d = grid_->dim();
  const int p = kind == ConstraintKind::Elastic ? d + 2 : d + 1;
  const auto M = static_cast<Eigen::Index>(grid_->size());
  const double w = grid_->cell_volume();
  C_.resize(p, M);
  for (Eigen::Index j = 0; j < M; ++j) {
    const Vec v = grid_->velocity(static_cast<std::size_t>(j));
    C_(0, j) = w;
    for (int a = 0; a < d; ++a) C_(1 + a, j) = v[a] * w;
    if (kind == ConstraintKind::Elastic) C_(d + 1, j) = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) * w;
  }
  gram_.compute(C_ * C_.transpose());
  if (gram_.info() != Eigen::Success) throw Error("constraint Gram matrix is not positive definite");
}

Eigen::VectorXd ConstraintSystem::apply(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(C_.cols())) throw Error("constraint system: field size mismatch");
  return C_ * Eigen::Map<const Eigen::VectorXd>(x.data(), C_.cols());
}

Eigen::VectorXd ConstraintSystem::solve_gram(const Eigen::VectorXd& r) const { return gram_.solve(r); }

ConstraintSystem build_constraints(GridPtr grid, ConstraintKind kind) { return ConstraintSystem(std::move(grid), kind); }

std::vector<double> conserve_discrete(std::span<const double> qu, const ConstraintSystem& cs) {
  std::vector<double> out(qu.begin(), qu.end());
  if (out.size() != static_cast<std::size_t>(cs.matrix().cols())) throw Error("conserve_discrete: field size mismatch");
  Eigen::Map<Eigen::VectorXd> x(out.data(), static_cast<Eigen::Index>(out.size()));
  // Second pass mops up the rounding left by the first.
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd y = cs.matrix() * x;
    if (pass == 0 && y.isZero(0.0)) break;
    x.noalias() -= cs.matrix().transpose() * cs.solve_gram(y);
  }
  return out;
}

ContinuousCorrection conserve_continuous(std::span<const double> qu, const VelocityGrid& grid, ConstraintKind kind) {
  if (qu.size() != grid.size()) throw Error("conserve_continuous: field size mismatch");
  const int d = grid.dim();
  const int p = kind == ConstraintKind::Elastic ? d + 2 : d + 1;
  const double L = grid.half_width();
  const double V = std::pow(2.0 * L, d);
  const double L2 = L * L;

  // Exact integrals over (-L, L)^d of products of {1, v_j, |v|^2}.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
  A(0, 0) = V;
  for (int a = 0; a < d; ++a) A(1 + a, 1 + a) = V * L2 / 3.0;
  if (kind == ConstraintKind::Elastic) {
    A(0, d + 1) = A(d + 1, 0) = d * V * L2 / 3.0;
    A(d + 1, d + 1) = V * L2 * L2 * (d / 5.0 + d * (d - 1) / 9.0);
  }

  Eigen::VectorXd moments = Eigen::VectorXd::Zero(p);
  const double w = grid.cell_volume();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Vec v = grid.velocity(j);
    moments(0) += qu[j] * w;
    for (int a = 0; a < d; ++a) moments(1 + a) += qu[j] * v[a] * w;
    if (kind == ConstraintKind::Elastic) moments(d + 1) += qu[j] * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) * w;
  }
  // int (Qu - p/2) psi = 0  =>  A gamma = 2 moments.
  const Eigen::VectorXd gamma = A.ldlt().solve(2.0 * moments);

  ContinuousCorrection out;
  out.multipliers.gamma.assign(gamma.data(), gamma.data() + p);
  out.field.resize(qu.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Vec v = grid.velocity(j);
    double poly = gamma(0);
    for (int a = 0; a < d; ++a) poly += gamma(1 + a) * v[a];
    if (kind == ConstraintKind::Elastic) poly += gamma(d + 1) * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    out.field[j] = qu[j] - 0.5 * poly;
  }
  return out;
}

double correction_magnitude(const VelocityGrid& grid, std::span<const double> qu, std::span<const double> qc,
                            double lambda, double k) {
  if (qu.size() != grid.size() || qc.size() != grid.size()) throw Error("correction_magnitude: size mismatch");
  std::vector<double> diff(qu.size());
  for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = qc[j] - qu[j];
  return weighted_l2_norm(grid, diff, lambda * k);
}

}  // namespace conboltz
