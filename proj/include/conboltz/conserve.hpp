#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "conboltz/grid.hpp"

namespace conboltz {

enum class ConstraintKind { Elastic, Inelastic };

/// Integration matrix C with rows w_j, v_j^(a) w_j and (elastic only)
/// |v_j|^2 w_j, w_j = dv^d, plus a Cholesky factorisation of C C^T.
class ConstraintSystem {
 public:
  ConstraintSystem(GridPtr grid, ConstraintKind kind);

  ConstraintKind kind() const { return kind_; }
  int rows() const { return static_cast<int>(C_.rows()); }
  const VelocityGrid& grid() const { return *grid_; }
  const Eigen::MatrixXd& matrix() const { return C_; }

  /// C x
  Eigen::VectorXd apply(std::span<const double> x) const;
  /// (C C^T)^{-1} r via the stored factorisation.
  Eigen::VectorXd solve_gram(const Eigen::VectorXd& r) const;

 private:
  GridPtr grid_;
  ConstraintKind kind_;
  Eigen::MatrixXd C_;
  Eigen::LLT<Eigen::MatrixXd> gram_;
};

ConstraintSystem build_constraints(GridPtr grid, ConstraintKind kind);

/// Q_c = Qu - C^T (C C^T)^{-1} C Qu.
std::vector<double> conserve_discrete(std::span<const double> qu, const ConstraintSystem& cs);

struct LagrangeMultipliers {
  std::vector<double> gamma;  // gamma_1 .. gamma_{d+2} (gamma_{d+1} for inelastic)
};

struct ContinuousCorrection {
  std::vector<double> field;
  LagrangeMultipliers multipliers;
};

/// Q_c(v) = Qu(v) - (gamma_1 + sum_j gamma_{j+1} v_j + gamma_{d+2} |v|^2) / 2 with
/// gamma chosen so the polynomial integrals over the cube are exact.
ContinuousCorrection conserve_continuous(std::span<const double> qu, const VelocityGrid& grid, ConstraintKind kind);

/// ||(Qc - Qu) <v>^{lambda k}||_2
double correction_magnitude(const VelocityGrid& grid, std::span<const double> qu, std::span<const double> qc,
                            double lambda, double k);

}  // namespace conboltz
