#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

namespace starcov {

/// One affine constraint over Hermitian matrix variables and the
/// nonnegative real vector block:
///   sum_j Re Tr(matrix_coeff[j] * X_j) + vector_coeff . u  (sense)  rhs.
/// Empty coefficient blocks stand for zero.
struct SdpConstraint {
  enum class Sense { eq, le, ge };

  std::vector<Eigen::MatrixXcd> matrix_coeff;
  Eigen::VectorXd vector_coeff;
  Sense sense = Sense::eq;
  double rhs = 0.0;
};

/// Standard-form program with Hermitian matrix variables and one
/// nonnegative real vector block:
///   maximize  sum_j Re Tr(objective_matrix[j] * X_j) + objective_vector . u
///   subject to the affine constraints, X_j PSD (per flag), u >= 0.
/// All matrix data must be Hermitian so the functionals are real-valued.
struct SdpProblem {
  std::vector<int> matrix_dims;
  std::vector<bool> psd;  // cone membership per matrix variable
  int vector_dim = 0;

  std::vector<Eigen::MatrixXcd> objective_matrix;
  Eigen::VectorXd objective_vector;
  std::vector<SdpConstraint> constraints;

  void validate() const;
};

enum class SdpStatus { optimal, infeasible, max_iterations, numerical_failure };

struct SdpSolution {
  std::vector<Eigen::MatrixXcd> matrix_values;
  Eigen::VectorXd vector_value;
  double objective = 0.0;       // primal value at the returned point
  double dual_objective = 0.0;  // weak-duality upper bound (maximize sense)
  SdpStatus status = SdpStatus::numerical_failure;
  double primal_residual = 0.0;  // normalized, on the scaled problem
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::string diagnostic;
};

/// Readable text dump (objective and constraint data) for offline
/// cross-checking against third-party solvers.
void dump(const SdpProblem& p, std::ostream& out);

}  // namespace starcov
