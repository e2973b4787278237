#include "starcov/sdp.hpp"

#include <ostream>
#include <stdexcept>

namespace starcov {

namespace {

constexpr double kHermitianTol = 1e-10;

void check_hermitian(const Eigen::MatrixXcd& m, const std::string& where) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(where + ": matrix coefficient not square");
  }
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > kHermitianTol * scale) {
    throw std::invalid_argument(where + ": matrix coefficient not Hermitian");
  }
}

}  // namespace

void SdpProblem::validate() const {
  const std::size_t nv = matrix_dims.size();
  if (psd.size() != nv || objective_matrix.size() != nv) {
    throw std::invalid_argument("sdp: per-variable arrays must align");
  }
  for (std::size_t j = 0; j < nv; ++j) {
    if (matrix_dims[j] < 1) {
      throw std::invalid_argument("sdp: matrix dimensions must be positive");
    }
    if (!psd[j]) {
      throw std::invalid_argument("sdp: only PSD matrix variables supported");
    }
    if (objective_matrix[j].size() != 0) {
      if (objective_matrix[j].rows() != matrix_dims[j]) {
        throw std::invalid_argument("sdp: objective dimension mismatch");
      }
      check_hermitian(objective_matrix[j], "sdp objective");
    }
  }
  if (vector_dim < 0) throw std::invalid_argument("sdp: negative vector_dim");
  if (objective_vector.size() != 0 && objective_vector.size() != vector_dim) {
    throw std::invalid_argument("sdp: objective vector dimension mismatch");
  }
  for (const auto& con : constraints) {
    if (con.matrix_coeff.size() != nv && !con.matrix_coeff.empty()) {
      throw std::invalid_argument("sdp: constraint coefficient count mismatch");
    }
    for (std::size_t j = 0; j < con.matrix_coeff.size(); ++j) {
      if (con.matrix_coeff[j].size() == 0) continue;
      if (con.matrix_coeff[j].rows() != matrix_dims[j]) {
        throw std::invalid_argument("sdp: constraint dimension mismatch");
      }
      check_hermitian(con.matrix_coeff[j], "sdp constraint");
    }
    if (con.vector_coeff.size() != 0 && con.vector_coeff.size() != vector_dim) {
      throw std::invalid_argument("sdp: constraint vector dimension mismatch");
    }
  }
}

void dump(const SdpProblem& p, std::ostream& out) {
  out << "sdp-problem\n";
  out << "matrix-vars";
  for (int d : p.matrix_dims) out << ' ' << d;
  out << "\nvector-dim " << p.vector_dim << "\n";
  const Eigen::IOFormat fmt(Eigen::FullPrecision, 0, " ", "\n", "", "", "", "");
  out << "objective\n";
  for (std::size_t j = 0; j < p.objective_matrix.size(); ++j) {
    out << "matrix " << j << "\n";
    if (p.objective_matrix[j].size() != 0) {
      out << p.objective_matrix[j].format(fmt) << "\n";
    }
  }
  if (p.objective_vector.size() != 0) {
    out << "vector\n" << p.objective_vector.transpose().format(fmt) << "\n";
  }
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& con = p.constraints[i];
    const char* sense = con.sense == SdpConstraint::Sense::eq   ? "=="
                        : con.sense == SdpConstraint::Sense::le ? "<="
                                                                : ">=";
    out << "constraint " << i << " " << sense << " " << con.rhs << "\n";
    for (std::size_t j = 0; j < con.matrix_coeff.size(); ++j) {
      if (con.matrix_coeff[j].size() == 0) continue;
      out << "matrix " << j << "\n" << con.matrix_coeff[j].format(fmt) << "\n";
    }
    if (con.vector_coeff.size() != 0 && con.vector_coeff.norm() > 0) {
      out << "vector\n" << con.vector_coeff.transpose().format(fmt) << "\n";
    }
  }
}

}  // namespace starcov
