#include "starcov/sdp_embedding.hpp"

namespace starcov {

Eigen::MatrixXd hermitian_embedding(const Eigen::MatrixXcd& h) {
  const Eigen::Index d = h.rows();
  Eigen::MatrixXd t(2 * d, 2 * d);
  t.topLeftCorner(d, d) = h.real();
  t.topRightCorner(d, d) = -h.imag();
  t.bottomLeftCorner(d, d) = h.imag();
  t.bottomRightCorner(d, d) = h.real();
  return t;
}

Eigen::MatrixXd embedding_coefficient(const Eigen::MatrixXcd& a) {
  return 0.5 * hermitian_embedding(a);
}

Eigen::MatrixXcd complex_from_embedding(const Eigen::MatrixXd& x) {
  const Eigen::Index d = x.rows() / 2;
  const Eigen::MatrixXd re =
      0.5 * (x.topLeftCorner(d, d) + x.bottomRightCorner(d, d));
  const Eigen::MatrixXd im =
      0.5 * (x.bottomLeftCorner(d, d) - x.topRightCorner(d, d));
  Eigen::MatrixXcd q(d, d);
  q.real() = 0.5 * (re + re.transpose());
  q.imag() = 0.5 * (im - im.transpose());
  return q;
}

SdpProblem real_embedding(const SdpProblem& p) {
  p.validate();
  SdpProblem r;
  const std::size_t nv = p.matrix_dims.size();
  r.matrix_dims.reserve(nv);
  for (int d : p.matrix_dims) r.matrix_dims.push_back(2 * d);
  r.psd = p.psd;
  r.vector_dim = p.vector_dim;
  r.objective_vector = p.objective_vector;
  r.objective_matrix.resize(nv);
  for (std::size_t j = 0; j < nv; ++j) {
    if (p.objective_matrix[j].size() == 0) continue;
    r.objective_matrix[j] =
        embedding_coefficient(p.objective_matrix[j]).cast<std::complex<double>>();
  }
  r.constraints.reserve(p.constraints.size());
  for (const auto& con : p.constraints) {
    SdpConstraint rc;
    rc.sense = con.sense;
    rc.rhs = con.rhs;
    rc.vector_coeff = con.vector_coeff;
    rc.matrix_coeff.resize(nv);
    for (std::size_t j = 0; j < con.matrix_coeff.size(); ++j) {
      if (con.matrix_coeff[j].size() == 0) continue;
      rc.matrix_coeff[j] =
          embedding_coefficient(con.matrix_coeff[j]).cast<std::complex<double>>();
    }
    r.constraints.push_back(std::move(rc));
  }
  return r;
}

}  // namespace starcov
