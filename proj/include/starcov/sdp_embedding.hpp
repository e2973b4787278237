#pragma once

#include <Eigen/Dense>

#include "starcov/sdp.hpp"

namespace starcov {

/// Real symmetric image of a Hermitian matrix:
///   T(H) = [[Re H, -Im H], [Im H, Re H]].
/// H is PSD exactly when T(H) is PSD, and Tr T(H) = 2 Tr H.
Eigen::MatrixXd hermitian_embedding(const Eigen::MatrixXcd& h);

/// Coefficient image T(A) / 2. Pairing the halved coefficient with the
/// doubled-trace variable image keeps every functional value unchanged:
///   <T(A)/2, T(Q)> = Re Tr(A Q).
Eigen::MatrixXd embedding_coefficient(const Eigen::MatrixXcd& a);

/// Inverse map. Averages over the embedding symmetry first, so any real
/// symmetric PSD matrix yields the Hermitian matrix with identical
/// objective and constraint values.
Eigen::MatrixXcd complex_from_embedding(const Eigen::MatrixXd& x);

/// Equivalent all-real program: every d-dimensional Hermitian variable
/// becomes one 2d-dimensional real symmetric variable, coefficients map
/// through embedding_coefficient, and the vector block is untouched. The
/// optimal values of the two programs coincide.
SdpProblem real_embedding(const SdpProblem& p);

}  // namespace starcov
