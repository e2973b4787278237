#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <random>
#include <sstream>

#include "starcov/sdp.hpp"
#include "starcov/sdp_embedding.hpp"
#include "starcov/sdp_solver.hpp"
#include "starcov/system_model.hpp"

using namespace starcov;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
  MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = std::complex<double>(portable_normal(rng), portable_normal(rng));
    }
  }
  return 0.5 * (a + a.adjoint());
}

MatrixXcd random_psd(int n, std::mt19937_64& rng) {
  const MatrixXcd h = random_hermitian(n, rng);
  return h * h.adjoint();
}

// maximize Re Tr(A Q) s.t. Tr(Q) = 1, Q PSD. Optimum is lambda_max(A).
SdpProblem lambda_max_problem(const MatrixXcd& a) {
  const int n = static_cast<int>(a.rows());
  SdpProblem p;
  p.matrix_dims = {n};
  p.psd = {true};
  p.objective_matrix = {a};
  SdpConstraint trace;
  trace.matrix_coeff = {MatrixXcd::Identity(n, n)};
  trace.sense = SdpConstraint::Sense::eq;
  trace.rhs = 1.0;
  p.constraints.push_back(trace);
  return p;
}

}  // namespace

TEST_CASE("embedding of a 1x1 Hermitian is a scaled identity") {
  MatrixXcd h(1, 1);
  h(0, 0) = 3.5;
  const MatrixXd t = hermitian_embedding(h);
  CHECK(t.rows() == 2);
  CHECK(t(0, 0) == doctest::Approx(3.5));
  CHECK(t(1, 1) == doctest::Approx(3.5));
  CHECK(t(0, 1) == doctest::Approx(0.0));
  CHECK(t(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("Hermitian PSD iff real embedding PSD") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const MatrixXcd h = random_hermitian(4, rng);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ec(h);
    Eigen::SelfAdjointEigenSolver<MatrixXd> er(hermitian_embedding(h));
    const bool psd_c = ec.eigenvalues().minCoeff() >= -1e-12;
    const bool psd_r = er.eigenvalues().minCoeff() >= -1e-12;
    CHECK(psd_c == psd_r);
    // Eigenvalues coincide with doubled multiplicity.
    CHECK(er.eigenvalues().minCoeff() ==
          doctest::Approx(ec.eigenvalues().minCoeff()).epsilon(1e-9));
  }
}

TEST_CASE("embedding round trip recovers the Hermitian matrix") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixXcd h = random_hermitian(5, rng);
    const MatrixXcd back = complex_from_embedding(hermitian_embedding(h));
    CHECK((back - h).norm() <= 1e-14 * std::max(1.0, h.norm()));
  }
}

TEST_CASE("feasibility and optimum preserved under real embedding") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const MatrixXcd a = random_hermitian(4, rng);
    const SdpProblem p = lambda_max_problem(a);
    const SdpProblem q = real_embedding(p);
    const SdpSolution sp = solve_sdp(p);
    const SdpSolution sq = solve_sdp(q);
    REQUIRE(sp.status == SdpStatus::optimal);
    REQUIRE(sq.status == SdpStatus::optimal);
    CHECK(sp.objective ==
          doctest::Approx(sq.objective).epsilon(1e-6));
  }
}

TEST_CASE("trace objective pinned by diagonal constraints") {
  // maximize Tr(Q) s.t. diag(Q) = 1, Q PSD, dimension 2 -> objective 2.
  SdpProblem p;
  p.matrix_dims = {2};
  p.psd = {true};
  p.objective_matrix = {MatrixXcd::Identity(2, 2)};
  for (int m = 0; m < 2; ++m) {
    SdpConstraint c;
    MatrixXcd e = MatrixXcd::Zero(2, 2);
    e(m, m) = 1.0;
    c.matrix_coeff = {e};
    c.sense = SdpConstraint::Sense::eq;
    c.rhs = 1.0;
    p.constraints.push_back(c);
  }
  const SdpSolution s = solve_sdp(p);
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.objective == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("variational identity: max Tr(QA) over the spectraplex is lambda_max") {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 25; ++trial) {
    const MatrixXcd a = random_hermitian(4, rng);
    const SdpSolution s = solve_sdp(lambda_max_problem(a));
    REQUIRE(s.status == SdpStatus::optimal);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a);
    CHECK(s.objective ==
          doctest::Approx(es.eigenvalues().maxCoeff()).epsilon(1e-6));
    // Weak duality, maximize sense.
    CHECK(s.objective <= s.dual_objective + 1e-6 * (1 + std::abs(s.objective)));
  }
}

TEST_CASE("nonnegative trace cone makes Tr(Q) <= -1 infeasible") {
  SdpProblem p;
  p.matrix_dims = {3};
  p.psd = {true};
  p.objective_matrix = {MatrixXcd::Zero(3, 3)};
  SdpConstraint c;
  c.matrix_coeff = {MatrixXcd::Identity(3, 3)};
  c.sense = SdpConstraint::Sense::le;
  c.rhs = -1.0;
  p.constraints.push_back(c);
  const SdpSolution s = solve_sdp(p);
  CHECK(s.status == SdpStatus::infeasible);
  CHECK(!s.diagnostic.empty());
}

TEST_CASE("solver is deterministic given identical inputs") {
  std::mt19937_64 rng(15);
  const MatrixXcd a = random_hermitian(6, rng);
  const SdpSolution s1 = solve_sdp(lambda_max_problem(a));
  const SdpSolution s2 = solve_sdp(lambda_max_problem(a));
  REQUIRE(s1.status == SdpStatus::optimal);
  CHECK(s1.objective == s2.objective);
  CHECK(s1.iterations == s2.iterations);
  CHECK((s1.matrix_values[0] - s2.matrix_values[0]).norm() == 0.0);
}

TEST_CASE("mixed matrix/vector problem with inequalities") {
  // maximize Tr(Q A) + u0 s.t. Tr(Q) + u0 <= 1, diag couplings u = diag(Q),
  // Q PSD, u >= 0. Forces u0 = Q_00 and budget sharing.
  std::mt19937_64 rng(16);
  const MatrixXcd a = random_psd(3, rng);
  SdpProblem p;
  p.matrix_dims = {3};
  p.psd = {true};
  p.vector_dim = 1;
  p.objective_matrix = {a};
  p.objective_vector = VectorXd::Ones(1);
  SdpConstraint budget;
  budget.matrix_coeff = {MatrixXcd::Identity(3, 3)};
  budget.vector_coeff = VectorXd::Ones(1);
  budget.sense = SdpConstraint::Sense::le;
  budget.rhs = 1.0;
  p.constraints.push_back(budget);
  SdpConstraint link;
  MatrixXcd e = MatrixXcd::Zero(3, 3);
  e(0, 0) = 1.0;
  link.matrix_coeff = {e};
  link.vector_coeff = -VectorXd::Ones(1);
  link.sense = SdpConstraint::Sense::eq;
  link.rhs = 0.0;
  p.constraints.push_back(link);

  const SdpSolution s = solve_sdp(p);
  REQUIRE(s.status == SdpStatus::optimal);
  CHECK(s.vector_value[0] ==
        doctest::Approx(s.matrix_values[0](0, 0).real()).epsilon(1e-6));
  CHECK(s.matrix_values[0].trace().real() + s.vector_value[0] <=
        1.0 + 1e-7);
  CHECK(s.objective <= s.dual_objective + 1e-6 * (1 + std::abs(s.objective)));
}

TEST_CASE("lambda_max benchmark across dimensions") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dim(2, 32);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = dim(rng);
    const MatrixXcd a = random_hermitian(n, rng);
    const SdpSolution s = solve_sdp(lambda_max_problem(a));
    REQUIRE(s.status == SdpStatus::optimal);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(a);
    CHECK(std::abs(s.objective - es.eigenvalues().maxCoeff()) <=
          1e-6 * std::max(1.0, std::abs(es.eigenvalues().maxCoeff())));
  }
}

TEST_CASE("problem dump is readable text") {
  std::mt19937_64 rng(18);
  const SdpProblem p = lambda_max_problem(random_hermitian(2, rng));
  std::ostringstream os;
  dump(p, os);
  CHECK(os.str().find("sdp-problem") != std::string::npos);
  CHECK(os.str().find("constraint 0 ==") != std::string::npos);
}
