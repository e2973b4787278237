#include "starcov/beamforming.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "starcov/detection.hpp"

namespace starcov {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Principal eigenpair with a deterministic tie rule: among eigenvalues equal
// to the maximum, the smallest index in the solver's ascending order wins.
std::pair<double, VectorXcd> principal_eigenpair(const MatrixXcd& q) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(q);
  const VectorXd ev = es.eigenvalues();
  const Eigen::Index n = ev.size();
  Eigen::Index pick = n - 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ev[i] == ev[n - 1]) {
      pick = i;
      break;
    }
  }
  return {ev[n - 1], es.eigenvectors().col(pick)};
}

double real_inner(const MatrixXcd& a, const MatrixXcd& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

// Lift of a coefficient vector: Q = conj(theta) theta^T, so that
// Tr(Q a a^H) = |theta^T a|^2 and diag(Q) = |theta|^2.
MatrixXcd lift(const VectorXcd& theta) {
  return theta.conjugate() * theta.transpose();
}

struct ModeView {
  MatrixXcd bob_outer;    // restricted to the reflect-active elements
  MatrixXcd carol_outer;  // restricted to the transmit-active elements
  VectorXd ar_power_reflect;
  int reflect_dim = 0;
  int transmit_dim = 0;
};

ModeView restrict_view(const SdrCoefficients& coef, SurfaceMode mode) {
  const int m = static_cast<int>(coef.bob_cascade.size());
  ModeView v;
  if (mode == SurfaceMode::star) {
    v.bob_outer = coef.bob_outer;
    v.carol_outer = coef.carol_outer;
    v.ar_power_reflect = coef.ar_power;
    v.reflect_dim = v.transmit_dim = m;
  } else {
    const int half = m / 2;
    const VectorXcd a = coef.bob_cascade.head(half);
    const VectorXcd b = coef.carol_cascade.tail(half);
    v.bob_outer = a * a.adjoint();
    v.carol_outer = b * b.adjoint();
    v.ar_power_reflect = coef.ar_power.head(half);
    v.reflect_dim = v.transmit_dim = half;
  }
  return v;
}

}  // namespace

SdrCoefficients build_coefficients(const ChannelSet& ch) {
  ch.validate();
  SdrCoefficients c;
  c.bob_cascade = ch.h_rb.conjugate().cwiseProduct(ch.h_ar);
  c.carol_cascade = ch.h_rc.conjugate().cwiseProduct(ch.h_ar);
  c.bob_outer = c.bob_cascade * c.bob_cascade.adjoint();
  c.carol_outer = c.carol_cascade * c.carol_cascade.adjoint();
  c.ar_power = ch.h_ar.cwiseAbs2();
  return c;
}

double rank_one_defect(const MatrixXcd& q) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(q);
  es.compute(q, Eigen::EigenvaluesOnly);
  return std::max(0.0, q.trace().real() - es.eigenvalues().maxCoeff());
}

double PenaltyLinearization::value(const MatrixXcd& q) const {
  return real_inner(gradient, q);
}

PenaltyLinearization linearized_penalty(const MatrixXcd& q_prev) {
  const Eigen::Index n = q_prev.rows();
  PenaltyLinearization lin;
  if (q_prev.norm() <= 0) {
    lin.gradient = MatrixXcd::Identity(n, n);
    return lin;
  }
  const auto [lambda, q] = principal_eigenpair(q_prev);
  (void)lambda;
  lin.gradient = MatrixXcd::Identity(n, n) - q * q.adjoint();
  return lin;
}

SdrState init_sdr_state(const StarBeamformer& beam, SurfaceMode mode) {
  beam.validate();
  const int m = beam.elements();
  if (mode == SurfaceMode::dual_ris && m % 2 != 0) {
    throw std::invalid_argument("dual_ris mode needs an even element count");
  }
  SdrState st;
  st.mode = mode;
  st.elements = m;
  st.beta_reflect = beam.beta_reflect;
  st.beta_transmit = beam.beta_transmit;

  VectorXcd theta_r, theta_t;
  if (mode == SurfaceMode::star) {
    theta_r = beam.reflect_coefficients();
    theta_t = beam.transmit_coefficients();
  } else {
    const int half = m / 2;
    theta_r = beam.reflect_coefficients().head(half);
    theta_t = beam.transmit_coefficients().tail(half);
  }
  st.q_reflect = lift(theta_r);
  st.q_transmit = lift(theta_t);
  st.anchor_reflect = theta_r.norm() > 0
                          ? VectorXcd(theta_r.conjugate().normalized())
                          : VectorXcd::Zero(theta_r.size());
  st.anchor_transmit = theta_t.norm() > 0
                           ? VectorXcd(theta_t.conjugate().normalized())
                           : VectorXcd::Zero(theta_t.size());
  st.eta_reflect = 0.0;  // rank-one by construction
  st.eta_transmit = 0.0;
  return st;
}

SdrState solve_penalized_sdp(const SdrCoefficients& coef, const PowerSplit& p,
                             const SystemParams& params,
                             const NoiseModel& noise, const SdrState& state,
                             const SdpSolverOptions& solver) {
  params.validate();
  noise.validate();
  const int m = state.elements;
  const ModeView v = restrict_view(coef, state.mode);
  const bool star = state.mode == SurfaceMode::star;
  const int nr = v.reflect_dim;
  const int nt = v.transmit_dim;

  SdpProblem prob;
  prob.matrix_dims = {nr, nt};
  prob.psd = {true, true};
  prob.vector_dim = star ? 2 * m : 0;

  const PenaltyLinearization lin_r =
      state.anchor_reflect.norm() > 0
          ? PenaltyLinearization{MatrixXcd::Identity(nr, nr) -
                                 state.anchor_reflect *
                                     state.anchor_reflect.adjoint()}
          : linearized_penalty(state.q_reflect);
  const PenaltyLinearization lin_t =
      state.anchor_transmit.norm() > 0
          ? PenaltyLinearization{MatrixXcd::Identity(nt, nt) -
                                 state.anchor_transmit *
                                     state.anchor_transmit.adjoint()}
          : linearized_penalty(state.q_transmit);

  prob.objective_matrix = {v.bob_outer - state.xi_reflect * lin_r.gradient,
                           -state.xi_transmit * lin_t.gradient};
  if (star) prob.objective_vector = VectorXd::Zero(2 * m);

  const double snr_floor = std::pow(2.0, params.qos_rate) - 1.0;

  {  // SIC ordering in the lifted variables
    SdpConstraint c;
    c.matrix_coeff = {noise.sigma_c2 * v.bob_outer,
                      -noise.sigma_b2 * v.carol_outer};
    c.sense = SdpConstraint::Sense::ge;
    c.rhs = 0.0;
    prob.constraints.push_back(std::move(c));
  }
  {  // public-user QoS at the fixed power split
    SdpConstraint c;
    c.matrix_coeff = {MatrixXcd(), (p.p_c - snr_floor * p.p_b) * v.carol_outer};
    c.sense = SdpConstraint::Sense::ge;
    c.rhs = snr_floor * noise.sigma_c2;
    prob.constraints.push_back(std::move(c));
  }
  const double l_rw =
      path_loss(params.d_rw, params.path_loss_exponent, params.reference_gain);
  if (p.p_b * l_rw > 0) {  // covertness exposure cap; inactive at p_b = 0
    const double cap =
        covert_lambda_bound(params.covertness_level, noise) / (p.p_b * l_rw);
    SdpConstraint c;
    c.sense = SdpConstraint::Sense::le;
    if (star) {
      c.vector_coeff = VectorXd::Zero(2 * m);
      c.vector_coeff.head(m) = coef.ar_power;
      c.rhs = cap;
    } else {
      // Fixed unit reflect amplitudes make the exposure a constant; keep the
      // row so an impossible cap is reported as infeasible.
      c.rhs = cap - v.ar_power_reflect.sum();
    }
    prob.constraints.push_back(std::move(c));
  }
  if (star) {
    for (int i = 0; i < m; ++i) {  // diag(Q_r) = beta_r, diag(Q_t) = beta_t
      SdpConstraint cr;
      MatrixXcd e = MatrixXcd::Zero(m, m);
      e(i, i) = 1.0;
      cr.matrix_coeff = {e, MatrixXcd()};
      cr.vector_coeff = VectorXd::Zero(2 * m);
      cr.vector_coeff[i] = -1.0;
      prob.constraints.push_back(std::move(cr));

      SdpConstraint ct;
      ct.matrix_coeff = {MatrixXcd(), e};
      ct.vector_coeff = VectorXd::Zero(2 * m);
      ct.vector_coeff[m + i] = -1.0;
      prob.constraints.push_back(std::move(ct));

      SdpConstraint sum;  // beta_r + beta_t = 1
      sum.vector_coeff = VectorXd::Zero(2 * m);
      sum.vector_coeff[i] = 1.0;
      sum.vector_coeff[m + i] = 1.0;
      sum.rhs = 1.0;
      prob.constraints.push_back(std::move(sum));
    }
  } else {
    for (int side = 0; side < 2; ++side) {  // unit-modulus diagonals
      const int n = side == 0 ? nr : nt;
      for (int i = 0; i < n; ++i) {
        SdpConstraint c;
        MatrixXcd e = MatrixXcd::Zero(n, n);
        e(i, i) = 1.0;
        c.matrix_coeff = side == 0 ? std::vector<MatrixXcd>{e, MatrixXcd()}
                                   : std::vector<MatrixXcd>{MatrixXcd(), e};
        c.rhs = 1.0;
        prob.constraints.push_back(std::move(c));
      }
    }
  }

  const SdpSolution sol = solve_sdp(prob, solver);
  if (sol.status != SdpStatus::optimal) {
    std::ostringstream os;
    os << "penalized SDR solve failed ("
       << (sol.status == SdpStatus::infeasible        ? "infeasible"
           : sol.status == SdpStatus::max_iterations  ? "max-iterations"
                                                      : "numerical-failure")
       << "): " << sol.diagnostic << "; residuals p=" << sol.primal_residual
       << " d=" << sol.dual_residual << " gap=" << sol.gap;
    throw sdr_solve_error(sol.status, os.str());
  }

  SdrState next = state;
  next.q_reflect = sol.matrix_values[0];
  next.q_transmit = sol.matrix_values[1];
  const auto [lr, qr] = principal_eigenpair(next.q_reflect);
  const auto [lt, qt] = principal_eigenpair(next.q_transmit);
  next.anchor_reflect = qr;
  next.anchor_transmit = qt;
  next.eta_reflect = std::max(0.0, next.q_reflect.trace().real() - lr);
  next.eta_transmit = std::max(0.0, next.q_transmit.trace().real() - lt);
  if (star) {
    next.beta_reflect = sol.vector_value.head(m);
    next.beta_transmit = sol.vector_value.tail(m);
  }
  next.iteration = state.iteration + 1;
  return next;
}

PenaltyLoopResult penalty_inner_loop(const SdrCoefficients& coef,
                                     const PowerSplit& p,
                                     const SystemParams& params,
                                     const NoiseModel& noise, SdrState state,
                                     const PenaltyLoopOptions& opts,
                                     const SdpSolverOptions& solver) {
  if (opts.penalty_scale <= 1.0) {
    throw std::invalid_argument("penalty scale must exceed 1");
  }
  const ModeView v = restrict_view(coef, state.mode);
  double xi0 = 1e-3 * std::abs(real_inner(v.bob_outer, state.q_reflect));
  if (xi0 <= 0) {
    xi0 = 1e-3 * (v.bob_outer.norm() + v.carol_outer.norm() + 1e-30);
  }
  state.xi_reflect = state.xi_transmit = xi0;
  const double cap = xi0 * opts.penalty_cap_factor;

  PenaltyLoopResult res;
  for (int i = 0; i < opts.max_iterations; ++i) {
    state = solve_penalized_sdp(coef, p, params, noise, state, solver);
    res.iterations = i + 1;
    if (std::max(state.eta_reflect, state.eta_transmit) <= opts.inner_tol) {
      res.rank_one_ok = true;
      break;
    }
    if (state.xi_reflect >= cap) break;  // rank-one failure past the cap
    state.xi_reflect = std::min(cap, state.xi_reflect * opts.penalty_scale);
    state.xi_transmit = std::min(cap, state.xi_transmit * opts.penalty_scale);
  }
  res.state = std::move(state);
  return res;
}

StarBeamformer extract_beamformer(const SdrState& state, double eta_tol) {
  if (std::max(state.eta_reflect, state.eta_transmit) > eta_tol) {
    std::ostringstream os;
    os << "rank-one defect above tolerance: eta_r = " << state.eta_reflect
       << ", eta_t = " << state.eta_transmit << ", tol = " << eta_tol;
    throw extraction_error(os.str());
  }
  const int m = state.elements;
  StarBeamformer beam;
  beam.beta_reflect.resize(m);
  beam.beta_transmit.resize(m);
  beam.phase_reflect = VectorXd::Zero(m);
  beam.phase_transmit = VectorXd::Zero(m);

  // The lift is Q = conj(theta) theta^T, so phases come from the conjugated
  // principal eigenvector entries (a global phase is immaterial).
  auto phase_of = [](const std::complex<double>& v) {
    return std::abs(v) > 0 ? canonical_phase(-std::arg(v)) : 0.0;
  };

  if (state.mode == SurfaceMode::star) {
    for (int i = 0; i < m; ++i) {
      const double sum = state.beta_reflect[i] + state.beta_transmit[i];
      const double shift = (sum - 1.0) / 2.0;  // split the defect evenly
      beam.beta_reflect[i] =
          std::clamp(state.beta_reflect[i] - shift, 0.0, 1.0);
      beam.beta_transmit[i] = 1.0 - beam.beta_reflect[i];
      beam.phase_reflect[i] = phase_of(state.anchor_reflect[i]);
      beam.phase_transmit[i] = phase_of(state.anchor_transmit[i]);
    }
  } else {
    const int half = m / 2;
    for (int i = 0; i < half; ++i) {
      beam.beta_reflect[i] = 1.0;
      beam.beta_transmit[i] = 0.0;
      beam.phase_reflect[i] = phase_of(state.anchor_reflect[i]);
    }
    for (int i = half; i < m; ++i) {
      beam.beta_reflect[i] = 0.0;
      beam.beta_transmit[i] = 1.0;
      beam.phase_transmit[i] = phase_of(state.anchor_transmit[i - half]);
    }
  }
  beam.validate();
  return beam;
}

}  // namespace starcov
