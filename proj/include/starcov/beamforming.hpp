#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

#include "starcov/noma_rates.hpp"
#include "starcov/power_alloc.hpp"
#include "starcov/sdp_solver.hpp"
#include "starcov/system_model.hpp"

namespace starcov {

/// star: every element splits energy between both sides.
/// dual_ris: elements 1..M/2 reflect only, elements M/2+1..M transmit only
/// (the conventional two-surface benchmark).
enum class SurfaceMode { star, dual_ris };

/// Data matrices of the lifted beamforming subproblem. bob_outer and
/// carol_outer are the rank-one outer products of the cascaded channel
/// vectors; ar_power is the elementwise |h_ar|^2 entering the covertness
/// constraint.
struct SdrCoefficients {
  Eigen::VectorXcd bob_cascade;    // conj(h_rb) .* h_ar
  Eigen::VectorXcd carol_cascade;  // conj(h_rc) .* h_ar
  Eigen::MatrixXcd bob_outer;      // bob_cascade * bob_cascade^H
  Eigen::MatrixXcd carol_outer;
  Eigen::VectorXd ar_power;        // |h_ar|^2
};

SdrCoefficients build_coefficients(const ChannelSet& ch);

/// Spectral norm defect Tr(Q) - ||Q||_2: zero exactly on rank-one PSD
/// matrices, positive otherwise.
double rank_one_defect(const Eigen::MatrixXcd& q);

/// Majorizing affine model of the rank-one defect, anchored at a previous
/// PSD iterate: Q -> Tr(Q) - ||Q_prev||_2 - <q q^H, Q - Q_prev> with q the
/// principal eigenvector, which collapses to <I - q q^H, Q>. A vanishing
/// anchor degrades gracefully to the defect's own Tr(Q).
struct PenaltyLinearization {
  Eigen::MatrixXcd gradient;

  double value(const Eigen::MatrixXcd& q) const;
};

PenaltyLinearization linearized_penalty(const Eigen::MatrixXcd& q_prev);

/// Inner-loop iterate: lifted matrices, their amplitude diagonals, the
/// linearization anchors and the current penalty weights.
struct SdrState {
  SurfaceMode mode = SurfaceMode::star;
  int elements = 0;  // full element count M
  Eigen::MatrixXcd q_reflect;  // M x M (star) or M/2 x M/2 (dual_ris)
  Eigen::MatrixXcd q_transmit;
  Eigen::VectorXd beta_reflect;  // always full length M
  Eigen::VectorXd beta_transmit;
  Eigen::VectorXcd anchor_reflect;
  Eigen::VectorXcd anchor_transmit;
  double xi_reflect = 0.0;
  double xi_transmit = 0.0;
  double eta_reflect = 0.0;
  double eta_transmit = 0.0;
  int iteration = 0;
};

class extraction_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class sdr_solve_error : public std::runtime_error {
 public:
  sdr_solve_error(SdpStatus st, const std::string& what)
      : std::runtime_error(what), status(st) {}
  SdpStatus status;
};

/// Lift a feasible beamformer into an exactly rank-one SDR state.
SdrState init_sdr_state(const StarBeamformer& beam, SurfaceMode mode);

/// One penalized SDR solve at the state's current penalty weights and
/// anchors. Returns the next state (new iterates, anchors and defects);
/// penalty weights are carried over unchanged.
SdrState solve_penalized_sdp(const SdrCoefficients& coef, const PowerSplit& p,
                             const SystemParams& params,
                             const NoiseModel& noise, const SdrState& state,
                             const SdpSolverOptions& solver = {});

struct PenaltyLoopOptions {
  double inner_tol = 1e-5;          // rank-one defect target
  int max_iterations = 30;
  double penalty_scale = 5.0;       // omega > 1
  double penalty_cap_factor = 1e8;  // cap relative to the initial weight
};

struct PenaltyLoopResult {
  SdrState state;
  bool rank_one_ok = false;
  int iterations = 0;
};

/// Penalty method: alternate penalized solves with geometric growth of the
/// penalty weights until both defects fall below inner_tol, the weight cap
/// is exceeded, or the iteration budget runs out.
PenaltyLoopResult penalty_inner_loop(const SdrCoefficients& coef,
                                     const PowerSplit& p,
                                     const SystemParams& params,
                                     const NoiseModel& noise, SdrState state,
                                     const PenaltyLoopOptions& opts = {},
                                     const SdpSolverOptions& solver = {});

/// Recover a feasible beamformer from a near-rank-one state: phases from
/// the principal eigenvectors, amplitudes from the lifted diagonals with
/// the energy-split defect divided evenly between the two sides. Refuses
/// states whose defect exceeds eta_tol.
StarBeamformer extract_beamformer(const SdrState& state, double eta_tol = 1e-5);

}  // namespace starcov
