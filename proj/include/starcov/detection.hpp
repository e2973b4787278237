#pragma once

#include <Eigen/Dense>

#include "starcov/noma_rates.hpp"
#include "starcov/system_model.hpp"

namespace starcov {

/// Signal power terms seen by the warden: phi1 with only the public signal
/// on air, phi2 with public and covert signals superposed.
struct WardenObservables {
  double phi1 = 0.0;  // [W]
  double phi2 = 0.0;  // [W]

  double phi() const { return phi2 - phi1; }
  void validate() const;
};

struct DetectionThreshold {
  double tau = 0.0;  // [W]
};

/// Admissible threshold range [noise_floor + phi1, noise_ceiling + phi1].
double threshold_lower(const WardenObservables& obs, const NoiseModel& noise);
double threshold_upper(const WardenObservables& obs, const NoiseModel& noise);

/// Detection error probability (false alarm + missed detection) of the
/// average-power test at threshold tau, under log-uniform noise uncertainty.
/// tau must lie in the admissible range; the result is clamped to [0, 1].
double dep(DetectionThreshold tau, const WardenObservables& obs,
           const NoiseModel& noise);

/// Threshold minimizing dep over the admissible range:
/// min{phi2 + floor, phi1 + ceiling}.
DetectionThreshold optimal_threshold(const WardenObservables& obs,
                                     const NoiseModel& noise);

/// Minimum detection error probability as a function of the covert power
/// exposure phi = phi2 - phi1.
double min_dep(double phi, const NoiseModel& noise);

/// Largest expected covert exposure that keeps min_dep >= 1 - epsilon:
/// (rho^(2 epsilon) - 1) * sigma_w2_nominal / rho.
double covert_lambda_bound(double epsilon, const NoiseModel& noise);

/// Expected covert exposure at the warden, averaged over its fading:
/// p_b * l_rw * sum_m beta_reflect[m] * |h_ar[m]|^2.
double expected_phi(double p_b, const StarBeamformer& beam,
                    const Eigen::VectorXcd& h_ar, double l_rw);

}  // namespace starcov
