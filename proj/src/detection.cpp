#include "starcov/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starcov {

void WardenObservables::validate() const {
  if (phi1 < 0 || phi2 < phi1) {
    throw std::invalid_argument("observables require phi2 >= phi1 >= 0");
  }
}

double threshold_lower(const WardenObservables& obs, const NoiseModel& noise) {
  return noise.noise_floor() + obs.phi1;
}

double threshold_upper(const WardenObservables& obs, const NoiseModel& noise) {
  return noise.noise_ceiling() + obs.phi1;
}

double dep(DetectionThreshold tau, const WardenObservables& obs,
           const NoiseModel& noise) {
  obs.validate();
  noise.validate();
  const double lo = threshold_lower(obs, noise);
  const double hi = threshold_upper(obs, noise);
  if (tau.tau < lo * (1 - 1e-12) || tau.tau > hi * (1 + 1e-12)) {
    throw std::domain_error("detection threshold outside admissible range");
  }
  const double t = std::clamp(tau.tau, lo, hi);
  // Ties at tau - phi2 == noise_floor resolve toward the floor.
  const double lower_edge = std::max(t - obs.phi2, noise.noise_floor());
  const double value =
      1.0 - (std::log(t - obs.phi1) - std::log(lower_edge)) /
                (2.0 * std::log(noise.rho));
  return std::clamp(value, 0.0, 1.0);
}

DetectionThreshold optimal_threshold(const WardenObservables& obs,
                                     const NoiseModel& noise) {
  obs.validate();
  noise.validate();
  return {std::min(obs.phi2 + noise.noise_floor(),
                   obs.phi1 + noise.noise_ceiling())};
}

double min_dep(double phi, const NoiseModel& noise) {
  noise.validate();
  if (phi < 0) throw std::domain_error("covert exposure must be nonnegative");
  const double rho = noise.rho;
  const double limit = (rho * rho - 1.0) * noise.sigma_w2_nominal / rho;
  if (phi > limit) return 0.0;
  const double value =
      1.0 - std::log1p(rho * phi / noise.sigma_w2_nominal) /
                (2.0 * std::log(rho));
  return std::clamp(value, 0.0, 1.0);
}

double covert_lambda_bound(double epsilon, const NoiseModel& noise) {
  noise.validate();
  if (epsilon <= 0 || epsilon >= 1) {
    throw std::domain_error("covertness level must lie in (0, 1)");
  }
  const double rho = noise.rho;
  return (std::pow(rho, 2.0 * epsilon) - 1.0) * noise.sigma_w2_nominal / rho;
}

double expected_phi(double p_b, const StarBeamformer& beam,
                    const Eigen::VectorXcd& h_ar, double l_rw) {
  if (beam.elements() != h_ar.size()) {
    throw std::invalid_argument("expected_phi: length mismatch");
  }
  // Phases cancel in ||Theta_r h_ar||^2.
  const double exposure =
      beam.beta_reflect.dot(h_ar.cwiseAbs2());
  return p_b * l_rw * exposure;
}

}  // namespace starcov
