#pragma once

#include <Eigen/Dense>

#include "starcov/system_model.hpp"

namespace starcov {

/// Per-element energy-splitting surface state. Amplitudes obey
/// beta_reflect + beta_transmit = 1 elementwise; phases are canonical in
/// [0, 2*pi).
struct StarBeamformer {
  Eigen::VectorXd beta_reflect;
  Eigen::VectorXd beta_transmit;
  Eigen::VectorXd phase_reflect;
  Eigen::VectorXd phase_transmit;

  int elements() const { return static_cast<int>(beta_reflect.size()); }
  Eigen::VectorXcd reflect_coefficients() const;   // sqrt(beta_r).*exp(j phi_r)
  Eigen::VectorXcd transmit_coefficients() const;  // sqrt(beta_t).*exp(j phi_t)
  void validate() const;
};

/// Map an angle into [0, 2*pi).
double canonical_phase(double radians);

enum class Side { reflect, transmit };

struct PowerSplit {
  double p_b = 0.0;  // covert signal power [W]
  double p_c = 0.0;  // public signal power [W]

  void validate(double p_tmax) const;
};

struct RateTriple {
  double r_bb = 0.0;  // covert user decoding its own signal
  double r_bc = 0.0;  // covert user decoding the public signal (SIC stage)
  double r_cc = 0.0;  // public user decoding its own signal
};

/// Cascaded power gain |h_user^H Theta h_ar|^2 through the selected side.
double effective_gain(const Eigen::VectorXcd& h_user, Side side,
                      const StarBeamformer& beam,
                      const Eigen::VectorXcd& h_ar);

/// Decoding rates of the two-user downlink for a given surface state and
/// power split. SIC order: the covert user removes the public signal first.
RateTriple rates(const ChannelSet& ch, const StarBeamformer& beam,
                 const PowerSplit& p, const NoiseModel& noise);

enum class Hypothesis { h0, h1 };

/// Asymptotic average power observed by the warden under either hypothesis,
/// for a given instantaneous warden channel draw. Test harnesses use this to
/// validate the detection math empirically.
double warden_avg_power(const Eigen::VectorXcd& h_rw,
                        const Eigen::VectorXcd& h_ar,
                        const StarBeamformer& beam, const PowerSplit& p,
                        double sigma_w2, Hypothesis hyp);

}  // namespace starcov
