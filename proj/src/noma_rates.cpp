#include "starcov/noma_rates.hpp"

#include <cmath>
#include <stdexcept>

namespace starcov {

namespace {

constexpr double kSplitTol = 1e-9;

Eigen::VectorXcd unit_modulus(const Eigen::VectorXd& beta,
                              const Eigen::VectorXd& phase) {
  Eigen::VectorXcd v(beta.size());
  for (Eigen::Index m = 0; m < beta.size(); ++m) {
    v[m] = std::sqrt(beta[m]) *
           std::complex<double>(std::cos(phase[m]), std::sin(phase[m]));
  }
  return v;
}

}  // namespace

double canonical_phase(double radians) {
  double p = std::fmod(radians, 2.0 * M_PI);
  if (p < 0) p += 2.0 * M_PI;
  if (p >= 2.0 * M_PI) p = 0.0;  // fmod rounding at the upper edge
  return p;
}

Eigen::VectorXcd StarBeamformer::reflect_coefficients() const {
  return unit_modulus(beta_reflect, phase_reflect);
}

Eigen::VectorXcd StarBeamformer::transmit_coefficients() const {
  return unit_modulus(beta_transmit, phase_transmit);
}

void StarBeamformer::validate() const {
  const auto m = beta_reflect.size();
  if (m < 1) throw std::invalid_argument("beamformer must be non-empty");
  if (beta_transmit.size() != m || phase_reflect.size() != m ||
      phase_transmit.size() != m) {
    throw std::invalid_argument("beamformer vectors must share length");
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (beta_reflect[i] < -kSplitTol || beta_reflect[i] > 1 + kSplitTol ||
        beta_transmit[i] < -kSplitTol || beta_transmit[i] > 1 + kSplitTol) {
      throw std::invalid_argument("amplitudes must lie in [0, 1]");
    }
    if (std::abs(beta_reflect[i] + beta_transmit[i] - 1.0) > kSplitTol) {
      throw std::invalid_argument("energy split must satisfy beta_r+beta_t=1");
    }
    if (phase_reflect[i] < 0 || phase_reflect[i] >= 2.0 * M_PI ||
        phase_transmit[i] < 0 || phase_transmit[i] >= 2.0 * M_PI) {
      throw std::invalid_argument("phases must be canonical in [0, 2*pi)");
    }
  }
}

double effective_gain(const Eigen::VectorXcd& h_user, Side side,
                      const StarBeamformer& beam,
                      const Eigen::VectorXcd& h_ar) {
  if (h_user.size() != h_ar.size() || h_user.size() != beam.elements()) {
    throw std::invalid_argument("effective_gain: length mismatch");
  }
  const Eigen::VectorXcd theta = side == Side::reflect
                                     ? beam.reflect_coefficients()
                                     : beam.transmit_coefficients();
  const std::complex<double> amp =
      (h_user.conjugate().cwiseProduct(theta).cwiseProduct(h_ar)).sum();
  return std::norm(amp);
}

RateTriple rates(const ChannelSet& ch, const StarBeamformer& beam,
                 const PowerSplit& p, const NoiseModel& noise) {
  ch.validate();
  if (ch.elements() != beam.elements()) {
    throw std::invalid_argument("rates: channel/beamformer length mismatch");
  }
  const double g_b = effective_gain(ch.h_rb, Side::reflect, beam, ch.h_ar);
  const double g_c = effective_gain(ch.h_rc, Side::transmit, beam, ch.h_ar);

  RateTriple r;
  r.r_bc = std::log2(1.0 + p.p_c * g_b / (p.p_b * g_b + noise.sigma_b2));
  r.r_bb = std::log2(1.0 + p.p_b * g_b / noise.sigma_b2);
  r.r_cc = std::log2(1.0 + p.p_c * g_c / (p.p_b * g_c + noise.sigma_c2));
  return r;
}

void PowerSplit::validate(double p_tmax) const {
  if (p_b < 0 || p_c < 0) {
    throw std::invalid_argument("powers must be nonnegative");
  }
  if (p_c < p_b) {
    throw std::invalid_argument("public power must dominate covert power");
  }
  if (p_b + p_c > p_tmax * (1 + 1e-12)) {
    throw std::invalid_argument("power budget exceeded");
  }
}

double warden_avg_power(const Eigen::VectorXcd& h_rw,
                        const Eigen::VectorXcd& h_ar,
                        const StarBeamformer& beam, const PowerSplit& p,
                        double sigma_w2, Hypothesis hyp) {
  const double gain = effective_gain(h_rw, Side::reflect, beam, h_ar);
  const double tx = hyp == Hypothesis::h0 ? p.p_c : p.p_b + p.p_c;
  return tx * gain + sigma_w2;
}

}  // namespace starcov
