#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>

namespace starcov {

/// Geometry, transmit budget and covertness targets of one deployment.
/// All members are linear-scale SI quantities; dB/dBm values are converted
/// at the configuration boundary and never stored.
struct SystemParams {
  int element_count = 8;            // surface elements M
  double d_ar = 100.0;              // transmitter -> surface distance [m]
  double d_rb = 20.0;               // surface -> covert user [m]
  double d_rc = 15.0;               // surface -> public user [m]
  double d_rw = 25.0;               // surface -> warden [m]
  double path_loss_exponent = 2.0;
  double reference_gain = 1e-2;     // linear power gain at 1 m
  double max_transmit_power = 0.1;  // [W]
  double covertness_level = 0.2;    // epsilon in (0,1)
  double qos_rate = 1.0;            // public-user rate floor [bit/s/Hz]

  void validate() const;
};

/// Receiver noise powers plus the warden's bounded noise uncertainty.
/// The warden's true noise power is only known to lie in
/// [sigma_w2_nominal / rho, rho * sigma_w2_nominal] with a log-uniform law.
struct NoiseModel {
  double sigma_b2 = 1e-11;          // covert user noise [W]
  double sigma_c2 = 1e-11;          // public user noise [W]
  double sigma_w2_nominal = 1e-11;  // warden nominal noise [W]
  double rho = 1.9952623149688795;  // uncertainty ratio (> 1), 3 dB default

  void validate() const;
  double noise_floor() const { return sigma_w2_nominal / rho; }
  double noise_ceiling() const { return rho * sigma_w2_nominal; }
};

/// One realization of the instantaneous channels known at the transmitter.
/// The warden link enters only through its path loss; no instantaneous
/// warden channel vector is ever stored.
struct ChannelSet {
  Eigen::VectorXcd h_ar;  // transmitter -> surface
  Eigen::VectorXcd h_rb;  // surface -> covert user
  Eigen::VectorXcd h_rc;  // surface -> public user
  double l_rw = 0.0;      // surface -> warden path loss (statistical CSI)

  int elements() const { return static_cast<int>(h_ar.size()); }
  void validate() const;
};

/// Large-scale path loss reference_gain / d^exponent.
double path_loss(double distance_m, double exponent, double reference_gain);

double db_to_linear(double value_db);   // 10^(x/10)
double linear_to_db(double value);
double dbm_to_watts(double value_dbm);  // 10^(x/10) * 1e-3
double watts_to_dbm(double watts);

/// Seed for the `index`-th reproducible stream derived from `base`.
/// Rule: mix(mix(base) + (index + 1) * 0x9E3779B97F4A7C15) where mix is the
/// SplitMix64 finalizer. Distinct indices give decorrelated streams, so
/// parallel trials stay reproducible independent of scheduling.
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

/// Standard normal deviate via Box-Muller over the engine's raw output.
/// Kept engine-level so the sampled values are identical on every platform
/// (std::normal_distribution is implementation-defined).
double portable_normal(std::mt19937_64& rng);

/// Circularly-symmetric complex Gaussian vector, each entry with total
/// variance `variance` (independent real/imag parts of variance/2 each).
Eigen::VectorXcd sample_cn_vector(int n, double variance, std::mt19937_64& rng);

/// Draw one Rayleigh-fading channel realization. Entries of each vector are
/// sqrt(l) * g with g ~ CN(0, 1) and l the link path loss. Pure in
/// (params, seed).
ChannelSet sample_channels(const SystemParams& params, std::uint64_t seed);

struct Config {
  SystemParams params;
  NoiseModel noise;
};

/// Key-value configuration with optional "dB"/"dBm" value suffixes, e.g.
///   reference_gain = -20 dB
///   p_tmax = 20 dBm
/// Unrecognized keys are errors; omitted keys keep their defaults.
Config parse_config(std::istream& in);
Config load_config(const std::string& path);

}  // namespace starcov
