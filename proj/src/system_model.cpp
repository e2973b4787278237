#include "starcov/system_model.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace starcov {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void SystemParams::validate() const {
  require(element_count >= 1, "element_count must be >= 1");
  require(d_ar > 0 && d_rb > 0 && d_rc > 0 && d_rw > 0,
          "all distances must be positive");
  require(path_loss_exponent > 0, "path_loss_exponent must be positive");
  require(reference_gain > 0, "reference_gain must be positive");
  require(max_transmit_power > 0, "max_transmit_power must be positive");
  require(covertness_level > 0 && covertness_level < 1,
          "covertness_level must lie in (0, 1)");
  require(qos_rate >= 0, "qos_rate must be nonnegative");
}

void NoiseModel::validate() const {
  require(sigma_b2 > 0 && sigma_c2 > 0 && sigma_w2_nominal > 0,
          "noise powers must be positive");
  require(rho > 1, "uncertainty ratio rho must exceed 1");
}

void ChannelSet::validate() const {
  const auto m = h_ar.size();
  require(m >= 1, "channel vectors must be non-empty");
  require(h_rb.size() == m && h_rc.size() == m,
          "channel vectors must share the same length");
  require(l_rw > 0, "warden path loss must be positive");
}

double path_loss(double distance_m, double exponent, double reference_gain) {
  require(distance_m > 0, "path_loss: distance must be positive");
  require(exponent > 0, "path_loss: exponent must be positive");
  require(reference_gain > 0, "path_loss: reference gain must be positive");
  return reference_gain / std::pow(distance_m, exponent);
}

double db_to_linear(double value_db) { return std::pow(10.0, value_db / 10.0); }

double linear_to_db(double value) { return 10.0 * std::log10(value); }

double dbm_to_watts(double value_dbm) {
  return db_to_linear(value_dbm) * 1e-3;
}

double watts_to_dbm(double watts) { return linear_to_db(watts * 1e3); }

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

double portable_normal(std::mt19937_64& rng) {
  // 53-bit uniforms; u1 shifted into (0, 1] so the log is finite.
  const double u1 =
      1.0 - static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * M_PI * u2);
}

Eigen::VectorXcd sample_cn_vector(int n, double variance,
                                  std::mt19937_64& rng) {
  Eigen::VectorXcd v(n);
  const double s = std::sqrt(variance / 2.0);
  for (int i = 0; i < n; ++i) {
    const double re = portable_normal(rng);
    const double im = portable_normal(rng);
    v[i] = std::complex<double>(s * re, s * im);
  }
  return v;
}

ChannelSet sample_channels(const SystemParams& params, std::uint64_t seed) {
  params.validate();
  std::mt19937_64 rng(seed);
  const int m = params.element_count;
  const double a = params.path_loss_exponent;
  const double g0 = params.reference_gain;

  ChannelSet ch;
  ch.h_ar = sample_cn_vector(m, path_loss(params.d_ar, a, g0), rng);
  ch.h_rb = sample_cn_vector(m, path_loss(params.d_rb, a, g0), rng);
  ch.h_rc = sample_cn_vector(m, path_loss(params.d_rc, a, g0), rng);
  ch.l_rw = path_loss(params.d_rw, a, g0);
  return ch;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// A value is a number with an optional "dB" or "dBm" suffix.
double parse_value(const std::string& raw, const std::string& key) {
  std::istringstream iss(trim(raw));
  double x = 0;
  if (!(iss >> x)) {
    throw std::invalid_argument("config: bad numeric value for '" + key + "'");
  }
  std::string suffix;
  iss >> suffix;
  std::string rest;
  if (iss >> rest) {
    throw std::invalid_argument("config: trailing text after value for '" +
                                key + "'");
  }
  if (suffix.empty()) return x;
  if (suffix == "dB") return db_to_linear(x);
  if (suffix == "dBm") return dbm_to_watts(x);
  throw std::invalid_argument("config: unknown unit suffix '" + suffix +
                              "' for '" + key + "'");
}

}  // namespace

Config parse_config(std::istream& in) {
  Config cfg;
  std::map<std::string, double*> fields{
      {"d_ar", &cfg.params.d_ar},
      {"d_rb", &cfg.params.d_rb},
      {"d_rc", &cfg.params.d_rc},
      {"d_rw", &cfg.params.d_rw},
      {"path_loss_exponent", &cfg.params.path_loss_exponent},
      {"reference_gain", &cfg.params.reference_gain},
      {"p_tmax", &cfg.params.max_transmit_power},
      {"epsilon", &cfg.params.covertness_level},
      {"qos_rate", &cfg.params.qos_rate},
      {"sigma_b2", &cfg.noise.sigma_b2},
      {"sigma_c2", &cfg.noise.sigma_c2},
      {"sigma_w2", &cfg.noise.sigma_w2_nominal},
      {"rho", &cfg.noise.rho},
  };

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                  " is not 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key == "element_count") {
      cfg.params.element_count =
          static_cast<int>(std::lround(parse_value(value, key)));
    } else if (auto it = fields.find(key); it != fields.end()) {
      *it->second = parse_value(value, key);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  cfg.params.validate();
  cfg.noise.validate();
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  return parse_config(in);
}

}  // namespace starcov
