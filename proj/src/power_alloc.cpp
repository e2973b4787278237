#include "starcov/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "starcov/detection.hpp"

namespace starcov {

void PowerSubproblemInputs::validate() const {
  if (gain_bob < 0 || gain_carol < 0 || covert_exposure < 0) {
    throw std::invalid_argument("gains and exposure must be nonnegative");
  }
  params.validate();
  noise.validate();
}

bool check_sic_feasible(const PowerSubproblemInputs& in) {
  in.validate();
  return in.noise.sigma_c2 * in.gain_bob >= in.noise.sigma_b2 * in.gain_carol;
}

double covert_power_cap(const PowerSubproblemInputs& in) {
  const double exposure =
      in.covert_exposure * path_loss(in.params.d_rw, in.params.path_loss_exponent,
                                     in.params.reference_gain);
  if (exposure == 0.0) return std::numeric_limits<double>::infinity();
  return covert_lambda_bound(in.params.covertness_level, in.noise) / exposure;
}

double qos_power_cap(const PowerSubproblemInputs& in) {
  const double snr_floor = std::pow(2.0, in.params.qos_rate) - 1.0;
  const double needed = snr_floor * in.noise.sigma_c2;
  if (in.gain_carol == 0.0) {
    // With no public-side gain the QoS floor is only reachable when it is
    // vacuous (qos_rate == 0).
    return needed == 0.0 ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  }
  return (in.params.max_transmit_power * in.gain_carol - needed) /
         (std::pow(2.0, in.params.qos_rate) * in.gain_carol);
}

PowerSplit allocate_power(const PowerSubproblemInputs& in) {
  in.validate();
  if (!check_sic_feasible(in)) {
    throw infeasible_error(Infeasibility::sic,
                           "SIC ordering infeasible: sigma_c2*g_b < sigma_b2*g_c");
  }
  const double qos_cap = qos_power_cap(in);
  if (qos_cap < 0) {
    throw infeasible_error(Infeasibility::qos,
                           "QoS floor unreachable within the power budget");
  }
  const double p_b = std::min({in.params.max_transmit_power / 2.0,
                               covert_power_cap(in), qos_cap});
  return {p_b, in.params.max_transmit_power - p_b};
}

}  // namespace starcov
