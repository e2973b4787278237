#pragma once

#include <stdexcept>
#include <string>

#include "starcov/noma_rates.hpp"
#include "starcov/system_model.hpp"

namespace starcov {

/// Coefficients of the power subproblem for a fixed surface state.
struct PowerSubproblemInputs {
  double gain_bob = 0.0;         // |h_rb^H Theta_r h_ar|^2
  double gain_carol = 0.0;       // |h_rc^H Theta_t h_ar|^2
  double covert_exposure = 0.0;  // sum_m beta_r[m] |h_ar[m]|^2
  SystemParams params;
  NoiseModel noise;

  void validate() const;
};

enum class Infeasibility { sic, qos };

class infeasible_error : public std::runtime_error {
 public:
  infeasible_error(Infeasibility which, const std::string& what)
      : std::runtime_error(what), constraint(which) {}
  Infeasibility constraint;
};

/// SIC ordering feasibility: sigma_c2 * g_b >= sigma_b2 * g_c. The condition
/// does not depend on the power split.
bool check_sic_feasible(const PowerSubproblemInputs& in);

/// Covert-exposure cap on the covert power. Zero reflected exposure means
/// the covertness constraint cannot bind, so the cap is +infinity.
double covert_power_cap(const PowerSubproblemInputs& in);

/// QoS cap on the covert power assuming the full budget is spent.
/// Negative means the QoS floor is unreachable even with p_b = 0.
double qos_power_cap(const PowerSubproblemInputs& in);

/// Closed-form maximizer of the covert power under the budget, ordering,
/// QoS and covertness constraints; the public power takes the remaining
/// budget. Throws infeasible_error when no feasible split exists.
PowerSplit allocate_power(const PowerSubproblemInputs& in);

}  // namespace starcov
