#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "starcov/detection.hpp"
#include "starcov/power_alloc.hpp"
#include "starcov/system_model.hpp"

using namespace starcov;

namespace {

PowerSubproblemInputs base_inputs() {
  PowerSubproblemInputs in;
  in.params = SystemParams{};
  in.noise = NoiseModel{};
  in.gain_bob = 2e-9;
  in.gain_carol = 2e-9;
  in.covert_exposure = 1e-6;
  return in;
}

double l_rw_of(const SystemParams& p) {
  return path_loss(p.d_rw, p.path_loss_exponent, p.reference_gain);
}

// Exhaustive 2-D grid oracle over (p_b, p_c): maximize p_b among feasible
// grid points of the power subproblem.
double grid_lp_oracle(const PowerSubproblemInputs& in, int grid) {
  const double pt = in.params.max_transmit_power;
  const double lambda_cap =
      covert_lambda_bound(in.params.covertness_level, in.noise);
  const double snr_floor = std::pow(2.0, in.params.qos_rate) - 1.0;
  const double lrw = l_rw_of(in.params);
  double best = -1;
  for (int i = 0; i <= grid; ++i) {
    const double pb = pt * i / grid;
    if (pb * lrw * in.covert_exposure > lambda_cap) break;  // increasing in pb
    // Largest budget-feasible public power for this grid row; both the QoS
    // and the ordering constraints only relax as pc grows.
    const int j = grid - i;
    const double pc = pt * j / grid;
    if (pc < pb) break;
    if (pc * in.gain_carol >=
        snr_floor * (pb * in.gain_carol + in.noise.sigma_c2)) {
      best = std::max(best, pb);
    }
  }
  return best;
}

void audit_split(const PowerSubproblemInputs& in, const PowerSplit& s) {
  const double pt = in.params.max_transmit_power;
  CHECK(s.p_b >= 0.0);
  CHECK(s.p_c >= s.p_b * (1 - 1e-12));
  CHECK(s.p_b + s.p_c == doctest::Approx(pt).epsilon(1e-12));
  const double snr_floor = std::pow(2.0, in.params.qos_rate) - 1.0;
  CHECK(s.p_c * in.gain_carol >=
        snr_floor * (s.p_b * in.gain_carol + in.noise.sigma_c2) *
            (1 - 1e-12));
  const double lambda = s.p_b * l_rw_of(in.params) * in.covert_exposure;
  CHECK(lambda <= covert_lambda_bound(in.params.covertness_level, in.noise) *
                      (1 + 1e-12));
}

PowerSubproblemInputs random_feasible(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PowerSubproblemInputs in = base_inputs();
  in.params.max_transmit_power = 0.01 + 0.2 * u(rng);
  in.params.covertness_level = 0.05 + 0.9 * u(rng);
  in.params.qos_rate = 0.2 + 3.0 * u(rng);
  in.gain_carol = std::pow(10.0, -10 + 2.5 * u(rng));
  // Keep the SIC ordering feasible.
  in.gain_bob = in.gain_carol * (in.noise.sigma_b2 / in.noise.sigma_c2) *
                (1.0 + 2.0 * u(rng));
  in.covert_exposure = std::pow(10.0, -7 + 2.5 * u(rng));
  const double qos = qos_power_cap(in);
  if (qos < 0) return random_feasible(rng);
  return in;
}

}  // namespace

TEST_CASE("SIC feasibility boundary cases") {
  PowerSubproblemInputs in = base_inputs();
  in.noise.sigma_b2 = in.noise.sigma_c2 = 1e-11;
  in.gain_bob = in.gain_carol = 3e-9;
  CHECK(check_sic_feasible(in));  // equality counts as feasible
  in.gain_bob = 0.0;
  in.gain_carol = 1e-9;
  CHECK(!check_sic_feasible(in));
}

TEST_CASE("SIC condition is power independent (rates-module oracle)") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    PowerSubproblemInputs in = base_inputs();
    in.gain_bob = std::pow(10.0, -10 + 2 * u(rng));
    in.gain_carol = std::pow(10.0, -10 + 2 * u(rng));
    const bool sic = check_sic_feasible(in);
    for (int k = 0; k < 100; ++k) {
      const double pb = 0.05 * u(rng);
      const double pc = pb + 0.05 * u(rng);
      // R_bc >= R_cc iff sigma_c2 gb (pb gc + s_c) >= ... reduces to the
      // power-free inequality; evaluate the rates directly.
      const double rbc =
          std::log2(1 + pc * in.gain_bob / (pb * in.gain_bob + in.noise.sigma_b2));
      const double rcc = std::log2(
          1 + pc * in.gain_carol / (pb * in.gain_carol + in.noise.sigma_c2));
      CHECK((rbc >= rcc - 1e-15) == sic);
    }
  }
}

TEST_CASE("slack caps give the power-symmetric optimum") {
  PowerSubproblemInputs in = base_inputs();
  in.params.covertness_level = 0.9;
  in.covert_exposure = 1e-9;  // covert cap huge
  in.params.qos_rate = 0.1;   // QoS cap close to P_tmax
  const PowerSplit s = allocate_power(in);
  CHECK(s.p_b == doctest::Approx(in.params.max_transmit_power / 2).epsilon(1e-12));
  CHECK(s.p_c == doctest::Approx(in.params.max_transmit_power / 2).epsilon(1e-12));
  audit_split(in, s);
}

TEST_CASE("worked instance: covert cap binds") {
  PowerSubproblemInputs in = base_inputs();
  in.params.max_transmit_power = 0.1;
  in.params.qos_rate = 1.0;
  in.params.covertness_level = 0.2;
  in.gain_bob = 1e-9;
  in.gain_carol = 1e-9;
  in.noise.sigma_c2 = 1e-11;
  // Choose the exposure so the covert cap is exactly 0.02 W.
  const double lambda_cap = covert_lambda_bound(0.2, in.noise);
  in.covert_exposure = lambda_cap / (l_rw_of(in.params) * 0.02);

  CHECK(qos_power_cap(in) == doctest::Approx(0.045).epsilon(1e-12));
  CHECK(covert_power_cap(in) == doctest::Approx(0.02).epsilon(1e-12));
  const PowerSplit s = allocate_power(in);
  CHECK(s.p_b == doctest::Approx(0.02).epsilon(1e-12));
  CHECK(s.p_c == doctest::Approx(0.08).epsilon(1e-12));
  audit_split(in, s);
  // Grid oracle confirms optimality at its resolution.
  CHECK(s.p_b == doctest::Approx(grid_lp_oracle(in, 1000)).epsilon(1e-3));
}

TEST_CASE("QoS consuming the whole budget forces p_b to zero") {
  PowerSubproblemInputs in = base_inputs();
  const double snr_floor = std::pow(2.0, in.params.qos_rate) - 1.0;
  in.gain_carol = snr_floor * in.noise.sigma_c2 / in.params.max_transmit_power;
  in.gain_bob = in.gain_carol;  // SIC equality holds with equal noises
  const PowerSplit s = allocate_power(in);
  CHECK(s.p_b == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.p_c == doctest::Approx(in.params.max_transmit_power));
}

TEST_CASE("typed infeasibility errors") {
  SUBCASE("qos") {
    PowerSubproblemInputs in = base_inputs();
    in.gain_carol = 1e-12;  // way below the floor
    in.gain_bob = 1e-9;
    try {
      allocate_power(in);
      FAIL("expected infeasible_error");
    } catch (const infeasible_error& e) {
      CHECK(e.constraint == Infeasibility::qos);
    }
  }
  SUBCASE("sic") {
    PowerSubproblemInputs in = base_inputs();
    in.gain_bob = 1e-12;
    in.gain_carol = 1e-9;
    try {
      allocate_power(in);
      FAIL("expected infeasible_error");
    } catch (const infeasible_error& e) {
      CHECK(e.constraint == Infeasibility::sic);
    }
  }
}

TEST_CASE("zero reflected exposure maps the covert cap to infinity") {
  PowerSubproblemInputs in = base_inputs();
  in.covert_exposure = 0.0;
  CHECK(std::isinf(covert_power_cap(in)));
  const PowerSplit s = allocate_power(in);
  audit_split(in, s);
}

TEST_CASE("closed form matches the grid LP oracle on random instances") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 60; ++trial) {
    const PowerSubproblemInputs in = random_feasible(rng);
    const PowerSplit s = allocate_power(in);
    audit_split(in, s);
    const double oracle = grid_lp_oracle(in, 400);
    CHECK(s.p_b >= oracle - 1e-12);  // oracle only visits grid points
    CHECK(s.p_b <= oracle + in.params.max_transmit_power / 400 + 1e-12);
  }
}

TEST_CASE("no feasible grid point improves on the closed form") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const PowerSubproblemInputs in = random_feasible(rng);
    const PowerSplit s = allocate_power(in);
    const double pt = in.params.max_transmit_power;
    const double lrw = l_rw_of(in.params);
    const double cap = covert_lambda_bound(in.params.covertness_level, in.noise);
    const double snr_floor = std::pow(2.0, in.params.qos_rate) - 1.0;
    for (int k = 1; k <= 1000; ++k) {
      const double pb = s.p_b + pt * 1e-4 * k;
      const double pc = pt - pb;
      if (pc < pb) break;
      const bool qos_ok = pc * in.gain_carol >=
                          snr_floor * (pb * in.gain_carol + in.noise.sigma_c2);
      const bool covert_ok = pb * lrw * in.covert_exposure <= cap;
      CHECK(!(qos_ok && covert_ok));
      if (!(qos_ok && covert_ok)) break;
    }
  }
}

TEST_CASE("cap monotonicity in epsilon, budget and QoS floor") {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    PowerSubproblemInputs in = random_feasible(rng);
    const double base = allocate_power(in).p_b;

    PowerSubproblemInputs eps_up = in;
    eps_up.params.covertness_level =
        std::min(0.99, in.params.covertness_level + 0.1);
    CHECK(allocate_power(eps_up).p_b >= base - 1e-15);

    PowerSubproblemInputs pt_up = in;
    pt_up.params.max_transmit_power *= 1.3;
    CHECK(allocate_power(pt_up).p_b >= base - 1e-15);

    PowerSubproblemInputs r_up = in;
    r_up.params.qos_rate += 0.5;
    if (qos_power_cap(r_up) >= 0) {
      CHECK(allocate_power(r_up).p_b <= base + 1e-15);
    }
  }
}
