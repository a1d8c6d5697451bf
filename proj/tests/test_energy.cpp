#include "disco/energy.hpp"

#include "doctest.h"

using namespace disco;

namespace {
const SlotTiming kTiming{0.010, 0.001, 0.009};
const ApPowerModel kAp{2.2, 0.278, 0.251};

UeProfile default_ue() { return UeProfile{}; }

CpuModel default_cpu() {
  CpuModel m;
  m.freq_set = default_freq_set();
  return m;
}
}  // namespace

TEST_SUITE("energy") {

TEST_CASE("AP energy, active and sleeping") {
  CHECK(ap_energy(true, 0.1, kAp, kTiming) == doctest::Approx(0.0229).epsilon(1e-12));
  CHECK(ap_energy(false, 0.0, kAp, kTiming) == doctest::Approx(0.004702).epsilon(1e-12));

  // degenerate slot: only the signaling floor remains
  const SlotTiming no_tau{0.001, 0.001, 0.0};
  CHECK(ap_energy(true, 0.0, kAp, no_tau) == doctest::Approx(0.001 * 2.2).epsilon(1e-12));

  CHECK_THROWS_AS(ap_energy(false, 0.1, kAp, kTiming), std::invalid_argument);
}

TEST_CASE("UE energy, active and sleeping") {
  const UeProfile ue = default_ue();
  // consumed transmit power of 1.0 W sits at p_tx = 70 mW on the default curve
  const double p_tx = 0.07;
  CHECK(ue.tx_power_curve(p_tx) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ue_energy(true, p_tx, ue, kTiming) == doctest::Approx(0.018).epsilon(1e-12));
  CHECK(ue_energy(false, 0.0, ue, kTiming) == doctest::Approx(0.004014).epsilon(1e-12));
  CHECK(ue_energy(true, 0.0, ue, kTiming) == doctest::Approx(0.009).epsilon(1e-12));

  CHECK_THROWS_AS(ue_energy(false, 0.05, ue, kTiming), std::invalid_argument);
  CHECK_THROWS_AS(ue_energy(true, 0.2, ue, kTiming), std::invalid_argument);
}

TEST_CASE("ES energy across the frequency set") {
  const CpuModel cpu = default_cpu();
  CHECK(es_energy(4.5e9, cpu, kTiming) == doctest::Approx(1.020125).epsilon(1e-12));
  CHECK(es_energy(0.0, cpu, kTiming) == doctest::Approx(0.11).epsilon(1e-12));

  CpuModel no_dynamic = cpu;
  no_dynamic.kappa = 0.0;
  CHECK(es_energy(4.5e9, no_dynamic, kTiming) == doctest::Approx(0.2).epsilon(1e-12));

  CHECK_THROWS_AS(es_energy(1.23e9, cpu, kTiming), std::invalid_argument);
}

TEST_CASE("weighted energy") {
  const std::array<double, 3> ue_only{1.0, 0.0, 0.0};
  CHECK(weighted_energy(0.018, 0.0229, 1.020125, ue_only).weighted ==
        doctest::Approx(0.018).epsilon(1e-12));

  const std::array<double, 3> holistic{1.0 / 3, 1.0 / 3, 1.0 / 3};
  const auto w = weighted_energy(0.018, 0.0229, 1.020125, holistic);
  CHECK(w.weighted == doctest::Approx(0.353675).epsilon(1e-12));
  CHECK(w.total == doctest::Approx(0.018 + 0.0229 + 1.020125).epsilon(1e-12));

  // convexity fixed point: equal parts stay put
  const std::array<double, 3> a{0.2, 0.5, 0.3};
  CHECK(weighted_energy(0.7, 0.7, 0.7, a).weighted == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("weighted energy is linear and permutation-consistent") {
  const std::array<double, 3> a{0.2, 0.5, 0.3};
  const double base = weighted_energy(1.0, 2.0, 3.0, a).weighted;
  CHECK(weighted_energy(2.0, 2.0, 3.0, a).weighted - base == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(weighted_energy(1.0, 2.0, 4.0, a).weighted - base == doctest::Approx(0.3).epsilon(1e-9));

  // permuting (E, alpha) pairs together leaves the value unchanged
  const std::array<double, 3> ap{0.5, 0.3, 0.2};
  CHECK(weighted_energy(2.0, 3.0, 1.0, ap).weighted == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("sleep never exceeds active at the same dynamic load") {
  const UeProfile ue = default_ue();
  CHECK(ue_energy(false, 0.0, ue, kTiming) <= ue_energy(true, 0.0, ue, kTiming));
  CHECK(ap_energy(false, 0.0, kAp, kTiming) <= ap_energy(true, 0.0, kAp, kTiming));
  const CpuModel cpu = default_cpu();
  CHECK(es_energy(0.0, cpu, kTiming) <= es_energy(cpu.freq_set[1], cpu, kTiming));
  // every energy has the positive signaling floor
  CHECK(ue_energy(false, 0.0, ue, kTiming) > 0.0);
  CHECK(ap_energy(false, 0.0, kAp, kTiming) > 0.0);
  CHECK(es_energy(0.0, cpu, kTiming) > 0.0);
}

}  // TEST_SUITE
