#include "disco/phy.hpp"

#include <cmath>

#include "doctest.h"

using namespace disco;

namespace {
PhyConfig default_phy() { return PhyConfig{}; }
}

TEST_SUITE("phy") {

TEST_CASE("path loss at the reference distance") {
  const PhyConfig phy = default_phy();
  // 61.34 dB at 1 m with the fading factor pinned to 1
  CHECK(mean_channel_gain(phy, 1.0) == doctest::Approx(std::pow(10.0, -6.134)).epsilon(1e-12));
  CHECK(path_loss_db(phy, 10.0) == doctest::Approx(61.34 + 20.0).epsilon(1e-12));
}

TEST_CASE("channel sampling: determinism and unit-mean fading") {
  const PhyConfig phy = default_phy();
  const Vec2 ue{30.0, 40.0}, ap{0.0, 0.0};
  {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i)
      CHECK(sample_channel_gain(ue, ap, phy, a) == sample_channel_gain(ue, ap, phy, b));
  }
  {
    Rng rng(7);
    const double mean = mean_channel_gain(phy, 50.0);
    double acc = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) acc += sample_channel_gain({50.0, 0.0}, ap, phy, rng);
    CHECK(acc / n / mean == doctest::Approx(1.0).epsilon(0.01));
  }
  Rng zero_rng(1);
  CHECK_THROWS_AS(sample_channel_gain(ap, ap, phy, zero_rng), std::invalid_argument);

  PhyConfig no_fading = phy;
  no_fading.fading = false;
  Rng rng(3);
  CHECK(sample_channel_gain(ue, ap, no_fading, rng) ==
        doctest::Approx(mean_channel_gain(phy, 50.0)).epsilon(1e-12));
}

TEST_CASE("required SNR against the PER model") {
  const QamPerModel model(1.5);
  const double nb = 12000.0;

  // bisection endpoint is feasible, one percent below is not
  const McsScheme mcs{16, 0.5};
  const double gamma = required_snr(model, mcs, 1e-4, nb);
  CHECK(model.per(mcs, gamma, nb) <= 1e-4);
  CHECK(model.per(mcs, 0.99 * gamma, nb) > 1e-4);

  // monotone in constellation size, code rate, and target
  CHECK(required_snr(model, {4, 0.5}, 0.5, nb) < required_snr(model, {256, 0.5}, 0.5, nb));
  CHECK(required_snr(model, {16, 0.3}, 1e-4, nb) <= required_snr(model, {16, 0.9}, 1e-4, nb));
  CHECK(required_snr(model, {16, 0.5}, 1e-2, nb) <= required_snr(model, {16, 0.5}, 1e-6, nb));

  // vacuous target needs almost nothing
  const double vac = required_snr(model, {4, 0.3}, 1.0 - 1e-9, nb);
  CHECK(vac < required_snr(model, {4, 0.3}, 0.5, nb));
  CHECK(vac < 10.0);
}

TEST_CASE("minimum transmit power") {
  const LinkBudget link{1e-10, 1e6, 1.259e-14};
  CHECK(min_tx_power(10.0, link) == doctest::Approx(1.259e-3).epsilon(1e-12));
  CHECK(min_tx_power(0.0, link) == 0.0);

  LinkBudget doubled = link;
  doubled.gain = 2e-10;
  CHECK(min_tx_power(10.0, doubled) == doctest::Approx(0.5 * 1.259e-3).epsilon(1e-12));

  // default noise floor over 1 MHz with the 5 dB noise figure
  CHECK(noise_power(default_phy(), 1e6) == doctest::Approx(1.2589e-14).epsilon(1e-4));

  CHECK_THROWS_AS(min_tx_power(1.0, LinkBudget{0.0, 1e6, 1e-14}), std::invalid_argument);
}

TEST_CASE("transmittable data units") {
  const double nb = 12000.0;
  CHECK(uplink_units({16, 0.5}, 1e6, 0.009, 1000.0, nb) == 12);
  CHECK(uplink_units({4, 0.3}, 1e6, 0.009, 1000.0, nb) == 0);
  CHECK(uplink_units({16, 0.5}, 0.0, 0.009, 1000.0, nb) == 0);
  // floor degenerate: unit of one bit carries the whole payload
  CHECK(downlink_units({16, 0.5}, 1e6, 0.009, 1.0, nb) == 12000);
  // unit larger than the payload
  CHECK(downlink_units({16, 0.5}, 1e6, 0.009, 13000.0, nb) == 0);
}

TEST_CASE("unit counts: monotonicity and the double-floor bound") {
  Rng rng(11);
  const int mods[4] = {4, 16, 64, 256};
  for (int i = 0; i < 2000; ++i) {
    const McsScheme mcs{mods[rng.next() % 4], rng.uniform(0.25, 1.0)};
    const double bw = rng.uniform(1e4, 5e6);
    const double tau = rng.uniform(1e-3, 2e-2);
    const double s = rng.uniform(8.0, 5000.0);
    const double nb = rng.uniform(100.0, 20000.0);
    const Count n = uplink_units(mcs, bw, tau, s, nb);

    // nondecreasing in bandwidth and spectral efficiency, nonincreasing in S
    CHECK(uplink_units(mcs, bw * 1.5, tau, s, nb) >= n);
    CHECK(uplink_units({mcs.modulation_order, std::min(1.0, mcs.code_rate * 1.2)}, bw, tau, s, nb) >= n);
    CHECK(uplink_units({256, mcs.code_rate}, bw, tau, s, nb) >= n);
    CHECK(uplink_units(mcs, bw, tau, s * 2.0, nb) <= n);

    // double-floor sandwich (valid whenever a unit spans at least one symbol)
    const double ideal = tau * bw * std::log2(mcs.modulation_order) * mcs.code_rate / s;
    CHECK(static_cast<double>(n) <= ideal + 1e-9);
    CHECK(static_cast<double>(n) >= ideal - (nb / s + 2.0) - 1e-9);
  }
}

TEST_CASE("SNR table override parsing") {
  const auto table = SnrTable::from_string("modulation,code_rate,gamma\n16,0.5,123.0\n4,0.3,7.5\n");
  CHECK(table.size() == 2);
  CHECK(table.lookup({16, 0.5}).value() == doctest::Approx(123.0));
  CHECK(table.lookup({4, 0.3}).value() == doctest::Approx(7.5));
  CHECK(!table.lookup({64, 0.5}).has_value());
}

}  // TEST_SUITE
