#include <cmath>

#include "doctest.h"
#include "netmimo/throughput.hpp"
#include "support/naive.hpp"

using namespace netmimo;

namespace {

PowerSplit split(std::vector<double> v) { return PowerSplit{std::move(v)}; }

std::vector<double> random_theta(Rng& rng, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(rng.uniform());
  return t;
}

}  // namespace

TEST_SUITE("throughput") {
  TEST_CASE("snr terms reproduce the pinned values") {
    naive::Built b = naive::pinned_three_cell();
    for (int m = 0; m < 5; ++m) {
      for (int k = 0; k < 3; ++k) {
        CHECK(snr_term(k, m + 1, b.scenario) ==
              doctest::Approx(naive::pinned::s_terms[m][k]).epsilon(1e-11));
      }
    }
  }

  TEST_CASE("stream shares split evenly with the remainder to low ids") {
    naive::Built b = naive::pinned_three_cell();
    auto shares = resolve_stream_shares(b.scenario.rates, b.sets);
    CHECK(shares == std::map<int, int>{{4, 1}, {5, 1}});
    b.scenario.rates.d_total = 3;
    shares = resolve_stream_shares(b.scenario.rates, b.sets);
    CHECK(shares == std::map<int, int>{{4, 2}, {5, 1}});
    // Fewer streams than shared MSs cannot be split.
    b.scenario.rates.d_total = 1;
    CHECK_THROWS_AS(resolve_stream_shares(b.scenario.rates, b.sets), DomainError);
  }

  TEST_CASE("explicit stream assignments must cover the set and sum up") {
    naive::Built b = naive::pinned_three_cell();
    b.scenario.rates.d_m = {{4, 1}, {5, 1}};
    auto shares = resolve_stream_shares(b.scenario.rates, b.sets);
    CHECK(shares.at(4) == 1);
    b.scenario.rates.d_m = {{4, 2}};  // MS5 missing
    CHECK_THROWS_AS(resolve_stream_shares(b.scenario.rates, b.sets), DomainError);
    b.scenario.rates.d_m = {{4, 2}, {5, 2}};  // sums past d_total
    CHECK_THROWS_AS(resolve_stream_shares(b.scenario.rates, b.sets), DomainError);
  }

  TEST_CASE("the common weight share takes the worst weighted allocation") {
    naive::Built b = naive::pinned_three_cell();
    // MS4 has weight 1 and half the streams: share 0.5 beats MS5's 1.0.
    CHECK(common_min_weight_share(b.scenario, b.sets) == doctest::Approx(0.5).epsilon(1e-15));
  }

  TEST_CASE("rates match an independent transliteration on random cases") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      int n_bs = 1 + rng.uniform_int(4);
      int n_common = 1 + rng.uniform_int(3);
      naive::Built b = naive::random_structured(rng, n_bs, n_common);
      naive::Model ref = naive::from_scenario(b.scenario, b.sets);
      PowerSplit theta = split(random_theta(rng, n_bs));

      for (int j : b.sets.common) {
        double lib = common_rate_at_common_ms(j, theta, b.scenario, b.sets);
        CHECK(lib == doctest::Approx(double(ref.common_rate(j, theta.theta_c))).epsilon(1e-12));
      }
      for (int k = 0; k < n_bs; ++k) {
        int ms = *b.sets.private_ms[size_t(k)];
        double tk = theta.theta_c[size_t(k)];
        CHECK(common_rate_at_private_ms(ms, k, tk, b.scenario) ==
              doctest::Approx(double(ref.sic_rate(k, tk))).epsilon(1e-12));
        CHECK(private_throughput(ms, k, tk, b.scenario) ==
              doctest::Approx(double(ref.private_rate(k, tk))).epsilon(1e-12));
      }
      ThroughputReport rep = min_weighted_throughput(theta, b.scenario, b.sets);
      CHECK(rep.min_weighted ==
            doctest::Approx(double(ref.objective(theta.theta_c))).epsilon(1e-12));
    }
  }

  TEST_CASE("a cell with no private MS radiates no interference") {
    // BS2's private slot is empty, so only BS1 appears in the denominator.
    naive::Built b = naive::inactive_bs_case();
    double s1 = 0.3, s2 = 0.8;
    b.scenario.gain_map.at(1, 0) = s1;
    b.scenario.gain_map.at(1, 1) = s2;
    PowerSplit theta = split({0.4, 0.7});
    double expected =
        std::log2(1 + (s1 * 0.4 + s2 * 0.7) / (1 + s1 * (1 - 0.4) * 1.0));
    CHECK(common_rate_at_common_ms(2, theta, b.scenario, b.sets) ==
          doctest::Approx(expected).epsilon(1e-14));
  }

  TEST_CASE("payoff components decompose as documented") {
    Rng rng(47);
    for (int trial = 0; trial < 50; ++trial) {
      naive::Built b = naive::random_structured(rng, 3, 2);
      naive::Model ref = naive::from_scenario(b.scenario, b.sets);
      PowerSplit theta = split(random_theta(rng, 3));
      for (int k = 0; k < 3; ++k) {
        PayoffParts parts = payoff_components(k, theta, b.scenario, b.sets);
        REQUIRE(parts.g1.has_value());
        REQUIRE(parts.g2.has_value());
        REQUIRE(parts.f1.has_value());
        REQUIRE(parts.f2.has_value());
        long double g1 = 0;
        bool first = true;
        for (int j : b.sets.common) {
          long double v = ref.weight.at(j) * ref.share.at(j) * ref.common_rate(j, theta.theta_c);
          if (first || v < g1) g1 = v;
          first = false;
        }
        double tk = theta.theta_c[size_t(k)];
        long double g2 = ref.cmw() * ref.sic_rate(k, tk);
        long double f2 =
            ref.weight.at(*b.sets.private_ms[size_t(k)]) * ref.private_rate(k, tk);
        CHECK(*parts.g1 == doctest::Approx(double(g1)).epsilon(1e-12));
        CHECK(*parts.g2 == doctest::Approx(double(g2)).epsilon(1e-12));
        CHECK(*parts.f1 == doctest::Approx(double(std::min(g1, g2))).epsilon(1e-12));
        CHECK(*parts.f2 == doctest::Approx(double(f2)).epsilon(1e-12));
        CHECK(parts.payoff() == doctest::Approx(double(std::min(std::min(g1, g2), f2))).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("payoff components degrade with the user sets") {
    naive::Built b = naive::symmetric_pair();
    PowerSplit theta = split({0.5, 0.5});

    UserSets no_common = b.sets;
    no_common.unassigned = no_common.common;
    no_common.common.clear();
    PayoffParts only_private = payoff_components(0, theta, b.scenario, no_common);
    CHECK(!only_private.g1.has_value());
    CHECK(!only_private.g2.has_value());
    CHECK(!only_private.f1.has_value());
    REQUIRE(only_private.f2.has_value());
    CHECK(only_private.payoff() == *only_private.f2);

    UserSets no_private = b.sets;
    no_private.unassigned.push_back(*no_private.private_ms[0]);
    no_private.private_ms[0].reset();
    PayoffParts only_common = payoff_components(0, theta, b.scenario, no_private);
    REQUIRE(only_common.g1.has_value());
    CHECK(!only_common.f2.has_value());
    CHECK(only_common.payoff() == *only_common.g1);

    UserSets nothing = no_private;
    nothing.unassigned.insert(nothing.unassigned.end(), nothing.common.begin(),
                              nothing.common.end());
    nothing.common.clear();
    CHECK_THROWS_AS(payoff_components(0, theta, b.scenario, nothing), DomainError);
  }

  TEST_CASE("the binding MS is the lowest id on exact ties") {
    // Two shared MSs with identical gains, weights and shares tie exactly.
    naive::Built b = naive::tied_common_pair();
    ThroughputReport rep = min_weighted_throughput(split({0.5, 0.5}), b.scenario, b.sets);
    REQUIRE(rep.per_ms.size() == 3);
    CHECK(rep.per_ms.at(2) == rep.per_ms.at(3));
    CHECK(rep.binding_ms == 2);
  }

  TEST_CASE("min_weighted_throughput rejects a scenario serving nobody") {
    naive::Built b = naive::symmetric_pair();
    UserSets empty;
    empty.private_ms = {std::nullopt, std::nullopt};
    empty.unassigned = {1, 2, 3};
    CHECK_THROWS_AS(min_weighted_throughput(split({0.5, 0.5}), b.scenario, empty), DomainError);
  }
}
