#include <cmath>

#include "doctest.h"
#include "netmimo/geometry.hpp"
#include "netmimo/rng.hpp"

using namespace netmimo;

TEST_SUITE("geometry") {
  TEST_CASE("hexagonal layout starts at the origin and packs at sqrt(3)R") {
    auto centers = hexagonal_layout(7, 5.0);
    REQUIRE(centers.size() == 7);
    CHECK(centers[0].x_km == 0.0);
    CHECK(centers[0].y_km == 0.0);
    const double pitch = std::sqrt(3.0) * 5.0;
    for (int i = 1; i < 7; ++i) {
      CHECK(distance_km(centers[0], centers[size_t(i)]) == doctest::Approx(pitch).epsilon(1e-12));
    }
    // Determinism and prefix stability: a smaller layout is a prefix.
    auto three = hexagonal_layout(3, 5.0);
    for (int i = 0; i < 3; ++i) {
      CHECK(three[size_t(i)].x_km == centers[size_t(i)].x_km);
      CHECK(three[size_t(i)].y_km == centers[size_t(i)].y_km);
    }
  }

  TEST_CASE("hexagon membership: center in, beyond the vertex out") {
    Point c{2.0, -1.0};
    CHECK(point_in_hexagon(c, c, 5.0));
    CHECK(point_in_hexagon({c.x_km + 4.99, c.y_km}, c, 5.0));
    CHECK(!point_in_hexagon({c.x_km + 5.01, c.y_km}, c, 5.0));
    // Flat-top: along y the boundary sits at the apothem sqrt(3)/2 * R.
    double apothem = std::sqrt(3.0) / 2.0 * 5.0;
    CHECK(point_in_hexagon({c.x_km, c.y_km + apothem - 0.01}, c, 5.0));
    CHECK(!point_in_hexagon({c.x_km, c.y_km + apothem + 0.01}, c, 5.0));
  }

  TEST_CASE("uniform hexagon samples stay inside and center on the cell") {
    Rng rng(3);
    Point c{1.0, 2.0};
    double sx = 0, sy = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      Point p = uniform_point_in_hexagon(rng, c, 5.0);
      REQUIRE(point_in_hexagon(p, c, 5.0));
      sx += p.x_km - c.x_km;
      sy += p.y_km - c.y_km;
    }
    // sd of one coordinate is ~2 km, so the mean of 2e4 samples has se ~0.014.
    CHECK(std::abs(sx / n) < 0.06);
    CHECK(std::abs(sy / n) < 0.06);
  }

  TEST_CASE("path gain matches the quoted decay law") {
    CHECK(path_gain_db(1.0).value == doctest::Approx(-130.19).epsilon(1e-12));
    CHECK(path_gain_db(10.0).value == doctest::Approx(-130.19 - 37.6).epsilon(1e-12));
    CHECK(path_gain_db(0.035).value ==
          doctest::Approx(-130.19 - 37.6 * std::log10(0.035)).epsilon(1e-12));
  }

  TEST_CASE("gain map clamps the range and applies shadowing per link") {
    Topology topo;
    topo.layout = Layout::explicit_positions;
    topo.bs_positions = {{0.0, 0.0}, {10.0, 0.0}};
    std::vector<MsState> mobiles(2);
    mobiles[0].id = 1;
    mobiles[0].position = {0.0, 0.0};  // on top of BS1: clamped to 35 m
    mobiles[1].id = 2;
    mobiles[1].position = {1.0, 0.0};

    Rng rng(1);
    GainMap gm = build_gain_map(topo, mobiles, Decibel{0.0}, rng, 1e-13);
    CHECK(gm.n_ms == 2);
    CHECK(gm.n_bs == 2);
    CHECK(gm.noise_power_w == 1e-13);
    double clamped = std::pow(10.0, path_gain_db(0.035).value / 10.0);
    CHECK(gm.at(0, 0) == doctest::Approx(clamped).epsilon(1e-12));
    double at_9km = std::pow(10.0, path_gain_db(9.0).value / 10.0);
    CHECK(gm.at(1, 1) == doctest::Approx(at_9km).epsilon(1e-12));

    // Nonzero sigma perturbs every link independently but reproducibly.
    Rng rng_a(7), rng_b(7);
    GainMap ga = build_gain_map(topo, mobiles, Decibel{8.0}, rng_a, 1e-13);
    GainMap gb = build_gain_map(topo, mobiles, Decibel{8.0}, rng_b, 1e-13);
    for (int m = 0; m < 2; ++m) {
      for (int k = 0; k < 2; ++k) {
        CHECK(ga.at(m, k) == gb.at(m, k));
        CHECK(ga.at(m, k) != gm.at(m, k));
      }
    }
  }

  TEST_CASE("explicit gain override bypasses the draw entirely") {
    Topology topo;
    topo.layout = Layout::explicit_positions;
    topo.bs_positions = {{0.0, 0.0}};
    std::vector<MsState> mobiles(1);
    mobiles[0].id = 1;
    mobiles[0].position = {3.0, 0.0};

    Rng rng(5);
    uint64_t before = Rng(5).next_u64();
    GainMap gm = build_gain_map(topo, mobiles, Decibel{8.0}, rng, 1e-13,
                                std::vector<std::vector<double>>{{-120.0}});
    CHECK(gm.at(0, 0) == doctest::Approx(1e-12).epsilon(1e-12));
    // No randomness consumed: the stream continues where a fresh one starts.
    CHECK(rng.next_u64() == before);
  }

  TEST_CASE("mobility keeps mobiles inside the served region") {
    Topology topo;
    topo.bs_positions = hexagonal_layout(3, 5.0);
    ServedRegion region = served_region(topo);
    for (const Point& bs : topo.bs_positions) {
      CHECK(distance_km(region.center, bs) <= region.radius_km);
    }

    std::vector<MsState> mobiles(3);
    for (int i = 0; i < 3; ++i) {
      mobiles[size_t(i)].id = i + 1;
      mobiles[size_t(i)].position = topo.bs_positions[size_t(i)];
      mobiles[size_t(i)].speed_kmh = 120.0;
    }
    Rng rng(9);
    Point start = mobiles[0].position;
    for (int step = 0; step < 200; ++step) {
      step_mobility(topo, mobiles, 30.0, rng);
      for (const MsState& ms : mobiles) {
        CHECK(distance_km(ms.position, region.center) <= region.radius_km + 1e-9);
      }
    }
    CHECK(distance_km(start, mobiles[0].position) > 0.0);

    // Zero speed means no motion.
    std::vector<MsState> still(1);
    still[0].id = 1;
    still[0].position = {1.0, 1.0};
    still[0].speed_kmh = 0.0;
    step_mobility(topo, still, 30.0, rng);
    CHECK(still[0].position.x_km == 1.0);
    CHECK(still[0].position.y_km == 1.0);
  }
}
