#include "netmimo/geometry.hpp"

#include <cmath>
#include <numbers>

namespace netmimo {

double distance_km(const Point& a, const Point& b) {
  return std::hypot(a.x_km - b.x_km, a.y_km - b.y_km);
}

std::vector<Point> hexagonal_layout(int n_bs, double cell_radius_km) {
  // Axial hex coordinates; spacing between adjacent centers is the hexagon
  // width across flats, sqrt(3) * circumradius.
  const double s = std::sqrt(3.0) * cell_radius_km;
  auto to_point = [&](int q, int r) {
    return Point{s * (q + 0.5 * r), s * (std::sqrt(3.0) / 2.0) * r};
  };
  std::vector<Point> out;
  out.reserve(size_t(n_bs));
  out.push_back(to_point(0, 0));
  static const int dirs[6][2] = {{-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1}};
  for (int ring = 1; int(out.size()) < n_bs; ++ring) {
    int q = ring, r = 0;  // start due east, walk the ring counterclockwise
    for (int side = 0; side < 6 && int(out.size()) < n_bs; ++side) {
      for (int step = 0; step < ring && int(out.size()) < n_bs; ++step) {
        out.push_back(to_point(q, r));
        q += dirs[side][0];
        r += dirs[side][1];
      }
    }
  }
  return out;
}

bool point_in_hexagon(const Point& p, const Point& center, double radius_km) {
  double x = std::abs(p.x_km - center.x_km);
  double y = std::abs(p.y_km - center.y_km);
  const double half_height = std::sqrt(3.0) / 2.0 * radius_km;
  return x <= radius_km && y <= half_height && y <= std::sqrt(3.0) * (radius_km - x) + 1e-12;
}

Point uniform_point_in_hexagon(Rng& rng, const Point& center, double radius_km) {
  const double half_height = std::sqrt(3.0) / 2.0 * radius_km;
  while (true) {
    Point p{center.x_km + (2.0 * rng.uniform() - 1.0) * radius_km,
            center.y_km + (2.0 * rng.uniform() - 1.0) * half_height};
    if (point_in_hexagon(p, center, radius_km)) return p;
  }
}

Decibel path_gain_db(double dist_km) {
  if (!(dist_km > 0)) throw DomainError("path_gain_db: distance must be positive");
  return {-130.19 - 37.6 * std::log10(dist_km)};
}

Decibel draw_shadowing(Rng& rng, Decibel sigma_db) {
  if (sigma_db.value < 0) throw DomainError("draw_shadowing: sigma must be >= 0");
  if (sigma_db.value == 0) return {0.0};
  return {sigma_db.value * rng.normal()};
}

GainMap build_gain_map(const Topology& topology, const std::vector<MsState>& mobiles,
                       Decibel sigma_db, Rng& rng, double noise_power_w,
                       const std::optional<std::vector<std::vector<double>>>& override_db) {
  GainMap map;
  map.n_ms = int(mobiles.size());
  map.n_bs = topology.n_bs();
  map.noise_power_w = noise_power_w;
  map.gains.resize(size_t(map.n_ms) * map.n_bs);
  if (override_db) {
    if (int(override_db->size()) != map.n_ms) {
      throw UsageError("gain override: need one row per MS");
    }
    for (int m = 0; m < map.n_ms; ++m) {
      if (int((*override_db)[m].size()) != map.n_bs) {
        throw UsageError("gain override: need one column per BS");
      }
      for (int k = 0; k < map.n_bs; ++k) {
        map.at(m, k) = db_to_linear({(*override_db)[m][k]}).value;
      }
    }
    map.validate();
    return map;
  }
  for (int m = 0; m < map.n_ms; ++m) {
    for (int k = 0; k < map.n_bs; ++k) {
      double d = std::max(distance_km(mobiles[m].position, topology.bs_positions[k]),
                          k_min_bs_ms_distance_km);
      double gain_db = path_gain_db(d).value + draw_shadowing(rng, sigma_db).value;
      map.at(m, k) = db_to_linear({gain_db}).value;
    }
  }
  map.validate();
  return map;
}

ServedRegion served_region(const Topology& topology) {
  Point c{0, 0};
  for (const auto& p : topology.bs_positions) {
    c.x_km += p.x_km;
    c.y_km += p.y_km;
  }
  c.x_km /= topology.n_bs();
  c.y_km /= topology.n_bs();
  double r = 0;
  for (const auto& p : topology.bs_positions) {
    r = std::max(r, distance_km(c, p));
  }
  return {c, r + topology.cell_radius_km};
}

void step_mobility(const Topology& topology, std::vector<MsState>& mobiles, double dt_s, Rng& rng) {
  if (!(dt_s > 0)) throw DomainError("step_mobility: dt must be positive");
  ServedRegion region = served_region(topology);
  for (auto& ms : mobiles) {
    if (ms.speed_kmh <= 0) continue;
    double step_km = ms.speed_kmh * dt_s / 3600.0;
    double heading = 2.0 * std::numbers::pi * rng.uniform();
    Point p{ms.position.x_km + step_km * std::cos(heading),
            ms.position.y_km + step_km * std::sin(heading)};
    // Fold radially across the boundary until the point is back inside.
    while (true) {
      double d = distance_km(p, region.center);
      if (d <= region.radius_km || d == 0) break;
      double scale = (2.0 * region.radius_km - d) / d;
      // A very long step could fold past the far side; clamp to the rim then.
      if (scale < 0) scale = region.radius_km / d;
      p.x_km = region.center.x_km + (p.x_km - region.center.x_km) * scale;
      p.y_km = region.center.y_km + (p.y_km - region.center.y_km) * scale;
    }
    ms.position = p;
  }
}

}  // namespace netmimo
