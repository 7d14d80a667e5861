#pragma once
// Cell layout, the distance-based propagation model, shadowing draws, and
// mobile motion. Everything needed to turn geometry plus randomness into the
// long-term gain map the rest of the pipeline consumes.

#include <optional>
#include <vector>

#include "netmimo/model.hpp"
#include "netmimo/rng.hpp"
#include "netmimo/units.hpp"

namespace netmimo {

// Distances below this are clamped before the path-gain formula to avoid its
// singularity at zero range.
inline constexpr double k_min_bs_ms_distance_km = 0.035;

double distance_km(const Point& a, const Point& b);

// Deterministic hexagonal cell centers: origin first, then rings walked
// counterclockwise starting east. Adjacent centers sit sqrt(3) * radius apart.
std::vector<Point> hexagonal_layout(int n_bs, double cell_radius_km);

// Flat-top hexagon (vertex due east of the center) with the given circumradius.
bool point_in_hexagon(const Point& p, const Point& center, double radius_km);
Point uniform_point_in_hexagon(Rng& rng, const Point& center, double radius_km);

// Distance-decay propagation gain in dB; valid for any positive distance.
Decibel path_gain_db(double dist_km);

// One zero-mean Gaussian shadowing sample with the given standard deviation.
Decibel draw_shadowing(Rng& rng, Decibel sigma_db);

// Long-term linear gains for every (MS, BS) pair: path gain at the clamped
// distance plus an independent shadowing draw per pair. When override_db is
// given it supplies the full matrix directly and no randomness is consumed.
GainMap build_gain_map(const Topology& topology, const std::vector<MsState>& mobiles,
                       Decibel sigma_db, Rng& rng, double noise_power_w,
                       const std::optional<std::vector<std::vector<double>>>& override_db = std::nullopt);

// The region mobiles are confined to: the bounding disc of all cells.
struct ServedRegion {
  Point center;
  double radius_km = 0.0;
};
ServedRegion served_region(const Topology& topology);

// Each MS moves speed * dt in a uniformly random direction; positions leaving
// the served region are folded back across its boundary.
void step_mobility(const Topology& topology, std::vector<MsState>& mobiles, double dt_s, Rng& rng);

}  // namespace netmimo
