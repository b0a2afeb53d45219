#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fogcache/config.hpp"
#include "fogcache/rng.hpp"

namespace fogcache {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// F-APs, their positions and the symmetric zero-diagonal connectivity Y.
class Topology {
 public:
  /// Throws ConfigError unless `connectivity` is square, symmetric, 0/1 with a
  /// zero diagonal, and matches `positions`.
  Topology(std::vector<std::vector<std::uint8_t>> connectivity, std::vector<Point> positions,
           double cell_radius);

  std::size_t n_faps() const { return connectivity_.size(); }
  double cell_radius() const { return cell_radius_; }
  bool connected(std::size_t n, std::size_t m) const { return connectivity_[n][m] != 0; }
  const std::vector<std::vector<std::uint8_t>>& connectivity() const { return connectivity_; }
  std::span<const Point> positions() const { return positions_; }

  /// Neighbor set {m : y_nm = 1, m != n}, ascending.
  std::span<const std::size_t> neighbors(std::size_t n) const { return neighbors_[n]; }

 private:
  std::vector<std::vector<std::uint8_t>> connectivity_;
  std::vector<Point> positions_;
  std::vector<std::vector<std::size_t>> neighbors_;
  double cell_radius_;
};

/// F-APs on a square grid with spacing 2 * cell_radius, wired per the
/// configured connectivity pattern. Throws ConfigError for N = 0 or a bad
/// explicit matrix.
Topology build_topology(const SimConfig& cfg);

/// Users partitioned over F-APs: user u is served by `serving[u]`, sits at
/// `positions[u]`, and `distances[u]` is its distance to the serving F-AP.
struct UserLayout {
  std::vector<std::size_t> serving;
  std::vector<Point> positions;
  std::vector<double> distances;

  std::size_t n_users() const { return serving.size(); }
  /// Users of F-AP n, ascending.
  std::vector<std::size_t> members(std::size_t n) const;
};

/// `users_per_fap` users per F-AP, each uniform over its F-AP's disk.
/// Distances lie in (0, cell_radius].
UserLayout place_users(const Topology& topology, std::size_t users_per_fap, Rng& rng);

}  // namespace fogcache
