#include "fogcache/topology.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fogcache/errors.hpp"

namespace fogcache {

Topology::Topology(std::vector<std::vector<std::uint8_t>> connectivity,
                   std::vector<Point> positions, double cell_radius)
    : connectivity_(std::move(connectivity)),
      positions_(std::move(positions)),
      cell_radius_(cell_radius) {
  const auto n = connectivity_.size();
  if (n == 0) throw ConfigError("topology: need at least one F-AP");
  if (positions_.size() != n) throw ConfigError("topology: one position per F-AP required");
  if (!(cell_radius_ > 0.0)) throw ConfigError("topology: cell_radius must be > 0");
  neighbors_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (connectivity_[i].size() != n) throw ConfigError("topology: connectivity must be square");
    if (connectivity_[i][i] != 0) throw ConfigError("topology: connectivity diagonal must be 0");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = connectivity_[i][j];
      if (v > 1) throw ConfigError("topology: connectivity entries must be 0 or 1");
      if (v != connectivity_[j][i]) throw ConfigError("topology: connectivity must be symmetric");
      if (v == 1) neighbors_[i].push_back(j);
    }
  }
}

Topology build_topology(const SimConfig& cfg) {
  const auto n = cfg.n_faps;
  if (n == 0) throw ConfigError("n_faps: must be >= 1");

  std::vector<std::vector<std::uint8_t>> y(n, std::vector<std::uint8_t>(n, 0));
  switch (cfg.connectivity.pattern) {
    case ConnectivityPattern::full:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) y[i][j] = i != j;
      break;
    case ConnectivityPattern::ring:
      for (std::size_t i = 0; i < n && n > 1; ++i) {
        const auto next = (i + 1) % n;
        y[i][next] = y[next][i] = 1;
      }
      break;
    case ConnectivityPattern::none:
      break;
    case ConnectivityPattern::explicit_matrix: {
      const auto& m = cfg.connectivity.matrix;
      if (m.size() != n) throw ConfigError("connectivity: matrix must be n_faps x n_faps");
      for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw ConfigError("connectivity: matrix must be n_faps x n_faps");
        for (std::size_t j = 0; j < n; ++j) {
          if (m[i][j] != 0 && m[i][j] != 1) {
            throw ConfigError("connectivity: matrix entries must be 0 or 1");
          }
          y[i][j] = static_cast<std::uint8_t>(m[i][j]);
        }
      }
      break;
    }
  }

  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  const double spacing = 2.0 * cfg.cell_radius;
  std::vector<Point> pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = {spacing * static_cast<double>(i % cols), spacing * static_cast<double>(i / cols)};
  }
  return Topology(std::move(y), std::move(pos), cfg.cell_radius);
}

std::vector<std::size_t> UserLayout::members(std::size_t n) const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < serving.size(); ++u) {
    if (serving[u] == n) out.push_back(u);
  }
  return out;
}

UserLayout place_users(const Topology& topology, std::size_t users_per_fap, Rng& rng) {
  UserLayout layout;
  const auto total = topology.n_faps() * users_per_fap;
  layout.serving.reserve(total);
  layout.positions.reserve(total);
  layout.distances.reserve(total);
  const double radius = topology.cell_radius();
  for (std::size_t n = 0; n < topology.n_faps(); ++n) {
    const Point centre = topology.positions()[n];
    for (std::size_t k = 0; k < users_per_fap; ++k) {
      // 1 - U lies in (0, 1], so the distance is never zero.
      const double r = radius * std::sqrt(1.0 - uniform01(rng));
      const double theta = 2.0 * std::numbers::pi * uniform01(rng);
      layout.serving.push_back(n);
      layout.positions.push_back({centre.x + r * std::cos(theta), centre.y + r * std::sin(theta)});
      layout.distances.push_back(r);
    }
  }
  return layout;
}

}  // namespace fogcache
