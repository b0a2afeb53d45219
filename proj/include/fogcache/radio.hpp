#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fogcache/config.hpp"
#include "fogcache/popularity.hpp"
#include "fogcache/topology.hpp"

namespace fogcache {

struct RadioParams {
  double bandwidth = 100e6;          // B, Hz
  double tx_power = 1.0;             // P, W
  double noise_psd = 3.98e-21;       // N0, W/Hz
  double interference_power = 1e-12; // P_I, W
  double pathloss_exponent = 3.0;    // eta
  double file_size = 1e6;            // Q, bits
  double backhaul_rate = 100e6;      // R_{n,0,f}, bit/s
  double inter_fap_rate = 1e9;       // R_{n,m,f}, bit/s
  double rate_floor = 1e3;           // deep-fade clamp, bit/s
  bool literal_distance = false;     // multiply SNR by raw distance instead of d^-eta
  CoopDelayMode coop_delay_mode = CoopDelayMode::literal;
};

RadioParams radio_params(const SimConfig& cfg);

/// Dense row-major rows x cols table of doubles.
struct Grid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Grid() = default;
  Grid(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), values(r * c, fill) {}
  double& operator()(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

/// B log2(1 + gain * g(d) * P / (N0 B + P_I)) with g(d) = d^-eta, or g(d) = d
/// when `literal_distance` is set. Gain 0 gives rate 0.
double wireless_rate(const RadioParams& params, double gain, double distance);

/// Z1 = Q / rate. Throws DomainError for rate <= 0.
double delay_fap_to_user(const RadioParams& params, double rate);

/// Z2 = Q * sum_m x_m / R (literal) or Q / sum_m x_m R (harmonic). Zero when
/// no helper holds the file.
double delay_fap_to_fap(const RadioParams& params, std::span<const std::uint8_t> neighbor_flags);

/// Z3 = Q / R_backhaul.
double delay_cloud_to_fap(const RadioParams& params);

/// Per-F-AP ordered slot lists q_n together with the binary matrix x_{n,f}.
/// Both views are kept in agreement; no row exceeds S files and no file
/// appears twice in one row.
class CacheMatrix {
 public:
  CacheMatrix(std::size_t n_faps, std::size_t library_size, std::size_t capacity);

  std::size_t n_faps() const { return n_faps_; }
  std::size_t library_size() const { return library_size_; }
  std::size_t capacity() const { return capacity_; }

  bool cached(std::size_t fap, FileId file) const {
    return x_[fap * library_size_ + (file - 1)] != 0;
  }
  /// Slot list of length S, 0 for empty slots.
  std::span<const FileId> slots(std::size_t fap) const {
    return {q_.data() + fap * capacity_, capacity_};
  }
  std::size_t occupancy(std::size_t fap) const;

  /// Puts `file` into 0-based `slot` of `fap` and returns the evicted id (0 if
  /// the slot was empty). Throws DuplicateCacheError if `file` already sits in
  /// another slot of the same F-AP.
  FileId replace(std::size_t fap, std::size_t slot, FileId file);

  /// Overwrites a whole row; `slots` may be shorter than S (rest empty).
  void assign(std::size_t fap, std::span<const FileId> slots);

  /// Checks the x/q agreement, capacity and duplicate invariants.
  bool consistent() const;

 private:
  std::size_t n_faps_;
  std::size_t library_size_;
  std::size_t capacity_;
  std::vector<FileId> q_;
  std::vector<std::uint8_t> x_;
};

enum class Tier : std::uint8_t { local = 0, neighbor = 1, cloud = 2 };

/// Delivery tier of `file` requested at `fap` under the current caches.
Tier delivery_tier(const CacheMatrix& cache, const Topology& topology, std::size_t fap,
                   FileId file);

/// Composite delay: Z1 on a local hit, Z1 + Z2 on a neighbor hit, Z1 + Z3 otherwise.
double file_delay(const CacheMatrix& cache, const Topology& topology, std::size_t fap,
                  FileId file, double z1, double z2, double z3);

/// Z2 for (fap, file) from the neighbors' current caches.
double neighbor_delay(const CacheMatrix& cache, const Topology& topology,
                      const RadioParams& params, std::size_t fap, FileId file);

/// sum_f sum_n P_{n,f} d_{n,f}(X) for one slot; `z1` is N x F.
double average_delay(const CacheMatrix& cache, const Topology& topology,
                     std::span<const PopularityVector> popularity, const Grid& z1,
                     const RadioParams& params);

struct OrderingCheck {
  bool ok = true;
  std::string message;
};

/// "Much less than" means at least this factor apart.
inline constexpr double kMuchLessRatio = 10.0;

/// Flags configurations violating Z1 < Z2 << Z3.
OrderingCheck validate_delay_ordering(double z1, double z2, double z3);

}  // namespace fogcache
