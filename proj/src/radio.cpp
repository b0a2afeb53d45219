#include "fogcache/radio.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fogcache/errors.hpp"

namespace fogcache {

RadioParams radio_params(const SimConfig& cfg) {
  RadioParams p;
  p.bandwidth = cfg.bandwidth;
  p.tx_power = cfg.tx_power;
  p.noise_psd = cfg.noise_psd;
  p.interference_power = cfg.interference_power;
  p.pathloss_exponent = cfg.pathloss_exponent;
  p.file_size = cfg.file_size;
  p.backhaul_rate = cfg.backhaul_rate;
  p.inter_fap_rate = cfg.inter_fap_rate;
  p.rate_floor = cfg.rate_floor;
  p.literal_distance = cfg.literal_distance;
  p.coop_delay_mode = cfg.coop_delay_mode;
  return p;
}

double wireless_rate(const RadioParams& params, double gain, double distance) {
  const double path = params.literal_distance ? distance
                                              : std::pow(distance, -params.pathloss_exponent);
  const double snr = gain * path * params.tx_power /
                     (params.noise_psd * params.bandwidth + params.interference_power);
  return params.bandwidth * std::log2(1.0 + snr);
}

double delay_fap_to_user(const RadioParams& params, double rate) {
  if (!(rate > 0.0)) throw DomainError("delay_fap_to_user: rate must be > 0");
  return params.file_size / rate;
}

double delay_fap_to_fap(const RadioParams& params, std::span<const std::uint8_t> neighbor_flags) {
  double helpers = 0.0;
  for (auto x : neighbor_flags) helpers += x;
  if (helpers == 0.0) return 0.0;
  if (params.coop_delay_mode == CoopDelayMode::harmonic) {
    return params.file_size / (helpers * params.inter_fap_rate);
  }
  return params.file_size * helpers / params.inter_fap_rate;
}

double delay_cloud_to_fap(const RadioParams& params) {
  return params.file_size / params.backhaul_rate;
}

CacheMatrix::CacheMatrix(std::size_t n_faps, std::size_t library_size, std::size_t capacity)
    : n_faps_(n_faps),
      library_size_(library_size),
      capacity_(capacity),
      q_(n_faps * capacity, 0),
      x_(n_faps * library_size, 0) {}

std::size_t CacheMatrix::occupancy(std::size_t fap) const {
  const auto s = slots(fap);
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](FileId f) { return f; }));
}

FileId CacheMatrix::replace(std::size_t fap, std::size_t slot, FileId file) {
  if (slot >= capacity_) throw DomainError("CacheMatrix::replace: slot out of range");
  if (file < 1 || file > library_size_) throw DomainError("CacheMatrix::replace: bad file id");
  FileId& cell = q_[fap * capacity_ + slot];
  if (cell == file) return 0;
  if (cached(fap, file)) {
    throw DuplicateCacheError("file " + std::to_string(file) + " already cached at F-AP " +
                              std::to_string(fap));
  }
  const FileId evicted = cell;
  if (evicted != 0) x_[fap * library_size_ + (evicted - 1)] = 0;
  cell = file;
  x_[fap * library_size_ + (file - 1)] = 1;
  return evicted;
}

void CacheMatrix::assign(std::size_t fap, std::span<const FileId> files) {
  if (files.size() > capacity_) throw DomainError("CacheMatrix::assign: more files than slots");
  std::vector<FileId> row(capacity_, 0);
  std::vector<std::uint8_t> seen(library_size_, 0);
  for (std::size_t i = 0; i < files.size(); ++i) {
    const FileId f = files[i];
    if (f == 0) continue;
    if (f > library_size_) throw DomainError("CacheMatrix::assign: bad file id");
    if (seen[f - 1]) throw DuplicateCacheError("CacheMatrix::assign: duplicate file");
    seen[f - 1] = 1;
    row[i] = f;
  }
  std::copy(row.begin(), row.end(), q_.begin() + static_cast<std::ptrdiff_t>(fap * capacity_));
  std::copy(seen.begin(), seen.end(),
            x_.begin() + static_cast<std::ptrdiff_t>(fap * library_size_));
}

bool CacheMatrix::consistent() const {
  for (std::size_t n = 0; n < n_faps_; ++n) {
    std::vector<std::uint8_t> seen(library_size_, 0);
    std::size_t count = 0;
    for (auto f : slots(n)) {
      if (f == 0) continue;
      if (f > library_size_ || seen[f - 1]) return false;
      seen[f - 1] = 1;
      ++count;
    }
    std::size_t row_sum = 0;
    for (std::size_t f = 0; f < library_size_; ++f) {
      if (x_[n * library_size_ + f] != seen[f]) return false;
      row_sum += x_[n * library_size_ + f];
    }
    if (row_sum != count || count > capacity_) return false;
  }
  return true;
}

Tier delivery_tier(const CacheMatrix& cache, const Topology& topology, std::size_t fap,
                   FileId file) {
  if (cache.cached(fap, file)) return Tier::local;
  for (auto m : topology.neighbors(fap)) {
    if (cache.cached(m, file)) return Tier::neighbor;
  }
  return Tier::cloud;
}

double file_delay(const CacheMatrix& cache, const Topology& topology, std::size_t fap,
                  FileId file, double z1, double z2, double z3) {
  switch (delivery_tier(cache, topology, fap, file)) {
    case Tier::local:
      return z1;
    case Tier::neighbor:
      return z1 + z2;
    case Tier::cloud:
      break;
  }
  return z1 + z3;
}

double neighbor_delay(const CacheMatrix& cache, const Topology& topology,
                      const RadioParams& params, std::size_t fap, FileId file) {
  const auto nbrs = topology.neighbors(fap);
  std::vector<std::uint8_t> flags(nbrs.size());
  for (std::size_t i = 0; i < nbrs.size(); ++i) flags[i] = cache.cached(nbrs[i], file);
  return delay_fap_to_fap(params, flags);
}

double average_delay(const CacheMatrix& cache, const Topology& topology,
                     std::span<const PopularityVector> popularity, const Grid& z1,
                     const RadioParams& params) {
  const double z3 = delay_cloud_to_fap(params);
  double total = 0.0;
  for (std::size_t n = 0; n < cache.n_faps(); ++n) {
    for (std::size_t f = 0; f < cache.library_size(); ++f) {
      const auto file = static_cast<FileId>(f + 1);
      const double z2 = neighbor_delay(cache, topology, params, n, file);
      total += popularity[n][f] * file_delay(cache, topology, n, file, z1(n, f), z2, z3);
    }
  }
  return total;
}

OrderingCheck validate_delay_ordering(double z1, double z2, double z3) {
  OrderingCheck check;
  std::ostringstream msg;
  if (!(z1 < z2)) {
    check.ok = false;
    msg << "Z1 (" << z1 << " s) is not below Z2 (" << z2 << " s); ";
  }
  if (!(z2 * kMuchLessRatio <= z3)) {
    check.ok = false;
    msg << "Z2 (" << z2 << " s) is not at least " << kMuchLessRatio << "x below Z3 (" << z3
        << " s); ";
  }
  check.message = check.ok ? "Z1 < Z2 << Z3 holds" : msg.str();
  return check;
}

}  // namespace fogcache
