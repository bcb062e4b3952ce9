#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "binpack3d/genetic.hpp"
#include "binpack3d/packer.hpp"

namespace binpack3d {

inline constexpr std::uint64_t kDefaultOracleLimit = 50'000;

struct OracleResult {
  double best_fitness = 0.0;
  Chromosome best_chromosome;
  std::uint64_t evaluated_count = 0;
};

/// M! * N!, or nullopt past `limit`.
inline std::optional<std::uint64_t> chromosome_space_size(const Instance& inst, std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::size_t n : {inst.box_count(), inst.container_count()})
    for (std::uint64_t k = 2; k <= n; ++k) {
      if (__builtin_mul_overflow(total, k, &total) || total > limit) return std::nullopt;
    }
  return total;
}

/// Decodes every chromosome (BPS-major lexicographic order) and keeps the
/// first one reaching the maximum fitness.
inline OracleResult run_oracle(const Instance& inst, int kb, int ke, std::uint64_t limit = kDefaultOracleLimit) {
  if (!chromosome_space_size(inst, limit))
    throw std::invalid_argument("instance too large for exhaustive search (limit " + std::to_string(limit) + ")");
  OracleResult res;
  Chromosome c{identity_sequence(inst.box_count()), {}};
  bool first = true;
  do {
    c.cls = identity_sequence(inst.container_count());
    do {
      double f = decode(c, inst, kb, ke).fitness;
      ++res.evaluated_count;
      if (first || f > res.best_fitness) {
        res.best_fitness = f;
        res.best_chromosome = c;
        first = false;
      }
    } while (std::next_permutation(c.cls.begin(), c.cls.end()));
  } while (std::next_permutation(c.bps.begin(), c.bps.end()));
  return res;
}

}  // namespace binpack3d
