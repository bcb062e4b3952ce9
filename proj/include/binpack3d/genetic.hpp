#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "binpack3d/model.hpp"
#include "binpack3d/packer.hpp"
#include "binpack3d/random.hpp"

namespace binpack3d {

struct GaConfig {
  int population_size = 100;  // Z
  int elite_count = 2;        // E
  double pass_through_prob = 0.1;
  double mutation_prob = 0.2;
  int kb = kDefaultKb;
  int ke = kDefaultKe;
  int generations = 100;
  double tournament_win_prob = 0.9;
  std::uint64_t seed = 0;
  int workers = 1;
  int early_stop = 0;  // stop after this many generations without improvement; 0 disables

  void validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument("invalid GA config: " + m); };
    if (population_size < 4) fail("population size must be at least 4");
    if (elite_count < 0 || elite_count >= population_size) fail("elite count must be in [0, Z)");
    if ((population_size - elite_count) % 2 != 0) fail("Z - E must be even");
    if (!(pass_through_prob >= 0.0 && pass_through_prob <= 1.0)) fail("prob_c must be in [0, 1]");
    if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0)) fail("Pm must be in [0, 1]");
    if (!(tournament_win_prob > 0.5 && tournament_win_prob <= 1.0)) fail("tournament win probability must be in (0.5, 1]");
    if (kb < 1 || ke < 1) fail("kb and ke must be positive");
    if (generations < 0) fail("generation count must be non-negative");
    if (workers < 1) fail("worker count must be positive");
    if (early_stop < 0) fail("early-stop count must be non-negative");
  }
};

struct Individual {
  Chromosome chromosome;
  double fitness = 0.0;
  friend bool operator==(const Individual&, const Individual&) = default;
};

/// Parents for one variation task. An absent `second` is the elite marker:
/// `first` passes through unchanged with its known fitness.
struct MatingPair {
  Individual first;
  std::optional<Chromosome> second;

  bool is_elite() const { return !second.has_value(); }
};

inline Individual evaluate(Chromosome c, const Instance& inst, int kb, int ke) {
  double f = decode(c, inst, kb, ke).fitness;
  return {std::move(c), f};
}

inline std::vector<int> identity_sequence(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 1);
  return v;
}

/// BPS sorted by a box key, descending, ties kept in id order.
template <typename Key>
std::vector<int> sorted_bps(const Instance& inst, Key key) {
  auto ids = identity_sequence(inst.box_count());
  std::stable_sort(ids.begin(), ids.end(),
                   [&](int a, int b) { return key(inst.box(a)) > key(inst.box(b)); });
  return ids;
}

/// Z chromosomes: the first four order boxes by volume, length, width and
/// height (largest first) with random CLS; the rest are fully random.
inline std::vector<Chromosome> seed_population(const Instance& inst, int z, Stream& rng) {
  if (z < 4) throw std::invalid_argument("population size must be at least 4");
  std::vector<Chromosome> pop;
  pop.reserve(z);
  auto random_cls = [&] {
    auto cls = identity_sequence(inst.container_count());
    rng.shuffle(cls);
    return cls;
  };
  pop.push_back({sorted_bps(inst, [](const BoxSpec& b) { return volume(b.dims); }), random_cls()});
  pop.push_back({sorted_bps(inst, [](const BoxSpec& b) { return b.dims.l; }), random_cls()});
  pop.push_back({sorted_bps(inst, [](const BoxSpec& b) { return b.dims.w; }), random_cls()});
  pop.push_back({sorted_bps(inst, [](const BoxSpec& b) { return b.dims.h; }), random_cls()});
  for (int k = 4; k < z; ++k) {
    auto bps = identity_sequence(inst.box_count());
    rng.shuffle(bps);
    pop.push_back({std::move(bps), random_cls()});
  }
  return pop;
}

/// Binary tournament: the fitter of two distinct random individuals wins with
/// probability `win_prob`, otherwise the weaker one is returned.
inline const Individual& tournament_select(std::span<const Individual> pop, double win_prob, Stream& rng) {
  if (pop.size() < 2) throw std::invalid_argument("tournament needs at least two individuals");
  auto [a, b] = rng.distinct_pair(pop.size());
  std::size_t better = pop[b].fitness > pop[a].fitness ? b : a;
  std::size_t worse = better == a ? b : a;
  return rng.bernoulli(win_prob) ? pop[better] : pop[worse];
}

/// Cut points (i, j) with 0 <= i < j <= n; genes at 0-based [i, j) are kept.
struct Cut {
  std::size_t i = 0;
  std::size_t j = 0;
};

inline Cut random_cut(std::size_t n, Stream& rng) {
  auto [a, b] = rng.distinct_pair(n + 1);
  return {std::min(a, b), std::max(a, b)};
}

/// Two-cut order crossover on one permutation; returns the child that keeps
/// `keep`'s segment and fills the rest circularly from `fill`, starting after
/// the second cut.
inline std::vector<int> order_crossover(const std::vector<int>& keep, const std::vector<int>& fill, Cut cut) {
  const std::size_t n = keep.size();
  if (fill.size() != n || cut.i >= cut.j || cut.j > n) throw std::invalid_argument("bad crossover cut");
  std::vector<int> child(n, 0);
  std::vector<bool> used(n + 1, false);
  for (std::size_t k = cut.i; k < cut.j; ++k) {
    child[k] = keep[k];
    used[keep[k]] = true;
  }
  std::size_t write = cut.j % n;
  for (std::size_t step = 0; step < n; ++step) {
    int gene = fill[(cut.j + step) % n];
    if (used[gene]) continue;
    child[write] = gene;
    used[gene] = true;
    write = (write + 1) % n;
  }
  return child;
}

inline std::pair<Chromosome, Chromosome> crossover(const Chromosome& p1, const Chromosome& p2, Cut cut_bps,
                                                   Cut cut_cls) {
  return {{order_crossover(p1.bps, p2.bps, cut_bps), order_crossover(p1.cls, p2.cls, cut_cls)},
          {order_crossover(p2.bps, p1.bps, cut_bps), order_crossover(p2.cls, p1.cls, cut_cls)}};
}

inline void swap_random_genes(std::vector<int>& seq, Stream& rng) {
  if (seq.size() < 2) return;
  auto [a, b] = rng.distinct_pair(seq.size());
  std::swap(seq[a], seq[b]);
}

/// With probability `pm`, swaps two random genes in the BPS and two in the CLS.
inline Chromosome mutate(Chromosome c, double pm, Stream& rng) {
  if (rng.bernoulli(pm)) {
    swap_random_genes(c.bps, rng);
    swap_random_genes(c.cls, rng);
  }
  return c;
}

/// Population sorted by descending fitness; equal fitness falls back to the
/// serialized chromosome text, ascending.
inline std::vector<Individual> rank_population(std::vector<Individual> pop) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) keys.emplace_back(serialize_chromosome(pop[i].chromosome), i);
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pop[a].fitness != pop[b].fitness) return pop[a].fitness > pop[b].fitness;
    return keys[a].first < keys[b].first;
  });
  std::vector<Individual> out;
  out.reserve(pop.size());
  for (auto i : order) out.push_back(std::move(pop[i]));
  return out;
}

/// Coordinator step: E elite pass-through pairs, then (Z-E)/2 parent pairs
/// drawn by tournament from the whole population.
inline std::vector<MatingPair> plan_generation(std::vector<Individual> pop, const GaConfig& cfg, Stream& rng) {
  if (pop.size() != static_cast<std::size_t>(cfg.population_size))
    throw std::invalid_argument("population size does not match config");
  auto ranked = rank_population(std::move(pop));
  std::vector<MatingPair> pairs;
  for (int e = 0; e < cfg.elite_count; ++e) pairs.push_back({ranked[e], std::nullopt});
  std::vector<const Individual*> pool;
  for (int k = 0; k < cfg.population_size - cfg.elite_count; ++k)
    pool.push_back(&tournament_select(ranked, cfg.tournament_win_prob, rng));
  for (std::size_t k = 0; k + 1 < pool.size(); k += 2) pairs.push_back({*pool[k], pool[k + 1]->chromosome});
  return pairs;
}

/// Worker step. Elite pairs return their first member as is; parent pairs
/// either pass through (probability prob_c, re-evaluated) or produce two
/// crossed and mutated children.
inline std::vector<Individual> vary_and_evaluate(const MatingPair& pair, const Instance& inst, const GaConfig& cfg,
                                                 Stream& rng) {
  if (pair.is_elite()) return {pair.first};
  const Chromosome& p1 = pair.first.chromosome;
  const Chromosome& p2 = *pair.second;
  if (rng.bernoulli(cfg.pass_through_prob))
    return {evaluate(p1, inst, cfg.kb, cfg.ke), evaluate(p2, inst, cfg.kb, cfg.ke)};
  Cut cut_bps = random_cut(p1.bps.size(), rng);
  Cut cut_cls = random_cut(p1.cls.size(), rng);
  auto [o1, o2] = crossover(p1, p2, cut_bps, cut_cls);
  o1 = mutate(std::move(o1), cfg.mutation_prob, rng);
  o2 = mutate(std::move(o2), cfg.mutation_prob, rng);
  return {evaluate(std::move(o1), inst, cfg.kb, cfg.ke), evaluate(std::move(o2), inst, cfg.kb, cfg.ke)};
}

}  // namespace binpack3d
