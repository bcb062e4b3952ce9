// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "binpack3d/binpack3d.hpp"
#include "support/generators.hpp"
#include "support/voxel_oracle.hpp"

using namespace binpack3d;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> check;
};

fs::path scratch(const std::string& tag) {
  auto p = fs::temp_directory_path() / ("binpack3d_accept_" + std::to_string(::getpid()) + "_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string fmt(double v) { return format_decimal(v); }

// 1. Geometric soundness under the independent validator.
Outcome geometric_soundness() {
  Stream rng(1001);
  testgen::InstanceShape shape{20, 5, 25, 10, 50};
  int feasible = 0, violations = 0;
  for (int t = 0; t < 1000; ++t) {
    Instance inst = testgen::random_instance(rng, shape);
    auto c = testgen::random_chromosome(rng, inst.box_count(), inst.container_count());
    auto sol = decode(c, inst, kDefaultKb, kDefaultKe);
    feasible += sol.feasible;
    auto rep = validate_solution(inst, sol);
    violations += static_cast<int>(rep.violations.size());
  }
  return {violations == 0 && feasible > 0,
          "1000 cases, " + std::to_string(feasible) + " feasible, " + std::to_string(violations) + " violations"};
}

// 2. EMS lists agree with a voxel grid after every placement.
Outcome ems_voxel_equivalence() {
  Stream rng(2002);
  testgen::InstanceShape shape{14, 3, 6, 3, 12};
  long steps = 0, failures = 0;
  for (int t = 0; t < 200; ++t) {
    Instance inst = testgen::random_instance(rng, shape);
    auto c = testgen::random_chromosome(rng, inst.box_count(), inst.container_count());
    std::map<int, voxel::Grid> grids;
    decode(c, inst, 1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(5)),
           [&](const DecodeStep& step) {
             ++steps;
             const auto& p = step.placement;
             const auto& cd = inst.container(p.container_id).dims;
             auto& grid = grids.try_emplace(p.container_id, std::array<Coord, 3>{cd.l, cd.w, cd.h}).first->second;
             auto pmax = p.max_corner();
             grid.fill({{p.position.x, p.position.y, p.position.z}, {pmax.x, pmax.y, pmax.z}});

             voxel::Grid covered(grid.dims());
             std::set<voxel::Box> listed;
             bool ok = true;
             for (const auto& e : step.spaces) {
               voxel::Box b{{e.min.x, e.min.y, e.min.z}, {e.max.x, e.max.y, e.max.z}};
               covered.fill(b);
               listed.insert(b);
               ok = ok && grid.free(b) && grid.maximal(b);
               for (const auto& o : step.spaces)
                 if (!(o == e) && o.contains(e)) ok = false;
             }
             // union of EMSs == free voxels
             for (Coord x = 0; x < grid.dims()[0] && ok; ++x)
               for (Coord y = 0; y < grid.dims()[1] && ok; ++y)
                 for (Coord z = 0; z < grid.dims()[2] && ok; ++z)
                   ok = covered.occupied(x, y, z) == !grid.occupied(x, y, z);
             auto brute = grid.maximal_spaces();
             ok = ok && std::set<voxel::Box>(brute.begin(), brute.end()) == listed;
             failures += !ok;
           });
  }
  return {failures == 0 && steps > 0,
          std::to_string(steps) + " placement steps, " + std::to_string(failures) + " mismatches"};
}

// 3. Operator closure and the hand-traced crossover.
Outcome operator_closure() {
  Stream rng(3003);
  int invalid = 0;
  for (int t = 0; t < 10000; ++t) {
    std::size_t m = 1 + rng.below(20), n = 1 + rng.below(6);
    auto p1 = testgen::random_chromosome(rng, m, n), p2 = testgen::random_chromosome(rng, m, n);
    auto [o1, o2] = crossover(p1, p2, random_cut(m, rng), random_cut(n, rng));
    invalid += !is_valid(o1) + !is_valid(o2);
    invalid += !is_valid(mutate(o1, 1.0, rng)) + !is_valid(mutate(o2, 0.5, rng));
  }
  auto traced = order_crossover({2, 4, 1, 3, 5}, {5, 1, 3, 2, 4}, {1, 3});
  bool trace_ok = traced == std::vector<int>{3, 4, 1, 2, 5};
  return {invalid == 0 && trace_ok,
          std::to_string(invalid) + " invalid of 40000; hand trace " + (trace_ok ? "matches" : "MISMATCH")};
}

// 4. Binary tournament win frequency.
Outcome tournament_statistics() {
  std::vector<Individual> pop{{{{1}, {1}}, 0.2}, {{{1}, {1}}, 0.8}};
  Stream rng(4004);
  int wins = 0;
  for (int t = 0; t < 100000; ++t) wins += tournament_select(pop, 0.9, rng).fitness == 0.8;
  double freq = wins / 100000.0;
  return {std::abs(freq - 0.9) <= 0.01, "better individual won " + fmt(freq)};
}

// 5. Per-generation best never drops with elitism.
Outcome elitism_monotonicity() {
  int drops = 0, runs = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto gen = generate_cut_instance({{60, 50, 40}, 8 + static_cast<int>(s % 8), 4, 500 + s});
    GaConfig cfg;
    cfg.population_size = 40;
    cfg.elite_count = 2;
    cfg.generations = 50;
    cfg.seed = 5000 + s;
    cfg.workers = 4;
    auto res = run(gen.instance, cfg);
    ++runs;
    for (std::size_t g = 1; g < res.history.size(); ++g)
      drops += res.history[g].best_fitness < res.history[g - 1].best_fitness;
    drops += res.history.size() != 51;
  }
  return {drops == 0, std::to_string(runs) + " runs, " + std::to_string(drops) + " drops"};
}

// 6. The GA reaches the exhaustive optimum on tiny instances.
Outcome oracle_equivalence() {
  Stream rng(6006);
  testgen::InstanceShape shape{4, 2, 6, 4, 10};
  int matched = 0;
  std::ostringstream misses;
  for (int t = 0; t < 10; ++t) {
    Instance inst = testgen::random_instance(rng, shape);
    auto oracle = run_oracle(inst, kDefaultKb, kDefaultKe);
    GaConfig cfg;
    cfg.population_size = 24;
    cfg.elite_count = 2;
    cfg.generations = 30;
    cfg.seed = 600 + static_cast<std::uint64_t>(t);
    auto res = run(inst, cfg);
    if (res.best.fitness == oracle.best_fitness)
      ++matched;
    else
      misses << " [#" << t << " ga " << fmt(res.best.fitness) << " oracle " << fmt(oracle.best_fitness) << "]";
  }
  return {matched == 10, std::to_string(matched) + "/10 instances at oracle optimum" + misses.str()};
}

std::vector<std::string> checkpoint_files(const fs::path& dir, int generations) {
  std::vector<std::string> out;
  for (int g = 0; g <= generations; ++g) {
    auto p = dir / checkpoint_filename(g);
    out.push_back(fs::exists(p) ? read_text_file(p) : std::string("<missing>"));
  }
  return out;
}

// 7. Checkpoints identical for every worker count.
Outcome schedule_determinism() {
  auto gen = generate_cut_instance({{80, 60, 50}, 16, 5, 707});
  GaConfig cfg;
  cfg.population_size = 40;
  cfg.elite_count = 2;
  cfg.generations = 25;
  cfg.seed = 7007;
  std::vector<std::string> reference;
  int differing = 0;
  for (int workers : {1, 2, 4, 8}) {
    auto dir = scratch("w" + std::to_string(workers));
    cfg.workers = workers;
    RunOptions opts;
    opts.checkpoint_dir = dir;
    run(gen.instance, cfg, opts);
    auto files = checkpoint_files(dir, cfg.generations);
    if (reference.empty())
      reference = files;
    else
      differing += files != reference;
    fs::remove_all(dir);
  }
  return {differing == 0, "workers {1,2,4,8}, 26 checkpoints each, " + std::to_string(differing) + " differing runs"};
}

// 8. Constructed-optimum regression on a guillotine instance.
constexpr std::uint64_t kRegressionInstanceSeed = 8;
constexpr std::uint64_t kRegressionGaSeed = 8008;
constexpr double kRegressionFill = 1.0;  // frozen from the first verified run

Outcome constructed_optimum() {
  auto gen = generate_cut_instance({{100, 100, 100}, 10, 1, kRegressionInstanceSeed});
  GaConfig cfg;
  cfg.population_size = 100;
  cfg.elite_count = 2;
  cfg.generations = 100;
  cfg.kb = 3;
  cfg.ke = 5;
  cfg.seed = kRegressionGaSeed;
  cfg.workers = 4;
  auto res = run(gen.instance, cfg);
  bool valid = validate_solution(gen.instance, res.solution).ok();
  bool pass = res.best.fitness >= 0.85 && res.best.fitness == kRegressionFill && valid;
  return {pass, "fill " + fmt(res.best.fitness) + " (threshold 0.85, frozen " + fmt(kRegressionFill) + "), chromosome " +
                    serialize_chromosome(res.best.chromosome)};
}

// 9. Resuming from a checkpoint reproduces the remaining generations.
Outcome resume_equivalence() {
  auto gen = generate_cut_instance({{70, 70, 40}, 14, 4, 909});
  GaConfig cfg;
  cfg.population_size = 30;
  cfg.elite_count = 4;
  cfg.generations = 30;
  cfg.seed = 9009;
  cfg.workers = 3;
  auto full = scratch("full"), part = scratch("part");
  RunOptions a;
  a.checkpoint_dir = full;
  run(gen.instance, cfg, a);
  int mismatches = 0;
  for (int g : {0, 7, 18}) {
    fs::remove_all(part);
    RunOptions b;
    b.checkpoint_dir = part;
    b.resume = ResumePoint{full / checkpoint_filename(g), g};
    run(gen.instance, cfg, b);
    for (int h = g + 1; h <= cfg.generations; ++h) {
      auto p = part / checkpoint_filename(h), q = full / checkpoint_filename(h);
      mismatches += !fs::exists(p) || read_text_file(p) != read_text_file(q);
    }
  }
  fs::remove_all(full);
  fs::remove_all(part);
  return {mismatches == 0, "resumed at generations 0, 7, 18; " + std::to_string(mismatches) + " mismatched checkpoints"};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "geometric soundness", 30, geometric_soundness},
      {2, "EMS voxel equivalence", 60, ems_voxel_equivalence},
      {3, "operator closure", 5, operator_closure},
      {4, "tournament statistics", 5, tournament_statistics},
      {5, "elitism monotonicity", 60, elitism_monotonicity},
      {6, "oracle equivalence at tiny scale", 30, oracle_equivalence},
      {7, "schedule determinism", 60, schedule_determinism},
      {8, "constructed-optimum regression", 120, constructed_optimum},
      {9, "resume equivalence", 60, resume_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < c.time_limit_s;
    bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("[%s] AC%d %s: %s (%.2fs, limit %.0fs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : ", OVER TIME");
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
