#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "binpack3d/genetic.hpp"
#include "binpack3d/model.hpp"
#include "binpack3d/packer.hpp"
#include "binpack3d/random.hpp"

namespace binpack3d {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Checkpoints: one `<chromosome_text>\t<fitness>` record per line, file
// `gen_<index>.pop`. Fitness uses the shortest round-tripping decimal.
// ---------------------------------------------------------------------------

struct CheckpointRecord {
  std::string chromosome_text;
  double fitness = 0.0;
  friend bool operator==(const CheckpointRecord&, const CheckpointRecord&) = default;
};

inline std::string checkpoint_filename(int generation) { return "gen_" + std::to_string(generation) + ".pop"; }

/// Generation index encoded in a `gen_<index>.pop` file name, if any.
inline std::optional<int> checkpoint_generation(const fs::path& path) {
  auto name = path.filename().string();
  if (name.size() < 9 || name.rfind("gen_", 0) != 0 || name.substr(name.size() - 4) != ".pop") return std::nullopt;
  int g = 0;
  if (!detail::parse_int(std::string_view(name).substr(4, name.size() - 8), g) || g < 0) return std::nullopt;
  return g;
}

inline std::string format_checkpoint(std::span<const Individual> pop) {
  std::string out;
  for (const auto& ind : pop) {
    out += serialize_chromosome(ind.chromosome);
    out += '\t';
    out += format_decimal(ind.fitness);
    out += '\n';
  }
  return out;
}

inline std::vector<CheckpointRecord> parse_checkpoint(std::string_view text) {
  std::vector<CheckpointRecord> records;
  auto lines = detail::split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  std::size_t lineno = 0;
  for (auto line : lines) {
    ++lineno;
    auto fields = detail::split(line, '\t');
    if (fields.size() != 2) throw ParseError(lineno, "record must be '<chromosome>\\t<fitness>'");
    CheckpointRecord rec{std::string(fields[0]), 0.0};
    try {
      parse_chromosome(fields[0]);
    } catch (const ParseError& e) {
      throw ParseError(lineno, e.what());
    }
    if (!parse_decimal(fields[1], rec.fitness)) throw ParseError(lineno, "malformed fitness");
    if (!(rec.fitness >= 0.0 && rec.fitness <= 1.0)) throw ParseError(lineno, "fitness outside [0, 1]");
    records.push_back(std::move(rec));
  }
  return records;
}

/// Writes `gen_<generation>.pop` under `dir` via a temporary file and rename,
/// so a checkpoint is either complete or absent. Returns the file path.
inline fs::path write_checkpoint(const fs::path& dir, int generation, std::span<const Individual> pop) {
  fs::create_directories(dir);
  fs::path target = dir / checkpoint_filename(generation);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + tmp.string());
    out << format_checkpoint(pop);
    out.flush();
    if (!out) throw std::runtime_error("failed writing checkpoint: " + tmp.string());
  }
  fs::rename(tmp, target);
  return target;
}

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<CheckpointRecord> read_checkpoint(const fs::path& path) {
  return parse_checkpoint(read_text_file(path));
}

/// Checkpoint records turned back into a population, checked against the
/// instance and the expected population size.
inline std::vector<Individual> load_population(const fs::path& path, const Instance& inst, int expected_size) {
  auto records = read_checkpoint(path);
  if (records.size() != static_cast<std::size_t>(expected_size))
    throw ParseError(0, "checkpoint has " + std::to_string(records.size()) + " records, expected " +
                            std::to_string(expected_size));
  std::vector<Individual> pop;
  std::size_t lineno = 0;
  for (auto& r : records) {
    ++lineno;
    auto c = parse_chromosome(r.chromosome_text);
    if (!matches(c, inst)) throw ParseError(lineno, "chromosome does not match instance");
    pop.push_back({std::move(c), r.fitness});
  }
  return pop;
}

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

/// Runs fn(0..n-1) on up to `workers` threads. Results are returned in index
/// order regardless of completion order. The first exception is rethrown.
template <typename Fn>
auto parallel_map(std::size_t n, int workers, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
  };
  std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), n);
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Generation loop
// ---------------------------------------------------------------------------

struct GenerationReport {
  int generation = 0;
  double best_fitness = 0.0;     // best in this generation
  double best_so_far = 0.0;
  double seconds = 0.0;          // wall-clock to produce this generation
};

struct ResumePoint {
  fs::path checkpoint;
  int generation = 0;
};

struct RunOptions {
  std::optional<fs::path> checkpoint_dir;
  std::optional<ResumePoint> resume;
  std::function<void(const GenerationReport&)> on_generation;
};

struct RunResult {
  Individual best;
  PackingSolution solution;
  int last_generation = 0;
  std::vector<GenerationReport> history;
};

/// Generation 0 is the seeded population. Each later generation is planned
/// by the coordinator (selection and elitism, one stream per generation) and
/// its pairs are varied and evaluated by the worker pool, one stream per
/// pair. Output depends only on (instance, cfg), never on the worker count.
inline RunResult run(const Instance& inst, const GaConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  using clock = std::chrono::steady_clock;
  RunResult result;
  std::vector<Individual> pop;
  int start = 0;

  auto started = clock::now();
  if (opts.resume) {
    start = opts.resume->generation;
    pop = load_population(opts.resume->checkpoint, inst, cfg.population_size);
  } else {
    Stream rng = derive_stream(cfg.seed, 0, kCoordinatorStream);
    auto chromosomes = seed_population(inst, cfg.population_size, rng);
    pop = parallel_map(chromosomes.size(), cfg.workers,
                       [&](std::size_t i) { return evaluate(chromosomes[i], inst, cfg.kb, cfg.ke); });
    if (opts.checkpoint_dir) write_checkpoint(*opts.checkpoint_dir, 0, pop);
  }

  auto record = [&](int g, const std::vector<Individual>& generation, clock::time_point t0) {
    Individual top = rank_population(generation).front();
    if (result.history.empty() || top.fitness > result.best.fitness) result.best = top;
    GenerationReport rep{g, top.fitness, result.best.fitness,
                         std::chrono::duration<double>(clock::now() - t0).count()};
    result.history.push_back(rep);
    if (opts.on_generation) opts.on_generation(rep);
  };
  record(start, pop, started);

  int stagnant = 0;
  result.last_generation = start;
  for (int g = start + 1; g <= cfg.generations; ++g) {
    auto t0 = clock::now();
    double before = result.best.fitness;
    Stream coordinator = derive_stream(cfg.seed, static_cast<std::uint64_t>(g), kCoordinatorStream);
    auto pairs = plan_generation(std::move(pop), cfg, coordinator);
    auto offspring = parallel_map(pairs.size(), cfg.workers, [&](std::size_t i) {
      Stream rng = derive_stream(cfg.seed, static_cast<std::uint64_t>(g), i);
      return vary_and_evaluate(pairs[i], inst, cfg, rng);
    });
    pop.clear();
    for (auto& group : offspring)
      for (auto& ind : group) pop.push_back(std::move(ind));
    if (opts.checkpoint_dir) write_checkpoint(*opts.checkpoint_dir, g, pop);
    record(g, pop, t0);
    result.last_generation = g;

    stagnant = result.best.fitness > before ? 0 : stagnant + 1;
    if (cfg.early_stop > 0 && stagnant >= cfg.early_stop) break;
  }

  result.solution = decode(result.best.chromosome, inst, cfg.kb, cfg.ke);
  return result;
}

}  // namespace binpack3d
