// binpack3d: command-line front end for the 3D heterogeneous bin packing solver.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "binpack3d/binpack3d.hpp"

namespace {

using namespace binpack3d;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Instance load_instance(const std::string& path) {
  return parse_instance(read_text_file(path));
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
  if (!out) throw std::runtime_error("failed writing " + path);
}

struct SolveArgs {
  std::string instance;
  GaConfig cfg;
  std::string out = "solution.txt";
  std::string checkpoint_dir;
  std::string resume;
  std::string results_log = "results.log";
  bool verbose = false;
};

int cmd_solve(const SolveArgs& a) {
  Instance inst = load_instance(a.instance);
  RunOptions opts;
  std::string ckpt = a.checkpoint_dir;
  if (ckpt.empty())
    if (const char* env = std::getenv("BINPACK3D_CHECKPOINT_DIR")) ckpt = env;
  if (!ckpt.empty()) opts.checkpoint_dir = fs::path(ckpt);
  if (!a.resume.empty()) {
    auto g = checkpoint_generation(a.resume);
    if (!g) throw UsageError("--resume expects a gen_<index>.pop checkpoint file");
    opts.resume = ResumePoint{a.resume, *g};
  }
  if (a.verbose) {
    opts.on_generation = [](const GenerationReport& r) {
      std::cerr << "gen " << r.generation << " best " << format_decimal(r.best_fitness) << " best_so_far "
                << format_decimal(r.best_so_far) << " seconds " << r.seconds << '\n';
    };
  }

  auto t0 = std::chrono::steady_clock::now();
  RunResult res = run(inst, a.cfg, opts);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  write_file(a.out, write_solution(res.solution));
  std::cout << "best_fill_ratio " << format_decimal(res.best.fitness) << '\n';
  std::cout << "chromosome " << serialize_chromosome(res.best.chromosome) << '\n';
  std::cout << "generations " << res.last_generation << '\n';

  if (!a.results_log.empty()) {
    std::ofstream log(a.results_log, std::ios::app);
    if (!log) throw std::runtime_error("cannot append to " + a.results_log);
    log << fs::path(a.instance).stem().string() << '\t' << a.cfg.population_size << '\t' << a.cfg.elite_count
        << '\t' << a.cfg.generations << '\t' << a.cfg.seed << '\t' << format_decimal(res.best.fitness) << '\t'
        << wall << '\n';
  }
  return res.solution.feasible ? kExitOk : kExitFailed;
}

int cmd_generate(const std::vector<Coord>& dims, int k, Coord min_extent, std::uint64_t seed, const std::string& out,
                 const std::string& solution_out) {
  if (dims.size() != 3) throw UsageError("--dims expects L,W,H");
  CutGenSpec spec{{dims[0], dims[1], dims[2]}, k, min_extent, seed};
  CutInstance gen = generate_cut_instance(spec);
  std::string text = "# guillotine instance: k=" + std::to_string(k) + " seed=" + std::to_string(seed) +
                     " optimum fill 1\n" + serialize_instance(gen.instance);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  if (!solution_out.empty()) write_file(solution_out, write_solution(gen.packing));
  return kExitOk;
}

int cmd_decode(const std::string& instance, const std::string& chromosome, int kb, int ke, const std::string& out) {
  Instance inst = load_instance(instance);
  Chromosome c = parse_chromosome(chromosome);
  if (!matches(c, inst)) throw UsageError("chromosome does not match the instance sizes");
  PackingSolution sol = decode(c, inst, kb, ke);
  std::cout << "feasible " << (sol.feasible ? 1 : 0) << '\n';
  std::cout << "fill_ratio " << format_decimal(sol.fitness) << '\n';
  if (!out.empty())
    write_file(out, write_solution(sol));
  else
    std::cout << write_solution(sol);
  return sol.feasible ? kExitOk : kExitFailed;
}

int cmd_oracle(const std::string& instance, int kb, int ke, std::uint64_t limit) {
  Instance inst = load_instance(instance);
  if (!chromosome_space_size(inst, limit)) throw UsageError("instance exceeds the oracle limit");
  OracleResult r = run_oracle(inst, kb, ke, limit);
  std::cout << "best_fill_ratio " << format_decimal(r.best_fitness) << '\n';
  std::cout << "chromosome " << serialize_chromosome(r.best_chromosome) << '\n';
  std::cout << "evaluated " << r.evaluated_count << '\n';
  return kExitOk;
}

int cmd_validate(const std::string& instance, const std::string& solution) {
  Instance inst = load_instance(instance);
  PackingSolution sol = parse_solution(read_text_file(solution));
  ValidationReport rep = validate_solution(inst, sol);
  if (rep.ok()) {
    std::cout << "ok: " << sol.placements.size() << " placements, fill_ratio " << format_decimal(sol.fitness)
              << '\n';
    return kExitOk;
  }
  std::cout << rep.violations.size() << " violation(s)\n" << rep.describe();
  return kExitFailed;
}

int cmd_report(const std::string& solution, const std::string& instance) {
  PackingSolution sol = parse_solution(read_text_file(solution));
  std::optional<Instance> inst;
  if (!instance.empty()) inst = load_instance(instance);
  std::cout << "feasible " << (sol.feasible ? "yes" : "no") << '\n';
  std::cout << "fill_ratio " << format_decimal(sol.fitness) << '\n';
  std::cout << "containers_opened " << sol.opened_containers.size() << '\n';
  std::cout << "boxes_placed " << sol.placements.size() << '\n';
  std::map<int, std::pair<int, Volume>> per;
  for (const auto& p : sol.placements) {
    auto& e = per[p.container_id];
    ++e.first;
    e.second += volume(p.dims);
  }
  for (int id : sol.opened_containers) {
    auto e = per[id];
    std::cout << "container " << id << " boxes " << e.first << " packed_volume " << e.second;
    if (inst && id >= 1 && static_cast<std::size_t>(id) <= inst->container_count()) {
      Volume cv = volume(inst->container(id).dims);
      std::cout << " utilization " << format_decimal(static_cast<double>(e.second) / static_cast<double>(cv));
    }
    std::cout << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"3D bin packing with heterogeneous bins: EMS decoder + parallel genetic algorithm"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Run the genetic algorithm on an instance");
  s->add_option("--instance", solve.instance, "Instance file")->required()->check(CLI::ExistingFile);
  s->add_option("--pop", solve.cfg.population_size, "Population size Z")->capture_default_str();
  s->add_option("--elite", solve.cfg.elite_count, "Elite count E")->capture_default_str();
  s->add_option("--probc", solve.cfg.pass_through_prob, "Parent pass-through probability")->capture_default_str();
  s->add_option("--pm", solve.cfg.mutation_prob, "Mutation probability")->capture_default_str();
  s->add_option("--kb", solve.cfg.kb, "Boxes considered per step")->capture_default_str();
  s->add_option("--ke", solve.cfg.ke, "EMS window size")->capture_default_str();
  s->add_option("--gens", solve.cfg.generations, "Generation count G")->capture_default_str();
  s->add_option("--win-prob", solve.cfg.tournament_win_prob, "Tournament win probability")->capture_default_str();
  s->add_option("--workers", solve.cfg.workers, "Worker threads")->capture_default_str();
  s->add_option("--seed", solve.cfg.seed, "Root random seed")->capture_default_str();
  s->add_option("--early-stop", solve.cfg.early_stop, "Stop after N stagnant generations (0 = off)")
      ->capture_default_str();
  s->add_option("--out", solve.out, "Solution output file")->capture_default_str();
  s->add_option("--checkpoint-dir", solve.checkpoint_dir,
                "Directory for gen_<index>.pop checkpoints (or BINPACK3D_CHECKPOINT_DIR)");
  s->add_option("--resume", solve.resume, "Resume from a gen_<index>.pop checkpoint")->check(CLI::ExistingFile);
  s->add_option("--results-log", solve.results_log, "Append a summary line here (empty to disable)")
      ->capture_default_str();
  s->add_flag("-v,--verbose", solve.verbose, "Print per-generation progress to stderr");

  std::vector<Coord> dims{100, 100, 100};
  int k = 10;
  Coord min_extent = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_out, gen_solution;
  auto* g = app.add_subcommand("generate", "Generate a guillotine-cut instance with optimum fill 1");
  g->add_option("--k", k, "Number of boxes")->capture_default_str();
  g->add_option("--dims", dims, "Container dims L,W,H")->delimiter(',')->expected(3);
  g->add_option("--min-extent", min_extent, "Minimum box extent")->capture_default_str();
  g->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  g->add_option("--out", gen_out, "Instance output file (default stdout)");
  g->add_option("--solution-out", gen_solution, "Write the reference perfect packing here");

  std::string instance, chromosome, out, solution;
  int kb = kDefaultKb, ke = kDefaultKe;
  auto* d = app.add_subcommand("decode", "Decode one chromosome");
  d->add_option("--instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  d->add_option("--chromosome", chromosome, "Chromosome text b1,...,bM|c1,...,cN")->required();
  d->add_option("--kb", kb)->capture_default_str();
  d->add_option("--ke", ke)->capture_default_str();
  d->add_option("--out", out, "Solution output file (default stdout)");

  std::uint64_t limit = kDefaultOracleLimit;
  auto* o = app.add_subcommand("oracle", "Exhaustively decode every chromosome of a tiny instance");
  o->add_option("--instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  o->add_option("--kb", kb)->capture_default_str();
  o->add_option("--ke", ke)->capture_default_str();
  o->add_option("--limit", limit, "Maximum number of chromosomes")->capture_default_str();

  auto* v = app.add_subcommand("validate", "Independently check a solution file");
  v->add_option("--instance", instance, "Instance file")->required()->check(CLI::ExistingFile);
  v->add_option("--solution", solution, "Solution file")->required()->check(CLI::ExistingFile);

  auto* r = app.add_subcommand("report", "Summarize a solution file");
  r->add_option("--solution", solution, "Solution file")->required()->check(CLI::ExistingFile);
  r->add_option("--instance", instance, "Instance file, for per-container utilization");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s) return cmd_solve(solve);
    if (*g) return cmd_generate(dims, k, min_extent, gen_seed, gen_out, gen_solution);
    if (*d) return cmd_decode(instance, chromosome, kb, ke, out);
    if (*o) return cmd_oracle(instance, kb, ke, limit);
    if (*v) return cmd_validate(instance, solution);
    if (*r) return cmd_report(solution, instance);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
  return kExitUsage;
}
