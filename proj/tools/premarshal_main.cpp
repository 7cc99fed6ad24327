#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "premarshal/generator.hpp"
#include "premarshal/model.hpp"
#include "premarshal/oracle.hpp"
#include "premarshal/report.hpp"
#include "premarshal/search.hpp"

namespace fs = std::filesystem;
using namespace premarshal;

namespace {

std::uint64_t default_seed() {
  if (const char* env = std::getenv("PREMARSHAL_SEED"))
    return std::strtoull(env, nullptr, 10);
  return 20240101;
}

void print_moves(const Solution& solution) {
  for (const Move& move : solution.moves)
    std::cout << "t=" << move.time << ": stack " << move.from_stack << " -> stack "
              << move.to_stack << " (priority " << move.priority << ")\n";
  std::cout << "cost " << solution.cost << "\n";
}

void append_stats_row(const std::string& path, const ReportRow& row) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw std::runtime_error("cannot open stats file: " + path);
  if (fresh) out << report_header() << "\n";
  out << to_csv(row) << "\n";
}

Instance load_with_mode(const std::string& path, const std::string& mode_override,
                        bool derive) {
  Instance instance = load_instance(path);
  if (mode_override == "priority" && instance.mode == Mode::Configuration) {
    instance.mode = Mode::Priority;
    instance.target.reset();
  } else if (mode_override == "configuration" && instance.mode == Mode::Priority &&
             !derive)
    throw std::runtime_error(
        "configuration mode needs a target; rerun with --derive-target");
  if (derive && instance.mode == Mode::Priority) instance = derive_target(instance);
  instance.validate();
  return instance;
}

int cmd_gen(const std::vector<int>& priorities, const std::vector<int>& stacks,
            const std::vector<int>& heights, const std::vector<int>& fills,
            std::uint64_t seed, int per_cell, const std::string& out_dir,
            bool free_mode, int count) {
  fs::create_directories(out_dir);
  nlohmann::ordered_json manifest;
  manifest["seed"] = seed;
  std::vector<std::string> files;

  if (free_mode) {
    if (priorities.size() != 1 || stacks.size() != 1 || heights.size() != 1 ||
        fills.size() != 1)
      throw std::runtime_error("--free needs exactly one value per parameter");
    manifest["free"] = true;
    manifest["count"] = count;
    RngStream rng(seed);
    for (int i = 0; i < count; ++i) {
      Instance instance =
          generate_free(priorities[0], stacks[0], heights[0], fills[0], rng);
      const std::string name = "p" + std::to_string(priorities[0]) + "_s" +
                               std::to_string(stacks[0]) + "_h" +
                               std::to_string(heights[0]) + "_f" +
                               std::to_string(fills[0]) + "_i" + std::to_string(i) +
                               ".json";
      save_instance(instance, (fs::path(out_dir) / name).string());
      files.push_back(name);
    }
  } else {
    manifest["per_cell"] = per_cell;
    auto wanted = [](const std::vector<int>& filter, int value) {
      return filter.empty() ||
             std::find(filter.begin(), filter.end(), value) != filter.end();
    };
    for (int s : {3, 5, 7, 9}) {
      if (!wanted(stacks, s)) continue;
      for (int h : {4, 6}) {
        if (!wanted(heights, h)) continue;
        for (int f : {50, 70}) {
          if (!wanted(fills, f)) continue;
          for (const SuiteEntry& entry : generate_cell(s, h, f, seed, per_cell)) {
            if (!wanted(priorities, entry.config.priorities)) continue;
            save_instance(entry.instance,
                          (fs::path(out_dir) / entry.file_name()).string());
            files.push_back(entry.file_name());
          }
        }
      }
    }
  }
  manifest["files"] = files;
  std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
  out << manifest.dump(2) << "\n";
  std::cout << "wrote " << files.size() << " instances to " << out_dir << "\n";
  return 0;
}

int cmd_solve(const std::string& path, double time_limit,
              const std::string& mode_override, bool derive,
              const std::string& stats_out) {
  Instance instance = load_with_mode(path, mode_override, derive);
  SolverConfig config;
  config.time_limit_seconds = time_limit;
  SolveOutcome outcome = solve(instance, config);
  const ReportRow row =
      make_report_row(fs::path(path).stem().string(), instance, outcome);
  if (!stats_out.empty()) append_stats_row(stats_out, row);
  if (outcome.timed_out) {
    std::cout << "timed out after " << outcome.stats.total_time << "s ("
              << outcome.stats.nodes_solved << " nodes, "
              << outcome.stats.trees_solved << " trees)\n";
    return 2;
  }
  print_moves(*outcome.solution);
  std::cout << "root LP " << outcome.solution->root_lp_value << ", gap "
            << outcome.stats.integrality_gap << ", " << outcome.stats.nodes_solved
            << " nodes, " << outcome.stats.total_time << "s\n";
  return 0;
}

int cmd_bench(const std::string& dir, int workers, double time_limit,
              const std::string& report_out) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    if (entry.path().filename() == "manifest.json") continue;
    paths.push_back(entry.path().string());
  }
  std::sort(paths.begin(), paths.end());

  std::vector<ReportRow> rows(paths.size());
  std::atomic<size_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= paths.size()) return;
      ReportRow& row = rows[i];
      row.instance_id = fs::path(paths[i]).stem().string();
      try {
        Instance instance = load_instance(paths[i]);
        SolverConfig config;
        config.time_limit_seconds = time_limit;
        SolveOutcome outcome = solve(instance, config);
        row = make_report_row(row.instance_id, instance, outcome);
      } catch (const std::exception& e) {
        std::cerr << paths[i] << ": " << e.what() << "\n";
      }
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < std::max(1, workers); ++w) threads.emplace_back(work);
  for (auto& thread : threads) thread.join();

  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return a.instance_id < b.instance_id;
  });
  write_report(rows, report_out);
  fs::path summary_path = report_out;
  summary_path.replace_filename(summary_path.stem().string() + "_summary.csv");
  write_aggregates(aggregate_report(rows), summary_path.string());

  int solved = 0;
  for (const auto& row : rows) solved += row.solved;
  std::cout << solved << "/" << rows.size() << " solved; report " << report_out
            << ", summary " << summary_path.string() << "\n";
  return 0;
}

int cmd_oracle(const std::string& path, int max_depth, bool derive) {
  Instance instance = load_with_mode(path, "", derive);
  auto solution = solve_exact(instance, max_depth);
  if (!solution) {
    std::cout << "no solution within " << max_depth << " moves\n";
    return 1;
  }
  print_moves(*solution);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact intra-bay container premarshalling solver"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate instance files");
  std::vector<int> gen_p, gen_s, gen_h, gen_f;
  std::uint64_t gen_seed = default_seed();
  int per_cell = 20, gen_count = 1;
  std::string gen_out = "instances";
  bool gen_free = false;
  gen->add_option("--priorities,-p", gen_p, "priority counts (2,3,6)");
  gen->add_option("--stacks,-s", gen_s, "stack counts (3,5,7,9)");
  gen->add_option("--height,-H", gen_h, "stack heights (4,6)");
  gen->add_option("--fill,-f", gen_f, "fill percentages (50,70)");
  gen->add_option("--seed", gen_seed, "RNG seed (default from PREMARSHAL_SEED)");
  gen->add_option("--per-cell", per_cell, "accepted draws per parameter cell");
  gen->add_option("--count", gen_count, "instances to draw in --free mode");
  gen->add_option("--out,-o", gen_out, "output directory");
  gen->add_flag("--free", gen_free, "lift the parameter table restriction");

  auto* solve_cmd = app.add_subcommand("solve", "solve one instance exactly");
  std::string solve_path, solve_mode, stats_out;
  double solve_limit = 3600.0;
  bool solve_derive = false;
  solve_cmd->add_option("instance", solve_path, "instance file")->required();
  solve_cmd->add_option("--time-limit", solve_limit, "seconds (default 3600)");
  solve_cmd->add_option("--mode", solve_mode, "priority|configuration override")
      ->check(CLI::IsMember({"", "priority", "configuration"}));
  solve_cmd->add_flag("--derive-target", solve_derive,
                      "derive a sorted configuration target");
  solve_cmd->add_option("--stats-out", stats_out, "append a report row here");

  auto* bench = app.add_subcommand("bench", "solve a directory of instances");
  std::string bench_dir, bench_out = "report.csv";
  int bench_workers = 1;
  double bench_limit = 3600.0;
  bench->add_option("dir", bench_dir, "instance directory")->required();
  bench->add_option("--workers,-j", bench_workers, "parallel workers");
  bench->add_option("--time-limit", bench_limit, "seconds per instance");
  bench->add_option("--out,-o", bench_out, "report CSV path");

  auto* oracle_cmd =
      app.add_subcommand("oracle", "brute-force exact solver (small instances)");
  std::string oracle_path;
  int oracle_depth = 30;
  bool oracle_derive = false;
  oracle_cmd->add_option("instance", oracle_path, "instance file")->required();
  oracle_cmd->add_option("--max-depth", oracle_depth, "move budget");
  oracle_cmd->add_flag("--derive-target", oracle_derive,
                       "derive a sorted configuration target");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_p, gen_s, gen_h, gen_f, gen_seed, per_cell, gen_out,
                     gen_free, gen_count);
    if (solve_cmd->parsed())
      return cmd_solve(solve_path, solve_limit, solve_mode, solve_derive, stats_out);
    if (bench->parsed())
      return cmd_bench(bench_dir, bench_workers, bench_limit, bench_out);
    if (oracle_cmd->parsed()) return cmd_oracle(oracle_path, oracle_depth, oracle_derive);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
