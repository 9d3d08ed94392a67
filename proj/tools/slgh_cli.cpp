// slgh command-line front end.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "slgh/slgh.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

#ifndef SLGH_TABLES_DIR
#define SLGH_TABLES_DIR "tables"
#endif

std::string tables_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("SLGH_TABLES_DIR")) return env;
  return SLGH_TABLES_DIR;
}

int execute(const slgh::harness::ExperimentPlan& plan, const std::string& out, std::optional<int> par) {
  using namespace slgh::harness;
  RunOptions opts;
  opts.output_dir = out.empty() ? (plan.output_dir.empty() ? std::string("out") : plan.output_dir) : out;
  opts.parallelism = par;
  const auto res = run_experiment(plan, opts);
  int failed = 0;
  for (const auto& r : res.rows) {
    if (r.ok) {
      std::printf("%-20s seed %-3llu final f = %.6g at (%s)\n", r.run_id.c_str(),
                  static_cast<unsigned long long>(r.seed), r.final_f, join_point(r.final_x, ',').c_str());
    } else {
      ++failed;
      std::printf("%-20s seed %-3llu FAILED: %s\n", r.run_id.c_str(),
                  static_cast<unsigned long long>(r.seed), r.message.c_str());
    }
  }
  std::printf("wrote %s/summary.csv (%zu rows, %d failed)\n", opts.output_dir->c_str(), res.rows.size(),
              failed);
  return failed ? kRuntime : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-loop Gaussian homotopy optimizers"};
  app.require_subcommand(1);

  std::string plan_path, out_dir, preset_name, tables_flag;
  int parallel = 0;

  auto* run_cmd = app.add_subcommand("run", "Execute a plan file");
  run_cmd->add_option("plan", plan_path, "plan JSON")->required();
  run_cmd->add_option("--out", out_dir, "output directory");
  run_cmd->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);

  auto* preset_cmd = app.add_subcommand("preset", "Execute a bundled preset");
  preset_cmd->add_option("name", preset_name, "table3|table4|table5|table6|error-demo")
      ->required()
      ->check(CLI::IsMember({"table3", "table4", "table5", "table6", "error-demo"}));
  preset_cmd->add_option("--out", out_dir, "output directory");
  preset_cmd->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);
  preset_cmd->add_option("--tables", tables_flag, "preset directory");

  auto* validate_cmd = app.add_subcommand("validate", "Check a plan file without running it");
  validate_cmd->add_option("plan", plan_path, "plan JSON")->required();

  app.add_subcommand("list-objectives", "Print registered objective names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kValidation;
  }

  const std::optional<int> par = parallel > 0 ? std::optional<int>(parallel) : std::nullopt;
  try {
    if (app.got_subcommand("list-objectives")) {
      for (const auto& name : slgh::registered_objectives()) std::cout << name << '\n';
      return kOk;
    }
    std::string path = plan_path;
    if (*preset_cmd) {
      path = (std::filesystem::path(tables_dir(tables_flag)) /
              slgh::harness::preset_files().at(preset_name))
                 .string();
      if (out_dir.empty()) out_dir = "out/" + preset_name;
    }
    slgh::harness::ExperimentPlan plan;
    try {
      plan = slgh::harness::load_plan(path);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kValidation;
    }
    if (*validate_cmd) {
      std::size_t jobs = 0;
      for (const auto& r : plan.runs) jobs += r.seeds.size();
      std::cout << path << ": ok (" << plan.runs.size() << " runs, " << jobs << " jobs)\n";
      return kOk;
    }
    return execute(plan, out_dir, par);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
