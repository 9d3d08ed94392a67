#ifndef SLGH_HARNESS_RUNNER_HPP
#define SLGH_HARNESS_RUNNER_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "slgh/harness/plan.hpp"
#include "slgh/harness/trace_io.hpp"
#include "slgh/optimizers.hpp"

namespace slgh::harness {

/// One (run, seed) pair of a plan.
struct Job {
  const PlannedRun* run = nullptr;
  std::uint64_t seed = 0;
};

struct JobResult {
  SummaryRow row;
  std::optional<RunTrace> trace;
};

inline std::string trace_file_name(const std::string& run_id, std::uint64_t seed) {
  return run_id + "__seed" + std::to_string(seed) + ".csv";
}

/// Jobs in plan order, seeds in listed order.
inline std::vector<Job> expand_jobs(const ExperimentPlan& plan) {
  std::vector<Job> jobs;
  for (const auto& r : plan.runs) {
    for (auto s : r.seeds) jobs.push_back(Job{&r, s});
  }
  return jobs;
}

/// Runs one job. Failures become a failed row; nothing is thrown.
inline JobResult execute_job(const Job& job, bool keep_trace) {
  const PlannedRun& run = *job.run;
  JobResult res;
  SummaryRow& row = res.row;
  row.run_id = run.id;
  row.algorithm = std::string(to_string(run.config.algorithm));
  row.objective = run.objective.name;
  row.seed = job.seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Objective obj = build_objective(run.objective);
    row.objective = obj.name;
    RunConfig cfg = run.config;
    cfg.seed = job.seed;
    RunTrace trace = slgh::run(obj, cfg);
    const auto& recs = trace.records;
    row.final_x = recs.back().x;
    row.final_f = recs.back().f_true;
    const auto best = std::min_element(recs.begin(), recs.end(),
                                       [](const auto& a, const auto& b) { return a.f_true < b.f_true; });
    row.argmin_x = best->x;
    row.argmin_f = best->f_true;
    if (run.threshold) {
      for (const auto& r : recs) {
        if (r.f_true < *run.threshold) {
          row.iters_to_threshold = r.k;
          break;
        }
      }
    }
    if (keep_trace) res.trace = std::move(trace);
  } catch (const DivergenceError& e) {
    row.ok = false;
    row.message = std::string("diverged at k=") + std::to_string(e.iteration()) + ": " + e.what();
  } catch (const std::exception& e) {
    row.ok = false;
    row.message = e.what();
  }
  row.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

struct RunOptions {
  std::optional<std::string> output_dir;  // overrides plan.output_dir; empty string = no files
  std::optional<int> parallelism;         // overrides plan.parallelism
  bool keep_traces = false;               // return traces in memory
};

struct ExperimentResult {
  std::vector<SummaryRow> rows;
  std::vector<std::optional<RunTrace>> traces;  // aligned with rows when keep_traces
};

/// Executes every job once on a pool of worker threads. Rows come back in
/// plan order regardless of scheduling. When an output directory is set,
/// each successful job writes `<id>__seed<k>.csv` and the plan writes
/// summary.csv.
inline ExperimentResult run_experiment(const ExperimentPlan& plan, const RunOptions& opts = {}) {
  const std::string out_dir = opts.output_dir.value_or(plan.output_dir);
  const int workers_req = opts.parallelism.value_or(plan.parallelism);
  if (workers_req <= 0) throw ConfigError("parallelism must be a positive integer");
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError(out_dir + ": cannot create output directory: " + ec.message());
  }

  const std::vector<Job> jobs = expand_jobs(plan);
  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  const bool need_trace = opts.keep_traces || !out_dir.empty();

  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      JobResult r = execute_job(jobs[i], need_trace);
      if (r.trace && !out_dir.empty()) {
        const auto path = std::filesystem::path(out_dir) / trace_file_name(r.row.run_id, r.row.seed);
        try {
          write_trace_csv(*r.trace, path.string());
        } catch (const std::exception& e) {
          r.row.ok = false;
          r.row.message = e.what();
        }
      }
      if (!opts.keep_traces) r.trace.reset();
      results[i] = std::move(r);
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(workers_req), std::max<std::size_t>(jobs.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  ExperimentResult out;
  out.rows.reserve(results.size());
  for (auto& r : results) {
    out.rows.push_back(std::move(r.row));
    out.traces.push_back(std::move(r.trace));
  }
  if (!out_dir.empty()) {
    write_summary_csv(out.rows, (std::filesystem::path(out_dir) / "summary.csv").string());
  }
  return out;
}

}  // namespace slgh::harness

#endif  // SLGH_HARNESS_RUNNER_HPP
