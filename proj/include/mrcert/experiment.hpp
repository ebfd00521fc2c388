#pragma once
// Experiment matrix driver behind the mrcert_bench CLI: runs every
// (planner, strategy, team size, trial) cell, writes per-trial CSV, and
// aggregates it into figure-ready CSV.
//
// Per-trial CSV (trials.csv):
//   planner,strategy,robots,trial,iteration,check_fraction,cum_check_fraction,
//   accepted,t_total_s,t_cc_s
// Aggregated check proportion (proportion.csv):
//   planner,strategy,robots,bucket_iter,mean_prop,std_prop
// Aggregated relative runtime vs. the "none" strategy (relative_runtime.csv):
//   planner,strategy,robots,difficulty,bucket_iter,mean_rel_runtime,std_rel_runtime
// Crossover report (crossover.csv):
//   planner,strategy,robots,difficulty,crossover_iter
// Optional accepted-node dump (nodes.csv):
//   planner,strategy,robots,trial,node,parent,config

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "mrcert/certificates.hpp"
#include "mrcert/metrics.hpp"
#include "mrcert/planners.hpp"
#include "mrcert/workspace.hpp"

namespace mrcert {

inline const std::vector<double> kDefaultDifficulties{1.0, 1e2, 1e4};

struct ExperimentSpec {
  std::vector<PlannerKind> planners{PlannerKind::Rrt, PlannerKind::RrtStar};
  std::vector<Strategy> strategies{Strategy::None, Strategy::Basic, Strategy::Partial,
                                   Strategy::Shared};
  std::vector<std::size_t> team_sizes{1, 2, 3, 4, 5};
  std::size_t iterations = 10'000;
  std::size_t trials = 5;
  std::vector<double> difficulties = kDefaultDifficulties;
  std::uint64_t base_seed = 1;
  std::size_t cutoff = kNoCutoff;
  std::size_t jobs = 1;
  bool dump_nodes = false;

  /// Throws ContractViolation when a selection is empty or out of range.
  void validate(const Workspace& w) const;
};

/// Identifies one trial of one matrix cell.
struct TrialKey {
  PlannerKind planner;
  Strategy strategy;
  std::size_t robots;
  std::size_t trial;
  friend auto operator<=>(const TrialKey&, const TrialKey&) = default;
};

using TrialTable = std::map<TrialKey, std::vector<TrialRecord>>;

struct ExperimentResult {
  TrialTable trials;
  /// Accepted-node configs and parents per trial, only when dump_nodes is set.
  std::map<TrialKey, std::pair<std::vector<double>, std::vector<std::int64_t>>> nodes;
};

/// Runs the full cross product; trial t of every cell uses seed base_seed + t.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentSpec& spec, const Workspace& w);

void write_trials_csv(const TrialTable& table, std::ostream& out);
/// Throws ParseError on schema mismatch, malformed rows, or duplicate rows.
void read_trials_csv(std::istream& in, TrialTable& table, const std::string& source);

void write_nodes_csv(const ExperimentResult& result, std::ostream& out);

struct Figures {
  std::string proportion_csv;
  std::string relative_runtime_csv;
  std::string crossover_csv;
};

/// Aggregates a trial table into the figure CSVs. Output depends only on the
/// table contents, not on how rows were ordered in any input file.
[[nodiscard]] Figures make_figures(const TrialTable& table, const std::vector<double>& difficulties);

/// `run` subcommand: executes the matrix and writes trials.csv plus figures into out_dir.
void cmd_run(const ExperimentSpec& spec, const Workspace& w, const std::filesystem::path& out_dir);
/// `figures` subcommand: reads every trials*.csv in in_dir.
void cmd_figures(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                 const std::vector<double>& difficulties);
/// `gen` subcommand.
void cmd_gen_workspace(const GenSpec& spec, const std::filesystem::path& out_path);

}  // namespace mrcert
