#include "mrcert/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "mrcert/errors.hpp"

namespace mrcert {
namespace {

constexpr std::string_view kTrialsHeader =
    "planner,strategy,robots,trial,iteration,check_fraction,cum_check_fraction,accepted,t_total_s,"
    "t_cc_s";

std::string num(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_field(std::string_view field, const std::string& where) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ParseError(where + ": cannot parse '" + std::string(field) + "'");
  }
  return value;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct CellKey {
  PlannerKind planner;
  Strategy strategy;
  std::size_t robots;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

using Cells = std::map<CellKey, std::map<std::size_t, const std::vector<TrialRecord>*>>;

Cells group_cells(const TrialTable& table) {
  Cells cells;
  for (const auto& [key, records] : table) {
    if (records.empty()) throw ParseError("trial table: empty trial");
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].iteration != i + 1) {
        throw ParseError("trial table: iterations of " + std::string(to_string(key.planner)) + "/" +
                         std::string(to_string(key.strategy)) + "/R=" +
                         std::to_string(key.robots) + " trial " + std::to_string(key.trial) +
                         " are not 1..N");
      }
    }
    cells[{key.planner, key.strategy, key.robots}][key.trial] = &records;
  }
  for (const auto& [cell, trials] : cells) {
    const std::size_t n = trials.begin()->second->size();
    for (const auto& [t, recs] : trials) {
      if (recs->size() != n) throw ParseError("trial table: trials of one cell differ in length");
    }
  }
  return cells;
}

}  // namespace

void ExperimentSpec::validate(const Workspace& w) const {
  if (planners.empty() || strategies.empty() || team_sizes.empty() || difficulties.empty()) {
    throw ContractViolation("experiment: empty selection");
  }
  if (iterations < 1 || trials < 1) throw ContractViolation("experiment: need iterations, trials >= 1");
  for (std::size_t r : team_sizes) {
    if (r < 1 || r > w.max_robots()) {
      throw ContractViolation("experiment: team size " + std::to_string(r) +
                              " exceeds the workspace's " + std::to_string(w.max_robots()) +
                              " start/goal pairs");
    }
  }
  for (double m : difficulties) {
    if (!(m >= 1.0)) throw ContractViolation("experiment: difficulty multipliers must be >= 1");
  }
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const Workspace& w) {
  spec.validate(w);
  std::vector<TrialKey> jobs;
  for (PlannerKind p : spec.planners) {
    for (Strategy s : spec.strategies) {
      for (std::size_t r : spec.team_sizes) {
        for (std::size_t t = 0; t < spec.trials; ++t) jobs.push_back({p, s, r, t});
      }
    }
  }
  std::vector<std::vector<TrialRecord>> records(jobs.size());
  std::vector<std::pair<std::vector<double>, std::vector<std::int64_t>>> nodes(jobs.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const TrialKey& k = jobs[j];
        const PlannerParams params =
            PlannerParams::defaults(w, k.robots, spec.iterations, spec.base_seed + k.trial);
        RunResult res = run(k.planner, w, k.robots, params, k.strategy, spec.cutoff);
        records[j] = std::move(res.records);
        if (spec.dump_nodes) nodes[j] = {res.planner->configs(), res.planner->parents()};
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(spec.jobs, 1, jobs.size());
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult out;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    out.trials.emplace(jobs[j], std::move(records[j]));
    if (spec.dump_nodes) out.nodes.emplace(jobs[j], std::move(nodes[j]));
  }
  return out;
}

void write_trials_csv(const TrialTable& table, std::ostream& out) {
  out << kTrialsHeader << '\n';
  for (const auto& [k, records] : table) {
    const std::string prefix = std::string(to_string(k.planner)) + "," +
                               std::string(to_string(k.strategy)) + "," +
                               std::to_string(k.robots) + "," + std::to_string(k.trial) + ",";
    for (const TrialRecord& r : records) {
      out << prefix << r.iteration << ',' << num(r.check_fraction) << ','
          << num(r.cum_check_fraction) << ',' << (r.accepted ? 1 : 0) << ',' << num(r.t_total)
          << ',' << num(r.t_cc) << '\n';
    }
  }
}

void read_trials_csv(std::istream& in, TrialTable& table, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != kTrialsHeader) {
    throw ParseError(source + ": line 1: schema mismatch, expected header '" +
                     std::string(kTrialsHeader) + "'");
  }
  std::set<std::pair<TrialKey, std::size_t>> seen;
  std::map<TrialKey, std::vector<TrialRecord>> fresh;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = source + ": line " + std::to_string(lineno);
    const auto f = split(line, ',');
    if (f.size() != 10) throw ParseError(where + ": expected 10 fields, got " + std::to_string(f.size()));
    TrialKey key{};
    try {
      key = {parse_planner(f[0]), parse_strategy(f[1]), parse_field<std::size_t>(f[2], where),
             parse_field<std::size_t>(f[3], where)};
    } catch (const ContractViolation& e) {
      throw ParseError(where + ": " + e.what());
    }
    TrialRecord r;
    r.iteration = parse_field<std::size_t>(f[4], where);
    r.check_fraction = parse_field<double>(f[5], where);
    r.cum_check_fraction = parse_field<double>(f[6], where);
    const int accepted = parse_field<int>(f[7], where);
    if (accepted != 0 && accepted != 1) throw ParseError(where + ": accepted must be 0 or 1");
    r.accepted = accepted == 1;
    r.t_total = parse_field<double>(f[8], where);
    r.t_cc = parse_field<double>(f[9], where);
    if (!seen.insert({key, r.iteration}).second || table.contains(key)) {
      throw ParseError(where + ": duplicate row for this trial and iteration");
    }
    fresh[key].push_back(r);
  }
  for (auto& [key, recs] : fresh) {
    std::sort(recs.begin(), recs.end(),
              [](const TrialRecord& a, const TrialRecord& b) { return a.iteration < b.iteration; });
    std::size_t nodes = 0;
    for (TrialRecord& r : recs) {
      // cum_nodes is not part of the CSV schema; rebuild it from acceptances.
      nodes += r.accepted ? 1 : 0;
      r.cum_nodes = nodes + 1;
    }
    table.emplace(key, std::move(recs));
  }
}

void write_nodes_csv(const ExperimentResult& result, std::ostream& out) {
  out << "planner,strategy,robots,trial,node,parent,config\n";
  for (const auto& [k, data] : result.nodes) {
    const auto& [configs, parents] = data;
    const std::size_t dim = k.robots * kRobotDim;
    for (std::size_t n = 0; n < parents.size(); ++n) {
      out << to_string(k.planner) << ',' << to_string(k.strategy) << ',' << k.robots << ','
          << k.trial << ',' << n << ',' << parents[n] << ',';
      for (std::size_t c = 0; c < dim; ++c) out << (c == 0 ? "" : " ") << num(configs[n * dim + c]);
      out << '\n';
    }
  }
}

Figures make_figures(const TrialTable& table, const std::vector<double>& difficulties) {
  const Cells cells = group_cells(table);
  std::ostringstream prop;
  std::ostringstream rel;
  std::ostringstream cross;
  prop << "planner,strategy,robots,bucket_iter,mean_prop,std_prop\n";
  rel << "planner,strategy,robots,difficulty,bucket_iter,mean_rel_runtime,std_rel_runtime\n";
  cross << "planner,strategy,robots,difficulty,crossover_iter\n";

  for (const auto& [cell, trials] : cells) {
    const std::string prefix = std::string(to_string(cell.planner)) + "," +
                               std::string(to_string(cell.strategy)) + "," +
                               std::to_string(cell.robots) + ",";
    const std::size_t n = trials.begin()->second->size();
    const auto buckets = log_buckets(n);

    std::vector<std::vector<double>> props;
    for (const auto& [t, recs] : trials) props.push_back(bucket_proportions(*recs, buckets));
    for (const BucketStat& b : aggregate(props, buckets)) {
      prop << prefix << b.bucket_iter << ',' << num(b.mean) << ',' << num(b.stddev) << '\n';
    }

    const auto base = cells.find({cell.planner, Strategy::None, cell.robots});
    if (base == cells.end()) continue;
    for (double m : difficulties) {
      std::vector<std::vector<double>> ratios;
      for (const auto& [t, recs] : trials) {
        const auto paired = base->second.find(t);
        if (paired == base->second.end()) {
          throw ParseError("figures: trial " + std::to_string(t) + " of " + prefix +
                           " has no baseline trial with the same seed");
        }
        if (paired->second->size() != n) throw ParseError("figures: baseline length mismatch");
        ratios.push_back(bucket_relative_runtimes(*recs, *paired->second, buckets, m));
      }
      const auto stats = aggregate(ratios, buckets);
      bool was_below = false;
      std::string crossover = "none";
      for (const BucketStat& b : stats) {
        rel << prefix << num(m) << ',' << b.bucket_iter << ',' << num(b.mean) << ','
            << num(b.stddev) << '\n';
        if (b.mean < 1.0) {
          was_below = true;
        } else if (was_below && crossover == "none") {
          crossover = std::to_string(b.bucket_iter);
        }
      }
      if (cell.strategy != Strategy::None) cross << prefix << num(m) << ',' << crossover << '\n';
    }
  }
  return {prop.str(), rel.str(), cross.str()};
}

void cmd_run(const ExperimentSpec& spec, const Workspace& w, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const ExperimentResult result = run_experiment(spec, w);
  std::ostringstream trials;
  write_trials_csv(result.trials, trials);
  write_file(out_dir / "trials.csv", trials.str());
  write_file(out_dir / "workspace.json", write_workspace(w));
  if (spec.dump_nodes) {
    std::ostringstream nodes;
    write_nodes_csv(result, nodes);
    write_file(out_dir / "nodes.csv", nodes.str());
  }
  const Figures figs = make_figures(result.trials, spec.difficulties);
  write_file(out_dir / "proportion.csv", figs.proportion_csv);
  write_file(out_dir / "relative_runtime.csv", figs.relative_runtime_csv);
  write_file(out_dir / "crossover.csv", figs.crossover_csv);
}

void cmd_figures(const std::filesystem::path& in_dir, const std::filesystem::path& out_dir,
                 const std::vector<double>& difficulties) {
  std::vector<std::filesystem::path> inputs;
  for (const auto& entry : std::filesystem::directory_iterator(in_dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("trials") && name.ends_with(".csv")) {
      inputs.push_back(entry.path());
    }
  }
  if (inputs.empty()) throw ParseError("figures: no trials*.csv files in '" + in_dir.string() + "'");
  std::sort(inputs.begin(), inputs.end());
  TrialTable table;
  for (const auto& path : inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    read_trials_csv(in, table, path.filename().string());
  }
  std::filesystem::create_directories(out_dir);
  const Figures figs = make_figures(table, difficulties);
  write_file(out_dir / "proportion.csv", figs.proportion_csv);
  write_file(out_dir / "relative_runtime.csv", figs.relative_runtime_csv);
  write_file(out_dir / "crossover.csv", figs.crossover_csv);
}

void cmd_gen_workspace(const GenSpec& spec, const std::filesystem::path& out_path) {
  if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
  save_workspace(generate(spec), out_path.string());
}

}  // namespace mrcert
