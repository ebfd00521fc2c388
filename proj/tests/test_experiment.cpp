#include <algorithm>
#include <array>
#include <charconv>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mrcert/errors.hpp"
#include "mrcert/experiment.hpp"

using namespace mrcert;

namespace {

const Workspace& ws() {
  static const Workspace w = generate(GenSpec{});
  return w;
}

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.planners = {PlannerKind::Rrt};
  s.team_sizes = {2};
  s.iterations = 60;
  s.trials = 2;
  return s;
}

std::string to_csv(const TrialTable& t) {
  std::ostringstream out;
  write_trials_csv(t, out);
  return out.str();
}

TrialTable from_csv(const std::string& text) {
  std::istringstream in(text);
  TrialTable t;
  read_trials_csv(in, t, "mem");
  return t;
}

// Drops the two timing columns.
std::string without_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    std::size_t cut = line.size();
    for (int i = 0; i < 2; ++i) cut = line.rfind(',', cut - 1);
    out += line.substr(0, cut) + "\n";
  }
  return out;
}

std::string parse_message(const std::string& text) {
  try {
    (void)from_csv(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("one cell, one trial, ten iterations gives ten rows") {
  ExperimentSpec s = small_spec();
  s.strategies = {Strategy::Shared};
  s.trials = 1;
  s.iterations = 10;
  const auto res = run_experiment(s, ws());
  REQUIRE(res.trials.size() == 1);
  const std::string csv = to_csv(res.trials);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 11);
}

TEST_CASE("reruns are identical apart from timing, with and without threads") {
  ExperimentSpec s = small_spec();
  const std::string a = without_timing(to_csv(run_experiment(s, ws()).trials));
  s.jobs = 3;
  const std::string b = without_timing(to_csv(run_experiment(s, ws()).trials));
  CHECK(a == b);
}

TEST_CASE("strategies share sample streams per trial") {
  ExperimentSpec s = small_spec();
  s.dump_nodes = true;
  const auto res = run_experiment(s, ws());
  for (std::size_t t = 0; t < s.trials; ++t) {
    const auto& base = res.nodes.at({PlannerKind::Rrt, Strategy::None, 2, t});
    for (Strategy st : {Strategy::Basic, Strategy::Partial, Strategy::Shared}) {
      CHECK(res.nodes.at({PlannerKind::Rrt, st, 2, t}) == base);
    }
  }
  const auto& t0 = res.nodes.at({PlannerKind::Rrt, Strategy::None, 2, 0});
  const auto& t1 = res.nodes.at({PlannerKind::Rrt, Strategy::None, 2, 1});
  CHECK(t0.first != t1.first);
}

TEST_CASE("trial CSV round-trips") {
  const auto res = run_experiment(small_spec(), ws());
  const std::string csv = to_csv(res.trials);
  const TrialTable back = from_csv(csv);
  REQUIRE(back.size() == res.trials.size());
  for (const auto& [k, recs] : res.trials) {
    const auto& other = back.at(k);
    REQUIRE(other.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
      CHECK(other[i].iteration == recs[i].iteration);
      CHECK(other[i].check_fraction == recs[i].check_fraction);
      CHECK(other[i].cum_check_fraction == recs[i].cum_check_fraction);
      CHECK(other[i].cum_nodes == recs[i].cum_nodes);
      CHECK(other[i].accepted == recs[i].accepted);
      CHECK(other[i].t_total == recs[i].t_total);
      CHECK(other[i].t_cc == recs[i].t_cc);
    }
  }
  CHECK(to_csv(back) == csv);
}

TEST_CASE("malformed trial CSV is rejected with a location") {
  const std::string header =
      "planner,strategy,robots,trial,iteration,check_fraction,cum_check_fraction,accepted,"
      "t_total_s,t_cc_s\n";
  CHECK(parse_message("a,b\n").find("schema mismatch") != std::string::npos);
  CHECK(parse_message(header + "rrt,none,2,0,1,1\n").find("line 2") != std::string::npos);
  CHECK(parse_message(header + "rrt,magic,2,0,1,1,1,1,0.1,0.1\n").find("magic") !=
        std::string::npos);
  CHECK(parse_message(header + "rrt,none,2,0,1,x,1,1,0.1,0.1\n").find("'x'") != std::string::npos);
  const std::string row = "rrt,none,2,0,1,1,1,1,0.1,0.1\n";
  CHECK(parse_message(header + row + row).find("duplicate") != std::string::npos);
}

TEST_CASE("figures ignore input row order") {
  const auto res = run_experiment(small_spec(), ws());
  const std::string csv = to_csv(res.trials);
  const Figures ref = make_figures(res.trials, kDefaultDifficulties);

  std::vector<std::string> rows;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  const std::string header = line;
  while (std::getline(in, line)) rows.push_back(line);
  std::mt19937_64 rng(81);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::string shuffled = header + "\n";
  for (const auto& r : rows) shuffled += r + "\n";

  const Figures again = make_figures(from_csv(shuffled), kDefaultDifficulties);
  CHECK(again.proportion_csv == ref.proportion_csv);
  CHECK(again.relative_runtime_csv == ref.relative_runtime_csv);
  CHECK(again.crossover_csv == ref.crossover_csv);
}

TEST_CASE("figure contents") {
  ExperimentSpec s = small_spec();
  s.trials = 1;
  const auto res = run_experiment(s, ws());
  const Figures f = make_figures(res.trials, {1.0});

  // Baseline proportion rows are all exactly 1 with zero spread.
  std::istringstream prop(f.proportion_csv);
  std::string line;
  int baseline_rows = 0;
  while (std::getline(prop, line)) {
    if (line.starts_with("rrt,none,")) {
      ++baseline_rows;
      CHECK(line.ends_with(",1,0"));
    }
  }
  CHECK(baseline_rows == static_cast<int>(log_buckets(60).size()));

  // Single trial: the aggregated mean is that trial's bucket value.
  const auto& shared = res.trials.at({PlannerKind::Rrt, Strategy::Shared, 2, 0});
  const auto buckets = log_buckets(60);
  const auto p = bucket_proportions(shared, buckets);
  std::ostringstream expect;
  expect << "rrt,shared,2," << buckets.back() << ",";
  std::array<char, 32> buf{};
  const auto end = std::to_chars(buf.data(), buf.data() + buf.size(), p.back()).ptr;
  expect << std::string(buf.data(), end) << ",0";
  CHECK(f.proportion_csv.find(expect.str()) != std::string::npos);

  // The baseline compared with itself is exactly 1.
  CHECK(f.relative_runtime_csv.find("rrt,none,2,1,60,1,0") != std::string::npos);
  CHECK(f.crossover_csv.find("rrt,basic,2,1,") != std::string::npos);
  CHECK(f.crossover_csv.find("rrt,none,") == std::string::npos);
}

TEST_CASE("invalid experiment specs") {
  ExperimentSpec s = small_spec();
  s.team_sizes = {6};
  CHECK_THROWS_AS(s.validate(ws()), ContractViolation);
  s = small_spec();
  s.strategies.clear();
  CHECK_THROWS_AS(s.validate(ws()), ContractViolation);
  s = small_spec();
  s.difficulties = {0.5};
  CHECK_THROWS_AS(s.validate(ws()), ContractViolation);
  s = small_spec();
  s.iterations = 0;
  CHECK_THROWS_AS(s.validate(ws()), ContractViolation);
}

}  // TEST_SUITE
