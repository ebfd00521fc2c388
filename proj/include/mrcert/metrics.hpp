#pragma once
// Per-iteration accounting for planner runs and the difficulty-scaling model:
// recorded standard-check time is multiplied by a factor m while all other
// time is held fixed.

#include <cstddef>
#include <span>
#include <vector>

namespace mrcert {

struct TrialRecord {
  std::size_t iteration = 0;  ///< 1-based
  double check_fraction = 0.0;
  double cum_check_fraction = 0.0;
  std::size_t cum_nodes = 0;
  bool accepted = false;
  double t_total = 0.0;  ///< seconds since the run started
  double t_cc = 0.0;     ///< cumulative seconds inside standard checks
};

struct WindowMean {
  std::size_t first_iteration;
  std::size_t last_iteration;
  double mean;
};

/// Means of check_fraction over consecutive non-overlapping windows; the last
/// window may be shorter. Throws ContractViolation on an empty stream or window 0.
[[nodiscard]] std::vector<WindowMean> check_proportion(std::span<const TrialRecord> records,
                                                       std::size_t window);

/// (t_total - t_cc) + m * t_cc, evaluated as t_total + (m - 1) * t_cc so that
/// m = 1 returns t_total exactly. Requires m >= 1.
[[nodiscard]] double scaled_runtime(const TrialRecord& rec, double m);

/// scaled_runtime(strategy) / scaled_runtime(baseline). Requires equal
/// iteration counts and a non-zero scaled baseline.
[[nodiscard]] double relative_runtime(const TrialRecord& strategy, const TrialRecord& baseline,
                                      double m);

/// 1, 2, 5, 10, 20, 50, ... up to `iterations`, always ending at `iterations`.
[[nodiscard]] std::vector<std::size_t> log_buckets(std::size_t iterations);

/// Mean check_fraction over the iterations in each bucket (previous bucket, bucket].
/// Records must be the complete stream with iteration i at index i - 1.
[[nodiscard]] std::vector<double> bucket_proportions(std::span<const TrialRecord> records,
                                                     std::span<const std::size_t> buckets);

/// relative_runtime at each bucket's cumulative record, for paired streams.
[[nodiscard]] std::vector<double> bucket_relative_runtimes(std::span<const TrialRecord> strategy,
                                                           std::span<const TrialRecord> baseline,
                                                           std::span<const std::size_t> buckets,
                                                           double m);

struct BucketStat {
  std::size_t bucket_iter;
  double mean;
  double stddev;  ///< sample standard deviation; 0 for a single trial
};

struct MeanStd {
  double mean;
  double stddev;
};

/// Order-independent mean and sample standard deviation: values are summed in
/// sorted order, so permuting the input never changes a bit of the output.
[[nodiscard]] MeanStd mean_std(std::vector<double> values);

/// Per-bucket statistics over trials; per_trial[t][b] is trial t's value at buckets[b].
[[nodiscard]] std::vector<BucketStat> aggregate(const std::vector<std::vector<double>>& per_trial,
                                                std::span<const std::size_t> buckets);

}  // namespace mrcert
