#include "mrcert/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "mrcert/errors.hpp"

namespace mrcert {

std::vector<WindowMean> check_proportion(std::span<const TrialRecord> records, std::size_t window) {
  if (records.empty()) throw ContractViolation("check_proportion: empty record stream");
  if (window == 0) throw ContractViolation("check_proportion: window must be positive");
  std::vector<WindowMean> out;
  for (std::size_t start = 0; start < records.size(); start += window) {
    const std::size_t end = std::min(records.size(), start + window);
    double sum = 0.0;
    for (std::size_t i = start; i < end; ++i) sum += records[i].check_fraction;
    out.push_back({records[start].iteration, records[end - 1].iteration,
                   sum / static_cast<double>(end - start)});
  }
  return out;
}

double scaled_runtime(const TrialRecord& rec, double m) {
  if (!(m >= 1.0)) throw ContractViolation("scaled_runtime: multiplier must be >= 1");
  return rec.t_total + (m - 1.0) * rec.t_cc;
}

double relative_runtime(const TrialRecord& strategy, const TrialRecord& baseline, double m) {
  if (strategy.iteration != baseline.iteration) {
    throw ContractViolation("relative_runtime: records are from different iterations");
  }
  const double base = scaled_runtime(baseline, m);
  if (base == 0.0) throw ContractViolation("relative_runtime: baseline runtime is zero");
  return scaled_runtime(strategy, m) / base;
}

std::vector<std::size_t> log_buckets(std::size_t iterations) {
  std::vector<std::size_t> out;
  for (std::size_t decade = 1; decade <= iterations; decade *= 10) {
    for (std::size_t step : {1, 2, 5}) {
      if (decade * step <= iterations) out.push_back(decade * step);
    }
    if (decade > iterations / 10) break;
  }
  if (out.empty() || out.back() != iterations) out.push_back(iterations);
  return out;
}

namespace {

void require_complete(std::span<const TrialRecord> records, std::span<const std::size_t> buckets) {
  if (!buckets.empty() && buckets.back() > records.size()) {
    throw ContractViolation("bucket beyond the end of the record stream");
  }
}

}  // namespace

std::vector<double> bucket_proportions(std::span<const TrialRecord> records,
                                       std::span<const std::size_t> buckets) {
  require_complete(records, buckets);
  std::vector<double> out;
  std::size_t prev = 0;
  for (std::size_t b : buckets) {
    if (b <= prev) throw ContractViolation("bucket_proportions: buckets must increase");
    double sum = 0.0;
    for (std::size_t i = prev; i < b; ++i) sum += records[i].check_fraction;
    out.push_back(sum / static_cast<double>(b - prev));
    prev = b;
  }
  return out;
}

std::vector<double> bucket_relative_runtimes(std::span<const TrialRecord> strategy,
                                             std::span<const TrialRecord> baseline,
                                             std::span<const std::size_t> buckets, double m) {
  require_complete(strategy, buckets);
  require_complete(baseline, buckets);
  std::vector<double> out;
  for (std::size_t b : buckets) out.push_back(relative_runtime(strategy[b - 1], baseline[b - 1], m));
  return out;
}

MeanStd mean_std(std::vector<double> values) {
  if (values.empty()) throw ContractViolation("mean_std: no values");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  // Offsets from the smallest value keep constant inputs exact.
  const double base = values.front();
  double sum = 0.0;
  for (double v : values) sum += v - base;
  const double mean = base + sum / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

std::vector<BucketStat> aggregate(const std::vector<std::vector<double>>& per_trial,
                                  std::span<const std::size_t> buckets) {
  if (per_trial.empty()) throw ContractViolation("aggregate: need at least one trial");
  std::vector<BucketStat> out;
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    std::vector<double> column;
    for (const auto& trial : per_trial) {
      if (trial.size() != buckets.size()) throw ContractViolation("aggregate: ragged trials");
      column.push_back(trial[b]);
    }
    const MeanStd ms = mean_std(std::move(column));
    out.push_back({buckets[b], ms.mean, ms.stddev});
  }
  return out;
}

}  // namespace mrcert
