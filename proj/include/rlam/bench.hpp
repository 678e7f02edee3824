#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rlam {

/// One line of the accuracy/speedup table.
struct BenchRow {
  std::string algorithm;
  std::size_t m = 0, n = 0, k = 0, p = 0, q = 0;
  double median_seconds = 0.0;
  double speedup = 0.0;    // baseline median / this median
  double rel_error = 0.0;  // mean relative Frobenius error over trials
};

struct BenchConfig {
  std::vector<std::size_t> sizes{500, 1000};  // m; n = 0.75 m
  std::size_t k = 20;
  std::size_t p = 10;
  std::vector<std::size_t> q_list{0, 1, 2};
  std::size_t trials = 5;
  bool warmup = true;  // one extra leading run, discarded
  std::uint64_t seed = 0;
  double decay = 1.0;  // planted spectrum sigma_j = j^-decay
};

/// Runs `fn(trial)` warmup + trials times with a monotonic clock and returns
/// the median wall time of the kept runs.
double time_median(const std::function<void(std::size_t)>& fn, std::size_t trials, bool warmup);

/// Baseline svd_truncated row, then one rsvd row per q, for every size.
/// `progress` (optional) is called after each row.
std::vector<BenchRow> run_bench(const BenchConfig& cfg,
                                const std::function<void(const BenchRow&)>& progress = {});

/// Header: algorithm,m,n,k,p,q,median_seconds,speedup,rel_error
std::string bench_csv(const std::vector<BenchRow>& rows);

}  // namespace rlam
