#include "rlam/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "rlam/densemat.hpp"
#include "rlam/detfact.hpp"
#include "rlam/error.hpp"
#include "rlam/rsvd.hpp"
#include "rlam/synth.hpp"

namespace rlam {

namespace {

double low_rank_error(const DenseMatrix& a, const TruncatedSvd& t) {
  return relative_error(a, reconstruct(t.factors));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

double time_median(const std::function<void(std::size_t)>& fn, std::size_t trials, bool warmup) {
  if (trials == 0) throw ArgumentError("at least one timed trial is required");
  using clock = std::chrono::steady_clock;
  if (warmup) fn(trials);
  std::vector<double> times;
  times.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto t0 = clock::now();
    fn(t);
    times.push_back(std::chrono::duration<double>(clock::now() - t0).count());
  }
  return median(std::move(times));
}

std::vector<BenchRow> run_bench(const BenchConfig& cfg,
                                const std::function<void(const BenchRow&)>& progress) {
  std::vector<BenchRow> rows;
  for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
    const std::size_t m = cfg.sizes[si];
    const std::size_t n = std::max<std::size_t>(1, static_cast<std::size_t>(0.75 * static_cast<double>(m)));
    if (cfg.k < 1 || cfg.k > std::min(m, n)) {
      throw ArgumentError("bench: k=" + std::to_string(cfg.k) + " invalid for size " +
                          std::to_string(m) + "x" + std::to_string(n));
    }
    SpectrumProfile profile;
    profile.kind = SpectrumKind::power_decay;
    profile.rate = cfg.decay;
    const DenseMatrix a = gen_decaying(m, n, profile, derive_seed(cfg.seed, si));

    BenchRow base{"svd_truncated", m, n, cfg.k, 0, 0, 0.0, 1.0, 0.0};
    double base_err = 0.0;
    base.median_seconds = time_median(
        [&](std::size_t) { base_err = low_rank_error(a, svd_truncated(a, cfg.k)); }, cfg.trials,
        cfg.warmup);
    base.rel_error = base_err;
    rows.push_back(base);
    if (progress) progress(rows.back());

    for (std::size_t q : cfg.q_list) {
      SketchSpec spec;
      spec.p = cfg.p;
      spec.q = q;
      std::vector<double> errs(cfg.trials + 1, 0.0);
      BenchRow row{"rsvd", m, n, cfg.k, cfg.p, q, 0.0, 0.0, 0.0};
      row.median_seconds = time_median(
          [&](std::size_t t) {
            const auto res = rsvd(a, cfg.k, spec.with_seed(derive_seed(cfg.seed + 7919 * (q + 1), t)));
            errs[t] = low_rank_error(a, res);
          },
          cfg.trials, cfg.warmup);
      double sum = 0.0;
      for (std::size_t t = 0; t < cfg.trials; ++t) sum += errs[t];
      row.rel_error = sum / static_cast<double>(cfg.trials);
      row.speedup = base.median_seconds / row.median_seconds;
      rows.push_back(row);
      if (progress) progress(rows.back());
    }
  }
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "algorithm,m,n,k,p,q,median_seconds,speedup,rel_error\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%zu,%zu,%zu,%.6g,%.6g,%.10g\n", r.algorithm.c_str(),
                  r.m, r.n, r.k, r.p, r.q, r.median_seconds, r.speedup, r.rel_error);
    out += buf;
  }
  return out;
}

}  // namespace rlam
