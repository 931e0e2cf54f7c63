#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "orrw/asymptotics.hpp"
#include "orrw/params.hpp"
#include "orrw/rng.hpp"

namespace orrw {

inline constexpr std::uint64_t kMaxMonteCarloWork = 2'000'000'000'000ULL;  // reps * n

enum class Statistic { range_moment, position_variance };

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;  // sample std / sqrt(reps)
  std::uint64_t reps = 0;
  double c = 1.0;
  std::uint64_t n = 0;
  unsigned ell = 0;
  std::uint64_t seed = 0;
  Statistic statistic = Statistic::range_moment;
};

namespace detail {

struct WalkOutcome {
  std::int64_t range;
  std::int64_t position;
};

// Endpoint of one walk; nothing but (range, position) is retained.
inline WalkOutcome run_walk(double fresh, std::uint64_t n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::int64_t pos = 0, lo = 0, hi = 0;
  const double up_at_max = fresh;
  const double up_at_min = 1.0 - fresh;
  for (std::uint64_t i = 0; i < n; ++i) {
    double up;
    if (i == 0)
      up = 0.5;
    else if (pos == hi)
      up = up_at_max;
    else if (pos == lo)
      up = up_at_min;
    else
      up = 0.5;
    pos += rng.next_unit() < up ? 1 : -1;
    if (pos > hi)
      hi = pos;
    else if (pos < lo)
      lo = pos;
  }
  return {hi - lo, pos};
}

class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Replicates are processed in fixed blocks; per-block partial sums are
// reduced in block order at the end.  Replicate r always draws from the
// stream seeded by stream_seed(master, r), so the result is a pure function
// of (inputs, master seed) no matter how many workers run or how blocks are
// scheduled.
inline constexpr std::uint64_t kReplicateBlock = 1024;

template <typename PerReplicate>
std::vector<double> accumulate_replicates(std::uint64_t reps, unsigned stats,
                                          unsigned workers, PerReplicate&& per_rep) {
  const std::uint64_t nblocks = (reps + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<double> block_sums(nblocks * stats, 0.0);
  std::atomic<std::uint64_t> next{0};

  auto work = [&] {
    std::vector<KahanSum> acc(stats);
    std::vector<double> vals(stats);
    for (;;) {
      const std::uint64_t b = next.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) return;
      std::fill(acc.begin(), acc.end(), KahanSum());
      const std::uint64_t begin = b * kReplicateBlock;
      const std::uint64_t end = std::min(reps, begin + kReplicateBlock);
      for (std::uint64_t r = begin; r < end; ++r) {
        per_rep(r, vals);
        for (unsigned s = 0; s < stats; ++s) acc[s].add(vals[s]);
      }
      for (unsigned s = 0; s < stats; ++s) block_sums[b * stats + s] = acc[s].value();
    }
  };

  unsigned nworkers =
      workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : workers;
  nworkers = static_cast<unsigned>(
      std::min<std::uint64_t>(nworkers, nblocks));
  if (nworkers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nworkers);
    for (unsigned w = 0; w < nworkers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<KahanSum> totals(stats);
  for (std::uint64_t b = 0; b < nblocks; ++b)
    for (unsigned s = 0; s < stats; ++s) totals[s].add(block_sums[b * stats + s]);
  std::vector<double> out(stats);
  for (unsigned s = 0; s < stats; ++s) out[s] = totals[s].value();
  return out;
}

inline void check_mc_size(std::uint64_t n, std::uint64_t reps) {
  if (reps < 2) throw std::invalid_argument("monte carlo: need reps >= 2");
  if (n < 1) throw std::invalid_argument("monte carlo: need n >= 1");
  if (reps > kMaxMonteCarloWork / n)
    throw std::length_error("monte carlo: reps * n exceeds the work cap");
}

inline MomentEstimate finalize(double sum, double sum_sq, std::uint64_t reps) {
  MomentEstimate e;
  e.mean = sum / static_cast<double>(reps);
  const double var =
      std::max(0.0, (sum_sq - sum * sum / static_cast<double>(reps)) /
                        static_cast<double>(reps - 1));
  e.std_error = std::sqrt(var / static_cast<double>(reps));
  e.reps = reps;
  return e;
}

}  // namespace detail

// Sample means of (R_n / sqrt n)^l for l = 1..ell_max with standard errors.
inline std::vector<MomentEstimate> estimate_range_moments(
    const Params& params, std::uint64_t n, std::uint64_t reps, unsigned ell_max,
    std::uint64_t seed, unsigned workers = 0) {
  detail::check_mc_size(n, reps);
  if (ell_max < 1 || ell_max > 16)
    throw std::invalid_argument("estimate_range_moments: ell_max in [1, 16]");

  const double fresh = params.fresh_prob();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const unsigned stats = 2 * ell_max;
  auto sums = detail::accumulate_replicates(
      reps, stats, workers, [&](std::uint64_t r, std::vector<double>& vals) {
        const auto outcome = detail::run_walk(fresh, n, stream_seed(seed, r));
        const double x = static_cast<double>(outcome.range) * inv_sqrt_n;
        double power = 1.0;
        for (unsigned ell = 1; ell <= ell_max; ++ell) {
          power *= x;
          vals[2 * (ell - 1)] = power;
          vals[2 * (ell - 1) + 1] = power * power;
        }
      });

  std::vector<MomentEstimate> out;
  out.reserve(ell_max);
  for (unsigned ell = 1; ell <= ell_max; ++ell) {
    MomentEstimate e =
        detail::finalize(sums[2 * (ell - 1)], sums[2 * (ell - 1) + 1], reps);
    e.c = params.c();
    e.n = n;
    e.ell = ell;
    e.seed = seed;
    e.statistic = Statistic::range_moment;
    out.push_back(e);
  }
  return out;
}

struct PositionVariance {
  MomentEstimate estimate;    // mean of X_n^2 / n (raw second moment)
  double position_mean = 0.0;  // sample mean of X_n / sqrt n, diagnostic only
};

// V[X_n / sqrt n] estimated through the raw second moment (the walk is
// symmetric, so E[X_n] = 0).
inline PositionVariance estimate_position_variance(const Params& params,
                                                   std::uint64_t n,
                                                   std::uint64_t reps,
                                                   std::uint64_t seed,
                                                   unsigned workers = 0) {
  detail::check_mc_size(n, reps);
  const double fresh = params.fresh_prob();
  const double inv_n = 1.0 / static_cast<double>(n);
  const double inv_sqrt_n = std::sqrt(inv_n);
  auto sums = detail::accumulate_replicates(
      reps, 3, workers, [&](std::uint64_t r, std::vector<double>& vals) {
        const auto outcome = detail::run_walk(fresh, n, stream_seed(seed, r));
        const double x2 = static_cast<double>(outcome.position) *
                          static_cast<double>(outcome.position) * inv_n;
        vals[0] = x2;
        vals[1] = x2 * x2;
        vals[2] = static_cast<double>(outcome.position) * inv_sqrt_n;
      });

  PositionVariance out;
  out.estimate = detail::finalize(sums[0], sums[1], reps);
  out.estimate.c = params.c();
  out.estimate.n = n;
  out.estimate.seed = seed;
  out.estimate.statistic = Statistic::position_variance;
  out.position_mean = sums[2] / static_cast<double>(reps);
  return out;
}

struct Figure1Row {
  double c = 0.0;
  std::uint64_t n = 0;
  std::uint64_t reps = 0;
  double var_hat = 0.0;
  double std_error = 0.0;
  double lhs = 0.0;  // |(1-c)/2| J_2(c)
  double rhs = 0.0;  // |1-c| J_2(c)
};

// One row per c: the observed variance of X_n / sqrt n next to the heuristic
// envelope around |var - 1|.  Every row draws from its own seed stream, so
// a grid run reproduces the standalone runs exactly.
inline std::vector<Figure1Row> figure1_table(const std::vector<double>& c_grid,
                                             std::uint64_t n, std::uint64_t reps,
                                             std::uint64_t seed,
                                             unsigned workers = 0) {
  if (c_grid.empty()) throw std::invalid_argument("figure1_table: empty c grid");
  std::vector<Figure1Row> rows;
  rows.reserve(c_grid.size());
  for (std::size_t i = 0; i < c_grid.size(); ++i) {
    const Params params(c_grid[i]);
    const std::uint64_t row_seed = stream_seed(seed, i);
    const PositionVariance pv =
        estimate_position_variance(params, n, reps, row_seed, workers);
    const VarianceBounds bounds = variance_bounds(params.c());
    rows.push_back({params.c(), n, reps, pv.estimate.mean, pv.estimate.std_error,
                    bounds.lhs, bounds.rhs});
  }
  return rows;
}

}  // namespace orrw
