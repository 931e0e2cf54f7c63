#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "orrw/params.hpp"
#include "orrw/rng.hpp"

namespace orrw {

// simulate_path stores the whole trajectory; keep it desk-sized.
inline constexpr std::uint64_t kMaxPathSteps = 10'000'000;

// Sufficient statistic of the walk: on the integer line the set of visited
// sites is always the interval [min, max], so (position, min, max) fully
// determines the transition law.  steps is the elapsed time n.
struct WalkState {
  std::int64_t position = 0;
  std::int64_t min = 0;
  std::int64_t max = 0;
  std::uint64_t steps = 0;

  WalkState() = default;

  WalkState(std::int64_t position_, std::int64_t min_, std::int64_t max_,
            std::uint64_t steps_)
      : position(position_), min(min_), max(max_), steps(steps_) {
    if (min > 0 || max < 0)
      throw std::invalid_argument("walk starts at 0: need min <= 0 <= max");
    if (position < min || position > max)
      throw std::invalid_argument("position outside [min, max]");
    const std::uint64_t r = static_cast<std::uint64_t>(max - min);
    if (r > steps)
      throw std::invalid_argument("range cannot exceed step count");
    if (steps >= 1 && r < 1)
      throw std::invalid_argument("range is at least 1 after the first step");
  }

  std::int64_t range() const { return max - min; }
  bool at_max() const { return position == max; }
  bool at_min() const { return position == min; }
};

struct StepWeights {
  double up;
  double down;
};

// Transition probabilities of the next step.  From the maximum the upward
// edge is fresh (weight 1) and the downward edge traversed (weight c);
// mirrored at the minimum; in the interior both edges are traversed.  At
// n = 0 both neighbours are fresh, so the step is symmetric.
inline StepWeights step_weights(const WalkState& state, const Params& params) {
  if (state.steps == 0) return {0.5, 0.5};
  if (state.at_max()) {
    const double up = params.fresh_prob();
    return {up, 1.0 - up};
  }
  if (state.at_min()) {
    const double down = params.fresh_prob();
    return {1.0 - down, down};
  }
  return {0.5, 0.5};
}

// A sampled trajectory together with everything needed to regenerate it.
struct Path {
  Params params;
  std::vector<std::int32_t> positions;  // length n+1, positions[0] = 0
  std::uint64_t seed = 0;

  std::uint64_t steps() const { return positions.size() - 1; }

  std::int64_t final_range() const {
    std::int32_t lo = 0, hi = 0;
    for (std::int32_t x : positions) {
      if (x < lo) lo = x;
      if (x > hi) hi = x;
    }
    return static_cast<std::int64_t>(hi) - lo;
  }

  bool operator==(const Path& other) const {
    return params.c() == other.params.c() && seed == other.seed &&
           positions == other.positions;
  }
};

// Samples n steps of the walk.  Identical (params, n, seed) give a
// bit-identical Path on any platform.
inline Path simulate_path(const Params& params, std::uint64_t n,
                          std::uint64_t seed) {
  if (n > kMaxPathSteps)
    throw std::length_error("simulate_path: step count exceeds cap");
  Path path{params, {}, seed};
  path.positions.reserve(n + 1);
  path.positions.push_back(0);

  SplitMix64 rng(seed);
  std::int32_t pos = 0, lo = 0, hi = 0;
  const double up_at_max = params.fresh_prob();        // 1/(1+c)
  const double up_at_min = 1.0 - params.fresh_prob();  // c/(1+c)
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
    if (pos > hi) hi = pos;
    if (pos < lo) lo = pos;
    path.positions.push_back(pos);
  }
  return path;
}

// First times S_1..S_K at which the range reaches 1..K, K the final range.
// S_1 = 1 for any nonempty path; the sequence is strictly increasing.
inline std::vector<std::uint64_t> hitting_times(const Path& path) {
  std::vector<std::uint64_t> times;
  std::int32_t lo = 0, hi = 0;
  std::int64_t range = 0;
  for (std::size_t n = 1; n < path.positions.size(); ++n) {
    const std::int32_t x = path.positions[n];
    if (x > hi) hi = x;
    if (x < lo) lo = x;
    const std::int64_t r = static_cast<std::int64_t>(hi) - lo;
    while (range < r) {
      ++range;
      times.push_back(n);
    }
  }
  return times;
}

struct MartingaleDrift {
  double position;         // compensated drift of X_n
  double squared_position;  // compensated drift of X_n^2 - n
};

// One-step drift of the two compensated processes
//   X_n - ((1-c)/(1+c)) * sum_{k<n} (1{X_k=M_k} - 1{X_k=m_k})
//   X_n^2 - n - 2((1-c)/(1+c)) * sum_{k<n} |X_k| 1{X_k in {m_k, M_k}}
// Both vanish identically under the transition law; the return value is the
// numerical residual.
inline MartingaleDrift martingale_drift(const WalkState& state,
                                        const Params& params) {
  if (state.steps < 1)
    throw std::invalid_argument("martingale_drift: need steps >= 1");
  const auto [up, down] = step_weights(state, params);
  const double x = static_cast<double>(state.position);
  const double ratio = (1.0 - params.c()) / (1.0 + params.c());

  const double mean_dx = up - down;
  const double boundary_sign =
      (state.at_max() ? 1.0 : 0.0) - (state.at_min() ? 1.0 : 0.0);
  const double drift1 = mean_dx - ratio * boundary_sign;

  // E[X_{n+1}^2 - X_n^2] = 1 + 2 X_n E[dX]
  const double mean_dx2 = 1.0 + 2.0 * x * mean_dx;
  const double at_boundary = (state.at_max() || state.at_min()) ? 1.0 : 0.0;
  const double drift2 = mean_dx2 - 1.0 - 2.0 * ratio * std::abs(x) * at_boundary;

  return {drift1, drift2};
}

}  // namespace orrw
