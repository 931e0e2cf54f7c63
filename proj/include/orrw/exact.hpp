#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "orrw/distribution.hpp"
#include "orrw/params.hpp"
#include "orrw/walk.hpp"

namespace orrw {

inline constexpr unsigned kMaxEnumerationSteps = 24;
inline constexpr std::uint64_t kMaxRangeDpHorizon = 200'000;
inline constexpr std::uint64_t kMaxPositionDpHorizon = 300;

// Truncation policy for laws with unbounded support: horizons double from
// 2^10 until the missing tail mass drops below 1e-10, up to 2^22.
inline constexpr std::uint64_t kAutoHorizonStart = 1u << 10;
inline constexpr std::uint64_t kAutoHorizonCap = 1u << 22;
inline constexpr double kAutoHorizonDeficit = 1e-10;

// ---------------------------------------------------------------------------
// Brute-force enumeration over all 2^n step sequences, each weighted by the
// product of its transition probabilities.  The ground truth everything else
// is tested against.
// ---------------------------------------------------------------------------

struct PathEnumeration {
  DiscreteDistribution range_law;                  // law of R_n
  double position_second_moment = 0.0;             // E[X_n^2]
  std::vector<DiscreteDistribution> hitting_laws;  // S_k for k = 1..n, truncated at n
};

namespace detail {

struct EnumerationAccumulator {
  unsigned n;
  double fresh;  // 1/(1+c)
  std::vector<double> range_prob;               // index r
  std::vector<std::vector<double>> hit_prob;    // [k][time]
  std::vector<unsigned> hit_step;               // S_k of the current prefix
  double x2 = 0.0;

  void walk(unsigned step, int pos, int lo, int hi, double weight) {
    if (step == n) {
      const unsigned range = static_cast<unsigned>(hi - lo);
      range_prob[range] += weight;
      x2 += weight * static_cast<double>(pos) * pos;
      for (unsigned k = 1; k <= range; ++k) hit_prob[k][hit_step[k]] += weight;
      return;
    }
    double up;
    if (step == 0)
      up = 0.5;
    else if (pos == hi)
      up = fresh;
    else if (pos == lo)
      up = 1.0 - fresh;
    else
      up = 0.5;
    descend(step, pos + 1, lo, std::max(hi, pos + 1), weight * up);
    descend(step, pos - 1, std::min(lo, pos - 1), hi, weight * (1.0 - up));
  }

  void descend(unsigned step, int pos, int lo, int hi, double weight) {
    const unsigned range = static_cast<unsigned>(hi - lo);
    const bool extended = hit_step[range] == 0 && range >= 1;
    if (extended) hit_step[range] = step + 1;
    walk(step + 1, pos, lo, hi, weight);
    if (extended) hit_step[range] = 0;
  }
};

}  // namespace detail

inline PathEnumeration enumerate_paths(const Params& params, unsigned n) {
  if (n > kMaxEnumerationSteps)
    throw std::length_error("enumerate_paths: 2^n paths exceed the enumeration cap");
  detail::EnumerationAccumulator acc;
  acc.n = n;
  acc.fresh = params.fresh_prob();
  acc.range_prob.assign(n + 1, 0.0);
  acc.hit_prob.assign(n + 1, std::vector<double>(n + 1, 0.0));
  acc.hit_step.assign(n + 1, 0);
  acc.walk(0, 0, 0, 0, 1.0);

  PathEnumeration out{DiscreteDistribution(0, acc.range_prob), acc.x2, {}};
  out.range_law.trim();
  out.hitting_laws.reserve(n);
  for (unsigned k = 1; k <= n; ++k) {
    std::vector<double> probs(acc.hit_prob[k].begin() + k, acc.hit_prob[k].end());
    out.hitting_laws.emplace_back(static_cast<std::int64_t>(k), std::move(probs));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact law of the range by dynamic programming over (d, r) with
// d = X_n - m_n and r = R_n.  The transition law depends only on whether the
// walk sits at the minimum (d = 0), the maximum (d = r) or in between, so
// (d, r) is a Markov chain.  Levels whose total mass falls below 1e-42 are
// dropped; the lost mass shows up in the reported deficit (<< 1e-12).
// ---------------------------------------------------------------------------

struct RangeTable {
  std::uint64_t n = 0;
  double c = 1.0;
  DiscreteDistribution dist;
  std::vector<double> factorial_moments;  // E[R(R+1)...(R+l)], l = 0..ell_max
};

class RangeDp {
 public:
  explicit RangeDp(const Params& params)
      : fresh_(params.fresh_prob()), reflect_(1.0 - params.fresh_prob()) {
    // after the first (symmetric) step: range 1, at max or at min
    cur_.resize(2);
    nxt_.resize(2);
    cur_[1] = {0.5, 0.5};
    r_lo_ = r_hi_ = 1;
  }

  std::uint64_t time() const { return t_; }

  void advance() {
    // possibly activate the next level up
    const double inflow = fresh_ * (cur_[r_hi_].front() + cur_[r_hi_].back());
    std::size_t hi = r_hi_;
    if (inflow >= kActivate) ++hi;
    if (nxt_.size() <= hi) nxt_.resize(hi + 1);

    for (std::size_t r = r_lo_; r <= hi; ++r) {
      auto& dst = nxt_[r];
      dst.assign(r + 1, 0.0);
      if (r <= r_hi_) {
        // Within-level moves.  Up-moves from d' contribute with weight
        // c/(1+c) if d' = 0 (reflection at the minimum) and 1/2 otherwise;
        // down-moves mirror this at d' = r.
        const auto& src = cur_[r];
        dst[0] = (r == 1 ? reflect_ : 0.5) * src[1];
        dst[r] = (r == 1 ? reflect_ : 0.5) * src[r - 1];
        if (r >= 2) {
          dst[1] = reflect_ * src[0] + (r == 2 ? reflect_ : 0.5) * src[2];
          if (r >= 3) dst[r - 1] = 0.5 * src[r - 2] + reflect_ * src[r];
          const double* s = src.data();
          double* d = dst.data();
          for (std::size_t j = 2; j + 2 <= r; ++j) d[j] = 0.5 * (s[j - 1] + s[j + 1]);
        }
      }
      // range extensions from the level below
      if (r > r_lo_ && r - 1 <= r_hi_ && !cur_[r - 1].empty()) {
        const auto& below = cur_[r - 1];
        dst.front() += fresh_ * below.front();
        dst.back() += fresh_ * below.back();
      }
    }
    r_hi_ = hi;
    cur_.swap(nxt_);
    for (std::size_t r = r_lo_; r < nxt_.size(); ++r) nxt_[r].clear();
    while (r_lo_ < r_hi_ && level_sum(r_lo_) < kPrune) {
      cur_[r_lo_].clear();
      ++r_lo_;
    }
    ++t_;
  }

  DiscreteDistribution law() const {
    std::vector<double> probs(r_hi_ - r_lo_ + 1, 0.0);
    for (std::size_t r = r_lo_; r <= r_hi_; ++r) probs[r - r_lo_] = level_sum(r);
    DiscreteDistribution d(static_cast<std::int64_t>(r_lo_), std::move(probs));
    d.trim();
    return d;
  }

 private:
  static constexpr double kActivate = 1e-42;
  static constexpr double kPrune = 1e-42;

  double level_sum(std::size_t r) const {
    double s = 0.0;
    for (double p : cur_[r]) s += p;
    return s;
  }

  double fresh_, reflect_;
  std::vector<std::vector<double>> cur_, nxt_;
  std::size_t r_lo_ = 1, r_hi_ = 1;
  std::uint64_t t_ = 1;
};

inline RangeTable range_distribution(const Params& params, std::uint64_t n,
                                     unsigned ell_max = 2) {
  if (n < 1) throw std::invalid_argument("range_distribution: need n >= 1");
  if (n > kMaxRangeDpHorizon)
    throw std::length_error("range_distribution: state table exceeds cap");
  RangeDp dp(params);
  while (dp.time() < n) dp.advance();
  RangeTable table{n, params.c(), dp.law(), {}};
  table.factorial_moments.reserve(ell_max + 1);
  const auto& dist = table.dist;
  for (unsigned ell = 0; ell <= ell_max; ++ell) {
    double m = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const double r = static_cast<double>(dist.offset() + static_cast<std::int64_t>(i));
      double f = r;
      for (unsigned j = 1; j <= ell; ++j) f *= r + j;
      m += dist.probs()[i] * f;
    }
    table.factorial_moments.push_back(m);
  }
  return table;
}

// Laws of R_t for every t = 1..n from a single DP sweep.
inline std::vector<DiscreteDistribution> range_law_series(const Params& params,
                                                          std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("range_law_series: need n >= 1");
  if (n > kMaxRangeDpHorizon)
    throw std::length_error("range_law_series: state table exceeds cap");
  RangeDp dp(params);
  std::vector<DiscreteDistribution> laws;
  laws.reserve(n);
  laws.push_back(dp.law());
  while (dp.time() < n) {
    dp.advance();
    laws.push_back(dp.law());
  }
  return laws;
}

// ---------------------------------------------------------------------------
// tau_i: exit time of a simple symmetric walk started at 0 from the open
// interval with boundary {-1, i-1}, computed by stepping the interior mass.
// ---------------------------------------------------------------------------

inline DiscreteDistribution tau_distribution(std::int64_t i, std::uint64_t n_max = 0) {
  if (i < 1) throw std::invalid_argument("tau_distribution: need i >= 1");
  if (i == 1) return DiscreteDistribution::point_mass(0);  // 0 is already on the boundary

  const std::size_t width = static_cast<std::size_t>(i - 1);  // interior sites 0..i-2
  std::vector<double> interior(width, 0.0), scratch(width, 0.0);
  interior[0] = 1.0;
  double remaining = 1.0;

  const bool auto_horizon = n_max == 0;
  std::uint64_t horizon = auto_horizon ? kAutoHorizonStart : n_max;
  std::vector<double> exits;
  exits.reserve(horizon);
  for (;;) {
    while (exits.size() < horizon) {
      double out = 0.5 * interior[0] + 0.5 * interior[width - 1];
      if (width == 1) {
        scratch[0] = 0.0;
      } else {
        scratch[0] = 0.5 * interior[1];
        for (std::size_t j = 1; j + 1 < width; ++j)
          scratch[j] = 0.5 * (interior[j - 1] + interior[j + 1]);
        scratch[width - 1] = 0.5 * interior[width - 2];
      }
      interior.swap(scratch);
      exits.push_back(out);
      remaining -= out;
    }
    if (!auto_horizon || remaining < kAutoHorizonDeficit || horizon >= kAutoHorizonCap)
      break;
    horizon *= 2;
  }
  return DiscreteDistribution(1, std::move(exits));
}

// ---------------------------------------------------------------------------
// T_i: time for the range to grow from i to i+1.  A shifted-geometric number
// Y ~ geo(1/(1+c)) of failed boundary visits, each costing 1 + tau_i steps,
// plus the final successful step:
//   T_i = 1 + sum_{j=1}^{Y} (1 + tau_i^j).
// The compound-geometric part W = T_i - 1 satisfies the renewal recurrence
//   u_m = [m = 0] + q * sum_j d_j u_{m-j},   q = c/(1+c), d = law of 1+tau_i,
// with P(W = m) = u_m / (1+c).
// ---------------------------------------------------------------------------

inline DiscreteDistribution t_distribution(const Params& params, std::int64_t i,
                                           std::uint64_t n_max = 0) {
  if (i < 1) throw std::invalid_argument("t_distribution: need i >= 1");
  const double q = 1.0 - params.fresh_prob();
  const bool auto_horizon = n_max == 0;
  std::uint64_t horizon = auto_horizon ? kAutoHorizonStart : n_max;

  for (;;) {
    // d_j = P(1 + tau_i = j); tau truncated two slots short of the horizon
    const DiscreteDistribution tau =
        tau_distribution(i, horizon > 2 ? horizon - 2 : 1);
    const std::size_t len = static_cast<std::size_t>(horizon);  // supports T in [1, horizon]
    std::vector<double> d(len, 0.0);
    const std::size_t tau_off = static_cast<std::size_t>(tau.offset());
    for (std::size_t m = 0; m < tau.size() && m + tau_off + 1 < len; ++m)
      d[m + tau_off + 1] = tau.probs()[m];

    std::vector<double> u(len, 0.0);
    u[0] = 1.0;
    const std::size_t j_min = tau_off + 1;
    for (std::size_t m = 1; m < len; ++m) {
      double s = 0.0;
      for (std::size_t j = j_min; j <= m; ++j) s += d[j] * u[m - j];
      u[m] = q * s;
    }
    std::vector<double> probs(len);
    for (std::size_t m = 0; m < len; ++m) probs[m] = params.fresh_prob() * u[m];
    DiscreteDistribution law(1, std::move(probs));
    if (!auto_horizon || law.deficit() < kAutoHorizonDeficit ||
        horizon >= kAutoHorizonCap)
      return law;
    horizon *= 2;
  }
}

// ---------------------------------------------------------------------------
// S_k = 1 + T_1 + ... + T_{k-1}: hitting time of range k, by convolution.
// ---------------------------------------------------------------------------

namespace detail {

// Convolution truncated to values <= horizon.  Dropped mass becomes deficit.
inline DiscreteDistribution convolve_truncated(const DiscreteDistribution& a,
                                               const DiscreteDistribution& b,
                                               std::int64_t horizon) {
  const std::int64_t offset = a.offset() + b.offset();
  if (offset > horizon) return DiscreteDistribution(offset, {});
  const std::size_t len = static_cast<std::size_t>(horizon - offset + 1);
  std::vector<double> out(len, 0.0);
  for (std::size_t ia = 0; ia < a.size(); ++ia) {
    const double pa = a.probs()[ia];
    if (pa == 0.0) continue;
    const std::size_t cap = len > ia ? std::min(b.size(), len - ia) : 0;
    for (std::size_t ib = 0; ib < cap; ++ib) out[ia + ib] += pa * b.probs()[ib];
  }
  DiscreteDistribution d(offset, std::move(out));
  d.trim();
  return d;
}

}  // namespace detail

// Laws of S_1..S_K in one pass (each T_i is computed once).
inline std::vector<DiscreteDistribution> s_k_distributions_up_to(
    const Params& params, std::int64_t k_max, std::uint64_t n_max = 0) {
  if (k_max < 1) throw std::invalid_argument("s_k: need k >= 1");
  const bool auto_horizon = n_max == 0;
  std::uint64_t horizon = auto_horizon ? kAutoHorizonStart : n_max;

  for (;;) {
    std::vector<DiscreteDistribution> laws;
    laws.reserve(static_cast<std::size_t>(k_max));
    laws.push_back(DiscreteDistribution::point_mass(1));
    for (std::int64_t i = 1; i < k_max; ++i) {
      const DiscreteDistribution t_law = t_distribution(params, i, horizon);
      laws.push_back(detail::convolve_truncated(
          laws.back(), t_law, static_cast<std::int64_t>(horizon)));
    }
    if (!auto_horizon || laws.back().deficit() < kAutoHorizonDeficit ||
        horizon >= kAutoHorizonCap)
      return laws;
    horizon *= 2;
  }
}

inline DiscreteDistribution s_k_distribution(const Params& params, std::int64_t k,
                                             std::uint64_t n_max = 0) {
  auto laws = s_k_distributions_up_to(params, k, n_max);
  return std::move(laws.back());
}

// ---------------------------------------------------------------------------
// E[X_n^2] by the (d, r, m) dynamic program, m = |min|.  The position is
// recovered as X = d - m.  O(n^3) states, so the horizon stays small; the
// large-n regime belongs to Monte Carlo.
// ---------------------------------------------------------------------------

inline double x_moment(const Params& params, std::uint64_t n) {
  if (n < 1) throw std::invalid_argument("x_moment: need n >= 1");
  if (n > kMaxPositionDpHorizon)
    throw std::length_error("x_moment: state table exceeds cap");

  const double fresh = params.fresh_prob();
  const double reflect = 1.0 - fresh;
  constexpr double kPrune = 1e-42;

  // level r holds a (r+1) x (r+1) matrix over (d, m), flattened row-major in d
  std::vector<std::vector<double>> cur(2), nxt(2);
  cur[1].assign(4, 0.0);
  cur[1][1 * 2 + 0] = 0.5;  // first step up: d=1, m=0
  cur[1][0 * 2 + 1] = 0.5;  // first step down: d=0, m=1
  std::size_t r_lo = 1, r_hi = 1;

  auto level_sum = [](const std::vector<double>& level) {
    double s = 0.0;
    for (double p : level) s += p;
    return s;
  };

  for (std::uint64_t t = 1; t < n; ++t) {
    double inflow = 0.0;
    {
      const auto& top = cur[r_hi];
      const std::size_t w = r_hi + 1;
      for (std::size_t m = 0; m < w; ++m)
        inflow += fresh * (top[0 * w + m] + top[r_hi * w + m]);
    }
    std::size_t hi = r_hi;
    if (inflow >= kPrune) ++hi;
    if (nxt.size() <= hi) nxt.resize(hi + 1);

    for (std::size_t r = r_lo; r <= hi; ++r) {
      const std::size_t w = r + 1;
      auto& dst = nxt[r];
      dst.assign(w * w, 0.0);
      if (r <= r_hi) {
        const auto& src = cur[r];
        for (std::size_t d = 0; d <= r; ++d) {
          // up-moves from (d-1, m), down-moves from (d+1, m)
          if (d >= 1) {
            const double coef = (d - 1 == 0) ? reflect : 0.5;
            for (std::size_t m = 0; m < w; ++m)
              dst[d * w + m] += coef * src[(d - 1) * w + m];
          }
          if (d + 1 <= r) {
            const double coef = (d + 1 == r) ? reflect : 0.5;
            for (std::size_t m = 0; m < w; ++m)
              dst[d * w + m] += coef * src[(d + 1) * w + m];
          }
        }
      }
      if (r > r_lo && r - 1 <= r_hi && !cur[r - 1].empty()) {
        const auto& below = cur[r - 1];
        const std::size_t wb = r;
        // min extension: (0, m-1) below -> (0, m); max extension: (r-1, m) -> (r, m)
        for (std::size_t m = 1; m < w; ++m)
          dst[0 * w + m] += fresh * below[0 * wb + (m - 1)];
        for (std::size_t m = 0; m < wb; ++m)
          dst[r * w + m] += fresh * below[(r - 1) * wb + m];
      }
    }
    r_hi = hi;
    cur.swap(nxt);
    for (std::size_t r = r_lo; r < nxt.size(); ++r) nxt[r].clear();
    while (r_lo < r_hi && level_sum(cur[r_lo]) < kPrune) {
      cur[r_lo].clear();
      ++r_lo;
    }
  }

  double x2 = 0.0;
  for (std::size_t r = r_lo; r <= r_hi; ++r) {
    const std::size_t w = r + 1;
    const auto& level = cur[r];
    if (level.empty()) continue;
    for (std::size_t d = 0; d <= r; ++d)
      for (std::size_t m = 0; m < w; ++m) {
        const double x = static_cast<double>(d) - static_cast<double>(m);
        x2 += level[d * w + m] * x * x;
      }
  }
  return x2;
}

}  // namespace orrw
