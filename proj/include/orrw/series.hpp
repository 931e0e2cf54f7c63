#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "orrw/asymptotics.hpp"
#include "orrw/params.hpp"

namespace orrw {

namespace detail {

inline void require_s_in_unit(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::domain_error("generating-function argument s must lie in (0,1)");
}

// sqrt(1-s^2) without cancellation near s = 1.
inline double root_one_minus_s2(double s) { return std::sqrt((1.0 - s) * (1.0 + s)); }

// exp(d_s) = (1 + sqrt(1-s^2))/s, evaluated directly (no exp/log round trip).
inline double exp_d(double s) { return (1.0 + root_one_minus_s2(s)) / s; }

}  // namespace detail

// d_s = log((1 + sqrt(1-s^2))/s), the positive solution of cosh(d) = 1/s.
// Behaves like sqrt(2(1-s)) as s -> 1.
inline double d_of_s(double s) {
  detail::require_s_in_unit(s);
  return std::log1p(detail::root_one_minus_s2(s)) - std::log(s);
}

// E[s^{tau_x}]: generating function of the exit time from an interval with
// boundaries at distance 1 and x-1,
//   g_x(s) = (e^{d_s} + e^{d_s (x-1)}) / (1 + e^{d_s x}).
// Direct form; overflows once x * d_s is large, see g_stable.
inline double g(double x, double s) {
  detail::require_s_in_unit(s);
  if (!(x >= 1.0)) throw std::domain_error("g: need x >= 1");
  const double w = detail::exp_d(s);
  return (w + std::pow(w, x - 1.0)) / (1.0 + std::pow(w, x));
}

// Algebraically identical to g, written as
//   g_x(s) = (1/s) (1 - a(d_s x) sqrt(1-s^2)),   a(y) = (e^y-1)/(e^y+1),
// where a(y) = tanh(y/2) saturates instead of overflowing.  Preferred for
// s near 1 or large x.
inline double g_stable(double x, double s) {
  detail::require_s_in_unit(s);
  if (!(x >= 1.0)) throw std::domain_error("g_stable: need x >= 1");
  const double d = d_of_s(s);
  return (1.0 - std::tanh(0.5 * d * x) * detail::root_one_minus_s2(s)) / s;
}

namespace detail {

// Route between the two equivalent forms of g: direct for moderate
// arguments, saturating form where e^{d_s x} would lose accuracy or overflow.
inline bool use_stable_form(double x, double s) {
  return s > 0.99 || x * d_of_s(s) > 30.0;
}

}  // namespace detail

// E[s^{T_x}]: generating function of the time the range needs to grow past x,
//   G_x(s) = s / (1 + c - c s g_x(s)) = s / (1 + c a(d_s x) sqrt(1-s^2)).
inline double G(double x, double s, const Params& params) {
  detail::require_s_in_unit(s);
  if (!(x >= 1.0)) throw std::domain_error("G: need x >= 1");
  const double c = params.c();
  if (detail::use_stable_form(x, s)) {
    const double a = std::tanh(0.5 * d_of_s(s) * x);
    return s / (1.0 + c * a * detail::root_one_minus_s2(s));
  }
  return s / (1.0 + c - c * s * g(x, s));
}

// E[s^{S_k}] = s * prod_{i=1}^{k-1} G_i(s).
inline double gen_S_k(const Params& params, std::int64_t k, double s) {
  detail::require_s_in_unit(s);
  if (k < 1) throw std::domain_error("gen_S_k: need k >= 1");
  double value = s;
  for (std::int64_t i = 1; i < k; ++i) value *= G(static_cast<double>(i), s, params);
  return value;
}

struct SeriesPoint {
  double s = 0.0;
  double value = 0.0;
  std::uint64_t k_terms = 0;  // truncation index of the k-sum
};

inline constexpr std::uint64_t kSeriesTermCap = 1u << 24;

// H_l(s) = sum_n s^n E[R_n (R_n+1) ... (R_n+l)]
//        = (l+1)/(1-s) * sum_k k (k+1) ... (k+l-1) s prod_{i<k} G_i(s).
// The k-sum decays like a Gaussian in k sqrt(1-s); terms are added until the
// latest one falls below 1e-14 of the partial sum.
inline SeriesPoint h_ell(const Params& params, unsigned ell, double s,
                         std::uint64_t k_max = 0) {
  detail::require_s_in_unit(s);
  const std::uint64_t cap = k_max == 0 ? kSeriesTermCap : k_max;
  double sum = 0.0;
  double product = 1.0;  // prod_{i=1}^{k-1} G_i(s)
  std::uint64_t k = 0;
  for (;;) {
    ++k;
    double rising = 1.0;  // k (k+1) ... (k+ell-1)
    for (unsigned j = 0; j < ell; ++j) rising *= static_cast<double>(k + j);
    const double term = rising * s * product;
    sum += term;
    if (k >= cap) {
      if (k_max == 0)
        throw std::runtime_error("h_ell: k-sum did not converge within the term cap");
      break;
    }
    if (k >= 16 && term < 1e-14 * sum) break;
    product *= G(static_cast<double>(k), s, params);
  }
  return {s, (ell + 1) / (1.0 - s) * sum, k};
}

struct TauberPoint {
  double s = 0.0;
  double scaled = 0.0;    // H_l(s) (1-s)^{(3+l)/2}
  double limit = 0.0;     // K_l, the value the scaled quantity approaches as s -> 1
};

// Scaled generating-function values H_l(s) (1-s)^{(3+l)/2} next to their
// limit K_l.  Convergence of the scaled column toward K_l along s -> 1 is
// what the Tauberian transfer predicts.
inline std::vector<TauberPoint> tauberian_check(const Params& params, unsigned ell,
                                                const std::vector<double>& s_grid) {
  const double k = k_constant(params.c(), ell);
  std::vector<TauberPoint> rows;
  rows.reserve(s_grid.size());
  for (double s : s_grid) {
    const SeriesPoint h = h_ell(params, ell, s);
    rows.push_back({s, h.value * std::pow(1.0 - s, 0.5 * (3.0 + ell)), k});
  }
  return rows;
}

}  // namespace orrw
