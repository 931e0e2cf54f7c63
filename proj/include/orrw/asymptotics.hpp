#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace orrw {

enum class JMethod { quadrature, closed_form };

// J_l(c) = 2^{2c} int_0^inf x^{l-1} (e^x / (e^x+1)^2)^c dx, the constant
// behind the asymptotic moments of the range.
struct JValue {
  double c = 0.0;
  unsigned ell = 0;
  double value = 0.0;
  JMethod method = JMethod::quadrature;
  double abs_error_bound = 0.0;
};

namespace detail {

// Nodes and weights of n-point Gauss-Legendre on [-1, 1], by Newton iteration
// on the Legendre recurrence.  Accurate to ~1e-15; computed once.
struct GaussLegendre {
  std::vector<double> node, weight;

  explicit GaussLegendre(int n) : node(n), weight(n) {
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= n; ++j) {
          const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-15) break;
      }
      node[i] = -x;
      node[n - 1 - i] = x;
      weight[i] = weight[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }
};

inline const GaussLegendre& gl32() {
  static const GaussLegendre table(32);
  return table;
}

// log of the integrand: (l-1) log x - c (x + 2 log(1+e^{-x})) + 2c log 2.
// The log1p form keeps (e^x+1)^{2c} from overflowing for large x.
inline double j_log_integrand(double x, double c, unsigned ell) {
  return (ell - 1.0) * std::log(x) - c * (x + 2.0 * std::log1p(std::exp(-x))) +
         2.0 * c * std::numbers::ln2;
}

inline double j_integrate(double c, unsigned ell, double x_max, int grading_panels) {
  // geometrically graded panels accumulating toward 0, where the integrand
  // varies fastest relative to its argument
  std::vector<double> bounds;
  bounds.push_back(0.0);
  for (int j = grading_panels - 1; j >= 0; --j)
    bounds.push_back(x_max * std::pow(0.5, j));
  const auto& gl = gl32();
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < bounds.size(); ++p) {
    const double a = bounds[p], b = bounds[p + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double panel = 0.0;
    for (std::size_t i = 0; i < gl.node.size(); ++i)
      panel += gl.weight[i] * std::exp(j_log_integrand(mid + half * gl.node[i], c, ell));
    total += panel * half;
  }
  return total;
}

}  // namespace detail

inline JValue j_quadrature(double c, unsigned ell) {
  if (!(std::isfinite(c) && c > 0.0)) throw std::domain_error("j_quadrature: need c > 0");
  if (ell < 1) throw std::domain_error("j_quadrature: need ell >= 1");
  // truncation point: the tail beyond x_max is below 1e-14 of the value
  const double x_max =
      std::clamp((40.0 + ell * std::log(1.0 + 40.0 / c)) / c, 20.0, 2000.0);
  const int panels = std::max(
      10, static_cast<int>(std::ceil(std::log2(x_max / 0.125))) + 1);
  const double coarse = detail::j_integrate(c, ell, x_max, panels);
  const double fine = detail::j_integrate(c, ell, x_max, panels + 2);
  const double bound = std::abs(fine - coarse) + 1e-14 * std::abs(fine);
  return {c, ell, fine, JMethod::quadrature, bound};
}

// Finite-sum expressions available when c is an integer.  The alternating
// binomial sum sheds roughly a digit of accuracy per unit of c, hence the cap.
inline JValue j_closed_form(int c, unsigned ell) {
  if (c < 1 || c > 30) throw std::domain_error("j_closed_form: integer c in [1, 30]");
  if (ell != 1 && ell != 2) throw std::domain_error("j_closed_form: ell must be 1 or 2");

  double value = 0.0, abs_sum = 0.0;
  double binom = 1.0;  // C(c-1, j)
  if (ell == 1) {
    // J_1(c) = sum_j C(c-1,j) 2^{j+1} (-1)^{c-j} / (j - 2c + 1)
    for (int j = 0; j < c; ++j) {
      const double sign = ((c - j) % 2 == 0) ? 1.0 : -1.0;
      const double term =
          binom * sign * std::ldexp(1.0, j + 1) / (j - 2 * c + 1);
      value += term;
      abs_sum += std::abs(term);
      binom = binom * (c - 1 - j) / (j + 1);
    }
  } else {
    // J_2(c) = 2^{2c} sum_j C(c-1,j) (-1)^{c-j-1} / (2c-j-1)
    //          * (log 2 - sum_{i=1}^{2c-j-2} 1/(i 2^i))
    for (int j = 0; j < c; ++j) {
      const double sign = ((c - j - 1) % 2 == 0) ? 1.0 : -1.0;
      double tail = std::numbers::ln2;
      for (int i = 1; i <= 2 * c - j - 2; ++i) tail -= 1.0 / (i * std::ldexp(1.0, i));
      const double term =
          std::ldexp(1.0, 2 * c) * binom * sign / (2 * c - j - 1) * tail;
      value += term;
      abs_sum += std::abs(term);
      binom = binom * (c - 1 - j) / (j + 1);
    }
  }
  return {static_cast<double>(c), ell, value, JMethod::closed_form,
          4e-16 * abs_sum};
}

namespace detail {

// Gamma(l/2) for integer l >= 1 via the half-integer recursion.
inline double gamma_half_integer(unsigned ell) {
  double z = 0.5 * ell;
  double value = 1.0;
  while (z > 1.5) {
    z -= 1.0;
    value *= z;
  }
  if (z == 0.5) value *= std::sqrt(std::numbers::pi);       // Gamma(1/2)
  else if (z == 1.5) value *= 0.5 * std::sqrt(std::numbers::pi);  // Gamma(3/2)
  // Gamma(1) = 1 needs no factor
  return value;
}

}  // namespace detail

// lim_n E[(R_n / sqrt n)^l] = J_l(c) / (2^{(l-2)/2} Gamma(l/2)).
inline double moment_constant(double c, unsigned ell) {
  if (ell < 1) throw std::domain_error("moment_constant: need ell >= 1");
  const double j = j_quadrature(c, ell).value;
  return j / (std::exp2(0.5 * (ell - 2.0)) * detail::gamma_half_integer(ell));
}

// K_l = (l+1)/2^{(l+1)/2} * J_{l+1}(c): the constant in
// H_l(s) ~ K_l (1-s)^{-(3+l)/2} as s -> 1.
inline double k_constant(double c, unsigned ell) {
  const double j = j_quadrature(c, ell + 1).value;
  return (ell + 1.0) / std::exp2(0.5 * (ell + 1.0)) * j;
}

// Heuristic envelope for |lim E[(X_n/sqrt n)^2] - 1|:
// between |(1-c)/2| J_2(c) and |1-c| J_2(c).
struct VarianceBounds {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline VarianceBounds variance_bounds(double c) {
  if (!(std::isfinite(c) && c > 0.0)) throw std::domain_error("variance_bounds: need c > 0");
  const double j2 = j_quadrature(c, 2).value;
  const double lhs = std::abs(0.5 * (1.0 - c) * j2);
  return {lhs, 2.0 * lhs};
}

}  // namespace orrw
