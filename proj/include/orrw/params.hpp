#pragma once

#include <cmath>
#include <stdexcept>

namespace orrw {

// Reinforcement parameter of the walk.  An edge that has been traversed
// before carries weight c, a fresh edge weight 1; the next step is chosen
// proportionally to these weights.  c > 1 reinforces, c < 1 self-avoids,
// c = 1 is the simple symmetric walk.
class Params {
 public:
  explicit Params(double c) : c_(c) {
    if (!(std::isfinite(c) && c > 0.0))
      throw std::invalid_argument("reinforcement parameter c must be a finite positive real");
  }

  // Physics parametrization: gamma = -log c, i.e. c = exp(-gamma).
  static Params from_gamma(double gamma) {
    if (!std::isfinite(gamma))
      throw std::invalid_argument("gamma must be finite");
    return Params(std::exp(-gamma));
  }

  double c() const { return c_; }

  // Probability of taking the fresh edge when one fresh and one traversed
  // edge are adjacent: 1/(1+c).
  double fresh_prob() const { return 1.0 / (1.0 + c_); }

 private:
  double c_;
};

}  // namespace orrw
