#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace orrw {

// Finite probability vector over consecutive integers starting at `offset`.
// Laws truncated at a horizon keep their missing tail mass explicit in
// deficit(); nothing is ever renormalized silently.
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  DiscreteDistribution(std::int64_t offset, std::vector<double> probs)
      : offset_(offset), probs_(std::move(probs)) {
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
      sum += p;
    }
    deficit_ = 1.0 - sum;
    if (deficit_ < -1e-12)
      throw std::invalid_argument("probabilities sum to more than 1");
  }

  static DiscreteDistribution point_mass(std::int64_t value) {
    return DiscreteDistribution(value, {1.0});
  }

  std::int64_t offset() const { return offset_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  std::int64_t support_end() const {
    return offset_ + static_cast<std::int64_t>(probs_.size());
  }
  double deficit() const { return deficit_; }

  double pmf(std::int64_t value) const {
    if (value < offset_ || value >= support_end()) return 0.0;
    return probs_[static_cast<std::size_t>(value - offset_)];
  }

  // P(X <= value) over the retained mass.
  double cdf(std::int64_t value) const {
    double sum = 0.0;
    const std::int64_t hi = value < support_end() - 1 ? value : support_end() - 1;
    for (std::int64_t v = offset_; v <= hi; ++v)
      sum += probs_[static_cast<std::size_t>(v - offset_)];
    return sum;
  }

  // Moments of the truncated law (mass kept as-is; the deficit is the
  // caller's error budget).
  double mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i)
      m += probs_[i] * static_cast<double>(offset_ + static_cast<std::int64_t>(i));
    return m;
  }

  double variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
      const double x = static_cast<double>(offset_ + static_cast<std::int64_t>(i)) - m;
      v += probs_[i] * x * x;
    }
    return v;
  }

  // sum_m P(X = m) s^m over the retained support.
  double power_series(double s) const {
    double sum = 0.0;
    double sp = std::pow(s, static_cast<double>(offset_));
    for (double p : probs_) {
      sum += p * sp;
      sp *= s;
    }
    return sum;
  }

  // Drops leading/trailing zero entries; support bounds tighten, law unchanged.
  void trim() {
    std::size_t lo = 0;
    while (lo < probs_.size() && probs_[lo] == 0.0) ++lo;
    std::size_t hi = probs_.size();
    while (hi > lo && probs_[hi - 1] == 0.0) --hi;
    probs_.erase(probs_.begin() + static_cast<std::ptrdiff_t>(hi), probs_.end());
    probs_.erase(probs_.begin(), probs_.begin() + static_cast<std::ptrdiff_t>(lo));
    offset_ += static_cast<std::int64_t>(lo);
  }

 private:
  std::int64_t offset_ = 0;
  std::vector<double> probs_;
  double deficit_ = 1.0;
};

}  // namespace orrw
