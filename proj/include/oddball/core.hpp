// Copyright 2026 The Oddball Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Oddballness of an outcome within a discrete probability distribution.
//
// For a distribution D = {p_1, p_2, ...} and an outcome probability p,
//
//   odd_D(p) = sum_j g(max(0, p_j - p)) / sum_j g(p_j)
//
// where g is monotone and continuous with g(0) = 0 and g(1) = 1. With the
// identity g the denominator is 1 and the measure reduces to
// sum_j max(0, p_j - p), the complement of sum_j min(p_j, p).
//
// Every function here is pure; values are immutable after construction.

#ifndef ODDBALL_CORE_HPP_
#define ODDBALL_CORE_HPP_

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oddball/error.hpp"

namespace oddball {

/// Inputs whose total mass differs from 1 by more than this are rejected;
/// anything closer is renormalized.
inline constexpr double kNormTolerance = 1e-3;

enum class GKind { identity, square, cube };

/// The transform g applied to probability gaps. Only convex kinds ship, which
/// the truncation bounds rely on.
class GFunction {
 public:
  constexpr GFunction() = default;
  constexpr explicit GFunction(GKind kind) : kind_(kind) {}

  constexpr double operator()(double x) const noexcept {
    switch (kind_) {
      case GKind::square:
        return x * x;
      case GKind::cube:
        return x * x * x;
      case GKind::identity:
        break;
    }
    return x;
  }

  constexpr GKind kind() const noexcept { return kind_; }
  constexpr bool is_identity() const noexcept {
    return kind_ == GKind::identity;
  }

  std::string_view name() const noexcept {
    switch (kind_) {
      case GKind::square:
        return "square";
      case GKind::cube:
        return "cube";
      case GKind::identity:
        break;
    }
    return "identity";
  }

  static std::optional<GFunction> parse(std::string_view name) {
    if (name == "identity") return GFunction(GKind::identity);
    if (name == "square") return GFunction(GKind::square);
    if (name == "cube") return GFunction(GKind::cube);
    return std::nullopt;
  }

  friend constexpr bool operator==(GFunction, GFunction) = default;

 private:
  GKind kind_ = GKind::identity;
};

/// Anything usable as g: maps [0,1] to [0,1], monotone, g(0)=0, g(1)=1.
/// The requirements beyond the signature are the caller's responsibility.
template <class G>
concept ProbabilityTransform = std::regular_invocable<const G&, double> &&
    std::convertible_to<std::invoke_result_t<const G&, double>, double>;

namespace detail {

inline void check_probability(double p, const char* what) {
  if (!std::isfinite(p)) {
    throw InvalidInputError(std::string(what) + " is not finite");
  }
  if (p < 0.0 || p > 1.0) {
    throw InvalidInputError(std::string(what) + " = " + std::to_string(p) +
                            " is outside [0, 1]");
  }
}

inline void check_mass(double mass) {
  if (!(std::abs(mass - 1.0) <= kNormTolerance)) {
    throw NormalizationError("total probability mass " +
                             std::to_string(mass) + " is not within " +
                             std::to_string(kNormTolerance) + " of 1");
  }
}

}  // namespace detail

/// A complete distribution, stored renormalized and sorted descending.
class FullDistribution {
 public:
  explicit FullDistribution(std::vector<double> probs)
      : probs_(std::move(probs)) {
    if (probs_.empty()) throw InvalidInputError("empty distribution");
    double mass = 0.0;
    for (double p : probs_) {
      detail::check_probability(p, "probability");
      mass += p;
    }
    detail::check_mass(mass);
    if (mass != 1.0) {
      for (double& p : probs_) p /= mass;
    }
    std::stable_sort(probs_.begin(), probs_.end(), std::greater<>());
  }

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double max() const noexcept { return probs_.front(); }

 private:
  std::vector<double> probs_;
};

/// Top-K probabilities (descending) plus the mass of all unstored outcomes.
/// Each unstored outcome is assumed no more likely than the smallest stored
/// one. Stored renormalized; `input_mass()` keeps the pre-normalization total
/// so callers can bring other values from the same source onto this scale.
class TruncatedDistribution {
 public:
  TruncatedDistribution(std::vector<double> top, double residual)
      : top_(std::move(top)), residual_(residual) {
    if (top_.empty()) {
      throw InvalidInputError("truncated distribution needs K >= 1");
    }
    double mass = 0.0;
    for (std::size_t k = 0; k < top_.size(); ++k) {
      detail::check_probability(top_[k], "top probability");
      if (k > 0 && top_[k] > top_[k - 1]) {
        throw InvalidInputError("top probabilities are not descending at " +
                                std::to_string(k));
      }
      mass += top_[k];
    }
    detail::check_probability(residual_, "residual");
    mass += residual_;
    detail::check_mass(mass);
    if (top_.back() == 0.0 && residual_ > 0.0) {
      throw InvalidTruncationError(
          "residual mass is positive but the smallest stored probability is "
          "0");
    }
    input_mass_ = mass;
    if (mass != 1.0) {
      for (double& p : top_) p /= mass;
      residual_ /= mass;
    }
  }

  std::span<const double> top() const noexcept { return top_; }
  double residual() const noexcept { return residual_; }
  std::size_t depth() const noexcept { return top_.size(); }
  double smallest() const noexcept { return top_.back(); }
  double input_mass() const noexcept { return input_mass_; }

 private:
  std::vector<double> top_;
  double residual_;
  double input_mass_ = 1.0;
};

/// An interval guaranteed to contain the oddballness of every full
/// distribution consistent with a truncation.
struct OddballnessBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;

  friend bool operator==(const OddballnessBounds&,
                         const OddballnessBounds&) = default;
};

/// Oddballness under an arbitrary transform g. `p` need not be a member of
/// `dist`.
template <ProbabilityTransform G>
double oddballness(const FullDistribution& dist, double p, const G& g) {
  detail::check_probability(p, "p");
  double numerator = 0.0;
  double denominator = 0.0;
  for (double q : dist.probs()) {
    denominator += g(q);
    if (q > p) numerator += g(q - p);
  }
  if (!(denominator > 0.0)) return 0.0;
  return std::clamp(numerator / denominator, 0.0, 1.0);
}

inline double oddballness(const FullDistribution& dist, double p,
                          GFunction g = {}) {
  if (!g.is_identity()) return oddballness<GFunction>(dist, p, g);
  detail::check_probability(p, "p");
  double sum = 0.0;
  for (double q : dist.probs()) {
    if (q <= p) break;  // sorted descending
    sum += q - p;
  }
  return std::clamp(sum, 0.0, 1.0);
}

/// Mass of "an event at least as likely as p happening": every outcome below
/// p counts in full, every outcome above it contributes p.
inline double prob_of_prob(const FullDistribution& dist, double p) {
  detail::check_probability(p, "p");
  double sum = 0.0;
  for (double q : dist.probs()) sum += std::min(q, p);
  return std::clamp(sum, 0.0, 1.0);
}

/// Bounds on oddballness when only the top-K head of the distribution is
/// known. The worst case packs the residual into as many outcomes of the
/// largest allowed probability as fit, plus one remainder outcome; the best
/// case spreads it into arbitrarily small outcomes.
inline OddballnessBounds oddballness_bounds(const TruncatedDistribution& dist,
                                            double p, GFunction g = {}) {
  detail::check_probability(p, "p");
  const double smallest = dist.smallest();
  const double residual = dist.residual();

  double stored_gap = 0.0;
  double stored_mass = 0.0;
  for (double q : dist.top()) {
    stored_mass += g(q);
    if (q > p) stored_gap += g(q - p);
  }

  // Unstored outcomes are all <= smallest, so none can exceed p here.
  const bool above_tail = p >= smallest;

  double packed_gap = 0.0;
  double packed_mass = 0.0;
  if (residual > 0.0) {
    const double full = std::floor(residual / smallest);
    const double rest = std::max(0.0, residual - full * smallest);
    if (!above_tail) {
      packed_gap = full * g(smallest - p) + (rest > p ? g(rest - p) : 0.0);
    }
    packed_mass = full * g(smallest) + g(rest);
  }

  OddballnessBounds bounds;
  if (g.is_identity()) {
    bounds.lower = std::clamp(stored_gap, 0.0, 1.0);
    bounds.upper = std::clamp(stored_gap + packed_gap, bounds.lower, 1.0);
    bounds.exact = above_tail;
  } else {
    // Unstored outcomes add between 0 and the packed amount to both sums.
    const double most_mass = stored_mass + packed_mass;
    bounds.lower =
        most_mass > 0.0 ? std::clamp(stored_gap / most_mass, 0.0, 1.0) : 0.0;
    bounds.upper =
        stored_mass > 0.0
            ? std::clamp((stored_gap + packed_gap) / stored_mass, bounds.lower,
                         1.0)
            : 1.0;
    bounds.exact = above_tail && residual == 0.0;
  }
  if (bounds.exact) bounds.upper = bounds.lower;
  return bounds;
}

/// 1-based rank among stored candidates, or "beyond K" when the probability
/// is below every stored one.
class Rank {
 public:
  constexpr explicit Rank(std::size_t value) : value_(value) {}
  static constexpr Rank beyond() { return Rank(); }

  constexpr bool beyond_k() const noexcept { return value_ == 0; }
  constexpr std::size_t value() const noexcept { return value_; }
  /// Beyond-K ranks compare as +inf.
  constexpr double as_score() const noexcept {
    return beyond_k() ? std::numeric_limits<double>::infinity()
                      : static_cast<double>(value_);
  }

  friend constexpr bool operator==(Rank, Rank) = default;

 private:
  constexpr Rank() = default;
  std::size_t value_ = 0;
};

/// Ties with stored candidates count in the token's favour: only strictly
/// greater probabilities push the rank down.
inline Rank rank_of(const TruncatedDistribution& dist, double p) {
  detail::check_probability(p, "p");
  if (p < dist.smallest()) return Rank::beyond();
  const auto top = dist.top();
  const auto greater = std::lower_bound(
      top.begin(), top.end(), p, [](double a, double b) { return a > b; });
  return Rank(static_cast<std::size_t>(greater - top.begin()) + 1);
}

}  // namespace oddball

#endif  // ODDBALL_CORE_HPP_
