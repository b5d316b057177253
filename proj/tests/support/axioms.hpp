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


// Randomized checks of the oddballness axioms, the probability-of-probability
// duality and truncation soundness. Shared by the unit suite and the
// acceptance runner so both exercise identical corpora.

#ifndef ODDBALL_TESTS_SUPPORT_AXIOMS_HPP_
#define ODDBALL_TESTS_SUPPORT_AXIOMS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oddball/core.hpp"
#include "support/oracles.hpp"

namespace oddball::testing {

struct CheckResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }

  void fail(const std::string& message) {
    if (failures++ == 0) first_failure = message;
  }

  void expect(bool condition, const std::string& message) {
    ++cases;
    if (!condition) fail(message);
  }
};

inline std::string describe(std::size_t trial, double p, double value) {
  std::ostringstream out;
  out.precision(17);
  out << "trial " << trial << ", p=" << p << ": got " << value;
  return out.str();
}

/// O0-O4 with F1 and F2 over `count` Dirichlet distributions of support
/// [min_n, max_n].
inline CheckResult check_axioms(std::uint64_t seed, std::size_t count,
                                std::size_t min_n, std::size_t max_n,
                                GFunction g) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckResult r;
  for (std::size_t t = 0; t < count; ++t) {
    const FullDistribution dist(random_distribution(rng, min_n, max_n));
    const auto probs = dist.probs();

    // O0 on members, on the impossible event and on arbitrary values.
    std::vector<double> probes(probs.begin(), probs.end());
    probes.push_back(0.0);
    probes.push_back(unit(rng));
    probes.push_back(1.0);
    for (double p : probes) {
      const double xi = oddballness(dist, p, g);
      r.expect(xi >= 0.0 && xi <= 1.0, "O0 " + describe(t, p, xi));
    }

    // O1.
    const double at_zero = oddballness(dist, 0.0, g);
    r.worst = std::max(r.worst, std::abs(at_zero - 1.0));
    r.expect(std::abs(at_zero - 1.0) <= 1e-12, "O1 " + describe(t, 0.0, at_zero));

    // O2, exactly.
    const double at_max = oddballness(dist, dist.max(), g);
    r.expect(at_max == 0.0, "O2 " + describe(t, dist.max(), at_max));

    // F1.
    for (double p : probs) {
      if (p > 0.5) {
        const double xi = oddballness(dist, p, g);
        r.expect(xi == 0.0, "F1 " + describe(t, p, xi));
      }
    }

    // O3 and O4: members in descending order have nondecreasing oddballness;
    // equal members agree exactly.
    double previous_p = probs[0];
    double previous_xi = oddballness(dist, previous_p, g);
    for (std::size_t j = 1; j < probs.size(); ++j) {
      const double xi = oddballness(dist, probs[j], g);
      if (probs[j] == previous_p) {
        r.expect(xi == previous_xi, "O3 " + describe(t, probs[j], xi));
      } else {
        r.expect(xi >= previous_xi, "O4 " + describe(t, probs[j], xi));
      }
      previous_p = probs[j];
      previous_xi = xi;
    }
    // O4 on arbitrary pairs, including non-members.
    const double a = unit(rng), b = unit(rng);
    const double lo = std::min(a, b), hi = std::max(a, b);
    r.expect(oddballness(dist, lo, g) >= oddballness(dist, hi, g),
             "O4 pair " + describe(t, lo, oddballness(dist, lo, g)));

    // F2 on a uniform distribution of the same support size.
    const std::size_t n = probs.size();
    const FullDistribution flat(
        std::vector<double>(n, 1.0 / static_cast<double>(n)));
    for (double p : flat.probs()) {
      const double xi = oddballness(flat, p, g);
      r.expect(xi == 0.0, "F2 " + describe(t, p, xi));
      break;  // all members are equal
    }
  }
  return r;
}

/// O5 quantified: moving each probability by at most eps (then
/// renormalizing) moves identity-g oddballness by at most 2*n*eps.
inline CheckResult check_continuity(std::uint64_t seed, std::size_t count,
                                    double eps, std::size_t max_n = 10) {
  std::mt19937_64 rng(seed);
  CheckResult r;
  std::uniform_real_distribution<double> shift(-eps, eps);
  for (std::size_t t = 0; t < count; ++t) {
    const auto base = random_distribution(rng, 2, max_n);
    const std::size_t n = base.size();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t i = pick(rng);
    const FullDistribution before(base);
    const double xi_before = oddballness(before, base[i]);

    // Random shifts plus the two extreme sign patterns.
    for (int pattern = 0; pattern < 3; ++pattern) {
      std::vector<double> moved(base);
      for (std::size_t j = 0; j < n; ++j) {
        double delta = shift(rng);
        if (pattern == 1) delta = (j == i) ? -eps : eps;
        if (pattern == 2) delta = (j == i) ? eps : -eps;
        moved[j] = std::max(0.0, base[j] + delta);
      }
      moved = normalized(moved);
      const FullDistribution after(moved);
      const double change = std::abs(oddballness(after, moved[i]) - xi_before);
      const double bound = 2.0 * static_cast<double>(n) * eps;
      r.worst = std::max(r.worst, change / bound);
      r.expect(change <= bound, "O5 " + describe(t, base[i], change));
    }
  }
  return r;
}

/// oddballness + prob_of_prob = 1, with the second computed as
/// sum_j min(p_j, p) directly.
inline CheckResult check_duality(std::uint64_t seed, std::size_t count,
                                 double tolerance) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CheckResult r;
  for (std::size_t t = 0; t < count; ++t) {
    const FullDistribution dist(random_distribution(rng, 2, 500));
    std::vector<double> probes(dist.probs().begin(), dist.probs().end());
    probes.push_back(0.0);
    probes.push_back(unit(rng));
    const std::vector<double> members(dist.probs().begin(), dist.probs().end());
    for (double p : probes) {
      const double xi = oddballness(dist, p);
      const double pi_library = prob_of_prob(dist, p);
      const double pi_oracle = oracle_prob_of_prob(members, p);
      const double gap = std::max(std::abs(xi + pi_oracle - 1.0),
                                  std::abs(xi + pi_library - 1.0));
      r.worst = std::max(r.worst, gap);
      r.expect(gap <= tolerance, "duality " + describe(t, p, gap));
    }
  }
  return r;
}

/// For each random distribution, truncates at every K in 1..n and checks that
/// the exact oddballness lies within the bounds and that exactness is
/// reported iff p >= the smallest stored probability.
inline CheckResult check_truncation(std::uint64_t seed, std::size_t count,
                                    std::size_t max_n, GFunction g,
                                    double tolerance = 1e-12) {
  std::mt19937_64 rng(seed);
  CheckResult r;
  for (std::size_t t = 0; t < count; ++t) {
    auto probs = random_distribution(rng, 2, max_n);
    std::sort(probs.begin(), probs.end(), std::greater<>());
    const std::size_t n = probs.size();
    const FullDistribution full(probs);

    std::vector<double> probes = {0.0, probs.front(), probs.back()};
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int k = 0; k < 4; ++k) probes.push_back(probs[pick(rng)]);
    std::vector<double> exact;
    for (double p : probes) exact.push_back(oddballness(full, p, g));

    for (std::size_t depth = 1; depth <= n; ++depth) {
      std::vector<double> top(probs.begin(), probs.begin() + depth);
      double residual = 0.0;
      for (std::size_t j = depth; j < n; ++j) residual += probs[j];
      const TruncatedDistribution head(std::move(top), residual);
      for (std::size_t q = 0; q < probes.size(); ++q) {
        const auto b = oddballness_bounds(head, probes[q], g);
        const bool inside = b.lower <= exact[q] + tolerance &&
                            exact[q] <= b.upper + tolerance;
        r.expect(inside, "bounds K=" + std::to_string(depth) + " " +
                             describe(t, probes[q], exact[q]));
        if (g.is_identity()) {
          const bool above = probes[q] >= head.smallest();
          r.expect(b.exact == above,
                   "exact flag K=" + std::to_string(depth) + " " +
                       describe(t, probes[q], b.exact));
        }
        r.expect(!b.exact || b.lower == b.upper, "exact bounds collapse");
      }
    }
  }
  return r;
}

}  // namespace oddball::testing

#endif  // ODDBALL_TESTS_SUPPORT_AXIOMS_HPP_
