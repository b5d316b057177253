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


// Prints oddballness, probability-of-probability and rank for every outcome
// of a small distribution, then the bounds once it is truncated to two
// candidates.

#include <cstdio>
#include <string>
#include <vector>

#include "oddball/core.hpp"

int main() {
  const std::vector<double> probs = {0.7, 0.25, 0.05};
  const oddball::FullDistribution dist(probs);
  const oddball::TruncatedDistribution head({0.7, 0.25}, 0.05);

  std::printf("p       odd     pi      rank  bounds\n");
  for (double p : probs) {
    const auto bounds = oddball::oddballness_bounds(head, p);
    const auto rank = oddball::rank_of(head, p);
    std::printf("%-6.2f  %-6.4f  %-6.4f  %-4s  [%.4f, %.4f]%s\n", p,
                oddball::oddballness(dist, p), oddball::prob_of_prob(dist, p),
                rank.beyond_k() ? ">K" : std::to_string(rank.value()).c_str(),
                bounds.lower, bounds.upper, bounds.exact ? " exact" : "");
  }
  return 0;
}
