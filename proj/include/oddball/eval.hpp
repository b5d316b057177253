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


// Token-level evaluation against labeled grammatical error detection data:
// MultiGED-style TSV corpora, micro-averaged F-beta and threshold sweeps.

#ifndef ODDBALL_EVAL_HPP_
#define ODDBALL_EVAL_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oddball/detail/text.hpp"
#include "oddball/error.hpp"
#include "oddball/scoring.hpp"

namespace oddball {

enum class Label { correct, incorrect };

struct LabeledToken {
  std::string surface;
  Label label = Label::correct;

  friend bool operator==(const LabeledToken&, const LabeledToken&) = default;
};

struct LabeledSentence {
  std::vector<LabeledToken> tokens;

  std::vector<std::string> surfaces() const {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& token : tokens) out.push_back(token.surface);
    return out;
  }

  friend bool operator==(const LabeledSentence&,
                         const LabeledSentence&) = default;
};

/// Reads `token<TAB>label` lines with labels "c"/"i"; blank lines separate
/// sentences and the last sentence may end at EOF without one.
inline std::vector<LabeledSentence> parse_multiged_tsv(std::istream& in) {
  std::vector<LabeledSentence> sentences;
  LabeledSentence current;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto content = detail::strip_cr(line);
    if (content.empty()) {
      if (!current.tokens.empty()) sentences.push_back(std::move(current));
      current = {};
      continue;
    }
    const auto fields = detail::split(content, '\t');
    if (fields.size() != 2) {
      throw ParseError(number, "expected token<TAB>label, got " +
                                   std::to_string(fields.size()) + " field(s)");
    }
    if (fields[0].empty()) throw ParseError(number, "empty token");
    Label label;
    if (fields[1] == "c") {
      label = Label::correct;
    } else if (fields[1] == "i") {
      label = Label::incorrect;
    } else {
      throw ParseError(number, "unknown label \"" + std::string(fields[1]) +
                                   "\" (expected c or i)");
    }
    current.tokens.push_back({std::string(fields[0]), label});
  }
  if (in.bad()) throw Error("read failure after line " + std::to_string(number));
  if (!current.tokens.empty()) sentences.push_back(std::move(current));
  if (sentences.empty()) throw ParseError(number, "no sentences in TSV input");
  return sentences;
}

inline void write_multiged_tsv(std::span<const LabeledSentence> sentences,
                               std::ostream& out) {
  for (const auto& sentence : sentences) {
    for (const auto& token : sentence.tokens) {
      out << token.surface << '\t'
          << (token.label == Label::incorrect ? 'i' : 'c') << '\n';
    }
    out << '\n';
  }
}

/// All gold labels of a corpus in reading order.
inline std::vector<Label> flatten_labels(
    std::span<const LabeledSentence> sentences) {
  std::vector<Label> labels;
  for (const auto& sentence : sentences) {
    for (const auto& token : sentence.tokens) labels.push_back(token.label);
  }
  return labels;
}

struct EvalResult {
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double beta = 0.5;

  friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

/// Precision, recall and F-beta from counts; each is 0 when undefined.
inline EvalResult make_result(std::size_t tp, std::size_t fp, std::size_t fn,
                              double beta = 0.5) {
  EvalResult r{tp, fp, fn, 0.0, 0.0, 0.0, beta};
  const auto t = static_cast<double>(tp);
  if (tp + fp > 0) r.precision = t / static_cast<double>(tp + fp);
  if (tp + fn > 0) r.recall = t / static_cast<double>(tp + fn);
  const double b2 = beta * beta;
  const double denominator = b2 * r.precision + r.recall;
  if (denominator > 0.0) {
    r.f_beta = (1.0 + b2) * r.precision * r.recall / denominator;
  }
  return r;
}

/// Micro-averaged counts over all tokens; "incorrect" is the positive class.
inline EvalResult f_beta(const std::vector<bool>& flags,
                         std::span<const Label> gold, double beta = 0.5) {
  if (flags.size() != gold.size()) {
    throw EvalError("length mismatch: " + std::to_string(flags.size()) +
                    " predictions for " + std::to_string(gold.size()) +
                    " gold labels");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    const bool positive = gold[i] == Label::incorrect;
    if (flags[i] && positive) ++tp;
    if (flags[i] && !positive) ++fp;
    if (!flags[i] && positive) ++fn;
  }
  return make_result(tp, fp, fn, beta);
}

inline EvalResult evaluate_run(std::span<const double> scores,
                               std::span<const Label> gold, double threshold,
                               Method method, double beta = 0.5) {
  check_threshold(method, threshold);
  std::vector<bool> predicted(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    predicted[i] = flags(method, scores[i], threshold);
  }
  return f_beta(predicted, gold, beta);
}

struct SweepPoint {
  double threshold = 0.0;
  std::size_t flagged = 0;
  EvalResult result;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

struct SweepResult {
  /// In grid order (ascending threshold).
  std::vector<SweepPoint> grid;
  double best_threshold = 0.0;
  double best_f = 0.0;
  /// Gold has no incorrect tokens, so every F is 0.
  bool degenerate = false;
};

/// Evaluates every grid point in one pass over the scores sorted by anomaly.
/// The best point maximizes F; ties go to the point flagging fewer tokens,
/// then to the stricter threshold.
inline SweepResult tune_threshold(std::span<const double> scores,
                                  std::span<const Label> gold, Method method,
                                  std::span<const double> grid,
                                  double beta = 0.5) {
  if (grid.empty()) throw EvalError("threshold grid is empty");
  if (scores.size() != gold.size()) {
    throw EvalError("length mismatch: " + std::to_string(scores.size()) +
                    " scores for " + std::to_string(gold.size()) +
                    " gold labels");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    check_threshold(method, grid[i]);
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw EvalError("threshold grid must be strictly ascending");
    }
  }

  // Flip probability scores so that "flagged" always means key > cut.
  const bool higher = method.higher_is_anomalous();
  std::vector<std::pair<double, bool>> keyed(scores.size());
  std::size_t positives = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool positive = gold[i] == Label::incorrect;
    positives += positive ? 1 : 0;
    keyed[i] = {higher ? scores[i] : -scores[i], positive};
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  SweepResult sweep;
  sweep.grid.resize(grid.size());
  sweep.degenerate = positives == 0;
  std::size_t next = 0, tp = 0, fp = 0;
  for (std::size_t step = 0; step < grid.size(); ++step) {
    // Visit cuts from the strictest to the loosest.
    const std::size_t g = higher ? grid.size() - 1 - step : step;
    const double cut = higher ? grid[g] : -grid[g];
    while (next < keyed.size() && keyed[next].first > cut) {
      (keyed[next].second ? tp : fp) += 1;
      ++next;
    }
    sweep.grid[g] = {grid[g], next, make_result(tp, fp, positives - tp, beta)};
  }

  std::size_t best = higher ? grid.size() - 1 : 0;
  for (std::size_t step = 0; step < grid.size(); ++step) {
    const std::size_t g = higher ? grid.size() - 1 - step : step;
    const auto& candidate = sweep.grid[g];
    const auto& incumbent = sweep.grid[best];
    if (candidate.result.f_beta > incumbent.result.f_beta ||
        (candidate.result.f_beta == incumbent.result.f_beta &&
         candidate.flagged < incumbent.flagged)) {
      best = g;
    }
  }
  sweep.best_threshold = sweep.grid[best].threshold;
  sweep.best_f = sweep.grid[best].result.f_beta;
  return sweep;
}

namespace detail {

/// The double nearest to mantissa * 10^exponent.
inline double decimal(int mantissa, int exponent) {
  return std::stod(std::to_string(mantissa) + "e" + std::to_string(exponent));
}

}  // namespace detail

/// Oddballness: 0.00 to 1.00 in steps of 0.01. Probability: 1-2-5 steps from
/// 1e-6 to 1e-1. Top-K: every K from 1 to `depth`.
inline std::vector<double> default_grid(MethodKind kind, std::size_t depth = 512) {
  std::vector<double> grid;
  switch (kind) {
    case MethodKind::oddballness:
      for (int i = 0; i <= 100; ++i) grid.push_back(detail::decimal(i, -2));
      break;
    case MethodKind::probability:
      for (int e = -6; e <= -2; ++e) {
        for (int m : {1, 2, 5}) grid.push_back(detail::decimal(m, e));
      }
      grid.push_back(detail::decimal(1, -1));
      break;
    case MethodKind::topk:
      for (std::size_t k = 1; k <= std::max<std::size_t>(depth, 1); ++k) {
        grid.push_back(static_cast<double>(k));
      }
      break;
  }
  return grid;
}

/// Adds every m * 10^e (m = 1..9) strictly between the neighbours of `best`
/// in `grid`, for a second, finer sweep.
inline std::vector<double> refine_probability_grid(std::span<const double> grid,
                                                   double best) {
  const auto it = std::find(grid.begin(), grid.end(), best);
  if (it == grid.end()) throw EvalError("best threshold is not on the grid");
  const double lo = it == grid.begin() ? best / 10.0 : *(it - 1);
  const double hi = it + 1 == grid.end() ? std::min(1.0, best * 10.0) : *(it + 1);
  std::vector<double> refined(grid.begin(), grid.end());
  const int first = static_cast<int>(std::floor(std::log10(lo))) - 1;
  const int last = static_cast<int>(std::ceil(std::log10(hi))) + 1;
  for (int e = first; e <= last; ++e) {
    for (int m = 1; m <= 9; ++m) {
      const double value = detail::decimal(m, e);
      if (value > lo && value < hi) refined.push_back(value);
    }
  }
  std::sort(refined.begin(), refined.end());
  refined.erase(std::unique(refined.begin(), refined.end()), refined.end());
  return refined;
}

/// Gold sentences with their labels replaced by predictions.
inline std::vector<LabeledSentence> predicted_sentences(
    std::span<const LabeledSentence> gold, const std::vector<bool>& flagged) {
  std::vector<LabeledSentence> out(gold.begin(), gold.end());
  std::size_t i = 0;
  for (auto& sentence : out) {
    for (auto& token : sentence.tokens) {
      if (i >= flagged.size()) throw EvalError("fewer predictions than tokens");
      token.label = flagged[i++] ? Label::incorrect : Label::correct;
    }
  }
  if (i != flagged.size()) throw EvalError("more predictions than tokens");
  return out;
}

}  // namespace oddball

#endif  // ODDBALL_EVAL_HPP_
