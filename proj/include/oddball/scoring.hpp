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


// Per-dataset-token anomaly scores under the probability, oddballness and
// top-K methods, cross-model combination, and thresholding.

#ifndef ODDBALL_SCORING_HPP_
#define ODDBALL_SCORING_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "oddball/align.hpp"
#include "oddball/core.hpp"
#include "oddball/detail/text.hpp"
#include "oddball/dump.hpp"
#include "oddball/error.hpp"

namespace oddball {

enum class MethodKind { probability, oddballness, topk };

/// Scores read as follows: probability, lower is more anomalous; oddballness,
/// higher is more anomalous; topk, the rank, higher is more anomalous with
/// beyond-K as +inf.
struct Method {
  MethodKind kind = MethodKind::oddballness;
  GFunction g;

  static Method probability() { return {MethodKind::probability, {}}; }
  static Method oddballness(GFunction g = {}) {
    return {MethodKind::oddballness, g};
  }
  static Method topk() { return {MethodKind::topk, {}}; }

  static std::optional<Method> parse(std::string_view name,
                                     GFunction g = {}) {
    if (name == "probability") return probability();
    if (name == "oddballness") return oddballness(g);
    if (name == "topk") return topk();
    return std::nullopt;
  }

  std::string_view name() const noexcept {
    switch (kind) {
      case MethodKind::probability:
        return "probability";
      case MethodKind::topk:
        return "topk";
      case MethodKind::oddballness:
        break;
    }
    return "oddballness";
  }

  /// Human-facing label, e.g. "Oddballness" or "TopK".
  std::string_view title() const noexcept {
    switch (kind) {
      case MethodKind::probability:
        return "Probability";
      case MethodKind::topk:
        return "TopK";
      case MethodKind::oddballness:
        break;
    }
    return "Oddballness";
  }

  bool higher_is_anomalous() const noexcept {
    return kind != MethodKind::probability;
  }

  friend bool operator==(const Method&, const Method&) = default;
};

/// How subword scores reduce to one score per dataset token.
enum class Aggregation { max_anomaly, mean, first_subword };

inline std::optional<Aggregation> parse_aggregation(std::string_view name) {
  if (name == "max") return Aggregation::max_anomaly;
  if (name == "mean") return Aggregation::mean;
  if (name == "first") return Aggregation::first_subword;
  return std::nullopt;
}

inline std::string_view to_string(Aggregation policy) {
  switch (policy) {
    case Aggregation::mean:
      return "mean";
    case Aggregation::first_subword:
      return "first";
    case Aggregation::max_anomaly:
      break;
  }
  return "max";
}

struct ScoredToken {
  std::size_t index = 0;
  double score = 0.0;
  /// False when truncation left the oddballness uncertain; the score is then
  /// the lower bound.
  bool exact = true;
  std::optional<bool> flagged;

  friend bool operator==(const ScoredToken&, const ScoredToken&) = default;
};

/// Score of a single model token.
inline double score_record(const TokenRecord& record, Method method,
                           bool* exact = nullptr) {
  if (exact != nullptr) *exact = true;
  switch (method.kind) {
    case MethodKind::probability:
      return record.p_actual;
    case MethodKind::topk:
      return rank_of(record.distribution(), record.probability()).as_score();
    case MethodKind::oddballness:
      break;
  }
  const auto bounds =
      oddballness_bounds(record.distribution(), record.probability(), method.g);
  if (exact != nullptr) *exact = bounds.exact;
  return bounds.lower;
}

/// One score per dataset token, reduced over its subwords by `policy` in the
/// method's anomaly direction.
inline std::vector<ScoredToken> score_sentence(const SentenceDump& dump,
                                               const Alignment& alignment,
                                               Method method,
                                               Aggregation policy =
                                                   Aggregation::max_anomaly) {
  std::vector<ScoredToken> scored;
  scored.reserve(alignment.records.size());
  for (std::size_t d = 0; d < alignment.records.size(); ++d) {
    const auto& members = alignment.records[d];
    if (members.empty()) {
      throw ScoringError("sentence '" + dump.id + "': dataset token " +
                         std::to_string(d) + " has no model tokens");
    }
    ScoredToken token{d, 0.0, true, std::nullopt};
    double sum = 0.0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (members[m] >= dump.tokens.size()) {
        throw ScoringError("sentence '" + dump.id +
                           "': alignment refers to missing model token " +
                           std::to_string(members[m]));
      }
      bool exact = true;
      const double score = score_record(dump.tokens[members[m]], method, &exact);
      if (policy == Aggregation::first_subword) {
        token.score = score;
        token.exact = exact;
        break;
      }
      token.exact = token.exact && exact;
      sum += score;
      if (m == 0) {
        token.score = score;
      } else if (method.higher_is_anomalous()) {
        token.score = std::max(token.score, score);
      } else {
        token.score = std::min(token.score, score);
      }
    }
    if (policy == Aggregation::mean) {
      token.score = sum / static_cast<double>(members.size());
    }
    scored.push_back(token);
  }
  return scored;
}

/// Elementwise max for oddballness, min for probability. Flags are dropped.
inline std::vector<ScoredToken> combine(std::span<const ScoredToken> a,
                                        std::span<const ScoredToken> b,
                                        Method method) {
  if (method.kind == MethodKind::topk) {
    throw UnsupportedMethodError("top-K scores cannot be combined");
  }
  if (a.size() != b.size()) {
    throw CombinationError("cannot combine " + std::to_string(a.size()) +
                           " scores with " + std::to_string(b.size()));
  }
  std::vector<ScoredToken> combined;
  combined.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].index != b[i].index) {
      throw CombinationError("dataset token index mismatch at position " +
                             std::to_string(i));
    }
    const double score = method.higher_is_anomalous()
                             ? std::max(a[i].score, b[i].score)
                             : std::min(a[i].score, b[i].score);
    combined.push_back({a[i].index, score, a[i].exact && b[i].exact, {}});
  }
  return combined;
}

/// Throws InvalidThresholdError unless `threshold` lies in the method's
/// score domain: [0, 1] for probability and oddballness, a positive integer
/// K for topk.
inline void check_threshold(Method method, double threshold) {
  if (!std::isfinite(threshold)) {
    throw InvalidThresholdError("threshold is not finite");
  }
  if (method.kind == MethodKind::topk) {
    if (threshold < 1.0 || threshold != std::floor(threshold)) {
      throw InvalidThresholdError("top-K threshold must be a positive integer, got " +
                                  detail::format_double(threshold));
    }
    return;
  }
  if (threshold < 0.0 || threshold > 1.0) {
    throw InvalidThresholdError(std::string(method.name()) +
                                " threshold must lie in [0, 1], got " +
                                detail::format_double(threshold));
  }
}

inline bool flags(Method method, double score, double threshold) noexcept {
  return method.higher_is_anomalous() ? score > threshold : score < threshold;
}

inline std::vector<ScoredToken> apply_threshold(
    std::span<const ScoredToken> scores, Method method, double threshold) {
  check_threshold(method, threshold);
  std::vector<ScoredToken> flagged(scores.begin(), scores.end());
  for (auto& token : flagged) token.flagged = flags(method, token.score, threshold);
  return flagged;
}

/// One line of a score file.
struct ScoreRecord {
  std::string id;
  std::vector<ScoredToken> tokens;
  double exactness = 1.0;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

inline double exactness_of(std::span<const ScoredToken> tokens) {
  if (tokens.empty()) return 1.0;
  const auto exact = std::count_if(tokens.begin(), tokens.end(),
                                   [](const ScoredToken& t) { return t.exact; });
  return static_cast<double>(exact) / static_cast<double>(tokens.size());
}

inline ScoreRecord make_score_record(std::string id,
                                     std::vector<ScoredToken> tokens) {
  const double exactness = exactness_of(tokens);
  return {std::move(id), std::move(tokens), exactness};
}

/// Score file line: {"id", "scores", "flags", "exactness"}. Beyond-K ranks
/// are written as null; "flags" appears only once thresholds are applied.
inline void write_score_record(const ScoreRecord& record, std::ostream& out) {
  using Json = nlohmann::ordered_json;
  Json scores = Json::array();
  bool thresholded = !record.tokens.empty();
  for (const auto& token : record.tokens) {
    if (std::isinf(token.score)) {
      scores.push_back(nullptr);
    } else {
      scores.push_back(token.score);
    }
    thresholded = thresholded && token.flagged.has_value();
  }
  Json json = Json::object();
  json["id"] = record.id;
  json["scores"] = std::move(scores);
  if (thresholded) {
    Json flag_list = Json::array();
    for (const auto& token : record.tokens) flag_list.push_back(*token.flagged);
    json["flags"] = std::move(flag_list);
  }
  json["exactness"] = record.exactness;
  out << json.dump() << '\n';
  if (!out) throw Error("write failure for score record '" + record.id + "'");
}

inline void write_scores(std::span<const ScoreRecord> records,
                         std::ostream& out) {
  for (const auto& record : records) write_score_record(record, out);
}

inline std::vector<ScoreRecord> parse_scores(std::istream& in) {
  using Json = nlohmann::ordered_json;
  std::vector<ScoreRecord> records;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto content = detail::strip_cr(line);
    if (content.find_first_not_of(" \t") == std::string_view::npos) continue;
    Json json;
    try {
      json = Json::parse(content);
    } catch (const Json::parse_error& e) {
      throw ParseError(number, e.what());
    }
    if (!json.is_object() || !json.contains("id") || !json["id"].is_string() ||
        !json.contains("scores") || !json["scores"].is_array()) {
      throw ParseError(number, "score record needs \"id\" and \"scores\"");
    }
    ScoreRecord record;
    record.id = json["id"].get<std::string>();
    const auto& scores = json["scores"];
    for (std::size_t i = 0; i < scores.size(); ++i) {
      double score = std::numeric_limits<double>::infinity();
      if (scores[i].is_number()) {
        score = scores[i].get<double>();
      } else if (!scores[i].is_null()) {
        throw ParseError(number, "scores[" + std::to_string(i) +
                                     "] is neither a number nor null");
      }
      record.tokens.push_back({i, score, true, std::nullopt});
    }
    if (const auto it = json.find("flags"); it != json.end()) {
      if (!it->is_array() || it->size() != scores.size()) {
        throw ParseError(number, "\"flags\" does not match \"scores\"");
      }
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!(*it)[i].is_boolean()) {
          throw ParseError(number, "flags[" + std::to_string(i) +
                                       "] is not a boolean");
        }
        record.tokens[i].flagged = (*it)[i].get<bool>();
      }
    }
    if (const auto it = json.find("exactness"); it != json.end()) {
      if (!it->is_number()) throw ParseError(number, "\"exactness\" is not a number");
      record.exactness = it->get<double>();
    }
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace oddball

#endif  // ODDBALL_SCORING_HPP_
