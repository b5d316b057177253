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


// Distribution dumps: the line-delimited JSON format that carries language
// model output into scoring. One sentence per line:
//
//   {"id": "...", "text": "...",
//    "meta": {"model": "...", "mode": "causal"|"masked", "prompt": "...",
//             "k": 512},
//    "tokens": [{"t": " York", "span": [14, 19], "p": 0.93,
//                "top": [0.93, 0.01, ...], "res": 0.002}, ...]}
//
// Spans are [start, end) code point offsets into "text". "top" is
// descending; a missing "res" means zero; a missing "prompt" means none.

#ifndef ODDBALL_DUMP_HPP_
#define ODDBALL_DUMP_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "oddball/core.hpp"
#include "oddball/detail/text.hpp"
#include "oddball/error.hpp"

namespace oddball {

enum class Mode { causal, masked };

inline std::string_view to_string(Mode mode) {
  return mode == Mode::masked ? "masked" : "causal";
}

inline std::optional<Mode> parse_mode(std::string_view name) {
  if (name == "causal") return Mode::causal;
  if (name == "masked") return Mode::masked;
  return std::nullopt;
}

struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

/// One model token. Probabilities are kept exactly as dumped; use
/// `distribution()` and `probability()` for the renormalized view.
struct TokenRecord {
  std::string text;
  CharSpan span;
  double p_actual = 0.0;
  std::vector<double> top;
  double residual = 0.0;

  TruncatedDistribution distribution() const {
    return TruncatedDistribution(top, residual);
  }

  /// p_actual on the same scale as `distribution()`.
  double probability() const {
    const auto dist = distribution();
    return std::min(1.0, p_actual / dist.input_mass());
  }

  friend bool operator==(const TokenRecord&, const TokenRecord&) = default;
};

struct DumpMeta {
  std::string model;
  Mode mode = Mode::causal;
  std::optional<std::string> prompt;
  std::size_t k = 512;

  friend bool operator==(const DumpMeta&, const DumpMeta&) = default;
};

struct SentenceDump {
  std::string id;
  std::string text;
  DumpMeta meta;
  std::vector<TokenRecord> tokens;

  friend bool operator==(const SentenceDump&, const SentenceDump&) = default;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

/// Every invariant violation in `sentence`, in field order.
inline std::vector<ValidationIssue> find_violations(
    const SentenceDump& sentence) {
  std::vector<ValidationIssue> issues;
  if (sentence.meta.k < 1) {
    issues.push_back({"meta.k", "truncation depth must be >= 1"});
  }
  const std::size_t text_length = detail::code_point_count(sentence.text);
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const auto& token = sentence.tokens[i];
    const std::string prefix = "tokens[" + std::to_string(i) + "].";
    if (token.span.start > token.span.end) {
      issues.push_back({prefix + "span", "start is after end"});
    } else if (token.span.end > text_length) {
      issues.push_back({prefix + "span", "end " +
                                             std::to_string(token.span.end) +
                                             " exceeds text length " +
                                             std::to_string(text_length)});
    } else if (token.span.start < previous_end) {
      issues.push_back(
          {prefix + "span", "overlaps or precedes the previous token"});
    }
    previous_end = std::max(previous_end, token.span.end);
    if (!std::isfinite(token.p_actual) || token.p_actual < 0.0 ||
        token.p_actual > 1.0) {
      issues.push_back({prefix + "p", "probability outside [0, 1]"});
    }
    if (token.top.size() > sentence.meta.k) {
      issues.push_back({prefix + "top", "stores " +
                                            std::to_string(token.top.size()) +
                                            " probabilities but k is " +
                                            std::to_string(sentence.meta.k)});
    }
    try {
      (void)token.distribution();
    } catch (const Error& e) {
      issues.push_back({prefix + "top", e.what()});
    }
  }
  return issues;
}

/// Throws ValidationError for the first violation.
inline void validate(const SentenceDump& sentence) {
  const auto issues = find_violations(sentence);
  if (!issues.empty()) {
    throw ValidationError(sentence.id, issues.front().field,
                          issues.front().message);
  }
}

namespace detail {

using Json = nlohmann::ordered_json;

inline const Json& require(const Json& object, const char* key,
                           std::size_t line, std::string_view where) {
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(line, std::string(where) + ": missing \"" + key + "\"");
  }
  return *it;
}

inline std::string require_string(const Json& object, const char* key,
                                  std::size_t line, std::string_view where) {
  const auto& value = require(object, key, line, where);
  if (!value.is_string()) {
    throw ParseError(line,
                     std::string(where) + ": \"" + key + "\" is not a string");
  }
  return value.get<std::string>();
}

inline double as_number(const Json& value, std::size_t line,
                        std::string_view where) {
  if (!value.is_number()) {
    throw ParseError(line, std::string(where) + " is not a number");
  }
  return value.get<double>();
}

inline std::int64_t as_integer(const Json& value, std::size_t line,
                               std::string_view where) {
  if (!value.is_number_integer()) {
    throw ParseError(line, std::string(where) + " is not an integer");
  }
  return value.get<std::int64_t>();
}

inline std::size_t as_offset(const Json& value, std::size_t line,
                             std::string_view where) {
  const auto offset = as_integer(value, line, where);
  if (offset < 0) throw ParseError(line, std::string(where) + " is negative");
  return static_cast<std::size_t>(offset);
}

inline TokenRecord decode_token(const Json& json, std::size_t line,
                                const std::string& where) {
  if (!json.is_object()) throw ParseError(line, where + " is not an object");
  TokenRecord token;
  token.text = require_string(json, "t", line, where);
  const auto& span = require(json, "span", line, where);
  if (!span.is_array() || span.size() != 2) {
    throw ParseError(line, where + ".span is not a [start, end] pair");
  }
  token.span.start = as_offset(span[0], line, where + ".span[0]");
  token.span.end = as_offset(span[1], line, where + ".span[1]");
  token.p_actual = as_number(require(json, "p", line, where), line, where + ".p");
  const auto& top = require(json, "top", line, where);
  if (!top.is_array() || top.empty()) {
    throw ParseError(line, where + ".top is not a nonempty array");
  }
  token.top.reserve(top.size());
  for (const auto& p : top) token.top.push_back(as_number(p, line, where + ".top"));
  if (const auto res = json.find("res"); res != json.end()) {
    token.residual = as_number(*res, line, where + ".res");
  }
  return token;
}

inline SentenceDump decode_sentence(const Json& json, std::size_t line) {
  if (!json.is_object()) throw ParseError(line, "record is not an object");
  SentenceDump sentence;
  sentence.id = require_string(json, "id", line, "record");
  sentence.text = require_string(json, "text", line, "record");

  const auto& meta = require(json, "meta", line, "record");
  if (!meta.is_object()) throw ParseError(line, "meta is not an object");
  sentence.meta.model = require_string(meta, "model", line, "meta");
  const auto mode_name = require_string(meta, "mode", line, "meta");
  const auto mode = parse_mode(mode_name);
  if (!mode) throw ParseError(line, "meta: unknown mode \"" + mode_name + "\"");
  sentence.meta.mode = *mode;
  if (const auto prompt = meta.find("prompt");
      prompt != meta.end() && !prompt->is_null()) {
    if (!prompt->is_string()) {
      throw ParseError(line, "meta: \"prompt\" is not a string");
    }
    sentence.meta.prompt = prompt->get<std::string>();
  }
  const auto k = as_integer(require(meta, "k", line, "meta"), line, "meta.k");
  if (k < 0) throw ParseError(line, "meta.k is negative");
  sentence.meta.k = static_cast<std::size_t>(k);

  const auto& tokens = require(json, "tokens", line, "record");
  if (!tokens.is_array()) throw ParseError(line, "tokens is not an array");
  sentence.tokens.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    sentence.tokens.push_back(
        decode_token(tokens[i], line, "tokens[" + std::to_string(i) + "]"));
  }
  return sentence;
}

inline Json encode_sentence(const SentenceDump& sentence) {
  Json meta = Json::object();
  meta["model"] = sentence.meta.model;
  meta["mode"] = to_string(sentence.meta.mode);
  if (sentence.meta.prompt) meta["prompt"] = *sentence.meta.prompt;
  meta["k"] = sentence.meta.k;

  Json tokens = Json::array();
  for (const auto& token : sentence.tokens) {
    Json record = Json::object();
    record["t"] = token.text;
    record["span"] = Json::array({token.span.start, token.span.end});
    record["p"] = token.p_actual;
    record["top"] = token.top;
    if (token.residual != 0.0) record["res"] = token.residual;
    tokens.push_back(std::move(record));
  }

  Json json = Json::object();
  json["id"] = sentence.id;
  json["text"] = sentence.text;
  json["meta"] = std::move(meta);
  json["tokens"] = std::move(tokens);
  return json;
}

}  // namespace detail

/// Streams validated sentences from a dump, one line at a time.
class DumpReader {
 public:
  explicit DumpReader(std::istream& in) : in_(&in) {}

  /// The next sentence, or nullopt at end of input. Blank lines are skipped.
  /// Throws ParseError or ValidationError.
  std::optional<SentenceDump> next() {
    auto sentence = next_unvalidated();
    if (sentence) validate(*sentence);
    return sentence;
  }

  /// As `next()` but leaves invariant checking to the caller.
  std::optional<SentenceDump> next_unvalidated() {
    std::string line;
    while (std::getline(*in_, line)) {
      ++line_;
      const auto content = detail::strip_cr(line);
      if (content.find_first_not_of(" \t") == std::string_view::npos) continue;
      detail::Json json;
      try {
        json = detail::Json::parse(content);
      } catch (const detail::Json::parse_error& e) {
        throw ParseError(line_, e.what());
      }
      return detail::decode_sentence(json, line_);
    }
    if (in_->bad()) throw Error("read failure after line " + std::to_string(line_));
    return std::nullopt;
  }

  /// Line number of the most recently read record.
  std::size_t line() const noexcept { return line_; }

 private:
  std::istream* in_;
  std::size_t line_ = 0;
};

inline std::vector<SentenceDump> parse_dump(std::istream& in) {
  std::vector<SentenceDump> sentences;
  DumpReader reader(in);
  while (auto sentence = reader.next()) sentences.push_back(std::move(*sentence));
  return sentences;
}

inline void write_sentence(const SentenceDump& sentence, std::ostream& out) {
  out << detail::encode_sentence(sentence).dump() << '\n';
  if (!out) throw Error("write failure for sentence '" + sentence.id + "'");
}

inline void write_dump(std::span<const SentenceDump> sentences,
                       std::ostream& out) {
  for (const auto& sentence : sentences) write_sentence(sentence, out);
  out.flush();
  if (!out) throw Error("write failure");
}

/// Summary of a full validation pass over a dump.
struct DumpReport {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  /// Tokens whose oddballness is exact under truncation (p >= smallest
  /// stored probability).
  std::size_t exact_tokens = 0;
  /// Tokens more probable than every stored candidate; they score 0 but
  /// usually point at an inconsistent dump.
  std::size_t above_top = 0;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  double exactness() const noexcept {
    return tokens == 0 ? 1.0
                       : static_cast<double>(exact_tokens) /
                             static_cast<double>(tokens);
  }
};

/// Checks every line of a dump, collecting all violations instead of
/// stopping at the first.
inline DumpReport validate_dump(std::istream& in) {
  DumpReport report;
  DumpReader reader(in);
  while (true) {
    std::optional<SentenceDump> sentence;
    try {
      sentence = reader.next_unvalidated();
    } catch (const ParseError& e) {
      report.violations.push_back(e.what());
      continue;
    }
    if (!sentence) break;
    ++report.sentences;
    const auto issues = find_violations(*sentence);
    for (const auto& issue : issues) {
      report.violations.push_back(
          ValidationError(sentence->id, issue.field, issue.message).what());
    }
    if (!issues.empty()) continue;
    for (const auto& token : sentence->tokens) {
      ++report.tokens;
      const auto dist = token.distribution();
      const double p = token.probability();
      if (p >= dist.smallest()) ++report.exact_tokens;
      if (p > dist.top().front()) ++report.above_top;
    }
  }
  return report;
}

}  // namespace oddball

#endif  // ODDBALL_DUMP_HPP_
