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


// Mapping model subword tokens onto dataset tokens.
//
// Dataset tokens are located in the dumped sentence text in order, skipping
// whitespace between them; matching compares NFC forms so composed and
// decomposed spellings agree. Each model token is then assigned to the
// dataset token its whitespace-trimmed span overlaps most.

#ifndef ODDBALL_ALIGN_HPP_
#define ODDBALL_ALIGN_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "oddball/detail/text.hpp"
#include "oddball/dump.hpp"
#include "oddball/error.hpp"

namespace oddball {

/// For each dataset token, the indices of the model tokens mapped to it.
struct Alignment {
  std::vector<std::vector<std::size_t>> records;
  /// Dataset tokens that received no model token.
  std::vector<std::size_t> unaligned;

  bool total() const noexcept { return unaligned.empty(); }
};

namespace detail {

inline const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || normalizer == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") +
                u_errorName(status));
  }
  return *normalizer;
}

inline icu::UnicodeString to_nfc(const char32_t* begin, const char32_t* end) {
  const auto source = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(begin),
      static_cast<std::int32_t>(end - begin));
  UErrorCode status = U_ZERO_ERROR;
  auto normalized = nfc().normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error(std::string("NFC normalization failed: ") +
                u_errorName(status));
  }
  return normalized;
}

inline icu::UnicodeString to_nfc(std::string_view utf8) {
  const auto points = decode_utf8(utf8);
  return to_nfc(points.data(), points.data() + points.size());
}

inline std::string excerpt(const std::u32string& text, std::size_t start,
                           std::size_t end) {
  std::string out;
  icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(text.data() + start),
      static_cast<std::int32_t>(end - start))
      .toUTF8String(out);
  return out;
}

/// Code point spans of each dataset token within `text`.
inline std::vector<CharSpan> locate_tokens(
    const std::u32string& text, std::span<const std::string> dataset_tokens) {
  std::vector<CharSpan> spans;
  spans.reserve(dataset_tokens.size());
  std::size_t pos = 0;
  for (std::size_t i = 0; i < dataset_tokens.size(); ++i) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const auto wanted = to_nfc(dataset_tokens[i]);
    if (wanted.isEmpty()) {
      throw AlignmentError(i, pos, pos,
                           "dataset token " + std::to_string(i) + " is empty");
    }
    // NFC can change lengths, but never beyond a small factor.
    const std::size_t limit =
        std::min(text.size(), pos + 4 * static_cast<std::size_t>(
                                            wanted.countChar32()) + 4);
    std::size_t match = 0;
    for (std::size_t end = pos + 1; end <= limit; ++end) {
      if (to_nfc(text.data() + pos, text.data() + end) == wanted) {
        match = end;
        break;
      }
    }
    if (match == 0) {
      const std::size_t shown =
          std::min(text.size(), pos + static_cast<std::size_t>(
                                          wanted.countChar32()));
      throw AlignmentError(
          i, pos, shown,
          "dataset token " + std::to_string(i) + " \"" + dataset_tokens[i] +
              "\" does not match text span [" + std::to_string(pos) + ", " +
              std::to_string(shown) + ") \"" + excerpt(text, pos, shown) +
              "\"");
    }
    spans.push_back({pos, match});
    pos = match;
  }
  while (pos < text.size() && is_space(text[pos])) ++pos;
  if (pos < text.size()) {
    throw AlignmentError(dataset_tokens.size(), pos, text.size(),
                         "text continues past the last dataset token at [" +
                             std::to_string(pos) + ", " +
                             std::to_string(text.size()) + ") \"" +
                             excerpt(text, pos, text.size()) + "\"");
  }
  return spans;
}

}  // namespace detail

/// Maps every model token of `dump` to exactly one dataset token.
/// Throws AlignmentError when the dataset tokens do not spell out the text.
/// Model tokens that straddle a dataset token boundary go to the dataset token
/// they overlap most; whitespace-only model tokens go to the next dataset
/// token (or the last one at the end of the sentence).
inline Alignment align_to_dataset_tokens(
    const SentenceDump& dump, std::span<const std::string> dataset_tokens) {
  const auto text = detail::decode_utf8(dump.text);
  const auto spans = detail::locate_tokens(text, dataset_tokens);

  Alignment alignment;
  alignment.records.resize(dataset_tokens.size());
  if (dataset_tokens.empty()) return alignment;

  for (std::size_t r = 0; r < dump.tokens.size(); ++r) {
    std::size_t start = std::min(dump.tokens[r].span.start, text.size());
    std::size_t end = std::min(dump.tokens[r].span.end, text.size());
    while (start < end && detail::is_space(text[start])) ++start;
    while (end > start && detail::is_space(text[end - 1])) --end;

    std::size_t target = spans.size() - 1;
    if (start == end) {
      for (std::size_t d = 0; d < spans.size(); ++d) {
        if (spans[d].start >= end) {
          target = d;
          break;
        }
      }
    } else {
      std::size_t best_overlap = 0;
      for (std::size_t d = 0; d < spans.size(); ++d) {
        const std::size_t lo = std::max(start, spans[d].start);
        const std::size_t hi = std::min(end, spans[d].end);
        if (hi > lo && hi - lo > best_overlap) {
          best_overlap = hi - lo;
          target = d;
        }
      }
    }
    alignment.records[target].push_back(r);
  }
  for (std::size_t d = 0; d < alignment.records.size(); ++d) {
    if (alignment.records[d].empty()) alignment.unaligned.push_back(d);
  }
  return alignment;
}

}  // namespace oddball

#endif  // ODDBALL_ALIGN_HPP_
