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


#ifndef ODDBALL_DETAIL_TEXT_HPP_
#define ODDBALL_DETAIL_TEXT_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

namespace oddball::detail {

/// Decodes UTF-8 into code points. Ill-formed sequences become U+FFFD so
/// offsets stay defined.
inline std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    UChar32 c = 0;
    U8_NEXT(bytes, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

inline std::size_t code_point_count(std::string_view text) {
  return decode_utf8(text).size();
}

inline bool is_space(char32_t c) {
  return u_isUWhiteSpace(static_cast<UChar32>(c)) != 0;
}

/// Shortest representation that parses back to the same double, in plain
/// decimal notation unless the magnitude is extreme.
inline std::string format_double(double value) {
  char buffer[64];
  const double magnitude = std::abs(value);
  const auto format = magnitude == 0.0 || (magnitude >= 1e-7 && magnitude < 1e15)
                          ? std::chars_format::fixed
                          : std::chars_format::general;
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value, format);
  if (result.ec != std::errc()) throw std::runtime_error("to_chars failed");
  return std::string(buffer, result.ptr);
}

inline std::vector<std::string_view> split(std::string_view text,
                                           char separator) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto end = text.find(separator, start);
    if (end == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace oddball::detail

#endif  // ODDBALL_DETAIL_TEXT_HPP_
