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


// Runs tests/e2e/pipeline.txt in process, the same command list the ctest
// pipeline script feeds to the executable.

#ifndef ODDBALL_TESTS_SUPPORT_PIPELINE_HPP_
#define ODDBALL_TESTS_SUPPORT_PIPELINE_HPP_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "oddball/cli.hpp"

namespace oddball::testing {

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void replace_all(std::string& text, const std::string& from,
                        const std::string& to) {
  for (auto at = text.find(from); at != std::string::npos;
       at = text.find(from, at + to.size())) {
    text.replace(at, from.size(), to);
  }
}

/// Returns an empty string on success, otherwise what went wrong.
inline std::string run_pipeline(const std::filesystem::path& script,
                                const std::filesystem::path& fixtures,
                                const std::filesystem::path& out) {
  std::filesystem::remove_all(out);
  std::filesystem::create_directories(out);
  std::istringstream lines(read_file(script));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos) return "malformed line: " + line;
    const std::string capture = line.substr(0, colon);
    std::string command = line.substr(colon + 2);
    replace_all(command, "${FIXTURES}", fixtures.string());
    replace_all(command, "${OUT}", out.string());

    std::vector<std::string> args;
    std::istringstream words(command);
    for (std::string word; words >> word;) args.push_back(word);
    std::ostringstream stdout_text, stderr_text;
    if (const int code = cli::run(args, stdout_text, stderr_text); code != 0) {
      return "oddball " + command + " exited " + std::to_string(code) + ": " +
             stderr_text.str();
    }
    if (capture != "-") {
      std::ofstream(out / capture, std::ios::binary) << stdout_text.str();
    }
  }
  return {};
}

/// Names from `listing` whose contents differ between `actual` and `expected`.
inline std::vector<std::string> differing_files(
    const std::filesystem::path& listing, const std::filesystem::path& actual,
    const std::filesystem::path& expected) {
  std::vector<std::string> differ;
  std::istringstream names(read_file(listing));
  for (std::string name; std::getline(names, name);) {
    if (name.empty()) continue;
    if (!std::filesystem::exists(expected / name) ||
        read_file(actual / name) != read_file(expected / name)) {
      differ.push_back(name);
    }
  }
  return differ;
}

}  // namespace oddball::testing

#endif  // ODDBALL_TESTS_SUPPORT_PIPELINE_HPP_
