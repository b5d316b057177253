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


// Run summaries: one row per (run, method) with the tuned threshold and the
// dev/test F0.5, rendered as a text table and a TSV summary.

#ifndef ODDBALL_REPORT_HPP_
#define ODDBALL_REPORT_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oddball/detail/text.hpp"
#include "oddball/error.hpp"
#include "oddball/eval.hpp"
#include "oddball/scoring.hpp"

namespace oddball {

struct RunSummary {
  std::string run;
  Method method;
  double threshold = 0.0;
  std::optional<double> dev_f;
  EvalResult test;
  /// Fraction of test tokens with exact scores.
  double exactness = 1.0;
};

namespace detail {

inline std::string percent(double f) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", 100.0 * f);
  return buffer;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const EvalResult& r) {
  nlohmann::ordered_json json;
  json["tp"] = r.true_positives;
  json["fp"] = r.false_positives;
  json["fn"] = r.false_negatives;
  json["precision"] = r.precision;
  json["recall"] = r.recall;
  json["f"] = r.f_beta;
  json["beta"] = r.beta;
  return json;
}

inline EvalResult eval_result_from_json(const nlohmann::ordered_json& json) {
  return make_result(json.at("tp").get<std::size_t>(),
                     json.at("fp").get<std::size_t>(),
                     json.at("fn").get<std::size_t>(),
                     json.at("beta").get<double>());
}

inline nlohmann::ordered_json to_json(const RunSummary& summary) {
  nlohmann::ordered_json json;
  json["run"] = summary.run;
  json["method"] = summary.method.name();
  json["g"] = summary.method.g.name();
  json["threshold"] = summary.threshold;
  json["dev_f"] = summary.dev_f ? nlohmann::ordered_json(*summary.dev_f)
                                : nlohmann::ordered_json(nullptr);
  json["test"] = to_json(summary.test);
  json["exactness"] = summary.exactness;
  return json;
}

inline RunSummary run_summary_from_json(const nlohmann::ordered_json& json) {
  try {
    RunSummary summary;
    summary.run = json.at("run").get<std::string>();
    const auto g = GFunction::parse(json.value("g", std::string("identity")));
    const auto method =
        Method::parse(json.at("method").get<std::string>(), g.value_or(GFunction{}));
    if (!method || !g) throw Error("unknown method or g in run summary");
    summary.method = *method;
    summary.threshold = json.at("threshold").get<double>();
    if (!json.at("dev_f").is_null()) summary.dev_f = json.at("dev_f").get<double>();
    summary.test = eval_result_from_json(json.at("test"));
    summary.exactness = json.value("exactness", 1.0);
    return summary;
  } catch (const nlohmann::ordered_json::exception& e) {
    throw Error(std::string("malformed run summary: ") + e.what());
  }
}

/// Fixed-width table with the columns Run, Method, Threshold, Dev F0.5,
/// Test F0.5 (F values in percent).
inline std::string format_table(const std::vector<RunSummary>& rows) {
  std::vector<std::vector<std::string>> cells = {
      {"Run", "Method", "Threshold", "Dev F0.5", "Test F0.5"}};
  for (const auto& row : rows) {
    cells.push_back({row.run, std::string(row.method.title()),
                     detail::format_double(row.threshold),
                     row.dev_f ? detail::percent(*row.dev_f) : "-",
                     detail::percent(row.test.f_beta)});
  }
  std::vector<std::size_t> widths(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      widths[c] = std::max(widths[c], line[c].size());
    }
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    for (std::size_t c = 0; c < cells[r].size(); ++c) {
      if (c > 0) out << "  ";
      out << cells[r][c];
      if (c + 1 < cells[r].size()) {
        out << std::string(widths[c] - cells[r][c].size(), ' ');
      }
    }
    out << '\n';
    if (r == 0) {
      std::size_t total = 0;
      for (auto w : widths) total += w;
      out << std::string(total + 2 * (widths.size() - 1), '-') << '\n';
    }
  }
  return out.str();
}

inline void write_summary_tsv(const std::vector<RunSummary>& rows,
                              std::ostream& out) {
  out << "Run\tMethod\tThreshold\tDev F0.5\tTest F0.5\n";
  for (const auto& row : rows) {
    out << row.run << '\t' << row.method.title() << '\t'
        << detail::format_double(row.threshold) << '\t'
        << (row.dev_f ? detail::percent(*row.dev_f) : "-") << '\t'
        << detail::percent(row.test.f_beta) << '\n';
  }
}

/// Expected dev ordering within a run: oddballness >= probability >= topK.
/// Returns one message per violated pair; an empirical expectation, not an
/// invariant.
inline std::vector<std::string> check_method_ordering(
    const std::vector<RunSummary>& rows) {
  std::map<std::string, std::map<MethodKind, double>> dev;
  for (const auto& row : rows) {
    if (row.dev_f) dev[row.run][row.method.kind] = *row.dev_f;
  }
  std::vector<std::string> warnings;
  const auto compare = [&](const std::string& run,
                           const std::map<MethodKind, double>& f,
                           MethodKind better, MethodKind worse,
                           const char* better_name, const char* worse_name) {
    const auto a = f.find(better);
    const auto b = f.find(worse);
    if (a == f.end() || b == f.end() || a->second >= b->second) return;
    warnings.push_back(run + ": " + better_name + " dev F0.5 " +
                       detail::percent(a->second) + " < " + worse_name +
                       " dev F0.5 " + detail::percent(b->second));
  };
  for (const auto& [run, f] : dev) {
    compare(run, f, MethodKind::oddballness, MethodKind::probability,
            "Oddballness", "Probability");
    compare(run, f, MethodKind::probability, MethodKind::topk, "Probability",
            "TopK");
  }
  return warnings;
}

}  // namespace oddball

#endif  // ODDBALL_REPORT_HPP_
