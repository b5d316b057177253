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


// The `oddball` command line: validate, score, tune, eval and report.
//
// Exit codes: 0 success, 1 validation or evaluation failure, 2 usage or I/O
// error.

#ifndef ODDBALL_CLI_HPP_
#define ODDBALL_CLI_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oddball/align.hpp"
#include "oddball/detail/text.hpp"
#include "oddball/dump.hpp"
#include "oddball/error.hpp"
#include "oddball/eval.hpp"
#include "oddball/report.hpp"
#include "oddball/scoring.hpp"

namespace oddball::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Bad flags or flag combinations.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Files that cannot be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string method = "oddballness";
  std::string g = "identity";
  std::string agg = "max";
  std::optional<double> threshold;
  std::string grid;
  std::string combine;
  std::string dump;
  std::string dump2;
  std::string gold;
  std::string scores;
  std::string sweep;
  std::string out;
  std::string predictions;
  std::string run_label;
  std::size_t depth = 0;
  std::vector<std::string> inputs;
};

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

inline void close_output(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw IoError("write failure on " + path);
}

inline Method method_of(const RunConfig& config) {
  const auto g = GFunction::parse(config.g);
  if (!g) throw UsageError("unknown --g '" + config.g + "'");
  const auto method = Method::parse(config.method, *g);
  if (!method) throw UsageError("unknown --method '" + config.method + "'");
  return *method;
}

inline Aggregation aggregation_of(const RunConfig& config) {
  const auto policy = parse_aggregation(config.agg);
  if (!policy) throw UsageError("unknown --agg '" + config.agg + "'");
  return *policy;
}

inline std::vector<SentenceDump> load_dump(const std::string& path) {
  auto in = open_input(path);
  return parse_dump(in);
}

inline std::vector<LabeledSentence> load_gold(const std::string& path) {
  auto in = open_input(path);
  return parse_multiged_tsv(in);
}

inline std::vector<ScoreRecord> score_dump(
    const std::vector<SentenceDump>& dumps,
    const std::vector<LabeledSentence>& gold, Method method,
    Aggregation policy) {
  if (dumps.size() != gold.size()) {
    throw EvalError("dump has " + std::to_string(dumps.size()) +
                    " sentences but the gold file has " +
                    std::to_string(gold.size()));
  }
  std::vector<ScoreRecord> records;
  records.reserve(dumps.size());
  for (std::size_t s = 0; s < dumps.size(); ++s) {
    const auto surfaces = gold[s].surfaces();
    Alignment alignment;
    try {
      alignment = align_to_dataset_tokens(dumps[s], surfaces);
    } catch (const AlignmentError& e) {
      throw AlignmentError(e.token_index(), e.span_start(), e.span_end(),
                           "sentence '" + dumps[s].id + "': " + e.what());
    }
    records.push_back(make_score_record(
        dumps[s].id, score_sentence(dumps[s], alignment, method, policy)));
  }
  return records;
}

/// Scores from --scores, or from --dump (and --dump2 when combining).
inline std::vector<ScoreRecord> collect_scores(
    const RunConfig& config, const std::vector<LabeledSentence>& gold) {
  const Method method = method_of(config);
  if (!config.scores.empty()) {
    if (!config.dump.empty() || !config.dump2.empty()) {
      throw UsageError("give either --scores or --dump, not both");
    }
    auto in = open_input(config.scores);
    return parse_scores(in);
  }
  if (config.dump.empty()) throw UsageError("--dump or --scores is required");
  if (config.dump2.empty() != config.combine.empty()) {
    throw UsageError("--dump2 and --combine must be given together");
  }
  const Aggregation policy = aggregation_of(config);
  auto records = score_dump(load_dump(config.dump), gold, method, policy);
  if (config.dump2.empty()) return records;

  if (method.kind == MethodKind::topk) {
    throw UnsupportedMethodError("top-K scores cannot be combined");
  }
  const std::string_view expected =
      method.kind == MethodKind::oddballness ? "max" : "min";
  if (config.combine != expected) {
    throw UsageError("--combine " + config.combine + " does not apply to " +
                     std::string(method.name()) + " (use " +
                     std::string(expected) + ")");
  }
  const auto second = score_dump(load_dump(config.dump2), gold, method, policy);
  for (std::size_t s = 0; s < records.size(); ++s) {
    records[s] = make_score_record(
        records[s].id, combine(records[s].tokens, second[s].tokens, method));
  }
  return records;
}

inline std::vector<double> flatten_scores(
    const std::vector<ScoreRecord>& records,
    const std::vector<LabeledSentence>& gold) {
  if (records.size() != gold.size()) {
    throw EvalError("scores cover " + std::to_string(records.size()) +
                    " sentences but the gold file has " +
                    std::to_string(gold.size()));
  }
  std::vector<double> scores;
  for (std::size_t s = 0; s < records.size(); ++s) {
    if (records[s].tokens.size() != gold[s].tokens.size()) {
      throw EvalError("sentence '" + records[s].id + "' has " +
                      std::to_string(records[s].tokens.size()) +
                      " scores for " + std::to_string(gold[s].tokens.size()) +
                      " gold tokens");
    }
    for (const auto& token : records[s].tokens) scores.push_back(token.score);
  }
  return scores;
}

inline double corpus_exactness(const std::vector<ScoreRecord>& records) {
  double exact = 0.0;
  std::size_t tokens = 0;
  for (const auto& record : records) {
    exact += record.exactness * static_cast<double>(record.tokens.size());
    tokens += record.tokens.size();
  }
  return tokens == 0 ? 1.0 : exact / static_cast<double>(tokens);
}

inline double parse_number(std::string_view text) {
  const std::string s(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return value;
}

inline int decimals_of(std::string_view text) {
  const auto dot = text.find('.');
  return dot == std::string_view::npos ? 0
                                       : static_cast<int>(text.size() - dot - 1);
}

/// "a,b,c" lists thresholds; "start:stop:step" spans a range inclusive of
/// both ends, rounded to the most decimals written in any of the three.
inline std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = oddball::detail::split(text, ':');
    if (parts.size() != 3) throw UsageError("range grid needs start:stop:step");
    const double start = parse_number(parts[0]);
    const double stop = parse_number(parts[1]);
    const double step = parse_number(parts[2]);
    if (!(step > 0.0) || stop < start) throw UsageError("empty or inverted grid range");
    const int places = std::max({decimals_of(parts[0]), decimals_of(parts[1]),
                                 decimals_of(parts[2])});
    const auto count =
        static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      char buffer[64];
      std::snprintf(buffer, sizeof(buffer), "%.*f", places,
                    start + static_cast<double>(i) * step);
      grid.push_back(std::stod(buffer));
    }
  } else {
    for (const auto part : oddball::detail::split(text, ',')) {
      grid.push_back(parse_number(part));
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

inline std::size_t dump_depth(const RunConfig& config) {
  if (config.depth > 0) return config.depth;
  std::size_t depth = 0;
  for (const auto* path : {&config.dump, &config.dump2}) {
    if (path->empty()) continue;
    for (const auto& sentence : load_dump(*path)) {
      depth = std::max(depth, sentence.meta.k);
    }
  }
  return depth > 0 ? depth : 512;
}

inline nlohmann::ordered_json sweep_to_json(const SweepResult& sweep,
                                            Method method) {
  nlohmann::ordered_json json;
  json["method"] = method.name();
  json["g"] = method.g.name();
  json["best_threshold"] = sweep.best_threshold;
  json["best_f"] = sweep.best_f;
  json["degenerate"] = sweep.degenerate;
  auto grid = nlohmann::ordered_json::array();
  for (const auto& point : sweep.grid) {
    nlohmann::ordered_json row;
    row["threshold"] = point.threshold;
    row["flagged"] = point.flagged;
    row["tp"] = point.result.true_positives;
    row["fp"] = point.result.false_positives;
    row["fn"] = point.result.false_negatives;
    row["precision"] = point.result.precision;
    row["recall"] = point.result.recall;
    row["f"] = point.result.f_beta;
    grid.push_back(std::move(row));
  }
  json["grid"] = std::move(grid);
  return json;
}

inline nlohmann::ordered_json read_json(const std::string& path) {
  auto in = open_input(path);
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::ordered_json::parse_error& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

}  // namespace detail

inline int cmd_validate(const RunConfig& config, std::ostream& out,
                        std::ostream& err) {
  auto in = detail::open_input(config.dump);
  const auto report = validate_dump(in);
  out << "sentences: " << report.sentences << "\n"
      << "tokens: " << report.tokens << "\n"
      << "exact oddballness: " << report.exact_tokens << " ("
      << oddball::detail::format_double(report.exactness()) << ")\n";
  if (report.above_top > 0) {
    err << "warning: " << report.above_top
        << " token(s) are more probable than every stored candidate\n";
  }
  for (const auto& violation : report.violations) err << violation << "\n";
  if (!report.ok()) {
    out << "invalid: " << report.violations.size() << " violation(s)\n";
    return kFailure;
  }
  out << "valid\n";
  return kOk;
}

inline int cmd_score(const RunConfig& config, std::ostream& out,
                     std::ostream&) {
  if (!config.scores.empty()) throw UsageError("score reads --dump, not --scores");
  if (config.gold.empty()) throw UsageError("--gold is required");
  if (config.out.empty()) throw UsageError("--out is required");
  if (!config.grid.empty()) throw UsageError("score takes --threshold, not --grid");
  const Method method = detail::method_of(config);
  if (config.threshold) check_threshold(method, *config.threshold);
  const auto gold = detail::load_gold(config.gold);
  auto records = detail::collect_scores(config, gold);
  (void)detail::flatten_scores(records, gold);
  if (config.threshold) {
    for (auto& record : records) {
      record.tokens = apply_threshold(record.tokens, method, *config.threshold);
    }
  }
  auto file = detail::open_output(config.out);
  write_scores(records, file);
  detail::close_output(file, config.out);
  std::size_t tokens = 0;
  for (const auto& record : records) tokens += record.tokens.size();
  out << "scored " << records.size() << " sentence(s), " << tokens
      << " token(s), exactness "
      << oddball::detail::format_double(detail::corpus_exactness(records))
      << "\n";
  return kOk;
}

inline int cmd_tune(const RunConfig& config, std::ostream& out,
                    std::ostream& err) {
  if (config.threshold) throw UsageError("tune takes --grid, not --threshold");
  if (config.gold.empty()) throw UsageError("--gold is required");
  if (config.out.empty()) throw UsageError("--out is required");
  const Method method = detail::method_of(config);
  const auto gold = detail::load_gold(config.gold);
  const auto records = detail::collect_scores(config, gold);
  const auto scores = detail::flatten_scores(records, gold);
  const auto labels = flatten_labels(gold);

  SweepResult sweep;
  if (config.grid.empty() || config.grid == "default") {
    const std::size_t depth =
        method.kind == MethodKind::topk ? detail::dump_depth(config) : 0;
    auto grid = default_grid(method.kind, depth);
    sweep = tune_threshold(scores, labels, method, grid);
    if (method.kind == MethodKind::probability) {
      grid = refine_probability_grid(grid, sweep.best_threshold);
      sweep = tune_threshold(scores, labels, method, grid);
    }
  } else {
    const auto grid = detail::parse_grid(config.grid);
    sweep = tune_threshold(scores, labels, method, grid);
  }

  auto file = detail::open_output(config.out);
  file << detail::sweep_to_json(sweep, method).dump(2) << '\n';
  detail::close_output(file, config.out);
  if (sweep.degenerate) {
    err << "warning: no incorrect tokens in the gold data; F0.5 is 0 at every "
           "threshold\n";
  }
  out << method.title() << ": best threshold "
      << oddball::detail::format_double(sweep.best_threshold) << ", dev F0.5 "
      << oddball::detail::percent(sweep.best_f) << " over "
      << sweep.grid.size() << " grid point(s)\n";
  return kOk;
}

inline int cmd_eval(const RunConfig& config, std::ostream& out,
                    std::ostream&) {
  if (!config.grid.empty()) throw UsageError("eval takes --threshold or --sweep, not --grid");
  if (config.threshold.has_value() == !config.sweep.empty()) {
    throw UsageError("give exactly one of --threshold and --sweep");
  }
  if (config.gold.empty()) throw UsageError("--gold is required");
  const Method method = detail::method_of(config);

  RunSummary summary;
  summary.run = config.run_label.empty() ? std::string("run") : config.run_label;
  summary.method = method;
  if (config.threshold) {
    summary.threshold = *config.threshold;
  } else {
    const auto sweep = detail::read_json(config.sweep);
    try {
      if (sweep.at("method").get<std::string>() != method.name()) {
        throw UsageError("sweep " + config.sweep + " was tuned for " +
                         sweep.at("method").get<std::string>());
      }
      summary.threshold = sweep.at("best_threshold").get<double>();
      summary.dev_f = sweep.at("best_f").get<double>();
    } catch (const nlohmann::ordered_json::exception& e) {
      throw ParseError(0, config.sweep + ": " + e.what());
    }
  }
  check_threshold(method, summary.threshold);

  const auto gold = detail::load_gold(config.gold);
  const auto records = detail::collect_scores(config, gold);
  const auto scores = detail::flatten_scores(records, gold);
  const auto labels = flatten_labels(gold);
  summary.test = evaluate_run(scores, labels, summary.threshold, method);
  summary.exactness = detail::corpus_exactness(records);

  if (!config.predictions.empty()) {
    std::vector<bool> flagged(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      flagged[i] = flags(method, scores[i], summary.threshold);
    }
    auto file = detail::open_output(config.predictions);
    write_multiged_tsv(predicted_sentences(gold, flagged), file);
    detail::close_output(file, config.predictions);
  }
  if (!config.out.empty()) {
    auto file = detail::open_output(config.out);
    file << to_json(summary).dump(2) << '\n';
    detail::close_output(file, config.out);
  }
  out << format_table({summary});
  out << "P " << oddball::detail::percent(summary.test.precision) << "  R "
      << oddball::detail::percent(summary.test.recall) << "  TP "
      << summary.test.true_positives << "  FP " << summary.test.false_positives
      << "  FN " << summary.test.false_negatives << "\n";
  return kOk;
}

inline int cmd_report(const RunConfig& config, std::ostream& out,
                      std::ostream& err) {
  if (config.inputs.empty()) throw UsageError("--in needs at least one run file");
  std::vector<RunSummary> rows;
  for (const auto& path : config.inputs) {
    rows.push_back(run_summary_from_json(detail::read_json(path)));
  }
  out << format_table(rows);
  const auto warnings = check_method_ordering(rows);
  if (warnings.empty()) {
    out << "method ordering (oddballness >= probability >= topk on dev): ok\n";
  } else {
    for (const auto& w : warnings) {
      out << "method ordering warning: " << w << "\n";
      err << "warning: " << w << "\n";
    }
  }
  if (!config.out.empty()) {
    auto file = detail::open_output(config.out);
    write_summary_tsv(rows, file);
    detail::close_output(file, config.out);
  }
  return kOk;
}

/// Runs the command line in `args` (without the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Token anomaly detection with oddballness scores", "oddball"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with default flag values");
  RunConfig config;

  const auto add_method = [&config](CLI::App* sub) {
    sub->add_option("--method", config.method,
                    "probability | oddballness | topk")
        ->capture_default_str();
    sub->add_option("--g", config.g, "identity | square | cube")
        ->capture_default_str();
  };
  const auto add_scoring = [&config, &add_method](CLI::App* sub) {
    add_method(sub);
    sub->add_option("--agg", config.agg, "max | mean | first")
        ->capture_default_str();
    sub->add_option("--dump", config.dump, "distribution dump");
    sub->add_option("--dump2", config.dump2, "second model's dump");
    sub->add_option("--combine", config.combine, "max | min");
    sub->add_option("--gold", config.gold, "MultiGED TSV with gold labels");
  };

  auto* validate = app.add_subcommand("validate", "check a dump");
  validate->add_option("--dump", config.dump, "distribution dump")->required();

  auto* score = app.add_subcommand("score", "write per-token scores");
  add_scoring(score);
  score->add_option("--threshold", config.threshold, "flag tokens past this");
  score->add_option("--out", config.out, "score file to write");

  auto* tune = app.add_subcommand("tune", "pick the dev-set threshold");
  add_scoring(tune);
  tune->add_option("--scores", config.scores, "score file from `score`");
  tune->add_option("--grid", config.grid,
                   "default | a,b,c | start:stop:step");
  tune->add_option("--depth", config.depth, "top-K grid limit");
  tune->add_option("--out", config.out, "sweep file to write");

  auto* eval = app.add_subcommand("eval", "evaluate a threshold");
  add_scoring(eval);
  eval->add_option("--scores", config.scores, "score file from `score`");
  eval->add_option("--threshold", config.threshold);
  eval->add_option("--sweep", config.sweep, "sweep file from `tune`");
  eval->add_option("--run", config.run_label, "row label in reports");
  eval->add_option("--predictions", config.predictions,
                   "write predicted labels as TSV");
  eval->add_option("--out", config.out, "run summary to write");

  auto* report = app.add_subcommand("report", "tabulate run summaries");
  report->add_option("--in", config.inputs, "run summaries from `eval`")
      ->required();
  report->add_option("--out", config.out, "summary TSV to write");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(config, out, err);
    if (score->parsed()) return cmd_score(config, out, err);
    if (tune->parsed()) {
      if (tune->count("--grid") > 0 && config.grid.empty()) {
        throw UsageError("threshold grid is empty");
      }
      return cmd_tune(config, out, err);
    }
    if (eval->parsed()) return cmd_eval(config, out, err);
    if (report->parsed()) return cmd_report(config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidThresholdError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedMethodError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace oddball::cli

#endif  // ODDBALL_CLI_HPP_
