// Copyright 2026 The Privacy Watchdog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "watchdog/distributions.h"
#include "watchdog/status.h"

namespace watchdog {
namespace {

using nlohmann::json;

absl::StatusOr<double> ParseDouble(absl::string_view token) {
  token = absl::StripAsciiWhitespace(token);
  double value = 0.0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("not a number: '", token, "'"));
  }
  return value;
}

std::vector<std::string> SplitRow(absl::string_view line, char delim) {
  std::vector<std::string> cells;
  for (absl::string_view cell : absl::StrSplit(line, delim)) {
    cells.emplace_back(absl::StripAsciiWhitespace(cell));
  }
  return cells;
}

}  // namespace

absl::StatusOr<JointDistribution> ParseJointCsv(absl::string_view text) {
  std::vector<absl::string_view> lines;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  if (lines.size() < 2) {
    return MakeError(ErrorKind::kParseError,
                     "need a header row and at least one data row");
  }
  const char delim =
      lines.front().find(',') == absl::string_view::npos ? '\t' : ',';

  std::vector<std::string> header = SplitRow(lines.front(), delim);
  if (header.size() < 3 || !header.front().empty()) {
    return MakeError(ErrorKind::kParseError,
                     "header must be a blank cell followed by X labels");
  }
  std::vector<std::string> x_labels(header.begin() + 1, header.end());
  std::vector<std::string> s_labels;
  std::vector<std::vector<double>> probs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> cells = SplitRow(lines[i], delim);
    if (cells.size() != header.size()) {
      return MakeError(ErrorKind::kParseError,
                       absl::StrCat("line ", i + 1, " has ", cells.size(),
                                    " cells, expected ", header.size()));
    }
    s_labels.push_back(cells.front());
    std::vector<double> row;
    for (std::size_t c = 1; c < cells.size(); ++c) {
      absl::StatusOr<double> value = ParseDouble(cells[c]);
      if (!value.ok()) return value.status();
      row.push_back(*value);
    }
    probs.push_back(std::move(row));
  }
  return JointDistribution::Create(std::move(s_labels), std::move(x_labels),
                                   std::move(probs));
}

absl::StatusOr<JointDistribution> ParseJointJson(absl::string_view text) {
  json doc = json::parse(std::string(text), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    return MakeError(ErrorKind::kParseError, "not a JSON object");
  }
  try {
    auto s_labels = doc.at("s_labels").get<std::vector<std::string>>();
    auto x_labels = doc.at("x_labels").get<std::vector<std::string>>();
    auto probs = doc.at("probs").get<std::vector<std::vector<double>>>();
    return JointDistribution::Create(std::move(s_labels), std::move(x_labels),
                                     std::move(probs));
  } catch (const json::exception& e) {
    return MakeError(ErrorKind::kParseError, e.what());
  }
}

std::string JointToCsv(const JointDistribution& joint) {
  std::string out;
  for (const std::string& label : joint.x_labels()) {
    absl::StrAppend(&out, ",", label);
  }
  out += "\n";
  for (int s = 0; s < joint.num_s(); ++s) {
    out += joint.s_labels()[s];
    for (double p : joint.row(s)) absl::StrAppend(&out, absl::StrFormat(",%.17g", p));
    out += "\n";
  }
  return out;
}

std::string JointToJson(const JointDistribution& joint) {
  // Doubles are written by nlohmann's shortest round-trip printer, which never
  // needs more than 17 significant digits.
  json doc;
  doc["s_labels"] = joint.s_labels();
  doc["x_labels"] = joint.x_labels();
  json rows = json::array();
  for (int s = 0; s < joint.num_s(); ++s) {
    rows.push_back(std::vector<double>(joint.row(s).begin(), joint.row(s).end()));
  }
  doc["probs"] = std::move(rows);
  return doc.dump(2) + "\n";
}

absl::StatusOr<JointDistribution> ParseJoint(absl::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return ParseJointJson(text);
    break;
  }
  return ParseJointCsv(text);
}

absl::StatusOr<JointDistribution> LoadJointFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return MakeError(ErrorKind::kParseError,
                     absl::StrCat("cannot open '", path, "'"));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseJoint(buffer.str());
}

}  // namespace watchdog
