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

#include "watchdog/status.h"

#include <array>
#include <string>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace watchdog {
namespace {

constexpr absl::string_view kPayloadUrl = "watchdog/error-kind";

constexpr std::array<absl::string_view, 17> kNames = {
    "NegativeEntry",   "SumNotOne",
    "ZeroMarginal",    "DuplicateLabel",
    "ParseError",      "IndexOutOfRange",
    "EmptySubset",     "InvalidR",
    "SingletonOrEmptyRandomizedSet",
    "InvalidDistribution",
    "DegenerateX",     "DeltaNotAboveDelta0",
    "Infeasible",      "AlphabetTooLarge",
    "EmptySample",     "InvalidArgument",
    "Internal",
};

absl::StatusCode CodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIndexOutOfRange:
      return absl::StatusCode::kOutOfRange;
    case ErrorKind::kDegenerateX:
    case ErrorKind::kDeltaNotAboveDelta0:
    case ErrorKind::kInfeasible:
    case ErrorKind::kSingletonOrEmptyRandomizedSet:
      return absl::StatusCode::kFailedPrecondition;
    case ErrorKind::kAlphabetTooLarge:
      return absl::StatusCode::kResourceExhausted;
    case ErrorKind::kInternal:
      return absl::StatusCode::kInternal;
    default:
      return absl::StatusCode::kInvalidArgument;
  }
}

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) {
  return kNames[static_cast<std::size_t>(kind)];
}

absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  absl::Status status(CodeFor(kind),
                      absl::StrCat(ErrorKindName(kind), ": ", message));
  status.SetPayload(kPayloadUrl, absl::Cord(ErrorKindName(kind)));
  return status;
}

std::optional<ErrorKind> GetErrorKind(const absl::Status& status) {
  const auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<ErrorKind>(i);
  }
  return std::nullopt;
}

}  // namespace watchdog
