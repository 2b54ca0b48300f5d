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

#ifndef WATCHDOG_STATUS_H_
#define WATCHDOG_STATUS_H_

#include <optional>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace watchdog {

// Error categories reported by the library. Every non-OK status produced by
// this project carries one of these as a payload so that callers (the CLI in
// particular) can map failures to stable, machine-readable names.
enum class ErrorKind {
  kNegativeEntry,
  kSumNotOne,
  kZeroMarginal,
  kDuplicateLabel,
  kParseError,
  kIndexOutOfRange,
  kEmptySubset,
  kInvalidR,
  kSingletonOrEmptyRandomizedSet,
  kInvalidDistribution,
  kDegenerateX,
  kDeltaNotAboveDelta0,
  kInfeasible,
  kAlphabetTooLarge,
  kEmptySample,
  kInvalidArgument,
  kInternal,
};

absl::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, absl::string_view message);

// Returns the category attached by MakeError, or nullopt for foreign statuses.
std::optional<ErrorKind> GetErrorKind(const absl::Status& status);

}  // namespace watchdog

#endif  // WATCHDOG_STATUS_H_
