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

#ifndef WATCHDOG_RANDOM_H_
#define WATCHDOG_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

namespace watchdog {

// Portable pseudo-random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the C++ standard; the floating-point transforms below
// are written out explicitly (the std distributions are implementation
// defined), so a seed reproduces the same doubles on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on the open interval (0, 1), 53-bit resolution.
  double Uniform();

  // Standard exponential variate, strictly positive.
  double Exponential();

  // A point drawn from the flat Dirichlet law on the (n-1)-simplex.
  std::vector<double> FlatSimplex(int n);

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer applied to (master, index). Used to give every trial
// of an experiment its own seed so serial and parallel runs agree.
std::uint64_t DeriveSeed(std::uint64_t master, std::uint64_t index);

}  // namespace watchdog

#endif  // WATCHDOG_RANDOM_H_
