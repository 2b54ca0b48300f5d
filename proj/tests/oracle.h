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

// Reference computations used only by the tests. Everything here works on raw
// probability tables in long double with textbook formulas, so it shares no
// code path with the library it checks.

#ifndef WATCHDOG_TESTS_ORACLE_H_
#define WATCHDOG_TESTS_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace watchdog::oracle {

using Table = std::vector<std::vector<double>>;
using Real = long double;

inline constexpr Real kInf = std::numeric_limits<Real>::infinity();
inline constexpr Real kTol = 1e-12L;

// The worked example used throughout the tests.
inline Table D1() {
  return {{0.25, 0.05, 0.08, 0.12}, {0.05, 0.20, 0.15, 0.10}};
}

inline int NumS(const Table& t) { return static_cast<int>(t.size()); }
inline int NumX(const Table& t) { return static_cast<int>(t[0].size()); }

inline Real Ps(const Table& t, int s) {
  Real sum = 0;
  for (double p : t[s]) sum += p;
  return sum;
}

inline Real Px(const Table& t, int x) {
  Real sum = 0;
  for (const auto& row : t) sum += row[x];
  return sum;
}

inline Real Lift(const Table& t, int s, int x) {
  if (t[s][x] == 0.0) return -kInf;
  return std::log(static_cast<Real>(t[s][x]) / (Ps(t, s) * Px(t, x)));
}

inline Real EpsX(const Table& t, int x) {
  Real best = 0;
  for (int s = 0; s < NumS(t); ++s) best = std::max(best, std::fabs(Lift(t, s, x)));
  return best;
}

// ln( p(Q|s) / p(Q) ) with p(Q|s) = sum_x p(x|s).
inline Real SubsetLift(const Table& t, const std::vector<int>& q, int s) {
  Real cond = 0, marg = 0;
  for (int x : q) {
    cond += t[s][x] / Ps(t, s);
    marg += Px(t, x);
  }
  if (cond == 0) return -kInf;
  return std::log(cond / marg);
}

inline Real EpsSubset(const Table& t, const std::vector<int>& q) {
  Real best = 0;
  for (int s = 0; s < NumS(t); ++s) {
    best = std::max(best, std::fabs(SubsetLift(t, q, s)));
  }
  return best;
}

inline std::vector<int> WatchdogRandomized(const Table& t, Real eps) {
  std::vector<int> out;
  for (int x = 0; x < NumX(t); ++x) {
    if (EpsX(t, x) > eps + kTol) out.push_back(x);
  }
  return out;
}

inline Real Delta(const Table& t, Real eps, const std::vector<int>& q) {
  Real breach = 0;
  for (int s = 0; s < NumS(t); ++s) {
    if (std::fabs(SubsetLift(t, q, s)) > eps + kTol) {
      for (int x : q) breach += t[s][x];
    }
  }
  return breach;
}

inline std::vector<int> Complement(const std::vector<int>& q, int n) {
  std::vector<int> out;
  for (int x = 0; x < n; ++x) {
    if (std::find(q.begin(), q.end(), x) == q.end()) out.push_back(x);
  }
  return out;
}

inline Real DeltaTotal(const Table& t, Real eps,
                       const std::vector<int>& randomized) {
  Real total = 0;
  for (int x : Complement(randomized, NumX(t))) total += Delta(t, eps, {x});
  if (!randomized.empty()) total += Delta(t, eps, randomized);
  return total;
}

inline Real EpsEff(const Table& t, const std::vector<int>& randomized) {
  Real best = 0;
  for (int x : Complement(randomized, NumX(t))) best = std::max(best, EpsX(t, x));
  if (!randomized.empty()) best = std::max(best, EpsSubset(t, randomized));
  return best;
}

inline Real Entropy(const std::vector<Real>& p) {
  Real h = 0;
  for (Real v : p) {
    if (v > 0) h -= v * std::log(v);
  }
  return h;
}

inline Real HX(const Table& t) {
  std::vector<Real> px;
  for (int x = 0; x < NumX(t); ++x) px.push_back(Px(t, x));
  return Entropy(px);
}

// p(Q) H(q) / H(X) with q the renormalized marginal on Q.
inline Real Nmil(const Table& t, const std::vector<int>& q) {
  Real mass = 0;
  for (int x : q) mass += Px(t, x);
  std::vector<Real> renorm;
  for (int x : q) renorm.push_back(Px(t, x) / mass);
  if (q.empty()) return 0;
  return mass * Entropy(renorm) / HX(t);
}

// I(X;Y) from the definition, channel given row-major |X| x |X|.
inline Real MutualInformation(const Table& t, const std::vector<double>& ch) {
  const int n = NumX(t);
  std::vector<Real> py(n, 0);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) py[y] += ch[x * n + y] * Px(t, x);
  }
  Real mi = 0;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const Real pxy = ch[x * n + y] * Px(t, x);
      if (pxy > 0) mi += pxy * std::log(pxy / (Px(t, x) * py[y]));
    }
  }
  return mi;
}

// Realized i(s,y) on a channel; returns -inf/+inf conventions like the lift.
inline Real OutputLift(const Table& t, const std::vector<double>& ch, int s,
                       int y) {
  const int n = NumX(t);
  Real py = 0, py_s = 0;
  for (int x = 0; x < n; ++x) {
    py += ch[x * n + y] * Px(t, x);
    py_s += ch[x * n + y] * t[s][x] / Ps(t, s);
  }
  if (py_s == 0) return -kInf;
  return std::log(py_s / py);
}

struct BruteResult {
  bool found = false;
  Real nmil = 0;
  std::vector<int> randomized;
};

// Enumerates every bi-partition; keeps the feasible one with least NMIL,
// then fewest randomized symbols, then lexicographically smallest.
inline BruteResult BruteForce(const Table& t, Real eps, Real delta,
                              Real eps_bar, bool cap) {
  const int n = NumX(t);
  BruteResult best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> q;
    for (int x = 0; x < n; ++x) {
      if (mask >> x & 1) q.push_back(x);
    }
    if (DeltaTotal(t, eps, q) > delta + kTol) continue;
    if (cap && EpsEff(t, q) > eps_bar + kTol) continue;
    const Real nmil = q.size() < 2 ? 0 : Nmil(t, q);
    bool better = !best.found;
    if (!better) {
      if (std::fabs(nmil - best.nmil) > 1e-15L) {
        better = nmil < best.nmil;
      } else if (q.size() != best.randomized.size()) {
        better = q.size() < best.randomized.size();
      } else {
        better = q < best.randomized;
      }
    }
    if (better) best = {true, nmil, q};
  }
  return best;
}

}  // namespace watchdog::oracle

#endif  // WATCHDOG_TESTS_ORACLE_H_
