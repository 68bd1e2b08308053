// Copyright 2026 The psro Authors
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

// Meta-solvers: map a (meta-)game to a distribution over each player's
// strategies. Uniform, minimax LP, support enumeration, alpha-Rank and
// projected replicator dynamics.

#ifndef PSRO_META_SOLVERS_H_
#define PSRO_META_SOLVERS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "psro/errors.h"
#include "psro/game.h"
#include "psro/lp.h"
#include "psro/response_graph.h"

namespace psro {

enum class MetaSolverKind { kUniform, kNashLp, kNashSupportEnum, kAlphaRank, kPrd };

inline const char* MetaSolverName(MetaSolverKind k) {
  switch (k) {
    case MetaSolverKind::kUniform: return "uniform";
    case MetaSolverKind::kNashLp: return "nash_lp";
    case MetaSolverKind::kNashSupportEnum: return "nash_support_enum";
    case MetaSolverKind::kAlphaRank: return "alpharank";
    case MetaSolverKind::kPrd: return "prd";
  }
  return "?";
}

inline MetaSolverKind ParseMetaSolver(const std::string& s) {
  if (s == "uniform") return MetaSolverKind::kUniform;
  if (s == "nash_lp" || s == "nash") return MetaSolverKind::kNashLp;
  if (s == "nash_support_enum") return MetaSolverKind::kNashSupportEnum;
  if (s == "alpharank") return MetaSolverKind::kAlphaRank;
  if (s == "prd") return MetaSolverKind::kPrd;
  throw InvalidInput("unknown meta-solver '" + s + "'");
}

struct PrdOptions {
  double dt = 1e-3;
  int iterations = 50000;
  double gamma = 1e-10;
};

struct MetaSolverConfig {
  MetaSolverKind kind = MetaSolverKind::kAlphaRank;
  PopulationMode mode = PopulationMode::kMulti;
  AlphaRankOptions alpharank;
  PrdOptions prd;
  int max_support = 6;

  void Validate() const {
    if (!(prd.dt > 0) || !(prd.gamma >= 0) || prd.iterations < 1) {
      throw InvalidInput("PRD needs dt > 0, gamma >= 0, iterations >= 1");
    }
    if (alpharank.m < 1) throw InvalidInput("alpha-Rank needs m >= 1");
    if (max_support < 1) throw InvalidInput("max_support must be >= 1");
  }
};

struct MetaDistribution {
  // One vector per player; a single shared vector in single-population mode.
  std::vector<std::vector<double>> per_player;
  // alpha-Rank only: distribution over meta-game nodes (profiles, or
  // strategies in single-population mode) and the meta response graph.
  std::vector<double> joint;
  std::optional<ResponseGraph> graph;
  double residual = 0.0;
  int64_t iterations = 0;
  double alpha_used = std::numeric_limits<double>::quiet_NaN();

  const std::vector<double>& Marginal(int k) const {
    return per_player.size() == 1 ? per_player[0] : per_player[k];
  }
  // Factorized profile over all K players.
  MixedProfile Profile(int num_players) const {
    MixedProfile p;
    for (int k = 0; k < num_players; ++k) p.push_back(Marginal(k));
    return p;
  }
};

namespace internal {

inline std::vector<double> UniformVector(int n) {
  return std::vector<double>(n, 1.0 / n);
}

inline void CheckNonempty(const NormalFormGame& g) {
  if (g.num_players() == 0) throw InvalidInput("meta-game has no players");
  for (int k = 0; k < g.num_players(); ++k) {
    if (g.num_strategies(k) < 1) throw InvalidInput("empty population");
  }
}

inline void RequireTwoPlayerZeroSum(const NormalFormGame& g) {
  if (g.num_players() != 2 || !IsZeroSum(g)) {
    throw Unsupported("minimax LP needs a two-player zero-sum game");
  }
}

// Row player's maxmin strategy of payoff matrix a (rows x cols).
inline std::vector<double> MaxminStrategy(
    const std::vector<std::vector<double>>& a, double& value) {
  const int r = static_cast<int>(a.size());
  const int c = static_cast<int>(a[0].size());
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& row : a) lo = std::min(lo, *std::min_element(row.begin(), row.end()));
  const double shift = 1.0 - lo;
  // min sum(u) s.t. sum_i u_i (a_ij + shift) >= 1, u >= 0; x = u / sum(u).
  LinearProgram lp;
  lp.num_vars = r;
  lp.objective.assign(r, 1.0);
  for (int j = 0; j < c; ++j) {
    std::vector<double> row(r);
    for (int i = 0; i < r; ++i) row[i] = a[i][j] + shift;
    lp.AddRow(std::move(row), Sense::kGe, 1.0);
  }
  LpResult res = SolveLp(lp);
  if (res.status != LpResult::Status::kOptimal) {
    throw NumericalFailure("minimax LP did not reach optimality");
  }
  const double total = std::accumulate(res.x.begin(), res.x.end(), 0.0);
  std::vector<double> x(r);
  for (int i = 0; i < r; ++i) x[i] = std::max(0.0, res.x[i]) / total;
  const double norm = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v /= norm;
  value = 1.0 / total - shift;
  return x;
}

inline std::vector<std::vector<double>> Matrix(const NormalFormGame& g, int k,
                                               bool transpose) {
  const int r = g.num_strategies(0), c = g.num_strategies(1);
  std::vector<std::vector<double>> m(transpose ? c : r,
                                     std::vector<double>(transpose ? r : c));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) {
      const double v = g.payoff(k, Profile{i, j});
      if (transpose) {
        m[j][i] = v;
      } else {
        m[i][j] = v;
      }
    }
  }
  return m;
}

// Given supports, finds a strategy for the *other* player over `support`
// making every strategy in `own` a best reply of the player whose payoff
// matrix is `a` (own strategies index rows). Maximizes the smallest
// probability on the support; returns nullopt if infeasible or if that
// smallest probability is zero.
inline std::optional<std::vector<double>> IndifferentMix(
    const std::vector<std::vector<double>>& a, const std::vector<int>& own,
    const std::vector<int>& support) {
  const int rows = static_cast<int>(a.size());
  const int ns = static_cast<int>(support.size());
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& row : a) lo = std::min(lo, *std::min_element(row.begin(), row.end()));
  const double shift = 1.0 - lo;
  // Variables: y (ns), v, t.
  LinearProgram lp;
  lp.num_vars = ns + 2;
  const int v = ns, t = ns + 1;
  lp.objective.assign(ns + 2, 0.0);
  lp.objective[t] = -1.0;
  std::vector<char> in_own(rows, 0);
  for (int i : own) in_own[i] = 1;
  for (int i = 0; i < rows; ++i) {
    std::vector<double> row(ns + 2, 0.0);
    for (int j = 0; j < ns; ++j) row[j] = a[i][support[j]] + shift;
    row[v] = -1.0;
    lp.AddRow(std::move(row), in_own[i] ? Sense::kEq : Sense::kLe, 0.0);
  }
  std::vector<double> sum(ns + 2, 0.0);
  for (int j = 0; j < ns; ++j) sum[j] = 1.0;
  lp.AddRow(std::move(sum), Sense::kEq, 1.0);
  for (int j = 0; j < ns; ++j) {
    std::vector<double> row(ns + 2, 0.0);
    row[j] = 1.0;
    row[t] = -1.0;
    lp.AddRow(std::move(row), Sense::kGe, 0.0);
  }
  LpResult res = SolveLp(lp);
  if (res.status != LpResult::Status::kOptimal || res.x[t] <= 1e-9) {
    return std::nullopt;
  }
  std::vector<double> y(a[0].size(), 0.0);
  double total = 0.0;
  for (int j = 0; j < ns; ++j) total += (y[support[j]] = std::max(0.0, res.x[j]));
  for (double& p : y) p /= total;
  return y;
}

// Subsets of {0..n-1} ordered by size, then lexicographically.
inline std::vector<std::vector<int>> Supports(int n, int max_size) {
  std::vector<std::vector<int>> out;
  for (int size = 1; size <= std::min(n, max_size); ++size) {
    std::vector<int> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      out.push_back(pick);
      int i = size - 1;
      while (i >= 0 && pick[i] == n - size + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace internal

inline MetaDistribution SolveUniform(const NormalFormGame& meta,
                                     PopulationMode mode = PopulationMode::kMulti) {
  internal::CheckNonempty(meta);
  MetaDistribution d;
  const int vectors = mode == PopulationMode::kSingle ? 1 : meta.num_players();
  for (int k = 0; k < vectors; ++k) {
    d.per_player.push_back(internal::UniformVector(meta.num_strategies(k)));
  }
  return d;
}

// Exact equilibrium of a two-player zero-sum game via one LP per player.
inline MetaDistribution SolveNashLp(const NormalFormGame& meta,
                                    PopulationMode mode = PopulationMode::kMulti) {
  internal::CheckNonempty(meta);
  internal::RequireTwoPlayerZeroSum(meta);
  MetaDistribution d;
  double v1 = 0.0, v2 = 0.0;
  d.per_player.push_back(
      internal::MaxminStrategy(internal::Matrix(meta, 0, false), v1));
  if (mode == PopulationMode::kMulti) {
    d.per_player.push_back(
        internal::MaxminStrategy(internal::Matrix(meta, 1, true), v2));
    d.residual = std::abs(v1 + v2);
  }
  return d;
}

// Every equilibrium with supports up to max_support, one per support pair, in
// order of total support size, then player-1 support, then player-2 support.
// `limit` stops the enumeration early.
inline std::vector<MixedProfile> EnumerateSupportNash(
    const NormalFormGame& game, int max_support = 6, int limit = -1) {
  if (game.num_players() != 2) {
    throw Unsupported("support enumeration needs a two-player game");
  }
  internal::CheckNonempty(game);
  const auto a = internal::Matrix(game, 0, false);  // rows: player 1
  const auto b = internal::Matrix(game, 1, true);   // rows: player 2
  const auto s1 = internal::Supports(game.num_strategies(0), max_support);
  const auto s2 = internal::Supports(game.num_strategies(1), max_support);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < static_cast<int>(s1.size()); ++i) {
    for (int j = 0; j < static_cast<int>(s2.size()); ++j) pairs.emplace_back(i, j);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [&](auto x, auto y) {
    return s1[x.first].size() + s2[x.second].size() <
           s1[y.first].size() + s2[y.second].size();
  });
  std::vector<MixedProfile> found;
  for (auto [i, j] : pairs) {
    auto y = internal::IndifferentMix(a, s1[i], s2[j]);
    if (!y) continue;
    auto x = internal::IndifferentMix(b, s2[j], s1[i]);
    if (!x) continue;
    found.push_back({*x, *y});
    if (limit > 0 && static_cast<int>(found.size()) >= limit) break;
  }
  return found;
}

inline MetaDistribution SolveNashSupportEnum(const NormalFormGame& meta,
                                             int max_support = 6) {
  auto all = EnumerateSupportNash(meta, max_support, 1);
  if (all.empty()) {
    throw NumericalFailure("no equilibrium within the support bound");
  }
  MetaDistribution d;
  d.per_player = std::move(all[0]);
  return d;
}

// Euclidean projection of y onto {x : x_i >= lb, sum x = 1}.
inline std::vector<double> ProjectLowerBoundedSimplex(
    const std::vector<double>& y, double lb) {
  const int n = static_cast<int>(y.size());
  const double mass = 1.0 - n * lb;
  if (mass < 0) throw InvalidInput("lower bound too large for the simplex");
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = y[i] - lb;
  std::vector<double> s = z;
  std::sort(s.begin(), s.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (int i = 0; i < n; ++i) {
    cum += s[i];
    const double t = (cum - mass) / (i + 1);
    if (i == n - 1 || s[i + 1] <= t) {
      theta = t;
      break;
    }
  }
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lb + std::max(0.0, z[i] - theta);
  return x;
}

// Projected replicator dynamics, explicit Euler, time-averaged over the whole
// trajectory including the uniform start.
inline MetaDistribution SolvePrd(const NormalFormGame& meta,
                                 PopulationMode mode = PopulationMode::kMulti,
                                 const PrdOptions& opts = {}) {
  internal::CheckNonempty(meta);
  if (mode == PopulationMode::kSingle) internal::RequireSinglePopulation(meta);
  const int players = mode == PopulationMode::kSingle ? 1 : meta.num_players();
  MixedProfile x = UniformProfile(meta);
  MixedProfile avg = x;
  auto full = [&](const MixedProfile& p) {
    if (mode == PopulationMode::kMulti) return p;
    return MixedProfile{p[0], p[0]};
  };
  for (int it = 1; it <= opts.iterations; ++it) {
    const MixedProfile cur = full(x);
    for (int k = 0; k < players; ++k) {
      const auto fit = DeviationPayoffs(meta, cur, k);
      double mean = 0.0;
      for (size_t s = 0; s < fit.size(); ++s) mean += cur[k][s] * fit[s];
      std::vector<double> next(fit.size());
      for (size_t s = 0; s < fit.size(); ++s) {
        next[s] = cur[k][s] + opts.dt * cur[k][s] * (fit[s] - mean);
        if (!std::isfinite(next[s])) {
          throw NumericalFailure("replicator dynamics produced a non-finite value");
        }
      }
      const double lb = opts.gamma / (static_cast<double>(next.size()) + 1.0);
      x[k] = ProjectLowerBoundedSimplex(next, lb);
    }
    for (int k = 0; k < players; ++k) {
      for (size_t s = 0; s < x[k].size(); ++s) avg[k][s] += x[k][s];
    }
  }
  MetaDistribution d;
  for (int k = 0; k < players; ++k) {
    for (double& v : avg[k]) v /= (opts.iterations + 1.0);
    const double total = std::accumulate(avg[k].begin(), avg[k].end(), 0.0);
    for (double& v : avg[k]) v /= total;
    d.per_player.push_back(std::move(avg[k]));
  }
  d.iterations = opts.iterations;
  return d;
}

// alpha-Rank on the meta-game. Multi-population results carry the joint
// distribution over meta-profiles plus per-player marginals.
inline MetaDistribution SolveAlphaRankMeta(const NormalFormGame& meta,
                                           PopulationMode mode,
                                           const AlphaRankOptions& opts = {}) {
  internal::CheckNonempty(meta);
  AlphaRankResult r = AlphaRank(meta, mode, opts);
  MetaDistribution d;
  d.alpha_used = r.alpha_used;
  d.residual = r.residual;
  d.iterations = static_cast<int64_t>(r.trajectory.size());
  if (mode == PopulationMode::kSingle) {
    d.per_player.push_back(r.distribution);
  } else {
    const Shape& shape = meta.shape();
    for (int k = 0; k < meta.num_players(); ++k) {
      d.per_player.emplace_back(meta.num_strategies(k), 0.0);
    }
    for (int64_t f = 0; f < shape.size(); ++f) {
      for (int k = 0; k < meta.num_players(); ++k) {
        d.per_player[k][shape.Coord(f, k)] += r.distribution[f];
      }
    }
  }
  d.joint = std::move(r.distribution);
  d.graph = std::move(r.graph);
  return d;
}

inline MetaDistribution SolveMeta(const NormalFormGame& meta,
                                  const MetaSolverConfig& cfg) {
  cfg.Validate();
  switch (cfg.kind) {
    case MetaSolverKind::kUniform:
      return SolveUniform(meta, cfg.mode);
    case MetaSolverKind::kNashLp:
      return SolveNashLp(meta, cfg.mode);
    case MetaSolverKind::kNashSupportEnum: {
      MetaDistribution d = SolveNashSupportEnum(meta, cfg.max_support);
      if (cfg.mode == PopulationMode::kSingle) d.per_player.resize(1);
      return d;
    }
    case MetaSolverKind::kAlphaRank:
      return SolveAlphaRankMeta(meta, cfg.mode, cfg.alpharank);
    case MetaSolverKind::kPrd:
      return SolvePrd(meta, cfg.mode, cfg.prd);
  }
  throw InvalidInput("unknown meta-solver");
}

}  // namespace psro

#endif  // PSRO_META_SOLVERS_H_
