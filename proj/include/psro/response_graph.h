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

// Response graphs over pure profiles, their strongly connected components,
// the perturbed Markov chain built on top of them, and alpha-Rank.

#ifndef PSRO_RESPONSE_GRAPH_H_
#define PSRO_RESPONSE_GRAPH_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "psro/errors.h"
#include "psro/game.h"

namespace psro {

enum class PopulationMode { kSingle, kMulti };

inline const char* ModeName(PopulationMode mode) {
  return mode == PopulationMode::kSingle ? "single" : "multi";
}

// Directed graph in CSR form plus its strong components.
struct ResponseGraph {
  PopulationMode mode = PopulationMode::kMulti;
  int num_nodes = 0;
  std::vector<int64_t> offsets;  // size num_nodes + 1
  std::vector<int> targets;
  std::vector<int> scc_id;       // node -> component
  int num_sccs = 0;
  std::vector<char> sink;        // component -> has no leaving edge

  int64_t num_edges() const { return static_cast<int64_t>(targets.size()); }
  bool InSink(int v) const { return sink[scc_id[v]] != 0; }
  bool HasEdge(int u, int v) const {
    for (int64_t e = offsets[u]; e < offsets[u + 1]; ++e) {
      if (targets[e] == v) return true;
    }
    return false;
  }

  std::vector<int> SinkNodes() const {
    std::vector<int> out;
    for (int v = 0; v < num_nodes; ++v) {
      if (InSink(v)) out.push_back(v);
    }
    return out;
  }

  // Sink components, each sorted, ordered by smallest member.
  std::vector<std::vector<int>> SinkComponents() const {
    std::vector<int> slot(num_sccs, -1);
    std::vector<std::vector<int>> out;
    for (int v = 0; v < num_nodes; ++v) {
      const int c = scc_id[v];
      if (!sink[c]) continue;
      if (slot[c] < 0) {
        slot[c] = static_cast<int>(out.size());
        out.emplace_back();
      }
      out[slot[c]].push_back(v);
    }
    return out;
  }
};

namespace internal {

// Iterative Tarjan; fills scc_id, num_sccs and sink flags.
inline void StrongComponents(ResponseGraph& g) {
  const int n = g.num_nodes;
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::pair<int, int64_t>> call;  // (node, next edge)
  g.scc_id.assign(n, -1);
  g.num_sccs = 0;
  int counter = 0;
  for (int root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(root, g.offsets[root]);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, e] = call.back();
      if (e < g.offsets[v + 1]) {
        const int w = g.targets[e++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, g.offsets[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          g.scc_id[w] = g.num_sccs;
        } while (w != v);
        ++g.num_sccs;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) {
        low[call.back().first] = std::min(low[call.back().first], low[done]);
      }
    }
  }
  g.sink.assign(g.num_sccs, 1);
  for (int v = 0; v < n; ++v) {
    for (int64_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
      if (g.scc_id[g.targets[e]] != g.scc_id[v]) g.sink[g.scc_id[v]] = 0;
    }
  }
}

inline void RequireSinglePopulation(const NormalFormGame& game) {
  if (game.num_players() != 2 || !IsSymmetric(game)) {
    throw InvalidInput(
        "single-population mode requires a symmetric two-player game");
  }
}

}  // namespace internal

// Multi-population: edge s -> sigma when sigma differs from s in one
// player's strategy and strictly improves that player's payoff.
// Single-population: nodes are strategies, edge s -> sigma when sigma beats
// s, i.e. M^1(sigma, s) > M^1(s, sigma).
// With neutral_edges, deviations that tie (within tie_tol) also get an edge;
// the sink components of that graph carry the alpha -> infinity mass of the
// alpha-Rank chain when the game has ties.
inline ResponseGraph BuildResponseGraph(const NormalFormGame& game,
                                        PopulationMode mode,
                                        double tie_tol = 0.0,
                                        int64_t max_nodes = 5000000,
                                        bool neutral_edges = false) {
  auto edge = [&](double delta) {
    return delta > tie_tol || (neutral_edges && std::abs(delta) <= tie_tol);
  };
  ResponseGraph g;
  g.mode = mode;
  if (mode == PopulationMode::kSingle) {
    internal::RequireSinglePopulation(game);
    const int n = game.num_strategies(0);
    g.num_nodes = n;
    g.offsets.assign(n + 1, 0);
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        if (t != s && edge(game.payoff(0, {t, s}) - game.payoff(0, {s, t}))) {
          g.targets.push_back(t);
        }
      }
      g.offsets[s + 1] = static_cast<int64_t>(g.targets.size());
    }
  } else {
    const Shape& shape = game.shape();
    if (shape.size() > max_nodes) {
      throw Unsupported("response graph exceeds node budget (" +
                        std::to_string(shape.size()) + " > " +
                        std::to_string(max_nodes) + ")");
    }
    g.num_nodes = static_cast<int>(shape.size());
    g.offsets.assign(g.num_nodes + 1, 0);
    for (int64_t v = 0; v < shape.size(); ++v) {
      for (int k = 0; k < game.num_players(); ++k) {
        const int own = shape.Coord(v, k);
        const double base = game.payoff(k, v);
        for (int a = 0; a < shape.dim(k); ++a) {
          if (a == own) continue;
          const int64_t w = v + (a - own) * shape.stride(k);
          if (edge(game.payoff(k, w) - base)) {
            g.targets.push_back(static_cast<int>(w));
          }
        }
      }
      g.offsets[v + 1] = static_cast<int64_t>(g.targets.size());
    }
  }
  internal::StrongComponents(g);
  return g;
}

// Node label: a strategy (single-population) or a profile.
inline std::string NodeLabel(const NormalFormGame& game,
                             const ResponseGraph& g, int v) {
  if (g.mode == PopulationMode::kSingle) return game.Label(0, v);
  return game.ProfileLabel(game.shape().Unravel(v));
}

inline std::string ToDot(const NormalFormGame& game, const ResponseGraph& g) {
  std::ostringstream out;
  out << "digraph response_graph {\n";
  for (int v = 0; v < g.num_nodes; ++v) {
    out << "  n" << v << " [label=\"" << NodeLabel(game, g, v) << "\"";
    if (g.InSink(v)) out << ", style=filled, fillcolor=lightgreen";
    out << "];\n";
  }
  for (int v = 0; v < g.num_nodes; ++v) {
    for (int64_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
      out << "  n" << v << " -> n" << g.targets[e] << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Markov chain.

struct MarkovChain {
  int num_nodes = 0;
  double alpha = 0.0;
  int m = 50;
  double eta = 0.0;
  // Off-diagonal entries in CSR form.
  std::vector<int64_t> offsets;
  std::vector<int> cols;
  std::vector<double> vals;
  std::vector<double> log_vals;  // same entries in log space, never underflow
  // Row sums of off-diagonal entries; kept separately so that 1 - C_ss is
  // available without cancellation.
  std::vector<double> exit;
  std::vector<double> diag;

  double RowSum(int v) const {
    double s = diag[v];
    for (int64_t e = offsets[v]; e < offsets[v + 1]; ++e) s += vals[e];
    return s;
  }
};

// eta * (1 - exp(-x)) / (1 - exp(-m x)) / eta with x = alpha * delta != 0,
// evaluated without overflow; tends to 1/m as x -> 0.
inline double FixationRatio(double x, int m) {
  if (m == 1) return 1.0;
  if (std::abs(x) < 1e-9) return (1.0 + 0.5 * (m - 1) * x) / m;
  if (x > 0) return std::expm1(-x) / std::expm1(-m * x);
  const double y = -x;
  return std::exp(-(m - 1) * y) * std::expm1(-y) / std::expm1(-m * y);
}

// log FixationRatio(x, m), finite for every finite x.
inline double LogFixationRatio(double x, int m) {
  if (m == 1) return 0.0;
  if (std::abs(x) < 1e-9) return std::log(FixationRatio(x, m));
  if (x > 0) return std::log(-std::expm1(-x)) - std::log(-std::expm1(-m * x));
  const double y = -x;
  return -(m - 1) * y + std::log(-std::expm1(-y)) -
         std::log(-std::expm1(-m * y));
}

inline double LogTransitionProbability(double delta, double alpha, int m,
                                       double eta, double tie_tol = 0.0) {
  if (std::abs(delta) <= tie_tol) return std::log(eta / m);
  if (std::isinf(alpha)) {
    return delta > 0 ? std::log(eta) : -std::numeric_limits<double>::infinity();
  }
  return std::log(eta) + LogFixationRatio(alpha * delta, m);
}

inline double TransitionProbability(double delta, double alpha, int m,
                                    double eta, double tie_tol = 0.0) {
  if (std::abs(delta) <= tie_tol) return eta / m;
  if (std::isinf(alpha)) return delta > 0 ? eta : 0.0;
  return eta * FixationRatio(alpha * delta, m);
}

inline MarkovChain TransitionMatrix(const NormalFormGame& game,
                                    PopulationMode mode, double alpha, int m,
                                    double tie_tol = 0.0) {
  if (!(alpha >= 0.0)) throw InvalidInput("alpha must be nonnegative");
  if (m < 1) throw InvalidInput("m must be at least 1");
  MarkovChain c;
  c.alpha = alpha;
  c.m = m;
  int degree = 0;
  if (mode == PopulationMode::kSingle) {
    internal::RequireSinglePopulation(game);
    c.num_nodes = game.num_strategies(0);
    degree = c.num_nodes - 1;
  } else {
    c.num_nodes = static_cast<int>(game.num_profiles());
    for (int k = 0; k < game.num_players(); ++k) {
      degree += game.num_strategies(k) - 1;
    }
  }
  c.eta = degree > 0 ? 1.0 / degree : 0.0;
  const int n = c.num_nodes;
  c.offsets.assign(n + 1, 0);
  c.cols.reserve(static_cast<size_t>(n) * degree);
  c.vals.reserve(static_cast<size_t>(n) * degree);
  c.exit.assign(n, 0.0);
  c.diag.assign(n, 1.0);
  auto add = [&](int v, int w, double delta) {
    const double p = TransitionProbability(delta, alpha, m, c.eta, tie_tol);
    c.cols.push_back(w);
    c.vals.push_back(p);
    c.log_vals.push_back(
        LogTransitionProbability(delta, alpha, m, c.eta, tie_tol));
    c.exit[v] += p;
  };
  if (mode == PopulationMode::kSingle) {
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        if (t == s) continue;
        add(s, t, game.payoff(0, {t, s}) - game.payoff(0, {s, t}));
      }
      c.offsets[s + 1] = static_cast<int64_t>(c.cols.size());
    }
  } else {
    const Shape& shape = game.shape();
    for (int64_t v = 0; v < n; ++v) {
      for (int k = 0; k < game.num_players(); ++k) {
        const int own = shape.Coord(v, k);
        const double base = game.payoff(k, v);
        for (int a = 0; a < shape.dim(k); ++a) {
          if (a == own) continue;
          const int64_t w = v + (a - own) * shape.stride(k);
          add(static_cast<int>(v), static_cast<int>(w),
              game.payoff(k, w) - base);
        }
      }
      c.offsets[v + 1] = static_cast<int64_t>(c.cols.size());
    }
  }
  for (int v = 0; v < n; ++v) c.diag[v] = 1.0 - c.exit[v];
  return c;
}

// ---------------------------------------------------------------------------
// Stationary distribution.

struct StationaryOptions {
  int dense_threshold = 2000;  // GTH elimination at or below this size
  int log_dense_threshold = 800;  // log-space GTH fallback after underflow
  double tol = 1e-12;          // L1 change for power iteration
  int64_t max_iterations = 1000000;
};

struct StationaryResult {
  std::vector<double> pi;
  double residual = 0.0;  // ||pi C - pi||_1
  int64_t iterations = 0;
  bool dense = false;
};

inline double StationaryResidual(const MarkovChain& c,
                                 const std::vector<double>& pi) {
  std::vector<double> flow(c.num_nodes, 0.0);
  for (int v = 0; v < c.num_nodes; ++v) {
    flow[v] -= pi[v] * c.exit[v];
    for (int64_t e = c.offsets[v]; e < c.offsets[v + 1]; ++e) {
      flow[c.cols[e]] += pi[v] * c.vals[e];
    }
  }
  double r = 0.0;
  for (double f : flow) r += std::abs(f);
  return r;
}

namespace internal {

// Grassmann-Taksar-Heyman state reduction; subtraction-free, so transition
// probabilities spanning hundreds of orders of magnitude are handled.
inline bool GthSolve(const MarkovChain& c, std::vector<double>& pi) {
  const int n = c.num_nodes;
  std::vector<double> a(static_cast<size_t>(n) * n, 0.0);
  for (int v = 0; v < n; ++v) {
    for (int64_t e = c.offsets[v]; e < c.offsets[v + 1]; ++e) {
      a[static_cast<size_t>(v) * n + c.cols[e]] += c.vals[e];
    }
  }
  for (int k = n - 1; k >= 1; --k) {
    const double* row_k = &a[static_cast<size_t>(k) * n];
    double s = 0.0;
    for (int j = 0; j < k; ++j) s += row_k[j];
    if (!(s > 0.0)) return false;
    const double inv = 1.0 / s;
    for (int i = 0; i < k; ++i) {
      double* row_i = &a[static_cast<size_t>(i) * n];
      const double f = row_i[k] * inv;
      row_i[k] = f;
      if (f == 0.0) continue;
      for (int j = 0; j < k; ++j) row_i[j] += f * row_k[j];
    }
  }
  pi.assign(n, 0.0);
  pi[0] = 1.0;
  double total = 1.0;
  for (int j = 1; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < j; ++i) acc += pi[i] * a[static_cast<size_t>(i) * n + j];
    pi[j] = acc;
    total += acc;
  }
  if (!(total > 0.0) || !std::isfinite(total)) return false;
  for (double& p : pi) p /= total;
  return true;
}

inline double LogAddExp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// GTH on log transition probabilities; used when products of tiny
// probabilities underflow in the plain version.
inline bool LogGthSolve(const MarkovChain& c, std::vector<double>& pi) {
  const int n = c.num_nodes;
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::vector<double> a(static_cast<size_t>(n) * n, kNegInf);
  for (int v = 0; v < n; ++v) {
    for (int64_t e = c.offsets[v]; e < c.offsets[v + 1]; ++e) {
      double& x = a[static_cast<size_t>(v) * n + c.cols[e]];
      x = LogAddExp(x, c.log_vals[e]);
    }
  }
  for (int k = n - 1; k >= 1; --k) {
    const double* row_k = &a[static_cast<size_t>(k) * n];
    double s = kNegInf;
    for (int j = 0; j < k; ++j) s = LogAddExp(s, row_k[j]);
    if (s == kNegInf) return false;
    for (int i = 0; i < k; ++i) {
      double* row_i = &a[static_cast<size_t>(i) * n];
      const double f = row_i[k] - s;
      row_i[k] = f;
      if (f == kNegInf) continue;
      for (int j = 0; j < k; ++j) {
        if (row_k[j] != kNegInf) row_i[j] = LogAddExp(row_i[j], f + row_k[j]);
      }
    }
  }
  std::vector<double> lp(n, kNegInf);
  lp[0] = 0.0;
  double total = 0.0;
  for (int j = 1; j < n; ++j) {
    double acc = kNegInf;
    for (int i = 0; i < j; ++i) {
      acc = LogAddExp(acc, lp[i] + a[static_cast<size_t>(i) * n + j]);
    }
    lp[j] = acc;
    total = LogAddExp(total, acc);
  }
  if (!std::isfinite(total)) return false;
  pi.resize(n);
  for (int j = 0; j < n; ++j) pi[j] = std::exp(lp[j] - total);
  return true;
}

// When transition probabilities underflow the chain can become reducible.
// If it has a single closed class the stationary distribution is still
// unique: solve on that class and put zero mass elsewhere.
inline bool ClosedClassSolve(const MarkovChain& c, std::vector<double>& pi) {
  ResponseGraph g;
  g.num_nodes = c.num_nodes;
  g.offsets.assign(c.num_nodes + 1, 0);
  for (int v = 0; v < c.num_nodes; ++v) {
    for (int64_t e = c.offsets[v]; e < c.offsets[v + 1]; ++e) {
      if (c.vals[e] > 0.0) g.targets.push_back(c.cols[e]);
    }
    g.offsets[v + 1] = static_cast<int64_t>(g.targets.size());
  }
  StrongComponents(g);
  const auto closed = g.SinkComponents();
  if (closed.size() != 1) return false;
  const auto& members = closed[0];
  std::vector<int> local(c.num_nodes, -1);
  for (int i = 0; i < static_cast<int>(members.size()); ++i) local[members[i]] = i;
  MarkovChain sub;
  sub.num_nodes = static_cast<int>(members.size());
  sub.offsets.push_back(0);
  for (int v : members) {
    for (int64_t e = c.offsets[v]; e < c.offsets[v + 1]; ++e) {
      if (local[c.cols[e]] >= 0 && c.vals[e] > 0.0) {
        sub.cols.push_back(local[c.cols[e]]);
        sub.vals.push_back(c.vals[e]);
      }
    }
    sub.offsets.push_back(static_cast<int64_t>(sub.cols.size()));
  }
  std::vector<double> sub_pi;
  if (sub.num_nodes == 1) {
    sub_pi = {1.0};
  } else if (!GthSolve(sub, sub_pi)) {
    return false;
  }
  pi.assign(c.num_nodes, 0.0);
  for (int i = 0; i < sub.num_nodes; ++i) pi[members[i]] = sub_pi[i];
  return true;
}

}  // namespace internal

inline StationaryResult StationaryDistribution(
    const MarkovChain& c, const StationaryOptions& opts = {},
    const std::vector<double>* warm_start = nullptr) {
  StationaryResult r;
  const int n = c.num_nodes;
  if (n == 1) {
    r.pi = {1.0};
    return r;
  }
  if (n <= opts.dense_threshold) {
    r.dense = true;
    const bool ok =
        internal::GthSolve(c, r.pi) ||
        (n <= opts.log_dense_threshold && internal::LogGthSolve(c, r.pi)) ||
        internal::ClosedClassSolve(c, r.pi);
    if (!ok) {
      throw NumericalFailure(
          "chain is numerically reducible at alpha=" + std::to_string(c.alpha),
          std::numeric_limits<double>::infinity());
    }
    r.residual = StationaryResidual(c, r.pi);
    return r;
  }
  std::vector<double> pi = warm_start && static_cast<int>(warm_start->size()) == n
                               ? *warm_start
                               : std::vector<double>(n, 1.0 / n);
  std::vector<double> next(n);
  double change = std::numeric_limits<double>::infinity();
  for (r.iterations = 1; r.iterations <= opts.max_iterations; ++r.iterations) {
    for (int v = 0; v < n; ++v) next[v] = pi[v] * c.diag[v];
    for (int v = 0; v < n; ++v) {
      const double p = pi[v];
      if (p == 0.0) continue;
      for (int64_t e = c.offsets[v]; e < c.offsets[v + 1]; ++e) {
        next[c.cols[e]] += p * c.vals[e];
      }
    }
    double total = 0.0;
    for (double x : next) total += x;
    change = 0.0;
    for (int v = 0; v < n; ++v) {
      next[v] /= total;
      change += std::abs(next[v] - pi[v]);
    }
    pi.swap(next);
    if (change < opts.tol) break;
  }
  r.pi = std::move(pi);
  r.residual = StationaryResidual(c, r.pi);
  if (!(change < opts.tol)) {
    throw NumericalFailure("power iteration did not converge (L1 change " +
                               std::to_string(change) + ")",
                           r.residual);
  }
  return r;
}

// ---------------------------------------------------------------------------
// alpha-Rank.

struct AlphaPolicy {
  enum class Kind { kFixed, kSweep, kInfinite };
  Kind kind = Kind::kSweep;
  double alpha = 100.0;  // kFixed
  double alpha_min = 1e-2;
  double alpha_max = 1e4;
  int grid_points = 20;

  static AlphaPolicy Fixed(double a) {
    AlphaPolicy p;
    p.kind = Kind::kFixed;
    p.alpha = a;
    return p;
  }
  static AlphaPolicy Sweep() { return AlphaPolicy{}; }
  static AlphaPolicy Infinite() {
    AlphaPolicy p;
    p.kind = Kind::kInfinite;
    return p;
  }
  std::vector<double> Grid() const {
    std::vector<double> g(grid_points);
    for (int i = 0; i < grid_points; ++i) {
      const double t = grid_points > 1 ? double(i) / (grid_points - 1) : 0.0;
      g[i] = alpha_min * std::pow(alpha_max / alpha_min, t);
    }
    return g;
  }
};

struct AlphaRankOptions {
  AlphaPolicy policy;
  int m = 50;
  double tie_tol = 0.0;
  double l1_tol = 1e-4;         // sweep stabilization
  double off_sink_tol = 1e-6;   // mass allowed outside sink components
  double support_threshold = 1e-6;
  StationaryOptions stationary;
};

struct SweepPoint {
  double alpha = 0.0;
  double l1_change = 0.0;  // versus the previous grid point
  double off_sink_mass = 0.0;
  double residual = 0.0;
};

struct AlphaRankResult {
  std::vector<double> distribution;
  double alpha_used = 0.0;  // +inf for the infinite-limit policy
  std::vector<int> support;
  double residual = 0.0;
  double off_sink_mass = 0.0;  // outside sinks of the graph with tie edges
  std::vector<SweepPoint> trajectory;
  ResponseGraph graph;
};

inline double OffSinkMass(const ResponseGraph& g, const std::vector<double>& pi) {
  double m = 0.0;
  for (int v = 0; v < g.num_nodes; ++v) {
    if (!g.InSink(v)) m += pi[v];
  }
  return m;
}

inline std::string DescribeTrajectory(const std::vector<SweepPoint>& t) {
  std::ostringstream out;
  for (const auto& p : t) {
    out << "\n  alpha=" << p.alpha << " l1=" << p.l1_change
        << " off_sink=" << p.off_sink_mass << " residual=" << p.residual;
  }
  return out.str();
}

inline AlphaRankResult AlphaRank(const NormalFormGame& game,
                                 PopulationMode mode,
                                 const AlphaRankOptions& opts = {}) {
  AlphaRankResult r;
  r.graph = BuildResponseGraph(game, mode, opts.tie_tol);
  const ResponseGraph limit =
      BuildResponseGraph(game, mode, opts.tie_tol, 5000000, true);
  auto solve = [&](double alpha) {
    MarkovChain c = TransitionMatrix(game, mode, alpha, opts.m, opts.tie_tol);
    return StationaryDistribution(c, opts.stationary);
  };
  auto finish = [&](std::vector<double> pi, double alpha, double residual) {
    r.distribution = std::move(pi);
    r.alpha_used = alpha;
    r.residual = residual;
    r.off_sink_mass = OffSinkMass(limit, r.distribution);
    for (int v = 0; v < static_cast<int>(r.distribution.size()); ++v) {
      if (r.distribution[v] > opts.support_threshold) r.support.push_back(v);
    }
  };
  if (opts.policy.kind == AlphaPolicy::Kind::kFixed) {
    StationaryResult s = solve(opts.policy.alpha);
    finish(std::move(s.pi), opts.policy.alpha, s.residual);
    return r;
  }
  std::vector<double> prev;
  for (double alpha : opts.policy.Grid()) {
    StationaryResult s;
    try {
      s = solve(alpha);
    } catch (const NumericalFailure&) {
      break;  // rates underflowed; larger alphas are no better
    }
    SweepPoint p;
    p.alpha = alpha;
    p.residual = s.residual;
    p.off_sink_mass = OffSinkMass(limit, s.pi);
    p.l1_change = std::numeric_limits<double>::infinity();
    if (!prev.empty()) {
      p.l1_change = 0.0;
      for (size_t i = 0; i < prev.size(); ++i) {
        p.l1_change += std::abs(prev[i] - s.pi[i]);
      }
    }
    r.trajectory.push_back(p);
    if (p.l1_change < opts.l1_tol && p.off_sink_mass < opts.off_sink_tol) {
      const bool infinite = opts.policy.kind == AlphaPolicy::Kind::kInfinite;
      finish(std::move(s.pi),
             infinite ? std::numeric_limits<double>::infinity() : alpha,
             s.residual);
      return r;
    }
    prev = std::move(s.pi);
  }
  throw NumericalFailure("alpha sweep did not stabilize:" +
                         DescribeTrajectory(r.trajectory));
}

}  // namespace psro

#endif  // PSRO_RESPONSE_GRAPH_H_
