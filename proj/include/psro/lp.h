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

// Dense two-phase simplex with Bland's rule. Intended for the small LPs that
// arise from matrix games (a few hundred variables at most).

#ifndef PSRO_LP_H_
#define PSRO_LP_H_

#include <cmath>
#include <limits>
#include <vector>

#include "psro/errors.h"

namespace psro {

enum class Sense { kLe, kEq, kGe };

// minimize objective . x  subject to  rows[i] . x (sense[i]) rhs[i],  x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<Sense> senses;
  std::vector<double> rhs;

  void AddRow(std::vector<double> row, Sense sense, double b) {
    rows.push_back(std::move(row));
    senses.push_back(sense);
    rhs.push_back(b);
  }
};

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
  int pivots = 0;
};

namespace internal {

class Tableau {
 public:
  Tableau(int rows, int cols)
      : m_(rows), n_(cols), a_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  double& at(int r, int c) { return a_[r * (n_ + 1) + c]; }
  double& rhs(int r) { return at(r, n_); }
  double& cost(int c) { return at(m_, c); }
  int& basis(int r) { return basis_[r]; }

  void Pivot(int pr, int pc) {
    const double inv = 1.0 / at(pr, pc);
    for (int c = 0; c <= n_; ++c) at(pr, c) *= inv;
    at(pr, pc) = 1.0;
    for (int r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double f = at(r, pc);
      if (f == 0.0) continue;
      double* dst = &a_[r * (n_ + 1)];
      const double* src = &a_[pr * (n_ + 1)];
      for (int c = 0; c <= n_; ++c) dst[c] -= f * src[c];
      dst[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  // Runs simplex iterations over columns [0, allowed). Returns false if
  // unbounded.
  bool Optimize(int allowed, double tol, int& pivots) {
    const int max_pivots = 50000 + 100 * (m_ + n_);
    while (true) {
      int pc = -1;
      for (int c = 0; c < allowed; ++c) {
        if (cost(c) < -tol) {
          pc = c;
          break;
        }
      }
      if (pc < 0) return true;
      int pr = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < m_; ++r) {
        const double v = at(r, pc);
        if (v > tol) {
          const double ratio = rhs(r) / v;
          if (ratio < best - 1e-15 ||
              (std::abs(ratio - best) <= 1e-15 && basis_[r] < basis_[pr])) {
            best = ratio;
            pr = r;
          }
        }
      }
      if (pr < 0) return false;
      Pivot(pr, pc);
      if (++pivots > max_pivots) {
        throw NumericalFailure("simplex exceeded pivot budget");
      }
    }
  }

  int rows() const { return m_; }
  int cols() const { return n_; }

 private:
  int m_, n_;
  std::vector<double> a_;
  std::vector<int> basis_;
};

}  // namespace internal

inline LpResult SolveLp(const LinearProgram& lp, double tol = 1e-10) {
  const int m = static_cast<int>(lp.rows.size());
  const int n = lp.num_vars;
  if (static_cast<int>(lp.objective.size()) != n) {
    throw InvalidInput("objective length differs from num_vars");
  }
  // Column layout: structural | slack/surplus | artificial.
  std::vector<double> b = lp.rhs;
  std::vector<Sense> sense = lp.senses;
  std::vector<double> flip(m, 1.0);
  int num_slack = 0, num_art = 0;
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(lp.rows[i].size()) != n) {
      throw InvalidInput("constraint row length differs from num_vars");
    }
    if (b[i] < 0) {
      flip[i] = -1.0;
      b[i] = -b[i];
      if (sense[i] == Sense::kLe) {
        sense[i] = Sense::kGe;
      } else if (sense[i] == Sense::kGe) {
        sense[i] = Sense::kLe;
      }
    }
    if (sense[i] != Sense::kEq) ++num_slack;
    if (sense[i] != Sense::kLe) ++num_art;
  }
  const int cols = n + num_slack + num_art;
  internal::Tableau t(m, cols);
  int slack = n, art = n + num_slack;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t.at(i, j) = flip[i] * lp.rows[i][j];
    t.rhs(i) = b[i];
    if (sense[i] == Sense::kLe) {
      t.at(i, slack) = 1.0;
      t.basis(i) = slack++;
    } else {
      if (sense[i] == Sense::kGe) t.at(i, slack++) = -1.0;
      t.at(i, art) = 1.0;
      t.basis(i) = art++;
    }
  }
  LpResult result;
  // Phase 1: minimize the sum of artificials.
  if (num_art > 0) {
    for (int c = 0; c <= cols; ++c) t.cost(c) = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t.basis(i) >= n + num_slack) {
        for (int c = 0; c <= cols; ++c) {
          if (c < n + num_slack || c == cols) t.cost(c) -= t.at(i, c);
        }
      }
    }
    t.Optimize(cols, tol, result.pivots);
    if (-t.cost(cols) > 1e-8 * (1.0 + std::abs(t.cost(cols)))) {
      result.status = LpResult::Status::kInfeasible;
      return result;
    }
    // Drive artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis(i) < n + num_slack) continue;
      for (int c = 0; c < n + num_slack; ++c) {
        if (std::abs(t.at(i, c)) > 1e-9) {
          t.Pivot(i, c);
          break;
        }
      }
    }
  }
  // Phase 2.
  for (int c = 0; c <= cols; ++c) t.cost(c) = 0.0;
  for (int j = 0; j < n; ++j) t.cost(j) = lp.objective[j];
  for (int i = 0; i < m; ++i) {
    const int bv = t.basis(i);
    const double f = bv < n ? lp.objective[bv] : 0.0;
    if (f == 0.0) continue;
    for (int c = 0; c <= cols; ++c) t.cost(c) -= f * t.at(i, c);
  }
  if (!t.Optimize(n + num_slack, tol, result.pivots)) {
    result.status = LpResult::Status::kUnbounded;
    return result;
  }
  result.status = LpResult::Status::kOptimal;
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (t.basis(i) < n) result.x[t.basis(i)] = t.rhs(i);
  }
  result.objective = 0.0;
  for (int j = 0; j < n; ++j) result.objective += lp.objective[j] * result.x[j];
  return result;
}

}  // namespace psro

#endif  // PSRO_LP_H_
