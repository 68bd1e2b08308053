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

// Normal-form games: dense per-player payoff tensors, structural predicates,
// the random generators used for the oracle comparisons, fixture games and a
// JSON file format.

#ifndef PSRO_GAME_H_
#define PSRO_GAME_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "psro/errors.h"
#include "psro/rng.h"

namespace psro {

using Profile = std::vector<int>;
// Factorized mixed profile: one distribution per player.
using MixedProfile = std::vector<std::vector<double>>;

// Row-major index arithmetic over a product of strategy sets.
class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<int> dims) : dims_(std::move(dims)) {
    strides_.assign(dims_.size(), 1);
    size_ = 1;
    for (int k = static_cast<int>(dims_.size()) - 1; k >= 0; --k) {
      if (dims_[k] <= 0) throw InvalidInput("shape entries must be positive");
      strides_[k] = size_;
      size_ *= dims_[k];
    }
  }

  int rank() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_[k]; }
  const std::vector<int>& dims() const { return dims_; }
  int64_t stride(int k) const { return strides_[k]; }
  int64_t size() const { return size_; }

  int64_t Ravel(const Profile& s) const {
    int64_t flat = 0;
    for (int k = 0; k < rank(); ++k) flat += strides_[k] * s[k];
    return flat;
  }
  Profile Unravel(int64_t flat) const {
    Profile s(dims_.size());
    for (int k = 0; k < rank(); ++k) {
      s[k] = static_cast<int>(flat / strides_[k]);
      flat %= strides_[k];
    }
    return s;
  }
  int Coord(int64_t flat, int k) const {
    return static_cast<int>((flat / strides_[k]) % dims_[k]);
  }
  // Flat index of the profile obtained by setting player k's entry to v.
  int64_t Replace(int64_t flat, int k, int v) const {
    return flat + (v - Coord(flat, k)) * strides_[k];
  }
  // Advances an odometer; returns false after the last profile.
  bool Next(Profile& s) const {
    for (int k = rank() - 1; k >= 0; --k) {
      if (++s[k] < dims_[k]) return true;
      s[k] = 0;
    }
    return false;
  }

 private:
  std::vector<int> dims_;
  std::vector<int64_t> strides_;
  int64_t size_ = 1;
};

class NormalFormGame {
 public:
  NormalFormGame() = default;
  NormalFormGame(std::vector<int> strategy_counts,
                 std::vector<std::vector<double>> payoffs)
      : shape_(std::move(strategy_counts)), payoffs_(std::move(payoffs)) {
    if (shape_.rank() == 0) throw InvalidInput("game needs at least 1 player");
    if (static_cast<int>(payoffs_.size()) != shape_.rank()) {
      throw InvalidInput("expected one payoff tensor per player");
    }
    for (const auto& t : payoffs_) {
      if (static_cast<int64_t>(t.size()) != shape_.size()) {
        throw InvalidInput("payoff tensor size does not match strategy counts");
      }
      for (double v : t) {
        if (!std::isfinite(v)) throw InvalidInput("payoffs must be finite");
      }
    }
  }

  int num_players() const { return shape_.rank(); }
  const std::vector<int>& strategy_counts() const { return shape_.dims(); }
  int num_strategies(int k) const { return shape_.dim(k); }
  int64_t num_profiles() const { return shape_.size(); }
  const Shape& shape() const { return shape_; }

  double payoff(int k, int64_t flat) const { return payoffs_[k][flat]; }
  double payoff(int k, const Profile& s) const {
    return payoffs_[k][shape_.Ravel(s)];
  }
  const std::vector<double>& tensor(int k) const { return payoffs_[k]; }
  std::vector<double>& mutable_tensor(int k) { return payoffs_[k]; }

  // Optional human-readable strategy names, used in logs and DOT output.
  const std::vector<std::vector<std::string>>& labels() const {
    return labels_;
  }
  void set_labels(std::vector<std::vector<std::string>> labels) {
    labels_ = std::move(labels);
  }
  std::string Label(int k, int s) const {
    if (k < static_cast<int>(labels_.size()) &&
        s < static_cast<int>(labels_[k].size())) {
      return labels_[k][s];
    }
    return std::to_string(s);
  }
  std::string ProfileLabel(const Profile& s) const {
    std::string out = "(";
    for (int k = 0; k < static_cast<int>(s.size()); ++k) {
      if (k) out += ",";
      out += Label(k, s[k]);
    }
    return out + ")";
  }

  bool operator==(const NormalFormGame& o) const {
    return shape_.dims() == o.shape_.dims() && payoffs_ == o.payoffs_;
  }

 private:
  Shape shape_;
  std::vector<std::vector<double>> payoffs_;
  std::vector<std::vector<std::string>> labels_;
};

// Two-player game from row-player and column-player matrices.
inline NormalFormGame MakeBimatrixGame(
    const std::vector<std::vector<double>>& m1,
    const std::vector<std::vector<double>>& m2) {
  const int r = static_cast<int>(m1.size());
  const int c = r ? static_cast<int>(m1[0].size()) : 0;
  std::vector<std::vector<double>> t(2, std::vector<double>(r * c));
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(m1[i].size()) != c ||
        static_cast<int>(m2.size()) != r ||
        static_cast<int>(m2[i].size()) != c) {
      throw InvalidInput("ragged bimatrix");
    }
    for (int j = 0; j < c; ++j) {
      t[0][i * c + j] = m1[i][j];
      t[1][i * c + j] = m2[i][j];
    }
  }
  return NormalFormGame({r, c}, std::move(t));
}

// Symmetric two-player game M^2(i, j) = M^1(j, i).
inline NormalFormGame MakeSymmetricGame(
    const std::vector<std::vector<double>>& m1) {
  const int n = static_cast<int>(m1.size());
  std::vector<std::vector<double>> m2(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m2[i][j] = m1[j][i];
  }
  return MakeBimatrixGame(m1, m2);
}

inline NormalFormGame MakeZeroSumGame(
    const std::vector<std::vector<double>>& m1) {
  std::vector<std::vector<double>> m2 = m1;
  for (auto& row : m2) {
    for (double& v : row) v = -v;
  }
  return MakeBimatrixGame(m1, m2);
}

inline void ValidateProfile(const NormalFormGame& game,
                            const MixedProfile& profile, double tol = 1e-12) {
  if (static_cast<int>(profile.size()) != game.num_players()) {
    throw InvalidInput("mixed profile has wrong number of players");
  }
  for (int k = 0; k < game.num_players(); ++k) {
    if (static_cast<int>(profile[k].size()) != game.num_strategies(k)) {
      throw InvalidInput("mixed profile has wrong length for player " +
                         std::to_string(k));
    }
    double sum = 0.0;
    for (double p : profile[k]) {
      if (!(p >= 0.0)) throw InvalidInput("negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw InvalidInput("distribution does not sum to 1");
    }
  }
}

inline MixedProfile UniformProfile(const NormalFormGame& game) {
  MixedProfile p(game.num_players());
  for (int k = 0; k < game.num_players(); ++k) {
    p[k].assign(game.num_strategies(k), 1.0 / game.num_strategies(k));
  }
  return p;
}

inline MixedProfile PureProfile(const NormalFormGame& game, const Profile& s) {
  MixedProfile p(game.num_players());
  for (int k = 0; k < game.num_players(); ++k) {
    p[k].assign(game.num_strategies(k), 0.0);
    p[k][s[k]] = 1.0;
  }
  return p;
}

// Probability of every pure profile under a factorized profile.
inline std::vector<double> JointFromProfile(const NormalFormGame& game,
                                            const MixedProfile& profile) {
  const Shape& shape = game.shape();
  std::vector<double> joint(shape.size());
  Profile s(game.num_players(), 0);
  int64_t flat = 0;
  do {
    double w = 1.0;
    for (int k = 0; k < game.num_players(); ++k) w *= profile[k][s[k]];
    joint[flat++] = w;
  } while (shape.Next(s));
  return joint;
}

// (M^1(pi), ..., M^K(pi)).
inline std::vector<double> ExpectedPayoffs(const NormalFormGame& game,
                                           const MixedProfile& profile) {
  ValidateProfile(game, profile, 1e-9);
  std::vector<double> out(game.num_players(), 0.0);
  const Shape& shape = game.shape();
  Profile s(game.num_players(), 0);
  int64_t flat = 0;
  do {
    double w = 1.0;
    for (int k = 0; k < game.num_players(); ++k) w *= profile[k][s[k]];
    if (w != 0.0) {
      for (int k = 0; k < game.num_players(); ++k) {
        out[k] += w * game.payoff(k, flat);
      }
    }
    ++flat;
  } while (shape.Next(s));
  return out;
}

// M^k(sigma, pi^{-k}) for every pure strategy sigma of player k.
inline std::vector<double> DeviationPayoffs(const NormalFormGame& game,
                                            const MixedProfile& profile,
                                            int k) {
  std::vector<double> out(game.num_strategies(k), 0.0);
  const Shape& shape = game.shape();
  Profile s(game.num_players(), 0);
  int64_t flat = 0;
  do {
    double w = 1.0;
    for (int j = 0; j < game.num_players(); ++j) {
      if (j != k) w *= profile[j][s[j]];
    }
    if (w != 0.0) out[s[k]] += w * game.payoff(k, flat);
    ++flat;
  } while (shape.Next(s));
  return out;
}

// ---------------------------------------------------------------------------
// Structural predicates.

inline bool IsZeroSum(const NormalFormGame& game, double tol = 1e-9) {
  for (int64_t i = 0; i < game.num_profiles(); ++i) {
    double sum = 0.0;
    for (int k = 0; k < game.num_players(); ++k) sum += game.payoff(k, i);
    if (std::abs(sum) > tol) return false;
  }
  return true;
}

// Invariance under every permutation of players, checked on adjacent
// transpositions (which generate the symmetric group).
inline bool IsSymmetric(const NormalFormGame& game, double tol = 0.0) {
  const int n = game.num_players();
  for (int k = 1; k < n; ++k) {
    if (game.num_strategies(k) != game.num_strategies(0)) return false;
  }
  const Shape& shape = game.shape();
  Profile s(n, 0);
  do {
    for (int i = 0; i + 1 < n; ++i) {
      Profile t = s;
      std::swap(t[i], t[i + 1]);
      for (int k = 0; k < n; ++k) {
        const int image = k == i ? i + 1 : (k == i + 1 ? i : k);
        if (std::abs(game.payoff(k, s) - game.payoff(image, t)) > tol) {
          return false;
        }
      }
    }
  } while (shape.Next(s));
  return true;
}

// Two-player only: payoffs in {0, 1} and M^1 + M^2 = 1 everywhere.
inline bool IsWinLoss(const NormalFormGame& game) {
  if (game.num_players() != 2) {
    throw Unsupported("win-loss predicate is defined for two players only");
  }
  for (int64_t i = 0; i < game.num_profiles(); ++i) {
    const double a = game.payoff(0, i), b = game.payoff(1, i);
    if ((a != 0.0 && a != 1.0) || (b != 0.0 && b != 1.0)) return false;
    if (a + b != 1.0) return false;
  }
  return true;
}

struct GameFlags {
  bool symmetric = false;
  bool zero_sum = false;
  bool win_loss = false;
};

inline GameFlags ComputeFlags(const NormalFormGame& game) {
  GameFlags f;
  f.symmetric = IsSymmetric(game);
  f.zero_sum = IsZeroSum(game);
  f.win_loss = game.num_players() == 2 && IsWinLoss(game);
  return f;
}

// ---------------------------------------------------------------------------
// Random generators. Draw order: player-major, then actions (or joint
// actions) in row-major order.

inline uint64_t DeriveSeed(uint64_t seed, uint64_t stream) {
  return SplitMix64(seed ^ SplitMix64(stream + 0x2545f4914f6cdd1dULL));
}

struct TransitiveParams {
  std::vector<double> mean_values = {0.0, 1.0};
  std::vector<double> mean_probs = {0.5, 0.5};
  double var = 0.1;
};

namespace internal {

// f_k[a] for every player and action.
inline std::vector<std::vector<double>> TransitiveScores(
    int strategy_count, int num_players, const TransitiveParams& p,
    uint64_t seed) {
  if (p.mean_values.empty() || p.mean_values.size() != p.mean_probs.size()) {
    throw InvalidInput("mean_values and mean_probs must have equal length");
  }
  double total = 0.0;
  for (double q : p.mean_probs) {
    if (!(q >= 0.0)) throw InvalidInput("mean_probs must be nonnegative");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidInput("mean_probs must sum to 1");
  }
  if (!(p.var > 0.0)) throw InvalidInput("var must be positive");
  Rng rng(seed);
  std::vector<std::vector<double>> f(num_players,
                                     std::vector<double>(strategy_count));
  for (int k = 0; k < num_players; ++k) {
    for (int a = 0; a < strategy_count; ++a) {
      const double mu = p.mean_values[rng.Categorical(p.mean_probs)];
      f[k][a] = rng.Normal(mu, p.var);
    }
  }
  return f;
}

// Adds the transitive component built from scores f into tensors t.
inline void AddTransitive(const Shape& shape,
                          const std::vector<std::vector<double>>& f,
                          std::vector<std::vector<double>>& t) {
  const int n = shape.rank();
  const double scale = n > 1 ? 1.0 / (n - 1) : 0.0;
  Profile s(n, 0);
  int64_t flat = 0;
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += f[i][s[i]];
    for (int k = 0; k < n; ++k) {
      t[k][flat] += f[k][s[k]] - scale * (total - f[k][s[k]]);
    }
    ++flat;
  } while (shape.Next(s));
}

inline std::vector<std::vector<double>> CyclicTensors(const Shape& shape,
                                                      double var,
                                                      uint64_t seed) {
  if (!(var > 0.0)) throw InvalidInput("var must be positive");
  const int n = shape.rank();
  Rng rng(seed);
  std::vector<std::vector<double>> c(n);
  for (int k = 0; k < n; ++k) {
    c[k].resize(shape.size());
    for (double& v : c[k]) v = rng.Normal(0.0, var);
  }
  for (int k = 0; k < n; ++k) {
    std::vector<double> slice(shape.dim(k), 0.0);
    for (int64_t i = 0; i < shape.size(); ++i) {
      slice[shape.Coord(i, k)] += c[k][i];
    }
    const double count = static_cast<double>(shape.size() / shape.dim(k));
    for (double& v : slice) v /= count;
    for (int64_t i = 0; i < shape.size(); ++i) {
      c[k][i] -= slice[shape.Coord(i, k)];
    }
  }
  return c;
}

}  // namespace internal

inline NormalFormGame GenerateTransitive(int strategy_count, int num_players,
                                         const TransitiveParams& params,
                                         uint64_t seed) {
  Shape shape(std::vector<int>(num_players, strategy_count));
  auto f = internal::TransitiveScores(strategy_count, num_players, params,
                                      seed);
  std::vector<std::vector<double>> t(num_players,
                                     std::vector<double>(shape.size(), 0.0));
  internal::AddTransitive(shape, f, t);
  return NormalFormGame(shape.dims(), std::move(t));
}

inline NormalFormGame GenerateCyclic(int strategy_count, int num_players,
                                     double var, uint64_t seed) {
  Shape shape(std::vector<int>(num_players, strategy_count));
  return NormalFormGame(shape.dims(),
                        internal::CyclicTensors(shape, var, seed));
}

// Transitive plus cyclic component. The two parts use the derived seeds
// DeriveSeed(seed, 0) and DeriveSeed(seed, 1).
inline NormalFormGame GenerateRandomGame(int strategy_count, int num_players,
                                         uint64_t seed) {
  Shape shape(std::vector<int>(num_players, strategy_count));
  auto t = internal::CyclicTensors(shape, 0.4, DeriveSeed(seed, 1));
  auto f = internal::TransitiveScores(strategy_count, num_players,
                                      TransitiveParams{}, DeriveSeed(seed, 0));
  internal::AddTransitive(shape, f, t);
  return NormalFormGame(shape.dims(), std::move(t));
}

// ---------------------------------------------------------------------------
// Fixture games.

inline NormalFormGame Table2Game(double eps = 0.1, double phi = 10.0) {
  const double p2 = phi * phi;
  auto g = MakeSymmetricGame({{0, -phi, 1, phi, -eps},
                              {phi, 0, -p2, 1, -eps},
                              {-1, p2, 0, -phi, -eps},
                              {-phi, -1, phi, 0, -eps},
                              {eps, eps, eps, eps, 0}});
  g.set_labels({{"A", "B", "C", "D", "X"}, {"A", "B", "C", "D", "X"}});
  return g;
}

inline NormalFormGame ExampleA4Game(double eps = 0.1) {
  auto g = MakeSymmetricGame({{0, 1, eps}, {1, 0, -eps}, {-eps, eps, 0}});
  g.set_labels({{"A", "B", "X"}, {"A", "B", "X"}});
  return g;
}

inline NormalFormGame ExampleA5Game(double eps = 0.1) {
  auto g = MakeZeroSumGame({{-1, 1}, {1, -1}, {-eps, -eps / 2}});
  g.set_labels({{"A", "B", "X"}, {"A", "B"}});
  return g;
}

inline NormalFormGame ChickenGame() {
  auto g = MakeBimatrixGame({{0, 7}, {2, 6}}, {{0, 2}, {7, 6}});
  g.set_labels({{"D", "C"}, {"D", "C"}});
  return g;
}

inline NormalFormGame PrisonersDilemmaGame() {
  auto g = MakeBimatrixGame({{0, 3}, {-1, 2}}, {{0, -1}, {3, 2}});
  g.set_labels({{"D", "C"}, {"D", "C"}});
  return g;
}

// Three players, three strategies (labelled 1..3). Nine profiles carry the
// pictured response graph; every other profile pays -10 - d to everyone,
// with d the Hamming distance to (3,2,3), so it is dominated and drains
// toward the pictured part.
inline NormalFormGame SnowflakeGame() {
  Shape shape({3, 3, 3});
  std::vector<std::vector<double>> t(3, std::vector<double>(shape.size()));
  const Profile sink = {2, 1, 2};
  Profile s(3, 0);
  int64_t flat = 0;
  do {
    int d = 0;
    for (int k = 0; k < 3; ++k) d += s[k] != sink[k];
    for (int k = 0; k < 3; ++k) t[k][flat] = -10.0 - d;
    ++flat;
  } while (shape.Next(s));
  struct Entry {
    Profile s;
    double u[3];
  };
  const Entry pictured[] = {
      {{0, 0, 0}, {0, 2, 2}}, {{1, 0, 0}, {1, 0, 0}}, {{1, 1, 0}, {3, 1, 0}},
      {{1, 1, 1}, {0, 0, 1}}, {{0, 1, 1}, {1, 1, 0}}, {{0, 1, 0}, {0, 0, 1}},
      {{0, 0, 1}, {0, 0, 0}}, {{2, 1, 0}, {2, 0, 0}}, {{2, 1, 2}, {5, 5, 5}},
  };
  for (const Entry& e : pictured) {
    for (int k = 0; k < 3; ++k) t[k][shape.Ravel(e.s)] = e.u[k];
  }
  NormalFormGame g(shape.dims(), std::move(t));
  g.set_labels(std::vector<std::vector<std::string>>(3, {"1", "2", "3"}));
  return g;
}

// name is one of table2, table2(eps,phi), exampleA4, exampleA4(eps),
// exampleA5, exampleA5(eps), chicken, prisoners_dilemma, snowflake3p.
inline NormalFormGame FixtureGame(const std::string& name) {
  std::string base = name;
  std::vector<double> args;
  const auto open = name.find('(');
  if (open != std::string::npos) {
    if (name.back() != ')') throw InvalidInput("bad fixture spec: " + name);
    base = name.substr(0, open);
    std::stringstream ss(name.substr(open + 1, name.size() - open - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        args.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw InvalidInput("bad fixture argument: " + item);
      }
    }
  }
  auto arity = [&](size_t n) {
    if (args.size() > n) throw InvalidInput("too many arguments: " + name);
  };
  if (base == "table2") {
    arity(2);
    return Table2Game(args.size() > 0 ? args[0] : 0.1,
                      args.size() > 1 ? args[1] : 10.0);
  }
  if (base == "exampleA4") {
    arity(1);
    return ExampleA4Game(args.empty() ? 0.1 : args[0]);
  }
  if (base == "exampleA5") {
    arity(1);
    return ExampleA5Game(args.empty() ? 0.1 : args[0]);
  }
  arity(0);
  if (base == "chicken") return ChickenGame();
  if (base == "prisoners_dilemma") return PrisonersDilemmaGame();
  if (base == "snowflake3p") return SnowflakeGame();
  throw InvalidInput("unknown fixture game: " + name);
}

// ---------------------------------------------------------------------------
// JSON: {"players": K, "strategy_counts": [...], "payoffs": [[...], ...]}.

inline nlohmann::json GameToJson(const NormalFormGame& game) {
  nlohmann::json j;
  j["players"] = game.num_players();
  j["strategy_counts"] = game.strategy_counts();
  j["payoffs"] = nlohmann::json::array();
  for (int k = 0; k < game.num_players(); ++k) {
    j["payoffs"].push_back(game.tensor(k));
  }
  if (!game.labels().empty()) j["labels"] = game.labels();
  return j;
}

inline NormalFormGame GameFromJson(const nlohmann::json& j) {
  try {
    const int k = j.at("players").get<int>();
    auto counts = j.at("strategy_counts").get<std::vector<int>>();
    auto payoffs = j.at("payoffs").get<std::vector<std::vector<double>>>();
    if (static_cast<int>(counts.size()) != k) {
      throw InvalidInput("strategy_counts length differs from players");
    }
    NormalFormGame g(std::move(counts), std::move(payoffs));
    if (j.contains("labels")) {
      g.set_labels(j["labels"].get<std::vector<std::vector<std::string>>>());
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed game JSON: ") + e.what());
  }
}

inline NormalFormGame ReadGameFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open game file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("cannot parse " + path + ": " + e.what());
  }
  return GameFromJson(j);
}

inline void WriteGameFile(const NormalFormGame& game, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write game file: " + path);
  out << GameToJson(game).dump() << "\n";
}

}  // namespace psro

#endif  // PSRO_GAME_H_
