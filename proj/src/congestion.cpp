// Copyright 2026 The poadual Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "poadual/congestion.hpp"

#include <algorithm>

namespace poadual::congestion {

CostFunction CostFunction::polynomial(std::vector<Rational> coeffs) {
  for (const auto& c : coeffs)
    if (c < 0) throw Error("polynomial cost needs non-negative coefficients");
  while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
  if (coeffs.empty()) coeffs.push_back(Rational(0));
  CostFunction f;
  f.kind_ = Kind::Polynomial;
  f.coeffs_ = std::move(coeffs);
  return f;
}

CostFunction CostFunction::piecewise_linear(
    std::vector<std::pair<Rational, Rational>> breakpoints) {
  if (breakpoints.empty()) throw Error("piecewise-linear cost needs points");
  if (breakpoints.front().first != 0)
    throw Error("piecewise-linear cost must start at load 0");
  if (breakpoints.front().second < 0)
    throw Error("cost at load 0 must be non-negative");
  for (size_t i = 1; i < breakpoints.size(); ++i) {
    if (breakpoints[i].first <= breakpoints[i - 1].first)
      throw Error("piecewise-linear breakpoints must increase");
    if (breakpoints[i].second < breakpoints[i - 1].second)
      throw Error("piecewise-linear cost must be non-decreasing");
  }
  CostFunction f;
  f.kind_ = Kind::PiecewiseLinear;
  f.breaks_ = std::move(breakpoints);
  return f;
}

Rational CostFunction::eval(const Rational& load) const {
  if (load < 0) throw Error("cost function evaluated at negative load");
  if (kind_ == Kind::Polynomial) {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
      acc = acc * load + *it;
    return acc;
  }
  // Piecewise linear: interpolate, extrapolating the final slope.
  size_t i = breaks_.size() - 1;
  while (i > 0 && breaks_[i].first > load) --i;
  if (i + 1 < breaks_.size()) {
    const auto& [x0, y0] = breaks_[i];
    const auto& [x1, y1] = breaks_[i + 1];
    return y0 + (y1 - y0) / (x1 - x0) * (load - x0);
  }
  if (breaks_.size() == 1) return breaks_[0].second;
  const auto& [x0, y0] = breaks_[breaks_.size() - 2];
  const auto& [x1, y1] = breaks_.back();
  return y1 + (y1 - y0) / (x1 - x0) * (load - x1);
}

Rational CostFunction::derivative(const Rational& load) const {
  if (!has_derivative())
    throw Error("cost function has no derivative (piecewise-linear)");
  Rational acc = 0;
  for (size_t k = coeffs_.size(); k-- > 1;)
    acc = acc * load + coeffs_[k] * static_cast<long>(k);
  return acc;
}

namespace {

void check_strategies(const std::vector<std::vector<int>>& strategies,
                      size_t n_resources, const std::string& who) {
  if (strategies.empty()) throw Error(who + " has no strategies");
  for (const auto& s : strategies)
    for (int e : s)
      if (e < 0 || static_cast<size_t>(e) >= n_resources)
        throw Error(who + " references an unknown resource");
}

}  // namespace

void AtomicGame::validate() const {
  if (resources.size() != costs.size())
    throw Error("one cost function per resource required");
  for (const auto& p : players) {
    if (p.weight <= 0) throw Error("player weights must be positive");
    check_strategies(p.strategies, resources.size(), "player " + p.name);
  }
}

bool AtomicGame::unweighted() const {
  return std::all_of(players.begin(), players.end(),
                     [](const AtomicPlayer& p) { return p.weight == 1; });
}

void NonAtomicGame::validate() const {
  if (epsilon <= 0) throw Error("epsilon must be positive");
  if (resources.size() != costs.size())
    throw Error("one cost function per resource required");
  for (const auto& t : types) {
    if (t.m <= 0) throw Error("type demand must be positive");
    check_strategies(t.strategies, resources.size(), "type " + t.name);
  }
}

void SplittableGame::validate() const {
  if (epsilon <= 0) throw Error("epsilon must be positive");
  if (resources.size() != costs.size())
    throw Error("one cost function per resource required");
  // Polynomials with non-negative coefficients keep x*l(x) convex on
  // [0, inf), which the splittable analysis relies on; piecewise-linear
  // costs (no derivative at breakpoints) are rejected here.
  for (const auto& c : costs)
    if (!c.has_derivative())
      throw Error("splittable games need differentiable cost functions");
  for (const auto& p : players) {
    if (p.weight <= 0) throw Error("player weights must be positive");
    if (!is_integer(p.weight / epsilon))
      throw Error("player weight must be a multiple of epsilon");
    check_strategies(p.strategies, resources.size(), "player " + p.name);
  }
}

void validate_profile(const AtomicGame& g, const Profile& s) {
  if (s.size() != g.players.size())
    throw InvalidProfile("profile must pick one strategy per player");
  for (size_t i = 0; i < s.size(); ++i)
    if (s[i] < 0 ||
        static_cast<size_t>(s[i]) >= g.players[i].strategies.size())
      throw InvalidProfile("profile strategy index out of range");
}

std::vector<Rational> loads(const AtomicGame& g, const Profile& s) {
  validate_profile(g, s);
  std::vector<Rational> w(g.resources.size(), Rational(0));
  for (size_t i = 0; i < s.size(); ++i)
    for (int e : g.players[i].strategies[s[i]]) w[e] += g.players[i].weight;
  return w;
}

Rational atomic_player_cost(const AtomicGame& g, int player,
                            const Profile& s) {
  auto w = loads(g, s);
  Rational cost = 0;
  for (int e : g.players[player].strategies[s[player]])
    cost += g.players[player].weight * g.costs[e].eval(w[e]);
  return cost;
}

Rational atomic_total_cost(const AtomicGame& g, const Profile& s) {
  auto w = loads(g, s);
  Rational by_players = 0;
  for (size_t i = 0; i < g.players.size(); ++i)
    for (int e : g.players[i].strategies[s[i]])
      by_players += g.players[i].weight * g.costs[e].eval(w[e]);
  Rational by_resources = 0;
  for (size_t e = 0; e < g.resources.size(); ++e)
    by_resources += w[e] * g.costs[e].eval(w[e]);
  if (by_players != by_resources)
    throw Error("internal: cost accounting identity failed");
  return by_resources;
}

void validate_flow(const NonAtomicGame& g, const FlowProfile& f) {
  if (f.size() != g.types.size())
    throw InvalidProfile("flow must cover every type");
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i].size() != g.types[i].strategies.size())
      throw InvalidProfile("flow must cover every strategy of every type");
    Rational sum = 0;
    for (const auto& amount : f[i]) {
      if (amount < 0) throw InvalidProfile("flow amounts must be >= 0");
      if (!is_integer(amount / g.epsilon))
        throw InvalidProfile("flow amounts must be multiples of epsilon");
      sum += amount;
    }
    if (sum != g.demand(static_cast<int>(i)))
      throw InvalidProfile("type flow must sum to its demand");
  }
}

std::vector<Rational> flow_loads(const NonAtomicGame& g,
                                 const FlowProfile& f) {
  validate_flow(g, f);
  std::vector<Rational> load(g.resources.size(), Rational(0));
  for (size_t i = 0; i < f.size(); ++i)
    for (size_t j = 0; j < f[i].size(); ++j)
      for (int e : g.types[i].strategies[j]) load[e] += f[i][j];
  return load;
}

Rational strategy_cost(const NonAtomicGame& g, const FlowProfile& f, int type,
                       int strategy) {
  auto load = flow_loads(g, f);
  Rational cost = 0;
  for (int e : g.types[type].strategies[strategy])
    cost += g.costs[e].eval(load[e]);
  return cost;
}

Rational nonatomic_social_cost(const NonAtomicGame& g, const FlowProfile& f) {
  auto load = flow_loads(g, f);
  Rational cost = 0;
  for (size_t e = 0; e < g.resources.size(); ++e)
    cost += load[e] * g.costs[e].eval(load[e]);
  return cost;
}

void validate_split(const SplittableGame& g, const SplitProfile& u) {
  if (u.size() != g.players.size())
    throw InvalidProfile("split must cover every player");
  for (size_t i = 0; i < u.size(); ++i) {
    if (u[i].size() != g.players[i].strategies.size())
      throw InvalidProfile("split must cover every strategy of every player");
    Rational sum = 0;
    for (const auto& amount : u[i]) {
      if (amount < 0) throw InvalidProfile("split amounts must be >= 0");
      if (!is_integer(amount / g.epsilon))
        throw InvalidProfile("split amounts must be multiples of epsilon");
      sum += amount;
    }
    if (sum != g.players[i].weight)
      throw InvalidProfile("player split must sum to its weight");
  }
}

std::vector<Rational> player_split_loads(const SplittableGame& g,
                                         const SplitProfile& u, int player) {
  std::vector<Rational> load(g.resources.size(), Rational(0));
  for (size_t j = 0; j < u[player].size(); ++j)
    for (int e : g.players[player].strategies[j]) load[e] += u[player][j];
  return load;
}

std::vector<Rational> split_loads(const SplittableGame& g,
                                  const SplitProfile& u) {
  validate_split(g, u);
  std::vector<Rational> load(g.resources.size(), Rational(0));
  for (size_t i = 0; i < u.size(); ++i) {
    auto mine = player_split_loads(g, u, static_cast<int>(i));
    for (size_t e = 0; e < load.size(); ++e) load[e] += mine[e];
  }
  return load;
}

Rational splittable_player_cost(const SplittableGame& g, int player,
                                const SplitProfile& u) {
  auto total = split_loads(g, u);
  auto mine = player_split_loads(g, u, player);
  Rational cost = 0;
  for (size_t e = 0; e < total.size(); ++e)
    if (mine[e] != 0) cost += mine[e] * g.costs[e].eval(total[e]);
  return cost;
}

Rational splittable_total_cost(const SplittableGame& g,
                               const SplitProfile& u) {
  auto total = split_loads(g, u);
  Rational by_players = 0;
  for (size_t i = 0; i < g.players.size(); ++i)
    by_players += splittable_player_cost(g, static_cast<int>(i), u);
  Rational by_resources = 0;
  for (size_t e = 0; e < total.size(); ++e)
    by_resources += total[e] * g.costs[e].eval(total[e]);
  if (by_players != by_resources)
    throw Error("internal: cost accounting identity failed");
  return by_resources;
}

}  // namespace poadual::congestion
