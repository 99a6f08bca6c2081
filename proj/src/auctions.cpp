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

#include "poadual/auctions.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace poadual::auctions {

using equilibria::Caps;

std::string to_string(Mechanism m) {
  return m == Mechanism::FirstPrice ? "first-price" : "second-price";
}

std::string to_string(Learner l) {
  switch (l) {
    case Learner::MultiplicativeWeights:
      return "multiplicative-weights";
    case Learner::RegretMatching:
      return "regret-matching";
    case Learner::FirstAction:
      return "first-action";
  }
  return "?";
}

Valuation Valuation::make(int items, std::vector<Rational> by_subset) {
  if (items < 0 || by_subset.size() != (size_t{1} << items))
    throw Error("valuation table must have one entry per subset");
  if (by_subset[0] != 0) throw Error("valuation of the empty set must be 0");
  for (int mask = 0; mask < (1 << items); ++mask)
    for (int j = 0; j < items; ++j)
      if (mask & (1 << j)) {
        if (by_subset[mask] < by_subset[mask ^ (1 << j)])
          throw Error("valuation must be monotone");
      }
  Valuation v;
  v.items = items;
  v.by_subset = std::move(by_subset);
  return v;
}

Valuation Valuation::additive(const std::vector<Rational>& per_item) {
  int items = static_cast<int>(per_item.size());
  std::vector<Rational> table(size_t{1} << items, Rational(0));
  for (int mask = 0; mask < (1 << items); ++mask)
    for (int j = 0; j < items; ++j)
      if (mask & (1 << j)) table[mask] += per_item[j];
  return make(items, std::move(table));
}

bool Valuation::is_subadditive() const {
  for (int s = 0; s < (1 << items); ++s)
    for (int t = 0; t < (1 << items); ++t)
      if (by_subset[s | t] > by_subset[s] + by_subset[t]) return false;
  return true;
}

void BayesianAuction::validate() const {
  if (items <= 0) throw Error("auction needs at least one item");
  if (types.empty()) throw Error("auction needs players");
  if (types.size() != actions.size() || types.size() != player_names.size())
    throw Error("per-player tables must align");
  if (admissible.size() != types.size())
    throw Error("per-player tables must align");
  for (size_t i = 0; i < types.size(); ++i) {
    if (types[i].empty()) throw Error("every player needs a type");
    Rational total = 0;
    for (const auto& t : types[i]) {
      if (t.prior <= 0) throw Error("type priors must be positive");
      if (t.valuation.items != items)
        throw Error("valuation arity must match the item count");
      total += t.prior;
    }
    if (total != 1) throw Error("type priors must sum to 1");
    if (actions[i].empty()) throw Error("every player needs an action");
    for (const auto& a : actions[i]) {
      if (static_cast<int>(a.bids.size()) != items)
        throw Error("bid vectors must cover every item");
      for (const auto& b : a.bids)
        if (b < 0) throw Error("bids must be non-negative");
    }
    if (admissible[i].size() != types[i].size())
      throw Error("admissibility table must cover every type");
    for (const auto& adm : admissible[i]) {
      if (adm.empty()) throw Error("every type needs an admissible action");
      for (int a : adm)
        if (a < 0 || static_cast<size_t>(a) >= actions[i].size())
          throw Error("admissible index out of range");
    }
  }
}

BayesianAuction::Outcome BayesianAuction::outcome(
    const std::vector<int>& action_idx) const {
  Outcome out;
  out.item_winner.assign(items, 0);
  out.payments.assign(types.size(), Rational(0));
  for (int j = 0; j < items; ++j) {
    int winner = 0;
    Rational best = actions[0][action_idx[0]].bids[j];
    Rational second = 0;
    for (size_t i = 1; i < types.size(); ++i) {
      const Rational& b = actions[i][action_idx[i]].bids[j];
      if (b > best) {
        second = best;
        best = b;
        winner = static_cast<int>(i);
      } else if (b > second) {
        second = b;
      }
    }
    out.item_winner[j] = winner;
    out.payments[winner] +=
        mechanism == Mechanism::FirstPrice ? best : second;
  }
  return out;
}

Rational BayesianAuction::utility(int player,
                                  const std::vector<int>& action_idx,
                                  int type_idx) const {
  auto out = outcome(action_idx);
  int mask = 0;
  for (int j = 0; j < items; ++j)
    if (out.item_winner[j] == player) mask |= 1 << j;
  return types[player][type_idx].valuation.of(mask) - out.payments[player];
}

Rational BayesianAuction::welfare(const std::vector<int>& action_idx,
                                  const std::vector<int>& type_idx) const {
  auto out = outcome(action_idx);
  Rational allocated = 0;
  Rational utilities_plus_payments = 0;
  for (size_t i = 0; i < types.size(); ++i) {
    int mask = 0;
    for (int j = 0; j < items; ++j)
      if (out.item_winner[j] == static_cast<int>(i)) mask |= 1 << j;
    const Rational& value = types[i][type_idx[i]].valuation.of(mask);
    allocated += value;
    utilities_plus_payments += (value - out.payments[i]) + out.payments[i];
  }
  if (allocated != utilities_plus_payments)
    throw Error("internal: welfare identity failed");
  return allocated;
}

Rational BayesianAuction::revenue(const std::vector<int>& action_idx) const {
  auto out = outcome(action_idx);
  Rational total = 0;
  for (const auto& p : out.payments) total += p;
  return total;
}

Rational BayesianAuction::opt_welfare(const std::vector<int>& type_idx) const {
  const int n = players();
  long long assignments = 1;
  for (int j = 0; j < items; ++j) {
    assignments *= n + 1;
    if (assignments > 50'000'000)
      throw CapExceeded("allocations", assignments, 50'000'000);
  }
  std::vector<int> owner(items, -1);
  Rational best = 0;
  std::function<void(int)> rec = [&](int j) {
    if (j == items) {
      std::vector<int> masks(n, 0);
      for (int jj = 0; jj < items; ++jj)
        if (owner[jj] >= 0) masks[owner[jj]] |= 1 << jj;
      Rational value = 0;
      for (int i = 0; i < n; ++i)
        value += types[i][type_idx[i]].valuation.of(masks[i]);
      if (value > best) best = value;
      return;
    }
    for (int o = -1; o < n; ++o) {
      owner[j] = o;
      rec(j + 1);
    }
  };
  rec(0);
  return best;
}

namespace {

std::vector<std::vector<int>> cartesian(const std::vector<int>& counts,
                                        long long cap,
                                        const std::string& dimension) {
  long long total = 1;
  for (int c : counts) {
    total *= c;
    if (total > cap) throw CapExceeded(dimension, total, cap);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> cur(counts.size(), 0);
  while (true) {
    out.push_back(cur);
    int i = static_cast<int>(cur.size()) - 1;
    while (i >= 0 && cur[i] + 1 == counts[i]) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  if (counts.empty()) out = {{}};
  return out;
}

std::vector<int> type_counts(const BayesianAuction& auc) {
  std::vector<int> counts;
  for (const auto& t : auc.types) counts.push_back(static_cast<int>(t.size()));
  return counts;
}

// All action profiles playable at type profile v: the cartesian product of
// the per-type admissible lists, entries are actual action indices.
std::vector<std::vector<int>> admissible_profiles(const BayesianAuction& auc,
                                                  const std::vector<int>& v,
                                                  long long cap) {
  std::vector<int> counts;
  long long total = 1;
  for (int i = 0; i < auc.players(); ++i) {
    counts.push_back(static_cast<int>(auc.admissible[i][v[i]].size()));
    total *= counts.back();
    if (total > cap) throw CapExceeded("action profiles", total, cap);
  }
  std::vector<std::vector<int>> out;
  std::vector<int> cur(counts.size(), 0);
  while (true) {
    std::vector<int> actual(counts.size());
    for (int i = 0; i < auc.players(); ++i)
      actual[i] = auc.admissible[i][v[i]][cur[i]];
    out.push_back(std::move(actual));
    int i = static_cast<int>(cur.size()) - 1;
    while (i >= 0 && cur[i] + 1 == counts[i]) cur[i--] = 0;
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

std::string joined(const std::vector<int>& xs) {
  std::ostringstream out;
  for (size_t i = 0; i < xs.size(); ++i) out << (i ? "." : "") << xs[i];
  return out.str();
}

// Iterates over the support of sigma_{-i} for a fixed type profile,
// yielding full action profiles where position i is left as `fixed_action`.
template <typename F>
void for_each_opponent_action(const BayesianAuction& auc,
                              const StrategyMap& sigma, int player,
                              const std::vector<int>& type_idx,
                              int fixed_action, F&& f) {
  const int n = auc.players();
  std::vector<int> action(n, 0);
  action[player] = fixed_action;
  std::function<void(int, Rational)> rec = [&](int i, Rational w) {
    if (i == n) {
      f(action, w);
      return;
    }
    if (i == player) {
      rec(i + 1, w);
      return;
    }
    for (const auto& [a, p] : sigma.play[i][type_idx[i]]) {
      if (p == 0) continue;
      action[i] = a;
      rec(i + 1, w * p);
    }
  };
  rec(0, Rational(1));
}

template <typename F>
void for_each_full_action(const BayesianAuction& auc, const StrategyMap& sigma,
                          const std::vector<int>& type_idx, F&& f) {
  const int n = auc.players();
  std::vector<int> action(n, 0);
  std::function<void(int, Rational)> rec = [&](int i, Rational w) {
    if (i == n) {
      f(action, w);
      return;
    }
    for (const auto& [a, p] : sigma.play[i][type_idx[i]]) {
      if (p == 0) continue;
      action[i] = a;
      rec(i + 1, w * p);
    }
  };
  rec(0, Rational(1));
}

}  // namespace

Rational BayesianAuction::prior_of(const std::vector<int>& type_idx) const {
  Rational p = 1;
  for (size_t i = 0; i < types.size(); ++i) p *= types[i][type_idx[i]].prior;
  return p;
}

Rational BayesianAuction::prior_others(int player,
                                       const std::vector<int>& type_idx) const {
  Rational p = 1;
  for (size_t i = 0; i < types.size(); ++i)
    if (static_cast<int>(i) != player) p *= types[i][type_idx[i]].prior;
  return p;
}

Rational BayesianAuction::expected_opt_welfare() const {
  Rational total = 0;
  for (const auto& v : cartesian(type_counts(*this),
                                 std::numeric_limits<long long>::max(),
                                 "types"))
    total += prior_of(v) * opt_welfare(v);
  return total;
}

BayesianAuction make_simultaneous_auction(
    int items, Mechanism mechanism, std::vector<Rational> bid_grid,
    std::vector<std::string> player_names,
    std::vector<std::vector<AuctionType>> types, const Rational& overbid,
    bool require_subadditive) {
  if (bid_grid.empty()) throw Error("bid grid must be non-empty");
  std::sort(bid_grid.begin(), bid_grid.end());
  bid_grid.erase(std::unique(bid_grid.begin(), bid_grid.end()),
                 bid_grid.end());
  if (bid_grid.front() != 0) throw Error("bid grid must contain 0");
  if (overbid < 1) throw Error("overbid multiplier must be >= 1");

  BayesianAuction auc;
  auc.items = items;
  auc.mechanism = mechanism;
  auc.overbid = overbid;
  auc.bid_grid = bid_grid;
  auc.player_names = std::move(player_names);
  auc.types = std::move(types);
  auc.actions.resize(auc.types.size());

  auc.admissible.resize(auc.types.size());
  for (size_t i = 0; i < auc.types.size(); ++i) {
    if (require_subadditive)
      for (const auto& t : auc.types[i])
        if (!t.valuation.is_subadditive())
          throw Error("valuation of player " + auc.player_names[i] +
                      " type " + t.label + " is not sub-additive");
    // No-overbidding is enforced at action-space construction, per type:
    // the player's action space is the union of its types' admissible grid
    // vectors, and admissible[i][v] records which a type may actually play.
    auto cap_ok = [&](const BidVector& bv, const Valuation& val) {
      for (int mask = 1; mask < (1 << items); ++mask) {
        Rational sum = 0;
        for (int j = 0; j < items; ++j)
          if (mask & (1 << j)) sum += bv.bids[j];
        if (sum > overbid * val.of(mask)) return false;
      }
      return true;
    };
    std::vector<int> counts(items, static_cast<int>(bid_grid.size()));
    for (const auto& combo : cartesian(counts, 1 << 20, "bid vectors")) {
      BidVector bv;
      for (int j = 0; j < items; ++j) bv.bids.push_back(bid_grid[combo[j]]);
      bool any = false;
      for (const auto& t : auc.types[i])
        if (cap_ok(bv, t.valuation)) any = true;
      if (any) auc.actions[i].push_back(std::move(bv));
    }
    auc.admissible[i].resize(auc.types[i].size());
    for (size_t v = 0; v < auc.types[i].size(); ++v) {
      for (size_t a = 0; a < auc.actions[i].size(); ++a)
        if (cap_ok(auc.actions[i][a], auc.types[i][v].valuation))
          auc.admissible[i][v].push_back(static_cast<int>(a));
      if (auc.admissible[i][v].empty())
        throw Error("player " + auc.player_names[i] + " type " +
                    auc.types[i][v].label + " has no admissible bid");
    }
  }
  auc.validate();
  return auc;
}

void StrategyMap::validate(const BayesianAuction& auc) const {
  if (play.size() != auc.types.size())
    throw Error("strategy map must cover every player");
  for (size_t i = 0; i < play.size(); ++i) {
    if (play[i].size() != auc.types[i].size())
      throw Error("strategy map must cover every type");
    for (size_t v = 0; v < play[i].size(); ++v) {
      const auto& adm = auc.admissible[i][v];
      Rational total = 0;
      for (const auto& [a, p] : play[i][v]) {
        if (std::find(adm.begin(), adm.end(), a) == adm.end())
          throw Error("strategy map plays an inadmissible action");
        if (p < 0) throw Error("strategy probabilities must be >= 0");
        total += p;
      }
      if (total != 1) throw Error("strategy distribution must sum to 1");
    }
  }
}

StrategyMap StrategyMap::pure(
    const BayesianAuction& auc,
    const std::vector<std::vector<int>>& action_of_type) {
  StrategyMap sigma;
  sigma.play.resize(auc.types.size());
  for (size_t i = 0; i < auc.types.size(); ++i) {
    sigma.play[i].resize(auc.types[i].size());
    for (size_t v = 0; v < auc.types[i].size(); ++v)
      sigma.play[i][v] = {{action_of_type[i][v], Rational(1)}};
  }
  sigma.validate(auc);
  return sigma;
}

Rational expected_welfare(const BayesianAuction& auc, const StrategyMap& sigma,
                          const Caps& caps) {
  auc.validate();
  sigma.validate(auc);
  Rational total = 0;
  for (const auto& v :
       cartesian(type_counts(auc), caps.max_configs, "type profiles")) {
    Rational prior = auc.prior_of(v);
    for_each_full_action(auc, sigma, v,
                         [&](const std::vector<int>& a, const Rational& w) {
                           total += prior * w * auc.welfare(a, v);
                         });
  }
  return total;
}

BneReport check_bne(const BayesianAuction& auc, const StrategyMap& sigma,
                    const Caps& caps) {
  auc.validate();
  sigma.validate(auc);
  BneReport report;
  report.worst_gain = 0;
  bool first = true;
  auto others =
      cartesian(type_counts(auc), caps.max_configs, "type profiles");
  for (int i = 0; i < auc.players(); ++i) {
    for (size_t vi = 0; vi < auc.types[i].size(); ++vi) {
      const auto& adm = auc.admissible[i][vi];
      // Interim utility under sigma and under each admissible deviation.
      Rational current = 0;
      std::vector<Rational> deviated(adm.size(), Rational(0));
      for (const auto& v : others) {
        if (v[i] != static_cast<int>(vi)) continue;
        Rational weight = auc.prior_others(i, v);
        for_each_full_action(
            auc, sigma, v, [&](const std::vector<int>& a, const Rational& w) {
              current += weight * w * auc.utility(i, a, static_cast<int>(vi));
            });
        for (size_t dev = 0; dev < adm.size(); ++dev)
          for_each_opponent_action(
              auc, sigma, i, v, adm[dev],
              [&](const std::vector<int>& a, const Rational& w) {
                deviated[dev] +=
                    weight * w * auc.utility(i, a, static_cast<int>(vi));
              });
      }
      for (size_t dev = 0; dev < adm.size(); ++dev) {
        Rational gain = deviated[dev] - current;
        if (first || gain > report.worst_gain) {
          report.worst_gain = gain;
          std::ostringstream w;
          w << "player " << i << " type " << auc.types[i][vi].label
            << " deviates to action " << adm[dev];
          report.worst_witness = w.str();
          first = false;
        }
      }
    }
  }
  report.is_bne = report.worst_gain <= 0;
  return report;
}

std::optional<StrategyMap> find_pure_bne(const BayesianAuction& auc,
                                         const Caps& caps) {
  auc.validate();
  // Slots: one action per (player, type).
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < auc.players(); ++i)
    for (size_t v = 0; v < auc.types[i].size(); ++v)
      slots.emplace_back(i, static_cast<int>(v));

  long long total_maps = 1;
  bool exhaustive = true;
  for (const auto& [i, v] : slots) {
    total_maps *= static_cast<long long>(auc.admissible[i][v].size());
    if (total_maps > caps.max_configs) {
      exhaustive = false;
      break;
    }
  }

  // choice[s] indexes into the slot's admissible list.
  auto build = [&](const std::vector<int>& choice) {
    std::vector<std::vector<int>> action_of_type(auc.players());
    for (int i = 0; i < auc.players(); ++i)
      action_of_type[i].resize(auc.types[i].size());
    for (size_t s = 0; s < slots.size(); ++s)
      action_of_type[slots[s].first][slots[s].second] =
          auc.admissible[slots[s].first][slots[s].second][choice[s]];
    return StrategyMap::pure(auc, action_of_type);
  };

  if (exhaustive) {
    std::vector<int> choice(slots.size(), 0);
    while (true) {
      auto sigma = build(choice);
      if (check_bne(auc, sigma, caps).is_bne) return sigma;
      int s = static_cast<int>(choice.size()) - 1;
      while (s >= 0 &&
             choice[s] + 1 ==
                 static_cast<int>(
                     auc.admissible[slots[s].first][slots[s].second].size()))
        choice[s--] = 0;
      if (s < 0) break;
      ++choice[s];
    }
    return std::nullopt;
  }

  // Best-response iteration with cycle detection.
  std::vector<int> choice(slots.size(), 0);
  std::set<std::vector<int>> seen;
  auto others = cartesian(type_counts(auc), caps.max_configs, "type profiles");
  for (int round = 0; round < 1000; ++round) {
    if (!seen.insert(choice).second) return std::nullopt;  // cycle
    bool changed = false;
    for (size_t s = 0; s < slots.size(); ++s) {
      auto [i, vi] = slots[s];
      const auto& adm = auc.admissible[i][vi];
      auto sigma = build(choice);
      Rational best;
      int best_action = -1;
      for (size_t a = 0; a < adm.size(); ++a) {
        Rational value = 0;
        for (const auto& v : others) {
          if (v[i] != vi) continue;
          Rational weight = auc.prior_others(i, v);
          for_each_opponent_action(
              auc, sigma, i, v, adm[a],
              [&](const std::vector<int>& full, const Rational& w) {
                value += weight * w * auc.utility(i, full, vi);
              });
        }
        if (best_action < 0 || value > best) {
          best = value;
          best_action = static_cast<int>(a);
        }
      }
      if (choice[s] != best_action) {
        choice[s] = best_action;
        changed = true;
      }
    }
    if (!changed) {
      auto sigma = build(choice);
      if (check_bne(auc, sigma, caps).is_bne) return sigma;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::string BayesianProgram::x_name(int player, int type_idx,
                                    int action_idx) const {
  return "x(" + std::to_string(player) + "," + std::to_string(type_idx) + "," +
         std::to_string(action_idx) + ")";
}
std::string BayesianProgram::z_name(const std::vector<int>& type_idx,
                                    const std::vector<int>& action_idx) const {
  return "z(" + joined(type_idx) + "|" + joined(action_idx) + ")";
}

BayesianProgram bayesian_config_lp(const BayesianAuction& auc,
                                   const Caps& caps) {
  auc.validate();
  auto type_profiles =
      cartesian(type_counts(auc), caps.max_configs, "type profiles");
  long long z_count = 0;

  BayesianProgram out;
  out.built.provenance = "bayesian";
  lp::LinearProgram prog("bayesian-config-lp", lp::Sense::Maximize);

  for (int i = 0; i < auc.players(); ++i)
    for (size_t v = 0; v < auc.types[i].size(); ++v)
      for (int a : auc.admissible[i][v]) {
        std::string name = out.x_name(i, static_cast<int>(v), a);
        prog.add_variable(name);
        out.built.index[name] = "player " + auc.player_names[i] + " of type " +
                                auc.types[i][v].label + " plays action " +
                                std::to_string(a);
      }
  lp::Row objective;
  std::map<std::vector<int>, std::vector<std::vector<int>>> profiles_at;
  for (const auto& v : type_profiles) {
    profiles_at[v] = admissible_profiles(auc, v, caps.max_configs);
    z_count += static_cast<long long>(profiles_at[v].size());
    if (z_count > caps.max_configs)
      throw CapExceeded("configurations", z_count, caps.max_configs);
    for (const auto& a : profiles_at[v]) {
      std::string name = out.z_name(v, a);
      prog.add_variable(name);
      out.built.index[name] =
          "types (" + joined(v) + ") realize action profile (" + joined(a) +
          ")";
      Rational c = auc.welfare(a, v);
      if (c != 0) objective.emplace_back(name, c);
    }
  }

  for (int i = 0; i < auc.players(); ++i)
    for (size_t v = 0; v < auc.types[i].size(); ++v) {
      lp::Row row;
      for (int a : auc.admissible[i][v])
        row.emplace_back(out.x_name(i, static_cast<int>(v), a), Rational(1));
      prog.add_constraint(
          "mass(" + std::to_string(i) + "," + std::to_string(v) + ")",
          std::move(row), lp::Relation::LessEqual, auc.types[i][v].prior);
    }
  for (const auto& v : type_profiles) {
    lp::Row row;
    for (const auto& a : profiles_at[v])
      row.emplace_back(out.z_name(v, a), Rational(1));
    prog.add_constraint("joint(" + joined(v) + ")", std::move(row),
                        lp::Relation::LessEqual, auc.prior_of(v));
  }
  for (int i = 0; i < auc.players(); ++i)
    for (const auto& v : type_profiles)
      for (int ai : auc.admissible[i][v[i]]) {
        lp::Row row;
        for (const auto& a : profiles_at[v])
          if (a[i] == ai) row.emplace_back(out.z_name(v, a), Rational(1));
        row.emplace_back(out.x_name(i, v[i], ai), -auc.prior_others(i, v));
        prog.add_constraint("couple(" + std::to_string(i) + "," +
                                std::to_string(ai) + "," + joined(v) + ")",
                            std::move(row), lp::Relation::LessEqual,
                            Rational(0));
      }

  prog.set_objective(std::move(objective));
  prog.validate();
  out.built.program = std::move(prog);
  return out;
}

smoothness::SmoothnessCertificate check_auction_smooth(
    const BayesianAuction& auc, const Rational& lambda, const Rational& mu,
    smoothness::Kind variant,
    const std::optional<smoothness::DeviationDistributions>& dstar,
    const Caps& caps) {
  auc.validate();
  if (variant != smoothness::Kind::AuctionR15 &&
      variant != smoothness::Kind::AuctionST13)
    throw Error("auction smoothness variant must be R15 or ST13");
  if (lambda < 0 || mu < 0) throw Error("lambda, mu must be >= 0");

  auto type_profiles =
      cartesian(type_counts(auc), caps.max_configs, "type profiles");

  // Candidate deviation families when none supplied: the lexicographically
  // first welfare-optimal admissible profile, then the truthful vector when
  // the type may play it.
  auto optimal_candidate = [&](const std::vector<int>& v) {
    std::vector<std::vector<std::pair<int, Rational>>> dist(auc.players());
    auto profiles = admissible_profiles(auc, v, caps.max_configs);
    const std::vector<int>* best = nullptr;
    Rational best_welfare;
    for (const auto& a : profiles) {
      Rational w = auc.welfare(a, v);
      if (!best || w > best_welfare) {
        best = &a;
        best_welfare = w;
      }
    }
    for (int i = 0; i < auc.players(); ++i)
      dist[i] = {{(*best)[i], Rational(1)}};
    return dist;
  };
  auto truthful_candidate = [&](const std::vector<int>& v)
      -> std::optional<std::vector<std::vector<std::pair<int, Rational>>>> {
    std::vector<std::vector<std::pair<int, Rational>>> dist(auc.players());
    for (int i = 0; i < auc.players(); ++i) {
      BidVector want;
      for (int j = 0; j < auc.items; ++j)
        want.bids.push_back(auc.types[i][v[i]].valuation.of(1 << j));
      auto it = std::find(auc.actions[i].begin(), auc.actions[i].end(), want);
      if (it == auc.actions[i].end()) return std::nullopt;
      int idx = static_cast<int>(it - auc.actions[i].begin());
      const auto& adm = auc.admissible[i][v[i]];
      if (std::find(adm.begin(), adm.end(), idx) == adm.end())
        return std::nullopt;
      dist[i] = {{idx, Rational(1)}};
    }
    return dist;
  };

  auto verify_family =
      [&](const smoothness::DeviationDistributions& family)
      -> std::optional<std::string> {
    for (const auto& v : type_profiles) {
      auto it = family.find(joined(v));
      if (it == family.end())
        return "missing deviation distribution for types (" + joined(v) + ")";
      const auto& dists = it->second;
      // E over a* of SW(a*; v), product distribution.
      Rational sw_star = 0;
      {
        std::vector<int> a(auc.players(), 0);
        std::function<void(int, Rational)> rec = [&](int i, Rational w) {
          if (i == auc.players()) {
            sw_star += w * auc.welfare(a, v);
            return;
          }
          for (const auto& [ai, p] : dists[i]) {
            a[i] = ai;
            rec(i + 1, w * p);
          }
        };
        rec(0, Rational(1));
      }
      for (const auto& a : admissible_profiles(auc, v, caps.max_configs)) {
        Rational lhs = 0;
        for (int i = 0; i < auc.players(); ++i)
          for (const auto& [ai, p] : dists[i]) {
            std::vector<int> dev = a;
            dev[i] = ai;
            lhs += p * auc.utility(i, dev, v[i]);
          }
        Rational rhs = lambda * sw_star -
                       mu * (variant == smoothness::Kind::AuctionR15
                                 ? auc.welfare(a, v)
                                 : auc.revenue(a));
        if (lhs < rhs)
          return "types (" + joined(v) + "), actions (" + joined(a) + "): " +
                 poadual::to_string(lhs) + " < " + poadual::to_string(rhs);
      }
    }
    return std::nullopt;
  };

  smoothness::SmoothnessCertificate cert;
  cert.kind = variant;
  cert.lambda = lambda;
  cert.mu = mu;
  cert.verified_domain =
      "all valuation profiles x all admissible action profiles";

  if (dstar) {
    auto witness = verify_family(*dstar);
    cert.verified = !witness.has_value();
    cert.witness = witness;
    if (cert.verified) cert.deviations = *dstar;
    return cert;
  }

  // Search the small candidate family.
  std::vector<smoothness::DeviationDistributions> candidates;
  {
    smoothness::DeviationDistributions optimal;
    for (const auto& v : type_profiles) optimal[joined(v)] = optimal_candidate(v);
    candidates.push_back(std::move(optimal));
    smoothness::DeviationDistributions truthful;
    bool complete = true;
    for (const auto& v : type_profiles) {
      auto d = truthful_candidate(v);
      if (!d) {
        complete = false;
        break;
      }
      truthful[joined(v)] = *d;
    }
    if (complete) candidates.push_back(std::move(truthful));
  }
  std::string last_witness;
  for (const auto& family : candidates) {
    auto witness = verify_family(family);
    if (!witness) {
      cert.verified = true;
      cert.deviations = family;
      return cert;
    }
    last_witness = *witness;
  }
  cert.verified = false;
  cert.witness = last_witness +
                 " (searched point-mass candidates: welfare-optimal, truthful)";
  return cert;
}

certificates::DualCertificate smooth_auction_duals(
    const BayesianAuction& auc, const StrategyMap& sigma,
    const Rational& lambda, const Rational& mu, smoothness::Kind variant,
    const smoothness::SmoothnessCertificate& smooth_cert, const Caps& caps) {
  auc.validate();
  sigma.validate(auc);
  if (lambda <= 0) throw Error("lambda must be positive");
  bool st13 = variant == smoothness::Kind::AuctionST13;
  if (variant != smoothness::Kind::AuctionR15 && !st13)
    throw Error("variant must be R15 or ST13");
  if (mu < 0) throw Error("mu must be >= 0");
  if (st13 && mu < 1) throw Error("ST13 variant requires mu >= 1");
  if (smooth_cert.kind != variant || !smooth_cert.verified ||
      smooth_cert.lambda != lambda || smooth_cert.mu != mu)
    throw Error("smoothness certificate absent or mismatched");

  auto bne = check_bne(auc, sigma, caps);
  if (!bne.is_bne)
    throw Error("sigma is not a Bayes-Nash equilibrium (gain " +
                poadual::to_string(bne.worst_gain) + " for " +
                bne.worst_witness + ")");

  auto program = bayesian_config_lp(auc, caps);
  auto type_profiles =
      cartesian(type_counts(auc), caps.max_configs, "type profiles");

  certificates::DualCertificate cert;
  cert.recipe = std::string(st13 ? "auction-ST13" : "auction-R15") +
                "(lambda=" + poadual::to_string(lambda) +
                ",mu=" + poadual::to_string(mu) + ")";
  cert.lambda = lambda;
  cert.mu = mu;

  // alpha_i(v_i): interim expected equilibrium utility / lambda.
  for (int i = 0; i < auc.players(); ++i)
    for (size_t vi = 0; vi < auc.types[i].size(); ++vi) {
      Rational value = 0;
      for (const auto& v : type_profiles) {
        if (v[i] != static_cast<int>(vi)) continue;
        Rational weight = auc.prior_others(i, v);
        for_each_full_action(
            auc, sigma, v, [&](const std::vector<int>& a, const Rational& w) {
              value += weight * w * auc.utility(i, a, static_cast<int>(vi));
            });
      }
      cert.assignment["mass(" + std::to_string(i) + "," + std::to_string(vi) +
                      ")"] = value / lambda;
    }

  // beta(v): (mu/lambda) * E[SW] (R15) or (mu/lambda) * E[R] (ST13).
  Rational eq_welfare = 0;
  for (const auto& v : type_profiles) {
    Rational sw = 0, rev = 0;
    for_each_full_action(auc, sigma, v,
                         [&](const std::vector<int>& a, const Rational& w) {
                           sw += w * auc.welfare(a, v);
                           rev += w * auc.revenue(a);
                         });
    eq_welfare += auc.prior_of(v) * sw;
    cert.assignment["joint(" + joined(v) + ")"] =
        (mu / lambda) * (st13 ? rev : sw);
  }

  // gamma_{i,a_i}(v): deviation utility against sigma_{-i} / lambda, one per
  // admissible (i, a_i, v) triple (the rows the program has).
  for (int i = 0; i < auc.players(); ++i)
    for (const auto& v : type_profiles)
      for (int ai : auc.admissible[i][v[i]]) {
        Rational value = 0;
        for_each_opponent_action(
            auc, sigma, i, v, ai,
            [&](const std::vector<int>& a, const Rational& w) {
              value += w * auc.utility(i, a, v[i]);
            });
        cert.assignment["couple(" + std::to_string(i) + "," +
                        std::to_string(ai) + "," + joined(v) + ")"] =
            value / lambda;
      }

  lp::LinearProgram dual = lp::dual_of(program.built.program);
  cert.target_provenance = program.built.provenance;
  cert.residuals = lp::feasibility_residuals(dual, cert.assignment);
  cert.dual_objective = dual.objective_value(cert.assignment);
  Rational fraction = st13 ? lambda / mu : lambda / (Rational(1) + mu);
  if (cert.residuals.feasible) cert.certified_ratio = fraction;

  // The bounding step of the theorem, exact: dual objective is at most
  // ((1+mu)/lambda) * welfare (R15) resp. (mu/lambda) * welfare (ST13).
  Rational cap_value = st13 ? (mu / lambda) * eq_welfare
                            : ((Rational(1) + mu) / lambda) * eq_welfare;
  if (cert.dual_objective > cap_value)
    throw Error("internal: dual objective exceeds the welfare bound");
  cert.diagnostics["equilibrium-welfare"] = eq_welfare;
  cert.diagnostics["welfare-fraction"] = fraction;
  return cert;
}

std::string InterimProgram::x_name(int player, int item, int type_idx) const {
  return "x(" + std::to_string(player) + "," + std::to_string(item) + "," +
         std::to_string(type_idx) + ")";
}
std::string InterimProgram::z_name(int player, int subset_mask,
                                   int type_idx) const {
  return "z(" + std::to_string(player) + "," + std::to_string(subset_mask) +
         "," + std::to_string(type_idx) + ")";
}

InterimProgram feldman_fu_lp(const BayesianAuction& auc, const Caps& caps) {
  auc.validate();
  InterimProgram out;
  out.built.provenance = "interim-item";
  lp::LinearProgram prog("interim-item-lp", lp::Sense::Maximize);

  long long var_count =
      static_cast<long long>(auc.players()) *
      (auc.items + (1LL << auc.items)) * 8;
  if (var_count > caps.max_configs)
    throw CapExceeded("interim variables", var_count, caps.max_configs);

  for (int i = 0; i < auc.players(); ++i)
    for (size_t v = 0; v < auc.types[i].size(); ++v) {
      for (int j = 0; j < auc.items; ++j) {
        std::string name = out.x_name(i, j, static_cast<int>(v));
        prog.add_variable(name);
        out.built.index[name] = "interim probability that player " +
                                auc.player_names[i] + " of type " +
                                auc.types[i][v].label + " wins item " +
                                std::to_string(j);
      }
      for (int mask = 0; mask < (1 << auc.items); ++mask) {
        std::string name = out.z_name(i, mask, static_cast<int>(v));
        prog.add_variable(name);
        out.built.index[name] = "interim probability that player " +
                                auc.player_names[i] + " of type " +
                                auc.types[i][v].label + " wins item set " +
                                std::to_string(mask);
      }
    }

  lp::Row objective;
  for (int j = 0; j < auc.items; ++j) {
    lp::Row row;
    for (int i = 0; i < auc.players(); ++i)
      for (size_t v = 0; v < auc.types[i].size(); ++v)
        row.emplace_back(out.x_name(i, j, static_cast<int>(v)),
                         auc.types[i][v].prior);
    prog.add_constraint("item(" + std::to_string(j) + ")", std::move(row),
                        lp::Relation::LessEqual, Rational(1));
  }
  for (int i = 0; i < auc.players(); ++i)
    for (size_t v = 0; v < auc.types[i].size(); ++v) {
      lp::Row row;
      for (int mask = 0; mask < (1 << auc.items); ++mask) {
        row.emplace_back(out.z_name(i, mask, static_cast<int>(v)),
                         Rational(1));
        Rational value =
            auc.types[i][v].prior * auc.types[i][v].valuation.of(mask);
        if (value != 0)
          objective.emplace_back(out.z_name(i, mask, static_cast<int>(v)),
                                 value);
      }
      prog.add_constraint(
          "dist(" + std::to_string(i) + "," + std::to_string(v) + ")",
          std::move(row), lp::Relation::Equal, Rational(1));
      for (int j = 0; j < auc.items; ++j) {
        lp::Row couple;
        for (int mask = 0; mask < (1 << auc.items); ++mask)
          if (mask & (1 << j))
            couple.emplace_back(out.z_name(i, mask, static_cast<int>(v)),
                                Rational(1));
        couple.emplace_back(out.x_name(i, j, static_cast<int>(v)),
                            Rational(-1));
        prog.add_constraint("couple(" + std::to_string(i) + "," +
                                std::to_string(j) + "," + std::to_string(v) +
                                ")",
                            std::move(couple), lp::Relation::Equal,
                            Rational(0));
      }
    }

  prog.set_objective(std::move(objective));
  prog.validate();
  out.built.program = std::move(prog);
  return out;
}

certificates::DualCertificate feldman_fu_duals(const BayesianAuction& auc,
                                               const StrategyMap& sigma,
                                               const Caps& caps) {
  auc.validate();
  sigma.validate(auc);
  for (int i = 0; i < auc.players(); ++i)
    for (const auto& t : auc.types[i])
      if (!t.valuation.is_subadditive())
        throw Error("player " + auc.player_names[i] + " type " + t.label +
                    " valuation is not sub-additive");
  auto bne = check_bne(auc, sigma, caps);
  if (!bne.is_bne)
    throw Error("sigma is not a Bayes-Nash equilibrium (gain " +
                poadual::to_string(bne.worst_gain) + ")");

  auto program = feldman_fu_lp(auc, caps);
  auto type_profiles =
      cartesian(type_counts(auc), caps.max_configs, "type profiles");

  certificates::DualCertificate cert;
  cert.recipe = "feldman-fu";
  cert.target_provenance = program.built.provenance;

  // Per player: the distribution of opponents' bid profiles.
  // T[i][j] = E_{b_-i ~ B_-i}[ max_{k != i} b_kj ].
  std::vector<std::vector<Rational>> T(auc.players(),
                                       std::vector<Rational>(auc.items,
                                                             Rational(0)));
  // Also cache opponent draws for the witness search: per player, a list of
  // (full action profile with slot i free, weight).
  std::vector<std::vector<std::pair<std::vector<int>, Rational>>> opp_draws(
      auc.players());
  for (int i = 0; i < auc.players(); ++i) {
    for (const auto& v : type_profiles) {
      // The opponent distribution does not depend on i's type; fixing
      // v[i] = 0 iterates opponents' combinations exactly once.
      if (v[i] != 0) continue;
      Rational weight = auc.prior_others(i, v);
      for_each_opponent_action(
          auc, sigma, i, v, 0,
          [&](const std::vector<int>& a, const Rational& w) {
            opp_draws[i].emplace_back(a, weight * w);
          });
    }
    for (const auto& [a, w] : opp_draws[i])
      for (int j = 0; j < auc.items; ++j) {
        Rational top = 0;
        for (int k = 0; k < auc.players(); ++k) {
          if (k == i) continue;
          top = std::max(top, auc.actions[k][a[k]].bids[j]);
        }
        T[i][j] += w * top;
      }
  }

  // beta_j = 2 max_i T[i][j].
  for (int j = 0; j < auc.items; ++j) {
    Rational best = T[0][j];
    for (int i = 1; i < auc.players(); ++i) best = std::max(best, T[i][j]);
    cert.assignment["item(" + std::to_string(j) + ")"] = 2 * best;
  }

  // alpha_i(v_i) = 2 f_i(v_i) E_{b ~ B(v_i)}[u_i(b, v_i)];
  // gamma_{i,j}(v_i) = 2 f_i(v_i) T[i][j].
  for (int i = 0; i < auc.players(); ++i)
    for (size_t vi = 0; vi < auc.types[i].size(); ++vi) {
      Rational util = 0;
      for (const auto& v : type_profiles) {
        if (v[i] != static_cast<int>(vi)) continue;
        Rational weight = auc.prior_others(i, v);
        for_each_full_action(
            auc, sigma, v, [&](const std::vector<int>& a, const Rational& w) {
              util += weight * w * auc.utility(i, a, static_cast<int>(vi));
            });
      }
      const Rational& fi = auc.types[i][vi].prior;
      cert.assignment["dist(" + std::to_string(i) + "," + std::to_string(vi) +
                      ")"] = 2 * fi * util;
      for (int j = 0; j < auc.items; ++j)
        cert.assignment["couple(" + std::to_string(i) + "," +
                        std::to_string(j) + "," + std::to_string(vi) + ")"] =
            2 * fi * T[i][j];

      // Witness-action search for the deviation inequality, per subset S:
      // exists b* on the grid with E[u_i(b*, b_-i)] + sum_{j in S} T_ij
      // >= v_iS / 2. The grid search is the discrete analogue of the
      // randomized-pricing existence argument.
      for (int mask = 0; mask < (1 << auc.items); ++mask) {
        Rational need =
            auc.types[i][vi].valuation.of(mask) / 2;
        Rational addon = 0;
        for (int j = 0; j < auc.items; ++j)
          if (mask & (1 << j)) addon += T[i][j];
        bool found = false;
        for (int b : auc.admissible[i][vi]) {
          Rational util_dev = 0;
          for (const auto& [a, w] : opp_draws[i]) {
            std::vector<int> full = a;
            full[i] = b;
            util_dev += w * auc.utility(i, full, static_cast<int>(vi));
          }
          if (util_dev + addon >= need) {
            found = true;
            break;
          }
        }
        if (!found)
          throw Error("witness-action search failed for player " +
                      std::to_string(i) + ", type " +
                      auc.types[i][vi].label + ", item set " +
                      std::to_string(mask));
      }
    }

  lp::LinearProgram dual = lp::dual_of(program.built.program);
  cert.residuals = lp::feasibility_residuals(dual, cert.assignment);
  cert.dual_objective = dual.objective_value(cert.assignment);
  Rational fraction = auc.mechanism == Mechanism::FirstPrice
                          ? Rational(1, 2)
                          : Rational(1, 4);
  if (cert.residuals.feasible) cert.certified_ratio = fraction;
  cert.diagnostics["welfare-fraction"] = fraction;
  cert.diagnostics["equilibrium-welfare"] = expected_welfare(auc, sigma, caps);
  cert.diagnostics["optimal-welfare"] = auc.expected_opt_welfare();
  return cert;
}

namespace {

// Tie-aware counterfactual reward: item j is won on a tie only when the
// player precedes the lowest opposing index at the threshold, exactly as the
// auction would allocate. For the action actually played this equals the
// realized utility.
Rational counterfactual_reward(const Valuation& val, const BidVector& bid,
                               const std::vector<Rational>& theta,
                               const std::vector<bool>& wins_tie) {
  int mask = 0;
  Rational pay = 0;
  for (size_t j = 0; j < theta.size(); ++j) {
    if (bid.bids[j] > theta[j] ||
        (bid.bids[j] == theta[j] && wins_tie[j])) {
      mask |= 1 << j;
      pay += theta[j];
    }
  }
  return val.of(mask) - pay;
}

struct LearnerState {
  Learner kind;
  std::vector<Rational> weights;  // MW
  std::vector<Rational> regret;   // RM
  Rational reward_lo, reward_hi;  // exact bounds for MW normalization
  std::mt19937_64 rng;

  std::vector<Rational> mixed() const {
    size_t n = weights.size();
    std::vector<Rational> p(n, Rational(0));
    if (kind == Learner::FirstAction) {
      p[0] = 1;
      return p;
    }
    if (kind == Learner::MultiplicativeWeights) {
      Rational total = 0;
      for (const auto& w : weights) total += w;
      for (size_t a = 0; a < n; ++a) p[a] = weights[a] / total;
      return p;
    }
    Rational total = 0;
    for (const auto& r : regret)
      if (r > 0) total += r;
    if (total == 0) {
      for (size_t a = 0; a < n; ++a) p[a] = Rational(1, n);
    } else {
      for (size_t a = 0; a < n; ++a)
        if (regret[a] > 0) p[a] = regret[a] / total;
    }
    return p;
  }

  int sample(const std::vector<Rational>& p) {
    // Exact inverse-CDF draw: u = r / 2^64 compared against cumulative mass.
    Integer num(rng());
    Rational u(num, Integer(1) << 64);
    Rational cum = 0;
    for (size_t a = 0; a < p.size(); ++a) {
      cum += p[a];
      if (u < cum) return static_cast<int>(a);
    }
    return static_cast<int>(p.size()) - 1;
  }
};

}  // namespace

LearningTrace no_envy_trace(const BayesianAuction& auc, Learner learner,
                            int horizon, long long seed, const Caps& caps) {
  auc.validate();
  if (auc.mechanism != Mechanism::SecondPrice)
    throw Error("no-envy traces are defined for second-price auctions");
  if (horizon < 1) throw Error("horizon must be >= 1");
  for (const auto& t : auc.types)
    if (t.size() != 1)
      throw Error("no-envy traces need one deterministic type per player");
  const int n = auc.players();
  const int m = auc.items;
  if (static_cast<long long>(horizon) * n > caps.max_configs)
    throw CapExceeded("trace steps", static_cast<long long>(horizon) * n,
                      caps.max_configs);

  std::vector<LearnerState> state(n);
  for (int i = 0; i < n; ++i) {
    state[i].kind = learner;
    size_t na = auc.actions[i].size();
    state[i].weights.assign(na, Rational(1));
    state[i].regret.assign(na, Rational(0));
    std::seed_seq seq{static_cast<unsigned>(seed & 0xffffffff),
                      static_cast<unsigned>((seed >> 32) & 0xffffffff),
                      static_cast<unsigned>(i + 1)};
    state[i].rng = std::mt19937_64(seq);
    // Exact reward range over actions x threshold grids x tie outcomes,
    // for normalization.
    bool first = true;
    std::vector<int> counts(m, static_cast<int>(auc.bid_grid.size()));
    for (const auto& combo : cartesian(counts,
                                       std::numeric_limits<long long>::max(),
                                       "thresholds")) {
      std::vector<Rational> theta;
      for (int j = 0; j < m; ++j) theta.push_back(auc.bid_grid[combo[j]]);
      for (int ties = 0; ties < (1 << m); ++ties) {
        std::vector<bool> wins_tie(m);
        for (int j = 0; j < m; ++j) wins_tie[j] = (ties >> j) & 1;
        for (const auto& action : auc.actions[i]) {
          Rational r = counterfactual_reward(auc.types[i][0].valuation,
                                             action, theta, wins_tie);
          if (first || r < state[i].reward_lo) state[i].reward_lo = r;
          if (first || r > state[i].reward_hi) state[i].reward_hi = r;
          first = false;
        }
      }
    }
  }

  LearningTrace trace;
  trace.horizon = horizon;
  trace.seed = seed;
  trace.learner = learner;
  trace.avg_threshold.assign(n, std::vector<Rational>(m, Rational(0)));
  trace.avg_utility.assign(n, Rational(0));
  trace.avg_welfare = 0;
  std::vector<int> type_idx(n, 0);

  for (int t = 0; t < horizon; ++t) {
    std::vector<int> action(n);
    for (int i = 0; i < n; ++i) action[i] = state[i].sample(state[i].mixed());

    // Thresholds recomputed from bids, with the lowest opposing index that
    // attains each threshold (decides counterfactual ties).
    std::vector<std::vector<Rational>> theta(n, std::vector<Rational>(m));
    std::vector<std::vector<bool>> wins_tie(n, std::vector<bool>(m));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        Rational top = 0;
        int setter = -1;
        for (int k = 0; k < n; ++k) {
          if (k == i) continue;
          const Rational& b = auc.actions[k][action[k]].bids[j];
          if (setter < 0 || b > top) {
            top = b;
            setter = k;
          }
        }
        theta[i][j] = top;
        wins_tie[i][j] = setter < 0 || i < setter;
      }

    // Realized utilities follow the actual tie-broken allocation; the
    // threshold model is used for the learners' counterfactuals.
    std::vector<Rational> util(n);
    auto out = auc.outcome(action);
    for (int i = 0; i < n; ++i) {
      int mask = 0;
      for (int j = 0; j < m; ++j)
        if (out.item_winner[j] == i) mask |= 1 << j;
      util[i] = auc.types[i][0].valuation.of(mask) - out.payments[i];
    }
    Rational welfare = auc.welfare(action, type_idx);

    // Learner updates against the realized thresholds, tie-aware: the
    // counterfactual of the played action is exactly the realized utility.
    const Rational eta(1, 2);
    for (int i = 0; i < n; ++i) {
      if (learner == Learner::FirstAction) continue;
      Rational span = state[i].reward_hi - state[i].reward_lo;
      for (size_t a = 0; a < auc.actions[i].size(); ++a) {
        Rational r = counterfactual_reward(auc.types[i][0].valuation,
                                           auc.actions[i][a], theta[i],
                                           wins_tie[i]);
        if (learner == Learner::MultiplicativeWeights) {
          Rational norm =
              span > 0 ? Rational((r - state[i].reward_lo) / span)
                       : Rational(0);
          state[i].weights[a] *= Rational(1) + eta * norm;
        } else {
          state[i].regret[a] += r - util[i];
        }
      }
    }

    trace.actions.push_back(action);
    trace.thresholds.push_back(theta);
    trace.utilities.push_back(util);
    trace.step_welfare.push_back(welfare);
    for (int i = 0; i < n; ++i) {
      trace.avg_utility[i] += util[i];
      for (int j = 0; j < m; ++j) trace.avg_threshold[i][j] += theta[i][j];
    }
    trace.avg_welfare += welfare;
  }
  Rational inv(1, horizon);
  for (int i = 0; i < n; ++i) {
    trace.avg_utility[i] *= inv;
    for (int j = 0; j < m; ++j) trace.avg_threshold[i][j] *= inv;
  }
  trace.avg_welfare *= inv;
  return trace;
}

std::vector<Rational> envy_rate(const BayesianAuction& auc,
                                const LearningTrace& trace,
                                const Rational& r) {
  if (r < 1) throw Error("approximation factor r must be >= 1");
  if (auc.items > 6) throw CapExceeded("items", auc.items, 6);
  for (const auto& t : auc.types)
    if (t.size() != 1)
      throw Error("envy rates need one deterministic type per player");
  const int n = auc.players();
  std::vector<Rational> eps(n, Rational(0));
  for (int i = 0; i < n; ++i) {
    Rational best = 0;  // empty set benchmark
    for (int mask = 1; mask < (1 << auc.items); ++mask) {
      Rational value = auc.types[i][0].valuation.of(mask) / r;
      for (int j = 0; j < auc.items; ++j)
        if (mask & (1 << j)) value -= trace.avg_threshold[i][j];
      if (value > best) best = value;
    }
    Rational gap = best - trace.avg_utility[i];
    eps[i] = gap > 0 ? gap : Rational(0);
  }
  return eps;
}

NoEnvyTheoremCheck no_envy_theorem_check(const BayesianAuction& auc,
                                         const LearningTrace& trace,
                                         const Rational& r) {
  NoEnvyTheoremCheck check;
  check.avg_welfare = trace.avg_welfare;
  std::vector<int> type_idx(auc.players(), 0);
  check.opt = auc.opt_welfare(type_idx);
  check.eps = envy_rate(auc, trace, r);
  Rational total_eps = 0;
  for (const auto& e : check.eps) total_eps += e;
  check.bound = check.opt / (2 * r) - total_eps;
  check.holds = check.avg_welfare >= check.bound;
  return check;
}

std::string trace_records(const BayesianAuction& auc,
                          const LearningTrace& trace) {
  std::ostringstream out;
  for (int t = 0; t < trace.horizon; ++t) {
    out << "t=" << t;
    for (int i = 0; i < auc.players(); ++i) {
      out << " p" << i << ".bids=(";
      const auto& bids = auc.actions[i][trace.actions[t][i]].bids;
      for (size_t j = 0; j < bids.size(); ++j)
        out << (j ? "," : "") << poadual::to_string(bids[j]);
      out << ") p" << i << ".theta=(";
      for (size_t j = 0; j < trace.thresholds[t][i].size(); ++j)
        out << (j ? "," : "")
            << poadual::to_string(trace.thresholds[t][i][j]);
      out << ") p" << i
          << ".u=" << poadual::to_string(trace.utilities[t][i]);
    }
    out << " welfare=" << poadual::to_string(trace.step_welfare[t]) << "\n";
  }
  return out.str();
}

}  // namespace poadual::auctions
