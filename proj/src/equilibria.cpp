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

#include "poadual/equilibria.hpp"

#include <algorithm>
#include <sstream>

#include "poadual/lp.hpp"

namespace poadual::equilibria {

using congestion::AtomicGame;
using congestion::FlowProfile;
using congestion::NonAtomicGame;
using congestion::Profile;
using congestion::SplitProfile;
using congestion::SplittableGame;

void JointDistribution::validate() const {
  Rational sum = 0;
  for (size_t a = 0; a < support.size(); ++a) {
    if (support[a].second < 0)
      throw Error("distribution probabilities must be >= 0");
    sum += support[a].second;
    for (size_t b = a + 1; b < support.size(); ++b)
      if (support[a].first == support[b].first)
        throw Error("distribution support profiles must be distinct");
  }
  if (sum != 1) throw Error("distribution probabilities must sum to 1");
}

std::string to_string(Notion n) {
  switch (n) {
    case Notion::Pure:
      return "pure";
    case Notion::Mixed:
      return "mixed";
    case Notion::Correlated:
      return "correlated";
    case Notion::CoarseCorrelated:
      return "coarse-correlated";
    case Notion::Wardrop:
      return "wardrop";
    case Notion::Splittable:
      return "splittable";
  }
  return "?";
}

std::vector<Profile> enumerate_profiles(
    const std::vector<int>& strategy_counts, const Caps& caps) {
  if (static_cast<int>(strategy_counts.size()) > caps.max_players)
    throw CapExceeded("players", strategy_counts.size(), caps.max_players);
  long long total = 1;
  for (int c : strategy_counts) {
    if (c > caps.max_strategies)
      throw CapExceeded("strategies", c, caps.max_strategies);
    total *= c;
    if (total > caps.max_profiles)
      throw CapExceeded("profiles", total, caps.max_profiles);
  }
  std::vector<Profile> out;
  out.reserve(static_cast<size_t>(total));
  Profile current(strategy_counts.size(), 0);
  while (true) {
    out.push_back(current);
    int i = static_cast<int>(current.size()) - 1;
    while (i >= 0 && current[i] + 1 == strategy_counts[i]) current[i--] = 0;
    if (i < 0) break;
    ++current[i];
  }
  if (strategy_counts.empty()) out = {Profile{}};
  return out;
}

namespace {

std::string profile_name(const Profile& s) {
  std::ostringstream out;
  out << "q(";
  for (size_t i = 0; i < s.size(); ++i) out << (i ? "." : "") << s[i];
  out << ")";
  return out.str();
}

void check_game_caps(const AtomicGame& g, const Caps& caps) {
  g.validate();
  if (static_cast<int>(g.resources.size()) > caps.max_resources)
    throw CapExceeded("resources", g.resources.size(), caps.max_resources);
}

// Lexicographic enumeration of compositions of `total` into `parts`
// non-negative integers.
std::vector<std::vector<long>> compositions(long total, int parts) {
  std::vector<std::vector<long>> out;
  std::vector<long> current(parts, 0);
  current[parts - 1] = total;
  // Walk in lexicographic order of the amount vector.
  std::function<void(int, long)> rec = [&](int pos, long left) {
    if (pos == parts - 1) {
      current[pos] = left;
      out.push_back(current);
      return;
    }
    for (long k = 0; k <= left; ++k) {
      current[pos] = k;
      rec(pos + 1, left - k);
    }
  };
  rec(0, total);
  return out;
}

}  // namespace

std::vector<EquilibriumReport> pure_nash_all(const AtomicGame& g,
                                             const Caps& caps) {
  check_game_caps(g, caps);
  std::vector<int> counts;
  for (const auto& p : g.players)
    counts.push_back(static_cast<int>(p.strategies.size()));
  std::vector<EquilibriumReport> out;
  for (const auto& s : enumerate_profiles(counts, caps)) {
    Rational worst = 0;
    bool first = true;
    for (size_t i = 0; i < g.players.size(); ++i) {
      Rational own = congestion::atomic_player_cost(g, static_cast<int>(i), s);
      for (int j = 0; j < counts[i]; ++j) {
        if (j == s[i]) continue;
        Profile dev = s;
        dev[i] = j;
        Rational gain =
            own - congestion::atomic_player_cost(g, static_cast<int>(i), dev);
        if (first || gain > worst) {
          worst = gain;
          first = false;
        }
      }
    }
    if (first) worst = 0;
    if (worst <= 0) {
      EquilibriumReport r;
      r.notion = Notion::Pure;
      r.profile = s;
      r.cost = congestion::atomic_total_cost(g, s);
      r.deviation_slack = worst;
      r.grid_tolerance = 0;
      out.push_back(std::move(r));
    }
  }
  return out;
}

EquilibriumReport worst_cce_finite(const FiniteGame& game, const Caps& caps) {
  auto profiles = enumerate_profiles(game.strategy_counts, caps);
  const int n = static_cast<int>(game.strategy_counts.size());

  // Index lookup via mixed radix.
  std::vector<long long> radix(n, 1);
  for (int i = n - 2; i >= 0; --i)
    radix[i] = radix[i + 1] * game.strategy_counts[i + 1];
  auto index_of = [&](const Profile& s) {
    long long idx = 0;
    for (int i = 0; i < n; ++i) idx += radix[i] * s[i];
    return static_cast<size_t>(idx);
  };

  // Cache costs.
  std::vector<Rational> total(profiles.size());
  std::vector<std::vector<Rational>> per_player(
      profiles.size(), std::vector<Rational>(std::max(n, 1)));
  for (size_t p = 0; p < profiles.size(); ++p) {
    total[p] = game.total_cost(profiles[p]);
    for (int i = 0; i < n; ++i)
      per_player[p][i] = game.player_cost(profiles[p], i);
  }

  lp::LinearProgram prog("worst-cce", lp::Sense::Maximize);
  for (const auto& s : profiles) prog.add_variable(profile_name(s));
  lp::Row norm;
  lp::Row objective;
  for (size_t p = 0; p < profiles.size(); ++p) {
    norm.emplace_back(profile_name(profiles[p]), Rational(1));
    if (total[p] != 0)
      objective.emplace_back(profile_name(profiles[p]), total[p]);
  }
  prog.add_constraint("total", std::move(norm), lp::Relation::Equal,
                      Rational(1));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < game.strategy_counts[i]; ++j) {
      lp::Row row;
      for (size_t p = 0; p < profiles.size(); ++p) {
        Profile dev = profiles[p];
        dev[i] = j;
        Rational coef = per_player[p][i] - per_player[index_of(dev)][i];
        if (coef != 0) row.emplace_back(profile_name(profiles[p]), coef);
      }
      std::ostringstream name;
      name << "cce(" << i << "," << j << ")";
      prog.add_constraint(name.str(), std::move(row),
                          lp::Relation::LessEqual, Rational(0));
    }
  }
  prog.set_objective(std::move(objective));

  auto sol = lp::solve(prog);
  if (sol.status != lp::SolveStatus::Optimal)
    throw Error("worst-CCE LP not optimal: " + lp::to_string(sol.status));

  EquilibriumReport r;
  r.notion = Notion::CoarseCorrelated;
  JointDistribution dist;
  for (size_t p = 0; p < profiles.size(); ++p) {
    const Rational& q = sol.primal.at(profile_name(profiles[p]));
    if (q != 0) dist.support.emplace_back(profiles[p], q);
  }
  dist.validate();

  // Independent re-check of the CCE constraints, not trusting the solver.
  Rational worst = 0;
  bool first = true;
  for (int i = 0; i < n; ++i) {
    Rational expected = 0;
    for (const auto& [s, q] : dist.support) expected += q * per_player[index_of(s)][i];
    for (int j = 0; j < game.strategy_counts[i]; ++j) {
      Rational deviated = 0;
      for (const auto& [s, q] : dist.support) {
        Profile dev = s;
        dev[i] = j;
        deviated += q * per_player[index_of(dev)][i];
      }
      Rational benefit = expected - deviated;
      if (first || benefit > worst) {
        worst = benefit;
        first = false;
      }
    }
  }
  if (first) worst = 0;
  if (worst > 0)
    throw Error("internal: worst-CCE solution violates CCE constraints");

  r.distribution = std::move(dist);
  r.cost = sol.objective;
  r.deviation_slack = worst;
  r.grid_tolerance = 0;
  return r;
}

EquilibriumReport worst_cce(const AtomicGame& g, const Caps& caps) {
  check_game_caps(g, caps);
  FiniteGame fg;
  for (const auto& p : g.players)
    fg.strategy_counts.push_back(static_cast<int>(p.strategies.size()));
  fg.player_cost = [&g](const Profile& s, int i) {
    return congestion::atomic_player_cost(g, i, s);
  };
  fg.total_cost = [&g](const Profile& s) {
    return congestion::atomic_total_cost(g, s);
  };
  return worst_cce_finite(fg, caps);
}

Rational cce_worst_violation(const AtomicGame& g,
                             const JointDistribution& sigma) {
  g.validate();
  sigma.validate();
  Rational worst = 0;
  bool first = true;
  for (size_t i = 0; i < g.players.size(); ++i) {
    Rational expected = 0;
    for (const auto& [s, q] : sigma.support)
      expected += q * congestion::atomic_player_cost(g, static_cast<int>(i), s);
    for (size_t j = 0; j < g.players[i].strategies.size(); ++j) {
      Rational deviated = 0;
      for (const auto& [s, q] : sigma.support) {
        Profile dev = s;
        dev[i] = static_cast<int>(j);
        deviated +=
            q * congestion::atomic_player_cost(g, static_cast<int>(i), dev);
      }
      Rational benefit = expected - deviated;
      if (first || benefit > worst) {
        worst = benefit;
        first = false;
      }
    }
  }
  return first ? Rational(0) : worst;
}

std::vector<FlowProfile> enumerate_flows(const NonAtomicGame& g,
                                         const Caps& caps) {
  g.validate();
  if (static_cast<int>(g.resources.size()) > caps.max_resources)
    throw CapExceeded("resources", g.resources.size(), caps.max_resources);
  std::vector<std::vector<std::vector<long>>> per_type;
  long long total = 1;
  for (const auto& t : g.types) {
    per_type.push_back(
        compositions(t.m, static_cast<int>(t.strategies.size())));
    total *= static_cast<long long>(per_type.back().size());
    if (total > caps.max_profiles)
      throw CapExceeded("flow profiles", total, caps.max_profiles);
  }
  std::vector<FlowProfile> out;
  std::vector<size_t> pick(g.types.size(), 0);
  while (true) {
    FlowProfile f(g.types.size());
    for (size_t i = 0; i < g.types.size(); ++i) {
      f[i].reserve(per_type[i][pick[i]].size());
      for (long units : per_type[i][pick[i]]) f[i].push_back(g.epsilon * units);
    }
    out.push_back(std::move(f));
    int i = static_cast<int>(pick.size()) - 1;
    while (i >= 0 && pick[i] + 1 == per_type[i].size()) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  return out;
}

EquilibriumReport wardrop_equilibrium(const NonAtomicGame& g,
                                      const Caps& caps) {
  auto flows = enumerate_flows(g, caps);
  auto potential = [&g](const FlowProfile& f) {
    auto load = congestion::flow_loads(g, f);
    Rational phi = 0;
    for (size_t e = 0; e < load.size(); ++e) {
      Integer steps = rational_floor(load[e] / g.epsilon);
      for (Integer k = 1; k <= steps; ++k)
        phi += g.epsilon * g.costs[e].eval(g.epsilon * Rational(k));
    }
    return phi;
  };
  size_t best = 0;
  Rational best_phi = potential(flows[0]);
  for (size_t p = 1; p < flows.size(); ++p) {
    Rational phi = potential(flows[p]);
    if (phi < best_phi) {  // lexicographically first minimizer wins
      best_phi = phi;
      best = p;
    }
  }
  const FlowProfile& f = flows[best];

  // Wardrop condition: on-support strategies are within delta of any other.
  Rational slack = 0;
  bool first = true;
  for (size_t i = 0; i < g.types.size(); ++i) {
    for (size_t j = 0; j < g.types[i].strategies.size(); ++j) {
      if (f[i][j] == 0) continue;
      Rational own =
          congestion::strategy_cost(g, f, static_cast<int>(i),
                                    static_cast<int>(j));
      for (size_t j2 = 0; j2 < g.types[i].strategies.size(); ++j2) {
        Rational other = congestion::strategy_cost(
            g, f, static_cast<int>(i), static_cast<int>(j2));
        Rational diff = own - other;
        if (first || diff > slack) {
          slack = diff;
          first = false;
        }
      }
    }
  }
  if (first) slack = 0;

  EquilibriumReport r;
  r.notion = Notion::Wardrop;
  r.flow = f;
  r.cost = congestion::nonatomic_social_cost(g, f);
  r.deviation_slack = slack;
  r.grid_tolerance = slack > 0 ? slack : Rational(0);
  return r;
}

EquilibriumReport nonatomic_worst_cce(const NonAtomicGame& g,
                                      const Caps& caps) {
  g.validate();
  // Per type: every composition of its demand over its strategies.
  std::vector<std::vector<std::vector<long>>> per_type;
  for (const auto& t : g.types)
    per_type.push_back(
        compositions(t.m, static_cast<int>(t.strategies.size())));

  auto to_flow = [&](const Profile& s) {
    FlowProfile f(g.types.size());
    for (size_t i = 0; i < g.types.size(); ++i) {
      f[i].reserve(per_type[i][s[i]].size());
      for (long units : per_type[i][s[i]]) f[i].push_back(g.epsilon * units);
    }
    return f;
  };

  FiniteGame fg;
  for (const auto& options : per_type)
    fg.strategy_counts.push_back(static_cast<int>(options.size()));
  fg.player_cost = [&g, to_flow](const Profile& s, int i) {
    auto f = to_flow(s);
    auto load = congestion::flow_loads(g, f);
    Rational cost = 0;
    for (size_t j = 0; j < f[i].size(); ++j) {
      if (f[i][j] == 0) continue;
      for (int e : g.types[i].strategies[j])
        cost += f[i][j] * g.costs[e].eval(load[e]);
    }
    return cost;
  };
  fg.total_cost = [&g, to_flow](const Profile& s) {
    return congestion::nonatomic_social_cost(g, to_flow(s));
  };
  return worst_cce_finite(fg, caps);
}

EquilibriumReport splittable_equilibrium_check(const SplittableGame& g,
                                               const SplitProfile& u) {
  g.validate();
  congestion::validate_split(g, u);
  auto total = congestion::split_loads(g, u);

  auto marginal = [&](int player, int strategy) {
    auto mine = congestion::player_split_loads(g, u, player);
    Rational m = 0;
    for (int e : g.players[player].strategies[strategy])
      m += g.costs[e].eval(total[e]) + mine[e] * g.costs[e].derivative(total[e]);
    return m;
  };

  Rational slack = 0;
  bool first = true;
  for (size_t i = 0; i < g.players.size(); ++i) {
    for (size_t j = 0; j < g.players[i].strategies.size(); ++j) {
      if (u[i][j] == 0) continue;
      Rational own = marginal(static_cast<int>(i), static_cast<int>(j));
      for (size_t j2 = 0; j2 < g.players[i].strategies.size(); ++j2) {
        Rational diff =
            own - marginal(static_cast<int>(i), static_cast<int>(j2));
        if (first || diff > slack) {
          slack = diff;
          first = false;
        }
      }
    }
  }
  if (first) slack = 0;

  EquilibriumReport r;
  r.notion = Notion::Splittable;
  r.split = u;
  r.cost = congestion::splittable_total_cost(g, u);
  r.deviation_slack = slack;
  r.grid_tolerance = 0;
  return r;
}

std::vector<std::vector<std::vector<Rational>>> enumerate_splits_per_player(
    const SplittableGame& g, const Caps& caps) {
  g.validate();
  std::vector<std::vector<std::vector<Rational>>> out;
  for (const auto& p : g.players) {
    long units = static_cast<long>(rational_floor(p.weight / g.epsilon));
    auto comps = compositions(units, static_cast<int>(p.strategies.size()));
    if (static_cast<long long>(comps.size()) > caps.max_configs)
      throw CapExceeded("splits", comps.size(), caps.max_configs);
    std::vector<std::vector<Rational>> mine;
    mine.reserve(comps.size());
    for (const auto& c : comps) {
      std::vector<Rational> amounts;
      amounts.reserve(c.size());
      for (long k : c) amounts.push_back(g.epsilon * k);
      mine.push_back(std::move(amounts));
    }
    out.push_back(std::move(mine));
  }
  return out;
}

std::vector<SplitProfile> enumerate_splits(const SplittableGame& g,
                                           const Caps& caps) {
  auto per_player = enumerate_splits_per_player(g, caps);
  long long total = 1;
  for (const auto& m : per_player) {
    total *= static_cast<long long>(m.size());
    if (total > caps.max_profiles)
      throw CapExceeded("split profiles", total, caps.max_profiles);
  }
  std::vector<SplitProfile> out;
  std::vector<size_t> pick(per_player.size(), 0);
  while (true) {
    SplitProfile u(per_player.size());
    for (size_t i = 0; i < per_player.size(); ++i) u[i] = per_player[i][pick[i]];
    out.push_back(std::move(u));
    int i = static_cast<int>(pick.size()) - 1;
    while (i >= 0 && pick[i] + 1 == per_player[i].size()) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  return out;
}

std::vector<EquilibriumReport> splittable_pure_all(const SplittableGame& g,
                                                   const Caps& caps) {
  std::vector<EquilibriumReport> out;
  for (const auto& u : enumerate_splits(g, caps)) {
    auto r = splittable_equilibrium_check(g, u);
    if (r.deviation_slack <= 0) out.push_back(std::move(r));
  }
  return out;
}

EquilibriumReport splittable_worst_cce(const SplittableGame& g,
                                       const Caps& caps) {
  auto per_player = enumerate_splits_per_player(g, caps);
  FiniteGame fg;
  for (const auto& m : per_player)
    fg.strategy_counts.push_back(static_cast<int>(m.size()));
  auto to_split = [&per_player](const Profile& s) {
    SplitProfile u(per_player.size());
    for (size_t i = 0; i < per_player.size(); ++i) u[i] = per_player[i][s[i]];
    return u;
  };
  fg.player_cost = [&g, to_split](const Profile& s, int i) {
    return congestion::splittable_player_cost(g, i, to_split(s));
  };
  fg.total_cost = [&g, to_split](const Profile& s) {
    return congestion::splittable_total_cost(g, to_split(s));
  };
  auto r = worst_cce_finite(fg, caps);
  r.split_actions = std::move(per_player);
  return r;
}

Rational optimum_cost(const AtomicGame& g, const Caps& caps) {
  return congestion::atomic_total_cost(g, optimum_profile(g, caps));
}

Profile optimum_profile(const AtomicGame& g, const Caps& caps) {
  check_game_caps(g, caps);
  std::vector<int> counts;
  for (const auto& p : g.players)
    counts.push_back(static_cast<int>(p.strategies.size()));
  auto profiles = enumerate_profiles(counts, caps);
  size_t best = 0;
  Rational best_cost = congestion::atomic_total_cost(g, profiles[0]);
  for (size_t p = 1; p < profiles.size(); ++p) {
    Rational c = congestion::atomic_total_cost(g, profiles[p]);
    if (c < best_cost) {
      best_cost = c;
      best = p;
    }
  }
  return profiles[best];
}

Rational optimum_flow_cost(const NonAtomicGame& g, const Caps& caps) {
  auto flows = enumerate_flows(g, caps);
  Rational best = congestion::nonatomic_social_cost(g, flows[0]);
  for (size_t p = 1; p < flows.size(); ++p)
    best = std::min(best, congestion::nonatomic_social_cost(g, flows[p]));
  return best;
}

Rational optimum_split_cost(const SplittableGame& g, const Caps& caps) {
  auto splits = enumerate_splits(g, caps);
  Rational best = congestion::splittable_total_cost(g, splits[0]);
  for (size_t p = 1; p < splits.size(); ++p)
    best = std::min(best, congestion::splittable_total_cost(g, splits[p]));
  return best;
}

Rational empirical_poa(const AtomicGame& g, Notion notion, const Caps& caps) {
  Rational opt = optimum_cost(g, caps);
  if (opt <= 0) throw Error("optimum cost must be positive for a PoA ratio");
  if (notion == Notion::Pure) {
    auto all = pure_nash_all(g, caps);
    if (all.empty()) throw Error("no pure Nash equilibrium exists");
    Rational worst = all[0].cost;
    for (const auto& r : all) worst = std::max(worst, r.cost);
    return worst / opt;
  }
  if (notion == Notion::CoarseCorrelated) return worst_cce(g, caps).cost / opt;
  throw Error("unsupported equilibrium notion for atomic games: " +
              to_string(notion));
}

Rational empirical_poa(const NonAtomicGame& g, const Caps& caps) {
  Rational opt = optimum_flow_cost(g, caps);
  if (opt <= 0) throw Error("optimum cost must be positive for a PoA ratio");
  return wardrop_equilibrium(g, caps).cost / opt;
}

Rational empirical_poa(const SplittableGame& g, Notion notion,
                       const Caps& caps) {
  Rational opt = optimum_split_cost(g, caps);
  if (opt <= 0) throw Error("optimum cost must be positive for a PoA ratio");
  if (notion == Notion::Splittable) {
    auto all = splittable_pure_all(g, caps);
    if (all.empty()) throw Error("no pure splittable equilibrium exists");
    Rational worst = all[0].cost;
    for (const auto& r : all) worst = std::max(worst, r.cost);
    return worst / opt;
  }
  if (notion == Notion::CoarseCorrelated)
    return splittable_worst_cce(g, caps).cost / opt;
  throw Error("unsupported equilibrium notion for splittable games: " +
              to_string(notion));
}

}  // namespace poadual::equilibria
