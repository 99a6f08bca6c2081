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

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "poadual/congestion.hpp"
#include "poadual/rational.hpp"

namespace poadual::equilibria {

/// Enumeration caps. These are configuration, not constants: every entry is
/// overridable from the CLI and recorded in reports.
struct Caps {
  int max_players = 6;
  int max_strategies = 6;
  long long max_profiles = 4096;
  int max_resources = 10;
  long long max_configs = 200000;
};

/// Joint probability distribution over strategy profiles; the carrier of
/// (coarse) correlated equilibria.
struct JointDistribution {
  std::vector<std::pair<congestion::Profile, Rational>> support;
  void validate() const;  // probabilities >= 0 summing to 1, profiles distinct
};

enum class Notion {
  Pure,
  Mixed,
  Correlated,
  CoarseCorrelated,
  Wardrop,
  Splittable
};

std::string to_string(Notion n);

struct EquilibriumReport {
  Notion notion = Notion::Pure;
  std::optional<congestion::Profile> profile;
  std::optional<JointDistribution> distribution;
  std::optional<congestion::FlowProfile> flow;
  std::optional<congestion::SplitProfile> split;
  // For splittable CCEs: the enumerated split vocabulary the distribution's
  // profile indices refer to (per player, per index, amounts per strategy).
  std::optional<std::vector<std::vector<std::vector<Rational>>>> split_actions;
  Rational cost;
  // Worst benefit of any unilateral deviation, recomputed from definitions;
  // <= 0 for a valid equilibrium.
  Rational deviation_slack;
  // Grid tolerance delta(eps) for Wardrop reports; 0 elsewhere.
  Rational grid_tolerance;
};

std::vector<congestion::Profile> enumerate_profiles(
    const std::vector<int>& strategy_counts, const Caps& caps);

// All pure Nash equilibria, exhaustively.
std::vector<EquilibriumReport> pure_nash_all(const congestion::AtomicGame& g,
                                             const Caps& caps = {});

/// Worst-case coarse correlated equilibrium: the LP over distributions q on
/// all profiles maximizing expected total cost subject to every player's
/// fixed-deviation constraints. The returned distribution is re-verified by
/// an independent constraint check.
EquilibriumReport worst_cce(const congestion::AtomicGame& g,
                            const Caps& caps = {});

// Independent CCE check: worst deviation benefit of sigma (exact; <= 0 iff
// sigma is a coarse correlated equilibrium).
Rational cce_worst_violation(const congestion::AtomicGame& g,
                             const JointDistribution& sigma);

/// Wardrop flow on the epsilon-grid by exhaustive minimization of the
/// discrete potential sum_e sum_{k=1..f_e/eps} eps*l_e(k*eps); ties broken
/// lexicographically. deviation_slack verifies the Wardrop condition and
/// grid_tolerance reports delta(eps) = max(0, slack).
EquilibriumReport wardrop_equilibrium(const congestion::NonAtomicGame& g,
                                      const Caps& caps = {});

std::vector<congestion::FlowProfile> enumerate_flows(
    const congestion::NonAtomicGame& g, const Caps& caps = {});

/// Worst CCE of the finite game whose per-type strategies are the grid
/// compositions of the type's demand. Reported as a measured quantity only:
/// in the discrete setting different CCEs need not share their cost.
EquilibriumReport nonatomic_worst_cce(const congestion::NonAtomicGame& g,
                                      const Caps& caps = {});

/// Marginal-cost equilibrium check for splittable games: slack is the worst
/// difference of support-strategy marginal cost over alternative-strategy
/// marginal cost; equilibrium iff <= 0.
EquilibriumReport splittable_equilibrium_check(
    const congestion::SplittableGame& g, const congestion::SplitProfile& u);

// Every valid split of every player's weight across its strategies.
std::vector<std::vector<std::vector<Rational>>> enumerate_splits_per_player(
    const congestion::SplittableGame& g, const Caps& caps = {});
std::vector<congestion::SplitProfile> enumerate_splits(
    const congestion::SplittableGame& g, const Caps& caps = {});

std::vector<EquilibriumReport> splittable_pure_all(
    const congestion::SplittableGame& g, const Caps& caps = {});

// Worst CCE of the finite game whose strategies are the enumerated splits.
EquilibriumReport splittable_worst_cce(const congestion::SplittableGame& g,
                                       const Caps& caps = {});

// Exhaustive optima.
Rational optimum_cost(const congestion::AtomicGame& g, const Caps& caps = {});
congestion::Profile optimum_profile(const congestion::AtomicGame& g,
                                    const Caps& caps = {});
Rational optimum_flow_cost(const congestion::NonAtomicGame& g,
                           const Caps& caps = {});
Rational optimum_split_cost(const congestion::SplittableGame& g,
                            const Caps& caps = {});

Rational empirical_poa(const congestion::AtomicGame& g, Notion notion,
                       const Caps& caps = {});
Rational empirical_poa(const congestion::NonAtomicGame& g,
                       const Caps& caps = {});
Rational empirical_poa(const congestion::SplittableGame& g, Notion notion,
                       const Caps& caps = {});

// Generic worst-CCE over an explicit finite game; exposed for reuse.
struct FiniteGame {
  std::vector<int> strategy_counts;
  std::function<Rational(const congestion::Profile&, int)> player_cost;
  std::function<Rational(const congestion::Profile&)> total_cost;
};
EquilibriumReport worst_cce_finite(const FiniteGame& game, const Caps& caps);

}  // namespace poadual::equilibria
