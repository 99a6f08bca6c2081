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

#include <optional>
#include <string>
#include <vector>

#include "poadual/certificates.hpp"
#include "poadual/config_lp.hpp"
#include "poadual/equilibria.hpp"
#include "poadual/rational.hpp"
#include "poadual/smoothness.hpp"

namespace poadual::auctions {

enum class Mechanism { FirstPrice, SecondPrice };

std::string to_string(Mechanism m);

/// Monotone valuation over subsets of m items, stored densely by bitmask.
struct Valuation {
  int items = 0;
  std::vector<Rational> by_subset;  // size 1 << items, index = bitmask

  static Valuation make(int items, std::vector<Rational> by_subset);
  static Valuation additive(const std::vector<Rational>& per_item);
  const Rational& of(int mask) const { return by_subset[mask]; }
  bool is_subadditive() const;  // exhaustive over subset pairs
  bool operator==(const Valuation&) const = default;
};

struct AuctionType {
  std::string label;
  Rational prior;
  Valuation valuation;
  bool operator==(const AuctionType&) const = default;
};

struct BidVector {
  std::vector<Rational> bids;  // one per item
  bool operator==(const BidVector&) const = default;
};

/// Discrete Bayesian auction: finite independent type spaces, explicit
/// action spaces of grid bid vectors, per-item highest-bid allocation with
/// lexicographic tie-break, first- or second-price payments, quasi-linear
/// utilities.
struct BayesianAuction {
  int items = 1;
  Mechanism mechanism = Mechanism::SecondPrice;
  Rational overbid = 1;  // r: actions obey sum_{j in S} b_j <= r * v(S)
  std::vector<std::string> player_names;
  std::vector<std::vector<AuctionType>> types;    // per player
  std::vector<std::vector<BidVector>> actions;    // per player
  // No-overbidding is a per-type property: admissible[i][v] lists the action
  // indices type v of player i may play; strategies, deviations and the
  // configuration LP all quantify over these subsets.
  std::vector<std::vector<std::vector<int>>> admissible;
  std::vector<Rational> bid_grid;

  int players() const { return static_cast<int>(types.size()); }
  const std::vector<int>& admissible_for(int player, int type_idx) const {
    return admissible[player][type_idx];
  }
  void validate() const;
  bool operator==(const BayesianAuction&) const = default;

  struct Outcome {
    std::vector<int> item_winner;    // per item, player index
    std::vector<Rational> payments;  // per player
  };
  Outcome outcome(const std::vector<int>& action_idx) const;
  Rational utility(int player, const std::vector<int>& action_idx,
                   int type_idx) const;
  // Social welfare sum_i u_i + sum_i p_i; computed also as total allocated
  // value and asserted equal.
  Rational welfare(const std::vector<int>& action_idx,
                   const std::vector<int>& type_idx) const;
  Rational revenue(const std::vector<int>& action_idx) const;
  // Exhaustive optimal welfare over item assignments for fixed types.
  Rational opt_welfare(const std::vector<int>& type_idx) const;
  Rational expected_opt_welfare() const;

  Rational prior_of(const std::vector<int>& type_idx) const;
  Rational prior_others(int player, const std::vector<int>& type_idx) const;
};

/// Builds the simultaneous item-bidding auction over a bid grid: action
/// spaces are all grid vectors satisfying the no-overbidding constraint with
/// multiplier r. With require_subadditive, every valuation is checked.
BayesianAuction make_simultaneous_auction(
    int items, Mechanism mechanism, std::vector<Rational> bid_grid,
    std::vector<std::string> player_names,
    std::vector<std::vector<AuctionType>> types, const Rational& overbid = 1,
    bool require_subadditive = false);

/// Per player, per type: a distribution over action indices.
struct StrategyMap {
  std::vector<std::vector<std::vector<std::pair<int, Rational>>>> play;
  void validate(const BayesianAuction& auc) const;
  static StrategyMap pure(const BayesianAuction& auc,
                          const std::vector<std::vector<int>>& action_of_type);
};

Rational expected_welfare(const BayesianAuction& auc, const StrategyMap& sigma,
                          const equilibria::Caps& caps = {});

struct BneReport {
  Rational worst_gain;  // max interim deviation gain; BNE iff <= 0
  bool is_bne = false;
  std::string worst_witness;
};
BneReport check_bne(const BayesianAuction& auc, const StrategyMap& sigma,
                    const equilibria::Caps& caps = {});

/// Exhaustive search over pure strategy maps when within caps, otherwise
/// best-response iteration with cycle detection. Returns the first map (in
/// lexicographic order) that passes check_bne, if any.
std::optional<StrategyMap> find_pure_bne(const BayesianAuction& auc,
                                         const equilibria::Caps& caps = {});

/// The interim configuration LP: variables x_{i,a_i}(v_i) and z_A(v) with
/// mass, joint and coupling families; maximizes expected welfare.
struct BayesianProgram {
  configlp::BuiltProgram built;
  std::string x_name(int player, int type_idx, int action_idx) const;
  std::string z_name(const std::vector<int>& type_idx,
                     const std::vector<int>& action_idx) const;
};
BayesianProgram bayesian_config_lp(const BayesianAuction& auc,
                                   const equilibria::Caps& caps = {});

/// Verifies the smooth-auction inequality (variant R15) or its weak ST13
/// form against a supplied deviation family D*; when none is supplied a
/// small candidate family (welfare-optimal point mass, truthful point mass)
/// is searched.
smoothness::SmoothnessCertificate check_auction_smooth(
    const BayesianAuction& auc, const Rational& lambda, const Rational& mu,
    smoothness::Kind variant,
    const std::optional<smoothness::DeviationDistributions>& dstar =
        std::nullopt,
    const equilibria::Caps& caps = {});

/// The smooth-auction dual construction against bayesian_config_lp's dual.
/// R15 certifies welfare fraction lambda/(1+mu), ST13 lambda/mu. A verified
/// smoothness certificate of the matching variant must be supplied.
certificates::DualCertificate smooth_auction_duals(
    const BayesianAuction& auc, const StrategyMap& sigma,
    const Rational& lambda, const Rational& mu, smoothness::Kind variant,
    const smoothness::SmoothnessCertificate& smooth_cert,
    const equilibria::Caps& caps = {});

/// The interim relaxation of simultaneous item-bidding welfare with
/// variables x_ij(v_i), z_iS(v_i).
struct InterimProgram {
  configlp::BuiltProgram built;
  std::string x_name(int player, int item, int type_idx) const;
  std::string z_name(int player, int subset_mask, int type_idx) const;
};
InterimProgram feldman_fu_lp(const BayesianAuction& auc,
                             const equilibria::Caps& caps = {});

/// The Feldman-Fu dual vector built from a Bayes-Nash equilibrium of a
/// simultaneous auction with sub-additive valuations. The second-constraint
/// feasibility additionally requires, per (i, v_i, S), a grid witness action
/// for the deviation inequality; absence fails loudly with the triple.
/// Certifies welfare fraction 1/2 (first price) or 1/4 (second price).
certificates::DualCertificate feldman_fu_duals(const BayesianAuction& auc,
                                               const StrategyMap& sigma,
                                               const equilibria::Caps& caps = {});

enum class Learner { MultiplicativeWeights, RegretMatching, FirstAction };

std::string to_string(Learner l);

/// Trace of simultaneous second-price play under per-player online learners.
/// Thresholds are recomputed from bids each step; recorded utilities and
/// per-step welfare follow the actual tie-broken allocation, and learners
/// evaluate counterfactual bids the same way.
struct LearningTrace {
  int horizon = 0;
  long long seed = 0;
  Learner learner = Learner::MultiplicativeWeights;
  std::vector<std::vector<int>> actions;                  // T x n
  std::vector<std::vector<std::vector<Rational>>> thresholds;  // T x n x m
  std::vector<std::vector<Rational>> utilities;           // T x n
  std::vector<Rational> step_welfare;                     // T
  std::vector<std::vector<Rational>> avg_threshold;       // n x m
  std::vector<Rational> avg_utility;                      // n
  Rational avg_welfare;
};

/// Runs T steps of online bidding; deterministic given seed. Requires a
/// second-price mechanism and a single (deterministic) type per player.
LearningTrace no_envy_trace(const BayesianAuction& auc, Learner learner,
                            int horizon, long long seed,
                            const equilibria::Caps& caps = {});

/// Measured no-envy rate per player: eps_i(T) = max(0,
/// max_S [v_i(S)/r - sum_{j in S} avg theta_ij] - avg utility_i), exhaustive
/// over subsets.
std::vector<Rational> envy_rate(const BayesianAuction& auc,
                                const LearningTrace& trace, const Rational& r);

struct NoEnvyTheoremCheck {
  Rational avg_welfare;
  Rational opt;
  std::vector<Rational> eps;
  Rational bound;  // opt/(2r) - sum eps
  bool holds = false;
};
NoEnvyTheoremCheck no_envy_theorem_check(const BayesianAuction& auc,
                                         const LearningTrace& trace,
                                         const Rational& r);

/// Line-delimited record export for offline inspection.
std::string trace_records(const BayesianAuction& auc,
                          const LearningTrace& trace);

}  // namespace poadual::auctions
