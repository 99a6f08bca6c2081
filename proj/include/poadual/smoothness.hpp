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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "poadual/congestion.hpp"
#include "poadual/equilibria.hpp"
#include "poadual/rational.hpp"

namespace poadual::smoothness {

enum class Kind { Game, Resource, DualSmooth, AuctionR15, AuctionST13 };

std::string to_string(Kind k);

// For auction kinds: per valuation-profile label, per player, a distribution
// over action indices.
using DeviationDistributions =
    std::map<std::string, std::vector<std::vector<std::pair<int, Rational>>>>;

/// Outcome of a smoothness verification. All checks are exhaustive over an
/// explicit finite domain and say so in verified_domain; they never claim
/// continuous-domain smoothness.
struct SmoothnessCertificate {
  Kind kind = Kind::Game;
  Rational lambda;
  Rational mu;
  bool verified = false;
  std::string verified_domain;
  std::optional<std::string> witness;  // violating point, when !verified
  std::optional<DeviationDistributions> deviations;  // auction kinds

  Rational ratio() const;  // lambda/(1-mu), lambda/(1+mu) or lambda/mu by kind
};

std::vector<Rational> make_grid(const Rational& lo, const Rational& hi,
                                const Rational& step);

/// Game smoothness over all ordered profile pairs (s, s*):
/// sum_i C_i(s*_i, s_{-i}) <= lambda*C(s*) + mu*C(s).
SmoothnessCertificate check_game_smooth(const congestion::AtomicGame& g,
                                        const Rational& lambda,
                                        const Rational& mu,
                                        const equilibria::Caps& caps = {});

/// Per-resource smoothness in the form the dual construction consumes: for
/// every weight tuple from the grid and every pair of player sets
/// (current users, deviators),
///   sum_{i in T} w_i*l(load - [i uses] * w_i + w_i)
///     <= lambda*w(T)*l(w(T)) + mu*load*l(load).
/// `conservative` additionally shifts every left-hand load up one grid step,
/// which dominates all real sequences below the grid range.
SmoothnessCertificate check_resource_smooth(const congestion::CostFunction& ell,
                                            const Rational& lambda,
                                            const Rational& mu, int n,
                                            const std::vector<Rational>& grid,
                                            bool conservative = false,
                                            const equilibria::Caps& caps = {});

/// Dual smoothness: for all u, v in grid^n,
///   v*l(u) + sum_i u_i(v_i-u_i)*l'(u) <= lambda*v*l(v) + mu*u*l(u)
/// with u = sum u_i, v = sum v_i. Requires a derivative.
SmoothnessCertificate check_dual_smooth(const congestion::CostFunction& ell,
                                        const Rational& lambda,
                                        const Rational& mu, int n,
                                        const std::vector<Rational>& grid,
                                        const equilibria::Caps& caps = {});

/// Deterministic search over the rational lattice {p/60} in [0,4] x [0,1)
/// minimizing lambda/(1-mu) subject to the corresponding check passing.
/// Returns verified=false ("none found") when no lattice pair is feasible.
SmoothnessCertificate robust_poa_search_game(const congestion::AtomicGame& g,
                                             const equilibria::Caps& caps = {});
SmoothnessCertificate robust_poa_search_resource(
    const congestion::CostFunction& ell, int n,
    const std::vector<Rational>& grid, const equilibria::Caps& caps = {});
SmoothnessCertificate robust_poa_search_dual(
    const congestion::CostFunction& ell, int n,
    const std::vector<Rational>& grid, const equilibria::Caps& caps = {});

struct PigouResult {
  Rational bound;
  Rational argmax_u;
  Rational argmax_v;
  bool degenerate = false;  // no grid pair had a positive denominator
};

/// Pigou bound over grid pairs: max of u*l(u) / (v*l(v) + (u-v)*l(u)), pairs
/// with non-positive denominator skipped.
PigouResult pigou_bound(const congestion::CostFunction& ell,
                        const std::vector<Rational>& grid);

}  // namespace poadual::smoothness
