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
#include <string>
#include <vector>

#include "poadual/congestion.hpp"
#include "poadual/equilibria.hpp"
#include "poadual/lp.hpp"

namespace poadual::configlp {

/// A linear program together with the mapping from variable names back to
/// the semantic objects they represent (profiles, resource configurations).
struct BuiltProgram {
  lp::LinearProgram program;
  std::map<std::string, std::string> index;
  std::string provenance;
};

/// Profile formulation: one z variable per strategy profile, choice rows
/// per player, a single partition-of-unity row, coupling rows per
/// (player, strategy).
struct ProfileProgram {
  BuiltProgram built;
  std::vector<congestion::Profile> profiles;
  std::vector<std::string> z_names;  // parallel to profiles
  std::string x_name(int player, int strategy) const;
};

/// Resource formulation: one z variable per (resource, player subset).
struct ResourceProgram {
  BuiltProgram built;
  // Per resource: every subset of players, sorted ascending, full power set.
  std::vector<std::vector<std::vector<int>>> subsets;
  std::vector<std::vector<std::string>> z_names;
  std::string x_name(int player, int strategy) const;
};

/// Amount-multiset configuration of one resource: couples (type-or-player,
/// amount index k), sorted; repeats allowed (one per strategy on the
/// resource, including zero amounts).
struct AmountConfig {
  std::vector<std::pair<int, long>> couples;
  auto operator<=>(const AmountConfig&) const = default;
  Rational total(const Rational& epsilon) const;
};

/// Amount formulation shared by the non-atomic, splittable and augmented
/// programs. Configurations are restricted to the achievable set (multisets
/// realizable by at least one valid flow/split); the shape validator proves
/// the restriction loses no integer solution.
struct AmountProgram {
  BuiltProgram built;
  Rational epsilon;
  std::vector<long> max_k;  // per type/player: largest usable amount index
  std::vector<std::vector<AmountConfig>> configs;  // per resource
  std::vector<std::vector<std::string>> z_names;
  std::string x_name(int type, int strategy, long k) const;
};

ProfileProgram profile_lp(const congestion::AtomicGame& g,
                          const equilibria::Caps& caps = {});
ResourceProgram resource_lp(const congestion::AtomicGame& g,
                            const equilibria::Caps& caps = {});
AmountProgram nonatomic_lp(const congestion::NonAtomicGame& g,
                           const equilibria::Caps& caps = {});
AmountProgram splittable_lp(const congestion::SplittableGame& g,
                            const equilibria::Caps& caps = {});
/// The resource-augmented program: identical to nonatomic_lp except demand
/// rows require (1+r) times each type's amount. (1+r)*w_i must sit on the
/// epsilon grid.
AmountProgram augmented_lp(const congestion::NonAtomicGame& g,
                           const Rational& r,
                           const equilibria::Caps& caps = {});

/// Structural audit: asserts the three constraint families of the paper
/// formulation (choice/demand, partition-of-unity, coupling) and nothing
/// else. Throws Error with the offending row on failure.
void validate_shape(const BuiltProgram& built);

/// Serializes program plus sidecar semantic index ("<name>\t<semantics>").
std::string index_sidecar(const BuiltProgram& built);

}  // namespace poadual::configlp
