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

#include "poadual/config_lp.hpp"
#include "poadual/congestion.hpp"
#include "poadual/equilibria.hpp"
#include "poadual/lp.hpp"
#include "poadual/smoothness.hpp"

namespace poadual::certificates {

/// An explicit dual assignment against the dual of a built configuration LP,
/// with exact feasibility residuals quantified over the full enumerated
/// configuration set, the dual objective, and the efficiency ratio it
/// certifies (present only when feasible).
struct DualCertificate {
  std::string recipe;
  std::string target_provenance;
  std::map<std::string, Rational> assignment;
  lp::ResidualReport residuals;
  Rational dual_objective;
  std::optional<Rational> certified_ratio;
  std::optional<Rational> lambda;
  std::optional<Rational> mu;
  // True when the recipe guarantees dual objective == ((1-mu)/lambda)*E[cost]
  // (verified exactly on construction).
  bool identity_recipe = false;
  std::map<std::string, Rational> diagnostics;

  bool feasible() const { return residuals.feasible; }
};

/// The profile-formulation construction: alpha_i = (1/lambda)E[C_i(s)],
/// beta = -(mu/lambda)E[C(s)], gamma_ij = (1/lambda)E[C_i(s_ij, s_-i)].
/// sigma is re-verified to be a coarse correlated equilibrium.
DualCertificate smooth_duals(const congestion::AtomicGame& g,
                             const equilibria::JointDistribution& sigma,
                             const Rational& lambda, const Rational& mu,
                             const equilibria::Caps& caps = {});

/// The resource-formulation construction with per-resource beta_e and
/// gamma_{i,e} = (1/lambda)E[w_i*l_e(w_e(s_-i)+w_i)].
DualCertificate atomic_duals(const congestion::AtomicGame& g,
                             const equilibria::JointDistribution& sigma,
                             const Rational& lambda, const Rational& mu,
                             const equilibria::Caps& caps = {});

/// The non-atomic construction from a Wardrop flow: alpha_i from the cheapest
/// support strategy, gamma from a_k*l_e(f_e), beta_e by exact minimization
/// over the enumerated configurations. Feasible by construction; asserted.
DualCertificate nonatomic_duals(const congestion::NonAtomicGame& g,
                                const equilibria::EquilibriumReport& eq,
                                const equilibria::Caps& caps = {});

/// The splittable construction with marginal costs l_e + u_e^i * l_e'.
/// Requires (lambda, mu) to pass the dual-smoothness check for every cost
/// function on the reachable amount grid; sigma may be a point mass on a
/// verified pure split equilibrium or a distribution over enumerated splits.
DualCertificate splittable_duals(const congestion::SplittableGame& g,
                                 const equilibria::EquilibriumReport& sigma,
                                 const Rational& lambda, const Rational& mu,
                                 const equilibria::Caps& caps = {});

/// Rescores the non-atomic assignment against the dual of the augmented
/// program (P_r) and asserts dual objective >= r * equilibrium cost, which
/// certifies equilibrium cost <= (1/r) * OPT((1+r)w).
DualCertificate augmentation_certificate(const congestion::NonAtomicGame& g,
                                         const Rational& r,
                                         const equilibria::EquilibriumReport& eq,
                                         const equilibria::Caps& caps = {});

/// eqCost / dual objective; equals lambda/(1-mu) exactly for the identity
/// recipes (asserted). Requires a feasible certificate.
Rational certified_poa_bound(const DualCertificate& cert,
                             const Rational& eq_cost);

}  // namespace poadual::certificates
