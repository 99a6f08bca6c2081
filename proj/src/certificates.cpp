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

#include "poadual/certificates.hpp"

#include <algorithm>
#include <sstream>

namespace poadual::certificates {

using congestion::AtomicGame;
using congestion::NonAtomicGame;
using congestion::Profile;
using congestion::SplittableGame;
using equilibria::Caps;
using equilibria::EquilibriumReport;
using equilibria::JointDistribution;

namespace {

std::string pair_tag(const std::string& name, const Rational& lambda,
                     const Rational& mu) {
  return name + "(lambda=" + poadual::to_string(lambda) +
         ",mu=" + poadual::to_string(mu) + ")";
}

void require_smooth_params(const Rational& lambda, const Rational& mu) {
  if (lambda <= 0) throw Error("lambda must be positive");
  if (mu < 0 || mu >= 1) throw Error("mu must lie in [0, 1)");
}

void finish(DualCertificate& cert, const configlp::BuiltProgram& target,
            const std::optional<Rational>& ratio_when_feasible) {
  lp::LinearProgram dual = lp::dual_of(target.program);
  cert.target_provenance = target.provenance;
  cert.residuals = lp::feasibility_residuals(dual, cert.assignment);
  cert.dual_objective = dual.objective_value(cert.assignment);
  if (cert.residuals.feasible) cert.certified_ratio = ratio_when_feasible;
}

}  // namespace

DualCertificate smooth_duals(const AtomicGame& g,
                             const JointDistribution& sigma,
                             const Rational& lambda, const Rational& mu,
                             const Caps& caps) {
  require_smooth_params(lambda, mu);
  Rational violation = equilibria::cce_worst_violation(g, sigma);
  if (violation > 0)
    throw Error("sigma is not a coarse correlated equilibrium (violation " +
                poadual::to_string(violation) + ")");

  auto target = configlp::profile_lp(g, caps);

  DualCertificate cert;
  cert.recipe = pair_tag("smooth", lambda, mu);
  cert.lambda = lambda;
  cert.mu = mu;
  cert.identity_recipe = true;

  Rational total_expected = 0;
  for (size_t i = 0; i < g.players.size(); ++i) {
    Rational expected = 0;
    for (const auto& [s, q] : sigma.support)
      expected += q * congestion::atomic_player_cost(g, static_cast<int>(i), s);
    total_expected += expected;
    cert.assignment["choice(" + std::to_string(i) + ")"] = expected / lambda;
    for (size_t j = 0; j < g.players[i].strategies.size(); ++j) {
      Rational deviated = 0;
      for (const auto& [s, q] : sigma.support) {
        Profile dev = s;
        dev[i] = static_cast<int>(j);
        deviated +=
            q * congestion::atomic_player_cost(g, static_cast<int>(i), dev);
      }
      cert.assignment["couple(" + std::to_string(i) + "," +
                      std::to_string(j) + ")"] = deviated / lambda;
    }
  }
  cert.assignment["outcome"] = -(mu / lambda) * total_expected;

  finish(cert, target.built, lambda / (Rational(1) - mu));

  // The dual objective identity of the construction, exact.
  Rational expected_identity = (Rational(1) - mu) / lambda * total_expected;
  if (cert.dual_objective != expected_identity)
    throw Error("internal: smooth dual objective identity failed");
  cert.diagnostics["equilibrium-cost"] = total_expected;
  cert.diagnostics["cce-violation"] = violation;
  return cert;
}

DualCertificate atomic_duals(const AtomicGame& g,
                             const JointDistribution& sigma,
                             const Rational& lambda, const Rational& mu,
                             const Caps& caps) {
  require_smooth_params(lambda, mu);
  Rational violation = equilibria::cce_worst_violation(g, sigma);
  if (violation > 0)
    throw Error("sigma is not a coarse correlated equilibrium (violation " +
                poadual::to_string(violation) + ")");

  auto target = configlp::resource_lp(g, caps);

  DualCertificate cert;
  cert.recipe = pair_tag("atomic", lambda, mu);
  cert.lambda = lambda;
  cert.mu = mu;
  cert.identity_recipe = true;

  Rational total_expected = 0;
  for (size_t i = 0; i < g.players.size(); ++i) {
    Rational expected = 0;
    for (const auto& [s, q] : sigma.support)
      expected += q * congestion::atomic_player_cost(g, static_cast<int>(i), s);
    total_expected += expected;
    cert.assignment["choice(" + std::to_string(i) + ")"] = expected / lambda;
  }
  for (size_t e = 0; e < g.resources.size(); ++e) {
    Rational on_resource = 0;  // E[ w_e(s) * l_e(w_e(s)) ]
    for (const auto& [s, q] : sigma.support) {
      auto w = congestion::loads(g, s);
      on_resource += q * w[e] * g.costs[e].eval(w[e]);
    }
    cert.assignment["config(" + g.resources[e] + ")"] =
        -(mu / lambda) * on_resource;
  }
  for (size_t i = 0; i < g.players.size(); ++i)
    for (size_t e = 0; e < g.resources.size(); ++e) {
      Rational deviated = 0;  // E[ w_i * l_e(w_e(s_-i) + w_i) ]
      for (const auto& [s, q] : sigma.support) {
        auto w = congestion::loads(g, s);
        Rational others = w[e];
        const auto& strat = g.players[i].strategies[s[i]];
        if (std::find(strat.begin(), strat.end(), static_cast<int>(e)) !=
            strat.end())
          others -= g.players[i].weight;
        deviated += q * g.players[i].weight *
                    g.costs[e].eval(others + g.players[i].weight);
      }
      cert.assignment["couple(" + std::to_string(i) + "," + g.resources[e] +
                      ")"] = deviated / lambda;
    }

  finish(cert, target.built, lambda / (Rational(1) - mu));

  Rational expected_identity = (Rational(1) - mu) / lambda * total_expected;
  if (cert.dual_objective != expected_identity)
    throw Error("internal: atomic dual objective identity failed");
  cert.diagnostics["equilibrium-cost"] = total_expected;
  cert.diagnostics["cce-violation"] = violation;
  return cert;
}

DualCertificate nonatomic_duals(const NonAtomicGame& g,
                                const EquilibriumReport& eq,
                                const Caps& caps) {
  if (!eq.flow) throw Error("nonatomic_duals needs a flow-based report");
  const auto& f = *eq.flow;
  congestion::validate_flow(g, f);
  auto load = congestion::flow_loads(g, f);

  // Re-verify the Wardrop condition; delta(eps) is the measured grid slack.
  Rational delta = 0;
  for (size_t i = 0; i < g.types.size(); ++i)
    for (size_t j = 0; j < g.types[i].strategies.size(); ++j) {
      if (f[i][j] == 0) continue;
      Rational own = congestion::strategy_cost(g, f, static_cast<int>(i),
                                               static_cast<int>(j));
      for (size_t j2 = 0; j2 < g.types[i].strategies.size(); ++j2) {
        Rational diff = own - congestion::strategy_cost(
                                  g, f, static_cast<int>(i),
                                  static_cast<int>(j2));
        if (diff > delta) delta = diff;
      }
    }
  if (eq.grid_tolerance < delta)
    throw Error("flow is not a Wardrop equilibrium within its reported "
                "tolerance (slack " +
                poadual::to_string(delta) + ")");

  auto target = configlp::nonatomic_lp(g, caps);

  DualCertificate cert;
  cert.recipe = "nonatomic";
  cert.identity_recipe = false;

  // alpha_i: cheapest on-support strategy cost; spread recorded.
  for (size_t i = 0; i < g.types.size(); ++i) {
    std::optional<Rational> alpha, worst;
    for (size_t j = 0; j < g.types[i].strategies.size(); ++j) {
      if (f[i][j] == 0) continue;
      Rational c = congestion::strategy_cost(g, f, static_cast<int>(i),
                                             static_cast<int>(j));
      if (!alpha || c < *alpha) alpha = c;
      if (!worst || c > *worst) worst = c;
    }
    if (!alpha) throw Error("type with empty support");
    cert.assignment["demand(" + std::to_string(i) + ")"] = *alpha;
    cert.diagnostics["support-spread(" + std::to_string(i) + ")"] =
        *worst - *alpha;
  }

  // gamma_{i,k,e} = a_k * l_e(f_e), on the rows the builder emitted.
  for (const auto& con : target.built.program.constraints()) {
    if (con.name.rfind("couple(", 0) != 0) continue;
    int i;
    long k;
    char ebuf[128];
    if (sscanf(con.name.c_str(), "couple(%d,%ld,%127[^)])", &i, &k, ebuf) != 3)
      throw Error("internal: unparsable coupling row " + con.name);
    std::string ename(ebuf);
    auto eit = std::find(g.resources.begin(), g.resources.end(), ename);
    size_t e = static_cast<size_t>(eit - g.resources.begin());
    cert.assignment[con.name] =
        g.epsilon * k * g.costs[e].eval(load[e]);
  }

  // beta_e: exact minimization over all enumerated configurations. The sum
  // of gammas over a configuration telescopes to w(T)*l_e(f_e).
  Rational resource_ratio = 0;  // max_e num/den, spec's resource-wise bound
  for (size_t e = 0; e < g.resources.size(); ++e) {
    std::optional<Rational> beta;
    Rational v_e = 0;
    for (const auto& config : target.configs[e]) {
      Rational w = config.total(g.epsilon);
      Rational value = w * g.costs[e].eval(w) - w * g.costs[e].eval(load[e]);
      if (!beta || value < *beta) {
        beta = value;
        v_e = w;
      }
    }
    if (!beta) beta = Rational(0);
    cert.assignment["config(" + g.resources[e] + ")"] = *beta;
    Rational num = load[e] * g.costs[e].eval(load[e]);
    Rational den = v_e * g.costs[e].eval(v_e) +
                   (load[e] - v_e) * g.costs[e].eval(load[e]);
    if (num > 0) {
      if (den <= 0)
        throw Error("internal: non-positive certificate denominator");
      Rational candidate = num / den;
      if (candidate > resource_ratio) resource_ratio = candidate;
    }
    cert.diagnostics["v(" + g.resources[e] + ")"] = v_e;
  }

  Rational eq_cost = congestion::nonatomic_social_cost(g, f);
  std::optional<Rational> ratio;
  finish(cert, target.built, std::nullopt);
  if (!cert.residuals.feasible)
    throw Error("internal: non-atomic certificate must be feasible by "
                "construction (violated at " +
                cert.residuals.worst_name + ")");
  if (cert.dual_objective > 0) {
    ratio = eq_cost / cert.dual_objective;
    cert.certified_ratio = ratio;
  }
  cert.diagnostics["equilibrium-cost"] = eq_cost;
  cert.diagnostics["wardrop-delta"] = delta;
  cert.diagnostics["resource-ratio-bound"] = resource_ratio;

  // With zero grid slack the certified ratio cannot exceed the resource-wise
  // Pigou-style bound; any excess is grid slack and is reported.
  if (ratio) {
    Rational excess = *ratio - resource_ratio;
    cert.diagnostics["pigou-excess"] = excess > 0 ? excess : Rational(0);
    if (delta == 0 && *ratio > resource_ratio)
      throw Error("internal: certified ratio exceeds the resource-wise bound "
                  "on an exact Wardrop flow");
  }
  return cert;
}

DualCertificate splittable_duals(const SplittableGame& g,
                                 const EquilibriumReport& sigma,
                                 const Rational& lambda, const Rational& mu,
                                 const Caps& caps) {
  require_smooth_params(lambda, mu);
  g.validate();

  // Accept a point mass on a verified pure split equilibrium or a
  // distribution over enumerated splits; re-verify either way.
  std::vector<std::pair<congestion::SplitProfile, Rational>> support;
  if (sigma.split) {
    auto check = equilibria::splittable_equilibrium_check(g, *sigma.split);
    if (check.deviation_slack > 0)
      throw Error("split profile is not an equilibrium (slack " +
                  poadual::to_string(check.deviation_slack) + ")");
    support.emplace_back(*sigma.split, Rational(1));
  } else if (sigma.distribution && sigma.split_actions) {
    const auto& actions = *sigma.split_actions;
    for (const auto& [s, q] : sigma.distribution->support) {
      congestion::SplitProfile u(actions.size());
      for (size_t i = 0; i < actions.size(); ++i) u[i] = actions[i][s[i]];
      support.emplace_back(std::move(u), q);
    }
    if (sigma.deviation_slack > 0)
      throw Error("sigma is not a coarse correlated equilibrium");
  } else {
    throw Error("splittable_duals needs a split witness or a distribution "
                "with split actions");
  }

  // Dual-smoothness of every cost function on the reachable amount grid.
  Rational total_weight = 0;
  for (const auto& p : g.players) total_weight += p.weight;
  auto grid = smoothness::make_grid(Rational(0), total_weight, g.epsilon);
  for (size_t e = 0; e < g.resources.size(); ++e) {
    auto sc = smoothness::check_dual_smooth(
        g.costs[e], lambda, mu, static_cast<int>(g.players.size()), grid,
        caps);
    if (!sc.verified)
      throw Error("(lambda,mu) fails dual-smoothness for resource " +
                  g.resources[e] + " at " + *sc.witness);
  }

  auto target = configlp::splittable_lp(g, caps);

  DualCertificate cert;
  cert.recipe = pair_tag("splittable", lambda, mu);
  cert.lambda = lambda;
  cert.mu = mu;

  // Expected per-resource quantities over the support.
  const size_t R = g.resources.size();
  const size_t n = g.players.size();
  std::vector<Rational> exp_cost(R, Rational(0));          // E[u_e l_e(u_e)]
  std::vector<Rational> exp_sq_marginal(R, Rational(0));   // E[sum_i (u^i_e)^2 l']
  std::vector<std::vector<Rational>> exp_marg(n, std::vector<Rational>(R, Rational(0)));
  // exp_marg[i][e] = E[l_e(u_e) + u^i_e l'_e(u_e)]
  for (const auto& [u, q] : support) {
    auto total = congestion::split_loads(g, u);
    for (size_t e = 0; e < R; ++e) {
      Rational le = g.costs[e].eval(total[e]);
      Rational de = g.costs[e].derivative(total[e]);
      exp_cost[e] += q * total[e] * le;
      for (size_t i = 0; i < n; ++i) {
        auto mine = congestion::player_split_loads(g, u, static_cast<int>(i));
        exp_sq_marginal[e] += q * mine[e] * mine[e] * de;
        exp_marg[i][e] += q * (le + mine[e] * de);
      }
    }
  }

  // alpha_i: cheapest expected marginal cost among support strategies.
  Rational total_cost_expected = 0;
  for (size_t e = 0; e < R; ++e) total_cost_expected += exp_cost[e];
  for (size_t i = 0; i < n; ++i) {
    std::optional<Rational> alpha;
    for (size_t j = 0; j < g.players[i].strategies.size(); ++j) {
      bool on_support = false;
      for (const auto& [u, q] : support)
        if (u[i][j] > 0) on_support = true;
      if (!on_support) continue;
      Rational marg = 0;
      for (int e : g.players[i].strategies[j]) marg += exp_marg[i][e];
      if (!alpha || marg < *alpha) alpha = marg;
    }
    if (!alpha) throw Error("player with empty support");
    cert.assignment["demand(" + std::to_string(i) + ")"] = *alpha / lambda;
  }
  for (size_t e = 0; e < R; ++e)
    cert.assignment["config(" + g.resources[e] + ")"] =
        -(mu * exp_cost[e] + exp_sq_marginal[e]) / lambda;
  for (const auto& con : target.built.program.constraints()) {
    if (con.name.rfind("couple(", 0) != 0) continue;
    int i;
    long k;
    char ebuf[128];
    if (sscanf(con.name.c_str(), "couple(%d,%ld,%127[^)])", &i, &k, ebuf) != 3)
      throw Error("internal: unparsable coupling row " + con.name);
    std::string ename(ebuf);
    auto eit = std::find(g.resources.begin(), g.resources.end(), ename);
    size_t e = static_cast<size_t>(eit - g.resources.begin());
    cert.assignment[con.name] = g.epsilon * k * exp_marg[i][e] / lambda;
  }

  finish(cert, target.built, lambda / (Rational(1) - mu));

  // Point mass on a pure equilibrium equalizes support marginals, which
  // makes the dual objective identity exact; assert it there.
  if (sigma.split) {
    Rational expected_identity =
        (Rational(1) - mu) / lambda * total_cost_expected;
    if (cert.dual_objective != expected_identity)
      throw Error("internal: splittable dual objective identity failed");
    cert.identity_recipe = true;
  } else {
    cert.diagnostics["identity-gap"] =
        cert.dual_objective -
        (Rational(1) - mu) / lambda * total_cost_expected;
  }
  cert.diagnostics["equilibrium-cost"] = total_cost_expected;
  return cert;
}

DualCertificate augmentation_certificate(const NonAtomicGame& g,
                                         const Rational& r,
                                         const EquilibriumReport& eq,
                                         const Caps& caps) {
  if (r <= 0) throw Error("augmentation factor r must be positive");
  if (!eq.flow) throw Error("augmentation needs a flow-based report");
  const auto& f = *eq.flow;
  congestion::validate_flow(g, f);
  auto load = congestion::flow_loads(g, f);

  // The same Wardrop re-verification as nonatomic_duals.
  Rational delta = 0;
  for (size_t i = 0; i < g.types.size(); ++i)
    for (size_t j = 0; j < g.types[i].strategies.size(); ++j) {
      if (f[i][j] == 0) continue;
      Rational own = congestion::strategy_cost(g, f, static_cast<int>(i),
                                               static_cast<int>(j));
      for (size_t j2 = 0; j2 < g.types[i].strategies.size(); ++j2) {
        Rational diff = own - congestion::strategy_cost(
                                  g, f, static_cast<int>(i),
                                  static_cast<int>(j2));
        if (diff > delta) delta = diff;
      }
    }
  if (eq.grid_tolerance < delta)
    throw Error("flow is not a Wardrop equilibrium within its reported "
                "tolerance");

  auto target = configlp::augmented_lp(g, r, caps);

  DualCertificate cert;
  cert.recipe = "augmentation(r=" + poadual::to_string(r) + ")";
  cert.identity_recipe = false;

  for (size_t i = 0; i < g.types.size(); ++i) {
    std::optional<Rational> alpha;
    for (size_t j = 0; j < g.types[i].strategies.size(); ++j) {
      if (f[i][j] == 0) continue;
      Rational c = congestion::strategy_cost(g, f, static_cast<int>(i),
                                             static_cast<int>(j));
      if (!alpha || c < *alpha) alpha = c;
    }
    if (!alpha) throw Error("type with empty support");
    cert.assignment["demand(" + std::to_string(i) + ")"] = *alpha;
  }
  for (const auto& con : target.built.program.constraints()) {
    if (con.name.rfind("couple(", 0) != 0) continue;
    int i;
    long k;
    char ebuf[128];
    if (sscanf(con.name.c_str(), "couple(%d,%ld,%127[^)])", &i, &k, ebuf) != 3)
      throw Error("internal: unparsable coupling row " + con.name);
    std::string ename(ebuf);
    auto eit = std::find(g.resources.begin(), g.resources.end(), ename);
    size_t e = static_cast<size_t>(eit - g.resources.begin());
    cert.assignment[con.name] = g.epsilon * k * g.costs[e].eval(load[e]);
  }
  for (size_t e = 0; e < g.resources.size(); ++e) {
    std::optional<Rational> beta;
    for (const auto& config : target.configs[e]) {
      Rational w = config.total(g.epsilon);
      Rational value = w * g.costs[e].eval(w) - w * g.costs[e].eval(load[e]);
      if (!beta || value < *beta) beta = value;
    }
    cert.assignment["config(" + g.resources[e] + ")"] =
        beta ? *beta : Rational(0);
  }

  finish(cert, target.built, std::nullopt);
  if (!cert.residuals.feasible)
    throw Error("internal: augmentation certificate must be feasible by "
                "construction (violated at " +
                cert.residuals.worst_name + ")");

  Rational eq_cost = congestion::nonatomic_social_cost(g, f);
  if (cert.dual_objective < r * eq_cost)
    throw Error("augmentation bound failed: dual objective " +
                poadual::to_string(cert.dual_objective) + " < r*cost " +
                poadual::to_string(r * eq_cost) +
                " (grid slack delta=" + poadual::to_string(delta) + ")");
  if (eq_cost > 0) cert.certified_ratio = cert.dual_objective / eq_cost;
  cert.diagnostics["equilibrium-cost"] = eq_cost;
  cert.diagnostics["wardrop-delta"] = delta;
  cert.diagnostics["r"] = r;
  return cert;
}

Rational certified_poa_bound(const DualCertificate& cert,
                             const Rational& eq_cost) {
  if (!cert.feasible()) throw Error("certificate is infeasible");
  if (cert.dual_objective <= 0)
    throw Error("certificate has non-positive dual objective");
  Rational ratio = eq_cost / cert.dual_objective;
  if (cert.identity_recipe) {
    if (!cert.lambda || !cert.mu)
      throw Error("identity recipe without parameters");
    Rational expected = *cert.lambda / (Rational(1) - *cert.mu);
    auto it = cert.diagnostics.find("equilibrium-cost");
    if (it != cert.diagnostics.end() && it->second == eq_cost &&
        ratio != expected)
      throw Error("internal: certified bound does not match lambda/(1-mu)");
  }
  return ratio;
}

}  // namespace poadual::certificates
