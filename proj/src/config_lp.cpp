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

#include "poadual/config_lp.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace poadual::configlp {

using congestion::AtomicGame;
using congestion::NonAtomicGame;
using congestion::Profile;
using congestion::SplittableGame;
using equilibria::Caps;

namespace {

std::string join_ints(const std::vector<int>& xs, char sep) {
  std::ostringstream out;
  for (size_t i = 0; i < xs.size(); ++i) out << (i ? std::string(1, sep) : "") << xs[i];
  return out.str();
}

std::string couples_text(const std::vector<std::pair<int, long>>& couples) {
  std::ostringstream out;
  out << "{";
  for (size_t i = 0; i < couples.size(); ++i)
    out << (i ? "," : "") << "(" << couples[i].first << "," << couples[i].second
        << ")";
  out << "}";
  return out.str();
}

}  // namespace

std::string ProfileProgram::x_name(int player, int strategy) const {
  return "x(" + std::to_string(player) + "," + std::to_string(strategy) + ")";
}
std::string ResourceProgram::x_name(int player, int strategy) const {
  return "x(" + std::to_string(player) + "," + std::to_string(strategy) + ")";
}
std::string AmountProgram::x_name(int type, int strategy, long k) const {
  return "x(" + std::to_string(type) + "," + std::to_string(strategy) + "," +
         std::to_string(k) + ")";
}

Rational AmountConfig::total(const Rational& epsilon) const {
  Rational w = 0;
  for (const auto& [i, k] : couples) w += epsilon * k;
  return w;
}

ProfileProgram profile_lp(const AtomicGame& g, const Caps& caps) {
  g.validate();
  std::vector<int> counts;
  for (const auto& p : g.players)
    counts.push_back(static_cast<int>(p.strategies.size()));

  ProfileProgram out;
  out.built.provenance = "profile";
  lp::LinearProgram prog("profile-lp", lp::Sense::Minimize);

  for (size_t i = 0; i < g.players.size(); ++i)
    for (int j = 0; j < counts[i]; ++j) {
      std::string name = out.x_name(static_cast<int>(i), j);
      prog.add_variable(name);
      out.built.index[name] = "player " + g.players[i].name + " plays strategy " +
                              std::to_string(j);
    }

  out.profiles = equilibria::enumerate_profiles(counts, caps);
  lp::Row objective;
  for (const auto& s : out.profiles) {
    std::string name = "z(" + join_ints(s, '.') + ")";
    prog.add_variable(name);
    out.z_names.push_back(name);
    out.built.index[name] = "outcome profile (" + join_ints(s, ',') + ")";
    Rational c = congestion::atomic_total_cost(g, s);
    if (c != 0) objective.emplace_back(name, c);
  }

  for (size_t i = 0; i < g.players.size(); ++i) {
    lp::Row row;
    for (int j = 0; j < counts[i]; ++j)
      row.emplace_back(out.x_name(static_cast<int>(i), j), Rational(1));
    prog.add_constraint("choice(" + std::to_string(i) + ")", std::move(row),
                        lp::Relation::GreaterEqual, Rational(1));
  }
  {
    lp::Row row;
    for (const auto& name : out.z_names) row.emplace_back(name, Rational(1));
    prog.add_constraint("outcome", std::move(row), lp::Relation::Equal,
                        Rational(1));
  }
  for (size_t i = 0; i < g.players.size(); ++i)
    for (int j = 0; j < counts[i]; ++j) {
      lp::Row row;
      for (size_t p = 0; p < out.profiles.size(); ++p)
        if (out.profiles[p][i] == j)
          row.emplace_back(out.z_names[p], Rational(1));
      row.emplace_back(out.x_name(static_cast<int>(i), j), Rational(-1));
      prog.add_constraint(
          "couple(" + std::to_string(i) + "," + std::to_string(j) + ")",
          std::move(row), lp::Relation::Equal, Rational(0));
    }

  prog.set_objective(std::move(objective));
  prog.validate();
  out.built.program = std::move(prog);
  validate_shape(out.built);
  return out;
}

ResourceProgram resource_lp(const AtomicGame& g, const Caps& caps) {
  g.validate();
  const int n = static_cast<int>(g.players.size());
  if (n > caps.max_players) throw CapExceeded("players", n, caps.max_players);
  if (static_cast<int>(g.resources.size()) > caps.max_resources)
    throw CapExceeded("resources", g.resources.size(), caps.max_resources);
  long long n_subsets = 1LL << n;
  if (n_subsets * static_cast<long long>(g.resources.size()) > caps.max_configs)
    throw CapExceeded("configurations", n_subsets * g.resources.size(),
                      caps.max_configs);

  ResourceProgram out;
  out.built.provenance = "resource";
  lp::LinearProgram prog("resource-lp", lp::Sense::Minimize);

  for (int i = 0; i < n; ++i)
    for (size_t j = 0; j < g.players[i].strategies.size(); ++j) {
      std::string name = out.x_name(i, static_cast<int>(j));
      prog.add_variable(name);
      out.built.index[name] = "player " + g.players[i].name +
                              " plays strategy " + std::to_string(j);
    }

  lp::Row objective;
  out.subsets.resize(g.resources.size());
  out.z_names.resize(g.resources.size());
  for (size_t e = 0; e < g.resources.size(); ++e) {
    for (long long mask = 0; mask < n_subsets; ++mask) {
      std::vector<int> subset;
      Rational weight = 0;
      for (int i = 0; i < n; ++i)
        if (mask & (1LL << i)) {
          subset.push_back(i);
          weight += g.players[i].weight;
        }
      std::string name =
          "z(" + g.resources[e] + ",{" + join_ints(subset, ',') + "})";
      prog.add_variable(name);
      out.built.index[name] =
          "resource " + g.resources[e] + " used exactly by players {" +
          join_ints(subset, ',') + "}";
      out.subsets[e].push_back(subset);
      out.z_names[e].push_back(name);
      Rational c = weight * g.costs[e].eval(weight);
      if (c != 0) objective.emplace_back(name, c);
    }
  }

  for (int i = 0; i < n; ++i) {
    lp::Row row;
    for (size_t j = 0; j < g.players[i].strategies.size(); ++j)
      row.emplace_back(out.x_name(i, static_cast<int>(j)), Rational(1));
    prog.add_constraint("choice(" + std::to_string(i) + ")", std::move(row),
                        lp::Relation::GreaterEqual, Rational(1));
  }
  for (size_t e = 0; e < g.resources.size(); ++e) {
    lp::Row row;
    for (const auto& name : out.z_names[e]) row.emplace_back(name, Rational(1));
    prog.add_constraint("config(" + g.resources[e] + ")", std::move(row),
                        lp::Relation::Equal, Rational(1));
  }
  for (int i = 0; i < n; ++i)
    for (size_t e = 0; e < g.resources.size(); ++e) {
      lp::Row row;
      for (size_t t = 0; t < out.subsets[e].size(); ++t)
        if (std::binary_search(out.subsets[e][t].begin(),
                               out.subsets[e][t].end(), i))
          row.emplace_back(out.z_names[e][t], Rational(1));
      bool touches = false;
      for (size_t j = 0; j < g.players[i].strategies.size(); ++j) {
        const auto& strat = g.players[i].strategies[j];
        if (std::find(strat.begin(), strat.end(), static_cast<int>(e)) !=
            strat.end()) {
          row.emplace_back(out.x_name(i, static_cast<int>(j)), Rational(-1));
          touches = true;
        }
      }
      // Players that can never use e still pin their z-mass to subsets
      // without them, so the row stays (rhs 0 with empty x side).
      (void)touches;
      prog.add_constraint(
          "couple(" + std::to_string(i) + "," + g.resources[e] + ")",
          std::move(row), lp::Relation::Equal, Rational(0));
    }

  prog.set_objective(std::move(objective));
  prog.validate();
  out.built.program = std::move(prog);
  validate_shape(out.built);
  return out;
}

namespace {

// Achievable amount-configurations per resource: enumerate every valid
// per-type split of the demands and collect, for each resource, the sorted
// multiset of (type, amount-index) couples it induces. Types contribute one
// couple per strategy containing the resource, zero amounts included.
struct AmountModel {
  Rational epsilon;
  std::vector<std::string> resources;
  std::vector<const congestion::CostFunction*> costs;
  std::vector<std::vector<std::vector<int>>> strategies;  // per unit
  std::vector<long> units;                                // demand in eps units
  std::vector<std::string> unit_names;
};

std::vector<std::vector<long>> unit_compositions(long total, int parts) {
  std::vector<std::vector<long>> out;
  std::vector<long> current(parts, 0);
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

AmountProgram build_amount_program(const AmountModel& model,
                                   const std::string& provenance,
                                   const Caps& caps) {
  const size_t n = model.units.size();
  if (static_cast<int>(n) > caps.max_players)
    throw CapExceeded("players", n, caps.max_players);
  if (static_cast<int>(model.resources.size()) > caps.max_resources)
    throw CapExceeded("resources", model.resources.size(), caps.max_resources);

  std::vector<std::vector<std::vector<long>>> splits(n);
  long long n_assignments = 1;
  for (size_t i = 0; i < n; ++i) {
    splits[i] = unit_compositions(model.units[i],
                                  static_cast<int>(model.strategies[i].size()));
    n_assignments *= static_cast<long long>(splits[i].size());
    if (n_assignments > caps.max_profiles)
      throw CapExceeded("flow profiles", n_assignments, caps.max_profiles);
  }

  // Collect achievable configurations per resource.
  std::vector<std::set<AmountConfig>> reachable(model.resources.size());
  std::vector<size_t> pick(n, 0);
  while (true) {
    for (size_t e = 0; e < model.resources.size(); ++e) {
      AmountConfig config;
      for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < model.strategies[i].size(); ++j) {
          const auto& strat = model.strategies[i][j];
          if (std::find(strat.begin(), strat.end(), static_cast<int>(e)) !=
              strat.end())
            config.couples.emplace_back(static_cast<int>(i),
                                        splits[i][pick[i]][j]);
        }
      std::sort(config.couples.begin(), config.couples.end());
      reachable[e].insert(std::move(config));
    }
    int i = static_cast<int>(n) - 1;
    while (i >= 0 && pick[i] + 1 == splits[i].size()) pick[i--] = 0;
    if (i < 0) break;
    ++pick[i];
  }
  long long total_configs = 0;
  for (const auto& r : reachable) total_configs += static_cast<long long>(r.size());
  if (total_configs > caps.max_configs)
    throw CapExceeded("configurations", total_configs, caps.max_configs);

  AmountProgram out;
  out.built.provenance = provenance;
  out.epsilon = model.epsilon;
  lp::LinearProgram prog(provenance + "-lp", lp::Sense::Minimize);

  out.max_k = model.units;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < model.strategies[i].size(); ++j)
      for (long k = 0; k <= model.units[i]; ++k) {
        std::string name = out.x_name(static_cast<int>(i),
                                      static_cast<int>(j), k);
        prog.add_variable(name);
        out.built.index[name] = model.unit_names[i] + " puts amount " +
                                poadual::to_string(model.epsilon * k) +
                                " on strategy " + std::to_string(j);
      }

  lp::Row objective;
  out.configs.resize(model.resources.size());
  out.z_names.resize(model.resources.size());
  for (size_t e = 0; e < model.resources.size(); ++e) {
    for (const auto& config : reachable[e]) {
      std::string name =
          "z(" + model.resources[e] + "," + couples_text(config.couples) + ")";
      prog.add_variable(name);
      out.built.index[name] = "resource " + model.resources[e] +
                              " carries configuration " +
                              couples_text(config.couples);
      Rational w = config.total(model.epsilon);
      Rational c = w * model.costs[e]->eval(w);
      if (c != 0) objective.emplace_back(name, c);
      out.configs[e].push_back(config);
      out.z_names[e].push_back(name);
    }
  }

  for (size_t i = 0; i < n; ++i) {
    lp::Row row;
    for (size_t j = 0; j < model.strategies[i].size(); ++j)
      for (long k = 1; k <= model.units[i]; ++k)
        row.emplace_back(
            out.x_name(static_cast<int>(i), static_cast<int>(j), k),
            model.epsilon * k);
    prog.add_constraint("demand(" + std::to_string(i) + ")", std::move(row),
                        lp::Relation::GreaterEqual,
                        model.epsilon * model.units[i]);
  }
  for (size_t e = 0; e < model.resources.size(); ++e) {
    lp::Row row;
    for (const auto& name : out.z_names[e]) row.emplace_back(name, Rational(1));
    prog.add_constraint("config(" + model.resources[e] + ")", std::move(row),
                        lp::Relation::Equal, Rational(1));
  }
  for (size_t i = 0; i < n; ++i)
    for (long k = 0; k <= model.units[i]; ++k)
      for (size_t e = 0; e < model.resources.size(); ++e) {
        bool touches = false;
        lp::Row row;
        for (size_t t = 0; t < out.configs[e].size(); ++t) {
          long multiplicity = 0;
          for (const auto& [ci, ck] : out.configs[e][t].couples)
            if (ci == static_cast<int>(i) && ck == k) ++multiplicity;
          if (multiplicity > 0)
            row.emplace_back(out.z_names[e][t], Rational(multiplicity));
        }
        for (size_t j = 0; j < model.strategies[i].size(); ++j) {
          const auto& strat = model.strategies[i][j];
          if (std::find(strat.begin(), strat.end(), static_cast<int>(e)) !=
              strat.end()) {
            row.emplace_back(
                out.x_name(static_cast<int>(i), static_cast<int>(j), k),
                Rational(-1));
            touches = true;
          }
        }
        if (!touches) continue;  // type never uses e: vacuous row
        prog.add_constraint("couple(" + std::to_string(i) + "," +
                                std::to_string(k) + "," + model.resources[e] +
                                ")",
                            std::move(row), lp::Relation::Equal, Rational(0));
      }

  prog.set_objective(std::move(objective));
  prog.validate();
  out.built.program = std::move(prog);
  validate_shape(out.built);
  return out;
}

}  // namespace

AmountProgram nonatomic_lp(const NonAtomicGame& g, const Caps& caps) {
  g.validate();
  AmountModel model;
  model.epsilon = g.epsilon;
  model.resources = g.resources;
  for (const auto& c : g.costs) model.costs.push_back(&c);
  for (const auto& t : g.types) {
    model.strategies.push_back(t.strategies);
    model.units.push_back(t.m);
    model.unit_names.push_back("type " + t.name);
  }
  return build_amount_program(model, "nonatomic", caps);
}

AmountProgram splittable_lp(const SplittableGame& g, const Caps& caps) {
  g.validate();
  AmountModel model;
  model.epsilon = g.epsilon;
  model.resources = g.resources;
  for (const auto& c : g.costs) model.costs.push_back(&c);
  for (const auto& p : g.players) {
    model.strategies.push_back(p.strategies);
    model.units.push_back(
        static_cast<long>(rational_floor(p.weight / g.epsilon)));
    model.unit_names.push_back("player " + p.name);
  }
  return build_amount_program(model, "splittable", caps);
}

AmountProgram augmented_lp(const NonAtomicGame& g, const Rational& r,
                           const Caps& caps) {
  g.validate();
  if (r < 0) throw Error("augmentation factor r must be non-negative");
  AmountModel model;
  model.epsilon = g.epsilon;
  model.resources = g.resources;
  for (const auto& c : g.costs) model.costs.push_back(&c);
  for (const auto& t : g.types) {
    Rational scaled = (Rational(1) + r) * t.m;
    if (!is_integer(scaled))
      throw Error("augmented demand (1+r)*w is not on the epsilon grid");
    model.strategies.push_back(t.strategies);
    model.units.push_back(static_cast<long>(rational_floor(scaled)));
    model.unit_names.push_back("type " + t.name);
  }
  std::ostringstream tag;
  tag << "augmented(r=" << poadual::to_string(r) << ")";
  auto out = build_amount_program(model, tag.str(), caps);
  return out;
}

void validate_shape(const BuiltProgram& built) {
  const auto& prog = built.program;
  auto starts_with = [](const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
  };

  std::map<std::string, int> z_partitions;  // z var -> #partition rows
  for (const auto& con : prog.constraints()) {
    if (starts_with(con.name, "choice(") || starts_with(con.name, "demand(")) {
      if (con.rel != lp::Relation::GreaterEqual)
        throw Error("shape: choice row must be >=: " + con.name);
      for (const auto& [var, coef] : con.row) {
        if (!starts_with(var, "x("))
          throw Error("shape: choice row touches non-x variable: " + con.name);
        if (coef <= 0)
          throw Error("shape: choice coefficients must be positive: " +
                      con.name);
      }
    } else if (con.name == "outcome" || starts_with(con.name, "config(")) {
      if (con.rel != lp::Relation::Equal || con.rhs != 1)
        throw Error("shape: partition row must be '= 1': " + con.name);
      for (const auto& [var, coef] : con.row) {
        if (!starts_with(var, "z(") || coef != 1)
          throw Error("shape: partition row must sum z with unit "
                      "coefficients: " +
                      con.name);
        ++z_partitions[var];
      }
    } else if (starts_with(con.name, "couple(")) {
      if (con.rel != lp::Relation::Equal || con.rhs != 0)
        throw Error("shape: coupling row must be '= 0': " + con.name);
      for (const auto& [var, coef] : con.row) {
        if (starts_with(var, "z(")) {
          if (coef <= 0 || !is_integer(coef))
            throw Error("shape: coupling z coefficient must be a positive "
                        "multiplicity: " +
                        con.name);
        } else if (starts_with(var, "x(")) {
          if (coef != -1)
            throw Error("shape: coupling x coefficient must be -1: " +
                        con.name);
        } else {
          throw Error("shape: coupling row touches unknown variable: " +
                      con.name);
        }
      }
    } else {
      throw Error("shape: unexpected constraint family: " + con.name);
    }
  }
  for (const auto& v : prog.variables()) {
    if (starts_with(v.name, "z(")) {
      auto it = z_partitions.find(v.name);
      if (it == z_partitions.end() || it->second != 1)
        throw Error("shape: z variable must appear in exactly one partition "
                    "row: " +
                    v.name);
    }
    if (v.lower != Rational(0) || v.upper)
      throw Error("shape: variables must be >= 0: " + v.name);
  }
  for (const auto& [var, coef] : prog.objective())
    if (!starts_with(var, "z("))
      throw Error("shape: objective must touch only z variables");
}

std::string index_sidecar(const BuiltProgram& built) {
  std::ostringstream out;
  out << "# provenance: " << built.provenance << "\n";
  for (const auto& [name, meaning] : built.index)
    out << name << "\t" << meaning << "\n";
  return out.str();
}

}  // namespace poadual::configlp
