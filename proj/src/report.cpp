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

#include "poadual/report.hpp"

#include <sstream>

namespace poadual::report {

Json rational(const Rational& r) { return poadual::to_string(r); }

std::string fnv1a_digest(const std::string& bytes) {
  unsigned long long hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

Json caps_json(const equilibria::Caps& caps) {
  Json j;
  j["max_players"] = caps.max_players;
  j["max_strategies"] = caps.max_strategies;
  j["max_profiles"] = caps.max_profiles;
  j["max_resources"] = caps.max_resources;
  j["max_configs"] = caps.max_configs;
  return j;
}

Json residuals_json(const lp::ResidualReport& r) {
  Json j;
  j["feasible"] = r.feasible;
  j["worst_violation"] = rational(r.worst_violation);
  j["worst_name"] = r.worst_name;
  return j;
}

Json equilibrium_json(const equilibria::EquilibriumReport& r) {
  Json j;
  j["notion"] = equilibria::to_string(r.notion);
  j["cost"] = rational(r.cost);
  j["deviation_slack"] = rational(r.deviation_slack);
  j["grid_tolerance"] = rational(r.grid_tolerance);
  if (r.profile) {
    Json p = Json::array();
    for (int s : *r.profile) p.push_back(s);
    j["profile"] = p;
  }
  if (r.distribution) {
    Json support = Json::array();
    for (const auto& [s, q] : r.distribution->support) {
      Json entry;
      Json p = Json::array();
      for (int x : s) p.push_back(x);
      entry["profile"] = p;
      entry["probability"] = rational(q);
      support.push_back(entry);
    }
    j["distribution"] = support;
  }
  if (r.flow) {
    Json f = Json::array();
    for (const auto& amounts : *r.flow) {
      Json row = Json::array();
      for (const auto& a : amounts) row.push_back(rational(a));
      f.push_back(row);
    }
    j["flow"] = f;
  }
  if (r.split) {
    Json u = Json::array();
    for (const auto& amounts : *r.split) {
      Json row = Json::array();
      for (const auto& a : amounts) row.push_back(rational(a));
      u.push_back(row);
    }
    j["split"] = u;
  }
  return j;
}

Json certificate_json(const certificates::DualCertificate& c) {
  Json j;
  j["recipe"] = c.recipe;
  j["target"] = c.target_provenance;
  if (c.lambda) j["lambda"] = rational(*c.lambda);
  if (c.mu) j["mu"] = rational(*c.mu);
  j["feasible"] = c.feasible();
  j["worst_violation"] = rational(c.residuals.worst_violation);
  j["worst_constraint"] = c.residuals.worst_name;
  j["dual_objective"] = rational(c.dual_objective);
  if (c.certified_ratio) j["certified_ratio"] = rational(*c.certified_ratio);
  Json diag;
  for (const auto& [k, v] : c.diagnostics) diag[k] = rational(v);
  j["diagnostics"] = diag;
  Json assign;
  for (const auto& [k, v] : c.assignment) assign[k] = rational(v);
  j["assignment"] = assign;
  return j;
}

Json smoothness_json(const smoothness::SmoothnessCertificate& c) {
  Json j;
  j["kind"] = smoothness::to_string(c.kind);
  j["verified"] = c.verified;
  if (c.verified) {
    j["lambda"] = rational(c.lambda);
    j["mu"] = rational(c.mu);
    j["ratio"] = rational(c.ratio());
  }
  j["verified_domain"] = c.verified_domain;
  if (c.witness) j["witness"] = *c.witness;
  if (c.deviations) {
    Json devs;
    for (const auto& [profile, dists] : *c.deviations) {
      Json per_player = Json::array();
      for (const auto& dist : dists) {
        Json d = Json::array();
        for (const auto& [a, p] : dist) {
          Json entry;
          entry["action"] = a;
          entry["mass"] = rational(p);
          d.push_back(entry);
        }
        per_player.push_back(d);
      }
      devs[profile] = per_player;
    }
    j["deviations"] = devs;
  }
  return j;
}

Json pigou_json(const smoothness::PigouResult& r) {
  Json j;
  j["bound"] = rational(r.bound);
  j["argmax_u"] = rational(r.argmax_u);
  j["argmax_v"] = rational(r.argmax_v);
  j["degenerate"] = r.degenerate;
  return j;
}

std::string to_json_text(const Json& report) { return report.dump(2) + "\n"; }

namespace {

void render(const Json& node, const std::string& prefix, std::ostream& out) {
  if (node.is_object()) {
    for (const auto& [key, value] : node.items()) {
      if (value.is_object() || value.is_array()) {
        out << prefix << key << ":\n";
        render(value, prefix + "  ", out);
      } else {
        out << prefix << key << ": " << value.dump() << "\n";
      }
    }
  } else if (node.is_array()) {
    int i = 0;
    for (const auto& value : node) {
      if (value.is_object() || value.is_array()) {
        out << prefix << "- [" << i << "]\n";
        render(value, prefix + "  ", out);
      } else {
        out << prefix << "- " << value.dump() << "\n";
      }
      ++i;
    }
  } else {
    out << prefix << node.dump() << "\n";
  }
}

}  // namespace

std::string to_human_text(const Json& report) {
  std::ostringstream out;
  render(report, "", out);
  return out.str();
}

}  // namespace poadual::report
