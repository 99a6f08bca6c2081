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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "poadual/auctions.hpp"
#include "poadual/certificates.hpp"
#include "poadual/config_lp.hpp"
#include "poadual/equilibria.hpp"
#include "poadual/instance_io.hpp"
#include "poadual/report.hpp"
#include "poadual/smoothness.hpp"

namespace py = pybind11;

namespace {

using namespace poadual;
using report::Json;

io::Instance parse(const std::string& text) {
  return io::parse_instance(text);
}

equilibria::Caps make_caps(long long max_profiles, long long max_configs) {
  equilibria::Caps caps;
  if (max_profiles > 0) caps.max_profiles = max_profiles;
  if (max_configs > 0) caps.max_configs = max_configs;
  return caps;
}

// Results cross the boundary as canonical JSON text; the python package
// turns them into dicts. Rationals stay exact "p/q" strings throughout.
std::string poa_report(const std::string& text, long long max_profiles,
                       long long max_configs) {
  auto caps = make_caps(max_profiles, max_configs);
  auto instance = parse(text);
  Json out;
  if (auto* g = std::get_if<congestion::AtomicGame>(&instance)) {
    out["kind"] = "atomic";
    out["optimum"] = report::rational(equilibria::optimum_cost(*g, caps));
    auto cce = equilibria::worst_cce(*g, caps);
    out["worst_cce_cost"] = report::rational(cce.cost);
    out["poa_cce"] = report::rational(equilibria::empirical_poa(
        *g, equilibria::Notion::CoarseCorrelated, caps));
    auto nash = equilibria::pure_nash_all(*g, caps);
    out["pure_nash_count"] = nash.size();
    if (!nash.empty())
      out["poa_pure"] = report::rational(
          equilibria::empirical_poa(*g, equilibria::Notion::Pure, caps));
  } else if (auto* na = std::get_if<congestion::NonAtomicGame>(&instance)) {
    out["kind"] = "nonatomic";
    out["optimum"] =
        report::rational(equilibria::optimum_flow_cost(*na, caps));
    auto eq = equilibria::wardrop_equilibrium(*na, caps);
    out["wardrop_cost"] = report::rational(eq.cost);
    out["poa_wardrop"] = report::rational(equilibria::empirical_poa(*na, caps));
  } else if (auto* sp = std::get_if<congestion::SplittableGame>(&instance)) {
    out["kind"] = "splittable";
    out["optimum"] =
        report::rational(equilibria::optimum_split_cost(*sp, caps));
    auto cce = equilibria::splittable_worst_cce(*sp, caps);
    out["worst_cce_cost"] = report::rational(cce.cost);
    out["poa_cce"] = report::rational(equilibria::empirical_poa(
        *sp, equilibria::Notion::CoarseCorrelated, caps));
  } else {
    throw Error("poa needs a congestion instance");
  }
  return report::to_json_text(out);
}

std::string certify_report(const std::string& text, const std::string& lambda,
                           const std::string& mu, long long max_profiles,
                           long long max_configs) {
  auto caps = make_caps(max_profiles, max_configs);
  auto instance = parse(text);
  Json out;
  if (auto* g = std::get_if<congestion::AtomicGame>(&instance)) {
    Rational l, m;
    if (!lambda.empty() && !mu.empty()) {
      l = parse_rational(lambda);
      m = parse_rational(mu);
    } else {
      auto best = smoothness::robust_poa_search_game(*g, caps);
      if (!best.verified) throw Error("no feasible smoothness pair");
      l = best.lambda;
      m = best.mu;
      out["searched_lambda"] = report::rational(l);
      out["searched_mu"] = report::rational(m);
    }
    auto cce = equilibria::worst_cce(*g, caps);
    auto cert = certificates::smooth_duals(*g, *cce.distribution, l, m, caps);
    out["equilibrium_cost"] = report::rational(cce.cost);
    out["certificate"] = report::certificate_json(cert);
    if (cert.feasible())
      out["certified_poa_bound"] = report::rational(
          certificates::certified_poa_bound(cert, cce.cost));
  } else if (auto* na = std::get_if<congestion::NonAtomicGame>(&instance)) {
    auto eq = equilibria::wardrop_equilibrium(*na, caps);
    auto cert = certificates::nonatomic_duals(*na, eq, caps);
    out["equilibrium_cost"] = report::rational(eq.cost);
    out["certificate"] = report::certificate_json(cert);
  } else {
    throw Error("certify supports atomic and non-atomic instances here");
  }
  return report::to_json_text(out);
}

std::string pigou_report(const std::string& text, const std::string& lo,
                         const std::string& hi, const std::string& step) {
  auto instance = parse(text);
  auto grid = smoothness::make_grid(parse_rational(lo), parse_rational(hi),
                                    parse_rational(step));
  const std::vector<std::string>* names = nullptr;
  const std::vector<congestion::CostFunction>* costs = nullptr;
  if (auto* g = std::get_if<congestion::AtomicGame>(&instance)) {
    names = &g->resources;
    costs = &g->costs;
  } else if (auto* na = std::get_if<congestion::NonAtomicGame>(&instance)) {
    names = &na->resources;
    costs = &na->costs;
  } else if (auto* sp = std::get_if<congestion::SplittableGame>(&instance)) {
    names = &sp->resources;
    costs = &sp->costs;
  } else {
    throw Error("pigou needs a congestion instance");
  }
  Json out;
  Rational worst = 1;
  Json per = Json::object();
  for (size_t e = 0; e < names->size(); ++e) {
    auto r = smoothness::pigou_bound((*costs)[e], grid);
    per[(*names)[e]] = report::pigou_json(r);
    if (r.bound > worst) worst = r.bound;
  }
  out["per_resource"] = per;
  out["bound"] = report::rational(worst);
  return report::to_json_text(out);
}

std::string auction_report(const std::string& text) {
  auto instance = parse(text);
  auto* auc = std::get_if<auctions::BayesianAuction>(&instance);
  if (!auc) throw Error("auction analysis needs an auction instance");
  auto bne = auctions::find_pure_bne(*auc);
  if (!bne) throw Error("no pure Bayes-Nash equilibrium found");
  Json out;
  out["equilibrium_welfare"] =
      report::rational(auctions::expected_welfare(*auc, *bne));
  out["optimal_welfare"] = report::rational(auc->expected_opt_welfare());
  auto cert = auctions::feldman_fu_duals(*auc, *bne);
  out["certificate"] = report::certificate_json(cert);
  return report::to_json_text(out);
}

std::string no_envy_report(const std::string& text, int horizon,
                           long long seed, const std::string& r) {
  auto instance = parse(text);
  auto* auc = std::get_if<auctions::BayesianAuction>(&instance);
  if (!auc) throw Error("no-envy needs an auction instance");
  auto trace = auctions::no_envy_trace(
      *auc, auctions::Learner::MultiplicativeWeights, horizon, seed);
  auto check = auctions::no_envy_theorem_check(*auc, trace,
                                               parse_rational(r));
  Json out;
  out["average_welfare"] = report::rational(check.avg_welfare);
  out["optimal_welfare"] = report::rational(check.opt);
  Json eps = Json::array();
  for (const auto& e : check.eps) eps.push_back(report::rational(e));
  out["envy_rates"] = eps;
  out["welfare_bound"] = report::rational(check.bound);
  out["theorem_holds"] = check.holds;
  return report::to_json_text(out);
}

std::string round_trip(const std::string& text) {
  return io::emit_instance(io::parse_instance(text));
}

std::string solve_lp_text(const std::string& text) {
  auto program = lp::from_text(text);
  auto sol = lp::solve(program);
  Json out;
  out["status"] = lp::to_string(sol.status);
  if (sol.status == lp::SolveStatus::Optimal) {
    out["objective"] = report::rational(sol.objective);
    Json primal = Json::object(), dual = Json::object();
    for (const auto& [k, v] : sol.primal) primal[k] = report::rational(v);
    for (const auto& [k, v] : sol.dual) dual[k] = report::rational(v);
    out["primal"] = primal;
    out["dual"] = dual;
  }
  return report::to_json_text(out);
}

}  // namespace

PYBIND11_MODULE(_poadual, m) {
  m.doc() = "exact price-of-anarchy certificates via configuration LP duality";

  m.def("poa_json", &poa_report, py::arg("instance_text"),
        py::arg("max_profiles") = 0, py::arg("max_configs") = 0,
        "Equilibria, optimum and empirical PoA of a congestion instance.");
  m.def("certify_json", &certify_report, py::arg("instance_text"),
        py::arg("lambda_") = "", py::arg("mu") = "",
        py::arg("max_profiles") = 0, py::arg("max_configs") = 0,
        "Dual certificate for a congestion instance.");
  m.def("pigou_json", &pigou_report, py::arg("instance_text"),
        py::arg("lo") = "0", py::arg("hi") = "2", py::arg("step") = "1/64",
        "Pigou bound of every cost function on a rational grid.");
  m.def("auction_certify_json", &auction_report, py::arg("instance_text"),
        "Pure BNE search plus the Feldman-Fu dual certificate.");
  m.def("no_envy_json", &no_envy_report, py::arg("instance_text"),
        py::arg("horizon") = 100, py::arg("seed") = 0, py::arg("r") = "1",
        "No-envy learning trace and the welfare theorem check.");
  m.def("round_trip", &round_trip, py::arg("instance_text"),
        "Parse and canonically re-emit an instance file.");
  m.def("solve_lp_json", &solve_lp_text, py::arg("lp_text"),
        "Solve an LP in the line-oriented text format, exactly.");
}
