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
//
// Acceptance suite: every criterion below is exercised end to end with the
// exact tolerances stated; one PASS/FAIL line is printed per criterion.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "poadual/auctions.hpp"
#include "poadual/certificates.hpp"
#include "poadual/config_lp.hpp"
#include "poadual/equilibria.hpp"
#include "poadual/instance_io.hpp"
#include "poadual/smoothness.hpp"

using namespace poadual;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void verdict(int number, const std::string& name, bool pass,
             const std::string& detail = "") {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << number
            << ": " << name;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << std::endl;
  if (!pass) ++failures;
}

template <typename F>
void criterion(int number, const std::string& name, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    verdict(number, name, false, std::string("exception: ") + e.what());
  }
}

congestion::AtomicGame random_affine_game(std::mt19937_64& rng) {
  auto pick = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % (hi - lo + 1));
  };
  congestion::AtomicGame g;
  int n_resources = pick(1, 4);
  for (int e = 0; e < n_resources; ++e) {
    g.resources.push_back("r" + std::to_string(e));
    g.costs.push_back(congestion::CostFunction::polynomial(
        {Rational(pick(0, 3)), Rational(pick(0, 3))}));
  }
  int n_players = pick(1, 3);
  for (int i = 0; i < n_players; ++i) {
    congestion::AtomicPlayer p;
    p.name = "p" + std::to_string(i);
    p.weight = 1;
    int n_strategies = pick(1, 3);
    for (int j = 0; j < n_strategies; ++j) {
      std::vector<int> strat;
      for (int e = 0; e < n_resources; ++e)
        if (rng() % 2) strat.push_back(e);
      if (strat.empty()) strat.push_back(pick(0, n_resources - 1));
      p.strategies.push_back(strat);
    }
    g.players.push_back(std::move(p));
  }
  g.validate();
  return g;
}

congestion::AtomicGame make_g1() {
  congestion::AtomicGame g;
  g.resources = {"e1", "e2"};
  g.costs = {congestion::CostFunction::polynomial({0, 1}),
             congestion::CostFunction::polynomial({0, 1})};
  g.players = {congestion::AtomicPlayer{"p1", 1, {{0}, {1}}},
               congestion::AtomicPlayer{"p2", 1, {{0}, {1}}}};
  return g;
}

congestion::NonAtomicGame make_pigou(const Rational& epsilon) {
  congestion::NonAtomicGame g;
  g.epsilon = epsilon;
  g.resources = {"top", "bottom"};
  g.costs = {congestion::CostFunction::polynomial({1}),
             congestion::CostFunction::polynomial({0, 1})};
  g.types = {congestion::PlayerType{
      "t1", static_cast<long>(rational_floor(1 / epsilon)), {{0}, {1}}}};
  return g;
}

auctions::AuctionType scalar_type(const std::string& label,
                                  const Rational& prior,
                                  const Rational& value) {
  return auctions::AuctionType{label, prior,
                               auctions::Valuation::make(1, {0, value})};
}

std::string cli_path;
std::string instances_dir;

bool run_cli_twice_identical(const std::string& args) {
  namespace fs = std::filesystem;
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / "poadual-acceptance";
  fs::create_directories(dir);
  fs::path a = dir / ("run" + std::to_string(counter) + "a.json");
  fs::path b = dir / ("run" + std::to_string(counter) + "b.json");
  ++counter;
  for (const fs::path& out : {a, b}) {
    std::string cmd = cli_path + " " + args + " --format json --out " +
                      out.string();
    int rc = std::system(cmd.c_str());
    if (rc != 0) {
      std::cout << "  (command failed rc=" << rc << ": " << cmd << ")\n";
      return false;
    }
  }
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str() && !sa.str().empty();
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--cli") cli_path = argv[i + 1];
    if (flag == "--instances") instances_dir = argv[i + 1];
  }

  const Rational lambda(5, 3), mu(1, 3);

  // ------------------------------------------------------------------
  criterion(1, "weak-duality sandwich on 100 random affine games", [&] {
    auto started = Clock::now();
    std::mt19937_64 rng(20260811);
    bool ok = true;
    std::string detail;
    int with_positive_opt = 0;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      auto g = random_affine_game(rng);
      auto cce = equilibria::worst_cce(g);
      Rational opt = equilibria::optimum_cost(g);
      Rational profile_opt =
          lp::solve(configlp::profile_lp(g).built.program).objective;
      Rational resource_opt =
          lp::solve(configlp::resource_lp(g).built.program).objective;
      auto smooth =
          certificates::smooth_duals(g, *cce.distribution, lambda, mu);
      auto atomic =
          certificates::atomic_duals(g, *cce.distribution, lambda, mu);
      if (opt > 0) ++with_positive_opt;
      // Every unweighted affine game is (5/3,1/3)-smooth, so both
      // constructed certificates must be feasible, and the exact chain
      // dual <= LP <= integer OPT <= worst CCE must hold with no slack
      // tolerance anywhere.
      ok = smooth.feasible() && atomic.feasible() &&
           smooth.dual_objective <= profile_opt &&
           atomic.dual_objective <= resource_opt &&
           resource_opt <= profile_opt && profile_opt <= opt &&
           opt <= cce.cost;
      if (!ok) detail = "chain broken on trial " + std::to_string(trial);
    }
    auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
                       Clock::now() - started)
                       .count();
    if (seconds >= 60) {
      ok = false;
      detail = "took " + std::to_string(seconds) + "s (budget 60s)";
    }
    verdict(1, "weak-duality sandwich on 100 random affine games", ok,
            ok ? std::to_string(with_positive_opt) +
                     " games with positive OPT, " + std::to_string(seconds) +
                     "s"
               : detail);
  });

  // ------------------------------------------------------------------
  criterion(2, "dual objective identity and certified bound", [&] {
    std::mt19937_64 rng(20260811);  // same stream: same instances as (1)
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      auto g = random_affine_game(rng);
      auto cce = equilibria::worst_cce(g);
      auto smooth =
          certificates::smooth_duals(g, *cce.distribution, lambda, mu);
      auto atomic =
          certificates::atomic_duals(g, *cce.distribution, lambda, mu);
      Rational identity = (Rational(1) - mu) / lambda * cce.cost;
      ok = smooth.dual_objective == identity &&
           atomic.dual_objective == identity;
      if (ok && cce.cost > 0) {
        ok = certificates::certified_poa_bound(smooth, cce.cost) ==
                 lambda / (Rational(1) - mu) &&
             certificates::certified_poa_bound(atomic, cce.cost) ==
                 lambda / (Rational(1) - mu);
      }
    }
    verdict(2, "dual objective identity and certified bound", ok);
  });

  // ------------------------------------------------------------------
  criterion(3, "affine atomic PoA at 5/2 via resource smoothness", [&] {
    auto linear = congestion::CostFunction::polynomial({0, 1});
    std::vector<Rational> unit{Rational(0), Rational(1)};  // loads reach 4
    auto best = smoothness::robust_poa_search_resource(linear, 3, unit);
    bool ok = best.verified && best.ratio() <= Rational(5, 2);
    auto classic =
        smoothness::check_resource_smooth(linear, lambda, mu, 3, unit);
    ok = ok && classic.verified;
    auto g1 = make_g1();
    auto cce = equilibria::worst_cce(g1);
    ok = ok && cce.cost == Rational(3);
    Rational poa =
        equilibria::empirical_poa(g1, equilibria::Notion::CoarseCorrelated);
    ok = ok && poa == Rational(3, 2) && poa <= Rational(5, 2);
    verdict(3, "affine atomic PoA at 5/2 via resource smoothness", ok,
            best.verified ? "best lattice ratio " +
                                poadual::to_string(best.ratio())
                          : "search failed");
  });

  // ------------------------------------------------------------------
  criterion(4, "Pigou bounds for x and x^2 on the 1/64 grid", [&] {
    auto grid = smoothness::make_grid(0, 2, Rational(1, 64));
    auto t0 = Clock::now();
    auto linear = smoothness::pigou_bound(
        congestion::CostFunction::polynomial({0, 1}), grid);
    auto linear_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         Clock::now() - t0)
                         .count();
    t0 = Clock::now();
    auto quad = smoothness::pigou_bound(
        congestion::CostFunction::polynomial({0, 0, 1}), grid);
    auto quad_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       Clock::now() - t0)
                       .count();
    bool ok = linear.bound >= Rational(4, 3) - Rational(1, 32) &&
              linear.bound <= Rational(4, 3);
    // Calculus oracle for x^2: v = u/sqrt(3), value (1 - 2*3^(-3/2))^(-1),
    // bracketed by 1625/1000 < value < 1626/1000.
    ok = ok && quad.bound >= Rational(1625, 1000) - Rational(1, 16) &&
         quad.bound <= Rational(1626, 1000);
    ok = ok && linear_ms < 5000 && quad_ms < 5000;
    verdict(4, "Pigou bounds for x and x^2 on the 1/64 grid", ok,
            "x: " + poadual::to_string(linear.bound) +
                ", x^2: " + poadual::to_string(quad.bound) + ", " +
                std::to_string(linear_ms) + "ms/" + std::to_string(quad_ms) +
                "ms");
  });

  // ------------------------------------------------------------------
  criterion(5, "non-atomic Pigou instance certificate", [&] {
    auto g = make_pigou(Rational(1, 4));
    auto eq = equilibria::wardrop_equilibrium(g);
    Rational opt = equilibria::optimum_flow_cost(g);
    bool ok = eq.cost == Rational(1) && opt == Rational(3, 4);
    ok = ok && equilibria::empirical_poa(g) == Rational(4, 3);
    auto cert = certificates::nonatomic_duals(g, eq);
    ok = ok && cert.feasible() && cert.certified_ratio.has_value();
    if (ok) {
      Rational excess = cert.diagnostics.at("pigou-excess");
      ok = *cert.certified_ratio <= Rational(4, 3) + excess;
    }
    verdict(5, "non-atomic Pigou instance certificate", ok,
            cert.certified_ratio
                ? "certified ratio " + poadual::to_string(*cert.certified_ratio)
                : "");
  });

  // ------------------------------------------------------------------
  criterion(6, "resource augmentation on Pigou with r = 1", [&] {
    auto g = make_pigou(Rational(1, 2));
    auto eq = equilibria::wardrop_equilibrium(g);
    Rational augmented_opt =
        lp::solve(configlp::augmented_lp(g, 1).built.program).objective;
    bool ok = eq.cost == Rational(1) && augmented_opt == Rational(7, 4) &&
              eq.cost <= augmented_opt;
    auto cert = certificates::augmentation_certificate(g, 1, eq);
    ok = ok && cert.feasible() && cert.dual_objective >= eq.cost;
    verdict(6, "resource augmentation on Pigou with r = 1", ok,
            "dual objective " + poadual::to_string(cert.dual_objective));
  });

  // ------------------------------------------------------------------
  criterion(7, "splittable dual-smoothness and certificate", [&] {
    auto linear = congestion::CostFunction::polynomial({0, 1});
    auto grid = smoothness::make_grid(0, 2, Rational(1, 2));
    auto best = smoothness::robust_poa_search_dual(linear, 2, grid);
    bool ok = best.verified;
    ok = ok &&
         smoothness::check_dual_smooth(linear, best.lambda, best.mu, 2, grid)
             .verified;
    congestion::SplittableGame g;
    g.epsilon = Rational(1, 2);
    g.resources = {"l1", "l2"};
    g.costs = {linear, linear};
    g.players = {congestion::SplittablePlayer{"p1", 1, {{0}, {1}}},
                 congestion::SplittablePlayer{"p2", 1, {{0}, {1}}}};
    g.validate();
    equilibria::EquilibriumReport sigma;
    sigma.split = congestion::SplitProfile{{Rational(1, 2), Rational(1, 2)},
                                           {Rational(1, 2), Rational(1, 2)}};
    auto cert = certificates::splittable_duals(g, sigma, best.lambda, best.mu);
    ok = ok && cert.feasible();
    auto cce = equilibria::splittable_worst_cce(g);
    Rational opt = equilibria::optimum_split_cost(g);
    ok = ok && cce.cost / opt <= best.ratio();
    verdict(7, "splittable dual-smoothness and certificate", ok,
            best.verified ? "pair (" + poadual::to_string(best.lambda) + "," +
                                poadual::to_string(best.mu) +
                                "), worst CCE/OPT " +
                                poadual::to_string(cce.cost / opt)
                          : "search failed");
  });

  // ------------------------------------------------------------------
  criterion(8, "second-price smooth-auction certificate at (1,1)", [&] {
    auto auc = auctions::make_simultaneous_auction(
        1, auctions::Mechanism::SecondPrice, {0, 1, 2}, {"a", "b"},
        {{scalar_type("lo", Rational(1, 2), 1),
          scalar_type("hi", Rational(1, 2), 2)},
         {scalar_type("lo", Rational(1, 2), 1),
          scalar_type("hi", Rational(1, 2), 2)}});
    // Truthful strategy map.
    std::vector<std::vector<int>> choice(2);
    for (int i = 0; i < 2; ++i)
      for (size_t v = 0; v < auc.types[i].size(); ++v) {
        auctions::BidVector want{{auc.types[i][v].valuation.of(1)}};
        auto it =
            std::find(auc.actions[i].begin(), auc.actions[i].end(), want);
        choice[i].push_back(
            static_cast<int>(it - auc.actions[i].begin()));
      }
    auto sigma = auctions::StrategyMap::pure(auc, choice);
    auto bne = auctions::check_bne(auc, sigma);
    bool ok = bne.is_bne && bne.worst_gain == 0;
    auto sc = auctions::check_auction_smooth(auc, 1, 1,
                                             smoothness::Kind::AuctionR15);
    ok = ok && sc.verified;
    auto cert = auctions::smooth_auction_duals(
        auc, sigma, 1, 1, smoothness::Kind::AuctionR15, sc);
    ok = ok && cert.feasible() &&
         *cert.certified_ratio == Rational(1, 2);
    Rational lp_opt =
        lp::solve(auctions::bayesian_config_lp(auc).built.program).objective;
    Rational welfare = auctions::expected_welfare(auc, sigma);
    ok = ok && welfare * 2 >= lp_opt;
    verdict(8, "second-price smooth-auction certificate at (1,1)", ok,
            "welfare " + poadual::to_string(welfare) + ", LP optimum " +
                poadual::to_string(lp_opt));
  });

  // ------------------------------------------------------------------
  criterion(9, "Feldman-Fu certificates across the auction corpus", [&] {
    struct Case {
      std::string name;
      auctions::BayesianAuction auc;
    };
    std::vector<Case> corpus;
    corpus.push_back({"second-price 1 item, values (1,1), grid {0,1/2,1}",
                      auctions::make_simultaneous_auction(
                          1, auctions::Mechanism::SecondPrice,
                          {0, Rational(1, 2), 1}, {"a", "b"},
                          {{scalar_type("v", 1, 1)},
                           {scalar_type("v", 1, 1)}})});
    corpus.push_back({"first-price 1 item, values (1,2), grid {0,1/2,1,3/2,2}",
                      auctions::make_simultaneous_auction(
                          1, auctions::Mechanism::FirstPrice,
                          {0, Rational(1, 2), 1, Rational(3, 2), 2},
                          {"a", "b"},
                          {{scalar_type("v", 1, 1)},
                           {scalar_type("v", 1, 2)}})});
    corpus.push_back(
        {"second-price 2 items, additive values",
         auctions::make_simultaneous_auction(
             2, auctions::Mechanism::SecondPrice, {0, Rational(1, 2), 1},
             {"a", "b"},
             {{auctions::AuctionType{
                  "v", 1, auctions::Valuation::additive({1, Rational(1, 2)})}},
              {auctions::AuctionType{
                  "v", 1,
                  auctions::Valuation::additive({Rational(1, 2), 1})}}},
             1, true)});
    corpus.push_back({"second-price 1 item, three bidders",
                      auctions::make_simultaneous_auction(
                          1, auctions::Mechanism::SecondPrice,
                          {0, Rational(1, 2), 1}, {"a", "b", "c"},
                          {{scalar_type("v", 1, 1)},
                           {scalar_type("v", 1, Rational(1, 2))},
                           {scalar_type("v", 1, 1)}})});
    bool ok = true;
    std::string detail;
    for (auto& c : corpus) {
      auto bne = auctions::find_pure_bne(c.auc);
      if (!bne) {
        ok = false;
        detail = "no pure BNE for " + c.name;
        break;
      }
      // feldman_fu_duals fails loudly if any witness action is missing.
      auto cert = auctions::feldman_fu_duals(c.auc, *bne);
      Rational welfare = auctions::expected_welfare(c.auc, *bne);
      Rational opt = c.auc.expected_opt_welfare();
      Rational fraction = c.auc.mechanism == auctions::Mechanism::FirstPrice
                              ? Rational(1, 2)
                              : Rational(1, 4);
      if (!cert.feasible() || welfare < fraction * opt) {
        ok = false;
        detail = "certificate or welfare bound failed for " + c.name;
        break;
      }
    }
    verdict(9, "Feldman-Fu certificates across the auction corpus", ok,
            ok ? std::to_string(corpus.size()) + " auctions" : detail);
  });

  // ------------------------------------------------------------------
  criterion(10, "no-envy welfare theorem on every trace", [&] {
    auto auc = auctions::make_simultaneous_auction(
        1, auctions::Mechanism::SecondPrice, {0, 1, 2}, {"a", "b"},
        {{scalar_type("v", 1, 1)}, {scalar_type("v", 1, 2)}});
    bool ok = true;
    std::string detail;
    for (long long seed = 0; seed < 10 && ok; ++seed) {
      std::vector<Rational> eps_100, eps_1000;
      for (int horizon : {100, 1000}) {
        auto trace = auctions::no_envy_trace(
            auc, auctions::Learner::MultiplicativeWeights, horizon, seed);
        auto check = auctions::no_envy_theorem_check(auc, trace, 1);
        if (!check.holds) {
          ok = false;
          detail = "welfare bound failed at seed " + std::to_string(seed) +
                   ", T=" + std::to_string(horizon);
          break;
        }
        (horizon == 100 ? eps_100 : eps_1000) = check.eps;
      }
      if (!ok) break;
      for (size_t i = 0; i < eps_100.size(); ++i)
        if (eps_1000[i] > eps_100[i]) {
          ok = false;
          detail = "eps(1000) > eps(100) for player " + std::to_string(i) +
                   " at seed " + std::to_string(seed);
        }
    }
    verdict(10, "no-envy welfare theorem on every trace", ok, detail);
  });

  // ------------------------------------------------------------------
  criterion(11, "CLI determinism: byte-identical JSON reports", [&] {
    if (cli_path.empty() || instances_dir.empty()) {
      verdict(11, "CLI determinism: byte-identical JSON reports", false,
              "--cli/--instances not provided");
      return;
    }
    auto inst = [&](const std::string& f) { return instances_dir + "/" + f; };
    std::vector<std::string> runs = {
        "poa --instance " + inst("g1.game"),
        "certify --instance " + inst("g1.game") + " --lambda 5/3 --mu 1/3",
        "smoothness --instance " + inst("g1.game"),
        "pigou --instance " + inst("pigou.game"),
        "certify --instance " + inst("pigou.game"),
        "augment --instance " + inst("pigou.game") + " --r 1 --epsilon 1/2",
        "certify --instance " + inst("two_links_splittable.game"),
        "auction-certify --instance " + inst("second_price_2x2.auction") +
            " --variant r15",
        "auction-certify --instance " + inst("simultaneous_2item.auction"),
        "no-envy --instance " + inst("learning_1item.auction") +
            " --horizon 100 --seed 3",
    };
    bool ok = true;
    std::string detail;
    for (const auto& run : runs)
      if (!run_cli_twice_identical(run)) {
        ok = false;
        detail = "non-deterministic or failing: " + run;
        break;
      }
    verdict(11, "CLI determinism: byte-identical JSON reports", ok,
            ok ? std::to_string(runs.size()) + " analyses" : detail);
  });

  std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                              : std::to_string(failures) + " CRITERIA FAILED")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
