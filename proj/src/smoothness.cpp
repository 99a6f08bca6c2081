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

#include "poadual/smoothness.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace poadual::smoothness {

using congestion::AtomicGame;
using congestion::CostFunction;
using congestion::Profile;
using equilibria::Caps;

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Game:
      return "game";
    case Kind::Resource:
      return "resource";
    case Kind::DualSmooth:
      return "dual-smooth";
    case Kind::AuctionR15:
      return "auction-R15";
    case Kind::AuctionST13:
      return "auction-ST13";
  }
  return "?";
}

Rational SmoothnessCertificate::ratio() const {
  switch (kind) {
    case Kind::Game:
    case Kind::Resource:
    case Kind::DualSmooth:
      if (mu >= 1) throw Error("ratio undefined for mu >= 1");
      return lambda / (Rational(1) - mu);
    case Kind::AuctionR15:
      return lambda / (Rational(1) + mu);
    case Kind::AuctionST13:
      if (mu == 0) throw Error("ratio undefined for mu = 0");
      return lambda / mu;
  }
  throw Error("unknown kind");
}

std::vector<Rational> make_grid(const Rational& lo, const Rational& hi,
                                const Rational& step) {
  if (step <= 0) throw Error("grid step must be positive");
  if (hi < lo) throw Error("grid range is empty");
  std::vector<Rational> grid;
  for (Rational x = lo; x <= hi; x += step) grid.push_back(x);
  return grid;
}

namespace {

// A linear feasibility point: LHS <= lambda*X + mu*Y.
struct LinearPoint {
  Rational lhs;
  Rational x;
  Rational y;
  std::string label;
};

constexpr long kLatticeQ = 60;
const long long kLambdaMaxNum = 4 * kLatticeQ;  // lambda in [0, 4]

bool holds(const LinearPoint& p, const Rational& lambda, const Rational& mu) {
  return p.lhs <= lambda * p.x + mu * p.y;
}

SmoothnessCertificate verify_points(Kind kind, const Rational& lambda,
                                    const Rational& mu,
                                    const std::vector<LinearPoint>& points,
                                    std::string domain) {
  SmoothnessCertificate cert;
  cert.kind = kind;
  cert.lambda = lambda;
  cert.mu = mu;
  cert.verified_domain = std::move(domain);
  for (const auto& p : points) {
    if (!holds(p, lambda, mu)) {
      cert.verified = false;
      cert.witness = p.label + ": " + poadual::to_string(p.lhs) + " > " +
                     poadual::to_string(lambda) + "*" + poadual::to_string(p.x) +
                     " + " + poadual::to_string(mu) + "*" +
                     poadual::to_string(p.y);
      return cert;
    }
  }
  cert.verified = true;
  return cert;
}

// Lattice search: smallest lambda/(1-mu) with every point satisfied, scanning
// mu ascending and taking the least feasible lattice lambda per mu.
SmoothnessCertificate lattice_search(Kind kind,
                                     const std::vector<LinearPoint>& points,
                                     const std::string& domain) {
  std::optional<Rational> best_ratio;
  Rational best_lambda, best_mu;
  for (long t = 0; t < kLatticeQ; ++t) {
    Rational mu(t, kLatticeQ);
    Rational lambda_min = 0;
    bool feasible = true;
    for (const auto& p : points) {
      Rational residual = p.lhs - mu * p.y;
      if (p.x == 0) {
        if (residual > 0) {
          feasible = false;
          break;
        }
        continue;
      }
      Rational need = residual / p.x;
      if (need > lambda_min) lambda_min = need;
    }
    if (!feasible) continue;
    // Round lambda up to the lattice.
    Integer num = rational_floor(lambda_min * kLatticeQ);
    if (Rational(num, kLatticeQ) < lambda_min) num += 1;
    if (num > kLambdaMaxNum) continue;
    Rational lambda(num, kLatticeQ);
    Rational ratio = lambda / (Rational(1) - mu);
    // Strict improvement only: mu ascends, so ties resolve to the smallest mu.
    if (!best_ratio || ratio < *best_ratio) {
      best_ratio = ratio;
      best_lambda = lambda;
      best_mu = mu;
    }
  }
  SmoothnessCertificate cert;
  cert.kind = kind;
  cert.verified_domain = domain + "; lattice {p/60} in [0,4]x[0,1)";
  if (!best_ratio) {
    cert.verified = false;
    cert.witness = "no feasible lattice pair";
    return cert;
  }
  // Soundness: the winner re-passes the plain check.
  auto recheck = verify_points(kind, best_lambda, best_mu, points, domain);
  if (!recheck.verified)
    throw Error("internal: lattice search returned an unverified pair");
  cert.lambda = best_lambda;
  cert.mu = best_mu;
  cert.verified = true;
  return cert;
}

std::vector<LinearPoint> game_points(const AtomicGame& g, const Caps& caps) {
  g.validate();
  std::vector<int> counts;
  for (const auto& p : g.players)
    counts.push_back(static_cast<int>(p.strategies.size()));
  auto profiles = equilibria::enumerate_profiles(counts, caps);
  if (static_cast<long long>(profiles.size()) * profiles.size() >
      caps.max_configs)
    throw CapExceeded("profile pairs", profiles.size() * profiles.size(),
                      caps.max_configs);
  std::vector<LinearPoint> points;
  points.reserve(profiles.size() * profiles.size());
  std::vector<Rational> total(profiles.size());
  for (size_t p = 0; p < profiles.size(); ++p)
    total[p] = congestion::atomic_total_cost(g, profiles[p]);
  for (size_t a = 0; a < profiles.size(); ++a) {     // current s
    for (size_t b = 0; b < profiles.size(); ++b) {   // target s*
      Rational lhs = 0;
      for (size_t i = 0; i < g.players.size(); ++i) {
        Profile dev = profiles[a];
        dev[i] = profiles[b][i];
        lhs += congestion::atomic_player_cost(g, static_cast<int>(i), dev);
      }
      std::ostringstream label;
      label << "(s=" << a << ",s*=" << b << ")";
      points.push_back(LinearPoint{lhs, total[b], total[a], label.str()});
    }
  }
  return points;
}

// Enumerates the weight patterns behind the resource-smoothness inequality:
// per player a grid weight and a pair of flags (uses the resource now /
// belongs to the deviating set). The shifted argument of `conservative`
// dominates off-grid loads for non-decreasing costs.
std::vector<LinearPoint> resource_points(const CostFunction& ell, int n,
                                         const std::vector<Rational>& grid,
                                         bool conservative, const Caps& caps) {
  if (grid.empty()) throw Error("empty grid");
  if (n <= 0) throw Error("n must be positive");
  Rational step = 0;
  if (conservative) {
    auto sorted = grid;
    std::sort(sorted.begin(), sorted.end());
    step = sorted.size() > 1 ? Rational(sorted[1] - sorted[0]) : Rational(1);
    for (size_t i = 1; i + 1 < sorted.size(); ++i) {
      Rational gap = sorted[i + 1] - sorted[i];
      if (gap > step) step = gap;
    }
  }

  long long combos = 1;
  for (int i = 0; i < n; ++i) {
    combos *= static_cast<long long>(grid.size()) * 4;
    if (combos > caps.max_configs)
      throw CapExceeded("smoothness grid", combos, caps.max_configs);
  }

  std::vector<LinearPoint> points;
  std::vector<size_t> widx(n, 0);
  std::vector<int> flags(n, 0);  // bit0: uses now (a-side), bit1: deviator
  std::function<void(int)> rec = [&](int pos) {
    if (pos == n) {
      Rational load = 0, wt = 0;
      for (int i = 0; i < n; ++i) {
        if (flags[i] & 1) load += grid[widx[i]];
        if (flags[i] & 2) wt += grid[widx[i]];
      }
      Rational lhs = 0;
      std::ostringstream label;
      label << "w=(";
      for (int i = 0; i < n; ++i) {
        label << (i ? "," : "") << poadual::to_string(grid[widx[i]])
              << (flags[i] & 1 ? "a" : "") << (flags[i] & 2 ? "b" : "");
        if (flags[i] & 2) {
          Rational arg = load + grid[widx[i]];
          if (flags[i] & 1) arg -= grid[widx[i]];
          if (conservative) arg += step;
          lhs += grid[widx[i]] * ell.eval(arg);
        }
      }
      label << ")";
      points.push_back(
          LinearPoint{lhs, wt * ell.eval(wt), load * ell.eval(load),
                      label.str()});
      return;
    }
    for (widx[pos] = 0; widx[pos] < grid.size(); ++widx[pos])
      for (flags[pos] = 0; flags[pos] < 4; ++flags[pos]) rec(pos + 1);
  };
  rec(0);
  return points;
}

std::vector<LinearPoint> dual_points(const CostFunction& ell, int n,
                                     const std::vector<Rational>& grid,
                                     const Caps& caps) {
  if (!ell.has_derivative())
    throw Error("dual-smoothness needs a differentiable cost function");
  if (grid.empty()) throw Error("empty grid");
  long long combos = 1;
  for (int i = 0; i < 2 * n; ++i) {
    combos *= static_cast<long long>(grid.size());
    if (combos > caps.max_configs)
      throw CapExceeded("smoothness grid", combos, caps.max_configs);
  }
  std::vector<LinearPoint> points;
  std::vector<size_t> u(n, 0), v(n, 0);
  std::function<void(int, bool)> rec = [&](int pos, bool second) {
    if (pos == n) {
      if (!second) {
        rec(0, true);
        return;
      }
      Rational usum = 0, vsum = 0;
      for (int i = 0; i < n; ++i) {
        usum += grid[u[i]];
        vsum += grid[v[i]];
      }
      Rational lu = ell.eval(usum);
      Rational du = ell.derivative(usum);
      Rational lhs = vsum * lu;
      for (int i = 0; i < n; ++i)
        lhs += grid[u[i]] * (grid[v[i]] - grid[u[i]]) * du;
      std::ostringstream label;
      label << "u=(";
      for (int i = 0; i < n; ++i)
        label << (i ? "," : "") << poadual::to_string(grid[u[i]]);
      label << "),v=(";
      for (int i = 0; i < n; ++i)
        label << (i ? "," : "") << poadual::to_string(grid[v[i]]);
      label << ")";
      points.push_back(LinearPoint{lhs, vsum * ell.eval(vsum),
                                   usum * lu, label.str()});
      return;
    }
    auto& slot = second ? v : u;
    for (slot[pos] = 0; slot[pos] < grid.size(); ++slot[pos])
      rec(pos + 1, second);
  };
  rec(0, false);
  return points;
}

std::string grid_text(const std::vector<Rational>& grid) {
  std::ostringstream out;
  out << "{";
  for (size_t i = 0; i < grid.size(); ++i)
    out << (i ? "," : "") << poadual::to_string(grid[i]);
  out << "}";
  return out.str();
}

}  // namespace

SmoothnessCertificate check_game_smooth(const AtomicGame& g,
                                        const Rational& lambda,
                                        const Rational& mu, const Caps& caps) {
  auto points = game_points(g, caps);
  return verify_points(Kind::Game, lambda, mu, points,
                       "all ordered profile pairs (" +
                           std::to_string(points.size()) + ")");
}

SmoothnessCertificate check_resource_smooth(const CostFunction& ell,
                                            const Rational& lambda,
                                            const Rational& mu, int n,
                                            const std::vector<Rational>& grid,
                                            bool conservative,
                                            const Caps& caps) {
  auto points = resource_points(ell, n, grid, conservative, caps);
  std::string domain = "all current-load/deviator weight patterns, n=" +
                       std::to_string(n) + ", weights in " + grid_text(grid) +
                       (conservative ? ", dominating discretization" : "");
  return verify_points(Kind::Resource, lambda, mu, points, domain);
}

SmoothnessCertificate check_dual_smooth(const CostFunction& ell,
                                        const Rational& lambda,
                                        const Rational& mu, int n,
                                        const std::vector<Rational>& grid,
                                        const Caps& caps) {
  auto points = dual_points(ell, n, grid, caps);
  return verify_points(Kind::DualSmooth, lambda, mu, points,
                       "all vector pairs in grid^" + std::to_string(2 * n) +
                           ", grid " + grid_text(grid));
}

SmoothnessCertificate robust_poa_search_game(const AtomicGame& g,
                                             const Caps& caps) {
  auto points = game_points(g, caps);
  return lattice_search(Kind::Game, points,
                        "all ordered profile pairs (" +
                            std::to_string(points.size()) + ")");
}

SmoothnessCertificate robust_poa_search_resource(
    const CostFunction& ell, int n, const std::vector<Rational>& grid,
    const Caps& caps) {
  auto points = resource_points(ell, n, grid, false, caps);
  return lattice_search(Kind::Resource, points,
                        "all current-load/deviator weight patterns, n=" +
                            std::to_string(n) + ", weights in " +
                            grid_text(grid));
}

SmoothnessCertificate robust_poa_search_dual(const CostFunction& ell, int n,
                                             const std::vector<Rational>& grid,
                                             const Caps& caps) {
  auto points = dual_points(ell, n, grid, caps);
  return lattice_search(Kind::DualSmooth, points,
                        "all vector pairs in grid^" + std::to_string(2 * n) +
                            ", grid " + grid_text(grid));
}

PigouResult pigou_bound(const CostFunction& ell,
                        const std::vector<Rational>& grid) {
  if (grid.empty()) throw Error("empty grid");
  PigouResult result;
  result.bound = 1;
  result.argmax_u = 0;
  result.argmax_v = 0;
  bool any = false;
  for (const auto& u : grid) {
    Rational num = u * ell.eval(u);
    for (const auto& v : grid) {
      Rational den = v * ell.eval(v) + (u - v) * ell.eval(u);
      if (den <= 0) continue;  // possible only near u = v = 0
      Rational ratio = num / den;
      if (!any || ratio > result.bound) {
        result.bound = ratio;
        result.argmax_u = u;
        result.argmax_v = v;
        any = true;
      }
    }
  }
  result.degenerate = !any;
  if (!any) result.bound = 1;
  return result;
}

}  // namespace poadual::smoothness
