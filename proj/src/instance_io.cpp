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

#include "poadual/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace poadual::io {

using congestion::AtomicGame;
using congestion::CostFunction;
using congestion::NonAtomicGame;
using congestion::SplittableGame;

namespace {

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

std::string require_name(const std::string& name, int line) {
  if (!valid_name(name))
    throw ParseError("invalid name '" + name + "' (alphanumeric, '_', '-')",
                     line);
  return name;
}

// "{e1,e2}" -> resource indices; "{}" allowed.
std::vector<int> parse_strategy(const std::string& token,
                                const std::map<std::string, int>& resources,
                                int line) {
  if (token.size() < 2 || token.front() != '{' || token.back() != '}')
    throw ParseError("strategy must look like {e1,e2}: '" + token + "'", line);
  std::vector<int> out;
  std::string inner = token.substr(1, token.size() - 2);
  if (inner.empty()) return out;
  std::istringstream ss(inner);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto it = resources.find(part);
    if (it == resources.end())
      throw ParseError("unknown resource '" + part + "'", line);
    out.push_back(it->second);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CostFunction parse_cost(std::istringstream& ls, int line) {
  std::string kind;
  if (!(ls >> kind)) throw ParseError("cost needs a kind (poly|pwl)", line);
  if (kind == "poly") {
    std::vector<Rational> coeffs;
    std::string tok;
    while (ls >> tok) coeffs.push_back(parse_rational(tok));
    if (coeffs.empty()) throw ParseError("poly needs coefficients", line);
    return CostFunction::polynomial(std::move(coeffs));
  }
  if (kind == "pwl") {
    std::vector<std::pair<Rational, Rational>> points;
    std::string tok;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw ParseError("pwl points look like x:y", line);
      points.emplace_back(parse_rational(tok.substr(0, colon)),
                          parse_rational(tok.substr(colon + 1)));
    }
    if (points.empty()) throw ParseError("pwl needs breakpoints", line);
    return CostFunction::piecewise_linear(std::move(points));
  }
  throw ParseError("unknown cost kind '" + kind + "'", line);
}

// Item subsets "{1,3}" with 1-based item indices.
int parse_item_subset(const std::string& token, int items, int line) {
  if (token.size() < 2 || token.front() != '{' || token.back() != '}')
    throw ParseError("item subset must look like {1,2}: '" + token + "'",
                     line);
  std::string inner = token.substr(1, token.size() - 2);
  int mask = 0;
  if (inner.empty()) return mask;
  std::istringstream ss(inner);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int j;
    try {
      j = std::stoi(part);
    } catch (...) {
      throw ParseError("bad item index '" + part + "'", line);
    }
    if (j < 1 || j > items)
      throw ParseError("item index out of range: " + part, line);
    mask |= 1 << (j - 1);
  }
  return mask;
}

Instance parse_congestion(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  std::string kind;
  std::optional<Rational> epsilon;
  std::vector<std::string> resources;
  std::map<std::string, int> resource_index;
  std::map<int, CostFunction> costs;
  struct Member {
    std::string name;
    Rational weight;
    long m = 0;
    std::vector<std::vector<int>> strategies;
  };
  std::vector<Member> members;
  bool is_type_based = false;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    try {
    if (tok == "game") {
      if (!(ls >> kind)) throw ParseError("game needs a kind", lineno);
      if (kind != "atomic" && kind != "nonatomic" && kind != "splittable")
        throw ParseError("unknown game kind '" + kind + "'", lineno);
    } else if (tok == "epsilon") {
      std::string v;
      if (!(ls >> v)) throw ParseError("epsilon needs a value", lineno);
      epsilon = parse_rational(v);
    } else if (tok == "resources") {
      std::string name;
      while (ls >> name) {
        require_name(name, lineno);
        if (resource_index.count(name))
          throw ParseError("duplicate resource '" + name + "'", lineno);
        resource_index[name] = static_cast<int>(resources.size());
        resources.push_back(name);
      }
      if (resources.empty())
        throw ParseError("resources needs at least one name", lineno);
    } else if (tok == "cost") {
      std::string name;
      if (!(ls >> name)) throw ParseError("cost needs a resource", lineno);
      auto it = resource_index.find(name);
      if (it == resource_index.end())
        throw ParseError("unknown resource '" + name + "'", lineno);
      costs.emplace(it->second, parse_cost(ls, lineno));
    } else if (tok == "player" || tok == "type") {
      is_type_based = tok == "type";
      Member m;
      std::string name;
      if (!(ls >> name)) throw ParseError("player/type needs a name", lineno);
      m.name = require_name(name, lineno);
      std::string field;
      if (!(ls >> field)) throw ParseError("missing weight/m", lineno);
      if (field == "weight") {
        std::string v;
        if (!(ls >> v)) throw ParseError("weight needs a value", lineno);
        m.weight = parse_rational(v);
      } else if (field == "m") {
        std::string v;
        if (!(ls >> v)) throw ParseError("m needs a value", lineno);
        try {
          m.m = std::stol(v);
        } catch (...) {
          throw ParseError("bad integer '" + v + "'", lineno);
        }
      } else {
        throw ParseError("expected 'weight' or 'm', got '" + field + "'",
                         lineno);
      }
      std::string kw;
      if (!(ls >> kw) || kw != "strategies")
        throw ParseError("expected 'strategies'", lineno);
      std::string stoken;
      while (ls >> stoken)
        m.strategies.push_back(parse_strategy(stoken, resource_index, lineno));
      if (m.strategies.empty())
        throw ParseError("needs at least one strategy", lineno);
      members.push_back(std::move(m));
    } else {
      throw ParseError("unknown directive '" + tok + "'", lineno);
    }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (kind.empty()) throw ParseError("missing 'game' directive");
  if (members.empty()) throw ParseError("no players/types declared");
  std::vector<CostFunction> cost_list;
  for (size_t e = 0; e < resources.size(); ++e) {
    auto it = costs.find(static_cast<int>(e));
    if (it == costs.end())
      throw ParseError("missing cost for resource " + resources[e]);
    cost_list.push_back(it->second);
  }

  if (kind == "atomic") {
    if (is_type_based) throw ParseError("atomic games declare players");
    AtomicGame g;
    g.resources = resources;
    g.costs = cost_list;
    for (auto& m : members)
      g.players.push_back(
          congestion::AtomicPlayer{m.name, m.weight, m.strategies});
    g.validate();
    return g;
  }
  if (!epsilon) throw ParseError("missing 'epsilon' directive");
  if (kind == "nonatomic") {
    if (!is_type_based) throw ParseError("nonatomic games declare types");
    NonAtomicGame g;
    g.epsilon = *epsilon;
    g.resources = resources;
    g.costs = cost_list;
    for (auto& m : members)
      g.types.push_back(congestion::PlayerType{m.name, m.m, m.strategies});
    g.validate();
    return g;
  }
  if (is_type_based) throw ParseError("splittable games declare players");
  SplittableGame g;
  g.epsilon = *epsilon;
  g.resources = resources;
  g.costs = cost_list;
  for (auto& m : members)
    g.players.push_back(
        congestion::SplittablePlayer{m.name, m.weight, m.strategies});
  g.validate();
  return g;
}

Instance parse_auction(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  std::optional<auctions::Mechanism> mechanism;
  int items = 0;
  std::vector<Rational> grid;
  Rational overbid = 1;
  bool require_subadditive = false;
  std::vector<std::string> names;
  std::vector<std::vector<auctions::AuctionType>> types;

  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    try {
    if (tok == "auction") {
      std::string k;
      if (!(ls >> k) || k != "simultaneous")
        throw ParseError("only 'auction simultaneous' is supported", lineno);
    } else if (tok == "mechanism") {
      std::string k;
      if (!(ls >> k)) throw ParseError("mechanism needs a value", lineno);
      if (k == "first-price")
        mechanism = auctions::Mechanism::FirstPrice;
      else if (k == "second-price")
        mechanism = auctions::Mechanism::SecondPrice;
      else
        throw ParseError("unknown mechanism '" + k + "'", lineno);
    } else if (tok == "items") {
      std::string v;
      if (!(ls >> v)) throw ParseError("items needs a count", lineno);
      try {
        items = std::stoi(v);
      } catch (...) {
        throw ParseError("bad item count '" + v + "'", lineno);
      }
      if (items < 1 || items > 12)
        throw ParseError("items must be in 1..12", lineno);
    } else if (tok == "bidgrid") {
      std::string v;
      while (ls >> v) grid.push_back(parse_rational(v));
      if (grid.empty()) throw ParseError("bidgrid needs values", lineno);
    } else if (tok == "overbid") {
      std::string v;
      if (!(ls >> v)) throw ParseError("overbid needs a value", lineno);
      overbid = parse_rational(v);
    } else if (tok == "subadditive") {
      require_subadditive = true;
    } else if (tok == "player") {
      std::string name;
      if (!(ls >> name)) throw ParseError("player needs a name", lineno);
      names.push_back(require_name(name, lineno));
      types.emplace_back();
    } else if (tok == "type") {
      if (types.empty())
        throw ParseError("type must follow a player declaration", lineno);
      if (items == 0)
        throw ParseError("declare items before types", lineno);
      std::string label;
      if (!(ls >> label)) throw ParseError("type needs a label", lineno);
      require_name(label, lineno);
      std::string kw;
      if (!(ls >> kw) || kw != "prior")
        throw ParseError("expected 'prior'", lineno);
      std::string pv;
      if (!(ls >> pv)) throw ParseError("prior needs a value", lineno);
      Rational prior = parse_rational(pv);
      std::string mode;
      if (!(ls >> mode)) throw ParseError("type needs a valuation", lineno);
      auctions::Valuation val;
      if (mode == "additive") {
        std::vector<Rational> per_item;
        std::string v;
        while (ls >> v) per_item.push_back(parse_rational(v));
        if (static_cast<int>(per_item.size()) != items)
          throw ParseError("additive needs one value per item", lineno);
        val = auctions::Valuation::additive(per_item);
      } else if (mode == "value") {
        std::map<int, Rational> given;
        std::string v;
        while (ls >> v) {
          auto colon = v.rfind(':');
          if (colon == std::string::npos)
            throw ParseError("value entries look like {1,2}:3", lineno);
          int mask = parse_item_subset(v.substr(0, colon), items, lineno);
          given[mask] = parse_rational(v.substr(colon + 1));
        }
        // Monotone closure over unspecified subsets.
        std::vector<Rational> table(size_t{1} << items, Rational(0));
        for (int mask = 0; mask < (1 << items); ++mask) {
          Rational best = 0;
          for (int sub = mask;; sub = (sub - 1) & mask) {
            auto it = given.find(sub);
            if (it != given.end() && it->second > best) best = it->second;
            if (sub == 0) break;
          }
          auto it = given.find(mask);
          table[mask] = it != given.end() ? std::max(it->second, best) : best;
        }
        val = auctions::Valuation::make(items, std::move(table));
      } else {
        throw ParseError("valuation mode must be 'value' or 'additive'",
                         lineno);
      }
      types.back().push_back(auctions::AuctionType{label, prior, val});
    } else {
      throw ParseError("unknown directive '" + tok + "'", lineno);
    }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  if (!mechanism) throw ParseError("missing 'mechanism'");
  if (items == 0) throw ParseError("missing 'items'");
  if (grid.empty()) throw ParseError("missing 'bidgrid'");
  if (names.empty()) throw ParseError("no players declared");
  try {
    return auctions::make_simultaneous_auction(items, *mechanism, grid, names,
                                               types, overbid,
                                               require_subadditive);
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string emit_cost(const CostFunction& f) {
  std::ostringstream out;
  if (f.kind() == CostFunction::Kind::Polynomial) {
    out << "poly";
    for (const auto& c : f.coefficients()) out << " " << to_string(c);
  } else {
    out << "pwl";
    for (const auto& [x, y] : f.breakpoints())
      out << " " << to_string(x) << ":" << to_string(y);
  }
  return out.str();
}

std::string emit_strategies(const std::vector<std::vector<int>>& strategies,
                            const std::vector<std::string>& resources) {
  std::ostringstream out;
  for (const auto& s : strategies) {
    out << " {";
    for (size_t k = 0; k < s.size(); ++k)
      out << (k ? "," : "") << resources[s[k]];
    out << "}";
  }
  return out.str();
}

}  // namespace

std::string kind_name(const Instance& instance) {
  if (std::holds_alternative<AtomicGame>(instance)) return "atomic";
  if (std::holds_alternative<NonAtomicGame>(instance)) return "nonatomic";
  if (std::holds_alternative<SplittableGame>(instance)) return "splittable";
  return "auction";
}

Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    if (tok == "game") return parse_congestion(text);
    if (tok == "auction") return parse_auction(text);
    throw ParseError("instance must start with 'game' or 'auction'");
  }
  throw ParseError("empty instance");
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string emit_instance(const Instance& instance) {
  std::ostringstream out;
  if (const auto* g = std::get_if<AtomicGame>(&instance)) {
    out << "game atomic\n";
    out << "resources";
    for (const auto& r : g->resources) out << " " << r;
    out << "\n";
    for (size_t e = 0; e < g->resources.size(); ++e)
      out << "cost " << g->resources[e] << " " << emit_cost(g->costs[e])
          << "\n";
    for (const auto& p : g->players)
      out << "player " << p.name << " weight " << to_string(p.weight)
          << " strategies" << emit_strategies(p.strategies, g->resources)
          << "\n";
  } else if (const auto* g = std::get_if<NonAtomicGame>(&instance)) {
    out << "game nonatomic\n";
    out << "epsilon " << to_string(g->epsilon) << "\n";
    out << "resources";
    for (const auto& r : g->resources) out << " " << r;
    out << "\n";
    for (size_t e = 0; e < g->resources.size(); ++e)
      out << "cost " << g->resources[e] << " " << emit_cost(g->costs[e])
          << "\n";
    for (const auto& t : g->types)
      out << "type " << t.name << " m " << t.m << " strategies"
          << emit_strategies(t.strategies, g->resources) << "\n";
  } else if (const auto* g = std::get_if<SplittableGame>(&instance)) {
    out << "game splittable\n";
    out << "epsilon " << to_string(g->epsilon) << "\n";
    out << "resources";
    for (const auto& r : g->resources) out << " " << r;
    out << "\n";
    for (size_t e = 0; e < g->resources.size(); ++e)
      out << "cost " << g->resources[e] << " " << emit_cost(g->costs[e])
          << "\n";
    for (const auto& p : g->players)
      out << "player " << p.name << " weight " << to_string(p.weight)
          << " strategies" << emit_strategies(p.strategies, g->resources)
          << "\n";
  } else {
    const auto& a = std::get<auctions::BayesianAuction>(instance);
    out << "auction simultaneous\n";
    out << "mechanism " << auctions::to_string(a.mechanism) << "\n";
    out << "items " << a.items << "\n";
    out << "bidgrid";
    for (const auto& b : a.bid_grid) out << " " << to_string(b);
    out << "\n";
    out << "overbid " << to_string(a.overbid) << "\n";
    for (int i = 0; i < a.players(); ++i) {
      out << "player " << a.player_names[i] << "\n";
      for (const auto& t : a.types[i]) {
        out << "type " << t.label << " prior " << to_string(t.prior)
            << " value";
        for (int mask = 1; mask < (1 << a.items); ++mask) {
          out << " {";
          bool first = true;
          for (int j = 0; j < a.items; ++j)
            if (mask & (1 << j)) {
              out << (first ? "" : ",") << (j + 1);
              first = false;
            }
          out << "}:" << to_string(t.valuation.of(mask));
        }
        out << "\n";
      }
    }
  }
  return out.str();
}

bool instances_equal(const Instance& a, const Instance& b) {
  if (a.index() != b.index()) return false;
  return std::visit(
      [&b](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        return lhs == std::get<T>(b);
      },
      a);
}

}  // namespace poadual::io
