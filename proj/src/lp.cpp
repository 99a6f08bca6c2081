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

#include "poadual/lp.hpp"

#include <algorithm>
#include <sstream>

namespace poadual::lp {

namespace {

Row canonical_row(const Row& row) {
  std::map<std::string, Rational> acc;
  for (const auto& [name, coef] : row) acc[name] += coef;
  Row out;
  for (auto& [name, coef] : acc)
    if (coef != 0) out.emplace_back(name, coef);
  return out;
}

Rational row_value(const Row& row,
                   const std::map<std::string, Rational>& point,
                   const std::string& context) {
  Rational value = 0;
  for (const auto& [name, coef] : row) {
    auto it = point.find(name);
    if (it == point.end())
      throw MissingVariable("no value for variable '" + name + "' in " +
                            context);
    value += coef * it->second;
  }
  return value;
}

}  // namespace

void LinearProgram::add_variable(const std::string& name,
                                 std::optional<Rational> lower,
                                 std::optional<Rational> upper) {
  if (var_index_.count(name))
    throw MalformedLp("duplicate variable '" + name + "'");
  var_index_[name] = static_cast<int>(variables_.size());
  variables_.push_back(Variable{name, std::move(lower), std::move(upper)});
}

void LinearProgram::add_constraint(const std::string& name, Row row,
                                   Relation rel, Rational rhs) {
  if (con_index_.count(name))
    throw MalformedLp("duplicate constraint '" + name + "'");
  con_index_[name] = static_cast<int>(constraints_.size());
  constraints_.push_back(
      Constraint{name, std::move(row), rel, std::move(rhs)});
}

const Variable& LinearProgram::variable(const std::string& name) const {
  auto it = var_index_.find(name);
  if (it == var_index_.end())
    throw MalformedLp("unknown variable '" + name + "'");
  return variables_[it->second];
}

int LinearProgram::variable_index(const std::string& name) const {
  auto it = var_index_.find(name);
  if (it == var_index_.end())
    throw MalformedLp("unknown variable '" + name + "'");
  return it->second;
}

void LinearProgram::validate() const {
  for (const auto& con : constraints_)
    for (const auto& [name, coef] : con.row)
      if (!var_index_.count(name))
        throw MalformedLp("constraint '" + con.name +
                          "' references unknown variable '" + name + "'");
  for (const auto& [name, coef] : objective_)
    if (!var_index_.count(name))
      throw MalformedLp("objective references unknown variable '" + name +
                        "'");
  for (const auto& v : variables_)
    if (v.lower && v.upper && *v.lower > *v.upper)
      throw MalformedLp("variable '" + v.name + "' has empty bound interval");
}

Rational LinearProgram::objective_value(
    const std::map<std::string, Rational>& point) const {
  return row_value(objective_, point, "objective");
}

bool LinearProgram::operator==(const LinearProgram& other) const {
  if (sense_ != other.sense_) return false;
  if (variables_.size() != other.variables_.size()) return false;
  for (size_t i = 0; i < variables_.size(); ++i) {
    const auto& a = variables_[i];
    const auto& b = other.variables_[i];
    if (a.name != b.name || a.lower != b.lower || a.upper != b.upper)
      return false;
  }
  if (constraints_.size() != other.constraints_.size()) return false;
  for (size_t i = 0; i < constraints_.size(); ++i) {
    const auto& a = constraints_[i];
    const auto& b = other.constraints_[i];
    if (a.name != b.name || a.rel != b.rel || a.rhs != b.rhs) return false;
    if (canonical_row(a.row) != canonical_row(b.row)) return false;
  }
  return canonical_row(objective_) == canonical_row(other.objective_);
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
  }
  return "?";
}

LinearProgram materialize_bounds(const LinearProgram& lp) {
  lp.validate();
  bool native = true;
  for (const auto& v : lp.variables()) {
    bool zero_lo = v.lower && *v.lower == 0 && !v.upper;
    bool zero_hi = v.upper && *v.upper == 0 && !v.lower;
    bool free = !v.lower && !v.upper;
    if (!(zero_lo || zero_hi || free)) native = false;
  }
  if (native) return lp;

  LinearProgram out(lp.name(), lp.sense());
  std::vector<Constraint> bound_rows;
  for (const auto& v : lp.variables()) {
    bool zero_lo = v.lower && *v.lower == 0 && !v.upper;
    bool zero_hi = v.upper && *v.upper == 0 && !v.lower;
    bool free = !v.lower && !v.upper;
    if (zero_lo || zero_hi || free) {
      out.add_variable(v.name, v.lower, v.upper);
      continue;
    }
    // General finite bounds become rows; the variable itself turns free,
    // except a zero lower bound which stays native.
    if (v.lower && *v.lower == 0) {
      out.add_variable(v.name, Rational(0), std::nullopt);
    } else {
      out.add_variable(v.name, std::nullopt, std::nullopt);
      if (v.lower)
        bound_rows.push_back(Constraint{"bnd.lo(" + v.name + ")",
                                        Row{{v.name, Rational(1)}},
                                        Relation::GreaterEqual, *v.lower});
    }
    if (v.upper)
      bound_rows.push_back(Constraint{"bnd.hi(" + v.name + ")",
                                      Row{{v.name, Rational(1)}},
                                      Relation::LessEqual, *v.upper});
  }
  for (const auto& con : lp.constraints())
    out.add_constraint(con.name, con.row, con.rel, con.rhs);
  for (auto& con : bound_rows)
    out.add_constraint(con.name, con.row, con.rel, con.rhs);
  out.set_objective(lp.objective());
  out.validate();
  return out;
}

LinearProgram dual_of(const LinearProgram& input) {
  LinearProgram lp = materialize_bounds(input);
  const bool min = lp.sense() == Sense::Minimize;
  LinearProgram dual("dual(" + lp.name() + ")",
                     min ? Sense::Maximize : Sense::Minimize);

  // One dual variable per primal constraint.
  Row dual_obj;
  for (const auto& con : lp.constraints()) {
    std::optional<Rational> lo, hi;
    switch (con.rel) {
      case Relation::GreaterEqual:
        (min ? lo : hi) = Rational(0);
        break;
      case Relation::LessEqual:
        (min ? hi : lo) = Rational(0);
        break;
      case Relation::Equal:
        break;
    }
    dual.add_variable(con.name, lo, hi);
    if (con.rhs != 0) dual_obj.emplace_back(con.name, con.rhs);
  }
  dual.set_objective(std::move(dual_obj));

  // One dual constraint per primal variable: transposed column vs objective
  // coefficient.
  std::map<std::string, Row> columns;
  for (const auto& con : lp.constraints())
    for (const auto& [var, coef] : canonical_row(con.row))
      columns[var].emplace_back(con.name, coef);
  std::map<std::string, Rational> obj;
  for (const auto& [var, coef] : lp.objective()) obj[var] += coef;

  for (const auto& v : lp.variables()) {
    Relation rel;
    if (!v.lower && !v.upper) {
      rel = Relation::Equal;
    } else if (v.lower) {  // x >= 0
      rel = min ? Relation::LessEqual : Relation::GreaterEqual;
    } else {  // x <= 0
      rel = min ? Relation::GreaterEqual : Relation::LessEqual;
    }
    Rational rhs = obj.count(v.name) ? obj[v.name] : Rational(0);
    Row row = columns.count(v.name) ? columns[v.name] : Row{};
    dual.add_constraint(v.name, std::move(row), rel, rhs);
  }
  dual.validate();
  return dual;
}

ResidualReport feasibility_residuals(
    const LinearProgram& lp, const std::map<std::string, Rational>& candidate) {
  lp.validate();
  for (const auto& v : lp.variables())
    if (!candidate.count(v.name))
      throw MissingVariable("candidate misses variable '" + v.name + "'");

  ResidualReport report;
  auto note = [&report](const std::string& name, const Rational& viol) {
    report.violation[name] = viol;
  };
  for (const auto& con : lp.constraints()) {
    Rational lhs = row_value(con.row, candidate, "constraint " + con.name);
    Rational viol;
    switch (con.rel) {
      case Relation::LessEqual:
        viol = lhs - con.rhs;
        break;
      case Relation::GreaterEqual:
        viol = con.rhs - lhs;
        break;
      case Relation::Equal:
        viol = lhs - con.rhs;
        if (viol < 0) viol = -viol;
        break;
    }
    note(con.name, viol);
  }
  for (const auto& v : lp.variables()) {
    const Rational& x = candidate.at(v.name);
    if (v.lower) note("bnd.lo(" + v.name + ")", *v.lower - x);
    if (v.upper) note("bnd.hi(" + v.name + ")", x - *v.upper);
  }

  report.worst_violation = 0;
  bool first = true;
  for (const auto& [name, viol] : report.violation) {
    if (first || viol > report.worst_violation) {
      report.worst_violation = viol;
      report.worst_name = name;
      first = false;
    }
  }
  if (first) {
    report.worst_violation = 0;
    report.worst_name = "";
  }
  report.feasible = report.worst_violation <= 0;
  return report;
}

namespace {

// Internal standard-form column: a named, ordered slice of one LP variable.
// Columns are stored once, sparsely, and never rewritten; the solver is a
// revised simplex carrying only the m x m basis inverse.
struct Column {
  std::string order_key;  // Bland's rule works on this key
  int var = -1;           // index of owning variable, -1 for slack/artificial
  Rational sign = 1;      // column carries sign*x contribution
  bool artificial = false;
  std::vector<std::pair<int, Rational>> entries;  // (row, coefficient)
};

struct Core {
  std::vector<Column> cols;
  std::vector<Rational> b;         // m, kept nonnegative
  std::vector<int> basis;          // m, column index
  std::vector<int> art_col;        // row -> its artificial column
  std::vector<Rational> row_sign;  // original-row scaling
  std::vector<std::vector<Rational>> binv;  // m x m basis inverse
  std::vector<Rational> xb;                 // basic values = binv * b
  std::vector<size_t> order;                // columns by order key

  size_t rows() const { return b.size(); }

  void reset_basis_to_artificials() {
    const size_t m = rows();
    basis.resize(m);
    binv.assign(m, std::vector<Rational>(m, Rational(0)));
    xb = b;
    for (size_t r = 0; r < m; ++r) {
      basis[r] = art_col[r];
      binv[r][r] = 1;
    }
  }

  std::vector<Rational> dual_prices(const std::vector<Rational>& cost) const {
    const size_t m = rows();
    std::vector<Rational> y(m, Rational(0));
    for (size_t r = 0; r < m; ++r) {
      const Rational& c = cost[basis[r]];
      if (c == 0) continue;
      for (size_t k = 0; k < m; ++k)
        if (binv[r][k] != 0) y[k] += c * binv[r][k];
    }
    return y;
  }

  std::vector<Rational> direction(int col) const {
    const size_t m = rows();
    std::vector<Rational> d(m, Rational(0));
    for (const auto& [row, coef] : cols[col].entries)
      for (size_t r = 0; r < m; ++r)
        if (binv[r][row] != 0) d[r] += binv[r][row] * coef;
    return d;
  }

  void pivot(int leaving_row, int entering, const std::vector<Rational>& d) {
    const size_t m = rows();
    Rational piv = d[leaving_row];
    for (size_t k = 0; k < m; ++k) binv[leaving_row][k] /= piv;
    xb[leaving_row] /= piv;
    for (size_t r = 0; r < m; ++r) {
      if (static_cast<int>(r) == leaving_row) continue;
      const Rational& f = d[r];
      if (f == 0) continue;
      for (size_t k = 0; k < m; ++k)
        if (binv[leaving_row][k] != 0)
          binv[r][k] -= f * binv[leaving_row][k];
      xb[r] -= f * xb[leaving_row];
    }
    basis[leaving_row] = entering;
  }
};

// Revised simplex until optimality; returns false if unbounded. Entering
// rule: most negative reduced cost with lexicographic tie-break while
// progress is made, switching permanently to Bland's rule after a run of
// degenerate pivots so cycling is impossible. Both rules are deterministic,
// so bases are reproducible bit for bit.
bool run_simplex(Core& t, const std::vector<Rational>& cost,
                 bool block_artificials) {
  const size_t m = t.rows();
  constexpr int kStallLimit = 40;
  int stalled = 0;
  bool bland = false;

  while (true) {
    auto y = t.dual_prices(cost);
    int entering = -1;
    Rational best_rj;
    for (size_t oj : t.order) {
      if (block_artificials && t.cols[oj].artificial) continue;
      Rational rj = cost[oj];
      for (const auto& [row, coef] : t.cols[oj].entries)
        if (y[row] != 0) rj -= y[row] * coef;
      if (rj < 0) {
        if (bland) {
          entering = static_cast<int>(oj);
          break;
        }
        if (entering < 0 || rj < best_rj) {
          entering = static_cast<int>(oj);
          best_rj = rj;
        }
      }
    }
    if (entering < 0) return true;  // optimal

    auto d = t.direction(entering);
    int leaving_row = -1;
    Rational best_ratio = 0;
    for (size_t r = 0; r < m; ++r) {
      if (d[r] <= 0) continue;
      Rational ratio = t.xb[r] / d[r];
      if (leaving_row < 0 || ratio < best_ratio ||
          (ratio == best_ratio &&
           t.cols[t.basis[r]].order_key <
               t.cols[t.basis[leaving_row]].order_key)) {
        leaving_row = static_cast<int>(r);
        best_ratio = ratio;
      }
    }
    if (leaving_row < 0) return false;  // unbounded direction

    if (best_ratio == 0) {
      if (++stalled > kStallLimit) bland = true;
    } else {
      stalled = 0;
    }
    t.pivot(leaving_row, entering, d);
  }
}

}  // namespace

SolveResult solve(const LinearProgram& input) {
  LinearProgram lp = materialize_bounds(input);
  const bool maximize = lp.sense() == Sense::Maximize;
  const auto& vars = lp.variables();
  const auto& cons = lp.constraints();
  const size_t m = cons.size();

  Core t;
  // Structural columns.
  std::vector<std::vector<std::pair<int, Rational>>> var_cols(vars.size());
  for (size_t v = 0; v < vars.size(); ++v) {
    const auto& var = vars[v];
    if (var.lower) {  // x >= 0
      var_cols[v] = {{static_cast<int>(t.cols.size()), Rational(1)}};
      t.cols.push_back(Column{var.name, static_cast<int>(v), Rational(1), false, {}});
    } else if (var.upper) {  // x <= 0, substitute -x >= 0
      var_cols[v] = {{static_cast<int>(t.cols.size()), Rational(-1)}};
      t.cols.push_back(Column{var.name, static_cast<int>(v), Rational(-1), false, {}});
    } else {  // free, x = x+ - x-
      var_cols[v] = {{static_cast<int>(t.cols.size()), Rational(1)},
                     {static_cast<int>(t.cols.size()) + 1, Rational(-1)}};
      t.cols.push_back(Column{var.name + "\x01+", static_cast<int>(v),
                              Rational(1), false, {}});
      t.cols.push_back(Column{var.name + "\x01-", static_cast<int>(v),
                              Rational(-1), false, {}});
    }
  }

  // Row signs first (rhs normalized nonnegative), then sparse columns.
  t.b.assign(m, Rational(0));
  t.row_sign.assign(m, Rational(1));
  for (size_t r = 0; r < m; ++r) {
    t.b[r] = cons[r].rhs;
    if (t.b[r] < 0) {
      t.row_sign[r] = -1;
      t.b[r] = -t.b[r];
    }
  }
  {
    // Accumulate structural entries row by row (duplicates summed).
    std::vector<std::map<int, Rational>> by_row(m);
    for (size_t r = 0; r < m; ++r)
      for (const auto& [vname, coef] : cons[r].row) {
        int v = lp.variable_index(vname);
        for (const auto& [col, sign] : var_cols[v])
          by_row[r][col] += coef * sign * t.row_sign[r];
      }
    for (size_t r = 0; r < m; ++r)
      for (const auto& [col, value] : by_row[r])
        if (value != 0)
          t.cols[col].entries.emplace_back(static_cast<int>(r), value);
  }
  for (size_t r = 0; r < m; ++r) {
    if (cons[r].rel == Relation::Equal) continue;
    Rational sign = cons[r].rel == Relation::LessEqual ? 1 : -1;
    Column slack{"~s(" + cons[r].name + ")", -1, Rational(1), false, {}};
    slack.entries.emplace_back(static_cast<int>(r), sign * t.row_sign[r]);
    t.cols.push_back(std::move(slack));
  }
  t.art_col.assign(m, -1);
  for (size_t r = 0; r < m; ++r) {
    t.art_col[r] = static_cast<int>(t.cols.size());
    Column art{"~a(" + cons[r].name + ")", -1, Rational(1), true, {}};
    art.entries.emplace_back(static_cast<int>(r), Rational(1));
    t.cols.push_back(std::move(art));
  }
  const size_t n = t.cols.size();
  t.order.resize(n);
  for (size_t j = 0; j < n; ++j) t.order[j] = j;
  std::sort(t.order.begin(), t.order.end(), [&t](size_t x, size_t y) {
    return t.cols[x].order_key < t.cols[y].order_key;
  });
  t.reset_basis_to_artificials();

  SolveResult result;

  // Phase 1: drive artificials to zero.
  if (m > 0) {
    std::vector<Rational> cost1(n, Rational(0));
    for (size_t r = 0; r < m; ++r) cost1[t.art_col[r]] = 1;
    run_simplex(t, cost1, false);
    Rational infeas = 0;
    for (size_t r = 0; r < m; ++r)
      if (t.cols[t.basis[r]].artificial) infeas += t.xb[r];
    if (infeas > 0) {
      result.status = SolveStatus::Infeasible;
      return result;
    }
    // Pivot artificials out of the basis where a real column is available.
    for (size_t r = 0; r < m; ++r) {
      if (!t.cols[t.basis[r]].artificial) continue;
      int pivot_col = -1;
      for (size_t oj : t.order) {
        if (t.cols[oj].artificial) continue;
        // r-th component of binv * A_j, computed sparsely.
        Rational dr = 0;
        for (const auto& [row, coef] : t.cols[oj].entries)
          if (t.binv[r][row] != 0) dr += t.binv[r][row] * coef;
        if (dr != 0) {
          pivot_col = static_cast<int>(oj);
          break;
        }
      }
      if (pivot_col < 0) continue;  // redundant row
      t.pivot(static_cast<int>(r), pivot_col, t.direction(pivot_col));
    }
  }

  // Phase 2 with the real objective (negated if maximizing).
  std::vector<Rational> cost2(n, Rational(0));
  for (const auto& [vname, coef] : lp.objective()) {
    int v = lp.variable_index(vname);
    for (const auto& [col, sign] : var_cols[v])
      cost2[col] += (maximize ? -coef : coef) * sign;
  }
  if (!run_simplex(t, cost2, true)) {
    result.status = SolveStatus::Unbounded;
    return result;
  }

  // Primal assignment.
  std::vector<Rational> colval(n, Rational(0));
  for (size_t r = 0; r < m; ++r) colval[t.basis[r]] = t.xb[r];
  for (size_t v = 0; v < vars.size(); ++v) {
    Rational x = 0;
    for (const auto& [col, sign] : var_cols[v]) x += sign * colval[col];
    result.primal[vars[v].name] = x;
  }
  Rational obj = 0;
  for (const auto& [vname, coef] : lp.objective())
    obj += coef * result.primal[vname];
  result.objective = obj;

  // Dual assignment: y = c_B B^-1, unscaled back to the original rows.
  auto y = t.dual_prices(cost2);
  for (size_t r = 0; r < m; ++r) {
    Rational value = y[r] * t.row_sign[r];
    if (maximize) value = -value;
    result.dual[cons[r].name] = value;
  }
  result.status = SolveStatus::Optimal;

  // The solver's contract is exact strong duality; verify before returning.
  auto primal_check = feasibility_residuals(lp, result.primal);
  if (!primal_check.feasible)
    throw Error("internal: primal assignment infeasible at " +
                primal_check.worst_name);
  LinearProgram dual = dual_of(lp);
  auto dual_check = feasibility_residuals(dual, result.dual);
  if (!dual_check.feasible)
    throw Error("internal: dual assignment infeasible at " +
                dual_check.worst_name);
  Rational dual_obj = dual.objective_value(result.dual);
  if (dual_obj != result.objective)
    throw Error("internal: duality gap " + poadual::to_string(result.objective) +
                " vs " + poadual::to_string(dual_obj));
  return result;
}

std::string to_text(const LinearProgram& lp) {
  std::ostringstream out;
  out << "lp " << (lp.name().empty() ? "unnamed" : lp.name()) << "\n";
  out << "sense "
      << (lp.sense() == Sense::Minimize ? "minimize" : "maximize") << "\n";
  auto bound = [](const std::optional<Rational>& b) {
    return b ? poadual::to_string(*b) : std::string("-");
  };
  for (const auto& v : lp.variables())
    out << "var " << v.name << " " << bound(v.lower) << " " << bound(v.upper)
        << "\n";
  auto rel_text = [](Relation r) {
    switch (r) {
      case Relation::LessEqual:
        return "<=";
      case Relation::Equal:
        return "=";
      case Relation::GreaterEqual:
        return ">=";
    }
    return "?";
  };
  for (const auto& c : lp.constraints()) {
    out << "con " << c.name << " " << rel_text(c.rel) << " "
        << poadual::to_string(c.rhs) << " :";
    for (const auto& [name, coef] : c.row)
      out << " " << poadual::to_string(coef) << " " << name;
    out << "\n";
  }
  out << "obj :";
  for (const auto& [name, coef] : lp.objective())
    out << " " << poadual::to_string(coef) << " " << name;
  out << "\n";
  out << "end\n";
  return out.str();
}

LinearProgram from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  LinearProgram lp;
  bool seen_header = false;
  int lineno = 0;
  std::string lp_name = "unnamed";
  Sense sense = Sense::Minimize;
  // Collect first, build after, so directives may appear in any order.
  std::vector<Variable> vars;
  std::vector<Constraint> cons;
  Row objective;
  bool done = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok[0] == '#') continue;
    if (done) throw ParseError("content after 'end'", lineno);
    if (tok == "lp") {
      if (!(ls >> lp_name)) throw ParseError("missing lp name", lineno);
      seen_header = true;
    } else if (tok == "sense") {
      std::string s;
      if (!(ls >> s)) throw ParseError("missing sense", lineno);
      if (s == "minimize")
        sense = Sense::Minimize;
      else if (s == "maximize")
        sense = Sense::Maximize;
      else
        throw ParseError("bad sense '" + s + "'", lineno);
    } else if (tok == "var") {
      std::string name, lo, hi;
      if (!(ls >> name >> lo >> hi))
        throw ParseError("var needs: name lower upper", lineno);
      std::optional<Rational> lower, upper;
      if (lo != "-") lower = parse_rational(lo);
      if (hi != "-") upper = parse_rational(hi);
      vars.push_back(Variable{name, lower, upper});
    } else if (tok == "con") {
      std::string name, rel, rhs, colon;
      if (!(ls >> name >> rel >> rhs >> colon) || colon != ":")
        throw ParseError("con needs: name rel rhs : terms", lineno);
      Relation r;
      if (rel == "<=")
        r = Relation::LessEqual;
      else if (rel == "=")
        r = Relation::Equal;
      else if (rel == ">=")
        r = Relation::GreaterEqual;
      else
        throw ParseError("bad relation '" + rel + "'", lineno);
      Row row;
      std::string coef, var;
      while (ls >> coef) {
        if (!(ls >> var)) throw ParseError("dangling coefficient", lineno);
        row.emplace_back(var, parse_rational(coef));
      }
      cons.push_back(Constraint{name, std::move(row), r, parse_rational(rhs)});
    } else if (tok == "obj") {
      std::string colon;
      if (!(ls >> colon) || colon != ":")
        throw ParseError("obj needs ':'", lineno);
      std::string coef, var;
      while (ls >> coef) {
        if (!(ls >> var)) throw ParseError("dangling coefficient", lineno);
        objective.emplace_back(var, parse_rational(coef));
      }
    } else if (tok == "end") {
      done = true;
    } else {
      throw ParseError("unknown directive '" + tok + "'", lineno);
    }
  }
  if (!seen_header) throw ParseError("missing 'lp <name>' header");
  if (!done) throw ParseError("missing 'end'");
  LinearProgram out(lp_name, sense);
  for (auto& v : vars) out.add_variable(v.name, v.lower, v.upper);
  for (auto& c : cons) out.add_constraint(c.name, c.row, c.rel, c.rhs);
  out.set_objective(std::move(objective));
  out.validate();
  return out;
}

}  // namespace poadual::lp
