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
#include <utility>
#include <vector>

#include "poadual/rational.hpp"

namespace poadual::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEqual, Equal, GreaterEqual };

struct MalformedLp : Error {
  using Error::Error;
};
struct MissingVariable : Error {
  using Error::Error;
};

// Sparse row over variable names. Duplicate names are summed on use.
using Row = std::vector<std::pair<std::string, Rational>>;

struct Variable {
  std::string name;
  std::optional<Rational> lower;  // typically 0
  std::optional<Rational> upper;
};

struct Constraint {
  std::string name;
  Row row;
  Relation rel = Relation::LessEqual;
  Rational rhs;
};

/// An exact-rational linear program. Immutable after construction through the
/// builder calls; `validate` rejects dangling references and duplicate names.
class LinearProgram {
 public:
  LinearProgram() = default;
  LinearProgram(std::string name, Sense sense)
      : name_(std::move(name)), sense_(sense) {}

  void add_variable(const std::string& name,
                    std::optional<Rational> lower = Rational(0),
                    std::optional<Rational> upper = std::nullopt);
  void add_constraint(const std::string& name, Row row, Relation rel,
                      Rational rhs);
  void set_objective(Row row) { objective_ = std::move(row); }

  const std::string& name() const { return name_; }
  Sense sense() const { return sense_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const Row& objective() const { return objective_; }

  bool has_variable(const std::string& name) const {
    return var_index_.count(name) > 0;
  }
  const Variable& variable(const std::string& name) const;
  int variable_index(const std::string& name) const;

  // Throws MalformedLp on dangling variable references or duplicate names.
  void validate() const;

  Rational objective_value(const std::map<std::string, Rational>& point) const;

  bool operator==(const LinearProgram& other) const;

 private:
  std::string name_;
  Sense sense_ = Sense::Minimize;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::map<std::string, int> var_index_;
  std::map<std::string, int> con_index_;
  Row objective_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

std::string to_string(SolveStatus s);

/// Result of an exact solve. When status is Optimal the primal and dual
/// assignments are both feasible and their objectives are equal; solve()
/// verifies this before returning.
struct SolveResult {
  SolveStatus status = SolveStatus::Optimal;
  std::map<std::string, Rational> primal;
  std::map<std::string, Rational> dual;  // keyed by constraint name
  Rational objective;
};

/// Signed violations per constraint. Convention: violation of "lhs <= rhs" is
/// lhs - rhs, of "lhs >= rhs" is rhs - lhs, of "lhs = rhs" is |lhs - rhs|;
/// variable bound violations are included under the variable's name.
struct ResidualReport {
  std::map<std::string, Rational> violation;
  Rational worst_violation;
  std::string worst_name;  // lexicographically first among ties
  bool feasible = false;
};

/// Textbook two-phase primal simplex with Bland's rule, exact rational
/// arithmetic throughout. Entering/leaving ties are broken lexicographically
/// by variable name so results are bit-for-bit reproducible.
SolveResult solve(const LinearProgram& lp);

/// Mechanical dualization. Variables bounded as [0,inf), (-inf,0] or free are
/// dualized natively; any other finite bound is first materialized as an
/// explicit constraint named "bnd.lo(v)" / "bnd.hi(v)". Dual variables take
/// the names of primal constraints and vice versa, so dual_of(dual_of(lp))
/// reproduces lp verbatim on natively-bounded programs.
LinearProgram dual_of(const LinearProgram& lp);

/// Rewrites general variable bounds as explicit rows (identity when all
/// bounds are already native).
LinearProgram materialize_bounds(const LinearProgram& lp);

/// Exact residuals of `candidate` against all constraints and bounds of `lp`.
/// Every variable of lp must be assigned, else MissingVariable.
ResidualReport feasibility_residuals(
    const LinearProgram& lp, const std::map<std::string, Rational>& candidate);

/// Line-oriented plain-text serialization with exact round-trip.
std::string to_text(const LinearProgram& lp);
LinearProgram from_text(const std::string& text);

}  // namespace poadual::lp
