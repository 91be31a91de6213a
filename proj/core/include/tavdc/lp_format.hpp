#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tavdc::lp {

struct Term {
  double coef = 1.0;
  std::string var;
  bool operator==(const Term&) const = default;
};

enum class Sense { le, ge, eq };

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::eq;
  double rhs = 0.0;
  bool operator==(const Constraint&) const = default;
};

struct Bound {
  std::string var;
  double lower = 0.0;
  double upper = 0.0;  // use +/-infinity for open ends
  bool operator==(const Bound&) const = default;
};

// A mixed-integer linear model in the shape of the CPLEX LP file grammar.
// Variables without an explicit bound live in [0, +inf).
struct Model {
  bool minimize = true;
  std::string objective_name = "obj";
  std::vector<Term> objective;
  std::vector<Constraint> constraints;
  std::vector<Bound> bounds;
  std::vector<std::string> generals;
  std::vector<std::string> binaries;
  std::string comment;

  std::size_t count_variables_with_prefix(std::string_view prefix) const;
  // Every distinct variable name, in first-appearance order.
  std::vector<std::string> variables() const;
};

std::string write(const Model& model);

// Parses the subset of the LP grammar that write() produces plus the usual
// variations (Maximize, st/s.t., Generals/Integers, Binaries, free bounds,
// multi-line expressions). Throws InputError on malformed text.
Model parse(std::string_view text);

using Assignment = std::unordered_map<std::string, double>;

// "name = value" lines; blank lines and lines starting with '#' or '\' are
// skipped. Throws InputError on malformed lines or duplicate names.
Assignment parse_assignment(std::string_view text);
// Sorted by name so output is reproducible.
std::string write_assignment(const Assignment& values);

struct FamilyCheck {
  std::size_t checked = 0;
  std::size_t violated = 0;
  std::string first_violation;  // constraint or variable name
};

struct Evaluation {
  double objective = 0.0;
  // Keyed by family: the token between the leading 'c' and the first '_' of
  // a constraint name (e.g. "c9_3_7" -> "9"), plus "bounds" and
  // "integrality".
  std::map<std::string, FamilyCheck> families;

  bool feasible() const;
};

// Missing variables evaluate to 0. A row is satisfied when its violation is
// at most tol * max(1, |rhs|).
Evaluation evaluate(const Model& model, const Assignment& values, double tol = 1e-6);

// Family tag of a constraint name, see Evaluation.
std::string family_of(std::string_view constraint_name);

}  // namespace tavdc::lp
