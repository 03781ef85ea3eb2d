#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dynhs::logic {

enum class Op { kFalse, kTrue, kVar, kNot, kAnd, kOr, kImplies, kIff };

// Immutable propositional formula with shared structure.
//
// Equality is structural after sorting the operands of every conjunction and
// disjunction, so `A | B` equals `B | A` but `A & (B & C)` differs from
// `A & B & C`. Copies are cheap.
class Formula {
 public:
  static Formula constant(bool value);
  static Formula var(std::string name);
  static Formula negation(Formula child);
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula biconditional(Formula lhs, Formula rhs);

  Op op() const;
  // Variable name; empty for non-variables.
  const std::string& name() const;
  std::span<const Formula> children() const;

  // Printed form under the standard precedence `! > & > | > -> > <->`,
  // parenthesized only where the structure would otherwise change.
  const std::string& str() const;
  // Printed form of the canonical (operand-sorted) representative.
  const std::string& key() const;

  bool evaluate(const std::function<bool(const std::string&)>& assignment) const;
  void collect_variables(std::set<std::string>& out) const;
  std::size_t hash() const { return std::hash<std::string>{}(key()); }

  friend bool operator==(const Formula& a, const Formula& b) { return a.key() == b.key(); }
  friend bool operator<(const Formula& a, const Formula& b) { return a.key() < b.key(); }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Op op, std::string name, std::vector<Formula> children);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

bool is_identifier(std::string_view text);

// Parses one formula. `#` starts a comment running to end of line.
Formula parse_formula(std::string_view text);

// True when the formula list contains `f` (structural equality).
bool contains(std::span<const Formula> formulas, const Formula& f);

// Order-insensitive comparison of two formula lists treated as sets.
bool same_set(std::span<const Formula> a, std::span<const Formula> b);

}  // namespace dynhs::logic
