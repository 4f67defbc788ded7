#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shg/hedge.hpp"

namespace shg {

/// Argument role constraint attached to a pattern connector.
///   sc       ordered slots
///   {sc}     any order
///   [sp]     one slot accepting either letter
///   -sp      forbidden roles
struct RoleSpec {
  bool present = false;
  bool unordered = false;
  std::vector<std::string> slots;  // allowed letters per slot
  std::string forbidden;

  std::string str() const;
  /// Checks a role string in isolation (used outside connector position).
  bool admits(const std::string& roles) const;
};

RoleSpec parse_role_spec(std::string_view text);

struct PatternAtom {
  enum class Kind { Literal, Variable, Wildcard, Sequence };
  Kind kind = Kind::Literal;
  std::string name;                // Variable and named Sequence
  std::vector<std::string> roots;  // Literal alternatives
  std::vector<TypeCode> types;     // empty: any type
  RoleSpec roles;
  std::string ns;
  bool nest_skip = false;

  std::string str() const;
};

/// A pattern term: an atom, an edge of terms, or `(NAME/T...)`, which binds a
/// non-atomic edge of type T to NAME.
struct PatternNode {
  enum class Kind { Atom, Edge, BoundEdge };
  Kind kind = Kind::Atom;
  PatternAtom atom;                  // Atom, and name/types of BoundEdge
  std::vector<PatternNode> elements;  // Edge

  std::string str() const;
  bool is_sequence() const { return kind == Kind::Atom && atom.kind == PatternAtom::Kind::Sequence; }
};

class Pattern {
 public:
  Pattern() = default;
  explicit Pattern(PatternNode root) : root_(std::move(root)) {}

  const PatternNode& root() const { return root_; }
  std::string str() const { return root_.str(); }
  /// Variable and sequence names in first-occurrence order.
  std::vector<std::string> variables() const;

  friend bool operator==(const Pattern& a, const Pattern& b) { return a.str() == b.str(); }
  friend bool operator<(const Pattern& a, const Pattern& b) { return a.str() < b.str(); }

 private:
  PatternNode root_;
};

Pattern parse_pattern(std::string_view text);
/// Literal pattern equal to `edge`; roles become ordered role specs.
Pattern pattern_from_edge(const Hyperedge& edge);

struct Binding {
  std::map<std::string, Hyperedge> vars;
  std::map<std::string, std::vector<Hyperedge>> seqs;

  std::string str() const;
  friend bool operator==(const Binding& a, const Binding& b) { return a.str() == b.str(); }
};

std::vector<Binding> match(const Hyperedge& edge, const Pattern& pattern, const Binding& initial = {});
bool matches(const Hyperedge& edge, const Pattern& pattern);

/// First pattern is matched against `edge`, the remaining ones against any
/// edge of `collection`; bindings must agree across all of them.
std::vector<Binding> match_all(const Hyperedge& edge, const std::vector<Pattern>& patterns,
                               const std::vector<Hyperedge>& collection = {});

struct Rule {
  std::vector<Pattern> lhs;  // conjunction; never empty
  Pattern rhs;

  std::string str() const;
};

/// "lhs |- rhs", where lhs may join several patterns with " & ".
Rule parse_rule(std::string_view text);
std::vector<Rule> parse_rule_file(std::istream& in);

Hyperedge instantiate(const Pattern& pattern, const Binding& binding);

/// One rewritten edge per binding per matching sub-edge, in pre-order.
std::vector<Hyperedge> apply_rule(const Hyperedge& edge, const Rule& rule,
                                  const std::vector<Hyperedge>& collection = {});

}  // namespace shg
