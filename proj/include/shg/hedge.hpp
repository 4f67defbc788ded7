#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace shg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax error in SH notation; `position` is a byte offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Type violation; `offending` is the notation of the sub-edge that broke a
/// type inference rule.
class TypeError : public Error {
 public:
  TypeError(const std::string& what, std::string offending)
      : Error(what + ": " + offending), offending_(std::move(offending)) {}
  const std::string& offending() const { return offending_; }

 private:
  std::string offending_;
};

enum class TypeCode : char {
  Concept = 'C',
  Predicate = 'P',
  Modifier = 'M',
  Builder = 'B',
  Trigger = 'T',
  Conjunction = 'J',
  Relation = 'R',
  Specifier = 'S',
};

char code_char(TypeCode t);
std::optional<TypeCode> type_from_char(char c);
bool is_connector_type(TypeCode t);
bool is_atomic_type(TypeCode t);

struct Atom {
  std::string root;
  TypeCode type = TypeCode::Concept;
  std::string roles;  // empty when absent
  std::string ns;     // empty when absent

  std::string str() const;
  Atom without_roles() const;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Immutable recursive ordered hyperedge. Copies share structure; equality is
/// structural and ordering follows the canonical notation.
class Hyperedge {
 public:
  Hyperedge(Atom atom);  // NOLINT(google-explicit-constructor)
  explicit Hyperedge(std::vector<Hyperedge> elements);

  bool is_atom() const;
  const Atom& atom() const;
  std::span<const Hyperedge> elements() const;
  const Hyperedge& connector() const;
  std::span<const Hyperedge> args() const;
  /// Number of immediate elements; 1 for atoms.
  std::size_t arity() const;
  std::size_t hash() const;
  const std::string& str() const;

  friend bool operator==(const Hyperedge& a, const Hyperedge& b);
  friend bool operator<(const Hyperedge& a, const Hyperedge& b) { return a.str() < b.str(); }

 private:
  struct Node;
  std::shared_ptr<const Node> node_;
};

struct HyperedgeHash {
  std::size_t operator()(const Hyperedge& e) const { return e.hash(); }
};

Atom parse_atom(std::string_view text, std::size_t offset = 0);
Hyperedge parse_notation(std::string_view text);
std::string to_string(const Hyperedge& edge);

/// Checks the strict predicate/builder role alphabets. Parsing is more
/// permissive because some printed examples use extra role letters.
bool validate_roles(const Atom& atom);

TypeCode infer_type(const Hyperedge& edge);
std::optional<TypeCode> try_infer_type(const Hyperedge& edge);

/// Distinct atoms in first-occurrence order.
std::vector<Atom> atoms_of(const Hyperedge& edge);
/// Count of atom occurrences at every depth.
std::size_t size_of(const Hyperedge& edge);
/// Every sub-edge including the edge itself, pre-order, with repetition.
std::vector<Hyperedge> subedges(const Hyperedge& edge);
bool contains_subedge(const Hyperedge& edge, const Hyperedge& needle);

/// Strips (M x) wrappers down to the base atom.
Atom innermost_atom(const Hyperedge& edge);
/// Role string carried by the innermost atom of the connector.
std::string argument_roles(const Hyperedge& edge);
/// Replaces the roles on the innermost atom of a connector chain.
Hyperedge with_connector_roles(const Hyperedge& connector, const std::string& roles);

Hyperedge main_concept(const Hyperedge& edge);

Hyperedge make_edge(std::initializer_list<Hyperedge> elements);
Hyperedge make_atom(std::string root, TypeCode type, std::string roles = {}, std::string ns = {});

}  // namespace shg

template <>
struct std::hash<shg::Hyperedge> {
  std::size_t operator()(const shg::Hyperedge& e) const { return e.hash(); }
};
