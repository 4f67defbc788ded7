#include "shg/hedge.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_set>
#include <variant>

namespace shg {

char code_char(TypeCode t) { return static_cast<char>(t); }

std::optional<TypeCode> type_from_char(char c) {
  switch (c) {
    case 'C': return TypeCode::Concept;
    case 'P': return TypeCode::Predicate;
    case 'M': return TypeCode::Modifier;
    case 'B': return TypeCode::Builder;
    case 'T': return TypeCode::Trigger;
    case 'J': return TypeCode::Conjunction;
    case 'R': return TypeCode::Relation;
    case 'S': return TypeCode::Specifier;
    default: return std::nullopt;
  }
}

bool is_connector_type(TypeCode t) {
  return t == TypeCode::Predicate || t == TypeCode::Modifier || t == TypeCode::Builder ||
         t == TypeCode::Trigger || t == TypeCode::Conjunction;
}

bool is_atomic_type(TypeCode t) { return t != TypeCode::Relation && t != TypeCode::Specifier; }

std::string Atom::str() const {
  std::string out = root;
  out += '/';
  out += code_char(type);
  if (!roles.empty()) {
    out += '.';
    out += roles;
  }
  if (!ns.empty()) {
    out += '/';
    out += ns;
  }
  return out;
}

Atom Atom::without_roles() const {
  Atom a = *this;
  a.roles.clear();
  return a;
}

struct Hyperedge::Node {
  std::variant<Atom, std::vector<Hyperedge>> value;
  std::string text;
  std::size_t hash = 0;
};

namespace {

std::string render(const std::variant<Atom, std::vector<Hyperedge>>& value) {
  if (const auto* atom = std::get_if<Atom>(&value)) return atom->str();
  const auto& elems = std::get<std::vector<Hyperedge>>(value);
  std::string out = "(";
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (i) out += ' ';
    out += elems[i].str();
  }
  out += ')';
  return out;
}

}  // namespace

Hyperedge::Hyperedge(Atom atom) {
  auto node = std::make_shared<Node>();
  node->value = std::move(atom);
  node->text = render(node->value);
  node->hash = std::hash<std::string>{}(node->text);
  node_ = std::move(node);
}

Hyperedge::Hyperedge(std::vector<Hyperedge> elements) {
  if (elements.size() < 2) {
    throw Error("non-atomic hyperedge needs at least two elements");
  }
  auto node = std::make_shared<Node>();
  node->value = std::move(elements);
  node->text = render(node->value);
  node->hash = std::hash<std::string>{}(node->text);
  node_ = std::move(node);
}

bool Hyperedge::is_atom() const { return std::holds_alternative<Atom>(node_->value); }

const Atom& Hyperedge::atom() const {
  if (!is_atom()) throw Error("not an atom: " + str());
  return std::get<Atom>(node_->value);
}

std::span<const Hyperedge> Hyperedge::elements() const {
  if (is_atom()) return {};
  return std::get<std::vector<Hyperedge>>(node_->value);
}

const Hyperedge& Hyperedge::connector() const {
  if (is_atom()) throw Error("atom has no connector: " + str());
  return std::get<std::vector<Hyperedge>>(node_->value).front();
}

std::span<const Hyperedge> Hyperedge::args() const {
  if (is_atom()) return {};
  return elements().subspan(1);
}

std::size_t Hyperedge::arity() const { return is_atom() ? 1 : elements().size(); }

std::size_t Hyperedge::hash() const { return node_->hash; }

const std::string& Hyperedge::str() const { return node_->text; }

bool operator==(const Hyperedge& a, const Hyperedge& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->hash == b.node_->hash && a.node_->text == b.node_->text;
}

namespace {

bool is_label_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '/';
}

bool is_role_char(char c) { return (c >= 'a' && c <= 'z') || c == '?'; }

class NotationParser {
 public:
  explicit NotationParser(std::string_view text) : text_(text) {}

  Hyperedge parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty input", pos_);
    Hyperedge e = parse_term();
    skip_space();
    if (pos_ < text_.size()) {
      throw ParseError(text_[pos_] == ')' ? "unbalanced ')'" : "trailing input", pos_);
    }
    return e;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Hyperedge parse_term() {
    if (text_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
    if (text_[pos_] != '(') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != '(' && text_[pos_] != ')') {
        ++pos_;
      }
      return Hyperedge(parse_atom(text_.substr(start, pos_ - start), start));
    }
    std::size_t open = pos_++;
    std::vector<Hyperedge> elems;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) throw ParseError("unbalanced '('", open);
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      elems.push_back(parse_term());
    }
    if (elems.empty()) throw ParseError("empty edge", open);
    if (elems.size() == 1) return elems.front();
    auto head = try_infer_type(elems.front());
    if (!head || !is_connector_type(*head)) {
      throw ParseError("first element is not a connector: " + elems.front().str(), open + 1);
    }
    return Hyperedge(std::move(elems));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Atom parse_atom(std::string_view text, std::size_t offset) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) throw ParseError("atom without type code: " + std::string(text), offset);
  std::string_view root = text.substr(0, slash);
  if (root.empty()) throw ParseError("empty atom label", offset);
  for (char c : root) {
    if (!is_label_char(c)) throw ParseError("invalid character in atom label", offset);
  }
  std::string_view rest = text.substr(slash + 1);
  std::string_view ns;
  auto slash2 = rest.find('/');
  if (slash2 != std::string_view::npos) {
    ns = rest.substr(slash2 + 1);
    rest = rest.substr(0, slash2);
    if (ns.empty() || ns.find('/') != std::string_view::npos) {
      throw ParseError("invalid namespace in atom " + std::string(text), offset);
    }
  }
  if (rest.empty()) throw ParseError("missing type code in atom " + std::string(text), offset);
  auto type = type_from_char(rest[0]);
  if (!type || !is_atomic_type(*type)) {
    throw ParseError("bad type code in atom " + std::string(text), offset + slash + 1);
  }
  Atom atom;
  atom.root.reserve(root.size());
  for (char c : root) atom.root += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  atom.type = *type;
  atom.ns = std::string(ns);
  if (rest.size() > 1) {
    if (rest[1] != '.' || rest.size() == 2) {
      throw ParseError("malformed type annotation in atom " + std::string(text), offset + slash + 2);
    }
    std::string_view roles = rest.substr(2);
    for (char c : roles) {
      if (!is_role_char(c)) throw ParseError("bad role character in atom " + std::string(text), offset);
    }
    if (*type != TypeCode::Predicate && *type != TypeCode::Builder) {
      throw ParseError("roles on a non-predicate, non-builder atom " + std::string(text), offset);
    }
    atom.roles = std::string(roles);
  }
  return atom;
}

Hyperedge parse_notation(std::string_view text) { return NotationParser(text).parse(); }

std::string to_string(const Hyperedge& edge) { return edge.str(); }

bool validate_roles(const Atom& atom) {
  static const std::string predicate_roles = "spacoitjxr?";
  static const std::string builder_roles = "ma?";
  if (atom.roles.empty()) return true;
  const std::string* alphabet = nullptr;
  if (atom.type == TypeCode::Predicate) alphabet = &predicate_roles;
  if (atom.type == TypeCode::Builder) alphabet = &builder_roles;
  if (!alphabet) return false;
  return std::all_of(atom.roles.begin(), atom.roles.end(),
                     [&](char c) { return alphabet->find(c) != std::string::npos; });
}

namespace {

TypeCode infer_checked(const Hyperedge& edge) {
  if (edge.is_atom()) return edge.atom().type;
  TypeCode conn = infer_checked(edge.connector());
  std::vector<TypeCode> args;
  for (const auto& a : edge.args()) args.push_back(infer_checked(a));
  auto in = [](TypeCode t, std::initializer_list<TypeCode> set) {
    return std::find(set.begin(), set.end(), t) != set.end();
  };
  switch (conn) {
    case TypeCode::Modifier:
      if (args.size() != 1) throw TypeError("modifier takes exactly one argument", edge.str());
      return args[0];
    case TypeCode::Builder:
      if (args.size() < 2) throw TypeError("builder needs at least two concepts", edge.str());
      for (auto t : args) {
        if (t != TypeCode::Concept) throw TypeError("builder arguments must be concepts", edge.str());
      }
      return TypeCode::Concept;
    case TypeCode::Trigger:
      if (args.size() != 1 || !in(args[0], {TypeCode::Concept, TypeCode::Relation})) {
        throw TypeError("trigger takes one concept or relation", edge.str());
      }
      return TypeCode::Specifier;
    case TypeCode::Predicate:
      for (auto t : args) {
        if (!in(t, {TypeCode::Concept, TypeCode::Relation, TypeCode::Specifier})) {
          throw TypeError("predicate arguments must be concepts, relations or specifiers", edge.str());
        }
      }
      return TypeCode::Relation;
    case TypeCode::Conjunction:
      if (args.size() < 2) throw TypeError("conjunction needs at least two arguments", edge.str());
      return args[0];
    default:
      throw TypeError("first element is not a connector", edge.str());
  }
}

}  // namespace

TypeCode infer_type(const Hyperedge& edge) { return infer_checked(edge); }

std::optional<TypeCode> try_infer_type(const Hyperedge& edge) {
  try {
    return infer_checked(edge);
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

std::vector<Atom> atoms_of(const Hyperedge& edge) {
  std::vector<Atom> out;
  std::unordered_set<std::string> seen;
  std::function<void(const Hyperedge&)> walk = [&](const Hyperedge& e) {
    if (e.is_atom()) {
      if (seen.insert(e.str()).second) out.push_back(e.atom());
      return;
    }
    for (const auto& c : e.elements()) walk(c);
  };
  walk(edge);
  return out;
}

std::size_t size_of(const Hyperedge& edge) {
  if (edge.is_atom()) return 1;
  std::size_t n = 0;
  for (const auto& c : edge.elements()) n += size_of(c);
  return n;
}

std::vector<Hyperedge> subedges(const Hyperedge& edge) {
  std::vector<Hyperedge> out;
  std::function<void(const Hyperedge&)> walk = [&](const Hyperedge& e) {
    out.push_back(e);
    for (const auto& c : e.elements()) walk(c);
  };
  walk(edge);
  return out;
}

bool contains_subedge(const Hyperedge& edge, const Hyperedge& needle) {
  if (edge == needle) return true;
  for (const auto& c : edge.elements()) {
    if (contains_subedge(c, needle)) return true;
  }
  return false;
}

Atom innermost_atom(const Hyperedge& edge) {
  const Hyperedge* cur = &edge;
  while (!cur->is_atom()) {
    auto conn = try_infer_type(cur->connector());
    if (!conn || *conn != TypeCode::Modifier || cur->args().size() != 1) {
      throw Error("not a modifier chain: " + edge.str());
    }
    cur = &cur->args()[0];
  }
  return cur->atom();
}

std::string argument_roles(const Hyperedge& edge) {
  if (edge.is_atom()) return {};
  try {
    return innermost_atom(edge.connector()).roles;
  } catch (const Error&) {
    return {};
  }
}

Hyperedge with_connector_roles(const Hyperedge& connector, const std::string& roles) {
  if (connector.is_atom()) {
    Atom a = connector.atom();
    a.roles = roles;
    return Hyperedge(std::move(a));
  }
  // (M x): the roles live on the innermost atom
  std::vector<Hyperedge> elems(connector.elements().begin(), connector.elements().end());
  elems.back() = with_connector_roles(elems.back(), roles);
  return Hyperedge(std::move(elems));
}

Hyperedge main_concept(const Hyperedge& edge) {
  if (edge.is_atom()) throw Error("atomic concept has no main concept: " + edge.str());
  if (infer_type(edge) != TypeCode::Concept) throw Error("not a concept: " + edge.str());
  TypeCode conn = infer_type(edge.connector());
  if (conn == TypeCode::Modifier) return edge.args()[0];
  if (conn != TypeCode::Builder) throw Error("concept is not built by a modifier or builder: " + edge.str());
  std::string roles = argument_roles(edge);
  if (roles.empty()) {
    Atom conn_atom = innermost_atom(edge.connector());
    if (conn_atom.root != "+") return edge.args()[0];
    throw Error("ambiguous main concept (compound without roles): " + edge.str());
  }
  std::optional<std::size_t> main;
  for (std::size_t i = 0; i < roles.size() && i < edge.args().size(); ++i) {
    if (roles[i] != 'm') continue;
    if (main) throw Error("ambiguous main concept (several main roles): " + edge.str());
    main = i;
  }
  if (!main) throw Error("ambiguous main concept (no main role): " + edge.str());
  return edge.args()[*main];
}

Hyperedge make_edge(std::initializer_list<Hyperedge> elements) {
  return Hyperedge(std::vector<Hyperedge>(elements));
}

Hyperedge make_atom(std::string root, TypeCode type, std::string roles, std::string ns) {
  return Hyperedge(Atom{std::move(root), type, std::move(roles), std::move(ns)});
}

}  // namespace shg
