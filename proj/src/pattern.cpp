#include "shg/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>
#include <sstream>

namespace shg {

namespace {

bool is_variable_name(std::string_view s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::string types_str(const std::vector<TypeCode>& types) {
  if (types.empty()) return "*";
  if (types.size() == 1) return std::string(1, code_char(types[0]));
  std::string out = "[";
  for (auto t : types) out += code_char(t);
  return out + "]";
}

bool type_ok(const std::vector<TypeCode>& types, const Hyperedge& e) {
  if (types.empty()) return true;
  auto t = try_infer_type(e);
  return t && std::find(types.begin(), types.end(), *t) != types.end();
}

std::optional<Atom> try_innermost(const Hyperedge& e) {
  try {
    return innermost_atom(e);
  } catch (const Error&) {
    return std::nullopt;
  }
}

// Roles an edge carries itself: an atom's own roles or those of the innermost
// atom of a modifier chain.
std::string own_roles(const Hyperedge& e) {
  auto a = try_innermost(e);
  return a ? a->roles : std::string();
}

bool in_slot(const std::string& slot, char role) { return role != '\0' && slot.find(role) != std::string::npos; }

}  // namespace

// ---------------------------------------------------------------------------
// Rendering

std::string RoleSpec::str() const {
  std::string out;
  if (unordered) out += '{';
  for (const auto& s : slots) out += s.size() == 1 ? s : "[" + s + "]";
  if (unordered) out += '}';
  if (!forbidden.empty()) out += "-" + forbidden;
  return out;
}

bool RoleSpec::admits(const std::string& roles) const {
  for (char c : roles) {
    if (forbidden.find(c) != std::string::npos) return false;
  }
  if (!unordered) {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (i >= roles.size() || !in_slot(slots[i], roles[i])) return false;
    }
    return true;
  }
  std::vector<bool> used(roles.size(), false);
  auto assign = [&](auto&& self, std::size_t i) -> bool {
    if (i == slots.size()) return true;
    for (std::size_t j = 0; j < roles.size(); ++j) {
      if (used[j] || !in_slot(slots[i], roles[j])) continue;
      used[j] = true;
      if (self(self, i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  return assign(assign, 0);
}

RoleSpec parse_role_spec(std::string_view text) {
  RoleSpec spec;
  if (text.empty()) return spec;
  spec.present = true;
  std::size_t i = 0;
  std::size_t end = text.size();
  if (text[0] == '{') {
    auto close = text.find('}');
    if (close == std::string_view::npos) throw ParseError("unclosed '{' in role spec", 0);
    spec.unordered = true;
    i = 1;
    end = close;
  } else {
    auto dash = text.find('-');
    if (dash != std::string_view::npos) end = dash;
  }
  while (i < end) {
    char c = text[i];
    if (c == ',') {
      ++i;
    } else if (c == '[') {
      auto close = text.find(']', i);
      if (close == std::string_view::npos || close > end) throw ParseError("unclosed '[' in role spec", i);
      std::string slot(text.substr(i + 1, close - i - 1));
      if (slot.empty()) throw ParseError("empty role alternative", i);
      spec.slots.push_back(slot);
      i = close + 1;
    } else if ((c >= 'a' && c <= 'z') || c == '?') {
      spec.slots.emplace_back(1, c);
      ++i;
    } else {
      throw ParseError(std::string("bad role character '") + c + "'", i);
    }
  }
  std::size_t rest = spec.unordered ? end + 1 : end;
  if (rest < text.size()) {
    if (text[rest] != '-') throw ParseError("unexpected text after role set", rest);
    for (std::size_t k = rest + 1; k < text.size(); ++k) {
      char c = text[k];
      if (!((c >= 'a' && c <= 'z') || c == '?')) throw ParseError("bad forbidden role character", k);
      spec.forbidden += c;
    }
  }
  return spec;
}

std::string PatternAtom::str() const {
  std::string out = nest_skip ? ">" : "";
  switch (kind) {
    case Kind::Variable: out += name; break;
    case Kind::Wildcard: out += "*"; break;
    case Kind::Sequence: out += name; break;
    case Kind::Literal:
      if (roots.size() == 1) {
        out += roots[0];
      } else {
        out += "[";
        for (std::size_t i = 0; i < roots.size(); ++i) out += (i ? "," : "") + roots[i];
        out += "]";
      }
      break;
  }
  if (!types.empty() || roles.present || !ns.empty()) {
    out += "/" + types_str(types);
    if (roles.present) out += "." + roles.str();
    if (!ns.empty()) out += "/" + ns;
  }
  if (kind == Kind::Sequence) out += "...";
  return out;
}

std::string PatternNode::str() const {
  switch (kind) {
    case Kind::Atom: return atom.str();
    case Kind::BoundEdge: return "(" + atom.str() + "...)";
    case Kind::Edge: {
      std::string out = "(";
      for (std::size_t i = 0; i < elements.size(); ++i) out += (i ? " " : "") + elements[i].str();
      return out + ")";
    }
  }
  return {};
}

std::vector<std::string> Pattern::variables() const {
  std::vector<std::string> out;
  auto add = [&](const std::string& n) {
    if (!n.empty() && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
  };
  auto walk = [&](auto&& self, const PatternNode& n) -> void {
    if (n.kind == PatternNode::Kind::Edge) {
      for (const auto& e : n.elements) self(self, e);
    } else {
      add(n.atom.name);
    }
  };
  walk(walk, root_);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

PatternAtom parse_pattern_atom(std::string_view tok, std::size_t offset) {
  PatternAtom a;
  if (!tok.empty() && tok[0] == '>') {
    a.nest_skip = true;
    tok.remove_prefix(1);
    ++offset;
  }
  if (tok == "...") {
    a.kind = PatternAtom::Kind::Sequence;
    return a;
  }
  bool seq = tok.size() > 3 && tok.substr(tok.size() - 3) == "...";
  if (seq) tok.remove_suffix(3);

  std::string_view head = tok, rest;
  bool has_type = false;
  if (!tok.empty() && tok[0] == '[') {
    auto close = tok.find(']');
    if (close == std::string_view::npos) throw ParseError("unclosed '[' in pattern atom", offset);
    head = tok.substr(0, close + 1);
    if (close + 1 < tok.size()) {
      if (tok[close + 1] != '/') throw ParseError("expected '/' after root alternatives", offset + close + 1);
      rest = tok.substr(close + 2);
      has_type = true;
    }
  } else if (auto slash = tok.find('/'); slash != std::string_view::npos) {
    head = tok.substr(0, slash);
    rest = tok.substr(slash + 1);
    has_type = true;
  }
  if (head.empty()) throw ParseError("empty pattern atom", offset);

  if (head == "*") {
    a.kind = PatternAtom::Kind::Wildcard;
  } else if (is_variable_name(head)) {
    a.kind = seq ? PatternAtom::Kind::Sequence : PatternAtom::Kind::Variable;
    a.name = std::string(head);
  } else if (head[0] == '[') {
    a.kind = PatternAtom::Kind::Literal;
    std::string inner(head.substr(1, head.size() - 2));
    std::stringstream ss(inner);
    std::string r;
    while (std::getline(ss, r, ',')) {
      if (r.empty()) throw ParseError("empty root alternative", offset);
      for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      a.roots.push_back(r);
    }
    if (a.roots.empty()) throw ParseError("empty root alternatives", offset);
  } else {
    a.kind = PatternAtom::Kind::Literal;
    std::string r(head);
    for (auto& c : r) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    a.roots.push_back(r);
  }
  if (seq && a.kind != PatternAtom::Kind::Sequence) throw ParseError("only variables may be sequences", offset);

  if (has_type) {
    if (rest.empty()) throw ParseError("missing type after '/'", offset);
    std::size_t i = 0;
    if (rest[0] == '*') {
      i = 1;
    } else if (rest[0] == '[') {
      auto close = rest.find(']');
      if (close == std::string_view::npos) throw ParseError("unclosed type alternatives", offset);
      for (char c : rest.substr(1, close - 1)) {
        auto t = type_from_char(c);
        if (!t) throw ParseError(std::string("bad type code '") + c + "'", offset);
        a.types.push_back(*t);
      }
      i = close + 1;
    } else {
      auto t = type_from_char(rest[0]);
      if (!t) throw ParseError(std::string("bad type code '") + rest[0] + "'", offset);
      a.types.push_back(*t);
      i = 1;
    }
    rest.remove_prefix(i);
    if (!rest.empty() && rest[0] == '.') {
      auto slash = rest.find('/');
      a.roles = parse_role_spec(rest.substr(1, slash == std::string_view::npos ? std::string_view::npos : slash - 1));
      rest = slash == std::string_view::npos ? std::string_view() : rest.substr(slash);
    }
    if (!rest.empty()) {
      if (rest[0] != '/' || rest.size() == 1) throw ParseError("malformed pattern atom " + std::string(tok), offset);
      a.ns = std::string(rest.substr(1));
    }
  }
  return a;
}

class PatternParser {
 public:
  explicit PatternParser(std::string_view text) : text_(text) {}

  PatternNode parse() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("empty pattern", pos_);
    PatternNode n = term();
    skip_space();
    if (pos_ < text_.size()) throw ParseError(text_[pos_] == ')' ? "unbalanced ')'" : "trailing input", pos_);
    return n;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  PatternNode term() {
    if (text_[pos_] == ')') throw ParseError("unbalanced ')'", pos_);
    if (text_[pos_] != '(') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
             text_[pos_] != ')') {
        ++pos_;
      }
      PatternNode n;
      n.atom = parse_pattern_atom(text_.substr(start, pos_ - start), start);
      return n;
    }
    std::size_t open = pos_++;
    std::vector<PatternNode> elems;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) throw ParseError("unbalanced '('", open);
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      elems.push_back(term());
    }
    if (elems.empty()) throw ParseError("empty edge", open);
    if (elems.size() == 1) {
      if (elems[0].is_sequence() && !elems[0].atom.name.empty()) {
        PatternNode n;
        n.kind = PatternNode::Kind::BoundEdge;
        n.atom = elems[0].atom;
        n.atom.kind = PatternAtom::Kind::Variable;
        return n;
      }
      return elems[0];
    }
    PatternNode n;
    n.kind = PatternNode::Kind::Edge;
    n.elements = std::move(elems);
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Pattern parse_pattern(std::string_view text) { return Pattern(PatternParser(text).parse()); }

Pattern pattern_from_edge(const Hyperedge& edge) {
  auto convert = [](auto&& self, const Hyperedge& e) -> PatternNode {
    PatternNode n;
    if (e.is_atom()) {
      const Atom& at = e.atom();
      n.atom.kind = PatternAtom::Kind::Literal;
      n.atom.roots = {at.root};
      n.atom.types = {at.type};
      n.atom.ns = at.ns;
      if (!at.roles.empty()) n.atom.roles = parse_role_spec(at.roles);
      return n;
    }
    n.kind = PatternNode::Kind::Edge;
    for (const auto& c : e.elements()) n.elements.push_back(self(self, c));
    return n;
  };
  return Pattern(convert(convert, edge));
}

// ---------------------------------------------------------------------------
// Matching

std::string Binding::str() const {
  std::string out;
  for (const auto& [k, v] : vars) out += k + "=" + v.str() + ";";
  for (const auto& [k, v] : seqs) {
    out += k + "=[";
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i].str();
    out += "];";
  }
  return out;
}

namespace {

using Out = std::vector<Binding>;

struct ArgRef {
  const Hyperedge* edge;
  char role;
};

struct PItem {
  const PatternNode* node;
  const std::string* slot;  // null: unconstrained
};

class Matcher {
 public:
  void node(const PatternNode& p, const Hyperedge& e, const Binding& b, Out& out, bool connector) {
    switch (p.kind) {
      case PatternNode::Kind::Atom: atom(p.atom, e, b, out, connector); return;
      case PatternNode::Kind::BoundEdge:
        if (e.is_atom() || !type_ok(p.atom.types, e)) return;
        bind_var(p.atom.name, e, b, out);
        return;
      case PatternNode::Kind::Edge: edge(p, e, b, out); return;
    }
  }

 private:
  static void bind_var(const std::string& name, const Hyperedge& e, const Binding& b, Out& out) {
    auto it = b.vars.find(name);
    if (it != b.vars.end()) {
      if (it->second == e) out.push_back(b);
      return;
    }
    Binding nb = b;
    nb.vars.emplace(name, e);
    out.push_back(std::move(nb));
  }

  void atom(const PatternAtom& pa, const Hyperedge& e, const Binding& b, Out& out, bool connector) {
    const Hyperedge* subject = &e;
    std::optional<Hyperedge> inner;
    if (pa.nest_skip) {
      auto a = try_innermost(e);
      if (!a) return;
      inner = Hyperedge(*a);
      subject = &*inner;
    }
    if (!connector && pa.roles.present && !pa.roles.admits(own_roles(*subject))) return;
    switch (pa.kind) {
      case PatternAtom::Kind::Sequence: return;
      case PatternAtom::Kind::Wildcard:
        if (type_ok(pa.types, *subject)) out.push_back(b);
        return;
      case PatternAtom::Kind::Literal: {
        if (!subject->is_atom()) return;
        const Atom& at = subject->atom();
        if (std::find(pa.roots.begin(), pa.roots.end(), at.root) == pa.roots.end()) return;
        if (!pa.types.empty() && std::find(pa.types.begin(), pa.types.end(), at.type) == pa.types.end()) return;
        if (!pa.ns.empty() && pa.ns != at.ns) return;
        out.push_back(b);
        return;
      }
      case PatternAtom::Kind::Variable: {
        if (!type_ok(pa.types, *subject)) return;
        if (!pa.nest_skip) {
          bind_var(pa.name, e, b, out);
          return;
        }
        auto it = b.vars.find(pa.name);
        if (it == b.vars.end()) {
          bind_var(pa.name, e, b, out);
          return;
        }
        auto bound = try_innermost(it->second);
        if (bound && bound->without_roles() == subject->atom().without_roles()) out.push_back(b);
        return;
      }
    }
  }

  void edge(const PatternNode& p, const Hyperedge& e, const Binding& b, Out& out) {
    if (e.is_atom()) return;
    const auto& pe = p.elements;
    if (pe[0].is_sequence()) {
      // no connector to anchor on: everything is positional
      std::vector<PItem> ps;
      for (const auto& n : pe) ps.push_back({&n, nullptr});
      std::vector<ArgRef> es;
      for (const auto& x : e.elements()) es.push_back({&x, '\0'});
      positional(ps, 0, es, 0, b, out);
      return;
    }
    Out after_conn;
    node(pe[0], e.connector(), b, after_conn, true);
    if (after_conn.empty()) return;

    std::vector<ArgRef> args;
    const std::string roles = argument_roles(e);
    for (std::size_t i = 0; i < e.args().size(); ++i) {
      args.push_back({&e.args()[i], i < roles.size() ? roles[i] : '\0'});
    }
    std::vector<const PatternNode*> pargs;
    for (std::size_t i = 1; i < pe.size(); ++i) pargs.push_back(&pe[i]);

    const RoleSpec* spec = nullptr;
    if (pe[0].kind == PatternNode::Kind::Atom && pe[0].atom.roles.present) spec = &pe[0].atom.roles;

    for (const auto& cb : after_conn) {
      if (!spec) {
        std::vector<PItem> ps;
        for (const auto* n : pargs) ps.push_back({n, nullptr});
        positional(ps, 0, args, 0, cb, out);
      } else if (spec->unordered) {
        unordered(*spec, pargs, args, cb, out);
      } else {
        ordered(*spec, pargs, args, cb, out);
      }
    }
  }

  static bool forbidden_ok(const RoleSpec& spec, const std::vector<ArgRef>& args) {
    for (const auto& a : args) {
      if (a.role != '\0' && spec.forbidden.find(a.role) != std::string::npos) return false;
    }
    return true;
  }

  static bool any_sequence(const std::vector<const PatternNode*>& ps, std::size_t from) {
    for (std::size_t i = from; i < ps.size(); ++i) {
      if (ps[i]->is_sequence()) return true;
    }
    return false;
  }

  static const PatternNode& open_tail() {
    static const PatternNode tail = [] {
      PatternNode n;
      n.atom.kind = PatternAtom::Kind::Sequence;
      return n;
    }();
    return tail;
  }

  void ordered(const RoleSpec& spec, const std::vector<const PatternNode*>& pargs, const std::vector<ArgRef>& args,
               const Binding& b, Out& out) {
    if (!forbidden_ok(spec, args)) return;
    // slots without a pattern argument still demand an argument at that position
    for (std::size_t i = pargs.size(); i < spec.slots.size(); ++i) {
      if (any_sequence(pargs, 0)) {
        bool found = false;
        for (const auto& a : args) found = found || in_slot(spec.slots[i], a.role);
        if (!found) return;
      } else if (i >= args.size() || !in_slot(spec.slots[i], args[i].role)) {
        return;
      }
    }
    std::vector<PItem> ps;
    for (std::size_t i = 0; i < pargs.size(); ++i) {
      ps.push_back({pargs[i], i < spec.slots.size() ? &spec.slots[i] : nullptr});
    }
    if (!any_sequence(pargs, 0)) ps.push_back({&open_tail(), nullptr});
    positional(ps, 0, args, 0, b, out);
  }

  void unordered(const RoleSpec& spec, const std::vector<const PatternNode*>& pargs, const std::vector<ArgRef>& args,
                 const Binding& b, Out& out) {
    if (!forbidden_ok(spec, args)) return;
    const std::size_t aligned = std::min(pargs.size(), spec.slots.size());
    std::vector<bool> used(args.size(), false);

    auto finish = [&](const Binding& fb) {
      std::vector<bool> taken = used;
      Binding cur = fb;
      // aligned sequences take every remaining argument of their slot
      for (std::size_t i = 0; i < aligned; ++i) {
        if (!pargs[i]->is_sequence()) continue;
        std::vector<Hyperedge> absorbed;
        for (std::size_t j = 0; j < args.size(); ++j) {
          if (taken[j] || !in_slot(spec.slots[i], args[j].role)) continue;
          if (!type_ok(pargs[i]->atom.types, *args[j].edge)) return;
          taken[j] = true;
          absorbed.push_back(*args[j].edge);
        }
        if (!bind_seq(pargs[i]->atom.name, absorbed, cur)) return;
      }
      for (std::size_t i = pargs.size(); i < spec.slots.size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < args.size(); ++j) found = found || (!used[j] && in_slot(spec.slots[i], args[j].role));
        if (!found) return;
      }
      std::vector<ArgRef> rest;
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (!taken[j]) rest.push_back(args[j]);
      }
      std::vector<PItem> ps;
      for (std::size_t i = aligned; i < pargs.size(); ++i) ps.push_back({pargs[i], nullptr});
      if (!any_sequence(pargs, aligned)) ps.push_back({&open_tail(), nullptr});
      positional(ps, 0, rest, 0, cur, out);
    };

    auto assign = [&](auto&& self, std::size_t i, const Binding& cb) -> void {
      if (i == aligned) {
        finish(cb);
        return;
      }
      if (pargs[i]->is_sequence()) {
        self(self, i + 1, cb);
        return;
      }
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (used[j] || !in_slot(spec.slots[i], args[j].role)) continue;
        Out sub;
        node(*pargs[i], *args[j].edge, cb, sub, false);
        if (sub.empty()) continue;
        used[j] = true;
        for (const auto& sb : sub) self(self, i + 1, sb);
        used[j] = false;
      }
    };
    assign(assign, 0, b);
  }

  static bool bind_seq(const std::string& name, const std::vector<Hyperedge>& v, Binding& b) {
    if (name.empty()) return true;
    auto it = b.seqs.find(name);
    if (it != b.seqs.end()) return it->second == v;
    b.seqs.emplace(name, v);
    return true;
  }

  void positional(const std::vector<PItem>& ps, std::size_t pi, const std::vector<ArgRef>& es, std::size_t ei,
                  const Binding& b, Out& out) {
    if (pi == ps.size()) {
      if (ei == es.size()) out.push_back(b);
      return;
    }
    const PItem& p = ps[pi];
    if (p.node->is_sequence()) {
      const auto& pa = p.node->atom;
      std::vector<Hyperedge> absorbed;
      for (std::size_t n = 0;; ++n) {
        Binding nb = b;
        if (bind_seq(pa.name, absorbed, nb)) positional(ps, pi + 1, es, ei + n, nb, out);
        if (ei + n >= es.size()) break;
        const ArgRef& next = es[ei + n];
        if (p.slot && !in_slot(*p.slot, next.role)) break;
        if (!type_ok(pa.types, *next.edge)) break;
        absorbed.push_back(*next.edge);
      }
      return;
    }
    if (ei >= es.size()) return;
    if (p.slot && !in_slot(*p.slot, es[ei].role)) return;
    Out sub;
    node(*p.node, *es[ei].edge, b, sub, false);
    for (const auto& sb : sub) positional(ps, pi + 1, es, ei + 1, sb, out);
  }
};

std::vector<Binding> dedupe(const std::vector<Binding>& in) {
  std::vector<Binding> out;
  std::set<std::string> seen;
  for (const auto& b : in) {
    if (seen.insert(b.str()).second) out.push_back(b);
  }
  return out;
}

}  // namespace

std::vector<Binding> match(const Hyperedge& edge, const Pattern& pattern, const Binding& initial) {
  Out out;
  Matcher m;
  m.node(pattern.root(), edge, initial, out, false);
  return dedupe(out);
}

bool matches(const Hyperedge& edge, const Pattern& pattern) { return !match(edge, pattern).empty(); }

std::vector<Binding> match_all(const Hyperedge& edge, const std::vector<Pattern>& patterns,
                               const std::vector<Hyperedge>& collection) {
  if (patterns.empty()) return {};
  std::vector<Binding> cur = match(edge, patterns[0]);
  for (std::size_t i = 1; i < patterns.size() && !cur.empty(); ++i) {
    std::vector<Binding> next;
    for (const auto& b : cur) {
      for (const auto& e : collection) {
        auto got = match(e, patterns[i], b);
        next.insert(next.end(), got.begin(), got.end());
      }
    }
    cur = dedupe(next);
  }
  return cur;
}

// ---------------------------------------------------------------------------
// Rules

std::string Rule::str() const {
  std::string out;
  for (std::size_t i = 0; i < lhs.size(); ++i) out += (i ? " & " : "") + lhs[i].str();
  return out + " |- " + rhs.str();
}

namespace {

void check_rhs(const PatternNode& n, const std::set<std::string>& lhs_vars) {
  if (n.kind == PatternNode::Kind::Edge) {
    for (const auto& e : n.elements) check_rhs(e, lhs_vars);
    return;
  }
  const auto& a = n.atom;
  if (a.kind == PatternAtom::Kind::Wildcard) throw Error("rule right-hand side contains a wildcard");
  if (a.kind == PatternAtom::Kind::Sequence && a.name.empty()) {
    throw Error("rule right-hand side contains an anonymous sequence");
  }
  if (!a.name.empty() && !lhs_vars.count(a.name)) throw Error("unbound variable in rule: " + a.name);
  if (a.kind == PatternAtom::Kind::Literal && (a.types.size() != 1 || !is_atomic_type(a.types[0]) || a.roots.size() != 1)) {
    throw Error("rule right-hand side atom needs a single root and type: " + a.str());
  }
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

Rule parse_rule(std::string_view text) {
  auto sep = text.find(" |- ");
  if (sep == std::string_view::npos) throw Error("rule without ' |- ' separator: " + std::string(text));
  Rule rule;
  std::string left(text.substr(0, sep));
  std::size_t start = 0;
  for (;;) {
    auto amp = left.find(" & ", start);
    rule.lhs.push_back(parse_pattern(trim(std::string_view(left).substr(start, amp == std::string::npos ? std::string::npos : amp - start))));
    if (amp == std::string::npos) break;
    start = amp + 3;
  }
  rule.rhs = parse_pattern(trim(text.substr(sep + 4)));
  std::set<std::string> vars;
  for (const auto& p : rule.lhs) {
    for (const auto& v : p.variables()) vars.insert(v);
  }
  check_rhs(rule.rhs.root(), vars);
  return rule;
}

std::vector<Rule> parse_rule_file(std::istream& in) {
  std::vector<Rule> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    try {
      out.push_back(parse_rule(t));
    } catch (const Error& e) {
      throw Error("rule file line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

namespace {

void instantiate_into(const PatternNode& n, const Binding& b, std::vector<Hyperedge>& out) {
  if (n.kind == PatternNode::Kind::Edge) {
    std::vector<Hyperedge> elems;
    for (const auto& e : n.elements) instantiate_into(e, b, elems);
    if (elems.empty()) throw Error("instantiated edge is empty: " + n.str());
    if (elems.size() == 1) {
      out.push_back(elems[0]);
    } else {
      out.emplace_back(std::move(elems));
    }
    return;
  }
  const auto& a = n.atom;
  switch (a.kind) {
    case PatternAtom::Kind::Literal: {
      std::string roles;
      for (const auto& s : a.roles.slots) roles += s.substr(0, 1);
      out.push_back(make_atom(a.roots.at(0), a.types.at(0), roles, a.ns));
      return;
    }
    case PatternAtom::Kind::Sequence: {
      auto it = b.seqs.find(a.name);
      if (it == b.seqs.end()) throw Error("unbound sequence " + a.name);
      out.insert(out.end(), it->second.begin(), it->second.end());
      return;
    }
    case PatternAtom::Kind::Variable: {
      auto it = b.vars.find(a.name);
      if (it == b.vars.end()) throw Error("unbound variable " + a.name);
      out.push_back(it->second);
      return;
    }
    case PatternAtom::Kind::Wildcard: throw Error("cannot instantiate a wildcard");
  }
}

}  // namespace

Hyperedge instantiate(const Pattern& pattern, const Binding& binding) {
  std::vector<Hyperedge> out;
  instantiate_into(pattern.root(), binding, out);
  if (out.size() != 1) throw Error("pattern does not instantiate to a single edge: " + pattern.str());
  return out[0];
}

std::vector<Hyperedge> apply_rule(const Hyperedge& edge, const Rule& rule, const std::vector<Hyperedge>& collection) {
  std::vector<Hyperedge> out;
  for (const auto& sub : subedges(edge)) {
    for (const auto& b : match_all(sub, rule.lhs, collection)) out.push_back(instantiate(rule.rhs, b));
  }
  return out;
}

}  // namespace shg
