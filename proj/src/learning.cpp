#include "shg/learning.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <random>
#include <unordered_set>

#include <json.hpp>

namespace shg {

namespace {

using json = nlohmann::json;

std::string type_str(TypeCode t) { return std::string(1, code_char(t)); }

std::string alternatives(const std::set<std::string>& roots) {
  if (roots.size() == 1) return *roots.begin();
  std::string out;
  for (const auto& r : roots) out += (out.empty() ? "" : ",") + r;
  return "[" + out + "]";
}

bool contains_edge(const std::vector<Hyperedge>& v, const Hyperedge& e) {
  return std::find(v.begin(), v.end(), e) != v.end();
}

std::optional<Atom> try_innermost(const Hyperedge& e) {
  try {
    return innermost_atom(e);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// LearnedPattern

std::vector<Pattern> LearnedPattern::conjunction() const {
  std::vector<Pattern> out{pattern};
  if (!lemma_var.empty()) {
    std::string t = type_str(lemma_type);
    out.push_back(parse_pattern("(lemma/J >" + lemma_var + "/" + t + " " + alternatives(lemmas) + "/" + t + ")"));
  }
  return out;
}

std::string LearnedPattern::str() const {
  auto parts = conjunction();
  std::string out = parts[0].str();
  for (std::size_t i = 1; i < parts.size(); ++i) out += " & " + parts[i].str();
  return out;
}

std::vector<Binding> LearnedPattern::match(const Hyperedge& edge, const std::vector<Hyperedge>& lemma_edges) const {
  if (lemma_var.empty()) return shg::match(edge, pattern);
  return match_all(edge, conjunction(), lemma_edges);
}

bool LearnedPattern::matches(const Hyperedge& edge, const std::vector<Hyperedge>& lemma_edges) const {
  return !match(edge, lemma_edges).empty();
}

LearnedPattern parse_learned(const std::string& text) {
  LearnedPattern lp;
  auto amp = text.find(" & ");
  lp.pattern = parse_pattern(text.substr(0, amp));
  if (amp == std::string::npos) return lp;
  Pattern lemma = parse_pattern(text.substr(amp + 3));
  const auto& root = lemma.root();
  bool ok = root.kind == PatternNode::Kind::Edge && root.elements.size() == 3 &&
            root.elements[0].kind == PatternNode::Kind::Atom && root.elements[0].atom.roots.size() == 1 &&
            root.elements[0].atom.roots[0] == "lemma" && root.elements[1].atom.kind == PatternAtom::Kind::Variable &&
            root.elements[2].atom.kind == PatternAtom::Kind::Literal;
  if (!ok || text.find(" & ", amp + 3) != std::string::npos) {
    throw Error("learned pattern: second part must be (lemma/J >VAR/T [lemmas]/T): " + text);
  }
  lp.lemma_var = root.elements[1].atom.name;
  if (!root.elements[1].atom.types.empty()) lp.lemma_type = root.elements[1].atom.types[0];
  lp.lemmas.insert(root.elements[2].atom.roots.begin(), root.elements[2].atom.roots.end());
  return lp;
}

// ---------------------------------------------------------------------------
// Candidate selection

Hyperedge select_candidate(const Store& store, const std::string& criterion, std::uint64_t seed, std::size_t rank) {
  std::vector<Hyperedge> edges;
  for (const auto& e : store.edges()) {
    if (!is_lemma_edge(e)) edges.push_back(e);
  }
  if (edges.empty()) throw LearningError("cannot select a candidate from an empty store");
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<Hyperedge>& from) {
    std::uniform_int_distribution<std::size_t> d(0, from.size() - 1);
    return from[d(rng)];
  };
  if (criterion == "random") return pick(edges);
  if (criterion != "predicate-frequency") throw LearningError("unknown selection criterion '" + criterion + "'");

  std::map<std::string, std::size_t> freq;
  std::map<std::string, std::vector<Hyperedge>> by_root;
  for (const auto& e : edges) {
    auto t = try_infer_type(e);
    if (!t || *t != TypeCode::Relation) continue;
    auto a = try_innermost(e.connector());
    if (!a) continue;
    freq[a->root] += store.count(e);
    by_root[a->root].push_back(e);
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  if (rank >= ranked.size()) throw LearningError("no predicate at frequency rank " + std::to_string(rank));
  return pick(by_root[ranked[rank].first]);
}

// ---------------------------------------------------------------------------
// Generalization

namespace {

std::string wildcard_for(const Hyperedge& e) {
  auto t = try_infer_type(e);
  if (!t) throw Error("cannot generalize an ill-typed edge: " + e.str());
  return "*/" + type_str(*t);
}

std::string connector_text(const Hyperedge& conn, bool literal) {
  auto t = try_infer_type(conn);
  if (!t) throw Error("cannot generalize an ill-typed connector: " + conn.str());
  auto inner = try_innermost(conn);
  std::string roles = inner ? inner->roles : std::string{};
  std::string spec = roles.empty() ? "" : ".{" + roles + "}";
  if (literal && inner) {
    return (conn.is_atom() ? "" : ">") + inner->without_roles().str() + spec;
  }
  return "*/" + type_str(*t) + spec;
}

std::string generalize_text(const Hyperedge& e, const std::map<std::string, Hyperedge>& assignments, bool top) {
  for (const auto& [name, sub] : assignments) {
    if (sub == e) return name;
  }
  if (e.is_atom()) return wildcard_for(e);
  bool holds = std::any_of(assignments.begin(), assignments.end(),
                           [&](const auto& kv) { return contains_subedge(e, kv.second); });
  if (!holds) return wildcard_for(e);
  std::string out = "(" + connector_text(e.connector(), top);
  for (const auto& a : e.args()) out += " " + generalize_text(a, assignments, false);
  return out + ")";
}

}  // namespace

Pattern generalize(const Hyperedge& edge, const std::map<std::string, Hyperedge>& assignments) {
  for (const auto& [name, sub] : assignments) {
    if (!contains_subedge(edge, sub)) throw LearningError(name + " is not a sub-edge of " + edge.str());
  }
  return parse_pattern(generalize_text(edge, assignments, true));
}

// ---------------------------------------------------------------------------
// Refinement

namespace {

using Path = std::vector<std::size_t>;

PatternNode& node_at(PatternNode& root, const Path& path) {
  PatternNode* n = &root;
  for (auto i : path) n = &n->elements[i];
  return *n;
}

void collect_paths(const PatternNode& n, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  if (n.kind != PatternNode::Kind::Edge) return;
  for (std::size_t i = 0; i < n.elements.size(); ++i) {
    cur.push_back(i);
    collect_paths(n.elements[i], cur, out);
    cur.pop_back();
  }
}

bool is_connector_path(const Path& p) { return !p.empty() && p.back() == 0; }

const char* kAlign = "ALIGN__";

/// Sub-edge of `edge` sitting at `path` of the pattern, found by replacing
/// that position with a throwaway variable.
std::optional<Hyperedge> aligned(const LearnedPattern& lp, const Path& path, const Hyperedge& edge) {
  PatternNode root = lp.pattern.root();
  PatternNode& n = node_at(root, path);
  PatternNode v;
  v.atom.kind = PatternAtom::Kind::Variable;
  v.atom.name = kAlign;
  if (n.kind != PatternNode::Kind::Edge) {
    v.atom.types = n.atom.types;
    v.atom.roles = n.atom.roles;
  }
  n = v;
  auto bs = match(edge, Pattern(root));
  if (bs.empty()) return std::nullopt;
  return bs.front().vars.at(kAlign);
}

std::optional<std::vector<Hyperedge>> aligned_all(const LearnedPattern& lp, const Path& path,
                                                  const std::vector<Hyperedge>& edges) {
  std::vector<Hyperedge> out;
  for (const auto& e : edges) {
    auto a = aligned(lp, path, e);
    if (!a) return std::nullopt;
    out.push_back(*a);
  }
  return out;
}

std::optional<TypeCode> common_type(const std::vector<Hyperedge>& es) {
  std::optional<TypeCode> t;
  for (const auto& e : es) {
    auto x = try_infer_type(e);
    if (!x || (t && *t != *x)) return std::nullopt;
    t = x;
  }
  return t;
}

std::string fresh_name(const Pattern& p, const std::string& base) {
  auto vars = p.variables();
  std::string name = base;
  for (int i = 2; std::find(vars.begin(), vars.end(), name) != vars.end(); ++i) name = base + std::to_string(i);
  return name;
}

struct Move {
  LearnedPattern pattern;
  std::string step;
};

std::vector<Move> specializations(const LearnedPattern& lp, const std::vector<Hyperedge>& positives,
                                  const std::vector<Hyperedge>& negatives, const Store& store) {
  std::vector<Move> out;
  std::vector<Path> paths;
  Path cur;
  collect_paths(lp.pattern.root(), cur, paths);
  auto with = [&](const Path& path, const PatternNode& replacement, const std::string& step) {
    PatternNode root = lp.pattern.root();
    node_at(root, path) = replacement;
    LearnedPattern next = lp;
    next.pattern = Pattern(root);
    out.push_back({std::move(next), step});
  };

  for (const auto& path : paths) {
    const PatternNode& n = node_at(const_cast<PatternNode&>(lp.pattern.root()), path);
    auto al = aligned_all(lp, path, positives);
    if (!al) continue;
    const auto& vals = *al;

    if (n.kind == PatternNode::Kind::Atom && n.atom.kind != PatternAtom::Kind::Sequence) {
      // connector root
      if (is_connector_path(path) && n.atom.kind == PatternAtom::Kind::Wildcard) {
        std::set<std::string> roots;
        bool nested = false, ok = true;
        for (const auto& v : vals) {
          auto a = try_innermost(v);
          if (!a) {
            ok = false;
            break;
          }
          roots.insert(a->root);
          nested = nested || !v.is_atom();
        }
        if (ok && !roots.empty()) {
          PatternNode lit = n;
          lit.atom.kind = PatternAtom::Kind::Literal;
          lit.atom.roots.assign(roots.begin(), roots.end());
          lit.atom.nest_skip = nested;
          if (lit.atom.types.empty()) {
            if (auto t = try_innermost(vals.front())) lit.atom.types = {t->type};
          }
          with(path, lit, "root " + lit.atom.str());
        }
      }
      // lemma condition on the top connector
      if (path == Path{0} && lp.lemma_var.empty()) {
        std::set<std::string> lemmas;
        bool ok = true;
        TypeCode t = TypeCode::Predicate;
        for (const auto& v : vals) {
          auto a = try_innermost(v);
          auto l = a ? store.lemma_of(*a) : std::nullopt;
          if (!l) {
            ok = false;
            break;
          }
          lemmas.insert(l->root);
          t = a->type;
        }
        if (ok) {
          PatternNode var = n;
          if (var.atom.kind != PatternAtom::Kind::Variable) {
            var.atom.kind = PatternAtom::Kind::Variable;
            var.atom.name = fresh_name(lp.pattern, "PRED");
            var.atom.roots.clear();
            var.atom.nest_skip = false;
            var.atom.types = {t};
          }
          PatternNode root = lp.pattern.root();
          node_at(root, path) = var;
          LearnedPattern next = lp;
          next.pattern = Pattern(root);
          next.lemma_var = var.atom.name;
          next.lemma_type = t;
          next.lemmas = lemmas;
          out.push_back({std::move(next), "lemma " + alternatives(lemmas)});
        }
      }
      // argument type
      if (!is_connector_path(path) && n.atom.kind != PatternAtom::Kind::Literal && n.atom.types.size() != 1) {
        if (auto t = common_type(vals)) {
          PatternNode typed = n;
          typed.atom.types = {*t};
          with(path, typed, "type " + typed.atom.str());
        }
      }
      // atom vs non-atom
      bool all_edges = std::all_of(vals.begin(), vals.end(), [](const Hyperedge& v) { return !v.is_atom(); });
      if (!is_connector_path(path) && all_edges) {
        if (n.atom.kind == PatternAtom::Kind::Variable) {
          PatternNode bound = n;
          bound.kind = PatternNode::Kind::BoundEdge;
          if (bound.atom.types.empty()) {
            if (auto t = common_type(vals)) bound.atom.types = {*t};
          }
          if (!bound.atom.types.empty()) with(path, bound, "non-atomic " + bound.atom.name);
        } else if (n.atom.kind == PatternAtom::Kind::Wildcard) {
          std::size_t arity = vals.front().arity();
          bool same = std::all_of(vals.begin(), vals.end(), [&](const Hyperedge& v) { return v.arity() == arity; });
          if (same) {
            PatternNode expanded;
            expanded.kind = PatternNode::Kind::Edge;
            bool ok = true;
            for (std::size_t i = 0; i < arity && ok; ++i) {
              std::vector<Hyperedge> column;
              for (const auto& v : vals) column.push_back(v.elements()[i]);
              auto t = common_type(column);
              if (!t) ok = false;
              PatternNode w;
              w.atom.kind = PatternAtom::Kind::Wildcard;
              if (t) w.atom.types = {*t};
              expanded.elements.push_back(w);
            }
            if (ok) with(path, expanded, "expand " + expanded.str());
          }
        }
      }
    }

    // role constraints on edges
    if (n.kind == PatternNode::Kind::Edge && n.elements[0].kind == PatternNode::Kind::Atom) {
      const PatternAtom& conn = n.elements[0].atom;
      Path cpath = path;
      cpath.push_back(0);
      std::vector<std::string> roles;
      for (const auto& v : vals) roles.push_back(argument_roles(v));
      auto set_spec = [&](RoleSpec spec, const std::string& step) {
        PatternNode c = n.elements[0];
        c.atom.roles = std::move(spec);
        with(cpath, c, step);
      };
      bool same = std::all_of(roles.begin(), roles.end(), [&](const std::string& r) { return r == roles.front(); });
      if (same && !roles.front().empty() && (!conn.roles.present || conn.roles.unordered)) {
        RoleSpec spec = parse_role_spec(roles.front());
        spec.forbidden = conn.roles.forbidden;
        set_spec(spec, "roles " + spec.str());
      }
      if (!conn.roles.present || conn.roles.unordered) {
        for (char c : std::string("spacoitjxrm")) {
          bool everywhere = !roles.empty() && std::all_of(roles.begin(), roles.end(), [&](const std::string& r) {
            return std::count(r.begin(), r.end(), c) >
                   std::count_if(conn.roles.slots.begin(), conn.roles.slots.end(),
                                 [&](const std::string& s) { return s == std::string(1, c); });
          });
          if (!everywhere) continue;
          RoleSpec spec = conn.roles;
          spec.present = true;
          spec.unordered = true;
          spec.slots.push_back(std::string(1, c));
          set_spec(spec, "require role " + std::string(1, c));
        }
      }
      std::set<char> seen_negative;
      for (const auto& neg : negatives) {
        if (auto a = aligned(lp, path, neg)) {
          for (char c : argument_roles(*a)) seen_negative.insert(c);
        }
      }
      for (char c : seen_negative) {
        bool in_positive = std::any_of(roles.begin(), roles.end(),
                                       [&](const std::string& r) { return r.find(c) != std::string::npos; });
        if (in_positive || conn.roles.forbidden.find(c) != std::string::npos) continue;
        RoleSpec spec = conn.roles;
        if (!spec.present) {
          spec.present = true;
          spec.unordered = true;
        }
        spec.forbidden += c;
        set_spec(spec, "forbid role " + std::string(1, c));
      }
    }
  }
  return out;
}

}  // namespace

RefineResult refine(const LearnedPattern& pattern, const std::vector<Hyperedge>& positives,
                    const std::vector<Hyperedge>& negatives, const Store& store, const RefineOptions& options) {
  if (positives.empty()) throw LearningError("refinement needs at least one positive example");
  for (const auto& n : negatives) {
    if (contains_edge(positives, n)) throw LearningError("edge labeled both positive and negative: " + n.str());
  }
  const auto lemma_edges = store.lemma_edges();
  const auto store_edges = store.edges();
  auto consistent = [&](const LearnedPattern& lp) {
    for (const auto& p : positives) {
      if (!lp.matches(p, lemma_edges)) return false;
    }
    for (const auto& n : negatives) {
      if (lp.matches(n, lemma_edges)) return false;
    }
    return true;
  };
  auto store_count = [&](const LearnedPattern& lp) {
    std::size_t n = 0;
    for (const auto& e : store_edges) n += lp.matches(e, lemma_edges) ? 1 : 0;
    return n;
  };

  if (consistent(pattern)) return {pattern, 0, store_count(pattern), {}};

  struct Node {
    LearnedPattern pattern;
    std::size_t depth;
    std::vector<std::string> steps;
  };
  std::deque<Node> queue{{pattern, 0, {}}};
  std::unordered_set<std::string> seen{pattern.str()};
  std::optional<RefineResult> best;
  std::size_t visited = 0;
  while (!queue.empty() && visited < options.node_budget) {
    Node cur = std::move(queue.front());
    queue.pop_front();
    ++visited;
    if (cur.depth > 0 && consistent(cur.pattern)) {
      RefineResult r{cur.pattern, cur.depth, store_count(cur.pattern), cur.steps};
      bool better = !best || r.store_matches > best->store_matches ||
                    (r.store_matches == best->store_matches &&
                     (r.depth < best->depth || (r.depth == best->depth && r.pattern.str() < best->pattern.str())));
      if (better) best = std::move(r);
      continue;  // specializing further can only lose matches
    }
    if (cur.depth >= options.max_depth) continue;
    for (auto& m : specializations(cur.pattern, positives, negatives, store)) {
      if (!seen.insert(m.pattern.str()).second) continue;
      auto steps = cur.steps;
      steps.push_back(m.step);
      queue.push_back({std::move(m.pattern), cur.depth + 1, std::move(steps)});
    }
  }
  if (!best) throw LearningError("no specialization of " + pattern.str() + " separates the labeled examples");
  return *best;
}

// ---------------------------------------------------------------------------
// Mining

namespace {

bool is_plus(const Hyperedge& conn) {
  return conn.is_atom() && conn.atom().root == "+" && conn.atom().type == TypeCode::Builder;
}

std::vector<std::string> expand_edge(const Hyperedge& e, std::size_t depth, const GeneralizationConfig& config) {
  auto ct = try_infer_type(e.connector());
  if (!ct) return {};
  std::string roles = argument_roles(e);
  std::vector<std::string> conns{"*/" + type_str(*ct) + (roles.empty() ? "" : "." + roles)};
  if (config.explicit_plus && is_plus(e.connector())) conns.push_back(roles.empty() ? "+/B" : "+/B.{" + roles + "}");

  std::vector<std::vector<std::string>> options;
  for (const auto& a : e.args()) {
    auto t = try_infer_type(a);
    if (!t) return {};
    std::vector<std::string> opts{"*/" + type_str(*t)};
    if (depth > 1 && !a.is_atom()) {
      auto at = try_infer_type(a.connector());
      if (at && !config.excluded.count(*at)) {
        auto deeper = expand_edge(a, depth - 1, config);
        opts.insert(opts.end(), deeper.begin(), deeper.end());
      }
    }
    options.push_back(std::move(opts));
  }
  std::vector<std::string> out;
  for (const auto& c : conns) {
    std::vector<std::string> partial{"(" + c};
    for (const auto& opts : options) {
      std::vector<std::string> next;
      for (const auto& p : partial) {
        for (const auto& o : opts) next.push_back(p + " " + o);
      }
      partial = std::move(next);
    }
    for (auto& p : partial) out.push_back(p + ")");
  }
  return out;
}

}  // namespace

std::vector<std::string> generalizations(const Hyperedge& edge, const GeneralizationConfig& config) {
  if (config.max_depth < 1) throw Error("generalization depth must be at least 1");
  if (edge.is_atom() || is_lemma_edge(edge)) return {};
  auto t = try_infer_type(edge);
  auto ct = try_infer_type(edge.connector());
  if (!t || !ct || config.excluded.count(*ct)) return {};
  if (*t == TypeCode::Relation && !config.relation_sizes.count(edge.arity())) return {};
  auto out = expand_edge(edge, config.max_depth, config);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<MinedPattern> mine_patterns(const Store& store, const GeneralizationConfig& config) {
  std::map<std::string, std::size_t> counts;
  for (const auto& e : store.all_edges()) {
    for (const auto& g : generalizations(e, config)) ++counts[g];
  }
  std::vector<MinedPattern> out;
  for (const auto& [p, n] : counts) out.push_back({p, n});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  return out;
}

// ---------------------------------------------------------------------------
// Sessions

bool Session::consistent(const Store& store) const {
  if (!pattern) return true;
  auto lemma_edges = store.lemma_edges();
  for (const auto& p : positives) {
    if (!pattern->matches(p, lemma_edges)) return false;
  }
  for (const auto& n : negatives) {
    if (pattern->matches(n, lemma_edges)) return false;
  }
  return true;
}

SessionManager::SessionManager(std::string sidecar) : sidecar_(std::move(sidecar)) {}

Session& SessionManager::mutable_get(const std::string& id) {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw LearningError("no session '" + id + "'");
  return it->second;
}

const Session& SessionManager::get(const std::string& id) const {
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw LearningError("no session '" + id + "'");
  return it->second;
}

std::vector<std::string> SessionManager::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, s] : sessions_) out.push_back(id);
  return out;
}

Session& SessionManager::create(const Store& store, const std::string& criterion,
                                const std::vector<std::string>& schema, std::uint64_t seed) {
  Session s;
  s.id = "s" + std::to_string(next_id_++);
  s.criterion = criterion;
  s.candidate = select_candidate(store, criterion, seed);
  s.schema = schema;
  s.history.push_back("candidate " + s.candidate.str());
  std::string id = s.id;
  auto& ref = sessions_.insert_or_assign(id, std::move(s)).first->second;
  save();
  return ref;
}

const Session& SessionManager::assign(const std::string& id, const std::string& variable, const Hyperedge& sub_edge,
                                      const Store& store) {
  Session& s = mutable_get(id);
  if (!s.schema.empty() && std::find(s.schema.begin(), s.schema.end(), variable) == s.schema.end()) {
    throw Error("variable " + variable + " is not in the session schema");
  }
  if (variable.empty() || !std::all_of(variable.begin(), variable.end(), [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
      })) {
    throw Error("variable names are upper case: '" + variable + "'");
  }
  if (!contains_subedge(s.candidate, sub_edge)) {
    throw Error(sub_edge.str() + " is not a sub-edge of the candidate");
  }
  Session next = s;
  next.assignments.insert_or_assign(variable, sub_edge);
  next.pattern = LearnedPattern{generalize(next.candidate, next.assignments), {}, TypeCode::Predicate, {}};
  if (!contains_edge(next.positives, next.candidate)) next.positives.insert(next.positives.begin(), next.candidate);
  next.history.push_back("assign " + variable + " = " + sub_edge.str() + " -> " + next.pattern->str());
  if (!next.consistent(store)) {
    auto r = refine(*next.pattern, next.positives, next.negatives, store);
    next.pattern = r.pattern;
    next.history.push_back("refine -> " + r.pattern.str());
  }
  s = std::move(next);
  save();
  return s;
}

std::vector<Hyperedge> SessionManager::pending(const std::string& id, const Store& store) const {
  const Session& s = get(id);
  if (!s.pattern) return {};
  auto lemma_edges = store.lemma_edges();
  std::vector<Hyperedge> out;
  for (const auto& e : store.edges()) {
    if (is_lemma_edge(e) || contains_edge(s.positives, e) || contains_edge(s.negatives, e)) continue;
    if (s.pattern->matches(e, lemma_edges)) out.push_back(e);
  }
  return out;
}

const Session& SessionManager::feedback(const std::string& id, const Hyperedge& edge, bool accept,
                                        const Store& store) {
  Session& s = mutable_get(id);
  if (!s.pattern) throw LearningError("session " + id + " has no pattern yet; assign variables first");
  auto& same = accept ? s.positives : s.negatives;
  const auto& other = accept ? s.negatives : s.positives;
  if (contains_edge(other, edge)) {
    throw LearningError("edge already labeled " + std::string(accept ? "negative" : "positive") + ": " + edge.str());
  }
  Session next = s;
  auto& list = accept ? next.positives : next.negatives;
  if (!contains_edge(same, edge)) list.push_back(edge);
  next.history.push_back(std::string(accept ? "accept " : "reject ") + edge.str());
  if (!next.consistent(store)) {
    auto r = refine(*next.pattern, next.positives, next.negatives, store);
    next.pattern = r.pattern;
    next.history.push_back("refine -> " + r.pattern.str());
  }
  s = std::move(next);
  save();
  return s;
}

std::string SessionManager::export_rule(const std::string& id, const std::string& name) const {
  const Session& s = get(id);
  if (!s.pattern) throw LearningError("session " + id + " has no pattern yet");
  std::vector<std::string> vars;
  auto in_pattern = s.pattern->pattern.variables();
  for (const auto& v : in_pattern) {
    if (s.assignments.count(v)) vars.push_back(v);
  }
  if (vars.empty()) throw LearningError("session " + id + " has no assigned variables to export");
  std::string rhs = "(" + name + "/J";
  for (const auto& v : vars) rhs += " " + v;
  rhs += ")";
  std::string line = s.pattern->str() + " |- " + rhs;
  parse_rule(line);  // validates
  return line;
}

namespace {

json edges_json(const std::vector<Hyperedge>& es) {
  json out = json::array();
  for (const auto& e : es) out.push_back(e.str());
  return out;
}

std::vector<Hyperedge> edges_from(const json& j) {
  std::vector<Hyperedge> out;
  for (const auto& s : j) out.push_back(parse_notation(s.get<std::string>()));
  return out;
}

}  // namespace

void SessionManager::save() const {
  if (sidecar_.empty()) return;
  json doc;
  doc["format"] = "shg-sessions";
  doc["version"] = 1;
  doc["next_id"] = next_id_;
  json list = json::array();
  for (const auto& [id, s] : sessions_) {
    json j;
    j["id"] = s.id;
    j["criterion"] = s.criterion;
    j["candidate"] = s.candidate.str();
    j["schema"] = s.schema;
    json assigned = json::object();
    for (const auto& [k, v] : s.assignments) assigned[k] = v.str();
    j["assignments"] = assigned;
    j["pattern"] = s.pattern ? json(s.pattern->str()) : json(nullptr);
    j["positives"] = edges_json(s.positives);
    j["negatives"] = edges_json(s.negatives);
    j["history"] = s.history;
    list.push_back(std::move(j));
  }
  doc["sessions"] = std::move(list);
  std::string tmp = sidecar_ + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("cannot write session file: " + tmp);
    out << doc.dump(2) << "\n";
  }
  if (std::rename(tmp.c_str(), sidecar_.c_str()) != 0) throw Error("cannot replace session file: " + sidecar_);
}

void SessionManager::load() {
  if (sidecar_.empty()) return;
  std::ifstream in(sidecar_);
  if (!in) return;  // nothing saved yet
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("session file " + sidecar_ + ": " + e.what());
  }
  if (doc.value("format", "") != "shg-sessions" || doc.value("version", 0) != 1) {
    throw Error("session file " + sidecar_ + ": unsupported format");
  }
  sessions_.clear();
  next_id_ = doc.value("next_id", std::size_t{1});
  for (const auto& j : doc.at("sessions")) {
    Session s;
    s.id = j.at("id").get<std::string>();
    s.criterion = j.at("criterion").get<std::string>();
    s.candidate = parse_notation(j.at("candidate").get<std::string>());
    s.schema = j.at("schema").get<std::vector<std::string>>();
    for (const auto& [k, v] : j.at("assignments").items()) s.assignments.emplace(k, parse_notation(v.get<std::string>()));
    if (!j.at("pattern").is_null()) s.pattern = parse_learned(j.at("pattern").get<std::string>());
    s.positives = edges_from(j.at("positives"));
    s.negatives = edges_from(j.at("negatives"));
    s.history = j.at("history").get<std::vector<std::string>>();
    sessions_.emplace(s.id, std::move(s));
  }
}

}  // namespace shg
