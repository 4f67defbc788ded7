#include "shg/inference.hpp"

#include <algorithm>
#include <unordered_set>

namespace shg {

namespace {

constexpr std::size_t kMaxExpansions = 1024;

bool is_conjunction_edge(const Hyperedge& e) {
  if (e.is_atom() || is_lemma_edge(e)) return false;
  auto t = try_infer_type(e.connector());
  return t && *t == TypeCode::Conjunction;
}

bool all_of_type(std::span<const Hyperedge> args, TypeCode t) {
  return std::all_of(args.begin(), args.end(), [&](const Hyperedge& a) {
    auto at = try_infer_type(a);
    return at && *at == t;
  });
}

void push_unique(std::vector<Hyperedge>& out, const Hyperedge& e) {
  if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
}

/// Gives relations that lack a subject the last subject seen before them.
std::vector<Hyperedge> propagate_subjects(std::span<const Hyperedge> relations) {
  std::vector<Hyperedge> out;
  std::optional<Hyperedge> subject;
  for (const auto& r : relations) {
    std::string roles = argument_roles(r);
    auto s = roles.rfind('s');
    if (s != std::string::npos && s < r.args().size()) {
      subject = r.args()[s];
      out.push_back(r);
    } else if (subject && !roles.empty() && roles.find('p') == std::string::npos) {
      std::vector<Hyperedge> elems;
      elems.push_back(with_connector_roles(r.connector(), "s" + roles));
      elems.push_back(*subject);
      elems.insert(elems.end(), r.args().begin(), r.args().end());
      out.emplace_back(std::move(elems));
    } else {
      out.push_back(r);
    }
  }
  return out;
}

std::vector<Hyperedge> expand(const Hyperedge& e) {
  if (e.is_atom()) return {e};
  if (is_conjunction_edge(e)) {
    auto args = e.args();
    std::vector<Hyperedge> members;
    if (all_of_type(args, TypeCode::Concept)) {
      members.assign(args.begin(), args.end());
    } else if (all_of_type(args, TypeCode::Relation)) {
      members = propagate_subjects(args);
    }
    if (!members.empty()) {
      std::vector<Hyperedge> out;
      for (const auto& m : members) {
        for (const auto& x : expand(m)) {
          push_unique(out, x);
          if (out.size() >= kMaxExpansions) return out;
        }
      }
      return out;
    }
  }
  // cartesian product over the element alternatives
  std::vector<std::vector<Hyperedge>> partial{{}};
  for (const auto& el : e.elements()) {
    auto alts = expand(el);
    std::vector<std::vector<Hyperedge>> next;
    for (const auto& p : partial) {
      for (const auto& a : alts) {
        if (next.size() >= kMaxExpansions) break;
        auto q = p;
        q.push_back(a);
        next.push_back(std::move(q));
      }
    }
    partial = std::move(next);
  }
  std::vector<Hyperedge> out;
  for (auto& p : partial) push_unique(out, Hyperedge(std::move(p)));
  return out;
}

}  // namespace

std::vector<Hyperedge> decompose_conjunctions(const Hyperedge& edge) {
  std::vector<Hyperedge> current{edge};
  for (int round = 0; round < 8; ++round) {
    std::vector<Hyperedge> next;
    for (const auto& e : current) {
      for (const auto& x : expand(e)) push_unique(next, x);
    }
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

// ---------------------------------------------------------------------------

std::string OIETuple::str() const {
  std::string out = rel;
  for (const auto& a : args) out += "\t" + a;
  return out;
}

const std::vector<Pattern>& oie_patterns() {
  static const std::vector<Pattern> patterns = {
      parse_pattern("(REL/P.{[sp][cora]x} ARG1/C ARG2 ARG3...)"),
      parse_pattern("(+/B.{m[ma]} (ARG1/C...) (ARG2/C...))"),
      parse_pattern("(REL1/P.{sx}-oc ARG1/C (REL2/T ARG2))"),
      parse_pattern("(REL1/P.{px} ARG1/C (REL2/T ARG2))"),
      parse_pattern("(REL1/P.{sc} ARG1/C (REL3/B REL2/C ARG2/C))"),
  };
  return patterns;
}

std::vector<OIETuple> extract_oie(const Hyperedge& edge, const SurfaceForms* forms) {
  std::vector<OIETuple> out;
  for (const auto& p : oie_patterns()) {
    for (const auto& b : match(edge, p)) {
      // std::map keeps names sorted, which gives REL1 REL2 REL3 and ARG1 ARG2 ARG3
      std::map<std::string, std::vector<Hyperedge>> parts;
      for (const auto& [name, e] : b.vars) parts[name] = {e};
      for (const auto& [name, es] : b.seqs) parts[name] = es;
      OIETuple t;
      std::vector<std::string> rel;
      for (const auto& [name, es] : parts) {
        for (const auto& e : es) {
          if (name.rfind("REL", 0) == 0) {
            rel.push_back(edge_text(e, forms));
          } else if (name.rfind("ARG", 0) == 0) {
            t.args.push_back(edge_text(e, forms));
          }
        }
      }
      t.rel = rel.empty() ? "is" : join_words(rel);
      if (t.args.size() >= 2 && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<OIETuple> extract_oie_all(const Hyperedge& edge, const SurfaceForms* forms) {
  std::vector<OIETuple> out;
  for (const auto& e : decompose_conjunctions(edge)) {
    for (auto& t : extract_oie(e, forms)) {
      if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string tense_name(Tense t) {
  switch (t) {
    case Tense::Past: return "past";
    case Tense::Present: return "present";
    case Tense::Future: return "future";
  }
  return "present";
}

PredicateInfo inspect_predicate(const Hyperedge& pred) {
  PredicateInfo info;
  bool past = false, future = false;
  for (const auto& a : atoms_of(pred)) {
    if (a.type == TypeCode::Modifier && (a.root == "not" || a.root == "n't")) info.negated = true;
    if (a.type == TypeCode::Predicate && a.root == "was") past = true;
    if (a.type == TypeCode::Modifier && a.root == "will") future = true;
  }
  if (future) {
    info.tense = Tense::Future;
  } else if (past) {
    info.tense = Tense::Past;
  }
  return info;
}

namespace {

bool is_colon_conjunction(const Hyperedge& e) {
  if (e.is_atom() || !e.connector().is_atom()) return false;
  const auto& c = e.connector().atom();
  return c.root == ":" && c.type == TypeCode::Conjunction;
}

bool is_relation(const Hyperedge& e) {
  if (e.is_atom() || is_colon_conjunction(e)) return false;
  auto t = try_infer_type(e);
  return t && *t == TypeCode::Relation;
}

void flatten_contexts(const Hyperedge& e, std::vector<Hyperedge>& out) {
  if (is_colon_conjunction(e)) {
    for (const auto& a : e.args()) flatten_contexts(a, out);
  } else {
    out.push_back(e);
  }
}

std::optional<Hyperedge> peel(const Hyperedge& e, std::vector<Hyperedge>& contexts) {
  if (!is_colon_conjunction(e)) return is_relation(e) ? std::optional<Hyperedge>(e) : std::nullopt;
  std::optional<Hyperedge> found;
  for (const auto& a : e.args()) {
    if (!found) {
      std::vector<Hyperedge> inner;
      found = peel(a, inner);
      if (found) {
        contexts.insert(contexts.end(), inner.begin(), inner.end());
        continue;
      }
    }
    flatten_contexts(a, contexts);
  }
  return found;
}

void collect_specifications(const Hyperedge& rel, std::vector<Hyperedge>& out, int depth) {
  if (!is_relation(rel) || depth > 8) return;
  std::string roles = argument_roles(rel);
  auto args = rel.args();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i < roles.size() && roles[i] == 'x') {
      push_unique(out, args[i]);
    } else if (is_relation(args[i])) {
      collect_specifications(args[i], out, depth + 1);
    }
  }
}

std::string alternatives(const std::set<std::string>& roots) {
  std::string out;
  for (const auto& r : roots) out += (out.empty() ? "" : ",") + r;
  return "[" + out + "]";
}

}  // namespace

std::optional<ClaimContext> extract_claim_context(const Hyperedge& outer) {
  ClaimContext ctx{outer, {}, {}};
  auto rel = peel(outer, ctx.contexts);
  if (!rel) return std::nullopt;
  ctx.relation = *rel;
  collect_specifications(ctx.relation, ctx.specifications, 0);
  for (const auto& c : ctx.contexts) collect_specifications(c, ctx.specifications, 0);
  return ctx;
}

Pattern claim_pattern() { return parse_pattern("(PRED/P.{sr} ACTOR/C CLAIM/[RS])"); }

Pattern claim_lemma_pattern(const InferenceConfig& config) {
  return parse_pattern("(lemma/J >PRED/P " + alternatives(config.claim_lemmas) + "/P)");
}

Pattern conflict_pattern(const InferenceConfig& config) {
  return parse_pattern("(PRED/P.{sox} SOURCE/C TARGET/C (" + alternatives(config.conflict_triggers) +
                       "/T TOPIC/[CR]))");
}

Pattern conflict_lemma_pattern(const InferenceConfig& config) {
  return parse_pattern("(lemma/J >PRED/P " + alternatives(config.conflict_lemmas) + "/P)");
}

std::optional<Claim> detect_claim(const Hyperedge& edge, const Store& store, const InferenceConfig& config) {
  if (config.claim_lemmas.empty()) return std::nullopt;
  auto ctx = extract_claim_context(edge);
  if (!ctx) return std::nullopt;
  auto bindings = match_all(ctx->relation, {claim_pattern(), claim_lemma_pattern(config)}, store.lemma_edges());
  if (bindings.empty()) return std::nullopt;
  const auto& b = bindings.front();
  Claim c{b.vars.at("ACTOR"), b.vars.at("PRED"), b.vars.at("CLAIM"), ctx->contexts, ctx->specifications,
          Tense::Present, false, {}};
  auto info = inspect_predicate(is_relation(c.claim) ? c.claim.connector() : c.predicate);
  c.tense = info.tense;
  c.negated = info.negated;
  return resolve_anaphora(std::move(c));
}

std::optional<Conflict> detect_conflict(const Hyperedge& edge, const Store& store, const InferenceConfig& config) {
  if (config.conflict_lemmas.empty() || config.conflict_triggers.empty()) return std::nullopt;
  auto ctx = extract_claim_context(edge);
  if (!ctx) return std::nullopt;
  auto bindings =
      match_all(ctx->relation, {conflict_pattern(config), conflict_lemma_pattern(config)}, store.lemma_edges());
  if (bindings.empty()) return std::nullopt;
  const auto& b = bindings.front();
  Conflict c{b.vars.at("SOURCE"), b.vars.at("TARGET"), b.vars.at("TOPIC"), {}, b.vars.at("PRED")};
  for (const auto& a : ctx->relation.args()) {
    if (a.is_atom() || a.arity() != 2 || a.args()[0] != c.topic || !a.connector().is_atom()) continue;
    const auto& t = a.connector().atom();
    if (t.type == TypeCode::Trigger && config.conflict_triggers.count(t.root)) {
      c.trigger_root = t.root;
      break;
    }
  }
  return c;
}

Claim resolve_anaphora(Claim claim) {
  static const std::set<std::string> pronouns = {"he", "it", "she", "they"};
  if (!is_relation(claim.claim)) return claim;
  std::string roles = argument_roles(claim.claim);
  std::vector<Hyperedge> elems(claim.claim.elements().begin(), claim.claim.elements().end());
  for (std::size_t i = 0; i < roles.size() && i + 1 < elems.size(); ++i) {
    const auto& arg = elems[i + 1];
    if (roles[i] != 's' || !arg.is_atom()) continue;
    const auto& a = arg.atom();
    if (a.type != TypeCode::Concept || !pronouns.count(a.root)) continue;
    claim.pronoun = a.root;
    elems[i + 1] = claim.actor;
    claim.claim = Hyperedge(std::move(elems));
    break;
  }
  return claim;
}

std::string category_name(ActorCategory c) {
  switch (c) {
    case ActorCategory::Male: return "male";
    case ActorCategory::Female: return "female";
    case ActorCategory::NonHuman: return "non-human";
    case ActorCategory::Group: return "group";
    case ActorCategory::Unknown: return "unknown";
  }
  return "unknown";
}

ActorCategory actor_category(const std::map<std::string, int>& pronoun_counts) {
  static const std::map<std::string, ActorCategory> by_pronoun = {
      {"he", ActorCategory::Male}, {"she", ActorCategory::Female}, {"it", ActorCategory::NonHuman},
      {"they", ActorCategory::Group}};
  std::map<ActorCategory, int> votes;
  for (const auto& [p, n] : pronoun_counts) {
    auto it = by_pronoun.find(p);
    if (it != by_pronoun.end() && n > 0) votes[it->second] += n;
  }
  ActorCategory best = ActorCategory::Unknown;
  int best_n = 0;
  bool tie = false;
  for (const auto& [c, n] : votes) {
    if (n > best_n) {
      best = c;
      best_n = n;
      tie = false;
    } else if (n == best_n) {
      tie = true;
    }
  }
  return tie ? ActorCategory::Unknown : best;
}

// ---------------------------------------------------------------------------

void ConflictNetwork::add(const std::string& source, const std::string& target, std::optional<Hyperedge> topic) {
  if (source == target) throw Error("conflict network: self-loop on " + source);
  edges_.push_back({source, target, std::move(topic)});
  ++degree_[source];
  ++degree_[target];
  pairs_.emplace(source, target);
  pairs_.emplace(target, source);
}

void ConflictNetwork::add(const Conflict& c) { add(c.source.str(), c.target.str(), c.topic); }

std::set<std::string> ConflictNetwork::nodes() const {
  std::set<std::string> out;
  for (const auto& [n, d] : degree_) out.insert(n);
  return out;
}

std::size_t ConflictNetwork::degree(const std::string& node) const {
  auto it = degree_.find(node);
  return it == degree_.end() ? 0 : it->second;
}

bool ConflictNetwork::in_conflict(const std::string& a, const std::string& b) const {
  return pairs_.count({a, b}) > 0;
}

Factions detect_factions(const ConflictNetwork& net) {
  if (net.empty()) throw Error("conflict network is empty");
  std::vector<const ConflictNetwork::Edge*> order;
  for (const auto& e : net.edges()) order.push_back(&e);
  auto score = [&](const ConflictNetwork::Edge* e) { return std::min(net.degree(e->source), net.degree(e->target)); };
  std::stable_sort(order.begin(), order.end(), [&](auto* x, auto* y) {
    auto sx = score(x), sy = score(y);
    if (sx != sy) return sx > sy;
    return std::tie(x->source, x->target) < std::tie(y->source, y->target);
  });

  Factions f;
  auto conflicts_with = [&](const std::string& n, const std::set<std::string>& group) {
    return std::any_of(group.begin(), group.end(), [&](const std::string& m) { return net.in_conflict(n, m); });
  };
  auto try_join = [&](const std::string& n) {
    if (f.a.count(n) || f.b.count(n)) return;
    if (!conflicts_with(n, f.a) && conflicts_with(n, f.b)) {
      f.a.insert(n);
    } else if (!conflicts_with(n, f.b) && conflicts_with(n, f.a)) {
      f.b.insert(n);
    }
  };

  const auto* first = order.front();
  bool source_first = net.degree(first->source) > net.degree(first->target) ||
                      (net.degree(first->source) == net.degree(first->target) && first->source < first->target);
  f.a.insert(source_first ? first->source : first->target);
  f.b.insert(source_first ? first->target : first->source);
  for (std::size_t i = 1; i < order.size(); ++i) {
    try_join(order[i]->source);
    try_join(order[i]->target);
  }
  for (const auto& n : net.nodes()) {
    if (!f.a.count(n) && !f.b.count(n)) f.unassigned.insert(n);
  }
  return f;
}

}  // namespace shg
