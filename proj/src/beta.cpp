#include "shg/beta.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace shg::beta {

namespace {

const std::set<std::string>& compound_deps() {
  static const std::set<std::string> deps = {"compound", "flat", "flat:name", "nn", "compound:prt"};
  return deps;
}

TypeCode type_of(const WorkItem& item) { return infer_type(item.edge); }

bool is_argument_type(TypeCode t) {
  return t == TypeCode::Concept || t == TypeCode::Relation || t == TypeCode::Specifier;
}

std::vector<std::size_t> merge_tokens(const std::vector<const WorkItem*>& items) {
  std::vector<std::size_t> out;
  for (const auto* it : items) out.insert(out.end(), it->tokens.begin(), it->tokens.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool covers(const WorkItem& item, std::size_t token) {
  return std::binary_search(item.tokens.begin(), item.tokens.end(), token);
}

// Token of `item` whose head lies outside it, preferring the shallowest.
std::optional<std::size_t> top_token(const std::vector<std::size_t>& tokens, const AnnotatedSentence& s,
                                     const std::vector<int>& depth) {
  std::optional<std::size_t> best;
  for (std::size_t t : tokens) {
    auto h = static_cast<std::size_t>(s.tokens[t].head);
    bool outside = h == t || !std::binary_search(tokens.begin(), tokens.end(), h);
    if (outside && (!best || depth[t] < depth[*best])) best = t;
  }
  return best;
}

// True when some token of `a` has its head in `b` or the other way round.
bool linked(const WorkItem& a, const WorkItem& b, const AnnotatedSentence& s) {
  for (std::size_t t : a.tokens) {
    auto h = static_cast<std::size_t>(s.tokens[t].head);
    if (h != t && covers(b, h)) return true;
  }
  for (std::size_t t : b.tokens) {
    auto h = static_cast<std::size_t>(s.tokens[t].head);
    if (h != t && covers(a, h)) return true;
  }
  return false;
}

bool compound_linked(const WorkItem& a, const WorkItem& b, const AnnotatedSentence& s) {
  auto check = [&](const WorkItem& dep, const WorkItem& head) {
    for (std::size_t t : dep.tokens) {
      auto h = static_cast<std::size_t>(s.tokens[t].head);
      if (h != t && covers(head, h) && compound_deps().count(s.tokens[t].dep)) return true;
    }
    return false;
  };
  return check(a, b) || check(b, a);
}

// Argument whose top token depends on a token of the predicate item.
bool depends_on(const WorkItem& arg, const WorkItem& pred, const AnnotatedSentence& s) {
  for (std::size_t t : arg.tokens) {
    auto h = static_cast<std::size_t>(s.tokens[t].head);
    if (h != t && !covers(arg, h)) return covers(pred, h);
  }
  return false;
}

std::optional<Candidate> predicate_window(const std::vector<WorkItem>& seq, std::size_t p,
                                          const AnnotatedSentence* s) {
  auto extent = [&](bool restrict) {
    std::size_t lo = p, hi = p;
    while (lo > 0 && is_argument_type(type_of(seq[lo - 1])) &&
           (!restrict || depends_on(seq[lo - 1], seq[p], *s))) {
      --lo;
    }
    while (hi + 1 < seq.size() && is_argument_type(type_of(seq[hi + 1])) &&
           (!restrict || depends_on(seq[hi + 1], seq[p], *s))) {
      ++hi;
    }
    return std::pair{lo, hi};
  };
  auto [lo, hi] = extent(s != nullptr);
  if (lo == hi) std::tie(lo, hi) = extent(false);
  if (lo == hi) return std::nullopt;
  return Candidate{Rule::Predicate, lo, hi - lo + 1, p - lo};
}

std::optional<Candidate> match_at(const std::vector<WorkItem>& seq, std::size_t pos, Rule rule,
                                  const AnnotatedSentence* s) {
  const std::size_t n = seq.size();
  switch (rule) {
    case Rule::Compound: {
      if (pos + 2 > n) return std::nullopt;
      if (type_of(seq[pos]) != TypeCode::Concept || type_of(seq[pos + 1]) != TypeCode::Concept) return std::nullopt;
      if (s && !compound_linked(seq[pos], seq[pos + 1], *s)) return std::nullopt;
      return Candidate{rule, pos, 2, 0};
    }
    case Rule::Modifier: {
      if (pos + 2 > n) return std::nullopt;
      for (std::size_t k = 0; k < 2; ++k) {
        if (type_of(seq[pos + k]) == TypeCode::Modifier) return Candidate{rule, pos, 2, k};
      }
      return std::nullopt;
    }
    case Rule::Trigger: {
      if (pos + 2 > n) return std::nullopt;
      for (std::size_t k = 0; k < 2; ++k) {
        auto other = type_of(seq[pos + 1 - k]);
        if (type_of(seq[pos + k]) == TypeCode::Trigger &&
            (other == TypeCode::Concept || other == TypeCode::Relation)) {
          return Candidate{rule, pos, 2, k};
        }
      }
      return std::nullopt;
    }
    case Rule::Builder:
    case Rule::Conjunction: {
      if (pos + 3 > n) return std::nullopt;
      const TypeCode conn = rule == Rule::Builder ? TypeCode::Builder : TypeCode::Conjunction;
      for (std::size_t k = 0; k < 3; ++k) {
        if (type_of(seq[pos + k]) != conn) continue;
        std::vector<TypeCode> rest;
        for (std::size_t j = 0; j < 3; ++j) {
          if (j != k) rest.push_back(type_of(seq[pos + j]));
        }
        bool ok = rule == Rule::Builder
                      ? rest[0] == TypeCode::Concept && rest[1] == TypeCode::Concept
                      : rest[0] == rest[1] && !is_connector_type(rest[0]);
        if (ok) return Candidate{rule, pos, 3, k};
      }
      return std::nullopt;
    }
    case Rule::Predicate: {
      // a predicate window is identified by where it starts
      for (std::size_t p = pos; p < n; ++p) {
        if (type_of(seq[p]) != TypeCode::Predicate) continue;
        auto c = predicate_window(seq, p, s);
        if (c && c->start == pos) return c;
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

std::string rule_name(Rule rule) {
  switch (rule) {
    case Rule::Compound: return "(C C)";
    case Rule::Modifier: return "(M x)";
    case Rule::Builder: return "(B C C)";
    case Rule::Trigger: return "(T [CR])";
    case Rule::Predicate: return "(P [CRS]+)";
    case Rule::Conjunction: return "(J x x')";
  }
  return "?";
}

std::vector<WorkItem> initial_items(const AnnotatedSentence& sentence, const std::vector<std::optional<Atom>>& atoms) {
  if (atoms.size() != sentence.tokens.size()) throw Error("one classification per token expected");
  std::vector<WorkItem> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!atoms[i]) continue;
    out.push_back(WorkItem{Hyperedge(*atoms[i]), {i}, {}, i});
  }
  return out;
}

std::vector<Candidate> candidates(const std::vector<WorkItem>& seq, const AnnotatedSentence* sentence) {
  std::vector<Candidate> out;
  for (std::size_t pos = 0; pos < seq.size(); ++pos) {
    for (Rule r : {Rule::Compound, Rule::Modifier, Rule::Builder, Rule::Trigger, Rule::Predicate, Rule::Conjunction}) {
      if (r == Rule::Predicate) {
        // several predicates may share a start position
        for (std::size_t p = pos; p < seq.size(); ++p) {
          if (type_of(seq[p]) != TypeCode::Predicate) continue;
          auto c = predicate_window(seq, p, sentence);
          if (c && c->start == pos) out.push_back(*c);
        }
        continue;
      }
      if (auto c = match_at(seq, pos, r, sentence)) out.push_back(*c);
    }
  }
  return out;
}

std::vector<WorkItem> apply_candidate(const std::vector<WorkItem>& seq, const Candidate& c) {
  std::vector<WorkItem> parts;
  if (c.rule == Rule::Compound) {
    parts.push_back(WorkItem{make_atom("+", TypeCode::Builder), {}, {}, std::nullopt});
    parts.push_back(seq[c.start]);
    parts.push_back(seq[c.start + 1]);
  } else {
    parts.push_back(seq[c.start + c.connector]);
    for (std::size_t k = 0; k < c.length; ++k) {
      if (k != c.connector) parts.push_back(seq[c.start + k]);
    }
  }
  std::vector<Hyperedge> elems;
  std::vector<const WorkItem*> ptrs;
  for (const auto& p : parts) {
    elems.push_back(p.edge);
    ptrs.push_back(&p);
  }
  WorkItem combined{Hyperedge(std::move(elems)), merge_tokens(ptrs), std::move(parts), std::nullopt};
  std::vector<WorkItem> out(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(c.start));
  out.push_back(std::move(combined));
  out.insert(out.end(), seq.begin() + static_cast<std::ptrdiff_t>(c.start + c.length), seq.end());
  return out;
}

std::optional<std::vector<WorkItem>> apply_pattern(const std::vector<WorkItem>& seq, std::size_t pos, Rule rule,
                                                   const AnnotatedSentence* sentence) {
  auto c = match_at(seq, pos, rule, sentence);
  if (!c) return std::nullopt;
  return apply_candidate(seq, *c);
}

Score heuristic(const std::vector<WorkItem>& seq, const Candidate& c, const AnnotatedSentence& sentence) {
  Score score;
  score.priority = -static_cast<int>(c.rule);
  const auto depth = sentence.depths();
  for (std::size_t k = 0; k < c.length; ++k) {
    for (std::size_t t : seq[c.start + k].tokens) score.depth = std::max(score.depth, depth[t]);
  }
  // reachability over items linked by a head/child token pair
  std::vector<bool> seen(c.length, false);
  std::vector<std::size_t> stack = {0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < c.length; ++j) {
      if (!seen[j] && linked(seq[c.start + i], seq[c.start + j], sentence)) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  score.connected = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }) ? 1 : 0;
  return score;
}

WorkItem beta_transform(std::vector<WorkItem> seq, const AnnotatedSentence& sentence) {
  if (seq.empty()) throw Error("nothing to parse");
  while (seq.size() > 1) {
    std::optional<Candidate> best;
    Score best_score;
    for (const auto& c : candidates(seq, &sentence)) {
      Score s = heuristic(seq, c, sentence);
      if (!best || s > best_score) {
        best = c;
        best_score = s;
      }
    }
    if (best) {
      seq = apply_candidate(seq, *best);
      continue;
    }
    // nothing matched: relate the first two items generically
    std::vector<WorkItem> parts = {WorkItem{make_atom(":", TypeCode::Conjunction), {}, {}, std::nullopt}, seq[0],
                                   seq[1]};
    WorkItem joined{make_edge({parts[0].edge, seq[0].edge, seq[1].edge}), merge_tokens({&seq[0], &seq[1]}),
                    std::move(parts), std::nullopt};
    seq.erase(seq.begin(), seq.begin() + 2);
    seq.insert(seq.begin(), std::move(joined));
  }
  return seq.front();
}

const RoleTable& default_role_table() {
  static const RoleTable table = {
      {"nsubj", 's'},     {"nsubjpass", 'p'}, {"agent", 'a'},    {"attr", 'c'},  {"acomp", 'c'},
      {"dobj", 'o'},      {"dative", 'i'},    {"iobj", 'i'},     {"parataxis", 't'}, {"intj", 'j'},
      {"advcl", 'x'},     {"prep", 'x'},      {"npadvmod", 'x'}, {"ccomp", 'r'}, {"relcl", 'r'},
      {"xcomp", 'r'},
  };
  return table;
}

namespace {

Hyperedge rebuild(const WorkItem& item, const AnnotatedSentence& s, const std::vector<int>& depth,
                  const RoleTable& table) {
  if (item.parts.empty()) return item.edge;
  std::vector<Hyperedge> elems;
  for (const auto& p : item.parts) elems.push_back(rebuild(p, s, depth, table));
  const TypeCode ct = infer_type(elems[0]);
  const std::size_t nargs = item.parts.size() - 1;
  std::string roles;
  if (ct == TypeCode::Predicate) {
    for (std::size_t k = 1; k < item.parts.size(); ++k) {
      auto top = top_token(item.parts[k].tokens, s, depth);
      char r = '?';
      if (top) {
        auto it = table.find(s.tokens[*top].dep);
        if (it != table.end()) r = it->second;
      }
      roles += r;
    }
  } else if (ct == TypeCode::Builder) {
    if (elems[0].is_atom() && elems[0].atom().root == "+") {
      // the main argument is the one attached outside the compound
      std::optional<std::size_t> main;
      for (std::size_t k = 1; k < item.parts.size() && !main; ++k) {
        for (std::size_t t : item.parts[k].tokens) {
          auto h = static_cast<std::size_t>(s.tokens[t].head);
          if (h == t || !std::binary_search(item.tokens.begin(), item.tokens.end(), h)) {
            main = k;
            break;
          }
        }
      }
      std::size_t m = main.value_or(nargs);
      roles.assign(nargs, 'a');
      roles[m - 1] = 'm';
    } else {
      roles = "m" + std::string(nargs - 1, 'a');
    }
  }
  if (!roles.empty()) elems[0] = with_connector_roles(elems[0], roles);
  return Hyperedge(std::move(elems));
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

Hyperedge assign_arg_roles(const WorkItem& item, const AnnotatedSentence& sentence, const RoleTable& table) {
  return rebuild(item, sentence, sentence.depths(), table);
}

ParseResult parse_classified(const AnnotatedSentence& sentence, const std::vector<std::optional<Atom>>& atoms,
                             const RoleTable& table) {
  sentence.validate();
  auto items = initial_items(sentence, atoms);
  if (items.empty()) throw Error("every token was discarded");
  WorkItem root = beta_transform(std::move(items), sentence);
  ParseResult result{assign_arg_roles(root, sentence, table), {}};
  std::set<std::string> seen;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!atoms[i]) continue;
    const auto& tok = sentence.tokens[i];
    std::string lemma_root = alpha::atom_root_for(tok.lemma);
    if (lemma_root.empty() || lemma_root == lower(tok.text) || lemma_root == atoms[i]->root) continue;
    Atom word = atoms[i]->without_roles();
    Atom lemma{lemma_root, word.type, {}, {}};
    Hyperedge e = make_edge({make_atom("lemma", TypeCode::Conjunction), word, lemma});
    if (seen.insert(e.str()).second) result.lemma_edges.push_back(e);
  }
  return result;
}

ParseResult parse_labeled(const AnnotatedSentence& sentence, const std::vector<AlphaLabel>& labels,
                          const RoleTable& table) {
  if (labels.size() != sentence.tokens.size()) throw Error("one label per token expected");
  std::vector<std::optional<Atom>> atoms;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto type = label_type(labels[i]);
    std::string root = alpha::atom_root_for(sentence.tokens[i].text);
    if (type && !root.empty()) {
      atoms.push_back(Atom{root, *type, {}, {}});
    } else {
      atoms.emplace_back();
    }
  }
  return parse_classified(sentence, atoms, table);
}

ParseResult parse_sentence(const AnnotatedSentence& sentence, const alpha::Forest& forest, const RoleTable& table) {
  return parse_classified(sentence, alpha::classify_tokens(sentence, forest), table);
}

}  // namespace shg::beta
