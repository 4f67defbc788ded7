#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shg/alpha.hpp"
#include "shg/hedge.hpp"
#include "shg/sentence.hpp"

namespace shg::beta {

/// A partially built edge together with the tokens it covers. `parts` mirrors
/// the edge elements so roles can be assigned once the structure is final.
struct WorkItem {
  Hyperedge edge;
  std::vector<std::size_t> tokens;  // sorted
  std::vector<WorkItem> parts;      // empty for atoms
  std::optional<std::size_t> token;  // source token of an atom; empty if synthesized
};

/// Folding rules in priority order; the enumerator value is the rank.
enum class Rule { Compound, Modifier, Builder, Trigger, Predicate, Conjunction };

std::string rule_name(Rule rule);

struct Candidate {
  Rule rule;
  std::size_t start;
  std::size_t length;
  std::size_t connector;  // offset inside the window; ignored for Compound
};

struct Score {
  int connected = 0;
  int depth = 0;
  int priority = 0;  // negated rank
  auto operator<=>(const Score&) const = default;
};

/// One item per non-discarded token, in sentence order.
std::vector<WorkItem> initial_items(const AnnotatedSentence& sentence, const std::vector<std::optional<Atom>>& atoms);

/// Every match in scan order (window start, then rule rank). `sentence` may be
/// null, in which case predicates absorb every adjacent argument and implicit
/// compounds are not checked against the dependency tree.
std::vector<Candidate> candidates(const std::vector<WorkItem>& seq, const AnnotatedSentence* sentence);

std::optional<std::vector<WorkItem>> apply_pattern(const std::vector<WorkItem>& seq, std::size_t pos, Rule rule,
                                                   const AnnotatedSentence* sentence = nullptr);
std::vector<WorkItem> apply_candidate(const std::vector<WorkItem>& seq, const Candidate& c);

Score heuristic(const std::vector<WorkItem>& seq, const Candidate& c, const AnnotatedSentence& sentence);

WorkItem beta_transform(std::vector<WorkItem> seq, const AnnotatedSentence& sentence);

using RoleTable = std::map<std::string, char>;
const RoleTable& default_role_table();

/// Rebuilds the edge of `item` with predicate and builder roles.
Hyperedge assign_arg_roles(const WorkItem& item, const AnnotatedSentence& sentence,
                           const RoleTable& table = default_role_table());

struct ParseResult {
  Hyperedge edge;
  std::vector<Hyperedge> lemma_edges;
};

/// Runs β and role assignment on an already classified sentence.
ParseResult parse_classified(const AnnotatedSentence& sentence, const std::vector<std::optional<Atom>>& atoms,
                             const RoleTable& table = default_role_table());
ParseResult parse_labeled(const AnnotatedSentence& sentence, const std::vector<AlphaLabel>& labels,
                          const RoleTable& table = default_role_table());
ParseResult parse_sentence(const AnnotatedSentence& sentence, const alpha::Forest& forest,
                           const RoleTable& table = default_role_table());

}  // namespace shg::beta
