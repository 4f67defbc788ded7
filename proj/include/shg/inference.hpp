#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shg/hedge.hpp"
#include "shg/pattern.hpp"
#include "shg/store.hpp"
#include "shg/text.hpp"

namespace shg {

struct InferenceConfig {
  std::set<std::string> claim_lemmas{"say", "claim"};
  std::set<std::string> conflict_lemmas{"accuse", "arrest", "clash", "condemn", "kill", "slam", "warn"};
  std::set<std::string> conflict_triggers{"against", "for", "of", "over"};
};

// ---------------------------------------------------------------------------
// Conjunctions

/// Replaces conjunctions by their members, at any depth:
///   concept conjunctions fan out into one edge per member;
///   relation conjunctions split into their relations;
///   a relation with no s or p argument borrows the last subject seen earlier
///   in the same conjunction.
/// Edges without conjunctions come back unchanged, so the result is a
/// fixpoint. lemma/J edges are left alone.
std::vector<Hyperedge> decompose_conjunctions(const Hyperedge& edge);

// ---------------------------------------------------------------------------
// Open information extraction

struct OIETuple {
  std::string rel;
  std::vector<std::string> args;

  /// Tab separated: rel, arg1, arg2[, arg3...]
  std::string str() const;
  friend bool operator==(const OIETuple&, const OIETuple&) = default;
};

/// The five extraction patterns, most productive first.
const std::vector<Pattern>& oie_patterns();

/// Matches the top-level edge against every pattern. REL* variables form the
/// relation text in name order ("is" when there are none); ARG* variables and
/// sequences form the arguments in name order. Duplicates are dropped.
std::vector<OIETuple> extract_oie(const Hyperedge& edge, const SurfaceForms* forms = nullptr);
/// Decomposes conjunctions first, then extracts from every resulting edge.
std::vector<OIETuple> extract_oie_all(const Hyperedge& edge, const SurfaceForms* forms = nullptr);

// ---------------------------------------------------------------------------
// Claims and conflicts

enum class Tense { Past, Present, Future };
std::string tense_name(Tense t);

struct PredicateInfo {
  Tense tense = Tense::Present;
  bool negated = false;
  friend bool operator==(const PredicateInfo&, const PredicateInfo&) = default;
};

/// Looks at every atom of a (possibly modified) predicate: not/M or n't/M
/// negate, was/P means past, will/M means future.
PredicateInfo inspect_predicate(const Hyperedge& pred);

struct ClaimContext {
  Hyperedge relation;                      // first relation reached through :/J nesting
  std::vector<Hyperedge> contexts;         // the other :/J members
  std::vector<Hyperedge> specifications;   // x-role arguments
};

/// Peels :/J nestings. Specifications are the x arguments of the relation,
/// of relations nested in its arguments, and of the contexts.
std::optional<ClaimContext> extract_claim_context(const Hyperedge& outer);

struct Claim {
  Hyperedge actor;
  Hyperedge predicate;
  Hyperedge claim;
  std::vector<Hyperedge> contexts;
  std::vector<Hyperedge> specifications;
  Tense tense = Tense::Present;
  bool negated = false;
  std::string pronoun;  // replaced inner subject, if any
};

struct Conflict {
  Hyperedge source;
  Hyperedge target;
  Hyperedge topic;
  std::string trigger_root;
  Hyperedge predicate;
};

Pattern claim_pattern();
Pattern claim_lemma_pattern(const InferenceConfig& config);
Pattern conflict_pattern(const InferenceConfig& config);
Pattern conflict_lemma_pattern(const InferenceConfig& config);

std::optional<Claim> detect_claim(const Hyperedge& edge, const Store& store, const InferenceConfig& config = {});
std::optional<Conflict> detect_conflict(const Hyperedge& edge, const Store& store,
                                        const InferenceConfig& config = {});

/// Replaces a he/it/she/they subject of the claim relation by the actor.
Claim resolve_anaphora(Claim claim);

enum class ActorCategory { Male, Female, NonHuman, Group, Unknown };
std::string category_name(ActorCategory c);
/// Majority over pronoun counts (he, she, it, they); ties and no evidence
/// give Unknown.
ActorCategory actor_category(const std::map<std::string, int>& pronoun_counts);

// ---------------------------------------------------------------------------
// Factions

class ConflictNetwork {
 public:
  struct Edge {
    std::string source;
    std::string target;
    std::optional<Hyperedge> topic;
  };

  void add(const std::string& source, const std::string& target, std::optional<Hyperedge> topic = std::nullopt);
  void add(const Conflict& c);

  const std::vector<Edge>& edges() const { return edges_; }
  std::set<std::string> nodes() const;
  /// In plus out edges.
  std::size_t degree(const std::string& node) const;
  bool in_conflict(const std::string& a, const std::string& b) const;
  bool empty() const { return edges_.empty(); }

 private:
  std::vector<Edge> edges_;
  std::map<std::string, std::size_t> degree_;
  std::set<std::pair<std::string, std::string>> pairs_;  // both orientations
};

struct Factions {
  std::set<std::string> a;
  std::set<std::string> b;
  std::set<std::string> unassigned;
};

/// Edges are visited by min(d_i, d_j) descending, ties by (source, target).
/// The first edge puts its busier endpoint in A and the other in B. Later a
/// node joins a faction when it conflicts with nobody in it and with someone
/// in the other one.
Factions detect_factions(const ConflictNetwork& net);

}  // namespace shg
