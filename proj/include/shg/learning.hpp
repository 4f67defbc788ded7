#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shg/hedge.hpp"
#include "shg/pattern.hpp"
#include "shg/store.hpp"

namespace shg {

/// A pattern plus an optional lemma condition on one of its variables, i.e.
/// the conjunction `pattern & (lemma/J >VAR/T [lemmas]/T)`.
struct LearnedPattern {
  Pattern pattern;
  std::string lemma_var;
  TypeCode lemma_type = TypeCode::Predicate;
  std::set<std::string> lemmas;

  std::string str() const;
  std::vector<Pattern> conjunction() const;
  std::vector<Binding> match(const Hyperedge& edge, const std::vector<Hyperedge>& lemma_edges) const;
  bool matches(const Hyperedge& edge, const std::vector<Hyperedge>& lemma_edges) const;
  friend bool operator==(const LearnedPattern& a, const LearnedPattern& b) { return a.str() == b.str(); }
};

/// Parses "pattern" or "pattern & (lemma/J >VAR/T [a,b]/T)".
LearnedPattern parse_learned(const std::string& text);

/// Pattern learning cannot make progress (contradictory labels, no consistent
/// specialization, unknown session...).
class LearningError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------

/// "random" (uses `seed`) or "predicate-frequency" (edges whose predicate
/// root is the `rank`-th most frequent, ties by root).
Hyperedge select_candidate(const Store& store, const std::string& criterion, std::uint64_t seed = 0,
                           std::size_t rank = 0);

/// Assigned sub-edges become variables, sub-edges holding assignments are
/// generalized recursively, everything else becomes a typed wildcard. The top
/// connector stays literal with its roles as an unordered set.
Pattern generalize(const Hyperedge& edge, const std::map<std::string, Hyperedge>& assignments);

struct RefineOptions {
  std::size_t max_depth = 4;
  std::size_t node_budget = 4000;
};

struct RefineResult {
  LearnedPattern pattern;
  std::size_t depth = 0;        // specialization steps applied
  std::size_t store_matches = 0;
  std::vector<std::string> steps;
};

/// Breadth-first search over specializations (connector root, lemma
/// condition, role constraints, argument types, atom vs non-atom). Among
/// candidates that match every positive and no negative, the one matching
/// the most store edges wins, then the shallowest, then text order.
RefineResult refine(const LearnedPattern& pattern, const std::vector<Hyperedge>& positives,
                    const std::vector<Hyperedge>& negatives, const Store& store, const RefineOptions& options = {});

// ---------------------------------------------------------------------------

struct GeneralizationConfig {
  std::size_t max_depth = 2;
  std::set<std::size_t> relation_sizes{3, 4};
  std::set<TypeCode> excluded{TypeCode::Conjunction, TypeCode::Modifier};
  bool explicit_plus = true;
};

struct MinedPattern {
  std::string pattern;
  std::size_t count = 0;
  friend bool operator==(const MinedPattern&, const MinedPattern&) = default;
};

/// Typed-wildcard generalizations of one edge up to `config.max_depth`.
std::vector<std::string> generalizations(const Hyperedge& edge, const GeneralizationConfig& config = {});

/// Counts generalizations over every distinct edge of the store; ranked by
/// count descending, then pattern text.
std::vector<MinedPattern> mine_patterns(const Store& store, const GeneralizationConfig& config = {});

// ---------------------------------------------------------------------------

struct Session {
  std::string id;
  std::string criterion;
  Hyperedge candidate{Atom{}};
  std::vector<std::string> schema;
  std::map<std::string, Hyperedge> assignments;
  std::optional<LearnedPattern> pattern;
  std::vector<Hyperedge> positives;
  std::vector<Hyperedge> negatives;
  std::vector<std::string> history;

  bool consistent(const Store& store) const;
};

/// Sessions kept in memory and mirrored to a JSON sidecar file when a path
/// is given.
class SessionManager {
 public:
  explicit SessionManager(std::string sidecar = {});

  Session& create(const Store& store, const std::string& criterion, const std::vector<std::string>& schema,
                  std::uint64_t seed = 0);
  const Session& get(const std::string& id) const;
  bool contains(const std::string& id) const { return sessions_.count(id) > 0; }
  std::vector<std::string> ids() const;

  /// Binds a variable to a sub-edge of the candidate and regenerates the
  /// pattern; the candidate becomes the first positive.
  const Session& assign(const std::string& id, const std::string& variable, const Hyperedge& sub_edge,
                        const Store& store);
  /// Store edges matched by the current pattern that have no verdict yet.
  std::vector<Hyperedge> pending(const std::string& id, const Store& store) const;
  /// Records a verdict and refines the pattern if it is no longer consistent.
  const Session& feedback(const std::string& id, const Hyperedge& edge, bool accept, const Store& store);

  /// Rule-file line `pattern [& lemma] |- (name/J VARS...)`.
  std::string export_rule(const std::string& id, const std::string& name = "learned") const;

  void save() const;
  void load();

 private:
  Session& mutable_get(const std::string& id);

  std::string sidecar_;
  std::map<std::string, Session> sessions_;
  std::size_t next_id_ = 1;
};

}  // namespace shg
