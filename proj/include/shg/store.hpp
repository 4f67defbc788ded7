#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "shg/hedge.hpp"

namespace shg {

struct EdgeAttributes {
  std::string text;
  std::size_t count = 1;
  std::map<std::string, std::string> tags;

  friend bool operator==(const EdgeAttributes&, const EdgeAttributes&) = default;
};

/// Multiset of top-level edges. Every edge present at any depth is indexed
/// with the set of distinct edges that immediately contain it.
class Store {
 public:
  /// Adds `attrs.count` occurrences. Returns true if the edge was not yet a
  /// top-level member.
  bool add(const Hyperedge& edge, const EdgeAttributes& attrs = {});
  /// Removes one occurrence. Returns false if the edge is not a top-level member.
  bool remove(const Hyperedge& edge);

  bool contains(const Hyperedge& edge) const;       // top level
  bool contains_deep(const Hyperedge& edge) const;  // any depth
  std::size_t count(const Hyperedge& edge) const;
  const EdgeAttributes* attributes(const Hyperedge& edge) const;
  std::size_t size() const { return top_.size(); }
  bool empty() const { return top_.empty(); }

  /// Top-level edges in notation order.
  std::vector<Hyperedge> edges() const;
  /// Every edge present at any depth, in notation order.
  std::vector<Hyperedge> all_edges() const;

  /// D_e: distinct edges that have `edge` as an immediate element.
  std::vector<Hyperedge> edges_containing(const Hyperedge& edge) const;
  /// Sum over D_e of (element count - 1).
  std::size_t degree(const Hyperedge& edge) const;
  /// Δ_e: D_e together with the neighborhoods of its members.
  std::vector<Hyperedge> neighborhood(const Hyperedge& edge) const;
  /// Sum over Δ_e of (element count - 1).
  std::size_t deep_degree(const Hyperedge& edge) const;

  /// Concept edges whose main c is `c`.
  std::vector<Hyperedge> hyponyms(const Hyperedge& c) const;
  std::optional<Hyperedge> hypernym(const Hyperedge& c) const;

  /// Lemma recorded by a top-level (lemma/J word lemma) edge, ignoring roles.
  std::optional<Atom> lemma_of(const Atom& atom) const;
  /// Top-level lemma/J edges.
  std::vector<Hyperedge> lemma_edges() const;

  void write(std::ostream& out) const;
  static Store read(std::istream& in);
  void save(const std::string& path) const;
  static Store load(const std::string& path);

 private:
  struct Entry {
    std::unordered_map<Hyperedge, int, HyperedgeHash> parents;
    bool top = false;
  };

  void materialize(const Hyperedge& edge);
  void release(const Hyperedge& edge);
  void index_lemma(const Hyperedge& edge, int delta);

  std::unordered_map<Hyperedge, Entry, HyperedgeHash> entries_;
  std::unordered_map<Hyperedge, EdgeAttributes, HyperedgeHash> top_;
  std::map<std::string, std::map<std::string, int>> lemmas_;  // word -> lemma atom text -> count
};

bool is_lemma_edge(const Hyperedge& edge);

}  // namespace shg
