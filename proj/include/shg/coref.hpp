#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "shg/hedge.hpp"
#include "shg/store.hpp"

namespace shg {

struct CorefParams {
  double theta = 0.7;         // minimum share p of the winning set
  double theta_prime = 0.05;  // minimum d_s / δ_s of the seed
  std::size_t max_nodes = 64;  // co-occurrence graph size limit
};

struct CorefSet {
  std::vector<Hyperedge> members;   // sorted
  std::set<std::string> clique;     // auxiliary atoms of the maximal clique
  std::size_t total_degree = 0;
  double p = 0.0;
  Hyperedge label{Atom{}};
};

struct SeedAssignment {
  Atom seed;
  std::optional<CorefSet> assigned;
  double theta = 0.7;
  double theta_prime = 0.05;
  std::size_t degree = 0;       // d_s
  std::size_t deep_degree = 0;  // δ_s
  double best_p = 0.0;
};

/// Undirected graph over auxiliary atoms (notation without roles).
struct CooccurrenceGraph {
  std::map<std::string, std::set<std::string>> adjacency;
};

bool is_plus_compound(const Hyperedge& edge);
/// Follows main concepts of nested +/B compounds down to an atomic concept.
std::optional<Atom> compound_seed(const Hyperedge& edge);

/// Atomic concepts that end the main-concept chain of some +/B compound.
std::vector<Atom> seed_concepts(const Store& store);
/// Compounds (at any depth in the store) whose chain ends at `seed`.
std::vector<Hyperedge> seed_compounds(const Store& store, const Atom& seed);
/// Atoms of a compound other than the seed and the +/B connectors.
std::set<std::string> auxiliary_atoms(const Hyperedge& compound, const Atom& seed);

CooccurrenceGraph cooccurrence_graph(const Store& store, const Atom& seed);
/// Bron–Kerbosch with pivoting; cliques come out sorted.
std::vector<std::set<std::string>> maximal_cliques(const CooccurrenceGraph& graph, std::size_t max_nodes = 64);

/// One set per maximal clique that ends up with members. A compound whose
/// auxiliaries fit several cliques goes to the clique with the largest total
/// member degree (ties: smaller clique text).
std::vector<CorefSet> coref_sets(const Store& store, const Atom& seed, std::size_t max_nodes = 64);

/// Highest degree, then fewest atoms, then notation order.
Hyperedge coref_label(const Store& store, const std::vector<Hyperedge>& members);

SeedAssignment assign_seed(const Store& store, const Atom& seed, const std::vector<CorefSet>& sets, double theta,
                           double theta_prime);
SeedAssignment resolve_seed(const Store& store, const Atom& seed, const CorefParams& params = {});

}  // namespace shg
