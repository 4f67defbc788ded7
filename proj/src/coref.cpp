#include "shg/coref.hpp"

#include <algorithm>
#include <functional>

namespace shg {

namespace {

std::string key(const Atom& a) { return a.without_roles().str(); }

}  // namespace

bool is_plus_compound(const Hyperedge& edge) {
  if (edge.is_atom() || !edge.connector().is_atom()) return false;
  const auto& c = edge.connector().atom();
  return c.root == "+" && c.type == TypeCode::Builder;
}

std::optional<Atom> compound_seed(const Hyperedge& edge) {
  if (!is_plus_compound(edge)) return std::nullopt;
  Hyperedge cur = edge;
  while (is_plus_compound(cur)) {
    try {
      cur = main_concept(cur);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  if (!cur.is_atom() || cur.atom().type != TypeCode::Concept) return std::nullopt;
  return cur.atom().without_roles();
}

std::vector<Atom> seed_concepts(const Store& store) {
  std::map<std::string, Atom> seeds;
  for (const auto& e : store.all_edges()) {
    if (auto s = compound_seed(e)) seeds.emplace(key(*s), *s);
  }
  std::vector<Atom> out;
  for (auto& [k, a] : seeds) out.push_back(a);
  return out;
}

std::vector<Hyperedge> seed_compounds(const Store& store, const Atom& seed) {
  std::vector<Hyperedge> out;
  for (const auto& e : store.all_edges()) {
    auto s = compound_seed(e);
    if (s && key(*s) == key(seed)) out.push_back(e);
  }
  return out;
}

std::set<std::string> auxiliary_atoms(const Hyperedge& compound, const Atom& seed) {
  std::set<std::string> out;
  std::string s = key(seed);
  for (const auto& a : atoms_of(compound)) {
    if (a.root == "+" && a.type == TypeCode::Builder) continue;
    std::string k = key(a);
    if (k != s) out.insert(k);
  }
  return out;
}

CooccurrenceGraph cooccurrence_graph(const Store& store, const Atom& seed) {
  CooccurrenceGraph g;
  for (const auto& c : seed_compounds(store, seed)) {
    auto aux = auxiliary_atoms(c, seed);
    for (const auto& a : aux) {
      auto& adj = g.adjacency[a];
      for (const auto& b : aux) {
        if (a != b) adj.insert(b);
      }
    }
  }
  return g;
}

std::vector<std::set<std::string>> maximal_cliques(const CooccurrenceGraph& graph, std::size_t max_nodes) {
  if (graph.adjacency.size() > max_nodes) {
    throw Error("co-occurrence graph has " + std::to_string(graph.adjacency.size()) + " nodes, limit is " +
                std::to_string(max_nodes));
  }
  std::vector<std::set<std::string>> out;
  auto neighbors = [&](const std::string& v) -> const std::set<std::string>& { return graph.adjacency.at(v); };
  std::function<void(std::set<std::string>, std::set<std::string>, std::set<std::string>)> bk =
      [&](std::set<std::string> r, std::set<std::string> p, std::set<std::string> x) {
        if (p.empty() && x.empty()) {
          out.push_back(r);
          return;
        }
        // pivot: vertex of P ∪ X with most neighbours in P
        std::string pivot;
        std::size_t best = 0;
        bool have = false;
        for (const auto* s : {&p, &x}) {
          for (const auto& u : *s) {
            std::size_t n = 0;
            for (const auto& w : neighbors(u)) n += p.count(w);
            if (!have || n > best) {
              pivot = u;
              best = n;
              have = true;
            }
          }
        }
        std::vector<std::string> todo;
        for (const auto& v : p) {
          if (!neighbors(pivot).count(v)) todo.push_back(v);
        }
        for (const auto& v : todo) {
          std::set<std::string> r2 = r, p2, x2;
          r2.insert(v);
          for (const auto& w : neighbors(v)) {
            if (p.count(w)) p2.insert(w);
            if (x.count(w)) x2.insert(w);
          }
          bk(std::move(r2), std::move(p2), std::move(x2));
          p.erase(v);
          x.insert(v);
        }
      };
  std::set<std::string> all;
  for (const auto& [v, n] : graph.adjacency) all.insert(v);
  bk({}, all, {});
  std::sort(out.begin(), out.end());
  return out;
}

Hyperedge coref_label(const Store& store, const std::vector<Hyperedge>& members) {
  if (members.empty()) throw Error("coreference set is empty");
  const Hyperedge* best = &members.front();
  for (const auto& m : members) {
    auto dm = store.degree(m), db = store.degree(*best);
    if (dm != db) {
      if (dm > db) best = &m;
      continue;
    }
    auto sm = size_of(m), sb = size_of(*best);
    if (sm != sb) {
      if (sm < sb) best = &m;
      continue;
    }
    if (m < *best) best = &m;
  }
  return *best;
}

std::vector<CorefSet> coref_sets(const Store& store, const Atom& seed, std::size_t max_nodes) {
  auto compounds = seed_compounds(store, seed);
  auto cliques = maximal_cliques(cooccurrence_graph(store, seed), max_nodes);

  auto text = [](const std::set<std::string>& s) {
    std::string out;
    for (const auto& x : s) out += x + " ";
    return out;
  };
  std::vector<std::vector<std::size_t>> fits(compounds.size());  // clique indices per compound
  std::vector<std::size_t> mass(cliques.size(), 0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < compounds.size(); ++i) {
    auto aux = auxiliary_atoms(compounds[i], seed);
    total += store.degree(compounds[i]);
    for (std::size_t k = 0; k < cliques.size(); ++k) {
      if (std::includes(cliques[k].begin(), cliques[k].end(), aux.begin(), aux.end())) {
        fits[i].push_back(k);
        mass[k] += store.degree(compounds[i]);
      }
    }
  }

  std::vector<std::vector<Hyperedge>> members(cliques.size());
  for (std::size_t i = 0; i < compounds.size(); ++i) {
    if (fits[i].empty()) continue;
    std::size_t best = fits[i].front();
    for (auto k : fits[i]) {
      if (mass[k] > mass[best] || (mass[k] == mass[best] && text(cliques[k]) < text(cliques[best]))) best = k;
    }
    members[best].push_back(compounds[i]);
  }

  std::vector<CorefSet> out;
  for (std::size_t k = 0; k < cliques.size(); ++k) {
    if (members[k].empty()) continue;
    CorefSet s;
    s.members = members[k];
    std::sort(s.members.begin(), s.members.end());
    s.clique = cliques[k];
    for (const auto& m : s.members) s.total_degree += store.degree(m);
    s.p = total == 0 ? 0.0 : static_cast<double>(s.total_degree) / static_cast<double>(total);
    s.label = coref_label(store, s.members);
    out.push_back(std::move(s));
  }
  return out;
}

SeedAssignment assign_seed(const Store& store, const Atom& seed, const std::vector<CorefSet>& sets, double theta,
                           double theta_prime) {
  SeedAssignment a;
  a.seed = seed;
  a.theta = theta;
  a.theta_prime = theta_prime;
  Hyperedge s(seed);
  a.degree = store.degree(s);
  a.deep_degree = store.deep_degree(s);
  const CorefSet* best = nullptr;
  for (const auto& set : sets) {
    if (!best || set.p > best->p) best = &set;
  }
  if (!best) return a;
  a.best_p = best->p;
  if (a.deep_degree == 0) return a;
  double ratio = static_cast<double>(a.degree) / static_cast<double>(a.deep_degree);
  if (best->p > theta && ratio > theta_prime) a.assigned = *best;
  return a;
}

SeedAssignment resolve_seed(const Store& store, const Atom& seed, const CorefParams& params) {
  return assign_seed(store, seed, coref_sets(store, seed, params.max_nodes), params.theta, params.theta_prime);
}

}  // namespace shg
