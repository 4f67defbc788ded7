#include "shg/store.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace shg {

namespace {

std::vector<Hyperedge> distinct_elements(const Hyperedge& e) {
  std::vector<Hyperedge> out;
  if (e.is_atom()) return out;
  for (const auto& c : e.elements()) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

template <typename Range>
std::vector<Hyperedge> sorted(const Range& r) {
  std::vector<Hyperedge> out(r.begin(), r.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

bool is_lemma_edge(const Hyperedge& e) {
  if (e.is_atom() || e.arity() != 3) return false;
  const auto& c = e.connector();
  return c.is_atom() && c.atom().root == "lemma" && c.atom().type == TypeCode::Conjunction && e.args()[0].is_atom() &&
         e.args()[1].is_atom();
}

void Store::materialize(const Hyperedge& edge) {
  for (const auto& c : distinct_elements(edge)) {
    bool fresh = entries_.find(c) == entries_.end();
    entries_[c].parents.emplace(edge, 1);
    if (fresh) materialize(c);
  }
}

void Store::release(const Hyperedge& edge) {
  entries_.erase(edge);
  for (const auto& c : distinct_elements(edge)) {
    auto it = entries_.find(c);
    if (it == entries_.end()) continue;
    it->second.parents.erase(edge);
    if (!it->second.top && it->second.parents.empty()) release(c);
  }
}

void Store::index_lemma(const Hyperedge& edge, int delta) {
  if (!is_lemma_edge(edge)) return;
  std::string word = edge.args()[0].atom().without_roles().str();
  std::string lemma = edge.args()[1].atom().without_roles().str();
  auto& m = lemmas_[word];
  m[lemma] += delta;
  if (m[lemma] <= 0) m.erase(lemma);
  if (m.empty()) lemmas_.erase(word);
}

bool Store::add(const Hyperedge& edge, const EdgeAttributes& attrs) {
  if (attrs.count == 0) throw Error("edge count must be positive");
  auto it = top_.find(edge);
  if (it != top_.end()) {
    it->second.count += attrs.count;
    if (it->second.text.empty()) it->second.text = attrs.text;
    for (const auto& [k, v] : attrs.tags) it->second.tags[k] = v;
    return false;
  }
  top_.emplace(edge, attrs);
  bool fresh = entries_.find(edge) == entries_.end();
  entries_[edge].top = true;
  if (fresh) materialize(edge);
  index_lemma(edge, 1);
  return true;
}

bool Store::remove(const Hyperedge& edge) {
  auto it = top_.find(edge);
  if (it == top_.end()) return false;
  if (--it->second.count > 0) return true;
  top_.erase(it);
  index_lemma(edge, -1);
  auto& entry = entries_.at(edge);
  entry.top = false;
  if (entry.parents.empty()) release(edge);
  return true;
}

bool Store::contains(const Hyperedge& edge) const { return top_.count(edge) > 0; }

bool Store::contains_deep(const Hyperedge& edge) const { return entries_.count(edge) > 0; }

std::size_t Store::count(const Hyperedge& edge) const {
  auto it = top_.find(edge);
  return it == top_.end() ? 0 : it->second.count;
}

const EdgeAttributes* Store::attributes(const Hyperedge& edge) const {
  auto it = top_.find(edge);
  return it == top_.end() ? nullptr : &it->second;
}

std::vector<Hyperedge> Store::edges() const {
  std::vector<Hyperedge> out;
  for (const auto& [e, a] : top_) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Hyperedge> Store::all_edges() const {
  std::vector<Hyperedge> out;
  for (const auto& [e, en] : entries_) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Hyperedge> Store::edges_containing(const Hyperedge& edge) const {
  auto it = entries_.find(edge);
  if (it == entries_.end()) return {};
  std::vector<Hyperedge> out;
  for (const auto& [p, n] : it->second.parents) out.push_back(p);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t Store::degree(const Hyperedge& edge) const {
  auto it = entries_.find(edge);
  if (it == entries_.end()) return 0;
  std::size_t d = 0;
  for (const auto& [p, n] : it->second.parents) d += p.arity() - 1;
  return d;
}

std::vector<Hyperedge> Store::neighborhood(const Hyperedge& edge) const {
  std::unordered_map<Hyperedge, std::unordered_set<Hyperedge, HyperedgeHash>, HyperedgeHash> memo;
  std::function<const std::unordered_set<Hyperedge, HyperedgeHash>&(const Hyperedge&)> delta =
      [&](const Hyperedge& e) -> const std::unordered_set<Hyperedge, HyperedgeHash>& {
    auto found = memo.find(e);
    if (found != memo.end()) return found->second;
    memo.emplace(e, std::unordered_set<Hyperedge, HyperedgeHash>{});  // guards against revisits
    std::unordered_set<Hyperedge, HyperedgeHash> acc;
    auto it = entries_.find(e);
    if (it != entries_.end()) {
      for (const auto& [p, n] : it->second.parents) {
        acc.insert(p);
        const auto& up = delta(p);
        acc.insert(up.begin(), up.end());
      }
    }
    auto& slot = memo[e];
    slot = std::move(acc);
    return slot;
  };
  return sorted(delta(edge));
}

std::size_t Store::deep_degree(const Hyperedge& edge) const {
  std::size_t d = 0;
  for (const auto& p : neighborhood(edge)) d += p.arity() - 1;
  return d;
}

std::vector<Hyperedge> Store::hyponyms(const Hyperedge& c) const {
  std::vector<Hyperedge> out;
  auto it = entries_.find(c);
  if (it == entries_.end()) return out;
  for (const auto& [p, n] : it->second.parents) {
    if (try_infer_type(p) != TypeCode::Concept) continue;
    try {
      if (main_concept(p) == c) out.push_back(p);
    } catch (const Error&) {
      // ambiguous builders have no hypernym
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Hyperedge> Store::hypernym(const Hyperedge& c) const {
  if (c.is_atom() || try_infer_type(c) != TypeCode::Concept) return std::nullopt;
  try {
    return main_concept(c);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Atom> Store::lemma_of(const Atom& atom) const {
  auto it = lemmas_.find(atom.without_roles().str());
  if (it == lemmas_.end()) return std::nullopt;
  return parse_atom(it->second.begin()->first);
}

std::vector<Hyperedge> Store::lemma_edges() const {
  std::vector<Hyperedge> out;
  for (const auto& [e, a] : top_) {
    if (is_lemma_edge(e)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Persistence: "shg v1" header, then `notation TAB key=value;...` per edge.

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '%' || c == ';' || c == '=' || c == '\t' || c == '\n' || c == '\r') {
      static const char* hex = "0123456789ABCDEF";
      out += '%';
      out += hex[(static_cast<unsigned char>(c) >> 4) & 0xF];
      out += hex[static_cast<unsigned char>(c) & 0xF];
    } else {
      out += c;
    }
  }
  return out;
}

std::string unescape(const std::string& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out += s[i];
      continue;
    }
    if (i + 2 >= s.size()) throw Error("truncated escape");
    out += static_cast<char>(std::stoi(s.substr(i + 1, 2), nullptr, 16));
    i += 2;
  }
  return out;
}

}  // namespace

void Store::write(std::ostream& out) const {
  out << "shg v1\n";
  for (const auto& e : edges()) {
    const auto& a = top_.at(e);
    out << e.str() << '\t' << "count=" << a.count;
    if (!a.text.empty()) out << ";text=" << escape(a.text);
    for (const auto& [k, v] : a.tags) out << ";tag." << escape(k) << '=' << escape(v);
    out << '\n';
  }
}

Store Store::read(std::istream& in) {
  Store store;
  std::string line;
  if (!std::getline(in, line) || line != "shg v1") throw Error("store file line 1: missing 'shg v1' header");
  std::size_t n = 1;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      auto tab = line.find('\t');
      Hyperedge e = parse_notation(line.substr(0, tab));
      EdgeAttributes attrs;
      if (tab != std::string::npos) {
        std::stringstream ss(line.substr(tab + 1));
        std::string field;
        while (std::getline(ss, field, ';')) {
          auto eq = field.find('=');
          if (eq == std::string::npos) throw Error("malformed attribute '" + field + "'");
          std::string key = field.substr(0, eq), value = unescape(field.substr(eq + 1));
          if (key == "count") {
            attrs.count = std::stoul(value);
            if (attrs.count == 0) throw Error("zero count");
          } else if (key == "text") {
            attrs.text = value;
          } else if (key.rfind("tag.", 0) == 0) {
            attrs.tags[unescape(key.substr(4))] = value;
          } else {
            throw Error("unknown attribute '" + key + "'");
          }
        }
      }
      store.add(e, attrs);
    } catch (const std::exception& ex) {
      throw Error("store file line " + std::to_string(n) + ": " + ex.what());
    }
  }
  return store;
}

void Store::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write store file: " + path);
  write(out);
}

Store Store::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read store file: " + path);
  return read(in);
}

}  // namespace shg
