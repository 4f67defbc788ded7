#include "shg/text.hpp"

#include <algorithm>
#include <cctype>

namespace shg {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '-' || c == '.' ||
         (static_cast<unsigned char>(c) >= 0x80);
}

bool attaches_left(const std::string& w) {
  static const std::vector<std::string> tight = {",", ".", ";", ":", "!", "?", "'s", "'", "n't", "%"};
  return std::find(tight.begin(), tight.end(), w) != tight.end();
}

void append(std::vector<std::string>& out, const std::vector<std::string>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

}  // namespace

void SurfaceForms::add(std::string_view word) {
  // sentence-final period, but keep abbreviations like "u.s."
  if (!word.empty() && word.back() == '.' && word.find('.') == word.size() - 1) word.remove_suffix(1);
  while (!word.empty() && word.back() == '\'') word.remove_suffix(1);
  if (word.empty()) return;
  std::string key = lower(word);
  auto it = forms_.find(key);
  if (it == forms_.end()) {
    forms_.emplace(key, std::string(word));
  } else if (word == key) {
    it->second = key;
  }
}

SurfaceForms SurfaceForms::from_text(std::string_view text) {
  SurfaceForms forms;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_char(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && is_word_char(text[j])) ++j;
    if (j > i) forms.add(text.substr(i, j - i));
    i = j;
  }
  return forms;
}

SurfaceForms SurfaceForms::from_sentence(const AnnotatedSentence& sentence) {
  SurfaceForms forms;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    const auto& t = sentence.tokens[i];
    if (t.is_punct) continue;
    if (i == 0 && t.pos != "PROPN") {
      forms.add(lower(t.text));
    } else {
      forms.add(t.text);
    }
  }
  return forms;
}

std::string SurfaceForms::lookup(const std::string& root) const {
  auto it = forms_.find(root);
  return it == forms_.end() ? root : it->second;
}

bool is_synthesized(const Atom& atom) {
  return (atom.root == "+" && atom.type == TypeCode::Builder) || (atom.root == ":" && atom.type == TypeCode::Conjunction);
}

std::vector<std::string> edge_words(const Hyperedge& edge, const SurfaceForms* forms) {
  if (edge.is_atom()) {
    if (is_synthesized(edge.atom())) return {};
    return {forms ? forms->lookup(edge.atom().root) : edge.atom().root};
  }
  auto conn_type = try_infer_type(edge.connector());
  std::vector<std::string> conn = edge_words(edge.connector(), forms);
  auto args = edge.args();
  std::vector<std::string> out;
  if (!conn_type) {
    for (const auto& e : edge.elements()) append(out, edge_words(e, forms));
    return out;
  }
  switch (*conn_type) {
    case TypeCode::Modifier:
    case TypeCode::Trigger:
      append(out, conn);
      for (const auto& a : args) append(out, edge_words(a, forms));
      break;
    case TypeCode::Builder:
      for (std::size_t i = 0; i < args.size(); ++i) {
        append(out, edge_words(args[i], forms));
        if (i == 0) append(out, conn);
      }
      break;
    case TypeCode::Conjunction:
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) append(out, conn);
        append(out, edge_words(args[i], forms));
      }
      break;
    case TypeCode::Predicate: {
      std::string roles = argument_roles(edge);
      std::vector<std::size_t> front, back;
      for (std::size_t i = 0; i < args.size(); ++i) {
        char r = i < roles.size() ? roles[i] : '?';
        (r == 's' || r == 'p' ? front : back).push_back(i);
      }
      for (auto i : front) append(out, edge_words(args[i], forms));
      append(out, conn);
      for (auto i : back) append(out, edge_words(args[i], forms));
      break;
    }
    default:
      for (const auto& e : edge.elements()) append(out, edge_words(e, forms));
  }
  return out;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (!out.empty() && !attaches_left(w)) out += ' ';
    out += w;
  }
  return out;
}

std::string edge_text(const Hyperedge& edge, const SurfaceForms* forms) { return join_words(edge_words(edge, forms)); }

}  // namespace shg
