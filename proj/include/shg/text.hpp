#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "shg/hedge.hpp"
#include "shg/sentence.hpp"

namespace shg {

/// Maps lowercase words back to the casing seen in the source text.
class SurfaceForms {
 public:
  /// Splits on whitespace and punctuation. When a word occurs both
  /// capitalized and lowercase, the lowercase form wins (sentence-initial
  /// capitals are the usual reason for the difference).
  static SurfaceForms from_text(std::string_view text);
  /// Uses token texts; the first token is lowercased unless it is a PROPN.
  static SurfaceForms from_sentence(const AnnotatedSentence& sentence);

  void add(std::string_view word);
  std::string lookup(const std::string& root) const;
  bool empty() const { return forms_.empty(); }

 private:
  std::map<std::string, std::string> forms_;
};

/// True for atoms the parser synthesizes (+/B, :/J); they carry no text.
bool is_synthesized(const Atom& atom);

/// Words of `edge` in reading order: modifiers and triggers before their
/// argument, builders between their first two arguments, conjunctions between
/// each pair, subjects before their predicate.
std::vector<std::string> edge_words(const Hyperedge& edge, const SurfaceForms* forms = nullptr);
std::string edge_text(const Hyperedge& edge, const SurfaceForms* forms = nullptr);
std::string join_words(const std::vector<std::string>& words);

}  // namespace shg
