#pragma once

#include <string>
#include <vector>

#include "shg/sentence.hpp"

namespace shg::testing {

struct Tok {
  std::string text;
  std::string tag;
  std::string pos;
  std::string dep;
  int head;
  std::string lemma = {};
};

inline AnnotatedSentence make_sentence(const std::vector<Tok>& toks) {
  AnnotatedSentence s;
  for (const auto& t : toks) {
    AnnotatedToken a;
    a.text = t.text;
    a.lemma = t.lemma.empty() ? t.text : t.lemma;
    a.tag = t.tag;
    a.pos = t.pos;
    a.dep = t.dep;
    a.head = t.head;
    a.is_punct = t.pos == "PUNCT";
    for (char c : t.text) a.shape += std::isupper(static_cast<unsigned char>(c)) ? 'X' : std::isdigit(static_cast<unsigned char>(c)) ? 'd' : 'x';
    if (!s.text.empty() && !a.is_punct) s.text += ' ';
    s.text += t.text;
    s.tokens.push_back(a);
  }
  s.validate();
  return s;
}

inline std::vector<AlphaLabel> labels(const std::string& codes) {
  std::vector<AlphaLabel> out;
  for (char c : codes) out.push_back(label_from_name(c == 'X' ? "DISCARD" : std::string(1, c)));
  return out;
}

}  // namespace shg::testing
