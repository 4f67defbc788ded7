#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "shg/hedge.hpp"

namespace shg {

struct AnnotatedToken {
  std::string text;
  std::string lemma;
  std::string tag;  // fine-grained part of speech
  std::string pos;  // coarse part of speech
  std::string dep;
  int head = 0;  // own index for the root
  std::string ner;
  std::string shape;
  bool is_punct = false;
};

struct AnnotatedSentence {
  std::string text;
  std::vector<AnnotatedToken> tokens;

  /// Throws Error unless heads are in range and form a single rooted tree.
  void validate() const;
  std::size_t root() const;
  /// Distance to the root along head links; the root has depth 0.
  std::vector<int> depths() const;
};

/// α-stage output categories. Discard marks tokens dropped before β.
enum class AlphaLabel { C, P, M, B, T, J, Discard };

inline constexpr AlphaLabel kAlphaLabels[] = {AlphaLabel::C, AlphaLabel::P, AlphaLabel::M, AlphaLabel::B,
                                              AlphaLabel::T, AlphaLabel::J, AlphaLabel::Discard};

std::string label_name(AlphaLabel label);
AlphaLabel label_from_name(const std::string& name);
std::optional<TypeCode> label_type(AlphaLabel label);

struct LabeledSentence {
  AnnotatedSentence sentence;
  std::vector<AlphaLabel> labels;
};

/// One JSON object per line; "labels" is optional and returned when present.
struct SentenceRecord {
  AnnotatedSentence sentence;
  std::optional<std::vector<AlphaLabel>> labels;
};

SentenceRecord sentence_from_json(const std::string& line);
std::string sentence_to_json(const AnnotatedSentence& sentence,
                             const std::vector<AlphaLabel>* labels = nullptr);
std::vector<SentenceRecord> read_sentences(std::istream& in);

}  // namespace shg
