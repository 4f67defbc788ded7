#include "shg/sentence.hpp"

#include "json.hpp"

namespace shg {

using nlohmann::json;

void AnnotatedSentence::validate() const {
  const int n = static_cast<int>(tokens.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    int h = tokens[i].head;
    if (h < 0 || h >= n) throw Error("head index out of range at token " + std::to_string(i));
    if (h == i) ++roots;
  }
  if (n > 0 && roots != 1) throw Error("sentence must have exactly one root, found " + std::to_string(roots));
  // every token must reach the root without revisiting a node
  for (int i = 0; i < n; ++i) {
    int cur = i;
    for (int steps = 0; tokens[cur].head != cur; ++steps) {
      if (steps > n) throw Error("dependency links contain a cycle at token " + std::to_string(i));
      cur = tokens[cur].head;
    }
  }
}

std::size_t AnnotatedSentence::root() const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].head == static_cast<int>(i)) return i;
  }
  throw Error("sentence has no root");
}

std::vector<int> AnnotatedSentence::depths() const {
  std::vector<int> out(tokens.size(), 0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    int d = 0;
    std::size_t cur = i;
    while (tokens[cur].head != static_cast<int>(cur) && d <= static_cast<int>(tokens.size())) {
      cur = static_cast<std::size_t>(tokens[cur].head);
      ++d;
    }
    out[i] = d;
  }
  return out;
}

std::string label_name(AlphaLabel label) {
  switch (label) {
    case AlphaLabel::C: return "C";
    case AlphaLabel::P: return "P";
    case AlphaLabel::M: return "M";
    case AlphaLabel::B: return "B";
    case AlphaLabel::T: return "T";
    case AlphaLabel::J: return "J";
    case AlphaLabel::Discard: return "DISCARD";
  }
  return "DISCARD";
}

AlphaLabel label_from_name(const std::string& name) {
  for (auto l : kAlphaLabels) {
    if (label_name(l) == name) return l;
  }
  if (name == "X") return AlphaLabel::Discard;
  throw Error("unknown alpha label: " + name);
}

std::optional<TypeCode> label_type(AlphaLabel label) {
  if (label == AlphaLabel::Discard) return std::nullopt;
  return type_from_char(label_name(label)[0]);
}

SentenceRecord sentence_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(std::string("malformed sentence JSON: ") + e.what());
  }
  SentenceRecord rec;
  rec.sentence.text = j.value("text", "");
  for (const auto& t : j.at("tokens")) {
    AnnotatedToken tok;
    tok.text = t.value("text", "");
    tok.lemma = t.value("lemma", tok.text);
    tok.tag = t.value("tag", "");
    tok.pos = t.value("pos", "");
    tok.dep = t.value("dep", "");
    tok.head = t.value("head", 0);
    tok.ner = t.value("ner", "");
    tok.shape = t.value("shape", "");
    tok.is_punct = t.value("is_punct", false);
    rec.sentence.tokens.push_back(std::move(tok));
  }
  if (j.contains("labels")) {
    std::vector<AlphaLabel> labels;
    for (const auto& l : j.at("labels")) labels.push_back(label_from_name(l.get<std::string>()));
    if (labels.size() != rec.sentence.tokens.size()) {
      throw Error("label count does not match token count");
    }
    rec.labels = std::move(labels);
  }
  rec.sentence.validate();
  return rec;
}

std::string sentence_to_json(const AnnotatedSentence& sentence, const std::vector<AlphaLabel>* labels) {
  json j;
  j["text"] = sentence.text;
  j["tokens"] = json::array();
  for (const auto& t : sentence.tokens) {
    j["tokens"].push_back({{"text", t.text},
                           {"lemma", t.lemma},
                           {"tag", t.tag},
                           {"pos", t.pos},
                           {"dep", t.dep},
                           {"head", t.head},
                           {"ner", t.ner},
                           {"shape", t.shape},
                           {"is_punct", t.is_punct}});
  }
  if (labels) {
    j["labels"] = json::array();
    for (auto l : *labels) j["labels"].push_back(label_name(l));
  }
  return j.dump();
}

std::vector<SentenceRecord> read_sentences(std::istream& in) {
  std::vector<SentenceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(sentence_from_json(line));
    } catch (const std::exception& e) {
      throw Error("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace shg
