#pragma once

// Hand-annotated sentences and worked example edges shared by the unit tests
// and the acceptance runner.

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "shg/alpha.hpp"
#include "shg/beta.hpp"
#include "support.hpp"

namespace shg::testing {

struct Golden {
  const char* edge;
  char type;
};

inline const Golden kGolden[] = {
    {"apple/C", 'C'},
    {"(is/P berlin/C nice/C)", 'R'},
    {"(red/M shoes/C)", 'C'},
    {"(of/B capital/C germany/C)", 'C'},
    {"(in/T 1994/C)", 'S'},
    {"(and/J meat/C potatoes/C)", 'C'},
    {"(in/T 1976/C)", 'S'},
    {"(nice/M shoes/C)", 'C'},
    {"((not/M is/P) berlin/C nice/C)", 'R'},
    {"((very/M nice/M) shoes/C)", 'C'},
    {"(+/B guitar/C player/C)", 'C'},
    {"(+/B barack/C obama/C)", 'C'},
    {"(but/J (likes/P mary/C meat/C) (hates/P potatoes/C))", 'R'},
    {"(likes/P mary/C meat/C)", 'R'},
    {"(hates/P potatoes/C)", 'R'},
    {"(:/J freud/C (the/M (famous/M psychiatrist/C)))", 'C'},
    {"(opened/P pablo/C (a/M bar/C) (in/T spain/C))", 'R'},
    {"(a/M bar/C)", 'C'},
    {"(northern/M germany/C)", 'C'},
    {"(not/M is/P)", 'P'},
    {"(+/B.am tennis/C ball/C)", 'C'},
    {"(of/B.ma capital/C germany/C)", 'C'},
    {"(gave/P.sio john/C mary/C (a/M flower/C))", 'R'},
    {"is/P", 'P'},
    {"of/B", 'B'},
    {"in/T", 'T'},
    {"and/J", 'J'},
    {"red/M", 'M'},
    {"(famous/M psychiatrist/C)", 'C'},
    {"(the/M (famous/M psychiatrist/C))", 'C'},
};

/// Generalized relation and concept shapes produced by pattern mining.
inline const char* kPatternShapes[] = {
    "(*/B.{ma} */C */C)",
    "(+/B.{ma} */C */C)",
    "(*/T */C)",
    "(*/B.{mm} */C */C)",
    "(+/B.{mm} */C */C)",
    "(*/T */R)",
    "(*/P.{so} */C */C)",
    "(*/P.{sx} */C */S)",
    "(*/P.{sc} */C */C)",
    "(*/P.{sox} */C */C */S)",
    "(*/P.{ox} */C */S)",
    "(*/P.{px} */C */S)",
    "(*/P.{sr} */C */R)",
    "(*/P.{sox} */C (*/B.{ma} */C */C) */S)",
    "(*/P.{scx} */C */C */S)",
    "(*/P.{so} (*/B.{ma} */C */C) */C)",
    "(*/P.{ox} (*/B.{ma} */C */C) */S)",
    "(*/P.{sr} */C */S)",
    "(*/P.{pa} */C */S)",
    "(*/P.{sc} (*/B.{ma} */C */C) */C)",
    "(*/B.{aa} */C */C)",
    "(+/B.{aa} */C */C)",
    "(*/P.{sx} (*/B.{ma} */C */C) */S)",
    "(*/P.{px} (*/B.{ma} */C */C) */S)",
    "(*/P.{sxr} */C */S */R)",
    "(*/P.{sor} */C */C */R)",
    "(*/P.{pr} */C */R)",
    "(*/P.{sox} (*/B.{ma} */C */C) */C */S)",
    "(*/P.{scx} */C (*/B.{ma} */C */C) */S)",
    "(*/P.{ox} */C */R)",
    "(*/P.sr (*/B.{ma} */C */C) */R)",
    "(*/P.{sxr} */C (*/T */C) */R)",
    "(*/P.{scx} (*/B.{ma} */C */C) */C */S)",
    "(*/P.{sox} */C */C */R)",
    "(*/P.so (+/B.{ma} */C */C) */C)",
    "(*/P.{pax} */C */S */S)",
    "(*/P.{pax} */C (*/T */C) */S)",
    "(*/P.{sc} (*/B.{mm} */C */C) */C)",
    "(*/P.{sc} (+/B.{mm} */C */C) */C)",
    "(*/P.{cx} */C */S)",
    "(*/P.{sxr} */C */S */S)",
    "(*/P.{sr} (*/B.{ma} */C */C) */S)",
    "(*/P.{sx} (+/B.{ma} */C */C) */S)",
    "(*/P.{sxr} */C (*/T */C) */S)",
    "(*/P.{sc} (+/B.{ma} */C */C) */C)",
    "(*/P.{sox} (+/B.{ma} */C */C) */C */S)",
    "(*/P.{scx} */C */C */R)",
    "(*/P.{sx} */C */R)",
    "(*/P.{ox} (+/B.{ma} */C */C) */S)",
    "(*/P.{or} */C */R)",
};

/// Concrete edge for a generalized pattern: wildcard connectors get a root,
/// */C becomes a concept atom, */S and */R become small specifications and
/// relations.
inline std::string instantiate_text(const std::string& pattern) {
  std::string s = std::regex_replace(pattern, std::regex(R"(\*/([PBT])\.\{?([a-z]+)\}?)"), "x$1/$1.$2");
  s = std::regex_replace(s, std::regex(R"(\+/B\.\{([a-z]+)\})"), "+/B.$1");
  s = std::regex_replace(s, std::regex(R"(\*/T)"), "in/T");
  s = std::regex_replace(s, std::regex(R"(\*/S)"), "(on/T monday/C)");
  s = std::regex_replace(s, std::regex(R"(\*/R)"), "(is/P.sc sky/C blue/C)");
  s = std::regex_replace(s, std::regex(R"(\*/C)"), "thing/C");
  return s;
}

inline AnnotatedSentence berlin_capital() {
  return make_sentence({{"Berlin", "NNP", "PROPN", "nsubj", 1},
                        {"is", "VBZ", "AUX", "ROOT", 1, "be"},
                        {"the", "DT", "DET", "det", 3},
                        {"capital", "NN", "NOUN", "attr", 1},
                        {"of", "IN", "ADP", "prep", 3},
                        {"Germany", "NNP", "PROPN", "pobj", 4},
                        {".", ".", "PUNCT", "punct", 1}});
}

inline AnnotatedSentence berlin_nice() {
  return make_sentence({{"Berlin", "NNP", "PROPN", "nsubj", 1},
                        {"is", "VBZ", "AUX", "ROOT", 1, "be"},
                        {"very", "RB", "ADV", "advmod", 3},
                        {"nice", "JJ", "ADJ", "acomp", 1},
                        {".", ".", "PUNCT", "punct", 1}});
}

inline AnnotatedSentence mary_likes() {
  return make_sentence({{"Mary", "NNP", "PROPN", "nsubj", 1},
                        {"likes", "VBZ", "VERB", "ROOT", 1, "like"},
                        {"books", "NNS", "NOUN", "dobj", 1, "book"},
                        {"and", "CC", "CCONJ", "cc", 2},
                        {"flowers", "NNS", "NOUN", "conj", 2, "flower"},
                        {".", ".", "PUNCT", "punct", 1}});
}

inline AnnotatedSentence new_era() {
  return make_sentence({{"A", "DT", "DET", "det", 2},
                        {"new", "JJ", "ADJ", "amod", 2},
                        {"era", "NN", "NOUN", "ROOT", 2},
                        {":", ":", "PUNCT", "punct", 2},
                        {"quantum", "NN", "NOUN", "compound", 5},
                        {"computation", "NN", "NOUN", "nsubj", 6},
                        {"is", "VBZ", "AUX", "acl", 2, "be"},
                        {"here", "RB", "ADV", "advmod", 6},
                        {".", ".", "PUNCT", "punct", 2}});
}

inline std::vector<beta::WorkItem> items_for(const AnnotatedSentence& s, const std::string& codes) {
  auto ls = shg::testing::labels(codes);
  std::vector<std::optional<Atom>> atoms;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto t = label_type(ls[i]);
    if (t) {
      atoms.push_back(Atom{alpha::atom_root_for(s.tokens[i].text), *t, {}, {}});
    } else {
      atoms.emplace_back();
    }
  }
  return beta::initial_items(s, atoms);
}


inline const char* kPopulation =
    "(is/P.scx (of/B.ma (the/M population/C) (the/M (special/M wards/C))) ((over/M (9/M million/M)) people/C) "
    "(with/T (exceeding/P.so (of/B.ma (the/M (total/M population/C)) (the/M prefecture/C)) (13/M million/C))))";
inline const char* kBeck = "(+/B.mm (the/M (prolific/M (+/B.am film/C composer/C))) (+/B.am christophe/C beck/C))";
inline const char* kGonzales =
    "(graduated/P.sx gonzales/C (from/T (in/B.ma (+/B.am crescent/C school/C) (,/J toronto/C (,/J ontario/C "
    "canada/C)))))";
inline const char* kRussia =
    "(:/J (says/P.sr russia/C ('s/P.sc it/C ready/C)) ((to/M deal/P.x) (with/T (new/M (+/B.am ukraine/C "
    "president/C)))))";

}  // namespace shg::testing
