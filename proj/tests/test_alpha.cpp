#include <gtest/gtest.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "alpha_fixtures.hpp"
#include "shg/alpha.hpp"
#include "support.hpp"

using namespace shg;
using namespace shg::alpha;
using shg::testing::make_sentence;

namespace {

AnnotatedSentence berlin() {
  return make_sentence({{"Berlin", "NNP", "PROPN", "nsubj", 1},
                        {"is", "VBZ", "AUX", "ROOT", 1, "be"},
                        {"very", "RB", "ADV", "advmod", 3},
                        {"nice", "JJ", "ADJ", "acomp", 1},
                        {".", ".", "PUNCT", "punct", 1}});
}

ForestParams small(std::uint64_t seed) {
  ForestParams p;
  p.trees = 25;
  p.seed = seed;
  return p;
}

}  // namespace

TEST(AlphaFeatures, HeadAndNeighbours) {
  auto s = berlin();
  auto f = extract_features(s, 2, FeatureSet::f5());
  EXPECT_EQ(f.at("TAG"), "RB");
  EXPECT_EQ(f.at("DEP"), "advmod");
  EXPECT_EQ(f.at("HDEP"), "acomp");
  EXPECT_EQ(f.at("HPOS"), "ADJ");
  EXPECT_EQ(f.at("POS_AFTER"), "ADJ");
  auto last = extract_features(s, 4, FeatureSet::f5());
  EXPECT_EQ(last.at("POS_AFTER"), kMissing);
  auto root = extract_features(s, 1, FeatureSet::f3());
  EXPECT_EQ(root.at("HDEP"), kMissing);  // the root has no head of its own
  EXPECT_EQ(root.size(), 3u);
}

TEST(AlphaFeatures, WordRanks) {
  auto s = berlin();
  FeatureSet fs({"WORD2", "WORD_BEFORE2"});
  auto f = extract_features(s, 1, fs, {"is", "berlin", "nice"});
  EXPECT_EQ(f.at("WORD2"), "is");
  EXPECT_EQ(f.at("WORD_BEFORE2"), "berlin");
  auto g = extract_features(s, 3, fs, {"is", "berlin", "nice"});
  EXPECT_EQ(g.at("WORD2"), "<OTHER>");  // rank 3 falls outside the top 2
  EXPECT_EQ(extract_features(s, 0, fs, {"is"}).at("WORD_BEFORE2"), kMissing);
  EXPECT_THROW(FeatureSet({"COLOR"}), Error);
  EXPECT_THROW(FeatureSet::by_name("F9"), Error);
}

TEST(AlphaForest, DeterministicUnderSeed) {
  auto data = shg::testing::synthetic_corpus(60, 3);
  auto a = train_forest(data, FeatureSet::f5(), small(9));
  auto b = train_forest(data, FeatureSet::f5(), small(9));
  EXPECT_EQ(a.to_json(), b.to_json());
  auto c = train_forest(data, FeatureSet::f5(), small(10));
  EXPECT_NE(a.to_json(), c.to_json());
}

TEST(AlphaForest, FitsConflictFreeDataAndGeneralizes) {
  auto start = std::chrono::steady_clock::now();
  auto train = shg::testing::synthetic_corpus(200, 1);
  auto test = shg::testing::synthetic_corpus(100, 2);
  ForestParams p;
  p.seed = 4;
  auto forest = train_forest(train, FeatureSet::f5(), p);
  EXPECT_DOUBLE_EQ(accuracy(forest, train), 1.0);
  EXPECT_GE(accuracy(forest, test), 0.95);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(10));
}

TEST(AlphaForest, SaveLoadKeepsPredictions) {
  auto data = shg::testing::synthetic_corpus(40, 5);
  auto forest = train_forest(data, FeatureSet::f3(), small(1));
  auto path = (std::filesystem::temp_directory_path() / "shg_forest_test.json").string();
  forest.save(path);
  auto back = Forest::load(path);
  std::remove(path.c_str());
  EXPECT_EQ(back.to_json(), forest.to_json());
  for (const auto& ls : data) {
    for (std::size_t i = 0; i < ls.sentence.tokens.size(); ++i) {
      EXPECT_EQ(back.predict(ls.sentence, i), forest.predict(ls.sentence, i));
    }
  }
  EXPECT_THROW(Forest::from_json("{\"trees\": 3}"), Error);
}

TEST(AlphaForest, RejectsBadTrainingData) {
  EXPECT_THROW(train_forest({}, FeatureSet::f5()), Error);
  auto data = shg::testing::synthetic_corpus(2, 1);
  data[0].labels.pop_back();
  EXPECT_THROW(train_forest(data, FeatureSet::f5()), Error);
}

TEST(AlphaClassify, AtomsFromPredictions) {
  auto data = shg::testing::synthetic_corpus(150, 8);
  auto forest = train_forest(data, FeatureSet::f5(), small(2));
  auto s = make_sentence({{"Cats", "NNS", "NOUN", "nsubj", 1},
                          {"chase", "VBZ", "VERB", "ROOT", 1},
                          {"mice", "NNS", "NOUN", "dobj", 1},
                          {".", ".", "PUNCT", "punct", 1}});
  auto atoms = classify_tokens(s, forest);
  ASSERT_EQ(atoms.size(), 4u);
  ASSERT_TRUE(atoms[0] && atoms[1] && atoms[2]);
  EXPECT_EQ(atoms[0]->str(), "cats/C");
  EXPECT_EQ(atoms[1]->str(), "chase/P");
  EXPECT_EQ(atoms[2]->str(), "mice/C");
  EXPECT_FALSE(atoms[3]);
  EXPECT_EQ(atom_root_for("New York"), "new_york");
}

TEST(SentenceJson, RoundTripAndValidation) {
  auto s = berlin();
  auto labels = shg::testing::labels("CPMCX");
  auto line = sentence_to_json(s, &labels);
  auto rec = sentence_from_json(line);
  ASSERT_TRUE(rec.labels);
  EXPECT_EQ(*rec.labels, labels);
  EXPECT_EQ(rec.sentence.tokens.size(), 5u);
  EXPECT_EQ(rec.sentence.tokens[1].lemma, "be");
  EXPECT_TRUE(rec.sentence.tokens[4].is_punct);
  EXPECT_EQ(sentence_to_json(rec.sentence, &*rec.labels), line);
  EXPECT_FALSE(sentence_from_json(sentence_to_json(s)).labels);

  // lemma defaults to the text
  auto minimal = sentence_from_json(R"({"text": "Hi", "tokens": [{"text": "Hi", "dep": "ROOT", "head": 0}]})");
  EXPECT_EQ(minimal.sentence.tokens[0].lemma, "Hi");

  EXPECT_THROW(sentence_from_json("{"), Error);
  EXPECT_THROW(sentence_from_json(R"({"tokens": [{"text": "a", "head": 3}]})"), Error);
  EXPECT_THROW(sentence_from_json(R"({"tokens": [{"text": "a", "head": 1}, {"text": "b", "head": 0}]})"), Error);
  EXPECT_THROW(sentence_from_json(R"({"tokens": [{"text": "a", "head": 0}], "labels": ["C", "P"]})"), Error);
  EXPECT_THROW(sentence_from_json(R"({"tokens": [{"text": "a", "head": 0}], "labels": ["Q"]})"), Error);
}

TEST(SentenceJson, ReadLinesReportsLineNumbers) {
  std::istringstream in(
      R"({"text": "a", "tokens": [{"text": "a", "head": 0}]})"
      "\n\n"
      R"({"text": "b", "tokens": [{"text": "b", "head": 5}]})"
      "\n");
  try {
    read_sentences(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(SentenceTree, DepthsAndRoot) {
  auto s = berlin();
  EXPECT_EQ(s.root(), 1u);
  EXPECT_EQ(s.depths(), (std::vector<int>{1, 0, 2, 1, 1}));
}
