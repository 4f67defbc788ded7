#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shg/hedge.hpp"
#include "shg/sentence.hpp"

namespace shg::alpha {

/// Feature identifiers such as TAG, HDEP, POS_AFTER, WORD25, WORD_BEFORE15.
/// A leading H selects the dependency head, a _BEFORE/_AFTER suffix the
/// neighbouring token; WORDn keeps the word only if it is among the n most
/// common words of the training data.
class FeatureSet {
 public:
  FeatureSet() = default;
  explicit FeatureSet(std::vector<std::string> names);

  static FeatureSet f3();
  static FeatureSet f5();
  static FeatureSet by_name(const std::string& preset);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t max_word_rank() const;

 private:
  std::vector<std::string> names_;
};

inline const std::string kMissing = "NONE";

using FeatureMap = std::map<std::string, std::string>;

/// `common_words` is the training vocabulary ranked by frequency.
FeatureMap extract_features(const AnnotatedSentence& sentence, std::size_t index, const FeatureSet& fs,
                            const std::vector<std::string>& common_words = {});

struct ForestParams {
  int trees = 100;
  int max_depth = 0;  // 0: unlimited
  double bag_fraction = 1.0;
  bool bootstrap = true;
  int max_features = 0;  // one-hot columns tried per split; 0: sqrt of all columns
  std::uint64_t seed = 0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  std::string value;
  int yes = -1;
  int no = -1;
  AlphaLabel label = AlphaLabel::Discard;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  AlphaLabel predict(const std::vector<std::string>& row) const;
};

class Forest {
 public:
  Forest() = default;
  Forest(FeatureSet fs, std::vector<std::string> common_words, std::vector<Tree> trees);

  AlphaLabel predict(const AnnotatedSentence& sentence, std::size_t index) const;
  AlphaLabel predict_row(const std::vector<std::string>& row) const;
  std::vector<std::string> row(const AnnotatedSentence& sentence, std::size_t index) const;

  const FeatureSet& feature_set() const { return fs_; }
  const std::vector<std::string>& common_words() const { return common_words_; }
  const std::vector<Tree>& trees() const { return trees_; }

  std::string to_json() const;
  static Forest from_json(const std::string& text);
  void save(const std::string& path) const;
  static Forest load(const std::string& path);

 private:
  FeatureSet fs_;
  std::vector<std::string> common_words_;
  std::vector<Tree> trees_;
};

Forest train_forest(const std::vector<LabeledSentence>& dataset, const FeatureSet& fs, const ForestParams& params = {});

/// Lowercased surface form with characters that would break the notation
/// replaced by '_'.
std::string atom_root_for(const std::string& surface);

std::vector<std::optional<Atom>> classify_tokens(const AnnotatedSentence& sentence, const Forest& forest);

double accuracy(const Forest& forest, const std::vector<LabeledSentence>& data);

}  // namespace shg::alpha
