#include "shg/alpha.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace shg::alpha {

namespace {

enum class Relative { Self, Head, Before, After };

struct FeatureSpec {
  Relative rel = Relative::Self;
  std::string base;
  std::size_t words = 0;  // for WORDn
};

const std::set<std::string>& base_names() {
  static const std::set<std::string> names = {"TAG",   "POS",     "DEP",       "NER",       "SHAPE", "PUNCT",
                                              "IS_ROOT", "LCHILDREN", "RCHILDREN", "WORD", "LEMMA"};
  return names;
}

FeatureSpec parse_spec(const std::string& name) {
  static const std::regex re(R"(^(H)?([A-Z_]+?)(_BEFORE|_AFTER)?([0-9]+)?$)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) throw Error("unknown feature: " + name);
  FeatureSpec spec;
  spec.base = m[2];
  if (spec.base == "IS_PUNCT") spec.base = "PUNCT";
  if (!base_names().count(spec.base)) throw Error("unknown feature: " + name);
  if (m[1].matched && m[3].matched) throw Error("feature combines head and neighbour: " + name);
  if (m[1].matched) spec.rel = Relative::Head;
  if (m[3].matched) spec.rel = m[3] == "_BEFORE" ? Relative::Before : Relative::After;
  if (spec.base == "WORD") {
    if (!m[4].matched) throw Error("WORD feature needs a vocabulary size: " + name);
    spec.words = std::stoul(m[4]);
  } else if (m[4].matched) {
    throw Error("unknown feature: " + name);
  }
  return spec;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string base_value(const AnnotatedSentence& s, std::size_t i, const FeatureSpec& spec,
                       const std::vector<std::string>& common_words) {
  const auto& t = s.tokens[i];
  const std::string& b = spec.base;
  if (b == "TAG") return t.tag;
  if (b == "POS") return t.pos;
  if (b == "DEP") return t.dep;
  if (b == "NER") return t.ner.empty() ? std::string("-") : t.ner;
  if (b == "SHAPE") return t.shape;
  if (b == "PUNCT") return t.is_punct ? "1" : "0";
  if (b == "IS_ROOT") return t.head == static_cast<int>(i) ? "1" : "0";
  if (b == "LEMMA") return lower(t.lemma);
  if (b == "LCHILDREN" || b == "RCHILDREN") {
    for (std::size_t j = 0; j < s.tokens.size(); ++j) {
      if (j == i || s.tokens[j].head != static_cast<int>(i)) continue;
      if (b == "LCHILDREN" && j < i) return "1";
      if (b == "RCHILDREN" && j > i) return "1";
    }
    return "0";
  }
  // WORDn
  std::string w = lower(t.text);
  std::size_t n = std::min(spec.words, common_words.size());
  if (std::find(common_words.begin(), common_words.begin() + static_cast<std::ptrdiff_t>(n), w) !=
      common_words.begin() + static_cast<std::ptrdiff_t>(n)) {
    return w;
  }
  return "<OTHER>";
}

std::string feature_value(const AnnotatedSentence& s, std::size_t i, const FeatureSpec& spec,
                          const std::vector<std::string>& common_words) {
  std::optional<std::size_t> target;
  switch (spec.rel) {
    case Relative::Self: target = i; break;
    case Relative::Head:
      if (s.tokens[i].head != static_cast<int>(i)) target = static_cast<std::size_t>(s.tokens[i].head);
      break;
    case Relative::Before:
      if (i > 0) target = i - 1;
      break;
    case Relative::After:
      if (i + 1 < s.tokens.size()) target = i + 1;
      break;
  }
  if (!target) return kMissing;
  return base_value(s, *target, spec, common_words);
}

}  // namespace

FeatureSet::FeatureSet(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    parse_spec(n);
    if (!seen.insert(n).second) throw Error("duplicate feature: " + n);
  }
}

FeatureSet FeatureSet::f3() { return FeatureSet({"TAG", "DEP", "HDEP"}); }

FeatureSet FeatureSet::f5() { return FeatureSet({"TAG", "DEP", "HDEP", "HPOS", "POS_AFTER"}); }

FeatureSet FeatureSet::by_name(const std::string& preset) {
  if (preset == "F3") return f3();
  if (preset == "F5") return f5();
  throw Error("unknown feature set preset: " + preset);
}

std::size_t FeatureSet::max_word_rank() const {
  std::size_t n = 0;
  for (const auto& name : names_) n = std::max(n, parse_spec(name).words);
  return n;
}

FeatureMap extract_features(const AnnotatedSentence& sentence, std::size_t index, const FeatureSet& fs,
                            const std::vector<std::string>& common_words) {
  if (index >= sentence.tokens.size()) throw Error("token index out of range");
  FeatureMap out;
  for (const auto& name : fs.names()) out[name] = feature_value(sentence, index, parse_spec(name), common_words);
  return out;
}

AlphaLabel Tree::predict(const std::vector<std::string>& row) const {
  int cur = 0;
  while (nodes[cur].feature >= 0) {
    const auto& n = nodes[cur];
    cur = row[static_cast<std::size_t>(n.feature)] == n.value ? n.yes : n.no;
  }
  return nodes[cur].label;
}

Forest::Forest(FeatureSet fs, std::vector<std::string> common_words, std::vector<Tree> trees)
    : fs_(std::move(fs)), common_words_(std::move(common_words)), trees_(std::move(trees)) {}

std::vector<std::string> Forest::row(const AnnotatedSentence& sentence, std::size_t index) const {
  std::vector<std::string> out;
  out.reserve(fs_.names().size());
  for (const auto& name : fs_.names()) out.push_back(feature_value(sentence, index, parse_spec(name), common_words_));
  return out;
}

AlphaLabel Forest::predict_row(const std::vector<std::string>& row) const {
  std::array<int, 7> votes{};
  for (const auto& t : trees_) ++votes[static_cast<std::size_t>(t.predict(row))];
  // max_element keeps the first maximum, which follows the fixed label order
  return static_cast<AlphaLabel>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

AlphaLabel Forest::predict(const AnnotatedSentence& sentence, std::size_t index) const {
  return predict_row(row(sentence, index));
}

std::string Forest::to_json() const {
  nlohmann::json j;
  j["format"] = "shg-forest";
  j["version"] = 1;
  j["features"] = fs_.names();
  j["common_words"] = common_words_;
  j["trees"] = nlohmann::json::array();
  for (const auto& t : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
      if (n.feature < 0) {
        nodes.push_back({{"label", label_name(n.label)}});
      } else {
        nodes.push_back({{"feature", n.feature}, {"value", n.value}, {"yes", n.yes}, {"no", n.no}});
      }
    }
    j["trees"].push_back(std::move(nodes));
  }
  return j.dump();
}

Forest Forest::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed forest file: ") + e.what());
  }
  if (j.value("format", "") != "shg-forest" || j.value("version", 0) != 1) {
    throw Error("unsupported forest file format");
  }
  FeatureSet fs(j.at("features").get<std::vector<std::string>>());
  auto words = j.at("common_words").get<std::vector<std::string>>();
  std::vector<Tree> trees;
  for (const auto& jt : j.at("trees")) {
    Tree t;
    for (const auto& jn : jt) {
      TreeNode n;
      if (jn.contains("label")) {
        n.label = label_from_name(jn.at("label").get<std::string>());
      } else {
        n.feature = jn.at("feature").get<int>();
        n.value = jn.at("value").get<std::string>();
        n.yes = jn.at("yes").get<int>();
        n.no = jn.at("no").get<int>();
      }
      t.nodes.push_back(std::move(n));
    }
    trees.push_back(std::move(t));
  }
  return Forest(std::move(fs), std::move(words), std::move(trees));
}

void Forest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write forest file: " + path);
  out << to_json() << '\n';
}

Forest Forest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read forest file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

namespace {

constexpr std::size_t kLabels = 7;

struct Column {
  int feature;
  int value;  // encoded category
};

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<std::vector<int>>& x, const std::vector<int>& y, std::vector<Column> columns,
              const ForestParams& params, std::mt19937_64& rng)
      : x_(x), y_(y), columns_(std::move(columns)), params_(params), rng_(rng) {
    per_split_ = params.max_features > 0
                     ? static_cast<std::size_t>(params.max_features)
                     : static_cast<std::size_t>(std::max(1.0, std::floor(std::sqrt(double(columns_.size())))));
    per_split_ = std::min(per_split_, columns_.size());
  }

  std::vector<TreeNode> build(std::vector<int> rows, const std::vector<std::vector<std::string>>& names) {
    names_ = &names;
    grow(rows, 0);
    return std::move(nodes_);
  }

 private:
  static double gini(const std::array<int, kLabels>& counts, int total) {
    if (total == 0) return 0.0;
    double s = 0.0;
    for (int c : counts) s += double(c) * c;
    return 1.0 - s / (double(total) * total);
  }

  std::array<int, kLabels> count(const std::vector<int>& rows) const {
    std::array<int, kLabels> c{};
    for (int r : rows) ++c[static_cast<std::size_t>(y_[r])];
    return c;
  }

  static AlphaLabel majority(const std::array<int, kLabels>& c) {
    return static_cast<AlphaLabel>(std::max_element(c.begin(), c.end()) - c.begin());
  }

  // Weighted child impurity of a column test, or nullopt when the test does
  // not separate the rows.
  std::optional<double> evaluate(const std::vector<int>& rows, const Column& col) const {
    std::array<int, kLabels> yes{}, no{};
    int ny = 0, nn = 0;
    for (int r : rows) {
      if (x_[r][col.feature] == col.value) {
        ++yes[static_cast<std::size_t>(y_[r])];
        ++ny;
      } else {
        ++no[static_cast<std::size_t>(y_[r])];
        ++nn;
      }
    }
    if (ny == 0 || nn == 0) return std::nullopt;
    return (ny * gini(yes, ny) + nn * gini(no, nn)) / double(ny + nn);
  }

  int grow(const std::vector<int>& rows, int depth) {
    int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    auto counts = count(rows);
    nodes_[id].label = majority(counts);
    bool pure = std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }) <= 1;
    if (pure || (params_.max_depth > 0 && depth >= params_.max_depth)) return id;

    // sample columns without replacement; fall back to every column when the
    // sample holds no separating test
    std::vector<std::size_t> order(columns_.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < per_split_; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, order.size() - 1);
      std::swap(order[i], order[pick(rng_)]);
    }
    std::optional<std::size_t> best;
    double best_impurity = 0.0;
    auto consider = [&](std::size_t from, std::size_t to) {
      for (std::size_t k = from; k < to; ++k) {
        auto imp = evaluate(rows, columns_[order[k]]);
        if (imp && (!best || *imp < best_impurity)) {
          best = order[k];
          best_impurity = *imp;
        }
      }
    };
    consider(0, per_split_);
    if (!best) consider(per_split_, order.size());
    if (!best) return id;

    const Column col = columns_[*best];
    std::vector<int> yes_rows, no_rows;
    for (int r : rows) (x_[r][col.feature] == col.value ? yes_rows : no_rows).push_back(r);
    int yes = grow(yes_rows, depth + 1);
    int no = grow(no_rows, depth + 1);
    nodes_[id].feature = col.feature;
    nodes_[id].value = (*names_)[col.feature][col.value];
    nodes_[id].yes = yes;
    nodes_[id].no = no;
    return id;
  }

  const std::vector<std::vector<int>>& x_;
  const std::vector<int>& y_;
  std::vector<Column> columns_;
  const ForestParams& params_;
  std::mt19937_64& rng_;
  std::size_t per_split_ = 1;
  std::vector<TreeNode> nodes_;
  const std::vector<std::vector<std::string>>* names_ = nullptr;
};

std::vector<std::string> rank_words(const std::vector<LabeledSentence>& dataset, std::size_t n) {
  std::unordered_map<std::string, int> freq;
  for (const auto& ls : dataset) {
    for (const auto& t : ls.sentence.tokens) ++freq[lower(t.text)];
  }
  std::vector<std::pair<std::string, int>> ranked(freq.begin(), freq.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < n; ++i) out.push_back(ranked[i].first);
  return out;
}

}  // namespace

Forest train_forest(const std::vector<LabeledSentence>& dataset, const FeatureSet& fs, const ForestParams& params) {
  if (dataset.empty()) throw Error("empty training dataset");
  if (params.trees < 1) throw Error("forest needs at least one tree");
  if (params.bag_fraction <= 0.0 || params.bag_fraction > 1.0) throw Error("bag fraction must be in (0, 1]");
  if (fs.names().empty()) throw Error("empty feature set");
  auto common = rank_words(dataset, fs.max_word_rank());
  Forest shell(fs, common, {});

  // encode rows: per-feature category dictionaries
  const std::size_t nf = fs.names().size();
  std::vector<std::unordered_map<std::string, int>> dict(nf);
  std::vector<std::vector<std::string>> names(nf);
  std::vector<std::vector<int>> x;
  std::vector<int> y;
  for (const auto& ls : dataset) {
    if (ls.labels.size() != ls.sentence.tokens.size()) throw Error("every token must be labeled");
    for (std::size_t i = 0; i < ls.sentence.tokens.size(); ++i) {
      auto r = shell.row(ls.sentence, i);
      std::vector<int> enc(nf);
      for (std::size_t f = 0; f < nf; ++f) {
        auto [it, inserted] = dict[f].try_emplace(r[f], static_cast<int>(names[f].size()));
        if (inserted) names[f].push_back(r[f]);
        enc[f] = it->second;
      }
      x.push_back(std::move(enc));
      y.push_back(static_cast<int>(ls.labels[i]));
    }
  }
  if (x.empty()) throw Error("training dataset has no tokens");

  std::vector<Column> columns;
  for (std::size_t f = 0; f < nf; ++f) {
    for (std::size_t v = 0; v < names[f].size(); ++v) columns.push_back({static_cast<int>(f), static_cast<int>(v)});
  }

  std::mt19937_64 rng(params.seed);
  std::vector<Tree> trees;
  const std::size_t n = x.size();
  const auto bag = static_cast<std::size_t>(std::max(1.0, std::round(params.bag_fraction * double(n))));
  for (int t = 0; t < params.trees; ++t) {
    std::vector<int> rows;
    if (params.bootstrap) {
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t i = 0; i < bag; ++i) rows.push_back(static_cast<int>(pick(rng)));
    } else {
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      if (bag < n) std::shuffle(all.begin(), all.end(), rng);
      rows.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(bag));
      std::sort(rows.begin(), rows.end());
    }
    TreeBuilder builder(x, y, columns, params, rng);
    trees.push_back(Tree{builder.build(std::move(rows), names)});
  }
  return Forest(fs, std::move(common), std::move(trees));
}

std::string atom_root_for(const std::string& surface) {
  std::string out;
  for (char c : surface) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '/' || c == '(' || c == ')') {
      out += '_';
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

std::vector<std::optional<Atom>> classify_tokens(const AnnotatedSentence& sentence, const Forest& forest) {
  std::vector<std::optional<Atom>> out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    auto type = label_type(forest.predict(sentence, i));
    std::string root = atom_root_for(sentence.tokens[i].text);
    if (!type || root.empty()) {
      out.emplace_back();
      continue;
    }
    out.push_back(Atom{root, *type, {}, {}});
  }
  return out;
}

double accuracy(const Forest& forest, const std::vector<LabeledSentence>& data) {
  std::size_t total = 0, correct = 0;
  for (const auto& ls : data) {
    for (std::size_t i = 0; i < ls.sentence.tokens.size(); ++i) {
      ++total;
      if (forest.predict(ls.sentence, i) == ls.labels[i]) ++correct;
    }
  }
  return total ? double(correct) / double(total) : 0.0;
}

}  // namespace shg::alpha
