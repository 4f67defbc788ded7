// Command line front end: one subcommand per module operation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "shg/alpha.hpp"
#include "shg/app.hpp"
#include "shg/beta.hpp"

using namespace shg;

namespace {

struct Options {
  std::string store;
  std::string config;
  std::string features;
  std::string forest;
  std::vector<std::string> rules;
  std::optional<double> theta;
  std::optional<double> theta_prime;
  std::optional<int> port;
  std::string bind;
  std::optional<std::uint64_t> seed;
};

app::Config resolve(const Options& o) {
  app::Config c;
  if (!o.config.empty()) c = app::load_config(o.config);
  if (!o.features.empty()) c.features = o.features;
  if (!o.forest.empty()) c.forest_path = o.forest;
  if (!o.rules.empty()) c.rule_paths = o.rules;
  if (o.theta) c.coref.theta = *o.theta;
  if (o.theta_prime) c.coref.theta_prime = *o.theta_prime;
  if (o.port) c.port = *o.port;
  if (!o.bind.empty()) c.bind = o.bind;
  if (o.seed) c.seed = *o.seed;
  if (!o.store.empty()) c.store_path = o.store;
  if (const char* env = std::getenv("SHG_STORE"); env && *env) c.store_path = env;
  c.validate();
  return c;
}

Store open_store(const app::Config& c, bool may_create = false) {
  if (c.store_path.empty()) throw Error("no store given (use --store or SHG_STORE)");
  if (!std::filesystem::exists(c.store_path)) {
    if (may_create) return {};
    throw Error("store not found: " + c.store_path);
  }
  return Store::load(c.store_path);
}

void print(const std::vector<std::string>& lines) {
  for (const auto& l : lines) std::cout << l << "\n";
}

template <class F>
void with_input(const std::string& path, F&& f) {
  if (path.empty() || path == "-") {
    f(std::cin, std::string("<stdin>"));
    return;
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  f(in, path);
}

std::vector<Rule> load_rules(const app::Config& c) {
  std::vector<Rule> rules;
  for (const auto& path : c.rule_paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read rule file " + path);
    auto r = parse_rule_file(in);
    rules.insert(rules.end(), r.begin(), r.end());
  }
  return rules;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Semantic hypergraph toolkit"};
  cli.require_subcommand(1);
  cli.fallthrough();
  Options o;
  cli.add_option("--store", o.store, "store file (SHG_STORE overrides)");
  cli.add_option("--config", o.config, "JSON config file");
  cli.add_option("--features", o.features, "alpha feature set")->check(CLI::IsMember({"F3", "F5"}));
  cli.add_option("--forest", o.forest, "trained alpha classifier");
  cli.add_option("--rules", o.rules, "rule files");
  cli.add_option("--theta", o.theta, "coreference set share threshold");
  cli.add_option("--theta-prime", o.theta_prime, "coreference seed degree ratio threshold");
  cli.add_option("--port", o.port, "service port");
  cli.add_option("--bind", o.bind, "service address");
  cli.add_option("--seed", o.seed, "random seed");

  std::string in_path, out_path, text, dot_path;
  std::vector<std::string> files, seeds;
  int trees = 100;
  std::size_t depth = 2, top = 0;
  bool gold = false, add_to_store = false, as_json = false;

  auto* train = cli.add_subcommand("train-alpha", "train the token classifier on labeled JSON Lines");
  train->add_option("--in", in_path, "labeled sentences")->required();
  train->add_option("--out", out_path, "classifier output file")->required();
  train->add_option("--trees", trees, "number of trees");

  auto* parse = cli.add_subcommand("parse", "annotated sentences (JSON Lines) to hyperedges");
  parse->add_option("input", in_path, "input file, stdin when absent");
  parse->add_flag("--gold", gold, "use the labels in the input instead of a classifier");
  parse->add_flag("--add", add_to_store, "also add the edges to the store");

  auto* add = cli.add_subcommand("add", "add SH notation files to the store");
  add->add_option("files", files, "notation files, '-' for stdin")->required();

  auto* match_cmd = cli.add_subcommand("match", "match a pattern against the store");
  match_cmd->add_option("pattern", text, "pattern")->required();

  cli.add_subcommand("rules", "apply --rules files to the store");

  auto* oie = cli.add_subcommand("oie", "open information extraction tuples");
  oie->add_option("input", in_path, "notation file; the store when absent");

  cli.add_subcommand("claims", "claims as JSON Lines");
  cli.add_subcommand("conflicts", "conflicts as JSON Lines");

  auto* coref = cli.add_subcommand("coref", "coreference sets and seed assignment");
  coref->add_option("seeds", seeds, "seed atoms; all seeds when absent");
  coref->add_flag("--json", as_json, "JSON Lines output");

  auto* metrics = cli.add_subcommand("metrics", "degree and deep degree of an edge");
  metrics->add_option("--edge", text, "edge")->required();
  metrics->add_flag("--json", as_json, "JSON output");

  auto* mine = cli.add_subcommand("mine", "count pattern generalizations");
  mine->add_option("--depth", depth, "expansion depth");
  mine->add_option("--top", top, "print only the first N");

  auto* factions = cli.add_subcommand("factions", "split the conflict network in two factions");
  factions->add_option("--dot", dot_path, "also write the network as a DOT graph");

  cli.add_subcommand("serve", "HTTP service for the pattern learning front end");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << cli.help();
    return 2;
  }

  try {
    auto config = resolve(o);
    auto* sub = cli.get_subcommands().front();
    const std::string name = sub->get_name();

    if (name == "train-alpha") {
      std::vector<LabeledSentence> data;
      with_input(in_path, [&](std::istream& in, const std::string&) {
        for (auto& r : read_sentences(in)) {
          if (!r.labels) throw Error("training sentence without labels: " + r.sentence.text);
          data.push_back({std::move(r.sentence), std::move(*r.labels)});
        }
      });
      alpha::ForestParams params;
      params.trees = trees;
      params.seed = config.seed;
      auto forest = alpha::train_forest(data, alpha::FeatureSet::by_name(config.features), params);
      forest.save(out_path);
      std::cout << "sentences\t" << data.size() << "\ntraining accuracy\t" << alpha::accuracy(forest, data) << "\n";
    } else if (name == "parse") {
      std::optional<alpha::Forest> forest;
      if (!gold) {
        if (config.forest_path.empty()) throw Error("parse needs --forest (or --gold)");
        forest = alpha::Forest::load(config.forest_path);
      }
      std::optional<Store> store;
      if (add_to_store) store = open_store(config, true);
      with_input(in_path, [&](std::istream& in, const std::string&) {
        for (const auto& r : read_sentences(in)) {
          if (gold && !r.labels) throw Error("--gold needs labels: " + r.sentence.text);
          auto res = gold ? beta::parse_labeled(r.sentence, *r.labels) : beta::parse_sentence(r.sentence, *forest);
          std::cout << res.edge.str() << "\n";
          for (const auto& l : res.lemma_edges) std::cout << "\t" << l.str() << "\n";
          if (store) {
            EdgeAttributes attrs;
            attrs.text = r.sentence.text;
            store->add(res.edge, attrs);
            for (const auto& l : res.lemma_edges) store->add(l);
          }
        }
      });
      if (store) store->save(config.store_path);
    } else if (name == "add") {
      auto store = open_store(config, true);
      std::size_t n = 0;
      for (const auto& f : files) {
        with_input(f, [&](std::istream& in, const std::string& src) { n += app::ingest(store, in, src); });
      }
      store.save(config.store_path);
      std::cout << "added\t" << n << "\nedges\t" << store.size() << "\n";
    } else if (name == "match") {
      print(app::match_lines(open_store(config), parse_pattern(text)));
    } else if (name == "rules") {
      if (config.rule_paths.empty()) throw Error("rules needs --rules files");
      print(app::rule_lines(open_store(config), load_rules(config)));
    } else if (name == "oie") {
      if (in_path.empty()) {
        print(app::oie_lines(open_store(config)));
      } else {
        with_input(in_path, [&](std::istream& in, const std::string& src) {
          print(app::oie_lines(app::read_edges(in, src)));
        });
      }
    } else if (name == "claims") {
      print(app::claim_lines(open_store(config), config.inference));
    } else if (name == "conflicts") {
      print(app::conflict_lines(open_store(config), config.inference));
    } else if (name == "coref") {
      auto store = open_store(config);
      std::vector<Atom> atoms;
      for (const auto& s : seeds) atoms.push_back(parse_atom(s));
      if (atoms.empty()) atoms = seed_concepts(store);
      for (const auto& a : atoms) {
        if (as_json) {
          std::cout << app::coref_json(store, a, config.coref) << "\n";
        } else {
          print(app::coref_lines(store, a, config.coref));
        }
      }
    } else if (name == "metrics") {
      auto store = open_store(config);
      auto e = parse_notation(text);
      if (as_json) {
        std::cout << app::metrics_json(store, e) << "\n";
      } else {
        print(app::metrics_lines(store, e));
      }
    } else if (name == "mine") {
      GeneralizationConfig g;
      g.max_depth = depth;
      auto mined = mine_patterns(open_store(config), g);
      if (top > 0 && mined.size() > top) mined.resize(top);
      print(app::mined_lines(mined));
    } else if (name == "factions") {
      auto net = app::conflict_network(open_store(config), config.inference);
      if (net.empty()) throw Error("no conflicts in the store");
      auto f = detect_factions(net);
      print(app::faction_lines(f));
      if (!dot_path.empty()) {
        std::ofstream out(dot_path);
        if (!out) throw Error("cannot write " + dot_path);
        out << app::to_dot(net, f);
      }
    } else if (name == "serve") {
      auto store = open_store(config);
      app::Api api(std::move(store), config, config.store_path + ".sessions.json");
      std::cerr << "listening on " << config.bind << ":" << config.port << "\n";
      app::serve(api, config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
