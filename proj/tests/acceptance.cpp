// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Each check lists what it compared so a FAIL line is
// actionable on its own.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "alpha_fixtures.hpp"
#include "coref_fixtures.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "shg/coref.hpp"
#include "shg/inference.hpp"
#include "shg/learning.hpp"

using namespace shg;
using namespace shg::testing;
using Clock = std::chrono::steady_clock;

namespace {

class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) problems_.push_back(what);
  }
  template <class A, class B>
  void equal(const A& got, const B& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream os;
      os << what << ": got " << show(got) << ", want " << show(want);
      problems_.push_back(os.str());
    }
  }
  void within(Clock::time_point start, double seconds, const std::string& what) {
    double s = std::chrono::duration<double>(Clock::now() - start).count();
    expect(s < seconds, what + " took " + std::to_string(s) + " s");
  }
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  static std::string show(const std::string& s) { return "'" + s + "'"; }
  static std::string show(const char* s) { return show(std::string(s)); }
  static std::string show(const Hyperedge& e) { return e.str(); }
  template <class T>
  static std::string show(const T& v) {
    if constexpr (std::is_arithmetic_v<T>) {
      return std::to_string(v);
    } else {
      std::string out = "[";
      for (const auto& x : v) out += (out.size() > 1 ? ", " : "") + show(x);
      return out + "]";
    }
  }
  std::vector<std::string> problems_;
};

Hyperedge E(const std::string& s) { return parse_notation(s); }

std::vector<std::string> strs(const std::vector<Hyperedge>& es) {
  std::vector<std::string> out;
  for (const auto& e : es) out.push_back(e.str());
  return out;
}

std::string seconds_since(Clock::time_point start) {
  std::ostringstream os;
  os.precision(3);
  os << std::chrono::duration<double>(Clock::now() - start).count() << " s";
  return os.str();
}

// ---------------------------------------------------------------------------

std::string type_system(Check& c) {
  auto start = Clock::now();
  std::size_t n = 0;
  for (const auto& g : kGolden) {
    auto e = E(g.edge);
    c.equal(e.str(), std::string(g.edge), "roundtrip");
    c.equal(std::string(1, code_char(infer_type(e))), std::string(1, g.type), std::string("type of ") + g.edge);
    ++n;
  }
  for (const char* p : kPatternShapes) {
    auto e = E(instantiate_text(p));
    c.equal(E(e.str()), e, std::string("roundtrip of instance of ") + p);
    auto t = try_infer_type(e);
    c.expect(t && (*t == TypeCode::Relation || *t == TypeCode::Concept || *t == TypeCode::Specifier),
             std::string("instance type of ") + p);
    c.expect(matches(e, parse_pattern(p)), std::string("instance matches ") + p);
    ++n;
  }
  c.within(start, 1.0, "type suite");
  return std::to_string(n) + " edges in " + seconds_since(start);
}

std::string beta_golden(Check& c) {
  auto s = berlin_capital();
  c.equal(beta::beta_transform(items_for(s, "CPMCBCX"), s).edge.str(),
          std::string("(is/P berlin/C (the/M (of/B capital/C germany/C)))"), "Berlin capital structure");
  c.equal(beta::parse_labeled(s, labels("CPMCBCX")).edge.str(),
          std::string("(is/P.sc berlin/C (the/M (of/B.ma capital/C germany/C)))"), "Berlin capital with roles");

  auto seq = items_for(s, "CPMCBCX");
  std::optional<beta::Candidate> builder, det;
  for (const auto& cand : beta::candidates(seq, &s)) {
    if (cand.rule == beta::Rule::Builder) builder = cand;
    if (cand.rule == beta::Rule::Modifier && cand.start == 2) det = cand;
  }
  c.expect(builder && det, "builder and determiner candidates both offered");
  if (builder && det) {
    c.expect(beta::heuristic(seq, *builder, s) > beta::heuristic(seq, *det, s),
             "(of/B capital/C germany/C) scores above (the/M capital/C)");
  }

  auto nice = berlin_nice();
  c.equal(beta::beta_transform(items_for(nice, "CPMCX"), nice).edge.str(),
          std::string("(is/P berlin/C (very/M nice/C))"), "Berlin very nice");
  c.equal(beta::parse_labeled(mary_likes(), labels("CPCJCX")).edge.str(),
          std::string("(likes/P.so mary/C (and/J books/C flowers/C))"), "Mary likes books and flowers");
  auto era = new_era();
  c.equal(beta::beta_transform(items_for(era, "MMCXMCPCX"), era).edge.str(),
          std::string("(:/J (a/M (new/M era/C)) (is/P (quantum/M computation/C) here/C))"), ":/J fallback");
  return "4 sentences";
}

std::string decomposition(Check& c) {
  struct Case {
    const char* in;
    std::vector<std::string> out;
  };
  const Case cases[] = {
      {"(likes/P.so mary/C (and/J books/C flowers/C))", {"(likes/P.so mary/C books/C)", "(likes/P.so mary/C flowers/C)"}},
      {"(and/J (likes/P.so mary/C astronomy/C) (plays/P.so alice/C football/C))",
       {"(likes/P.so mary/C astronomy/C)", "(plays/P.so alice/C football/C)"}},
      {"(and/J (likes/P.so mary/C astronomy/C) (plays/P.o football/C))",
       {"(likes/P.so mary/C astronomy/C)", "(plays/P.so mary/C football/C)"}},
  };
  std::size_t n = 0;
  for (const auto& k : cases) {
    auto got = strs(decompose_conjunctions(E(k.in)));
    c.equal(got, k.out, k.in);
    n += got.size();
  }
  return std::to_string(n) + " edges";
}

std::string oie(Check& c) {
  auto pop = extract_oie(E(kPopulation));
  std::vector<std::string> got;
  for (const auto& t : pop) got.push_back(t.str());
  c.equal(got,
          std::vector<std::string>{"is\tthe population of the special wards\tover 9 million people\twith the total "
                                   "population of the prefecture exceeding 13 million"},
          "population tuple");

  auto beck_forms = SurfaceForms::from_text("He is the younger brother of the prolific film composer Christophe Beck");
  got.clear();
  for (const auto& t : extract_oie(E(kBeck), &beck_forms)) got.push_back(t.str());
  std::sort(got.begin(), got.end());
  c.equal(got,
          std::vector<std::string>{"is\tChristophe Beck\tthe prolific film composer",
                                   "is\tthe prolific film composer\tChristophe Beck"},
          "symmetric compound pair");

  auto g_forms = SurfaceForms::from_text("Gonzales graduated from Crescent School in Toronto, Ontario, Canada");
  got.clear();
  for (const auto& t : extract_oie_all(E(kGonzales), &g_forms)) got.push_back(t.str());
  c.equal(got,
          std::vector<std::string>{"graduated from\tGonzales\tCrescent School in Toronto",
                                   "graduated from\tGonzales\tCrescent School in Ontario",
                                   "graduated from\tGonzales\tCrescent School in Canada"},
          "conjunction fan-out");
  return "3 extractions";
}

std::string metrics(Check& c) {
  auto start = Clock::now();
  auto r = run_metrics_oracle(1000, 2024);
  for (const auto& f : r.failures) c.expect(false, f);
  c.within(start, 30.0, "metrics oracle");
  return std::to_string(r.stores) + " stores, " + std::to_string(r.checks) + " edges checked in " +
         seconds_since(start);
}

std::string matcher(Check& c) {
  auto r = run_matcher_oracle(500, 77);
  for (const auto& f : r.failures) c.expect(false, f);
  c.expect(r.matching > 50 && r.matching < 450, "random pairs should mix matches and non-matches");

  auto bindings = [](const char* e, const char* p) {
    std::vector<std::string> out;
    for (const auto& b : match(E(e), parse_pattern(p))) out.push_back(b.str());
    return out;
  };
  c.equal(bindings("(is/P.sc (the/M sky/C) blue/C)", "(is/P.sc SUBJ PROP/C)"),
          std::vector<std::string>{"PROP=blue/C;SUBJ=(the/M sky/C);"}, "sky is blue");
  c.equal(bindings("(is/P.cs blue/C (the/M sky/C))", "(is/P.{sc} SUBJ PROP/C)"),
          std::vector<std::string>{"PROP=blue/C;SUBJ=(the/M sky/C);"}, "unordered roles");
  c.expect(!matches(E("(is/P.cs blue/C (the/M sky/C))"), parse_pattern("(is/P.sc SUBJ PROP/C)")),
           "ordered roles reject swapped arguments");
  c.expect(matches(E("(is/P.scx (the/M sky/C) blue/C today/C)"), parse_pattern("(is/P.{sc} SUBJ PROP/C ...)")),
           "the sky is blue today");
  c.expect(matches(E("(is/P.xsc today/C (the/M sky/C) blue/C)"), parse_pattern("(is/P.{sc} SUBJ PROP/C ...)")),
           "today the sky is blue");
  c.expect(matches(E("(was/P.pa it/C (by/M him/C))"), parse_pattern("(PRED/P.{[sp]} X ...)")),
           "[sp] accepts a passive subject");
  c.equal(bindings("(play/P.o football/C)", "(PRED/P.-sp X...)"),
          std::vector<std::string>{"PRED=play/P.o;X=[football/C];"}, "forbidden roles");
  c.expect(!matches(E("(plays/P.so alice/C football/C)"), parse_pattern("(PRED/P.-sp X...)")),
           "forbidden subject rejected");
  auto rule = parse_rule("(is/P.sc SUBJ PROP/C) |- (property/P PROP)");
  c.equal(strs(apply_rule(E("(is/P.sc (the/M sky/C) blue/C)"), rule)),
          std::vector<std::string>{"(property/P blue/C)"}, "property rule");
  return std::to_string(r.pairs) + " random pairs (" + std::to_string(r.matching) + " matching), 10 printed examples";
}

std::string claims(Check& c) {
  Store store;
  store.add(E("(lemma/J says/P say/P)"));
  auto claim = detect_claim(E(kRussia), store);
  c.expect(claim.has_value(), "Russia claim detected");
  if (claim) {
    c.equal(claim->actor.str(), std::string("russia/C"), "actor");
    c.equal(claim->claim.str(), std::string("('s/P.sc russia/C ready/C)"), "claim after anaphora");
    c.equal(claim->pronoun, std::string("it"), "replaced pronoun");
  }
  c.expect(inspect_predicate(E("(not/M is/P)")) == PredicateInfo{Tense::Present, true}, "(not/M is/P)");
  c.expect(inspect_predicate(E("was/P")) == PredicateInfo{Tense::Past, false}, "was/P");
  c.expect(inspect_predicate(E("(will/M be/P)")) == PredicateInfo{Tense::Future, false}, "(will/M be/P)");

  Store lemmas;
  lemmas.add(E("(lemma/J accuses/P accuse/P)"));
  lemmas.add(E("(lemma/J says/P say/P)"));
  auto conflict = detect_conflict(E("(accuses/P.sox germany/C greece/C (over/T (+/B.am debt/C commitments/C)))"), lemmas);
  c.expect(conflict && conflict->source.str() == "germany/C" && conflict->target.str() == "greece/C",
           "accuse conflict detected");
  c.expect(!detect_conflict(E("(says/P.sox germany/C greece/C (over/T debt/C))"), lemmas),
           "predicate outside the conflict lemmas rejected");
  c.expect(!detect_claim(E(kRussia), Store{}), "claim without a lemma entry rejected");
  return "claim, 3 predicate forms, 2 conflicts";
}

std::string coreference(Check& c) {
  auto obama = obama_store();
  auto sets = coref_sets(obama, parse_atom("obama/C"));
  std::vector<std::vector<std::string>> members;
  for (const auto& s : sets) members.push_back(strs(s.members));
  c.equal(members,
          std::vector<std::vector<std::string>>{
              {"(+/B.am barack/C obama/C)", "(+/B.am president/C (+/B.am barack/C obama/C))",
               "(+/B.am president/C obama/C)"},
              {"(+/B.am (first/M lady/C) (+/B.am michelle/C obama/C))", "(+/B.am michelle/C obama/C)"},
              {"(+/B.am mr/C obama/C)"}},
          "obama sets");
  auto a = resolve_seed(obama, parse_atom("obama/C"));
  c.expect(a.assigned && a.assigned->label.str() == "(+/B.am barack/C obama/C)", "obama assigned to barack obama");
  c.expect(!resolve_seed(korea_store(), parse_atom("korea/C")).assigned, "korea stays unassigned");
  auto q = resolve_seed(qaida_store(), parse_atom("qaida/C"));
  c.expect(!q.assigned && q.best_p > 0.7, "qaida stays unassigned on the degree ratio");

  std::mt19937 rng(5);
  const std::vector<std::string> aux = {"a/C", "b/C", "c/C", "d/C"};
  std::size_t comparisons = 0;
  for (int round = 0; round < 60; ++round) {
    Store s;
    int k = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < k; ++i) {
      std::string e = "(+/B.am " + aux[rng() % aux.size()] + " z/C)";
      if (rng() % 2) e = "(+/B.am " + aux[rng() % aux.size()] + " " + e + ")";
      mention(s, e, 1 + static_cast<int>(rng() % 6), "r" + std::to_string(i) + "_");
    }
    mention(s, "z/C", static_cast<int>(rng() % 4), "z");
    auto zs = coref_sets(s, parse_atom("z/C"));
    for (double t1 : {0.3, 0.5, 0.7, 0.9}) {
      for (double t2 : {0.3, 0.5, 0.7, 0.9}) {
        for (double q1 : {0.01, 0.05, 0.2, 0.5}) {
          for (double q2 : {0.01, 0.05, 0.2, 0.5}) {
            if (t2 < t1 || q2 < q1) continue;
            bool low = assign_seed(s, parse_atom("z/C"), zs, t1, q1).assigned.has_value();
            bool high = assign_seed(s, parse_atom("z/C"), zs, t2, q2).assigned.has_value();
            c.expect(low || !high, "raising thresholds created an assignment in round " + std::to_string(round));
            ++comparisons;
          }
        }
      }
    }
  }
  return "3 fixtures, " + std::to_string(comparisons) + " threshold pairs";
}

std::string alpha_properties(Check& c) {
  auto start = Clock::now();
  auto train = synthetic_corpus(200, 1);
  auto test = synthetic_corpus(100, 2);
  alpha::ForestParams p;
  p.seed = 4;
  auto forest = alpha::train_forest(train, alpha::FeatureSet::f5(), p);
  auto again = alpha::train_forest(train, alpha::FeatureSet::f5(), p);
  c.expect(forest.to_json() == again.to_json(), "same seed gives the same forest");
  double train_acc = alpha::accuracy(forest, train), test_acc = alpha::accuracy(forest, test);
  c.expect(train_acc == 1.0, "training accuracy " + std::to_string(train_acc));
  c.expect(test_acc >= 0.95, "held-out accuracy " + std::to_string(test_acc));
  c.within(start, 10.0, "alpha suite");
  std::ostringstream os;
  os << "train " << train_acc << ", held-out " << test_acc << ", " << seconds_since(start);
  return os.str();
}

std::string factions(Check& c) {
  const std::set<std::string> west = {"w1", "w2", "w3", "w4"}, east = {"e1", "e2", "e3", "e4"};
  ConflictNetwork net;
  for (const auto& w : west) {
    for (const auto& e : east) {
      if ((w == "w4" && e == "e1") || (w == "w2" && e == "e3")) continue;
      if (w < "w3") {
        net.add(w, e);
      } else {
        net.add(e, w);
      }
    }
  }
  auto f = detect_factions(net);
  c.expect((f.a == west && f.b == east) || (f.a == east && f.b == west), "planted blocs recovered");
  c.expect(f.unassigned.empty(), "every node assigned");
  std::size_t intra = 0;
  for (const auto& group : {f.a, f.b}) {
    for (const auto& x : group) {
      for (const auto& y : group) intra += net.in_conflict(x, y) ? 1 : 0;
    }
  }
  c.equal(intra, std::size_t{0}, "conflicts inside a faction");
  return "8 nodes, " + std::to_string(net.edges().size()) + " conflicts";
}

std::string mining(Check& c) {
  Store s;
  for (const char* e : {
           "(is/P.sc aragorn/C (of/B.ma king/C gondor/C))",
           "(is/P.sc boromir/C (of/B.ma son/C denethor/C))",
           "(is/P.sc frodo/C hobbit/C)",
           "(is/P.sc sam/C gardener/C)",
           "(is/P.sc gandalf/C wizard/C)",
           "(was/P.sc bilbo/C (+/B.am ring/C bearer/C))",
           "(likes/P.so sam/C potatoes/C)",
           "(likes/P.so pippin/C (+/B.am second/C breakfast/C))",
           "(fears/P.so frodo/C (the/M ring/C))",
           "(rides/P.sx gandalf/C (to/T minas_tirith/C))",
           "(went/P.sx frodo/C (to/T mordor/C))",
           "(gave/P.sio galadriel/C frodo/C (a/M phial/C))",
           "(and/J frodo/C sam/C)",
           "(lemma/J is/P be/P)",
           "(lemma/J was/P be/P)",
           "(lemma/J likes/P like/P)",
           "(is/P.sc legolas/C elf/C)",
           "(is/P.sc gimli/C dwarf/C)",
           "(+/B.am elven/C king/C)",
           "(says/P.sr gandalf/C (is/P.sc frodo/C ready/C))",
       }) {
    s.add(E(e));
  }
  c.equal(s.size(), std::size_t{20}, "fixture size");
  auto mined = mine_patterns(s);
  auto rank = [&](const std::string& p) {
    for (std::size_t i = 0; i < mined.size(); ++i) {
      if (mined[i].pattern == p) return static_cast<long>(i);
    }
    return -1L;
  };
  const std::string flat = "(*/P.sc */C */C)";
  long base = rank(flat);
  c.expect(base >= 0, "flat pattern mined");
  c.expect(rank("(*/P.sc */C (*/B.ma */C */C))") >= 0, "builder expansion mined");
  std::size_t expansions = 0;
  for (std::size_t i = 0; i < mined.size(); ++i) {
    const auto& p = mined[i].pattern;
    if (p == flat || p.rfind("(*/P.sc ", 0) != 0) continue;
    if (parse_pattern(p).root().elements.size() != 3) continue;
    ++expansions;
    c.expect(static_cast<long>(i) > base, p + " ranks above " + flat);
  }
  c.expect(expansions > 0, "expansions present");
  return flat + " at rank " + std::to_string(base + 1) + " with count " +
         (base >= 0 ? std::to_string(mined[static_cast<std::size_t>(base)].count) : std::string("-")) + ", " +
         std::to_string(expansions) + " expansions below it";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<std::string(Check&)>>> criteria = {
      {"type system golden suite", type_system},
      {"beta golden sentences", beta_golden},
      {"conjunction decomposition", decomposition},
      {"open information extraction", oie},
      {"metrics oracle", metrics},
      {"pattern matcher oracle", matcher},
      {"claims and conflicts", claims},
      {"coreference", coreference},
      {"alpha classifier properties", alpha_properties},
      {"faction detection", factions},
      {"pattern mining", mining},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    std::string detail;
    try {
      detail = run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    if (c.problems().empty()) {
      std::cout << "PASS  " << name << "  (" << detail << ")\n";
    } else {
      ++failed;
      std::cout << "FAIL  " << name << "\n";
      for (const auto& p : c.problems()) std::cout << "        " << p << "\n";
    }
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
