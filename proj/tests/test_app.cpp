#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "coref_fixtures.hpp"
#include "shg/app.hpp"

using namespace shg;
using namespace shg::app;
using json = nlohmann::json;

namespace {

Hyperedge E(const std::string& s) { return parse_notation(s); }

Store says_store() {
  Store s;
  for (const char* e : {"(says/P.sr mary/C (is/P.sc sky/C blue/C))", "(says/P.sr john/C (likes/P.so ann/C tea/C))",
                        "(says/P.sr bob/C hello/C)", "(claims/P.sr eve/C (is/P.sc sea/C deep/C))",
                        "(lemma/J says/P say/P)", "(lemma/J claims/P claim/P)"}) {
    s.add(E(e));
  }
  return s;
}

json body(const Response& r) { return json::parse(r.body); }

std::string temp_path(const std::string& name) {
  auto p = (std::filesystem::temp_directory_path() / name).string();
  std::remove(p.c_str());
  return p;
}

}  // namespace

TEST(Config, JsonOverridesAndValidation) {
  auto c = config_from_json(R"({"theta": 0.8, "claim_lemmas": ["assert"], "port": 9000, "features": "F3"})");
  EXPECT_DOUBLE_EQ(c.coref.theta, 0.8);
  EXPECT_DOUBLE_EQ(c.coref.theta_prime, 0.05);
  EXPECT_EQ(c.inference.claim_lemmas, std::set<std::string>{"assert"});
  EXPECT_EQ(c.port, 9000);
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(config_from_json("[1]"), Error);
  EXPECT_THROW(config_from_json(R"({"theta": "high"})"), Error);
  c.forest_path = "/nonexistent/forest.json";
  EXPECT_THROW(c.validate(), Error);
  Config bad;
  bad.features = "F4";
  EXPECT_THROW(bad.validate(), Error);
}

TEST(Ingest, NotationLinesWithLemmaLines) {
  std::istringstream in("# comment\n(says/P.sr mary/C hello/C)\n\t(lemma/J says/P say/P)\n\n");
  Store s;
  EXPECT_EQ(ingest(s, in), 2u);
  EXPECT_EQ(s.lemma_of(parse_atom("says/P.sr"))->str(), "say/P");
  std::istringstream bad("(is/P.sc a/C b/C)\n(unclosed/P x/C\n");
  try {
    read_edges(bad, "f.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("f.txt:2"), std::string::npos);
  }
}

TEST(Reports, SameAsModuleCalls) {
  auto s = says_store();
  s.add(E("(accuses/P.sox us/C russia/C (of/T (+/B.am cyber/C attacks/C)))"));
  s.add(E("(lemma/J accuses/P accuse/P)"));
  std::vector<std::string> tuples;
  for (const auto& e : s.edges()) {
    if (is_lemma_edge(e)) continue;
    for (const auto& t : extract_oie_all(e)) tuples.push_back(t.str());
  }
  EXPECT_EQ(oie_lines(s), tuples);

  auto claims = claim_lines(s, {});
  ASSERT_EQ(claims.size(), 3u);  // "bob says hello" claims a concept
  auto c0 = json::parse(claims[0]);
  auto direct = detect_claim(E(c0["edge"].get<std::string>()), s);
  ASSERT_TRUE(direct);
  EXPECT_EQ(c0["actor"], direct->actor.str());

  auto conflicts = conflict_lines(s, {});
  ASSERT_EQ(conflicts.size(), 1u);
  auto c = json::parse(conflicts[0]);
  EXPECT_EQ(c["source"], "us/C");
  EXPECT_EQ(c["target"], "russia/C");
  EXPECT_EQ(c["trigger"], "of");

  auto g = E("germany/C");
  auto m = json::parse(metrics_json(s, g));
  EXPECT_EQ(m["degree"], 0);
  Store one;
  one.add(E("(is/P.sc berlin/C (of/B.ma capital/C germany/C))"));
  m = json::parse(metrics_json(one, g));
  EXPECT_EQ(m["degree"].get<std::size_t>(), one.degree(g));
  EXPECT_EQ(m["deep_degree"].get<std::size_t>(), one.deep_degree(g));
}

TEST(Reports, PopulationTupleFromFile) {
  std::istringstream in(
      "(is/P.scx (of/B.ma (the/M population/C) (the/M (special/M wards/C))) ((over/M (9/M million/M)) people/C) "
      "(with/T (exceeding/P.so (of/B.ma (the/M (total/M population/C)) (the/M prefecture/C)) (13/M million/C))))\n");
  EXPECT_EQ(oie_lines(read_edges(in)),
            std::vector<std::string>{"is\tthe population of the special wards\tover 9 million people\twith the total "
                                     "population of the prefecture exceeding 13 million"});
}

TEST(Reports, CorefAndFactions) {
  auto s = shg::testing::obama_store();
  auto j = json::parse(coref_json(s, parse_atom("obama/C"), {}));
  EXPECT_EQ(j["assigned"], "(+/B.am barack/C obama/C)");
  EXPECT_EQ(j["sets"].size(), 3u);
  auto text = coref_lines(s, parse_atom("obama/C"), {});
  EXPECT_EQ(text.back(), "  assigned (+/B.am barack/C obama/C)");

  ConflictNetwork net;
  net.add("a", "b");
  auto f = detect_factions(net);
  EXPECT_EQ(faction_lines(f), (std::vector<std::string>{"A\ta", "B\tb"}));
  auto dot = to_dot(net, f);
  EXPECT_NE(dot.find("\"a\" -> \"b\""), std::string::npos);
}

TEST(Api, EdgesAndMetrics) {
  Api api(says_store(), {});
  auto all = body(api.handle("GET", "/edges"));
  EXPECT_EQ(all["edges"].size(), 6u);
  auto q = api.handle("GET", "/edges", {{"query", "(says/P.{sr} ACTOR */R)"}});
  ASSERT_EQ(q.status, 200);
  EXPECT_EQ(body(q)["edges"].size(), 2u);
  EXPECT_EQ(api.handle("GET", "/edges", {{"query", "(says/P.{sr"}}).status, 400);

  std::string id = edge_id(E("(says/P.sr bob/C hello/C)"));
  auto one = api.handle("GET", "/edges/" + id);
  ASSERT_EQ(one.status, 200);
  EXPECT_EQ(body(one)["edge"], "(says/P.sr bob/C hello/C)");
  EXPECT_EQ(body(one)["text"], "bob says hello");
  EXPECT_EQ(api.handle("GET", "/edges/0000000000000000").status, 404);

  auto m = api.handle("GET", "/metrics", {{"edge", "mary/C"}});
  EXPECT_EQ(body(m)["degree"], 2);
  EXPECT_EQ(api.handle("GET", "/metrics", {{"edge", "(broken"}}).status, 400);
  EXPECT_EQ(api.handle("GET", "/metrics").status, 400);
  EXPECT_EQ(api.handle("GET", "/nowhere").status, 404);

  auto mined = body(api.handle("GET", "/patterns/mined", {{"limit", "2"}}));
  EXPECT_EQ(mined["patterns"].size(), 2u);
  EXPECT_EQ(api.handle("GET", "/patterns/mined", {{"depth", "x"}}).status, 400);
}

TEST(Api, MetricsOnEmptyStoreAreZero) {
  Api api(Store{}, {});
  auto r = api.handle("GET", "/metrics", {{"edge", "(is/P berlin/C nice/C)"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(body(r)["degree"], 0);
  EXPECT_EQ(body(r)["deep_degree"], 0);
  EXPECT_TRUE(body(r)["neighborhood"].empty());
}

TEST(Api, Coref) {
  Api api(shg::testing::obama_store(), {});
  auto r = api.handle("GET", "/coref/obama/C");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(body(r)["assigned"], "(+/B.am barack/C obama/C)");
  EXPECT_EQ(api.handle("GET", "/coref/nobody/C").status, 404);
  EXPECT_EQ(api.handle("GET", "/coref/(a/C b/C)").status, 400);
  Config strict;
  strict.coref.theta = 0.9;
  Api strict_api(shg::testing::obama_store(), strict);
  EXPECT_TRUE(body(strict_api.handle("GET", "/coref/obama/C"))["assigned"].is_null());
}

TEST(Api, SessionWalkthroughAndRestore) {
  auto sidecar = temp_path("shg_api_sessions.json");
  std::string id, pattern_after;
  {
    Api api(says_store(), {}, sidecar);
    auto created = api.handle("POST", "/sessions", {}, R"({"criterion": "predicate-frequency",
                                                            "schema": ["ACTOR", "CLAIM"], "seed": 2})");
    ASSERT_EQ(created.status, 201) << created.body;
    auto s = body(created);
    id = s["id"];
    auto cand = E(s["candidate"].get<std::string>());
    EXPECT_EQ(cand.connector().str(), "says/P.sr");
    ASSERT_EQ(cand, E("(says/P.sr mary/C (is/P.sc sky/C blue/C))"));

    auto assign = [&](const std::string& var, const std::string& e) {
      json b{{"variable", var}, {"edge", e}};
      return api.handle("POST", "/sessions/" + id + "/assign", {}, b.dump());
    };
    ASSERT_EQ(assign("ACTOR", cand.args()[0].str()).status, 200);
    auto assigned = assign("CLAIM", cand.args()[1].str());
    ASSERT_EQ(assigned.status, 200);
    EXPECT_EQ(body(assigned)["pattern"], "(says/P.{sr} ACTOR CLAIM)");
    EXPECT_EQ(assign("ACTOR", "zed/C").status, 409);
    EXPECT_EQ(assign("ACTOR", "(zed/C").status, 400);
    EXPECT_EQ(api.handle("POST", "/sessions/" + id + "/assign", {}, "{").status, 400);

    auto pending = body(api.handle("GET", "/sessions/" + id + "/pattern"))["pending"];
    EXPECT_EQ(pending.size(), 2u);
    auto rejected = json{{"edge", "(says/P.sr bob/C hello/C)"}, {"verdict", "reject"}};
    auto fb = api.handle("POST", "/sessions/" + id + "/feedback", {}, rejected.dump());
    ASSERT_EQ(fb.status, 200) << fb.body;
    auto p = body(api.handle("GET", "/sessions/" + id + "/pattern"));
    pattern_after = p["pattern"];
    EXPECT_NE(pattern_after, "(says/P.{sr} ACTOR CLAIM)");
    for (const auto& e : p["pending"]) EXPECT_NE(e, "(says/P.sr bob/C hello/C)");

    // accepting what was rejected contradicts the session
    auto flip = json{{"edge", "(says/P.sr bob/C hello/C)"}, {"verdict", "accept"}};
    EXPECT_EQ(api.handle("POST", "/sessions/" + id + "/feedback", {}, flip.dump()).status, 409);
    auto bad = json{{"edge", "(says/P.sr bob/C hello/C)"}, {"verdict", "maybe"}};
    EXPECT_EQ(api.handle("POST", "/sessions/" + id + "/feedback", {}, bad.dump()).status, 400);
    EXPECT_EQ(api.handle("GET", "/sessions/s99").status, 404);
    EXPECT_EQ(api.handle("POST", "/sessions", {}, R"({"criterion": "vibes"})").status, 400);
  }
  Api restarted(says_store(), {}, sidecar);
  auto back = restarted.handle("GET", "/sessions/" + id + "/pattern");
  ASSERT_EQ(back.status, 200);
  EXPECT_EQ(body(back)["pattern"], pattern_after);
  std::remove(sidecar.c_str());
}

TEST(Api, EmptyStoreSessionIsConflict) {
  Api api(Store{}, {});
  EXPECT_EQ(api.handle("POST", "/sessions", {}, "{}").status, 409);
}

TEST(Service, ServesOverLoopback) {
  Api api(says_store(), {});
  Service service(api);
  int port = service.bind("127.0.0.1", 0);
  std::thread t([&] { service.run(); });
  service.wait_until_ready();
  httplib::Client client("127.0.0.1", port);
  auto r = client.Get("/metrics?edge=mary%2FC");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body)["degree"], 2);
  auto c = client.Get("/coref/obama%2FC");
  ASSERT_TRUE(c);
  EXPECT_EQ(c->status, 404);
  auto s = client.Post("/sessions", R"({"criterion": "random"})", "application/json");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->status, 201);
  service.stop();
  t.join();
}
