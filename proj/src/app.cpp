#include "shg/app.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

namespace shg::app {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Config

void Config::validate() const {
  if (features != "F3" && features != "F5") throw Error("features must be F3 or F5, got '" + features + "'");
  auto need = [](const std::string& path, const char* what) {
    if (!path.empty() && !std::filesystem::exists(path)) throw Error(std::string(what) + " not found: " + path);
  };
  need(forest_path, "forest file");
  for (const auto& r : rule_paths) need(r, "rule file");
  if (coref.theta < 0 || coref.theta > 1) throw Error("theta must lie in [0, 1]");
  if (coref.theta_prime < 0 || coref.theta_prime > 1) throw Error("theta' must lie in [0, 1]");
  if (port < 0 || port > 65535) throw Error("port out of range: " + std::to_string(port));
}

Config config_from_json(const std::string& text, Config base) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error("config: expected a JSON object");
  try {
    auto set_of = [](const json& v) { return v.get<std::set<std::string>>(); };
    if (j.contains("features")) base.features = j["features"].get<std::string>();
    if (j.contains("forest")) base.forest_path = j["forest"].get<std::string>();
    if (j.contains("rules")) base.rule_paths = j["rules"].get<std::vector<std::string>>();
    if (j.contains("claim_lemmas")) base.inference.claim_lemmas = set_of(j["claim_lemmas"]);
    if (j.contains("conflict_lemmas")) base.inference.conflict_lemmas = set_of(j["conflict_lemmas"]);
    if (j.contains("conflict_triggers")) base.inference.conflict_triggers = set_of(j["conflict_triggers"]);
    if (j.contains("theta")) base.coref.theta = j["theta"].get<double>();
    if (j.contains("theta_prime")) base.coref.theta_prime = j["theta_prime"].get<double>();
    if (j.contains("port")) base.port = j["port"].get<int>();
    if (j.contains("bind")) base.bind = j["bind"].get<std::string>();
    if (j.contains("store")) base.store_path = j["store"].get<std::string>();
    if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return base;
}

Config load_config(const std::string& path, Config base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str(), std::move(base));
}

// ---------------------------------------------------------------------------
// Ingestion

std::string edge_id(const Hyperedge& edge) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : edge.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Hyperedge> read_edges(std::istream& in, const std::string& source) {
  std::vector<Hyperedge> out;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    try {
      out.push_back(parse_notation(line.substr(start)));
    } catch (const Error& e) {
      throw Error(source + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::size_t ingest(Store& store, std::istream& in, const std::string& source) {
  auto edges = read_edges(in, source);
  for (const auto& e : edges) store.add(e);
  return edges.size();
}

// ---------------------------------------------------------------------------
// Reports

SurfaceForms forms_for(const Store& store, const Hyperedge& edge) {
  const auto* attrs = store.attributes(edge);
  if (!attrs || attrs->text.empty()) return {};
  return SurfaceForms::from_text(attrs->text);
}

namespace {

std::vector<Hyperedge> content_edges(const Store& store) {
  std::vector<Hyperedge> out;
  for (const auto& e : store.edges()) {
    if (!is_lemma_edge(e)) out.push_back(e);
  }
  return out;
}

json strs(const std::vector<Hyperedge>& es) {
  json out = json::array();
  for (const auto& e : es) out.push_back(e.str());
  return out;
}

void append_tuples(std::vector<std::string>& out, const Hyperedge& e, const SurfaceForms* forms) {
  for (const auto& t : extract_oie_all(e, forms)) out.push_back(t.str());
}

}  // namespace

std::vector<std::string> oie_lines(const Store& store) {
  std::vector<std::string> out;
  for (const auto& e : content_edges(store)) {
    auto forms = forms_for(store, e);
    append_tuples(out, e, forms.empty() ? nullptr : &forms);
  }
  return out;
}

std::vector<std::string> oie_lines(const std::vector<Hyperedge>& edges) {
  std::vector<std::string> out;
  for (const auto& e : edges) append_tuples(out, e, nullptr);
  return out;
}

std::vector<std::string> claim_lines(const Store& store, const InferenceConfig& config) {
  std::vector<std::string> out;
  for (const auto& e : content_edges(store)) {
    auto c = detect_claim(e, store, config);
    if (!c) continue;
    json j{{"edge", e.str()},
           {"actor", c->actor.str()},
           {"predicate", c->predicate.str()},
           {"claim", c->claim.str()},
           {"contexts", strs(c->contexts)},
           {"specifications", strs(c->specifications)},
           {"tense", tense_name(c->tense)},
           {"negated", c->negated}};
    j["pronoun"] = c->pronoun.empty() ? json(nullptr) : json(c->pronoun);
    out.push_back(j.dump());
  }
  return out;
}

std::vector<std::string> conflict_lines(const Store& store, const InferenceConfig& config) {
  std::vector<std::string> out;
  for (const auto& e : content_edges(store)) {
    auto c = detect_conflict(e, store, config);
    if (!c) continue;
    json j{{"edge", e.str()},
           {"source", c->source.str()},
           {"target", c->target.str()},
           {"topic", c->topic.str()},
           {"trigger", c->trigger_root},
           {"predicate", c->predicate.str()}};
    out.push_back(j.dump());
  }
  return out;
}

ConflictNetwork conflict_network(const Store& store, const InferenceConfig& config) {
  ConflictNetwork net;
  for (const auto& e : content_edges(store)) {
    auto c = detect_conflict(e, store, config);
    if (c && c->source != c->target) net.add(*c);
  }
  return net;
}

std::vector<std::string> faction_lines(const Factions& f) {
  std::vector<std::string> out;
  for (const auto& n : f.a) out.push_back("A\t" + n);
  for (const auto& n : f.b) out.push_back("B\t" + n);
  for (const auto& n : f.unassigned) out.push_back("-\t" + n);
  return out;
}

std::string to_dot(const ConflictNetwork& net, const Factions& factions) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::string out = "digraph conflicts {\n";
  for (const auto& n : net.nodes()) {
    std::string group = factions.a.count(n) ? "A" : factions.b.count(n) ? "B" : "none";
    out += "  " + quote(n) + " [faction=" + quote(group) + "];\n";
  }
  for (const auto& e : net.edges()) {
    out += "  " + quote(e.source) + " -> " + quote(e.target);
    if (e.topic) out += " [topic=" + quote(e.topic->str()) + "]";
    out += ";\n";
  }
  return out + "}\n";
}

std::vector<std::string> match_lines(const Store& store, const Pattern& pattern) {
  std::vector<std::string> out;
  for (const auto& e : store.edges()) {
    for (const auto& b : match(e, pattern)) out.push_back(e.str() + "\t" + b.str());
  }
  return out;
}

std::vector<std::string> rule_lines(const Store& store, const std::vector<Rule>& rules) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  auto lemmas = store.lemma_edges();
  for (const auto& e : content_edges(store)) {
    for (const auto& r : rules) {
      for (const auto& x : apply_rule(e, r, lemmas)) {
        if (seen.insert(x.str()).second) out.push_back(x.str());
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> mined_lines(const std::vector<MinedPattern>& mined) {
  std::vector<std::string> out;
  for (const auto& m : mined) out.push_back(std::to_string(m.count) + "\t" + m.pattern);
  return out;
}

std::string metrics_json(const Store& store, const Hyperedge& edge) {
  json j{{"edge", edge.str()},
         {"degree", store.degree(edge)},
         {"deep_degree", store.deep_degree(edge)},
         {"containing", strs(store.edges_containing(edge))},
         {"neighborhood", strs(store.neighborhood(edge))}};
  return j.dump();
}

std::vector<std::string> metrics_lines(const Store& store, const Hyperedge& edge) {
  return {"edge\t" + edge.str(), "degree\t" + std::to_string(store.degree(edge)),
          "deep_degree\t" + std::to_string(store.deep_degree(edge)),
          "neighborhood\t" + std::to_string(store.neighborhood(edge).size())};
}

namespace {

json coref_object(const Store& store, const Atom& seed, const CorefParams& params) {
  auto sets = coref_sets(store, seed, params.max_nodes);
  auto a = assign_seed(store, seed, sets, params.theta, params.theta_prime);
  json js = json::array();
  for (const auto& s : sets) {
    js.push_back({{"label", s.label.str()},
                  {"members", strs(s.members)},
                  {"clique", s.clique},
                  {"total_degree", s.total_degree},
                  {"p", s.p}});
  }
  return {{"seed", seed.str()},
          {"degree", a.degree},
          {"deep_degree", a.deep_degree},
          {"best_p", a.best_p},
          {"theta", a.theta},
          {"theta_prime", a.theta_prime},
          {"assigned", a.assigned ? json(a.assigned->label.str()) : json(nullptr)},
          {"sets", js}};
}

}  // namespace

std::string coref_json(const Store& store, const Atom& seed, const CorefParams& params) {
  return coref_object(store, seed, params).dump();
}

std::vector<std::string> coref_lines(const Store& store, const Atom& seed, const CorefParams& params) {
  auto sets = coref_sets(store, seed, params.max_nodes);
  auto a = assign_seed(store, seed, sets, params.theta, params.theta_prime);
  std::vector<std::string> out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "d=%zu delta=%zu", a.degree, a.deep_degree);
  out.push_back("seed " + seed.str() + " " + buf);
  for (const auto& s : sets) {
    std::snprintf(buf, sizeof buf, "%.4f", s.p);
    out.push_back("  set " + s.label.str() + " p=" + buf + " members=" + std::to_string(s.members.size()));
    for (const auto& m : s.members) out.push_back("    " + m.str());
  }
  out.push_back(a.assigned ? "  assigned " + a.assigned->label.str() : "  unassigned");
  return out;
}

// ---------------------------------------------------------------------------
// Api

namespace {

struct HttpError : Error {
  int status;
  HttpError(int s, const std::string& what) : Error(what), status(s) {}
};

Response reply(const json& j, int status = 200) { return {status, j.dump()}; }

Hyperedge notation_param(const std::string& text, const char* what) {
  if (text.empty()) throw HttpError(400, std::string("missing ") + what);
  try {
    return parse_notation(text);
  } catch (const Error& e) {
    throw HttpError(400, std::string("malformed ") + what + ": " + e.what());
  }
}

json body_json(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    auto j = json::parse(body);
    if (!j.is_object()) throw HttpError(400, "request body must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw HttpError(400, std::string("malformed JSON: ") + e.what());
  }
}

std::string string_field(const json& j, const char* key, bool required = true) {
  if (!j.contains(key)) {
    if (required) throw HttpError(400, std::string("missing field '") + key + "'");
    return {};
  }
  if (!j[key].is_string()) throw HttpError(400, std::string("field '") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

json edge_summary(const Store& store, const Hyperedge& e) {
  json j{{"id", edge_id(e)}, {"edge", e.str()}, {"count", store.count(e)}};
  const auto* a = store.attributes(e);
  j["text"] = a && !a->text.empty() ? a->text : edge_text(e);
  return j;
}

json session_json(const Session& s, const Store& store, const SessionManager& m) {
  json assigned = json::object();
  for (const auto& [k, v] : s.assignments) assigned[k] = v.str();
  return {{"id", s.id},
          {"criterion", s.criterion},
          {"candidate", s.candidate.str()},
          {"candidate_text", edge_summary(store, s.candidate)["text"]},
          {"schema", s.schema},
          {"assignments", assigned},
          {"pattern", s.pattern ? json(s.pattern->str()) : json(nullptr)},
          {"positives", strs(s.positives)},
          {"negatives", strs(s.negatives)},
          {"pending", strs(m.pending(s.id, store))},
          {"history", s.history}};
}

}  // namespace

Api::Api(Store store, Config config, std::string sidecar)
    : store_(std::move(store)), config_(std::move(config)), sessions_(std::move(sidecar)) {
  sessions_.load();
}

Response Api::handle(const std::string& method, const std::string& path,
                     const std::map<std::string, std::string>& query, const std::string& body) {
  try {
    return route(method, path, query, body);
  } catch (const HttpError& e) {
    return reply({{"error", e.what()}}, e.status);
  } catch (const ParseError& e) {
    return reply({{"error", e.what()}}, 400);
  } catch (const TypeError& e) {
    return reply({{"error", e.what()}}, 400);
  } catch (const LearningError& e) {
    return reply({{"error", e.what()}}, 409);
  } catch (const Error& e) {
    return reply({{"error", e.what()}}, 409);
  } catch (const std::exception& e) {
    return reply({{"error", e.what()}}, 500);
  }
}

Response Api::route(const std::string& method, const std::string& path,
                    const std::map<std::string, std::string>& query, const std::string& body) {
  auto parts = split_path(path);
  auto q = [&](const char* key) {
    auto it = query.find(key);
    return it == query.end() ? std::string{} : it->second;
  };
  if (parts.empty()) throw HttpError(404, "no such route: " + path);
  const std::string& head = parts[0];

  if (method == "GET" && head == "edges" && parts.size() == 1) {
    std::shared_lock lock(mutex_);
    json out = json::array();
    std::string text = q("query");
    if (text.empty()) {
      for (const auto& e : store_.edges()) out.push_back(edge_summary(store_, e));
    } else {
      Pattern p;
      try {
        p = parse_pattern(text);
      } catch (const Error& e) {
        throw HttpError(400, std::string("malformed query: ") + e.what());
      }
      for (const auto& e : store_.edges()) {
        auto bs = match(e, p);
        if (bs.empty()) continue;
        json j = edge_summary(store_, e);
        json bindings = json::array();
        for (const auto& b : bs) bindings.push_back(b.str());
        j["bindings"] = bindings;
        out.push_back(j);
      }
    }
    return reply({{"edges", out}});
  }
  if (method == "GET" && head == "edges" && parts.size() == 2) {
    std::shared_lock lock(mutex_);
    for (const auto& e : store_.all_edges()) {
      if (edge_id(e) != parts[1]) continue;
      json j = edge_summary(store_, e);
      j["degree"] = store_.degree(e);
      j["deep_degree"] = store_.deep_degree(e);
      j["type"] = std::string(1, code_char(infer_type(e)));
      return reply(j);
    }
    throw HttpError(404, "no edge with id " + parts[1]);
  }
  if (method == "GET" && head == "metrics" && parts.size() == 1) {
    auto e = notation_param(q("edge"), "edge");
    std::shared_lock lock(mutex_);
    return {200, metrics_json(store_, e)};
  }
  if (method == "GET" && head == "coref" && parts.size() >= 2) {
    // the seed notation itself contains '/'
    std::string text = path.substr(path.find("coref/") + 6);
    auto seed = notation_param(text, "seed");
    if (!seed.is_atom()) throw HttpError(400, "seed must be an atom");
    std::shared_lock lock(mutex_);
    auto seeds = seed_concepts(store_);
    if (std::find(seeds.begin(), seeds.end(), seed.atom()) == seeds.end()) {
      throw HttpError(404, seed.str() + " is not the seed of any compound");
    }
    CorefParams params = config_.coref;
    return {200, coref_json(store_, seed.atom(), params)};
  }
  if (method == "GET" && head == "patterns" && parts.size() == 2 && parts[1] == "mined") {
    GeneralizationConfig cfg;
    auto number = [&](const char* key, std::size_t fallback) {
      std::string v = q(key);
      if (v.empty()) return fallback;
      if (v.find_first_not_of("0123456789") != std::string::npos || v.size() > 9) {
        throw HttpError(400, std::string("parameter '") + key + "' must be a number");
      }
      return static_cast<std::size_t>(std::stoul(v));
    };
    cfg.max_depth = number("depth", cfg.max_depth);
    if (cfg.max_depth == 0) throw HttpError(400, "depth must be at least 1");
    std::size_t limit = number("limit", 50);
    std::shared_lock lock(mutex_);
    json out = json::array();
    for (const auto& m : mine_patterns(store_, cfg)) {
      if (out.size() >= limit) break;
      out.push_back({{"pattern", m.pattern}, {"count", m.count}});
    }
    return reply({{"patterns", out}});
  }
  if (head == "sessions") {
    if (method == "POST" && parts.size() == 1) {
      auto j = body_json(body);
      std::string criterion = j.value("criterion", std::string("predicate-frequency"));
      std::vector<std::string> schema;
      std::uint64_t seed = config_.seed;
      try {
        if (j.contains("schema")) schema = j["schema"].get<std::vector<std::string>>();
        if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
      } catch (const json::exception& e) {
        throw HttpError(400, e.what());
      }
      if (criterion != "random" && criterion != "predicate-frequency") {
        throw HttpError(400, "unknown criterion '" + criterion + "'");
      }
      std::unique_lock lock(mutex_);
      auto& s = sessions_.create(store_, criterion, schema, seed);
      return reply(session_json(s, store_, sessions_), 201);
    }
    if (parts.size() < 2) throw HttpError(404, "no such route: " + path);
    const std::string& id = parts[1];
    {
      std::shared_lock lock(mutex_);
      if (!sessions_.contains(id)) throw HttpError(404, "no session '" + id + "'");
      if (method == "GET" && parts.size() == 2) return reply(session_json(sessions_.get(id), store_, sessions_));
      if (method == "GET" && parts.size() == 3 && parts[2] == "pattern") {
        const auto& s = sessions_.get(id);
        return reply({{"id", id},
                      {"pattern", s.pattern ? json(s.pattern->str()) : json(nullptr)},
                      {"pending", strs(sessions_.pending(id, store_))}});
      }
    }
    if (method == "POST" && parts.size() == 3 && parts[2] == "assign") {
      auto j = body_json(body);
      auto var = string_field(j, "variable");
      auto e = notation_param(string_field(j, "edge"), "edge");
      std::unique_lock lock(mutex_);
      return reply(session_json(sessions_.assign(id, var, e, store_), store_, sessions_));
    }
    if (method == "POST" && parts.size() == 3 && parts[2] == "feedback") {
      auto j = body_json(body);
      auto verdict = string_field(j, "verdict");
      if (verdict != "accept" && verdict != "reject") throw HttpError(400, "verdict must be accept or reject");
      auto e = notation_param(string_field(j, "edge"), "edge");
      std::unique_lock lock(mutex_);
      return reply(session_json(sessions_.feedback(id, e, verdict == "accept", store_), store_, sessions_));
    }
  }
  throw HttpError(404, "no such route: " + method + " " + path);
}

struct Service::Impl {
  httplib::Server server;
};

Service::Service(Api& api) : impl_(std::make_unique<Impl>()) {
  auto forward = [&api](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    auto r = api.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  impl_->server.Get(".*", forward);
  impl_->server.Post(".*", forward);
}

Service::~Service() = default;

int Service::bind(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void Service::run() { impl_->server.listen_after_bind(); }
void Service::stop() { impl_->server.stop(); }
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

void serve(Api& api, const Config& config) {
  Service service(api);
  service.bind(config.bind, config.port);
  service.run();
}

}  // namespace shg::app
