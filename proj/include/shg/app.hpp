#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "shg/coref.hpp"
#include "shg/hedge.hpp"
#include "shg/inference.hpp"
#include "shg/learning.hpp"
#include "shg/pattern.hpp"
#include "shg/store.hpp"

namespace shg::app {

struct Config {
  std::string features = "F5";
  std::string forest_path;
  std::vector<std::string> rule_paths;
  InferenceConfig inference;
  CorefParams coref;
  int port = 8080;
  std::string bind = "127.0.0.1";
  std::string store_path;
  std::uint64_t seed = 0;

  /// Throws if a referenced file is missing or a value is out of range.
  void validate() const;
};

/// JSON object with any of: features, forest, rules, claim_lemmas,
/// conflict_lemmas, conflict_triggers, theta, theta_prime, port, bind, store,
/// seed. Missing keys keep the values of `base`.
Config config_from_json(const std::string& text, Config base = {});
Config load_config(const std::string& path, Config base = {});

/// Stable identifier of an edge: 16 hex digits of FNV-1a over its notation.
std::string edge_id(const Hyperedge& edge);

/// Reads SH notation, one edge per line. Lines starting with a tab (the lemma
/// edges printed by `parse`) are added as well; blank lines and lines
/// starting with '#' are skipped. Returns the number of edges read.
std::size_t ingest(Store& store, std::istream& in, const std::string& source = "<input>");
std::vector<Hyperedge> read_edges(std::istream& in, const std::string& source = "<input>");

// Reports. Each returns lines in a deterministic order.

/// Surface forms from the stored source text of `edge`, if any.
SurfaceForms forms_for(const Store& store, const Hyperedge& edge);
std::vector<std::string> oie_lines(const Store& store);
std::vector<std::string> oie_lines(const std::vector<Hyperedge>& edges);
std::vector<std::string> claim_lines(const Store& store, const InferenceConfig& config);
std::vector<std::string> conflict_lines(const Store& store, const InferenceConfig& config);
ConflictNetwork conflict_network(const Store& store, const InferenceConfig& config);
std::vector<std::string> faction_lines(const Factions& factions);
std::string to_dot(const ConflictNetwork& net, const Factions& factions);
std::vector<std::string> match_lines(const Store& store, const Pattern& pattern);
std::vector<std::string> rule_lines(const Store& store, const std::vector<Rule>& rules);
std::vector<std::string> mined_lines(const std::vector<MinedPattern>& mined);

std::string metrics_json(const Store& store, const Hyperedge& edge);
std::vector<std::string> metrics_lines(const Store& store, const Hyperedge& edge);
std::string coref_json(const Store& store, const Atom& seed, const CorefParams& params);
std::vector<std::string> coref_lines(const Store& store, const Atom& seed, const CorefParams& params);

// ---------------------------------------------------------------------------
// HTTP service

struct Response {
  int status = 200;
  std::string body;  // JSON
};

/// Request handling without any transport, so the routes can be tested
/// directly. Reads share a lock, session mutations take it exclusively.
class Api {
 public:
  Api(Store store, Config config, std::string sidecar = {});

  Response handle(const std::string& method, const std::string& path,
                  const std::map<std::string, std::string>& query = {}, const std::string& body = {});

  const Store& store() const { return store_; }

 private:
  Response route(const std::string& method, const std::string& path, const std::map<std::string, std::string>& query,
                 const std::string& body);

  Store store_;
  Config config_;
  SessionManager sessions_;
  std::shared_mutex mutex_;
};

/// HTTP front end of an Api.
class Service {
 public:
  explicit Service(Api& api);
  ~Service();
  /// Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Blocks serving `api` on config.bind:config.port until the process exits.
void serve(Api& api, const Config& config);

}  // namespace shg::app
