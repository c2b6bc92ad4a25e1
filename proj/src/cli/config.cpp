#include "rcm/cli/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <set>

#include "rcm/env/annulus.hpp"
#include "rcm/error.hpp"

namespace rcm {

nlohmann::json ExperimentConfig::to_json() const {
  return {{"schema_version", schema_version}, {"id", id},         {"law", law},
          {"d", d},                           {"seeds", seeds},   {"horizons", horizons},
          {"annuli", annuli},                 {"walkers", walkers}, {"threads", threads},
          {"alpha", alpha},                   {"boxes", boxes},   {"beta_factor", beta_factor},
          {"out_dir", out_dir}};
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"schema_version", "id",      "law",   "d",     "seeds",
                                           "horizons",       "annuli",  "walkers", "threads", "alpha",
                                           "boxes",          "beta_factor", "out_dir"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  ExperimentConfig c;
  try {
    c.schema_version = j.value("schema_version", c.schema_version);
    c.id = j.value("id", c.id);
    if (j.contains("law")) c.law = j.at("law").is_string() ? j.at("law").get<std::string>() : j.at("law").dump();
    c.d = j.value("d", c.d);
    c.seeds = j.value("seeds", c.seeds);
    c.horizons = j.value("horizons", c.horizons);
    c.annuli = j.value("annuli", c.annuli);
    c.walkers = j.value("walkers", c.walkers);
    c.threads = j.value("threads", c.threads);
    c.alpha = j.value("alpha", c.alpha);
    c.boxes = j.value("boxes", c.boxes);
    c.beta_factor = j.value("beta_factor", c.beta_factor);
    c.out_dir = j.value("out_dir", c.out_dir);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  if (schema_version != kConfigSchemaVersion)
    throw ConfigError("unsupported config schema_version " + std::to_string(schema_version));
  if (d < 1 || d > 6) throw ConfigError("d must lie in [1, 6]");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  for (int n : horizons)
    if (n < 1) throw ConfigError("horizons must be positive");
  for (int k : annuli)
    if (k < 1 || k > 15) throw ConfigError("annuli must lie in [1, 15]");
  for (int L : boxes)
    if (L < 1) throw ConfigError("box half widths must be positive");
  if (!(alpha > 0 && alpha <= 1)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(beta_factor >= 1)) throw ConfigError("beta_factor must be at least 1");
}

std::string ExperimentConfig::digest() const { return sha256_hex(to_json().dump()); }

bool in_window(double n, int k) {
  if (n <= std::exp(1.0)) return false;
  const double ll = std::log(std::log(n));
  const double tk = t_k(k);
  return std::exp(ll * ll) <= tk && tk <= n / std::log(n);
}

std::vector<int> window_annuli(double n) {
  std::vector<int> ks;
  for (int k = 1; k <= 30 && t_k(k) <= n; ++k)
    if (in_window(n, k)) ks.push_back(k);
  return ks;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("SHA-256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

}  // namespace rcm
