#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace rcm {

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string id = "experiment";
  std::string law;  // path to a law file or inline JSON
  int d = 4;
  std::vector<uint64_t> seeds{1};
  std::vector<int> horizons{64};  // n
  std::vector<int> annuli;        // k
  uint64_t walkers = 100000;
  int threads = 0;
  double alpha = 0.5;
  std::vector<int> boxes{16};     // half widths
  double beta_factor = 1.25;
  std::string out_dir = "out";

  nlohmann::json to_json() const;
  // Missing keys keep their defaults; unknown keys and bad values raise ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
  void validate() const;
  // SHA-256 of the canonical JSON form, hex encoded.
  std::string digest() const;
};

// k is admissible for n when e^{(log log n)^2} <= t_k <= n / log n.
bool in_window(double n, int k);
// All admissible k for n.
std::vector<int> window_annuli(double n);

std::string sha256_hex(const std::string& bytes);

}  // namespace rcm
