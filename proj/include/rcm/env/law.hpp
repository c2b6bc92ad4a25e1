#pragma once

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rcm {

struct Theorem1Law;

struct Atom {
  double value;
  double prob;
};

// Atomic i.i.d. conductance law on (0, 1]. Atom values are strictly decreasing.
class ConductanceLaw {
 public:
  ConductanceLaw() = default;
  ConductanceLaw(std::string id, std::vector<Atom> atoms);

  static ConductanceLaw constant(double value = 1.0);
  static ConductanceLaw two_atom(double weak_value, double weak_prob);
  static ConductanceLaw from_json(const nlohmann::json& j);
  // Accepts a path to a JSON file, or an inline JSON object starting with '{'.
  static ConductanceLaw load(const std::string& path_or_json);
  nlohmann::json to_json() const;

  const std::string& id() const { return id_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  bool degenerate() const { return atoms_.size() == 1; }
  double min_value() const { return atoms_.back().value; }

  // Inverse-CDF draw from u in [0, 1).
  double sample(double u) const {
    for (std::size_t i = 0; i + 1 < cdf_.size(); ++i)
      if (u < cdf_[i]) return atoms_[i].value;
    return atoms_.back().value;
  }

  // P(lo <= omega <= hi).
  double prob_in(double lo, double hi) const;
  double prob_at_least(double lo) const;

  // Non-fatal remarks collected at load time.
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend Theorem1Law theorem1_law(const nlohmann::json& spec, int d);

  std::string id_;
  std::vector<Atom> atoms_;
  std::vector<double> cdf_;
  std::vector<std::string> warnings_;
};

// rho_n = P(omega >= 1/2) * P(1/n <= omega <= 2/n)^(4d-2).
double rho_n(const ConductanceLaw& law, double n, int d);
double theta(int d);

// Law with atoms {1} and {1/n_l} of mass lambda_{n_l}^(-theta).
struct Theorem1Law {
  std::vector<double> n_seq;
  std::vector<double> lambda;
  ConductanceLaw law;
};
Theorem1Law theorem1_law(const nlohmann::json& spec, int d);

}  // namespace rcm
