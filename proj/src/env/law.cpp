#include "rcm/env/law.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rcm/error.hpp"

namespace rcm {

ConductanceLaw::ConductanceLaw(std::string id, std::vector<Atom> atoms)
    : id_(std::move(id)), atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ConfigError("law '" + id_ + "' has no atoms");
  double total = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!(a.value > 0 && a.value <= 1))
      throw ConfigError("law '" + id_ + "': atom value " + std::to_string(a.value) + " outside (0,1]");
    if (!(a.prob >= 0 && a.prob <= 1))
      throw ConfigError("law '" + id_ + "': atom probability outside [0,1]");
    if (i > 0 && !(a.value < atoms_[i - 1].value))
      throw ConfigError("law '" + id_ + "': atom values must be strictly decreasing");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ConfigError("law '" + id_ + "': probabilities sum to " + std::to_string(total));
  double c = 0;
  for (const Atom& a : atoms_) {
    c += a.prob;
    cdf_.push_back(c);
  }
  cdf_.back() = 1.0;
}

ConductanceLaw ConductanceLaw::constant(double value) {
  return ConductanceLaw("const", {{value, 1.0}});
}

ConductanceLaw ConductanceLaw::two_atom(double weak_value, double weak_prob) {
  std::ostringstream id;
  id << "two_atom_w" << weak_value << "_p" << weak_prob;
  return ConductanceLaw(id.str(), {{1.0, 1.0 - weak_prob}, {weak_value, weak_prob}});
}

double ConductanceLaw::prob_in(double lo, double hi) const {
  double p = 0;
  for (const Atom& a : atoms_)
    if (a.value >= lo && a.value <= hi) p += a.prob;
  return p;
}

double ConductanceLaw::prob_at_least(double lo) const { return prob_in(lo, 1.0); }

nlohmann::json ConductanceLaw::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const Atom& a : atoms_) atoms.push_back({a.value, a.prob});
  return {{"id", id_}, {"atoms", atoms}};
}

ConductanceLaw ConductanceLaw::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("law must be a JSON object");
  if (j.contains("family")) {
    if (j.at("family") != "theorem1") throw ConfigError("unknown law family");
    int d = j.value("d", 4);
    return theorem1_law(j, d).law;
  }
  if (!j.contains("atoms")) throw ConfigError("law needs 'atoms' or 'family'");
  std::vector<Atom> atoms;
  for (const auto& a : j.at("atoms")) {
    if (!a.is_array() || a.size() != 2) throw ConfigError("atom must be [value, prob]");
    atoms.push_back({a[0].get<double>(), a[1].get<double>()});
  }
  return ConductanceLaw(j.value("id", std::string("law")), std::move(atoms));
}

ConductanceLaw ConductanceLaw::load(const std::string& path_or_json) {
  try {
    if (!path_or_json.empty() && path_or_json.front() == '{')
      return from_json(nlohmann::json::parse(path_or_json));
    std::ifstream in(path_or_json);
    if (!in) throw ConfigError("cannot open law file " + path_or_json);
    return from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("law parse error: ") + e.what());
  }
}

double theta(int d) {
  require(d >= 1, "dimension must be positive");
  return 1.0 / (2.0 * (4.0 * d - 2.0));
}

double rho_n(const ConductanceLaw& law, double n, int d) {
  require(n >= 4, "rho_n needs n >= 4 so that the window [1/n, 2/n] lies below 1/2");
  require(d >= 1, "dimension must be positive");
  return law.prob_at_least(0.5) * std::pow(law.prob_in(1.0 / n, 2.0 / n), 4 * d - 2);
}

namespace {

std::vector<double> eval_n_seq(const nlohmann::json& s) {
  std::vector<double> out;
  std::string kind = s.value("kind", "geometric");
  if (kind == "geometric") {
    double base = s.value("base", 4.0);
    int levels = s.value("levels", 3);
    for (int l = 1; l <= levels; ++l) out.push_back(std::pow(base, l));
  } else if (kind == "table") {
    out = s.at("values").get<std::vector<double>>();
  } else {
    throw ConfigError("unknown n_seq kind: " + kind);
  }
  return out;
}

double eval_lambda(const nlohmann::json& s, double n, std::size_t level) {
  std::string kind = s.value("kind", "loglog");
  if (kind == "loglog") return std::log(std::log(std::max(n, 16.0)));
  if (kind == "table") return s.at("values").at(level).get<double>();
  throw ConfigError("unknown lambda kind: " + kind);
}

}  // namespace

Theorem1Law theorem1_law(const nlohmann::json& spec, int d) {
  Theorem1Law out;
  nlohmann::json ns = spec.value("n_seq", nlohmann::json{{"kind", "geometric"}});
  nlohmann::json ls = spec.value("lambda", nlohmann::json{{"kind", "loglog"}});
  out.n_seq = eval_n_seq(ns);
  if (out.n_seq.empty()) throw ConfigError("theorem1 law needs at least one level");
  const double th = theta(d);
  std::vector<Atom> atoms{{1.0, 0.0}};
  double mass = 0;
  std::vector<std::string> warnings;
  for (std::size_t l = 0; l < out.n_seq.size(); ++l) {
    double n = out.n_seq[l];
    if (n < 4 || (l > 0 && n <= out.n_seq[l - 1]))
      throw ConfigError("theorem1 n_seq must be increasing with n >= 4");
    double lam = eval_lambda(ls, n, l);
    if (!(lam > 1)) throw ConfigError("theorem1 lambda must exceed 1");
    out.lambda.push_back(lam);
    double p = std::pow(lam, -th);
    mass += p;
    atoms.push_back({1.0 / n, p});
  }
  if (mass > 0.5)
    throw ConfigError("theorem1 law: sum of lambda^(-theta) is " + std::to_string(mass) + " > 1/2");
  for (std::size_t l = 1; l < out.n_seq.size(); ++l) {
    double prev = std::log(out.n_seq[l - 1]) / std::sqrt(out.lambda[l - 1]);
    double cur = std::log(out.n_seq[l]) / std::sqrt(out.lambda[l]);
    if (!(cur > prev))
      warnings.push_back("lambda^(-1/2) log n is not increasing along n_seq at level " + std::to_string(l + 1));
  }
  atoms[0].prob = 1.0 - mass;
  out.law = ConductanceLaw(spec.value("id", std::string("theorem1")), std::move(atoms));
  out.law.warnings_ = warnings;
  return out;
}

}  // namespace rcm
