#include "gie/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gie::config {

namespace {

const std::set<std::string> kKnownKeys = {
    "species",      "atom_mass_kg", "atoms",        "a_m",
    "c_m",          "d_m",          "time_s",       "reps",
    "setups",       "squeeze_db",   "a_s_m",        "scheme",
    "kappa_d",      "loss_L_cm6_s", "decay_factor", "quad_rel_tol",
    "phases.phi",   "phases.phi_prime",
    "phases.close", "phases.close_prime"};

const std::vector<std::string> kRequiredKeys = {
    "species", "atoms", "a_m", "c_m", "d_m", "time_s", "reps"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key +
                                "' has a non-numeric value '" + value + "'");
  }
}

std::uint64_t to_count(const std::string& key, const std::string& value) {
  double v = to_double(key, value);
  if (v < 0 || v != v || v > 1.8e19 || std::fmod(v, 1.0) != 0.0)
    throw std::invalid_argument("config key '" + key +
                                "' must be a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

KeyValues parse_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " is not of the form key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!kKnownKeys.count(key))
      throw std::invalid_argument("unknown config key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

KeyValues parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides) {
  for (const auto& ov : overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("override '" + ov +
                                  "' is not of the form key=value");
    std::string key = trim(ov.substr(0, eq));
    std::string value = trim(ov.substr(eq + 1));
    if (!kKnownKeys.count(key))
      throw std::invalid_argument("unknown config key '" + key + "'");
    kv[key] = value;
  }
}

experiment::ExperimentConfig build(const KeyValues& kv) {
  std::string missing;
  for (const auto& req : kRequiredKeys)
    if (!kv.count(req)) missing += missing.empty() ? req : ", " + req;
  if (!missing.empty())
    throw std::invalid_argument("missing required config keys: " + missing);

  experiment::ExperimentConfig cfg;
  const std::string species = kv.at("species");
  if (species == "custom") {
    if (!kv.count("atom_mass_kg"))
      throw std::invalid_argument(
          "species 'custom' requires the atom_mass_kg key");
    cfg.species =
        experiment::Species{"custom", to_double("atom_mass_kg",
                                                kv.at("atom_mass_kg")),
                            0.0};
  } else {
    cfg.species = experiment::species_by_name(species);
    if (kv.count("atom_mass_kg"))
      cfg.species.atom_mass_kg =
          to_double("atom_mass_kg", kv.at("atom_mass_kg"));
  }
  cfg.atoms = to_double("atoms", kv.at("atoms"));
  cfg.geom.a = to_double("a_m", kv.at("a_m"));
  cfg.geom.c = to_double("c_m", kv.at("c_m"));
  cfg.geom.d = to_double("d_m", kv.at("d_m"));
  cfg.time_s = to_double("time_s", kv.at("time_s"));
  cfg.reps = to_count("reps", kv.at("reps"));
  if (kv.count("setups")) cfg.setups = to_count("setups", kv.at("setups"));
  if (kv.count("squeeze_db"))
    cfg.squeeze_db = to_double("squeeze_db", kv.at("squeeze_db"));
  if (kv.count("a_s_m")) cfg.a_s_m = to_double("a_s_m", kv.at("a_s_m"));
  if (kv.count("kappa_d"))
    cfg.kappa_d = to_double("kappa_d", kv.at("kappa_d"));
  if (kv.count("loss_L_cm6_s"))
    cfg.loss_L_cm6_s = to_double("loss_L_cm6_s", kv.at("loss_L_cm6_s"));
  if (kv.count("decay_factor"))
    cfg.decay_factor = to_double("decay_factor", kv.at("decay_factor"));
  if (kv.count("quad_rel_tol"))
    cfg.quad.rel_tol = to_double("quad_rel_tol", kv.at("quad_rel_tol"));
  if (kv.count("scheme")) {
    const std::string& s = kv.at("scheme");
    if (s == "one-open")
      cfg.scheme = experiment::Scheme::OneOpen;
    else if (s == "both-closed")
      cfg.scheme = experiment::Scheme::BothClosed;
    else
      throw std::invalid_argument(
          "config key 'scheme' must be one-open or both-closed, got '" + s +
          "'");
  }
  if (cfg.scheme == experiment::Scheme::BothClosed)
    cfg.phases = fock::PhaseConfig{0.0, 0.0, 0.0, 0.0};
  if (kv.count("phases.phi"))
    cfg.phases.phi = to_double("phases.phi", kv.at("phases.phi"));
  if (kv.count("phases.phi_prime"))
    cfg.phases.phi_prime =
        to_double("phases.phi_prime", kv.at("phases.phi_prime"));
  if (kv.count("phases.close"))
    cfg.phases.close = to_double("phases.close", kv.at("phases.close"));
  if (kv.count("phases.close_prime"))
    cfg.phases.close_prime =
        to_double("phases.close_prime", kv.at("phases.close_prime"));
  cfg.validate();
  return cfg;
}

std::string echo(const experiment::ExperimentConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "species = " << cfg.species.name << "\n"
      << "atom_mass_kg = " << cfg.species.atom_mass_kg << "\n"
      << "atoms = " << cfg.atoms << "\n"
      << "a_m = " << cfg.geom.a << "\n"
      << "c_m = " << cfg.geom.c << "\n"
      << "d_m = " << cfg.geom.d << "\n"
      << "time_s = " << cfg.time_s << "\n"
      << "reps = " << cfg.reps << "\n"
      << "setups = " << cfg.setups << "\n"
      << "squeeze_db = " << cfg.squeeze_db << "\n"
      << "a_s_m = " << cfg.a_s_m << "\n"
      << "kappa_d = " << cfg.kappa_d << "\n"
      << "loss_L_cm6_s = " << cfg.loss_L() << "\n"
      << "decay_factor = " << cfg.decay_factor << "\n"
      << "quad_rel_tol = " << cfg.quad.rel_tol << "\n"
      << "scheme = "
      << (cfg.scheme == experiment::Scheme::OneOpen ? "one-open"
                                                    : "both-closed")
      << "\n"
      << "phases.phi = " << cfg.phases.phi << "\n"
      << "phases.phi_prime = " << cfg.phases.phi_prime << "\n"
      << "phases.close = " << cfg.phases.close << "\n"
      << "phases.close_prime = " << cfg.phases.close_prime << "\n";
  return out.str();
}

}  // namespace gie::config
