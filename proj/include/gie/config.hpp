#pragma once

#include <map>
#include <string>
#include <vector>

#include "gie/experiment.hpp"

namespace gie::config {

// Flat key-value experiment configuration. Lines are `key = value`, `#`
// starts a comment. All physical quantities are SI with the unit in the key
// name. Unknown keys are rejected by name.
//
// Keys: species, atom_mass_kg, atoms, a_m, c_m, d_m, time_s, reps, setups,
// squeeze_db, a_s_m, scheme, kappa_d, loss_L_cm6_s, decay_factor,
// quad_rel_tol, phases.phi, phases.phi_prime, phases.close,
// phases.close_prime.

using KeyValues = std::map<std::string, std::string>;

KeyValues parse_file(const std::string& path);
KeyValues parse_text(const std::string& text);

// `key=value` strings applied on top of file values.
void apply_overrides(KeyValues& kv, const std::vector<std::string>& overrides);

experiment::ExperimentConfig build(const KeyValues& kv);

// Fully resolved configuration, echoed for provenance.
std::string echo(const experiment::ExperimentConfig& cfg);

}  // namespace gie::config
