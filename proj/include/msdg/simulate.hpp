#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "msdg/pattern.hpp"

namespace msdg {

/// Couple type `target` to type `source`: a fraction rho of the target's
/// points sit at source locations jittered by an isotropic normal of scale
/// sigma (reflected at the window boundary), and their marks are
/// rho * source_mark + sqrt(1-rho^2) * own_noise.
struct CouplingSpec {
  int source = 0;
  int target = 1;
  double rho = 0.0;
  double sigma = 0.0;
};

/// Synthetic pattern generator with a known dependence structure: uniform
/// locations on the unit square, standard normal marks, optional coupled
/// pairs. Draws come from per-(type, role) streams (scheme "mt19937_64
/// splitmix v1"), so adding a type or a coupling never perturbs the draws of
/// other types, and rho = 0 reproduces the independent generator exactly.
struct SimulationSpec {
  int dim = 2;
  int points_per_type = 100;
  std::uint64_t seed = 0;
  std::vector<CouplingSpec> couplings;
  std::vector<std::string> names;  ///< optional; defaults to type_00, type_01, ...
};

void validate_simulation_spec(const SimulationSpec& spec);

/// Generate a pattern honouring any number of couplings.
MarkedPointPattern simulate_pattern(const SimulationSpec& spec);

/// Independent baseline; rejects specs carrying couplings.
MarkedPointPattern simulate_independent(const SimulationSpec& spec);

/// Exactly one coupled pair; rejects anything else.
MarkedPointPattern simulate_coupled_pair(const SimulationSpec& spec);

SimulationSpec read_simulation_spec_json(std::istream& in);
SimulationSpec read_simulation_spec_file(const std::string& path);

}  // namespace msdg
