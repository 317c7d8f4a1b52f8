#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "netres/laplacian.hpp"
#include "netres/report.hpp"
#include "netres/resistance.hpp"
#include "netres/spectral.hpp"

namespace netres {

// Current `current` injected at alpha and drawn out at beta.
struct InjectionProblem {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  double current = 1.0;
  // Node held at 0 V; defaults to beta.
  std::optional<std::size_t> ground;
};

// Node potentials for the injection, with the ground node at 0 V. Deletes the
// ground row and column and LU-solves the reduced system.
// Throws Error(Singular) when the reduced matrix is singular, naming the
// number of connected components found in the conductance graph.
Eigen::VectorXd solve_potentials(const Laplacian& lap, const InjectionProblem& problem);

// (V_alpha - V_beta) / I from solve_potentials.
ResistanceResult solve_direct(const Laplacian& lap, const InjectionProblem& problem);

struct ComparisonReport {
  double max_abs_deviation = 0.0;
  double max_rel_deviation = 0.0;
  std::size_t worst_alpha = 0;
  std::size_t worst_beta = 0;
  double spectral_value = 0.0;  // at the worst pair
  double direct_value = 0.0;
  std::vector<Finding> findings;
};

// Every pair through both the spectral formula and the direct solve.
// Relative deviation is |R_s - R_d| / max(|R_s|, |R_d|).
ComparisonReport compare(const Spectrum& spectrum, const Laplacian& lap);

// Connected components of the undirected graph of nonzero off-diagonal
// entries; component id per node.
std::vector<std::size_t> connected_components(const Eigen::MatrixXd& matrix);

}  // namespace netres
