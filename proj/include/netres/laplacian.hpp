#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "netres/netlist.hpp"
#include "netres/report.hpp"

namespace netres {

// Dense nodal conductance matrix (siemens) over every node, ground included.
struct Laplacian {
  Eigen::MatrixXd matrix;
  NodeMap nodes;

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

struct ValidationReport {
  double row_sum_max_abs = 0.0;
  double col_sum_max_abs = 0.0;
  double tolerance = 0.0;  // N * eps * max|L_ij|
  bool is_symmetric = false;
  std::vector<Finding> findings;

  // Row or column sums beyond 1e6 * tolerance: not a Kirchhoff Laplacian.
  bool hard_failure() const { return has_errors(findings); }
};

// N * machine-epsilon * max-abs-entry.
double stamp_tolerance(const Eigen::MatrixXd& matrix);

// Row/column sums past this multiple of the stamp tolerance are fatal.
inline constexpr double kHardFailureFactor = 1e6;

Laplacian zero_laplacian(NodeMap nodes);

void stamp_resistor(Laplacian& lap, std::size_t i, std::size_t j, double conductance);

// Current g * (V_j - V_j') leaves node k through the source and enters k'.
void stamp_vccs(Laplacian& lap, std::size_t k, std::size_t k_prime, std::size_t j,
                std::size_t j_prime, double g);

struct BuildResult {
  Laplacian laplacian;
  ValidationReport report;
};

// Sums the stamps of every element; MOS devices are expanded first.
// Expects names already canonicalized by apply_merges.
BuildResult build_laplacian(const MergedNetlist& merged);

// Validates a matrix ingested directly (JSON/CSV). Throws Error(Validation)
// on malformed shape or non-finite entries.
Laplacian make_laplacian(Eigen::MatrixXd matrix, NodeMap nodes);

ValidationReport validate(const Laplacian& lap);

}  // namespace netres
