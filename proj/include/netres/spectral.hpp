#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "netres/laplacian.hpp"
#include "netres/netlist.hpp"
#include "netres/report.hpp"

namespace netres {

// Eigensystem of a Laplacian in the form used by the resistance formula.
//
// Column i of `right` is the right eigenvector psi_i, row i of `left` is the
// left eigenvector phi_i* (so left.row(i) * L = lambda_i * left.row(i)). The
// pairing phi_i* psi_i is whatever the vectors give; eigendecompose() returns
// left = right^-1 so every pairing is 1 and cross pairings vanish.
struct Spectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right;
  Eigen::MatrixXcd left;
  std::size_t zero_index = 0;
  bool normalized = false;
  double condition = 1.0;  // 2-norm condition number of `right`
  NodeMap nodes;

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }

  // phi_i* psi_i, no conjugation.
  std::complex<double> pairing(std::size_t i) const;
};

struct SpectralOptions {
  // Absolute zero-eigenvalue tolerance; default is zero_tolerance().
  std::optional<double> zero_tolerance;
};

// max(N * eps, 1e-14) * max|lambda|.
double zero_tolerance(const Eigen::VectorXcd& eigenvalues);

// 1e3 * N * eps.
double biorth_tolerance(std::size_t n);

// Largest cond(Psi) accepted as diagonalizable: 1 / (N * eps).
double max_condition(std::size_t n);

// Sorted with the zero mode first, then ascending by (real, imag).
// Throws SpectralError when the zero eigenvalue is missing or not simple, or
// when the eigenvector matrix is numerically singular.
Spectrum eigendecompose(const Laplacian& lap, const SpectralOptions& options = {});

// Builds a Spectrum from hand-supplied eigenvectors (any scaling). Locates the
// zero mode but does not reorder or rescale anything.
Spectrum make_spectrum(Eigen::VectorXcd eigenvalues, Eigen::MatrixXcd right,
                       Eigen::MatrixXcd left, NodeMap nodes,
                       const SpectralOptions& options = {});

// Rescales each left row so that phi_i* psi_i = 1.
Spectrum normalize(Spectrum spectrum);

struct BiorthogonalityReport {
  double max_off_diagonal = 0.0;     // max_{i != j} |phi_i* psi_j|
  double max_diagonal_deviation = 0.0;  // max_i |phi_i* psi_i - 1|
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  double tolerance = 0.0;
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
};

BiorthogonalityReport verify_biorthogonality(const Spectrum& spectrum, double tolerance);

struct ZeroModeReport {
  std::size_t zero_count = 0;
  double zero_eigenvalue_abs = 0.0;
  double zero_tolerance = 0.0;
  // max_k |v_k - mean(v)| / max_k |v_k| for the zero-mode vectors.
  double right_residual = 0.0;
  double left_residual = 0.0;
  double tolerance = 0.0;
  std::vector<Finding> findings;

  bool ok() const { return findings.empty(); }
};

ZeroModeReport verify_zero_mode(const Spectrum& spectrum, const SpectralOptions& options = {});

}  // namespace netres
