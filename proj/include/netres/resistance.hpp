#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "netres/netlist.hpp"
#include "netres/spectral.hpp"

namespace netres {

struct ResistanceResult {
  double value = 0.0;          // ohms
  double imag_residual = 0.0;  // |Im| of the discarded imaginary part
  // Per-mode summands in mode order, zero mode excluded. Only filled when
  // ResistanceOptions::keep_terms is set.
  std::vector<std::complex<double>> terms;
};

struct ResistanceOptions {
  bool keep_terms = false;
};

// 1e-8 * max(1, |value|).
double real_tolerance(double value);

// Two-point resistance from left/right eigenvectors:
//
//   R = Re sum_{i != zero} (phi_ia - phi_ib)(psi_ia - psi_ib) / (lambda_i phi_i* psi_i)
//
// The pairing phi_i* psi_i is always evaluated, so any per-mode scaling of
// the eigenvectors gives the same value. Modes are summed in index order.
// Throws Error(Domain) for alpha == beta and Error(NonReal) when the
// imaginary residue exceeds real_tolerance().
ResistanceResult two_point_resistance(const Spectrum& spectrum, std::size_t alpha, std::size_t beta,
                                      const ResistanceOptions& options = {});

enum class Layout { UpperTriangular, Symmetric };

struct ResistanceMatrix {
  Eigen::MatrixXd values;  // diagonal zero; lower triangle zero unless Symmetric
  NodeMap nodes;
  Layout layout = Layout::UpperTriangular;
};

// Reads NETRES_THREADS (0 or unset = hardware concurrency).
unsigned thread_count_from_env();

// Evaluates every pair alpha < beta. Work is split across `threads` workers
// (0 = thread_count_from_env()); the result does not depend on the split.
ResistanceMatrix all_pairs(const Spectrum& spectrum, Layout layout = Layout::UpperTriangular,
                           unsigned threads = 1);

// Green's function of the shifted Laplacian L + eps*I:
//
//   G_ab(eps) = psi_0a phi_0b / (eps phi_0* psi_0)
//             + sum_{i != zero} psi_ia phi_ib / ((lambda_i + eps) phi_i* psi_i)
//
// The zero-mode term equals 1/(N eps) when its vectors are proportional to
// all-ones. For eps == 0 the zero-mode term is omitted, giving the regular
// part g_ab(0). Throws Error(Domain) when eps sits on -lambda_i.
std::complex<double> greens_function(const Spectrum& spectrum, double epsilon, std::size_t alpha,
                                      std::size_t beta);

// Full matrix of greens_function values.
Eigen::MatrixXcd greens_matrix(const Spectrum& spectrum, double epsilon);

}  // namespace netres
