#include "netres/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "netres/error.hpp"

namespace netres {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using MatrixXcld = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, Eigen::Dynamic>;

double condition_number(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

std::vector<std::size_t> zero_candidates(const Eigen::VectorXcd& eigenvalues, double tol) {
  std::vector<std::size_t> hits;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    if (std::abs(eigenvalues(i)) <= tol) hits.push_back(static_cast<std::size_t>(i));
  }
  return hits;
}

double resolve_zero_tolerance(const Eigen::VectorXcd& eigenvalues, const SpectralOptions& options) {
  return options.zero_tolerance ? *options.zero_tolerance : zero_tolerance(eigenvalues);
}

std::size_t locate_zero_mode(const Eigen::VectorXcd& eigenvalues, double tol) {
  auto hits = zero_candidates(eigenvalues, tol);
  if (hits.empty()) {
    std::ostringstream msg;
    msg << "no eigenvalue within zero tolerance " << tol
        << "; matrix is not a valid Kirchhoff Laplacian";
    throw SpectralError(SpectralFailure::NoZeroMode, msg.str());
  }
  if (hits.size() > 1) {
    std::ostringstream msg;
    msg << "zero eigenvalue not simple (multiplicity " << hits.size()
        << "); network is probably disconnected";
    throw SpectralError(SpectralFailure::ZeroModeNotSimple, msg.str());
  }
  return hits.front();
}

template <class Real>
struct SortedEigensystem {
  Eigen::VectorXcd values;
  Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic> vectors;
};

// Eigensystem with the zero mode first, then ascending by (real, imag).
template <class Real>
SortedEigensystem<Real> sorted_eigensystem(const Eigen::MatrixXd& m, const SpectralOptions& options) {
  using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::EigenSolver<Matrix> solver(m.cast<Real>(), /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw SpectralError(SpectralFailure::NotDiagonalizable, "eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd values = solver.eigenvalues().template cast<std::complex<double>>();
  const auto vectors = solver.eigenvectors();
  const std::size_t zero = locate_zero_mode(values, resolve_zero_tolerance(values, options));

  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (a == zero || b == zero) return a == zero && b != zero;
    const auto va = values(static_cast<Eigen::Index>(a));
    const auto vb = values(static_cast<Eigen::Index>(b));
    if (va.real() != vb.real()) return va.real() < vb.real();
    return va.imag() < vb.imag();
  });

  SortedEigensystem<Real> out;
  out.values.resize(m.rows());
  out.vectors.resize(m.rows(), m.cols());
  for (std::size_t i = 0; i < n; ++i) {
    out.values(static_cast<Eigen::Index>(i)) = values(static_cast<Eigen::Index>(order[i]));
    out.vectors.col(static_cast<Eigen::Index>(i)) = vectors.col(static_cast<Eigen::Index>(order[i]));
  }
  return out;
}

// Spread of a vector around its mean, relative to its largest entry.
double ones_residual(const Eigen::VectorXcd& v) {
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return std::numeric_limits<double>::infinity();
  const std::complex<double> mean = v.mean();
  return (v.array() - mean).abs().maxCoeff() / scale;
}

}  // namespace

std::complex<double> Spectrum::pairing(std::size_t i) const {
  const auto k = static_cast<Eigen::Index>(i);
  return left.row(k).transpose().cwiseProduct(right.col(k)).sum();
}

double zero_tolerance(const Eigen::VectorXcd& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  const double scale = eigenvalues.cwiseAbs().maxCoeff();
  const double n = static_cast<double>(eigenvalues.size());
  return std::max(n * kEps, 1e-14) * scale;
}

double biorth_tolerance(std::size_t n) { return 1e3 * static_cast<double>(n) * kEps; }

double max_condition(std::size_t n) { return 1.0 / (static_cast<double>(n) * kEps); }

Spectrum eigendecompose(const Laplacian& lap, const SpectralOptions& options) {
  const std::size_t n = lap.size();
  if (n < 2) throw Error(ErrorKind::Validation, "Laplacian must be at least 2x2");

  // Screening pass in working precision decides diagonalizability.
  const auto screen = sorted_eigensystem<double>(lap.matrix, options);
  const double screen_condition = condition_number(screen.vectors);
  if (!(screen_condition <= max_condition(n))) {
    std::ostringstream msg;
    msg << "eigenvector matrix is numerically singular (cond = " << screen_condition << " > "
        << max_condition(n) << "); Laplacian is not diagonalizable";
    throw SpectralError(SpectralFailure::NotDiagonalizable, msg.str());
  }

  // Stored eigensystem in extended precision: a resistance can be a small
  // difference of much larger per-mode terms, which amplifies eigenvector
  // rounding.
  const auto fine = sorted_eigensystem<long double>(lap.matrix, options);

  Spectrum s;
  s.eigenvalues = fine.values;
  s.right = fine.vectors.template cast<std::complex<double>>();
  s.left = MatrixXcld(fine.vectors.partialPivLu().inverse()).cast<std::complex<double>>();
  s.zero_index = 0;
  s.nodes = lap.nodes;
  s.condition = condition_number(s.right);
  s.normalized = true;
  return s;
}

Spectrum make_spectrum(Eigen::VectorXcd eigenvalues, Eigen::MatrixXcd right,
                       Eigen::MatrixXcd left, NodeMap nodes, const SpectralOptions& options) {
  const auto n = eigenvalues.size();
  if (right.rows() != n || right.cols() != n || left.rows() != n || left.cols() != n) {
    throw Error(ErrorKind::Domain, "eigenvector matrices must be N x N");
  }
  if (nodes.size() == 0) nodes = NodeMap::numbered(static_cast<std::size_t>(n));
  if (nodes.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorKind::Domain, "node map size does not match spectrum");
  }
  Spectrum s;
  s.zero_index = locate_zero_mode(eigenvalues, resolve_zero_tolerance(eigenvalues, options));
  s.eigenvalues = std::move(eigenvalues);
  s.right = std::move(right);
  s.left = std::move(left);
  s.nodes = std::move(nodes);
  s.condition = condition_number(s.right);
  s.normalized = false;
  return s;
}

Spectrum normalize(Spectrum spectrum) {
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const auto p = spectrum.pairing(i);
    if (p == 0.0) throw Error(ErrorKind::Domain, "eigenvector pair " + std::to_string(i) + " has zero pairing");
    spectrum.left.row(static_cast<Eigen::Index>(i)) /= p;
  }
  spectrum.normalized = true;
  return spectrum;
}

BiorthogonalityReport verify_biorthogonality(const Spectrum& spectrum, double tolerance) {
  BiorthogonalityReport report;
  report.tolerance = tolerance;
  const Eigen::MatrixXcd product = spectrum.left * spectrum.right;
  for (Eigen::Index i = 0; i < product.rows(); ++i) {
    for (Eigen::Index j = 0; j < product.cols(); ++j) {
      if (i == j) {
        report.max_diagonal_deviation =
            std::max(report.max_diagonal_deviation, std::abs(product(i, i) - 1.0));
      } else if (std::abs(product(i, j)) > report.max_off_diagonal) {
        report.max_off_diagonal = std::abs(product(i, j));
        report.worst_row = static_cast<std::size_t>(i);
        report.worst_col = static_cast<std::size_t>(j);
      }
    }
  }
  if (report.max_off_diagonal > tolerance) {
    std::ostringstream msg;
    msg << "left/right eigenvectors not biorthogonal: |phi_" << report.worst_row << "* psi_"
        << report.worst_col << "| = " << report.max_off_diagonal << " > " << tolerance;
    report.findings.push_back({Severity::Error, msg.str()});
  }
  if (report.max_diagonal_deviation > tolerance) {
    std::ostringstream msg;
    msg << "pairings not normalized: max |phi_i* psi_i - 1| = " << report.max_diagonal_deviation;
    report.findings.push_back({Severity::Warning, msg.str()});
  }
  return report;
}

ZeroModeReport verify_zero_mode(const Spectrum& spectrum, const SpectralOptions& options) {
  ZeroModeReport report;
  const std::size_t n = spectrum.size();
  report.tolerance = biorth_tolerance(n);
  report.zero_tolerance = resolve_zero_tolerance(spectrum.eigenvalues, options);
  report.zero_count = zero_candidates(spectrum.eigenvalues, report.zero_tolerance).size();
  const auto z = static_cast<Eigen::Index>(spectrum.zero_index);
  report.zero_eigenvalue_abs = std::abs(spectrum.eigenvalues(z));

  if (report.zero_count != 1) {
    report.findings.push_back(
        {Severity::Error, "zero eigenvalue not simple (" + std::to_string(report.zero_count) +
                              " eigenvalues within tolerance)"});
  }
  if (report.zero_eigenvalue_abs > report.zero_tolerance) {
    report.findings.push_back({Severity::Error, "designated zero mode is not within tolerance of 0"});
  }
  report.right_residual = ones_residual(spectrum.right.col(z));
  report.left_residual = ones_residual(spectrum.left.row(z).transpose());
  if (report.right_residual > report.tolerance) {
    std::ostringstream msg;
    msg << "right zero eigenvector deviates from all-ones direction by " << report.right_residual;
    report.findings.push_back({Severity::Error, msg.str()});
  }
  if (report.left_residual > report.tolerance) {
    std::ostringstream msg;
    msg << "left zero eigenvector deviates from all-ones direction by " << report.left_residual;
    report.findings.push_back({Severity::Error, msg.str()});
  }
  return report;
}

}  // namespace netres
