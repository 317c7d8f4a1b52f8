#include "netres/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "netres/error.hpp"

namespace netres {

namespace {

void check_index(const Spectrum& s, std::size_t node) {
  if (node >= s.size()) {
    throw Error(ErrorKind::Domain, "node index " + std::to_string(node) + " out of range for " +
                                       std::to_string(s.size()) + "-node network");
  }
}

std::string pair_label(const Spectrum& s, std::size_t a, std::size_t b) {
  return "(" + s.nodes.name(a) + ", " + s.nodes.name(b) + ")";
}

using PairingVector = Eigen::Matrix<std::complex<long double>, Eigen::Dynamic, 1>;

std::complex<long double> widen(std::complex<double> z) { return {z.real(), z.imag()}; }

PairingVector pairings(const Spectrum& s) {
  return s.left.transpose().cast<std::complex<long double>>()
      .cwiseProduct(s.right.cast<std::complex<long double>>())
      .colwise()
      .sum()
      .transpose();
}

ResistanceResult evaluate(const Spectrum& spectrum, const PairingVector& pair, std::size_t alpha,
                          std::size_t beta, const ResistanceOptions& options) {
  check_index(spectrum, alpha);
  check_index(spectrum, beta);
  if (alpha == beta) {
    throw Error(ErrorKind::Domain, "two-point resistance needs distinct nodes, got " +
                                       spectrum.nodes.name(alpha) + " twice");
  }
  const auto a = static_cast<Eigen::Index>(alpha);
  const auto b = static_cast<Eigen::Index>(beta);

  // Summed in extended precision; the terms can cancel heavily.
  ResistanceResult result;
  std::complex<long double> sum = 0.0L;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    if (i == spectrum.zero_index) continue;
    const auto k = static_cast<Eigen::Index>(i);
    const auto left_diff = widen(spectrum.left(k, a)) - widen(spectrum.left(k, b));
    const auto right_diff = widen(spectrum.right(a, k)) - widen(spectrum.right(b, k));
    const auto term = left_diff * right_diff / (widen(spectrum.eigenvalues(k)) * pair(k));
    sum += term;
    if (options.keep_terms) result.terms.emplace_back(term);
  }
  result.value = static_cast<double>(sum.real());
  result.imag_residual = static_cast<double>(std::abs(sum.imag()));
  if (result.imag_residual > real_tolerance(result.value)) {
    std::ostringstream msg;
    msg << "resistance " << pair_label(spectrum, alpha, beta) << " has imaginary residue "
        << result.imag_residual << " (value " << result.value << ", tolerance "
        << real_tolerance(result.value) << ")";
    throw Error(ErrorKind::NonReal, msg.str());
  }
  return result;
}

std::complex<double> green_entry(const Spectrum& spectrum, const PairingVector& pair,
                                 double epsilon, std::size_t alpha, std::size_t beta) {
  check_index(spectrum, alpha);
  check_index(spectrum, beta);
  const auto a = static_cast<Eigen::Index>(alpha);
  const auto b = static_cast<Eigen::Index>(beta);
  const double pole_tol =
      std::numeric_limits<double>::epsilon() * spectrum.eigenvalues.cwiseAbs().maxCoeff();

  std::complex<long double> sum = 0.0L;
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const bool zero_mode = i == spectrum.zero_index;
    if (zero_mode && epsilon == 0.0) continue;
    const std::complex<long double> shifted =
        zero_mode ? std::complex<long double>(epsilon) : widen(spectrum.eigenvalues(k)) + static_cast<long double>(epsilon);
    if (std::abs(shifted) <= pole_tol) {
      std::ostringstream msg;
      msg << "epsilon = " << epsilon << " hits the pole at -lambda_" << i;
      throw Error(ErrorKind::Domain, msg.str());
    }
    sum += widen(spectrum.right(a, k)) * widen(spectrum.left(k, b)) / (shifted * pair(k));
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace

double real_tolerance(double value) { return 1e-8 * std::max(1.0, std::abs(value)); }

ResistanceResult two_point_resistance(const Spectrum& spectrum, std::size_t alpha, std::size_t beta,
                                      const ResistanceOptions& options) {
  return evaluate(spectrum, pairings(spectrum), alpha, beta, options);
}

unsigned thread_count_from_env() {
  unsigned requested = 0;
  if (const char* env = std::getenv("NETRES_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) requested = static_cast<unsigned>(v);
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

ResistanceMatrix all_pairs(const Spectrum& spectrum, Layout layout, unsigned threads) {
  const std::size_t n = spectrum.size();
  ResistanceMatrix out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)),
                       spectrum.nodes, layout};
  if (threads == 0) threads = thread_count_from_env();
  threads = static_cast<unsigned>(std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1)));

  // One slot per row; the first failing pair in row-major order is reported.
  std::vector<std::exception_ptr> row_errors(n);
  const PairingVector pair = pairings(spectrum);
  auto work = [&](std::size_t first_row) {
    for (std::size_t a = first_row; a < n; a += threads) {
      for (std::size_t b = a + 1; b < n; ++b) {
        try {
          out.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
              evaluate(spectrum, pair, a, b, {}).value;
        } catch (const Error& e) {
          row_errors[a] = std::make_exception_ptr(
              Error(e.kind(), "pair " + pair_label(spectrum, a, b) + ": " + e.what()));
          break;
        }
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
  }
  for (const auto& err : row_errors) {
    if (err) std::rethrow_exception(err);
  }

  if (layout == Layout::Symmetric) {
    out.values.triangularView<Eigen::StrictlyLower>() = out.values.transpose();
  }
  return out;
}

std::complex<double> greens_function(const Spectrum& spectrum, double epsilon, std::size_t alpha,
                                     std::size_t beta) {
  return green_entry(spectrum, pairings(spectrum), epsilon, alpha, beta);
}

Eigen::MatrixXcd greens_matrix(const Spectrum& spectrum, double epsilon) {
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  const PairingVector pair = pairings(spectrum);
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      g(a, b) = green_entry(spectrum, pair, epsilon, static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
  }
  return g;
}

}  // namespace netres
