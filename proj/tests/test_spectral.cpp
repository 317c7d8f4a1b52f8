#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "netres/error.hpp"
#include "netres/io.hpp"
#include "netres/spectral.hpp"
#include "support.hpp"

using namespace netres;

namespace {

Spectrum spectrum_of(const Eigen::MatrixXd& m) {
  return eigendecompose(make_laplacian(m, NodeMap::numbered(static_cast<std::size_t>(m.rows()))));
}

std::vector<double> sorted_real(const Eigen::VectorXcd& v) {
  std::vector<double> out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i).real());
  std::sort(out.begin(), out.end());
  return out;
}

SpectralFailure failure_of(const Laplacian& lap) {
  try {
    eigendecompose(lap);
  } catch (const SpectralError& e) {
    return e.failure();
  }
  FAIL("expected a SpectralError");
  return SpectralFailure::NoZeroMode;
}

// Hand-picked integer eigenvectors for the complete-graph example.
// Rows of `left` are phi_i*, columns of `right` are psi_i.
Spectrum example2_hand_spectrum() {
  Eigen::MatrixXcd left_t(4, 4);
  left_t << 1, -1, 1, 1,
            1, -1, -1, 0,
            1, 1, 0, 0,
            1, 1, 0, -1;
  Eigen::MatrixXcd right(4, 4);
  right << 1, 1, 1, 0,
           1, 1, -1, 0,
           1, -3, -1, 1,
           1, 1, 1, -1;
  Eigen::VectorXcd values(4);
  values << 0, 4, 4, 6;
  return make_spectrum(values, right, left_t.transpose(), NodeMap::numbered(4));
}

}  // namespace

TEST_CASE("bridge eigenvalues are 0, 2c1, 4c1, 2c1+2c2+G") {
  const Spectrum s = spectrum_of(testing::example1_matrix());
  CHECK(s.zero_index == 0);
  CHECK(std::abs(s.eigenvalues(0)) <= zero_tolerance(s.eigenvalues));
  const std::vector<double> want{0.01, 0.02, 0.0405};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(s.eigenvalues(static_cast<Eigen::Index>(i + 1)).real() == doctest::Approx(want[i]).epsilon(1e-12));
    CHECK(s.eigenvalues(static_cast<Eigen::Index>(i + 1)).imag() == 0.0);
  }
}

TEST_CASE("complete-graph example keeps a full eigenspace for the double eigenvalue") {
  const Spectrum s = spectrum_of(testing::example2_matrix());
  const auto values = sorted_real(s.eigenvalues);
  CHECK(values[0] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(values[1] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(values[2] == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(values[3] == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(s.condition < 100.0);
  CHECK(verify_biorthogonality(s, biorth_tolerance(4)).ok());

  const auto zero = verify_zero_mode(s);
  CHECK(zero.ok());
  CHECK(zero.zero_count == 1);
  CHECK(zero.right_residual <= biorth_tolerance(4));
}

TEST_CASE("op-amp eigenvalues match the reference values") {
  const Spectrum s = eigendecompose(testing::load_netlist_fixture("opamp.net"));
  const std::vector<double> reference{1.617872E-04, 2.819672E-03, 8.008586E-03, 8.402968E-03};
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const auto v = s.eigenvalues(static_cast<Eigen::Index>(i + 1));
    CHECK(v.imag() == 0.0);
    CHECK(std::abs(v.real() - reference[i]) <= 1e-6 * reference[i]);
  }
  SUBCASE("zero mode is 1/sqrt(5) in every entry") {
    const auto report = verify_zero_mode(s);
    CHECK(report.ok());
    for (Eigen::Index k = 0; k < 5; ++k) {
      CHECK(std::abs(s.right(k, 0)) == doctest::Approx(0.447214).epsilon(1e-6));
    }
  }
}

TEST_CASE("eigendecompose failure modes") {
  SUBCASE("two disjoint resistors give two zero modes") {
    CHECK(failure_of(testing::load_netlist_fixture("disconnected.net")) == SpectralFailure::ZeroModeNotSimple);
  }
  SUBCASE("Jordan block makes the eigenvector matrix singular") {
    const Laplacian lap = read_matrix_json(testing::read_file(testing::fixture_path("defective.json")));
    CHECK_FALSE(validate(lap).hard_failure());
    CHECK(failure_of(lap) == SpectralFailure::NotDiagonalizable);
  }
  SUBCASE("no zero eigenvalue") {
    Eigen::Matrix2d m;
    m << 1, 0, 0, 2;
    CHECK(failure_of(make_laplacian(m, NodeMap::numbered(2))) == SpectralFailure::NoZeroMode);
  }
  SUBCASE("explicit zero tolerance override") {
    // 1e-3 is far above the default tolerance, so the small eigenvalue counts as zero too.
    Eigen::MatrixXd m(3, 3);
    m << 1e-3, -1e-3, 0, -1e-3, 1e-3 + 1, -1, 0, -1, 1;
    const Laplacian lap = make_laplacian(m, NodeMap::numbered(3));
    CHECK_NOTHROW(eigendecompose(lap));
    CHECK_THROWS_AS(eigendecompose(lap, SpectralOptions{1e-2}), SpectralError);
  }
}

TEST_CASE("hand-built eigenvectors from the complete-graph example") {
  const Spectrum s = example2_hand_spectrum();
  CHECK(s.zero_index == 0);
  const auto raw = verify_biorthogonality(s, biorth_tolerance(4));
  CHECK(raw.max_off_diagonal == 0.0);
  CHECK(raw.max_diagonal_deviation == doctest::Approx(5.0));  // pairing of the -4 mode
  CHECK_FALSE(raw.ok());
  CHECK(s.pairing(0) == std::complex<double>(4.0));
  CHECK(s.pairing(1) == std::complex<double>(-4.0));
  CHECK(s.pairing(2) == std::complex<double>(2.0));
  CHECK(s.pairing(3) == std::complex<double>(1.0));

  const Spectrum n = normalize(s);
  CHECK(verify_biorthogonality(n, biorth_tolerance(4)).ok());
  CHECK(verify_zero_mode(n).ok());
}

TEST_CASE("perturbed right eigenvectors are flagged") {
  Spectrum s = spectrum_of(testing::example1_matrix());
  REQUIRE(verify_biorthogonality(s, biorth_tolerance(4)).ok());
  s.right(1, 2) += 1e-3;
  const auto report = verify_biorthogonality(s, biorth_tolerance(4));
  CHECK_FALSE(report.ok());
  CHECK(report.max_off_diagonal > 1e-5);
}

TEST_CASE("complex eigenvalues come in adjacent conjugate pairs") {
  const Spectrum s = eigendecompose(testing::load_netlist_fixture("rotor.net"));
  REQUIRE(s.size() == 3);
  CHECK(std::abs(s.eigenvalues(1).imag()) > 1.0);
  CHECK(s.eigenvalues(1) == std::conj(s.eigenvalues(2)));
  CHECK(s.eigenvalues(1).imag() < 0.0);
  CHECK((s.right.col(1) - s.right.col(2).conjugate()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(verify_biorthogonality(s, biorth_tolerance(3)).ok());
  CHECK(verify_zero_mode(s).ok());
}

TEST_CASE("property: reconstruction and biorthogonality on random networks") {
  std::mt19937_64 rng(21);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial) % 40;
    const Laplacian lap = build_laplacian(apply_merges(testing::random_network(rng, n, n / 4))).laplacian;
    Spectrum s;
    try {
      s = eigendecompose(lap);
    } catch (const SpectralError&) {
      continue;
    }
    ++checked;
    const Eigen::MatrixXcd rebuilt = s.right * s.eigenvalues.asDiagonal() * s.left;
    const double scale = lap.matrix.cwiseAbs().maxCoeff();
    CHECK((rebuilt - lap.matrix.cast<std::complex<double>>()).cwiseAbs().maxCoeff() <=
          10 * static_cast<double>(n) * eps * scale * s.condition);
    CHECK(verify_biorthogonality(s, biorth_tolerance(n)).ok());
    CHECK(verify_zero_mode(s).ok());
  }
  CHECK(checked >= 90);
}

TEST_CASE("property: eigenvalues are invariant under node relabelling") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial) % 15;
    Netlist net = testing::random_network(rng, n, n / 4);
    const Laplacian base = build_laplacian(apply_merges(net)).laplacian;
    std::vector<std::string> order = base.nodes.names();
    std::shuffle(order.begin(), order.end(), rng);
    net.order = order;
    const Laplacian permuted = build_laplacian(apply_merges(net)).laplacian;

    const Eigen::VectorXcd a = Eigen::EigenSolver<Eigen::MatrixXd>(base.matrix, false).eigenvalues();
    const Eigen::VectorXcd b = Eigen::EigenSolver<Eigen::MatrixXd>(permuted.matrix, false).eigenvalues();
    const double scale = a.cwiseAbs().maxCoeff();
    // Match each eigenvalue of `a` to its nearest unused partner in `b`.
    std::vector<bool> used(static_cast<std::size_t>(b.size()), false);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      Eigen::Index best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < b.size(); ++j) {
        if (!used[static_cast<std::size_t>(j)] && std::abs(a(i) - b(j)) < best_dist) {
          best = j;
          best_dist = std::abs(a(i) - b(j));
        }
      }
      used[static_cast<std::size_t>(best)] = true;
      CHECK(best_dist <= 1e-9 * scale);
    }
  }
}

TEST_CASE("property: scaling L scales the eigenvalues") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Laplacian lap = build_laplacian(apply_merges(testing::random_network(rng, 8, 2))).laplacian;
    Spectrum s;
    try {
      s = eigendecompose(lap);
    } catch (const SpectralError&) {
      continue;
    }
    for (double c : {0.5, 2.0, 10.0}) {
      const Spectrum scaled = eigendecompose(make_laplacian(c * lap.matrix, lap.nodes));
      for (Eigen::Index i = 1; i < s.eigenvalues.size(); ++i) {
        CHECK(std::abs(scaled.eigenvalues(i) - c * s.eigenvalues(i)) <= 1e-9 * c * s.eigenvalues.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("property: symmetric Laplacians give real spectra with left = right transpose up to scale") {
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial);
    const Spectrum s = eigendecompose(build_laplacian(apply_merges(testing::random_network(rng, n, 0))).laplacian);
    CHECK(s.eigenvalues.imag().cwiseAbs().maxCoeff() == 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const Eigen::VectorXcd phi = s.left.row(k).transpose();
      const Eigen::VectorXcd psi = s.right.col(k);
      const double cosine = std::abs(phi.dot(psi.conjugate())) / (phi.norm() * psi.norm());
      CHECK(cosine == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}
