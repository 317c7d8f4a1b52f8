#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace netres::testing {

std::string fixture_path(const std::string& name) { return std::string(NETRES_FIXTURE_DIR) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Laplacian load_netlist_fixture(const std::string& name) {
  return build_laplacian(apply_merges(parse_netlist(read_file(fixture_path(name))))).laplacian;
}

Netlist random_network(std::mt19937_64& rng, std::size_t n, std::size_t max_vccs) {
  auto node = [](std::size_t i) { return "n" + std::to_string(i); };
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::log(lo) + unit(rng) * (std::log(hi) - std::log(lo)));
  };
  auto pick = [&](std::size_t bound) { return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng); };

  Netlist net;
  std::size_t count = 0;
  for (std::size_t i = 1; i < n; ++i) {
    net.elements.push_back(Resistor{"R" + std::to_string(count++), node(i), node(pick(i)), log_uniform(10, 1e4)});
  }
  for (std::size_t e = 0; e < n; ++e) {
    const std::size_t a = pick(n);
    const std::size_t b = pick(n);
    if (a == b) continue;
    net.elements.push_back(Resistor{"R" + std::to_string(count++), node(a), node(b), log_uniform(10, 1e4)});
  }
  const std::size_t vccs = max_vccs == 0 ? 0 : pick(max_vccs + 1);
  for (std::size_t v = 0; v < vccs; ++v) {
    const std::size_t k = pick(n);
    const std::size_t kp = pick(n);
    const std::size_t j = pick(n);
    const std::size_t jp = pick(n);
    if (k == kp || j == jp) continue;
    const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
    net.elements.push_back(
        Vccs{"G" + std::to_string(v), node(k), node(kp), node(j), node(jp), sign * log_uniform(1e-4, 1e-2)});
  }
  return net;
}

double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

Eigen::MatrixXd example1_matrix() {
  const double c1 = 1.0 / 200.0;
  const double c2 = 1.0 / 4000.0;
  const double g = 0.03;
  Eigen::MatrixXd m(4, 4);
  m << 2 * c1, -c1, 0, -c1,
       -c1 + g, 2 * c1 + c2, -c1, -c2 - g,
       0, -c1, 2 * c1, -c1,
       -c1 - g, -c2, -c1, 2 * c1 + c2 + g;
  return m;
}

Eigen::MatrixXd example2_matrix() {
  const double c = 1.0;
  const double g = 2.0;
  Eigen::MatrixXd m(4, 4);
  m << 3 * c, -c, -c, -c,
       -c, 3 * c, -c, -c,
       -c + g, -c, 3 * c, -c - g,
       -c - g, -c, -c, 3 * c + g;
  return m;
}

}  // namespace netres::testing
