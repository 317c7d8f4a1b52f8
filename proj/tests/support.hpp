#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <random>
#include <string>

#include "netres/laplacian.hpp"
#include "netres/netlist.hpp"

namespace netres::testing {

std::string fixture_path(const std::string& name);
std::string read_file(const std::string& path);

// Parse, merge and stamp a netlist fixture.
Laplacian load_netlist_fixture(const std::string& name);

// Connected resistor mesh on n nodes (random spanning tree plus about n extra
// edges, resistances log-uniform in [10, 1e4] ohm) with up to `max_vccs`
// VCCSs of either sign, |g| log-uniform in [1e-4, 1e-2] S.
Netlist random_network(std::mt19937_64& rng, std::size_t n, std::size_t max_vccs);

double rel_diff(double a, double b);

// Example 1: R1 = 200, R2 = 4000, G = 0.03.
Eigen::MatrixXd example1_matrix();
// Example 2: R = 1, G = 2.
Eigen::MatrixXd example2_matrix();

}  // namespace netres::testing
