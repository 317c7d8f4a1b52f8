#include <doctest.h>

#include <nlohmann/json.hpp>

#include "netres/error.hpp"
#include "netres/io.hpp"
#include "netres/resistance.hpp"
#include "support.hpp"

using namespace netres;

TEST_CASE("matrix JSON and CSV ingestion") {
  const Laplacian lap = testing::load_netlist_fixture("opamp.net");

  SUBCASE("JSON preserves every bit") {
    const Laplacian back = read_matrix_json(write_matrix_json(lap));
    CHECK(back.matrix == lap.matrix);
    CHECK(back.nodes.names() == lap.nodes.names());
  }
  SUBCASE("CSV preserves every bit") {
    const Laplacian back = read_matrix_csv(write_matrix_csv(lap));
    CHECK(back.matrix == lap.matrix);
    CHECK(back.nodes.names() == lap.nodes.names());
  }
  SUBCASE("hand-written CSV with spaces") {
    const Laplacian m = read_matrix_csv("a, b\n 2, -2\n-2 , 2\n\n");
    CHECK(m.nodes.names() == std::vector<std::string>{"a", "b"});
    CHECK(m.matrix(1, 0) == -2.0);
  }
}

TEST_CASE("malformed matrix input") {
  CHECK_THROWS_AS(read_matrix_json("{"), ParseError);
  CHECK_THROWS_AS(read_matrix_json(R"({"nodes": ["a"]})"), ParseError);
  CHECK_THROWS_AS(read_matrix_json(R"({"nodes": ["a","b"], "matrix": [[1,-1],[-1]]})"), ParseError);
  CHECK_THROWS_AS(read_matrix_json(R"({"nodes": ["a","b"], "matrix": [[1,"x"],[-1,1]]})"), ParseError);
  CHECK_THROWS_AS(read_matrix_json(R"({"nodes": ["a"], "matrix": [[1,-1],[-1,1]]})"), Error);
  CHECK_THROWS_AS(read_matrix_json(R"({"nodes": ["a","a"], "matrix": [[1,-1],[-1,1]]})"), Error);
  CHECK_THROWS_AS(read_matrix_csv("a,b\n1,x\n-1,1\n"), ParseError);
  CHECK_THROWS_AS(read_matrix_csv("a,b\n1,-1\n"), ParseError);
  CHECK_THROWS_AS(read_matrix_csv(""), ParseError);
}

TEST_CASE("seven significant digit formatting") {
  CHECK(format_sci(9276.302) == "9.276302E+03");
  CHECK(format_sci(1847.0624) == "1.847062E+03");
  CHECK(format_sci(0.5) == "5.000000E-01");
  CHECK(format_sci(-4.2e-19) == "-4.200000E-19");
}

TEST_CASE("resistance matrix text layout") {
  ResistanceMatrix r{Eigen::MatrixXd::Zero(3, 3), NodeMap({"a", "b", "c"}), Layout::UpperTriangular};
  r.values(0, 1) = 1.5;
  r.values(0, 2) = 200;
  r.values(1, 2) = 38.2716;
  const std::string want =
      "# nodes: a b c\n"
      "            0  1.500000E+00  2.000000E+02\n"
      "            0             0  3.827160E+01\n"
      "            0             0             0\n";
  CHECK(write_resistance_text(r) == want);

  const auto doc = nlohmann::json::parse(write_resistance_json(r));
  CHECK(doc["layout"] == "upper");
  CHECK(doc["resistance"][0][2].get<double>() == 200.0);
  CHECK(write_resistance_csv(r).rfind("node,a,b,c\na,0,1.5,200\n", 0) == 0);
}

TEST_CASE("spectrum JSON export") {
  Eigen::VectorXcd values(2);
  values << 0.0, 2.0;
  Eigen::MatrixXcd right(2, 2);
  right << 1, 1, 1, -1;
  Eigen::MatrixXcd left = right.inverse();
  const Spectrum s = make_spectrum(values, right, left, NodeMap({"p", "q"}));
  const auto doc = nlohmann::json::parse(write_spectrum_json(s));
  CHECK(doc["zero_index"] == 0);
  CHECK(doc["eigenvalues"][1][0].get<double>() == 2.0);
  CHECK(doc["eigenvalues"][1][1].get<double>() == 0.0);
  CHECK(doc["right"][1][1][0].get<double>() == -1.0);
  CHECK(doc["left"][0][0][0].get<double>() == 0.5);
  CHECK(doc["nodes"][1] == "q");
}
