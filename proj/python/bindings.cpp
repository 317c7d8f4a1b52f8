#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <variant>

#include "netres/error.hpp"
#include "netres/io.hpp"
#include "netres/laplacian.hpp"
#include "netres/netlist.hpp"
#include "netres/oracle.hpp"
#include "netres/resistance.hpp"
#include "netres/spectral.hpp"

namespace py = pybind11;
using namespace netres;

namespace {

using NodeRef = std::variant<std::size_t, std::string>;

std::size_t resolve(const NodeMap& nodes, const NodeRef& ref) {
  if (const auto* name = std::get_if<std::string>(&ref)) return nodes.index_of(*name);
  return std::get<std::size_t>(ref);
}

py::list findings_list(const std::vector<Finding>& findings) {
  py::list out;
  for (const auto& f : findings) out.append(py::make_tuple(to_string(f.severity), f.message));
  return out;
}

Laplacian from_netlist(const std::string& text) {
  return build_laplacian(apply_merges(parse_netlist(text))).laplacian;
}

Laplacian from_matrix(const Eigen::MatrixXd& matrix, std::optional<std::vector<std::string>> nodes) {
  NodeMap map = nodes ? NodeMap(*nodes) : NodeMap::numbered(static_cast<std::size_t>(matrix.rows()));
  return make_laplacian(matrix, std::move(map));
}

}  // namespace

PYBIND11_MODULE(_netres, m) {
  m.doc() = "Two-point resistance of networks with non-symmetric Laplacians";

  // Translators run newest first, so the base class goes in first.
  auto base_error = py::register_exception<Error>(m, "NetresError");
  py::register_exception<ParseError>(m, "ParseError", base_error.ptr());
  py::register_exception<SpectralError>(m, "SpectralError", base_error.ptr());

  py::class_<Laplacian>(m, "Laplacian")
      .def_static("from_netlist", &from_netlist, py::arg("text"),
                  "Parse a netlist, apply .short merges and stamp every element.")
      .def_static("from_matrix", &from_matrix, py::arg("matrix"), py::arg("nodes") = std::nullopt)
      .def_static("from_json", [](const std::string& text) { return read_matrix_json(text); })
      .def_static("from_csv", [](const std::string& text) { return read_matrix_csv(text); })
      .def_readonly("matrix", &Laplacian::matrix)
      .def_property_readonly("nodes", [](const Laplacian& l) { return l.nodes.names(); })
      .def("index_of", [](const Laplacian& l, const std::string& name) { return l.nodes.index_of(name); })
      .def("__len__", &Laplacian::size)
      .def("to_json", &write_matrix_json)
      .def("validate", [](const Laplacian& l) {
        const ValidationReport r = validate(l);
        py::dict d;
        d["row_sum_max_abs"] = r.row_sum_max_abs;
        d["col_sum_max_abs"] = r.col_sum_max_abs;
        d["tolerance"] = r.tolerance;
        d["symmetric"] = r.is_symmetric;
        d["hard_failure"] = r.hard_failure();
        d["findings"] = findings_list(r.findings);
        return d;
      });

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def_readonly("right", &Spectrum::right, "Columns are right eigenvectors psi_i.")
      .def_readonly("left", &Spectrum::left, "Rows are left eigenvectors phi_i*.")
      .def_readonly("zero_index", &Spectrum::zero_index)
      .def_readonly("normalized", &Spectrum::normalized)
      .def_readonly("condition", &Spectrum::condition)
      .def_property_readonly("nodes", [](const Spectrum& s) { return s.nodes.names(); })
      .def("pairing", &Spectrum::pairing, py::arg("i"))
      .def("__len__", &Spectrum::size)
      .def("to_json", &write_spectrum_json);

  m.def(
      "eigendecompose",
      [](const Laplacian& lap, std::optional<double> tol_zero) {
        return eigendecompose(lap, SpectralOptions{tol_zero});
      },
      py::arg("laplacian"), py::arg("tol_zero") = std::nullopt);

  m.def(
      "make_spectrum",
      [](Eigen::VectorXcd values, Eigen::MatrixXcd right, Eigen::MatrixXcd left,
         std::optional<std::vector<std::string>> nodes) {
        NodeMap map = nodes ? NodeMap(*nodes) : NodeMap();
        return make_spectrum(std::move(values), std::move(right), std::move(left), std::move(map));
      },
      py::arg("eigenvalues"), py::arg("right"), py::arg("left"), py::arg("nodes") = std::nullopt,
      "Spectrum from hand-supplied eigenvectors of any scaling.");

  m.def("normalize", &normalize, py::arg("spectrum"));

  m.def(
      "verify_biorthogonality",
      [](const Spectrum& s, std::optional<double> tol) {
        const auto r = verify_biorthogonality(s, tol ? *tol : biorth_tolerance(s.size()));
        py::dict d;
        d["max_off_diagonal"] = r.max_off_diagonal;
        d["max_diagonal_deviation"] = r.max_diagonal_deviation;
        d["tolerance"] = r.tolerance;
        d["ok"] = r.ok();
        d["findings"] = findings_list(r.findings);
        return d;
      },
      py::arg("spectrum"), py::arg("tolerance") = std::nullopt);

  m.def(
      "two_point_resistance",
      [](const Spectrum& s, const NodeRef& alpha, const NodeRef& beta) {
        return two_point_resistance(s, resolve(s.nodes, alpha), resolve(s.nodes, beta)).value;
      },
      py::arg("spectrum"), py::arg("alpha"), py::arg("beta"),
      "Resistance between two nodes, given by index or by name.");

  m.def(
      "all_pairs",
      [](const Spectrum& s, bool symmetric, unsigned threads) {
        py::gil_scoped_release release;
        return all_pairs(s, symmetric ? Layout::Symmetric : Layout::UpperTriangular, threads).values;
      },
      py::arg("spectrum"), py::arg("symmetric") = false, py::arg("threads") = 1);

  m.def("greens_matrix", &greens_matrix, py::arg("spectrum"), py::arg("epsilon"));

  m.def(
      "solve_direct",
      [](const Laplacian& lap, const NodeRef& alpha, const NodeRef& beta, double current,
         std::optional<NodeRef> ground) {
        InjectionProblem p{resolve(lap.nodes, alpha), resolve(lap.nodes, beta), current, std::nullopt};
        if (ground) p.ground = resolve(lap.nodes, *ground);
        return solve_direct(lap, p).value;
      },
      py::arg("laplacian"), py::arg("alpha"), py::arg("beta"), py::arg("current") = 1.0,
      py::arg("ground") = std::nullopt, "Grounded direct solve (V_alpha - V_beta) / I.");

  m.def(
      "compare",
      [](const Spectrum& s, const Laplacian& lap) {
        const ComparisonReport r = compare(s, lap);
        py::dict d;
        d["max_abs_deviation"] = r.max_abs_deviation;
        d["max_rel_deviation"] = r.max_rel_deviation;
        d["worst_pair"] = py::make_tuple(lap.nodes.name(r.worst_alpha), lap.nodes.name(r.worst_beta));
        d["spectral"] = r.spectral_value;
        d["direct"] = r.direct_value;
        return d;
      },
      py::arg("spectrum"), py::arg("laplacian"));

  m.def("format_sci", &format_sci, py::arg("value"));
}
