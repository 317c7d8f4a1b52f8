#include "netres/laplacian.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "netres/error.hpp"

namespace netres {

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "?";
}

double stamp_tolerance(const Eigen::MatrixXd& matrix) {
  if (matrix.size() == 0) return 0.0;
  return static_cast<double>(matrix.rows()) * std::numeric_limits<double>::epsilon() *
         matrix.cwiseAbs().maxCoeff();
}

Laplacian zero_laplacian(NodeMap nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  return Laplacian{Eigen::MatrixXd::Zero(n, n), std::move(nodes)};
}

void stamp_resistor(Laplacian& lap, std::size_t i, std::size_t j, double conductance) {
  const auto n = lap.size();
  if (i >= n || j >= n) throw Error(ErrorKind::Domain, "resistor stamp index out of range");
  if (i == j) throw Error(ErrorKind::Degenerate, "resistor stamp with both terminals on one node");
  if (!(conductance > 0.0) || !std::isfinite(conductance)) {
    throw Error(ErrorKind::Domain, "resistor conductance must be positive and finite");
  }
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  lap.matrix(a, a) += conductance;
  lap.matrix(b, b) += conductance;
  lap.matrix(a, b) -= conductance;
  lap.matrix(b, a) -= conductance;
}

void stamp_vccs(Laplacian& lap, std::size_t k, std::size_t k_prime, std::size_t j,
                std::size_t j_prime, double g) {
  const auto n = lap.size();
  if (k >= n || k_prime >= n || j >= n || j_prime >= n) {
    throw Error(ErrorKind::Domain, "VCCS stamp index out of range");
  }
  if (k == k_prime) throw Error(ErrorKind::Degenerate, "VCCS output terminals on one node");
  if (j == j_prime) throw Error(ErrorKind::Degenerate, "VCCS control terminals on one node");
  if (!std::isfinite(g)) throw Error(ErrorKind::Domain, "VCCS transconductance must be finite");
  const auto r = static_cast<Eigen::Index>(k);
  const auto rp = static_cast<Eigen::Index>(k_prime);
  const auto c = static_cast<Eigen::Index>(j);
  const auto cp = static_cast<Eigen::Index>(j_prime);
  lap.matrix(r, c) += g;
  lap.matrix(r, cp) -= g;
  lap.matrix(rp, c) -= g;
  lap.matrix(rp, cp) += g;
}

BuildResult build_laplacian(const MergedNetlist& merged) {
  if (merged.nodes.size() < 2) {
    throw Error(ErrorKind::Validation, "network needs at least two distinct nodes after merging");
  }
  Laplacian lap = zero_laplacian(merged.nodes);
  auto idx = [&](const std::string& name) { return merged.nodes.index_of(name); };

  auto add_resistor = [&](const Resistor& r) { stamp_resistor(lap, idx(r.a), idx(r.b), 1.0 / r.ohms); };
  auto add_vccs = [&](const Vccs& g) {
    // Zero stamps (merged control pair) are skipped.
    if (g.ctrl_pos == g.ctrl_neg || g.siemens == 0.0) return;
    stamp_vccs(lap, idx(g.out_pos), idx(g.out_neg), idx(g.ctrl_pos), idx(g.ctrl_neg), g.siemens);
  };

  for (const auto& element : merged.netlist.elements) {
    if (const auto* r = std::get_if<Resistor>(&element)) {
      add_resistor(*r);
    } else if (const auto* g = std::get_if<Vccs>(&element)) {
      add_vccs(*g);
    } else {
      auto [vccs, rds] = expand_mos(std::get<Mos>(element));
      add_vccs(vccs);
      add_resistor(rds);
    }
  }
  ValidationReport report = validate(lap);
  return {std::move(lap), std::move(report)};
}

Laplacian make_laplacian(Eigen::MatrixXd matrix, NodeMap nodes) {
  if (matrix.rows() != matrix.cols()) throw Error(ErrorKind::Validation, "matrix is not square");
  if (static_cast<std::size_t>(matrix.rows()) != nodes.size()) {
    throw Error(ErrorKind::Validation, "node count does not match matrix dimension");
  }
  if (matrix.rows() < 2) throw Error(ErrorKind::Validation, "matrix must be at least 2x2");
  if (!matrix.allFinite()) throw Error(ErrorKind::Validation, "matrix has non-finite entries");
  return Laplacian{std::move(matrix), std::move(nodes)};
}

ValidationReport validate(const Laplacian& lap) {
  ValidationReport report;
  const Eigen::MatrixXd& m = lap.matrix;
  report.tolerance = stamp_tolerance(m);
  if (m.size() == 0) return report;
  report.row_sum_max_abs = m.rowwise().sum().cwiseAbs().maxCoeff();
  report.col_sum_max_abs = m.colwise().sum().cwiseAbs().maxCoeff();
  report.is_symmetric = (m - m.transpose()).cwiseAbs().maxCoeff() <= report.tolerance;

  auto check = [&](double value, const char* what) {
    if (value <= report.tolerance) return;
    std::ostringstream msg;
    msg << "max |" << what << " sum| = " << value << " exceeds tolerance " << report.tolerance;
    const bool fatal = value > kHardFailureFactor * report.tolerance;
    report.findings.push_back({fatal ? Severity::Error : Severity::Warning, msg.str()});
  };
  check(report.row_sum_max_abs, "row");
  check(report.col_sum_max_abs, "column");
  return report;
}

}  // namespace netres
