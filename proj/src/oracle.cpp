#include "netres/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "netres/error.hpp"

namespace netres {

std::vector<std::size_t> connected_components(const Eigen::MatrixXd& matrix) {
  const auto n = static_cast<std::size_t>(matrix.rows());
  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> component(n, unseen);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (component[start] != unseen) continue;
    component[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (component[v] != unseen) continue;
        const auto ui = static_cast<Eigen::Index>(u);
        const auto vi = static_cast<Eigen::Index>(v);
        if (matrix(ui, vi) != 0.0 || matrix(vi, ui) != 0.0) {
          component[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return component;
}

Eigen::VectorXd solve_potentials(const Laplacian& lap, const InjectionProblem& problem) {
  const std::size_t n = lap.size();
  const std::size_t ground = problem.ground.value_or(problem.beta);
  if (problem.alpha >= n || problem.beta >= n || ground >= n) {
    throw Error(ErrorKind::Domain, "injection node index out of range");
  }
  if (problem.alpha == problem.beta) {
    throw Error(ErrorKind::Domain, "injection needs distinct source and sink nodes");
  }
  if (problem.current == 0.0 || !std::isfinite(problem.current)) {
    throw Error(ErrorKind::Domain, "injected current must be finite and nonzero");
  }

  const auto m = static_cast<Eigen::Index>(n - 1);
  const auto g = static_cast<Eigen::Index>(ground);
  auto reduced_index = [g](Eigen::Index i) { return i < g ? i : i - 1; };

  Eigen::MatrixXd reduced(m, m);
  const auto& L = lap.matrix;
  const auto tail = m - g;
  reduced.topLeftCorner(g, g) = L.topLeftCorner(g, g);
  reduced.topRightCorner(g, tail) = L.block(0, g + 1, g, tail);
  reduced.bottomLeftCorner(tail, g) = L.block(g + 1, 0, tail, g);
  reduced.bottomRightCorner(tail, tail) = L.bottomRightCorner(tail, tail);

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  const auto a = static_cast<Eigen::Index>(problem.alpha);
  const auto b = static_cast<Eigen::Index>(problem.beta);
  if (a != g) rhs(reduced_index(a)) += problem.current;
  if (b != g) rhs(reduced_index(b)) -= problem.current;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(reduced);
  const double rcond = lu.rcond();
  if (!(rcond > static_cast<double>(n) * std::numeric_limits<double>::epsilon())) {
    const auto comp = connected_components(L);
    const auto count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::ostringstream msg;
    msg << "grounded system is singular (rcond " << rcond << "); conductance graph has " << count
        << " connected component" << (count == 1 ? "" : "s");
    if (count > 1 && comp[problem.alpha] != comp[problem.beta]) {
      msg << ", nodes " << lap.nodes.name(problem.alpha) << " and " << lap.nodes.name(problem.beta)
          << " are in different components";
    }
    throw Error(ErrorKind::Singular, msg.str());
  }
  const Eigen::VectorXd x = lu.solve(rhs);

  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  v.head(g) = x.head(g);
  v(g) = 0.0;
  v.tail(tail) = x.tail(tail);
  return v;
}

ResistanceResult solve_direct(const Laplacian& lap, const InjectionProblem& problem) {
  const Eigen::VectorXd v = solve_potentials(lap, problem);
  ResistanceResult r;
  r.value = (v(static_cast<Eigen::Index>(problem.alpha)) - v(static_cast<Eigen::Index>(problem.beta))) /
            problem.current;
  return r;
}

ComparisonReport compare(const Spectrum& spectrum, const Laplacian& lap) {
  ComparisonReport report;
  const std::size_t n = lap.size();
  if (spectrum.size() != n) throw Error(ErrorKind::Domain, "spectrum and Laplacian sizes differ");
  const ResistanceMatrix spectral = all_pairs(spectrum);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double rs = spectral.values(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      const double rd = solve_direct(lap, {a, b, 1.0, std::nullopt}).value;
      const double abs_dev = std::abs(rs - rd);
      const double scale = std::max(std::abs(rs), std::abs(rd));
      const double rel_dev = scale > 0.0 ? abs_dev / scale : 0.0;
      report.max_abs_deviation = std::max(report.max_abs_deviation, abs_dev);
      if (rel_dev > report.max_rel_deviation || (a == 0 && b == 1)) {
        report.max_rel_deviation = std::max(report.max_rel_deviation, rel_dev);
        report.worst_alpha = a;
        report.worst_beta = b;
        report.spectral_value = rs;
        report.direct_value = rd;
      }
    }
  }
  std::ostringstream msg;
  msg << "spectral vs direct: max rel deviation " << report.max_rel_deviation << " at ("
      << lap.nodes.name(report.worst_alpha) << ", " << lap.nodes.name(report.worst_beta)
      << "), max abs deviation " << report.max_abs_deviation;
  report.findings.push_back({Severity::Info, msg.str()});
  return report;
}

}  // namespace netres
