#include "netres/io.hpp"

#include <cstdio>
#include <nlohmann/json.hpp>
#include <sstream>

#include "netres/error.hpp"

namespace netres {

using nlohmann::json;

namespace {

json complex_pair(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json complex_matrix(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_pair(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json real_matrix(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    auto cell = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto first = cell.find_first_not_of(" \t\r");
    auto last = cell.find_last_not_of(" \t\r");
    cells.emplace_back(first == std::string_view::npos ? std::string_view{} : cell.substr(first, last - first + 1));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

Laplacian read_matrix_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("matrix")) {
    throw ParseError(0, "matrix JSON needs \"nodes\" and \"matrix\" members");
  }
  const json& nodes = doc.at("nodes");
  const json& rows = doc.at("matrix");
  if (!nodes.is_array() || !rows.is_array()) throw ParseError(0, "\"nodes\" and \"matrix\" must be arrays");

  std::vector<std::string> names;
  for (const auto& n : nodes) {
    if (!n.is_string()) throw ParseError(0, "node names must be strings");
    names.push_back(n.get<std::string>());
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError(0, "matrix row " + std::to_string(i) + " does not have " + std::to_string(n) + " entries");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const json& v = row[static_cast<std::size_t>(j)];
      if (!v.is_number()) throw ParseError(0, "matrix entries must be numbers");
      m(i, j) = v.get<double>();
    }
  }
  return make_laplacian(std::move(m), NodeMap(std::move(names)));
}

std::string write_matrix_json(const Laplacian& lap) {
  json doc;
  doc["nodes"] = lap.nodes.names();
  doc["matrix"] = real_matrix(lap.matrix);
  return doc.dump(2) + "\n";
}

Laplacian read_matrix_csv(std::string_view text) {
  std::vector<std::vector<std::string>> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    auto line = text.substr(pos, eol - pos);
    pos = eol + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    lines.push_back(split_csv_line(line));
  }
  if (lines.empty()) throw ParseError(0, "empty CSV matrix");
  std::vector<std::string> names = lines.front();
  const auto n = static_cast<Eigen::Index>(names.size());
  if (static_cast<Eigen::Index>(lines.size()) != n + 1) {
    throw ParseError(0, "CSV matrix needs one data row per node name");
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = lines[static_cast<std::size_t>(i + 1)];
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError(static_cast<std::size_t>(i + 2), "expected " + std::to_string(n) + " values");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::string& cell = row[static_cast<std::size_t>(j)];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0') {
        throw ParseError(static_cast<std::size_t>(i + 2), "non-numeric value '" + cell + "'");
      }
      m(i, j) = v;
    }
  }
  return make_laplacian(std::move(m), NodeMap(std::move(names)));
}

std::string write_matrix_csv(const Laplacian& lap) {
  std::ostringstream out;
  const auto& names = lap.nodes.names();
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < lap.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < lap.matrix.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", lap.matrix(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string format_sci(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6E", value);
  return buf;
}

std::string write_spectrum_json(const Spectrum& spectrum) {
  json doc;
  doc["nodes"] = spectrum.nodes.names();
  json values = json::array();
  for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i) {
    values.push_back(complex_pair(spectrum.eigenvalues(i)));
  }
  doc["eigenvalues"] = std::move(values);
  doc["right"] = complex_matrix(spectrum.right);
  doc["left"] = complex_matrix(spectrum.left);
  doc["zero_index"] = spectrum.zero_index;
  doc["normalized"] = spectrum.normalized;
  doc["condition"] = spectrum.condition;
  return doc.dump(2) + "\n";
}

std::string write_resistance_text(const ResistanceMatrix& r) {
  std::ostringstream out;
  out << "# nodes:";
  for (const auto& name : r.nodes.names()) out << ' ' << name;
  out << '\n';
  const auto n = r.values.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const bool populated = i != j && (j > i || r.layout == Layout::Symmetric);
      const std::string cell = populated ? format_sci(r.values(i, j)) : "0";
      out << (j ? " " : "");
      for (std::size_t pad = cell.size(); pad < 13; ++pad) out << ' ';
      out << cell;
    }
    out << '\n';
  }
  return out.str();
}

std::string write_resistance_csv(const ResistanceMatrix& r) {
  std::ostringstream out;
  out << "node";
  for (const auto& name : r.nodes.names()) out << ',' << name;
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < r.values.rows(); ++i) {
    out << r.nodes.name(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < r.values.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", r.values(i, j));
      out << ',' << buf;
    }
    out << '\n';
  }
  return out.str();
}

std::string write_resistance_json(const ResistanceMatrix& r) {
  json doc;
  doc["nodes"] = r.nodes.names();
  doc["layout"] = r.layout == Layout::Symmetric ? "symmetric" : "upper";
  doc["resistance"] = real_matrix(r.values);
  return doc.dump(2) + "\n";
}

}  // namespace netres
