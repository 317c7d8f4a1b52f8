#include "netres/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "netres/error.hpp"
#include "netres/io.hpp"
#include "netres/laplacian.hpp"
#include "netres/netlist.hpp"
#include "netres/oracle.hpp"
#include "netres/spectral.hpp"

namespace netres::cli {

using nlohmann::json;

namespace {

void print_findings(std::ostream& err, const std::vector<Finding>& findings) {
  for (const auto& f : findings) err << to_string(f.severity) << ": " << f.message << '\n';
}

Laplacian load(const RunConfig& config, std::string_view input, std::ostream& err) {
  switch (config.input_kind) {
    case InputKind::MatrixJson: return read_matrix_json(input);
    case InputKind::MatrixCsv: return read_matrix_csv(input);
    case InputKind::Netlist: break;
  }
  MergedNetlist merged = apply_merges(parse_netlist(input));
  for (const auto& note : merged.notes) err << "note: " << note << '\n';
  return build_laplacian(merged).laplacian;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

struct CheckOutcome {
  bool passed = true;
  double rel_deviation = 0.0;
  double abs_deviation = 0.0;
  std::string worst_alpha;
  std::string worst_beta;
  double spectral_value = 0.0;
  double direct_value = 0.0;
};

CheckOutcome check_pair(const Laplacian& lap, std::size_t a, std::size_t b, double spectral, double tol) {
  const double direct = solve_direct(lap, {a, b, 1.0, std::nullopt}).value;
  CheckOutcome c;
  c.abs_deviation = std::abs(spectral - direct);
  const double scale = std::max(std::abs(spectral), std::abs(direct));
  c.rel_deviation = scale > 0.0 ? c.abs_deviation / scale : 0.0;
  c.worst_alpha = lap.nodes.name(a);
  c.worst_beta = lap.nodes.name(b);
  c.spectral_value = spectral;
  c.direct_value = direct;
  c.passed = c.rel_deviation <= tol;
  return c;
}

CheckOutcome check_all(const Spectrum& s, const Laplacian& lap, double tol) {
  const ComparisonReport report = compare(s, lap);
  CheckOutcome c;
  c.rel_deviation = report.max_rel_deviation;
  c.abs_deviation = report.max_abs_deviation;
  c.worst_alpha = lap.nodes.name(report.worst_alpha);
  c.worst_beta = lap.nodes.name(report.worst_beta);
  c.spectral_value = report.spectral_value;
  c.direct_value = report.direct_value;
  c.passed = c.rel_deviation <= tol;
  return c;
}

std::string check_text(const CheckOutcome& c, double tol) {
  std::ostringstream out;
  out << "# check: direct solve vs spectral, max relative deviation " << format_sci(c.rel_deviation)
      << " at (" << c.worst_alpha << ", " << c.worst_beta << "), tolerance " << format_sci(tol) << ": "
      << (c.passed ? "PASS" : "FAIL") << '\n';
  return out.str();
}

json check_json(const CheckOutcome& c, double tol) {
  return json{{"max_rel_deviation", c.rel_deviation},
              {"max_abs_deviation", c.abs_deviation},
              {"worst_pair", {c.worst_alpha, c.worst_beta}},
              {"spectral", c.spectral_value},
              {"direct", c.direct_value},
              {"tolerance", tol},
              {"passed", c.passed}};
}

json findings_json(const std::vector<Finding>& findings) {
  json arr = json::array();
  for (const auto& f : findings) arr.push_back({{"severity", to_string(f.severity)}, {"message", f.message}});
  return arr;
}

// Emits `body` plus the optional check report in the requested format.
void emit(const RunConfig& config, std::ostream& out, std::ostream& err, const std::string& text_body,
          json json_body, const std::string& csv_body, const std::optional<CheckOutcome>& check) {
  switch (config.format) {
    case OutputFormat::Text:
      out << text_body;
      if (check) out << check_text(*check, config.check_tol);
      break;
    case OutputFormat::Json:
      if (check) json_body["check"] = check_json(*check, config.check_tol);
      out << json_body.dump(2) << '\n';
      break;
    case OutputFormat::Csv:
      out << csv_body;
      if (check) err << check_text(*check, config.check_tol);
      break;
  }
}

int run_validate(const RunConfig& config, const Laplacian& lap, const ValidationReport& lap_report,
                 std::ostream& out, std::ostream& err) {
  const SpectralOptions opts{config.tol_zero};
  const Spectrum s = eigendecompose(lap, opts);
  const auto bio = verify_biorthogonality(s, biorth_tolerance(s.size()));
  const auto zero = verify_zero_mode(s, opts);
  std::optional<CheckOutcome> check;
  if (config.check) check = check_all(s, lap, config.check_tol);

  std::vector<Finding> findings = lap_report.findings;
  findings.insert(findings.end(), bio.findings.begin(), bio.findings.end());
  findings.insert(findings.end(), zero.findings.begin(), zero.findings.end());
  const bool spectral_ok = !has_errors(bio.findings) && !has_errors(zero.findings);

  std::ostringstream text;
  text << "nodes: " << lap.size() << '\n'
       << "row_sum_max_abs: " << format_sci(lap_report.row_sum_max_abs) << '\n'
       << "col_sum_max_abs: " << format_sci(lap_report.col_sum_max_abs) << '\n'
       << "stamp_tolerance: " << format_sci(lap_report.tolerance) << '\n'
       << "symmetric: " << yes_no(lap_report.is_symmetric) << '\n'
       << "zero_mode_simple: " << yes_no(zero.zero_count == 1) << '\n'
       << "zero_eigenvalue_abs: " << format_sci(zero.zero_eigenvalue_abs) << '\n'
       << "zero_mode_right_residual: " << format_sci(zero.right_residual) << '\n'
       << "zero_mode_left_residual: " << format_sci(zero.left_residual) << '\n'
       << "biorth_max_off_diagonal: " << format_sci(bio.max_off_diagonal) << '\n'
       << "biorth_max_diagonal_deviation: " << format_sci(bio.max_diagonal_deviation) << '\n'
       << "eigenvector_condition: " << format_sci(s.condition) << '\n';
  for (const auto& f : findings) text << to_string(f.severity) << ": " << f.message << '\n';
  text << "status: " << (spectral_ok ? "ok" : "failed") << '\n';

  json body{{"nodes", lap.nodes.names()},
            {"row_sum_max_abs", lap_report.row_sum_max_abs},
            {"col_sum_max_abs", lap_report.col_sum_max_abs},
            {"stamp_tolerance", lap_report.tolerance},
            {"symmetric", lap_report.is_symmetric},
            {"zero_mode_simple", zero.zero_count == 1},
            {"zero_eigenvalue_abs", zero.zero_eigenvalue_abs},
            {"zero_mode_right_residual", zero.right_residual},
            {"zero_mode_left_residual", zero.left_residual},
            {"biorth_max_off_diagonal", bio.max_off_diagonal},
            {"biorth_max_diagonal_deviation", bio.max_diagonal_deviation},
            {"eigenvector_condition", s.condition},
            {"findings", findings_json(findings)},
            {"status", spectral_ok ? "ok" : "failed"}};

  std::ostringstream csv;
  csv << "metric,value\n"
      << "row_sum_max_abs," << lap_report.row_sum_max_abs << '\n'
      << "col_sum_max_abs," << lap_report.col_sum_max_abs << '\n'
      << "symmetric," << lap_report.is_symmetric << '\n'
      << "zero_mode_simple," << (zero.zero_count == 1) << '\n'
      << "biorth_max_off_diagonal," << bio.max_off_diagonal << '\n'
      << "eigenvector_condition," << s.condition << '\n';

  emit(config, out, err, text.str(), std::move(body), csv.str(), check);
  if (!spectral_ok) {
    print_findings(err, findings);
    return kExitSpectral;
  }
  if (check && !check->passed) return kExitOracle;
  return kExitOk;
}

int run_commands(const RunConfig& config, std::string_view input, std::ostream& out, std::ostream& err) {
  const Laplacian lap = load(config, input, err);
  const ValidationReport lap_report = validate(lap);
  if (lap_report.hard_failure()) {
    print_findings(err, lap_report.findings);
    err << "error: matrix is not a Kirchhoff Laplacian\n";
    return kExitValidation;
  }
  if (config.command != Command::Validate) print_findings(err, lap_report.findings);

  if (config.command == Command::Validate) return run_validate(config, lap, lap_report, out, err);

  const Spectrum s = eigendecompose(lap, SpectralOptions{config.tol_zero});
  std::optional<CheckOutcome> check;

  switch (config.command) {
    case Command::Resistance: {
      const std::size_t a = lap.nodes.index_of(config.alpha);
      const std::size_t b = lap.nodes.index_of(config.beta);
      const ResistanceResult r = two_point_resistance(s, a, b);
      if (config.check) check = check_pair(lap, a, b, r.value, config.check_tol);
      std::ostringstream csv;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", r.value);
      csv << "alpha,beta,resistance\n" << config.alpha << ',' << config.beta << ',' << buf << '\n';
      emit(config, out, err, format_sci(r.value) + "\n",
           json{{"alpha", config.alpha},
                {"beta", config.beta},
                {"resistance", r.value},
                {"imag_residual", r.imag_residual}},
           csv.str(), check);
      break;
    }
    case Command::AllPairs: {
      const ResistanceMatrix m = all_pairs(s, config.layout, config.threads);
      if (config.check) check = check_all(s, lap, config.check_tol);
      emit(config, out, err, write_resistance_text(m), json::parse(write_resistance_json(m)),
           write_resistance_csv(m), check);
      break;
    }
    case Command::Spectrum: {
      if (config.check) check = check_all(s, lap, config.check_tol);
      std::ostringstream text;
      std::ostringstream csv;
      csv << "index,re,im\n";
      char buf[64];
      for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
        text << format_sci(s.eigenvalues(i).real()) << ' ' << format_sci(s.eigenvalues(i).imag()) << '\n';
        std::snprintf(buf, sizeof buf, "%.17g,%.17g", s.eigenvalues(i).real(), s.eigenvalues(i).imag());
        csv << i << ',' << buf << '\n';
      }
      emit(config, out, err, text.str(), json::parse(write_spectrum_json(s)), csv.str(), check);
      break;
    }
    case Command::Validate: break;
  }

  if (config.dump_spectrum) {
    const std::string dump = write_spectrum_json(s);
    if (config.dump_spectrum_path.empty()) {
      out << dump;
    } else {
      std::ofstream file(config.dump_spectrum_path, std::ios::binary);
      if (!file) throw Error(ErrorKind::Domain, "cannot write " + config.dump_spectrum_path);
      file << dump;
    }
  }
  if (check && !check->passed) {
    err << "error: oracle disagreement beyond --check-tol\n";
    return kExitOracle;
  }
  return kExitOk;
}

}  // namespace

InputKind infer_input_kind(std::string_view path) {
  auto ends_with = [&](std::string_view suffix) {
    if (path.size() < suffix.size()) return false;
    auto tail = path.substr(path.size() - suffix.size());
    return std::equal(tail.begin(), tail.end(), suffix.begin(),
                      [](char x, char y) { return std::tolower(static_cast<unsigned char>(x)) == y; });
  };
  if (ends_with(".json")) return InputKind::MatrixJson;
  if (ends_with(".csv")) return InputKind::MatrixCsv;
  return InputKind::Netlist;
}

int run(const RunConfig& config, std::string_view input, std::ostream& out, std::ostream& err) {
  try {
    return run_commands(config, input, out, err);
  } catch (const SpectralError& e) {
    err << "error: " << e.what() << '\n';
    return kExitSpectral;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Validation: return kExitValidation;
      case ErrorKind::Spectral:
      case ErrorKind::NonReal: return kExitSpectral;
      case ErrorKind::Singular: return kExitOracle;
      default: return kExitUsage;
    }
  }
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-point resistance of networks with non-symmetric Laplacians", "netres"};
  app.require_subcommand(1);

  RunConfig config;
  std::string format = "text";
  std::string input_kind = "auto";
  std::string layout = "upper";
  std::optional<std::string> dump_path;
  std::optional<double> tol_zero;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", config.input_path, "Netlist, matrix JSON or matrix CSV file")->required();
    sub->add_flag("--check", config.check, "Cross-check against the direct grounded solve");
    sub->add_option("--check-tol", config.check_tol, "Relative tolerance for --check")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--input-kind", input_kind, "Input kind (default: by file extension)")
        ->check(CLI::IsMember({"auto", "netlist", "json", "csv"}));
    sub->add_option("--dump-spectrum", dump_path, "Write the spectrum as JSON (to FILE, or after the results)")
        ->expected(0, 1);
    sub->add_option("--tol-zero", tol_zero, "Absolute zero-eigenvalue tolerance in siemens")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", config.threads, "Worker threads for all-pairs (0 = NETRES_THREADS/auto)");
  };

  auto* resistance = app.add_subcommand("resistance", "Resistance between two named nodes");
  resistance->add_option("alpha", config.alpha, "First node")->required();
  resistance->add_option("beta", config.beta, "Second node")->required();
  add_common(resistance);
  auto* pairs = app.add_subcommand("all-pairs", "Upper-triangular matrix of all two-point resistances");
  pairs->add_option("--layout", layout, "upper or symmetric")->check(CLI::IsMember({"upper", "symmetric"}));
  add_common(pairs);
  auto* validate_cmd = app.add_subcommand("validate", "Check Laplacian structure and eigensystem health");
  add_common(validate_cmd);
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the Laplacian");
  add_common(spectrum);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*resistance) config.command = Command::Resistance;
  if (*pairs) config.command = Command::AllPairs;
  if (*validate_cmd) config.command = Command::Validate;
  if (*spectrum) config.command = Command::Spectrum;
  config.format = format == "json" ? OutputFormat::Json : format == "csv" ? OutputFormat::Csv : OutputFormat::Text;
  config.layout = layout == "symmetric" ? Layout::Symmetric : Layout::UpperTriangular;
  config.tol_zero = tol_zero;
  if (dump_path) {
    config.dump_spectrum = true;
    config.dump_spectrum_path = *dump_path;
  }
  if (input_kind == "auto") {
    config.input_kind = infer_input_kind(config.input_path);
  } else {
    config.input_kind = input_kind == "json" ? InputKind::MatrixJson
                        : input_kind == "csv" ? InputKind::MatrixCsv
                                              : InputKind::Netlist;
  }

  std::ifstream file(config.input_path, std::ios::binary);
  if (!file) {
    err << "error: cannot read " << config.input_path << '\n';
    return kExitUsage;
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return run(config, buffer.str(), out, err);
}

}  // namespace netres::cli
