#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "netres/resistance.hpp"

namespace netres::cli {

enum class InputKind { Netlist, MatrixJson, MatrixCsv };
enum class Command { Resistance, AllPairs, Validate, Spectrum };
enum class OutputFormat { Text, Json, Csv };

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;       // bad arguments, unreadable or malformed input
inline constexpr int kExitValidation = 2;  // Laplacian fails the Kirchhoff hard checks
inline constexpr int kExitSpectral = 3;    // non-diagonalizable, zero mode missing or repeated
inline constexpr int kExitOracle = 4;      // --check disagreement beyond --check-tol

struct RunConfig {
  Command command = Command::AllPairs;
  std::string alpha;  // node names, resistance command only
  std::string beta;
  std::string input_path;
  InputKind input_kind = InputKind::Netlist;
  bool check = false;
  double check_tol = 1e-6;
  OutputFormat format = OutputFormat::Text;
  bool dump_spectrum = false;
  std::string dump_spectrum_path;  // empty: append to the output stream
  std::optional<double> tol_zero;  // absolute, siemens
  Layout layout = Layout::UpperTriangular;
  unsigned threads = 0;  // 0: NETRES_THREADS or hardware concurrency
};

// .json -> matrix JSON, .csv -> matrix CSV, anything else -> netlist.
InputKind infer_input_kind(std::string_view path);

// Runs one command over already-read input bytes. Results go to `out`,
// diagnostics to `err`. Returns the process exit status.
int run(const RunConfig& config, std::string_view input, std::ostream& out, std::ostream& err);

// Full command line entry: argument parsing, file reading, run().
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace netres::cli
