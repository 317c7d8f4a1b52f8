#pragma once

#include <string>
#include <string_view>

#include "netres/laplacian.hpp"
#include "netres/resistance.hpp"
#include "netres/spectral.hpp"

namespace netres {

// {"nodes": [...], "matrix": [[...], ...]}
Laplacian read_matrix_json(std::string_view text);
std::string write_matrix_json(const Laplacian& lap);

// First row holds the node names, then one row of numbers per node.
Laplacian read_matrix_csv(std::string_view text);
std::string write_matrix_csv(const Laplacian& lap);

// Scientific notation with 7 significant digits, e.g. 9.276302E+03.
std::string format_sci(double value);

// Eigenvalues as [re, im] pairs, right/left matrices row-major with each
// entry an [re, im] pair, plus zero_index and node names.
std::string write_spectrum_json(const Spectrum& spectrum);

// Upper-triangular block: header comment with node names, then one row per
// node; entries outside the populated triangle print as 0.
std::string write_resistance_text(const ResistanceMatrix& r);
std::string write_resistance_csv(const ResistanceMatrix& r);
std::string write_resistance_json(const ResistanceMatrix& r);

}  // namespace netres
