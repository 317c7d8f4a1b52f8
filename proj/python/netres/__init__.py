"""Two-point resistance of networks with non-symmetric Laplacians."""

from ._netres import (
    Laplacian,
    NetresError,
    ParseError,
    Spectrum,
    SpectralError,
    all_pairs,
    compare,
    eigendecompose,
    format_sci,
    greens_matrix,
    make_spectrum,
    normalize,
    solve_direct,
    two_point_resistance,
    verify_biorthogonality,
)

__all__ = [
    "Laplacian",
    "NetresError",
    "ParseError",
    "Spectrum",
    "SpectralError",
    "all_pairs",
    "compare",
    "eigendecompose",
    "format_sci",
    "greens_matrix",
    "make_spectrum",
    "normalize",
    "resistance_matrix",
    "solve_direct",
    "two_point_resistance",
    "verify_biorthogonality",
]


def resistance_matrix(netlist_text, symmetric=False):
    """All-pairs resistance matrix and node names straight from netlist text."""
    lap = Laplacian.from_netlist(netlist_text)
    return all_pairs(eigendecompose(lap), symmetric=symmetric), lap.nodes
