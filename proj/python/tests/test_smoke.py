import os
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

import netres

FIXTURES = Path(os.environ.get("NETRES_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))


def fixture(name):
    return (FIXTURES / name).read_text()


def test_bridge_exact_values():
    r, nodes = netres.resistance_matrix(fixture("example1.net"))
    assert nodes == ["n1", "n2", "n3", "n4"]
    exact = [Fraction(15100, 81), 200, Fraction(3100, 81), Fraction(9100, 81), Fraction(4000, 81), Fraction(9100, 81)]
    upper = r[np.triu_indices(4, 1)]
    np.testing.assert_allclose(upper, [float(x) for x in exact], rtol=1e-12)
    assert np.all(np.tril(r) == 0)


def test_opamp_by_name_and_direct_solve():
    lap = netres.Laplacian.from_netlist(fixture("opamp.net"))
    s = netres.eigendecompose(lap)
    r = netres.two_point_resistance(s, "n1", "gnd")
    assert netres.format_sci(r) == "1.847062E+03"
    assert netres.two_point_resistance(s, "n1", "Vdd") == r
    assert netres.solve_direct(lap, "n1", "gnd") == pytest.approx(r, rel=1e-10)
    assert netres.compare(s, lap)["max_rel_deviation"] < 1e-9


def test_spectrum_shapes_and_biorthogonality():
    lap = netres.Laplacian.from_netlist(fixture("rotor.net"))
    s = netres.eigendecompose(lap)
    assert s.zero_index == 0
    assert s.right.shape == (3, 3) and s.left.shape == (3, 3)
    assert s.eigenvalues.dtype == np.complex128
    np.testing.assert_allclose(s.left @ s.right, np.eye(3), atol=1e-12)
    assert netres.verify_biorthogonality(s)["ok"]


def test_hand_built_eigenvectors():
    left_t = np.array([[1, -1, 1, 1], [1, -1, -1, 0], [1, 1, 0, 0], [1, 1, 0, -1]], dtype=complex)
    right = np.array([[1, 1, 1, 0], [1, 1, -1, 0], [1, -3, -1, 1], [1, 1, 1, -1]], dtype=complex)
    s = netres.make_spectrum(np.array([0, 4, 4, 6], dtype=complex), right, left_t.T)
    assert [s.pairing(i) for i in range(4)] == [4, -4, 2, 1]
    assert netres.two_point_resistance(s, 0, 2) == pytest.approx(7 / 12, rel=1e-15)
    assert netres.verify_biorthogonality(netres.normalize(s))["ok"]


def test_matrix_input_and_greens_function():
    m = np.array([[1.0, -1.0], [-1.0, 1.0]]) / 47.0
    lap = netres.Laplacian.from_matrix(m, ["a", "b"])
    s = netres.eigendecompose(lap)
    assert netres.all_pairs(s, symmetric=True)[1, 0] == pytest.approx(47.0, rel=1e-14)
    g = netres.greens_matrix(s, 0.0)
    assert (g[0, 0] - g[1, 0] + g[1, 1] - g[0, 1]).real == pytest.approx(47.0, rel=1e-12)


def test_errors_map_to_python_exceptions():
    with pytest.raises(netres.ParseError, match="line 2"):
        netres.Laplacian.from_netlist("R1 a b 1\nR2 a b x\n")
    with pytest.raises(netres.SpectralError, match="not simple"):
        netres.eigendecompose(netres.Laplacian.from_netlist(fixture("disconnected.net")))
    with pytest.raises(netres.SpectralError, match="not diagonalizable"):
        netres.eigendecompose(netres.Laplacian.from_json(fixture("defective.json")))
    s = netres.eigendecompose(netres.Laplacian.from_netlist(fixture("series.net")))
    with pytest.raises(netres.NetresError):
        netres.two_point_resistance(s, "a", "a")
    with pytest.raises(netres.NetresError):
        netres.two_point_resistance(s, "a", "zz")
