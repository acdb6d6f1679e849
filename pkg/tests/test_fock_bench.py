import numpy as np
import pytest
from scipy.special import eval_genlaguerre

from wigweyl.fock_bench import (
    BEAMSPLITTER_SYMPLECTIC,
    TwoModeFockDensity,
    beamsplitter,
    beamsplitter_output,
    fock_mixture_wigner,
    fock_mixture_wigner_min,
    partial_transpose_fock,
    pt_spectrum,
    single_mode_mixture,
    two_mode_wigner,
    two_mode_wigner_min,
)
from wigweyl.phase_space import Constants
from wigweyl.symplectic import OMEGA

P_GRID = np.linspace(0, 1, 101)


def fock_wigner(n, q, p):
    # W_n = (-1)^n / pi * exp(-r^2) * L_n(2 r^2), hbar = 1
    r2 = q * q + p * p
    return (-1) ** n / np.pi * np.exp(-r2) * eval_genlaguerre(n, 0, 2 * r2)


@pytest.mark.parametrize("p, diag", [(1.0, [1, 0]), (0.0, [0, 1]), (0.5, [0.5, 0.5])])
def test_single_mode_mixture(p, diag):
    np.testing.assert_array_equal(single_mode_mixture(p).matrix, np.diag(diag))


def test_mixture_rejects_out_of_range():
    for p in (-0.1, 1.1):
        with pytest.raises(ValueError):
            single_mode_mixture(p)
        with pytest.raises(ValueError):
            beamsplitter_output(p)


def test_beamsplitter_vacuum():
    np.testing.assert_array_equal(beamsplitter_output(1.0).matrix, np.diag([1, 0, 0, 0]))


def test_beamsplitter_single_photon():
    m = beamsplitter_output(0.0).matrix
    np.testing.assert_allclose(m[1:3, 1:3], 0.5, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(m), [0, 0, 0, 1], atol=1e-15)


@pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 0.75, 1.0])
def test_beamsplitter_matches_displayed_matrix(p):
    a = (1 - p) / 2
    expected = np.array([[p, 0, 0, 0], [0, a, a, 0], [0, a, a, 0], [0, 0, 0, 0]])
    np.testing.assert_allclose(beamsplitter_output(p).matrix, expected, atol=1e-15)


def test_beamsplitter_preserves_state_properties(rng):
    # random state on the <=1-photon sector
    v = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho3 = v @ v.conj().T
    rho3 /= np.trace(rho3)
    rho = np.zeros((4, 4), complex)
    rho[np.ix_([0, 1, 2], [0, 1, 2])] = rho3
    out = beamsplitter(TwoModeFockDensity(rho)).matrix
    assert np.trace(out) == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(out, out.conj().T, atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-14)


def test_beamsplitter_rejects_two_photons():
    with pytest.raises(ValueError):
        beamsplitter(TwoModeFockDensity(np.diag([0, 0, 0, 1.0])))


def test_partial_transpose_structure():
    p = 0.3
    a = (1 - p) / 2
    pt = partial_transpose_fock(beamsplitter_output(p))
    expected = np.array([[p, 0, 0, a], [0, a, 0, 0], [0, 0, a, 0], [a, 0, 0, 0]])
    np.testing.assert_allclose(pt, expected, atol=1e-15)


def test_partial_transpose_involution(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    np.testing.assert_array_equal(partial_transpose_fock(partial_transpose_fock(m)), m)
    assert np.trace(partial_transpose_fock(m)) == np.trace(m)


def test_partial_transpose_of_product_state(rng):
    def rand_state():
        v = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        r = v @ v.conj().T
        return r / np.trace(r)

    a, b = rand_state(), rand_state()
    pt = partial_transpose_fock(np.kron(a, b))
    np.testing.assert_allclose(pt, np.kron(a, b.T), atol=1e-15)
    np.testing.assert_allclose(np.linalg.eigvalsh(pt), np.linalg.eigvalsh(np.kron(a, b)), atol=1e-14)


def test_pt_spectrum_values():
    assert pt_spectrum(0.0).lambda_min == pytest.approx(-0.5, abs=1e-15)
    np.testing.assert_allclose(pt_spectrum(1.0).eigenvalues, [0, 0, 0, 1], atol=1e-15)
    assert pt_spectrum(0.5).lambda_min == pytest.approx(0.5 * (0.5 - np.sqrt(0.5)), abs=1e-15)
    assert pt_spectrum(0.5).lambda_min == pytest.approx(-0.10355, abs=1e-5)


def test_pt_spectrum_matches_numeric():
    for p in P_GRID:
        numeric = np.linalg.eigvalsh(partial_transpose_fock(beamsplitter_output(p)))
        spec = pt_spectrum(p)
        np.testing.assert_allclose(spec.eigenvalues, numeric, atol=1e-12)
        assert sum(spec.eigenvalues) == pytest.approx(1.0, abs=1e-12)
        if p < 1:
            assert spec.lambda_min < 0
    assert pt_spectrum(1.0).lambda_min == 0.0


@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 0.8, 1.0])
def test_mixture_wigner_matches_laguerre_form(p, rng):
    q, pm = rng.normal(size=(2, 30))
    expected = p * fock_wigner(0, q, pm) + (1 - p) * fock_wigner(1, q, pm)
    np.testing.assert_allclose(fock_mixture_wigner(p, q, pm), expected, atol=1e-15)


def test_mixture_wigner_values():
    assert fock_mixture_wigner(1.0, 0.0, 0.0) == pytest.approx(1 / np.pi, abs=1e-15)
    assert fock_mixture_wigner(0.5, 0.0, 0.0) == 0.0
    assert fock_mixture_wigner(0.25, 0.0, 0.0) == pytest.approx(-1 / (2 * np.pi), abs=1e-15)


def test_mixture_wigner_normalized():
    axis = np.linspace(-6, 6, 241)
    h = axis[1] - axis[0]
    Q, P = np.meshgrid(axis, axis, indexing="ij")
    for p in (0.0, 0.4, 1.0):
        assert fock_mixture_wigner(p, Q, P).sum() * h * h == pytest.approx(1.0, abs=1e-6)


def test_mixture_wigner_hbar_scaling():
    c = Constants(hbar=3.0)
    axis = np.linspace(-10, 10, 301)
    h = axis[1] - axis[0]
    Q, P = np.meshgrid(axis, axis, indexing="ij")
    assert fock_mixture_wigner(0.2, Q, P, c).sum() * h * h == pytest.approx(1.0, abs=1e-6)
    assert fock_mixture_wigner(0.2, 0, 0, c) == pytest.approx(fock_mixture_wigner(0.2, 0, 0) / 3.0)


def test_single_mode_minimum_by_grid_search():
    axis = np.linspace(-5, 5, 201)
    Q, P = np.meshgrid(axis, axis, indexing="ij")
    for p in (0.0, 0.25, 0.5, 0.75):
        assert fock_mixture_wigner(p, Q, P).min() == pytest.approx(fock_mixture_wigner_min(p), abs=1e-6)


def test_beamsplitter_symplectic_is_orthogonal_symplectic():
    s = BEAMSPLITTER_SYMPLECTIC
    np.testing.assert_allclose(s @ s.T, np.eye(4), atol=1e-15)
    np.testing.assert_allclose(s @ OMEGA @ s.T, OMEGA, atol=1e-15)


def test_two_mode_wigner_min_values():
    assert two_mode_wigner_min(0.0) == pytest.approx(-1 / np.pi**2, abs=1e-15)
    for p in (0.5, 0.75, 1.0):
        assert two_mode_wigner_min(p) == 0.0
    for p in (0.0, 0.25, 0.49):
        assert two_mode_wigner_min(p) < 0


@pytest.mark.parametrize("p", [0.0, 0.25, 0.75])
def test_two_mode_minimum_by_grid_search(p):
    axis = np.linspace(-5, 5, 21)
    z = np.stack(np.meshgrid(axis, axis, axis, axis, indexing="ij"), axis=-1)
    assert two_mode_wigner(p, z).min() == pytest.approx(two_mode_wigner_min(p), abs=1e-6)


def test_two_mode_wigner_of_psi_plus(rng):
    # |psi+> is one photon in the mode with quadratures ((q1+q2), (p1+p2))/sqrt(2)
    z = rng.normal(size=(40, 4))
    qc, pc = (z[:, 0] + z[:, 1]) / np.sqrt(2), (z[:, 2] + z[:, 3]) / np.sqrt(2)
    qd, pd = (z[:, 0] - z[:, 1]) / np.sqrt(2), (z[:, 2] - z[:, 3]) / np.sqrt(2)
    expected = fock_wigner(1, qc, pc) * fock_wigner(0, qd, pd)
    np.testing.assert_allclose(two_mode_wigner(0.0, z), expected, atol=1e-15)
