import numpy as np
import pytest

from lztraj import numerics as nm


def random_hermitian(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return 0.5 * (m + m.conj().T)


def random_density(rng):
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def test_pauli_algebra():
    assert np.allclose(nm.SIGMA_X @ nm.SIGMA_X, nm.IDENTITY)
    assert np.allclose(nm.SIGMA_Z @ nm.SIGMA_Z, nm.IDENTITY)
    assert np.allclose(nm.SIGMA_PLUS @ nm.SIGMA_MINUS, np.diag([1.0, 0.0]))
    assert np.allclose(nm.SIGMA_MINUS @ nm.SIGMA_PLUS, np.diag([0.0, 1.0]))
    # sigma_minus lowers |e> to |g>
    assert np.allclose(nm.SIGMA_MINUS @ nm.KET_E, nm.KET_G)
    assert np.allclose(nm.SIGMA_MINUS @ nm.KET_G, 0.0)


def test_dagger_involution_and_expectation_real():
    rng = np.random.default_rng(7)
    for _ in range(50):
        m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        assert np.array_equal(nm.dagger(nm.dagger(m)), m)
        h = random_hermitian(rng)
        phi = rng.normal(size=2) + 1j * rng.normal(size=2)
        assert abs(nm.expectation(h, phi).imag) < 1e-12 * (1 + abs(nm.expectation(h, phi)))


def test_herm_eigvals_against_numpy():
    rng = np.random.default_rng(11)
    for _ in range(200):
        h = random_hermitian(rng)
        lo, hi = nm.herm_eigvals(h)
        ref = np.linalg.eigvalsh(h)
        assert abs(lo - ref[0]) < 1e-12 * max(1.0, abs(ref[0]))
        assert abs(hi - ref[1]) < 1e-12 * max(1.0, abs(ref[1]))
        assert nm.herm_norm(h) == pytest.approx(np.abs(ref).max(), rel=1e-12)


def test_trace_distance_pure_vs_mixed():
    rho = np.diag([1.0, 0.0]).astype(np.complex128)
    sigma = 0.5 * np.eye(2, dtype=np.complex128)
    assert nm.trace_distance(rho, sigma) == pytest.approx(0.5, abs=1e-15)
    assert nm.trace_distance(rho, rho) == 0.0


def test_trace_distance_properties():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a, b, c = (random_density(rng) for _ in range(3))
        dab = nm.trace_distance(a, b)
        assert 0.0 <= dab <= 1.0 + 1e-12
        assert dab == pytest.approx(nm.trace_distance(b, a), abs=1e-14)
        assert dab <= nm.trace_distance(a, c) + nm.trace_distance(c, b) + 1e-12
        # against an independent eigenvalue routine
        ref = 0.5 * np.abs(np.linalg.eigvalsh(a - b)).sum()
        assert dab == pytest.approx(ref, abs=1e-12)


def test_trace_distance_rejects_non_hermitian():
    rho = np.array([[0.5, 0.1], [0.3, 0.5]], dtype=np.complex128)
    with pytest.raises(ValueError, match="Hermitian"):
        nm.trace_distance(rho, 0.5 * np.eye(2, dtype=np.complex128))


def test_density_checks():
    good = np.array([[0.75, 0.1j], [-0.1j, 0.25]], dtype=np.complex128)
    defect, tr_err, neg = nm.density_checks(good)
    assert defect == 0.0
    assert tr_err < 1e-15
    assert neg == 0.0
    bad = np.array([[1.2, 0.0], [0.0, -0.2]], dtype=np.complex128)
    _, _, neg = nm.density_checks(bad)
    assert neg == pytest.approx(-0.2, abs=1e-14)
