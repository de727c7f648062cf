import math

import numpy as np
import pytest

from nlew.linalg import (
    DimensionError,
    NotHermitianError,
    canonical_basis,
    correlation_matrix_canonical,
    determinant,
    gell_mann,
    hermitian_spectrum,
    is_positive_semidefinite,
    kron,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    partial_transpose,
    realignment,
    singular_values,
    trace_norm,
)

X = np.array([[0, 1], [1, 0]])
Z = np.diag([1.0, -1.0])
PHI_PLUS = np.array([1, 0, 0, 1]) / math.sqrt(2)
PSI_MINUS = np.array([0, 1, -1, 0]) / math.sqrt(2)


def proj(v):
    return np.outer(v, np.conj(v))


def random_state(n, rng):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    r = g @ g.conj().T
    return r / np.trace(r)


def test_kron_basics():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(kron(Z, Z), np.diag([1, -1, -1, 1]))
    rho_b = np.array([[0.7, 0.1], [0.1, 0.3]])
    out = kron(np.diag([1, 0]), rho_b)
    assert np.allclose(out[:2, :2], rho_b)
    assert np.allclose(out[2:, :], 0) and np.allclose(out[:, 2:], 0)


def test_partial_trace_examples():
    assert np.allclose(partial_trace(proj(PHI_PLUS), (2, 2), "A"), np.eye(2) / 2)
    rng = np.random.default_rng(1)
    ra, rb = random_state(2, rng), random_state(3, rng)
    assert np.allclose(partial_trace(np.kron(ra, rb), (2, 3), "A"), rb)
    assert np.allclose(partial_trace(np.kron(ra, rb), (2, 3), "B"), ra)
    ent = np.array([[13, 0, 0, 11], [0, 2, 0, 0], [0, 0, 2, 0], [11, 0, 0, 13]]) / 30
    assert np.allclose(partial_trace(ent, (2, 2), "A"), np.eye(2) / 2)


def test_partial_trace_rejects_bad_shape():
    with pytest.raises(DimensionError):
        partial_trace(np.eye(4), (2, 3))
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), (2, 2), "C")


def test_partial_transpose_psi_minus():
    got = partial_transpose(proj(PSI_MINUS), (2, 2))
    want = 0.5 * np.array([[0, 0, 0, -1], [0, 1, 0, 0], [0, 0, 1, 0], [-1, 0, 0, 0]])
    assert np.allclose(got, want)


def test_partial_transpose_involution_and_identity():
    rng = np.random.default_rng(2)
    for dims in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        m = rng.normal(size=(6 if 6 == dims[0] * dims[1] else dims[0] * dims[1],) * 2)
        assert np.allclose(partial_transpose(partial_transpose(m, dims), dims), m)
        assert np.allclose(partial_transpose(partial_transpose(m, dims, "A"), dims, "A"), m)
        assert math.isclose(np.trace(partial_transpose(m, dims)).real, np.trace(m).real)
    assert np.allclose(partial_transpose(np.eye(4) / 4, (2, 2)), np.eye(4) / 4)


def test_spectrum():
    w = partial_transpose(proj(PSI_MINUS), (2, 2))
    assert np.allclose(hermitian_spectrum(w).eigenvalues, [-0.5, 0.5, 0.5, 0.5])
    assert np.allclose(hermitian_spectrum(np.eye(3)).eigenvalues, 1)
    rho1 = np.array([[0.265822, 0, 0, 0], [0, 0.367089, -0.367089, 0], [0, -0.367089, 0.367089, 0], [0, 0, 0, 0]])
    assert math.isclose(hermitian_spectrum(rho1).max, 0.734178, abs_tol=1e-12)


def test_spectrum_reconstruction_and_trace():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    h = a + a.conj().T
    s = hermitian_spectrum(h)
    assert np.all(np.diff(s.eigenvalues) >= 0)
    assert np.allclose(s.eigenvectors @ np.diag(s.eigenvalues) @ s.eigenvectors.conj().T, h)
    assert math.isclose(s.eigenvalues.sum(), np.trace(h).real, abs_tol=1e-10)


def test_spectrum_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_spectrum(np.array([[0, 1], [0, 0]]))
    with pytest.raises(NotHermitianError):
        is_positive_semidefinite(np.array([[0, 1], [0, 0]]))


def test_singular_values_and_trace_norm():
    sv = singular_values(np.eye(3))
    assert np.allclose(sv, 1) and trace_norm(np.eye(3)) == pytest.approx(3)
    rng = np.random.default_rng(4)
    a = rng.normal(size=(4, 4))
    sv = singular_values(a)
    assert np.all(np.diff(sv) <= 0) and np.all(sv >= 0)
    assert abs(np.trace(a)) <= trace_norm(a) + 1e-12


def test_determinant_values():
    rho = proj(PHI_PLUS)
    assert determinant(np.eye(4) + rho) == pytest.approx(2)
    assert determinant(np.eye(2) + partial_trace(rho, (2, 2))) == pytest.approx(9 / 4)
    assert determinant(np.eye(5)) == pytest.approx(1)


def test_psd():
    wp = 0.5 * np.array([[0.5, 0, 0, 0], [0, 0.5, 1, 0], [0, 1, 0.5, 0], [0, 0, 0, 0.5]])
    assert not is_positive_semidefinite(wp)
    rng = np.random.default_rng(5)
    rho = random_state(4, rng)
    assert is_positive_semidefinite(rho)
    assert is_positive_semidefinite(np.eye(4) - rho)


def test_gell_mann_ordering():
    g = gell_mann(3)
    assert np.allclose(g[1], [[0, 1, 0], [1, 0, 0], [0, 0, 0]])
    assert np.allclose(g[3], [[0, 0, 0], [0, 0, 1], [0, 1, 0]])
    assert np.allclose(g[4], [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]])
    assert np.allclose(g[7], np.diag([1, -1, 0]))
    assert np.allclose(g[8], np.diag([1, 1, -2]) / math.sqrt(3))
    assert np.allclose(gell_mann(2)[1:], [X, [[0, -1j], [1j, 0]], Z])
    with pytest.raises(ValueError):
        g[0, 0, 0] = 2


@pytest.mark.parametrize("d", [2, 3, 4])
def test_canonical_basis_orthonormal(d):
    b = canonical_basis(d)
    assert len(b) == d * d
    gram = np.einsum("aij,bji->ab", b, b)
    assert np.allclose(gram, np.eye(d * d))
    assert np.allclose(b[0], np.eye(d) / math.sqrt(d))
    assert np.allclose([np.trace(x) for x in b[1:]], 0)


def test_canonical_basis_rejects_small():
    with pytest.raises(ValueError):
        canonical_basis(1)


def test_correlation_matrix_examples():
    c = correlation_matrix_canonical(np.eye(4) / 4, (2, 2))
    expected = np.zeros((4, 4))
    expected[0, 0] = 0.5
    assert np.allclose(c, expected)
    assert trace_norm(c) == pytest.approx(0.5)
    assert trace_norm(correlation_matrix_canonical(proj(PHI_PLUS), (2, 2))) == pytest.approx(2)

    rho1 = np.array([[0.265822, 0, 0, 0], [0, 0.367089, -0.367089, 0], [0, -0.367089, 0.367089, 0], [0, 0, 0, 0]])
    c = correlation_matrix_canonical(rho1, (2, 2))
    assert c[1, 1] == pytest.approx(-0.367089) and c[2, 2] == pytest.approx(-0.367089)
    assert c[3, 3] == pytest.approx(-0.234178)
    assert c[0, 0] == pytest.approx(0.5)
    assert c[0, 3] == pytest.approx(0.132911) and c[3, 0] == pytest.approx(0.132911)


def test_correlation_matrix_of_product_is_rank_one():
    rng = np.random.default_rng(6)
    ra, rb = random_state(2, rng), random_state(3, rng)
    c = correlation_matrix_canonical(np.kron(ra, rb), (2, 3))
    assert np.linalg.matrix_rank(c, tol=1e-10) == 1
    assert c[0, 0] == pytest.approx(1 / math.sqrt(6))


def test_realignment_matches_correlation_norm():
    rng = np.random.default_rng(7)
    for dims in [(2, 2), (2, 3), (3, 3)]:
        rho = random_state(dims[0] * dims[1], rng)
        c = correlation_matrix_canonical(rho, dims)
        assert abs(trace_norm(realignment(rho, dims)) - trace_norm(c)) < 1e-9
    assert trace_norm(realignment(proj(PHI_PLUS), (2, 2))) == pytest.approx(2)
    assert trace_norm(realignment(np.eye(4) / 4, (2, 2))) == pytest.approx(0.5)


def test_realignment_of_product_is_at_most_one():
    rng = np.random.default_rng(8)
    for _ in range(20):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        u = rng.normal(size=2) + 1j * rng.normal(size=2)
        rho = np.kron(proj(v / np.linalg.norm(v)), proj(u / np.linalg.norm(u)))
        assert trace_norm(realignment(rho, (2, 2))) <= 1 + 1e-12


def test_partial_trace_of_kron_is_projection():
    rng = np.random.default_rng(9)
    ra, rb = random_state(3, rng), random_state(2, rng)
    rho = np.kron(ra, rb)
    again = np.kron(partial_trace(rho, (3, 2), "B"), partial_trace(rho, (3, 2), "A"))
    assert np.allclose(again, rho)


def test_matrix_json_round_trip():
    m = np.array([[1 + 2j, 3], [4j, -1]])
    obj = matrix_to_json(m)
    assert obj["rows"] == 2 and obj["cols"] == 2
    assert np.array_equal(matrix_from_json(obj), m)
    with pytest.raises(DimensionError):
        matrix_from_json({"rows": 2, "cols": 2, "re": [1, 2, 3], "im": [0, 0, 0]})


def test_as_matrix_rejects_nan():
    with pytest.raises(ValueError):
        hermitian_spectrum(np.array([[np.nan, 0], [0, 1]]))
