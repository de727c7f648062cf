"""Dense matrix kernels for bipartite operators.

Matrices are plain complex ``numpy`` arrays. A bipartite operator on
``d1 x d2`` is a ``(d1*d2, d1*d2)`` array whose row index is ``i*d2 + j`` for
``|i>_A |j>_B``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

HERMITIAN_TOL = 1e-9

#: Identifier of the operator-basis ordering used by :func:`canonical_basis`.
BASIS_CONVENTION = "identity, symmetric-offdiag, antisymmetric-offdiag, diagonal"


class DimensionError(ValueError):
    """Matrix shape does not match the declared subsystem dimensions."""


class NotHermitianError(ValueError):
    pass


class Dims(NamedTuple):
    d1: int
    d2: int

    @property
    def total(self) -> int:
        return self.d1 * self.d2


def as_dims(dims: Sequence[int]) -> Dims:
    d1, d2 = (int(d) for d in dims)
    if d1 < 2 or d2 < 2:
        raise DimensionError(f"subsystem dimensions must be >= 2, got {(d1, d2)}")
    return Dims(d1, d2)


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def _check_bipartite(m: np.ndarray, dims: Dims) -> None:
    n = dims.total
    if m.shape != (n, n):
        raise DimensionError(f"matrix of shape {m.shape} does not act on {dims.d1}x{dims.d2}")


def hermitize(h, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Return ``(h + h^dagger)/2`` after checking ``h`` is Hermitian within ``tol``."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise DimensionError(f"expected a square matrix, got {h.shape}")
    dev = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if dev > tol:
        raise NotHermitianError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return (h + h.conj().T) / 2


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace(m, dims: Sequence[int], which: str = "A") -> np.ndarray:
    """Trace out subsystem ``which`` ('A' or 'B')."""
    dims = as_dims(dims)
    m = as_matrix(m)
    _check_bipartite(m, dims)
    t = m.reshape(dims.d1, dims.d2, dims.d1, dims.d2)
    if which == "A":
        return np.einsum("ijik->jk", t)
    if which == "B":
        return np.einsum("ijkj->ik", t)
    raise ValueError(f"subsystem selector must be 'A' or 'B', got {which!r}")


def partial_transpose(m, dims: Sequence[int], which: str = "B") -> np.ndarray:
    dims = as_dims(dims)
    m = as_matrix(m)
    _check_bipartite(m, dims)
    t = m.reshape(dims.d1, dims.d2, dims.d1, dims.d2)
    if which == "B":
        t = t.transpose(0, 3, 2, 1)
    elif which == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem selector must be 'A' or 'B', got {which!r}")
    return t.reshape(dims.total, dims.total)


@dataclass(frozen=True)
class Spectrum:
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])


def hermitian_spectrum(h) -> Spectrum:
    w, v = np.linalg.eigh(hermitize(h))
    return Spectrum(w, v)


def singular_values(m) -> np.ndarray:
    """Singular values in descending order."""
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def trace_norm(m) -> float:
    return float(np.sum(singular_values(m)))


def determinant(m) -> complex:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"determinant needs a square matrix, got {m.shape}")
    return complex(np.linalg.det(m))


def is_positive_semidefinite(h, tol: float = 1e-10) -> bool:
    return hermitian_spectrum(h).min >= -tol


def trace_product(a, b) -> complex:
    """``Tr(a @ b)`` without forming the product."""
    return complex(np.einsum("ij,ji->", a, b))


@lru_cache(maxsize=None)
def _gell_mann(d: int) -> np.ndarray:
    ops = [np.eye(d, dtype=complex)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1
        ops.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j
        m[k, j] = 1j
        ops.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1
        diag[l] = -l
        ops.append(np.diag(diag * np.sqrt(2 / (l * (l + 1)))).astype(complex))
    out = np.array(ops)
    out.setflags(write=False)
    return out


def gell_mann(d: int) -> np.ndarray:
    """Identity followed by the ``d**2 - 1`` generalized Gell-Mann matrices.

    Unnormalized: ``Tr(G_0^2) = d`` and ``Tr(G_a^2) = 2`` otherwise. For
    ``d = 2`` this is ``(I, X, Y, Z)``.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return _gell_mann(int(d))


@lru_cache(maxsize=None)
def _canonical(d: int) -> np.ndarray:
    g = gell_mann(d)
    norms = np.array([np.sqrt(d)] + [np.sqrt(2)] * (d * d - 1))
    out = g / norms[:, None, None]
    out.setflags(write=False)
    return out


def canonical_basis(d: int) -> np.ndarray:
    """Hilbert-Schmidt orthonormal Hermitian basis with ``G_0 = I/sqrt(d)``.

    Returned as an array of shape ``(d*d, d, d)``, ordered identity,
    symmetric off-diagonals (lexicographic), antisymmetric off-diagonals
    (lexicographic), diagonals.
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return _canonical(int(d))


def correlation_matrix_canonical(rho, dims: Sequence[int], tol: float = 1e-10) -> np.ndarray:
    """Real matrix ``C[a, b] = Tr(rho G_a (x) G_b)`` in the canonical bases."""
    dims = as_dims(dims)
    rho = as_matrix(rho)
    _check_bipartite(rho, dims)
    t = rho.reshape(dims.d1, dims.d2, dims.d1, dims.d2)
    ga, gb = canonical_basis(dims.d1), canonical_basis(dims.d2)
    # Tr(rho (A x B)) = sum rho[(i,k),(j,l)] A[j,i] B[l,k]
    c = np.einsum("ikjl,aji,blk->ab", t, ga, gb)
    if np.max(np.abs(c.imag)) > tol:
        raise NotHermitianError("correlation matrix has imaginary entries; input is not Hermitian")
    return c.real


def realignment(rho, dims: Sequence[int]) -> np.ndarray:
    """Realigned matrix ``R[(i,j),(k,l)] = rho[(i,k),(j,l)]``."""
    dims = as_dims(dims)
    rho = as_matrix(rho)
    _check_bipartite(rho, dims)
    t = rho.reshape(dims.d1, dims.d2, dims.d1, dims.d2)
    return t.transpose(0, 2, 1, 3).reshape(dims.d1**2, dims.d2**2)


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    rows, cols = m.shape
    flat = m.reshape(-1)
    return {
        "rows": rows,
        "cols": cols,
        "re": [float(x) for x in flat.real],
        "im": [float(x) for x in flat.imag],
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionError(f"expected {rows * cols} entries, got {re.size} re / {im.size} im")
    return as_matrix((re + 1j * im).reshape(rows, cols))


def haar_state(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())
