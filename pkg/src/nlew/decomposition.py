"""Expansion of bipartite Hermitian operators over local Pauli / Gell-Mann products."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_dims, gell_mann, hermitize

RESIDUAL_TOL = 1e-10

_LABELS = {
    2: ("I", "X", "Y", "Z"),
    3: ("I",) + tuple(f"t{i}" for i in range(1, 9)),
}


class UnsupportedDimensionError(ValueError):
    pass


@dataclass(frozen=True)
class LocalBasis:
    """Unnormalized local observables: ``Tr(O_a O_b) = norms[a] * delta_ab``."""

    d: int
    labels: tuple[str, ...]
    ops: np.ndarray
    norms: np.ndarray


def local_basis(d: int) -> LocalBasis:
    if d not in _LABELS:
        raise UnsupportedDimensionError(f"local bases are provided for d in (2, 3), got {d}")
    ops = gell_mann(d)
    norms = np.einsum("aij,aji->a", ops, ops).real
    return LocalBasis(d, _LABELS[d], ops, norms)


@dataclass
class DecompositionResult:
    coefficients: np.ndarray
    labels_a: tuple[str, ...]
    labels_b: tuple[str, ...]
    residual: float

    def coefficient(self, a: str, b: str) -> float:
        return float(self.coefficients[self.labels_a.index(a), self.labels_b.index(b)])

    def nonzero(self, tol: float = 1e-12) -> dict[tuple[str, str], float]:
        out = {}
        for i, la in enumerate(self.labels_a):
            for j, lb in enumerate(self.labels_b):
                c = self.coefficients[i, j]
                if abs(c) > tol:
                    out[(la, lb)] = float(c)
        return out

    def to_csv(self, tol: float = 1e-12) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["basis_a", "basis_b", "coefficient"])
        for (a, b), c in self.nonzero(tol).items():
            writer.writerow([a, b, repr(c)])
        return buf.getvalue()

    def to_dict(self, tol: float = 1e-12) -> dict:
        return {
            "labels_a": list(self.labels_a),
            "labels_b": list(self.labels_b),
            "residual": self.residual,
            "terms": [{"a": a, "b": b, "coefficient": c} for (a, b), c in self.nonzero(tol).items()],
        }


def _basis_pair(dims):
    dims = as_dims(dims)
    return local_basis(dims.d1), local_basis(dims.d2)


def reconstruct(result: DecompositionResult) -> np.ndarray:
    ba = local_basis(int(math.isqrt(len(result.labels_a))))
    bb = local_basis(int(math.isqrt(len(result.labels_b))))
    return np.einsum("ab,aij,bkl->ikjl", result.coefficients, ba.ops, bb.ops).reshape(ba.d * bb.d, ba.d * bb.d)


def decompose(h, dims) -> DecompositionResult:
    """Real coefficients ``c_ab = Tr(h O_a (x) O_b) / (Tr O_a^2 Tr O_b^2)``."""
    ba, bb = _basis_pair(dims)
    h = hermitize(h)
    n = ba.d * bb.d
    if h.shape != (n, n):
        raise ValueError(f"operator of shape {h.shape} does not act on {ba.d}x{bb.d}")
    t = h.reshape(ba.d, bb.d, ba.d, bb.d)
    # Tr(h (A x B)) = sum h[(i,k),(j,l)] A[j,i] B[l,k]
    raw = np.einsum("ikjl,aji,blk->ab", t, ba.ops, bb.ops) / np.outer(ba.norms, bb.norms)
    if np.max(np.abs(raw.imag)) > RESIDUAL_TOL:
        raise ValueError("coefficients are not real")
    result = DecompositionResult(raw.real, ba.labels, bb.labels, 0.0)
    result.residual = float(np.max(np.abs(reconstruct(result) - h)))
    if result.residual > RESIDUAL_TOL:
        raise ArithmeticError(f"reconstruction residual {result.residual:.3e}")
    return result


# Reference coefficient tables, keyed by basis labels.
# Operator parts only; any "-k I" term is left out.


def reference_wlp(p: float) -> dict:
    return {("I", "I"): 0.25, ("X", "X"): 0.25, ("Y", "Y"): 0.25, ("Z", "Z"): (2 * p - 1) / 4}


def reference_wlp_squared(p: float) -> dict:
    xy = 2 * (1 - p) / 4
    return {("I", "I"): (1 + p * p - p) / 4, ("X", "X"): xy, ("Y", "Y"): xy, ("Z", "Z"): (p - 1) / 4}


def reference_wnl1_wlp(p: float) -> dict:
    xy = (13 - 5 * p) / 40
    return {("I", "I"): (5 * p * p - 5 * p + 21) / 80, ("X", "X"): xy, ("Y", "Y"): xy, ("Z", "Z"): (37 * p - 21) / 80}


def _qutrit_table(ii, low, high, diag, cross) -> dict:
    out = {("I", "I"): ii}
    for i in range(1, 4):
        out[(f"t{i}", f"t{i}")] = -low
    for i in range(4, 7):
        out[(f"t{i}", f"t{i}")] = high
    for i in (7, 8):
        out[(f"t{i}", f"t{i}")] = diag
    out[("t7", "t8")] = cross
    out[("t8", "t7")] = -cross
    return out


def reference_wlc() -> dict:
    return _qutrit_table(11 / 3 / 33, 0.5 / 33, 0.5 / 33, -2 / 33, 2 * math.sqrt(3) / 33)


def reference_wnl1_wlc() -> dict:
    return _qutrit_table(
        30253 / 294030,
        2683 / 5940 / 33,
        2683 / 5940 / 33,
        -2768 / 1485 / 33,
        30503 * math.sqrt(3) / 16335 / 33,
    )


@dataclass(frozen=True)
class Mismatch:
    term: tuple[str, str]
    reference: float
    recomputed: float


def compare_table(result: DecompositionResult, table: dict, tol: float = 1e-10) -> list[Mismatch]:
    """Entries where the reference table and the recomputed coefficients differ.

    Terms absent from ``table`` are expected to vanish.
    """
    out = []
    seen = set()
    for (a, b), c in table.items():
        seen.add((a, b))
        got = result.coefficient(a, b)
        if abs(got - c) > tol:
            out.append(Mismatch((a, b), c, got))
    for (a, b), c in result.nonzero(tol).items():
        if (a, b) not in seen:
            out.append(Mismatch((a, b), 0.0, c))
    return out
