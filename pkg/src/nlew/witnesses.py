"""Linear entanglement witnesses, expectation values and the determinant term k."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    Dims,
    DimensionError,
    as_dims,
    as_matrix,
    determinant,
    hermitian_spectrum,
    hermitize,
    partial_trace,
    partial_transpose,
    projector,
    trace_product,
)
from .states import DensityMatrix, FAMILIES, ParameterRangeError, make_state, ppt_classify, separable_samples

SUSPECT_TOL = 1e-8


class NotAWitnessError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Witness:
    """Hermitian operator with a negative eigenvalue, tagged with its origin."""

    matrix: np.ndarray
    dims: Dims
    family: str
    params: dict = field(default_factory=dict)
    require_negative: bool = True

    def __post_init__(self):
        dims = as_dims(self.dims)
        m = hermitize(self.matrix)
        if m.shape != (dims.total, dims.total):
            raise DimensionError(f"witness of shape {m.shape} does not act on {dims.d1}x{dims.d2}")
        if self.require_negative and np.linalg.eigvalsh(m)[0] >= 0:
            raise NotAWitnessError(f"{self.family} has no negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def min_eigenvalue(self) -> float:
        return hermitian_spectrum(self.matrix).min

    @property
    def squared(self) -> np.ndarray:
        return self.matrix @ self.matrix

    def to_dict(self) -> dict:
        return {"family": self.family, "params": dict(self.params), "dims": list(self.dims)}


def wl_p(p: float, check_range: bool = True) -> Witness:
    """Two-qubit witness family ``W_L^p``; valid for ``0 < p <= 1``.

    ``check_range=False`` builds the matrix for any ``p`` (used to make
    deliberately broken fixtures); the negativity check is then skipped too.
    """
    p = float(p)
    if check_range and not 0 < p <= 1:
        raise ParameterRangeError(f"p={p} outside (0, 1]")
    m = 0.5 * np.array(
        [
            [p, 0, 0, 0],
            [0, 1 - p, 1, 0],
            [0, 1, 1 - p, 0],
            [0, 0, 0, p],
        ]
    )
    return Witness(m, Dims(2, 2), "wl_p", {"p": p}, require_negative=check_range)


def wl_projector(psi: Sequence[complex], dims: Sequence[int], family: str = "projector") -> Witness:
    """``(|psi><psi|)^{T_B}``."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    norm = np.linalg.norm(psi)
    if abs(norm - 1) > 1e-9:
        raise ValueError(f"state vector has norm {norm:.12g}, expected 1")
    return Witness(partial_transpose(projector(psi), dims, "B"), dims, family)


def psi_minus() -> np.ndarray:
    return np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)


def wl_psi_minus() -> Witness:
    return wl_projector(psi_minus(), (2, 2), "wl_psi_minus")


def _half_swap(n: int, entries: Sequence[tuple[int, int]]) -> np.ndarray:
    m = np.zeros((n, n))
    for i, j in entries:
        m[i, j] = 0.5
    return m


def wl_3x3() -> Witness:
    """PT of ``(|00> + |11>)/sqrt(2)`` inside two qutrits, entered as given."""
    m = _half_swap(9, [(0, 0), (1, 3), (3, 1), (4, 4)])
    return Witness(m, Dims(3, 3), "wl_3x3")


def wl_phi_plus_2x4() -> Witness:
    """PT of ``(|00> + |11>)/sqrt(2)`` on a qubit and a ququart, entered as given."""
    m = _half_swap(8, [(0, 0), (1, 4), (4, 1), (5, 5)])
    return Witness(m, Dims(2, 4), "wl_phi_plus_2x4")


def wl_2x3() -> Witness:
    """``|psi-><psi-|^{T_B}`` with the qubit pair embedded in a qubit and a qutrit."""
    psi = np.zeros(6, dtype=complex)
    psi[1], psi[3] = 1 / math.sqrt(2), -1 / math.sqrt(2)
    return wl_projector(psi, (2, 3), "wl_2x3")


def wl_c() -> Witness:
    m = np.diag([1, 9, 1, 1, 1, 9, 9, 1, 1]).astype(float)
    for i, j in [(0, 4), (0, 8), (4, 8)]:
        m[i, j] = m[j, i] = -1
    return Witness(m / 33, Dims(3, 3), "wl_c")


WITNESSES = {
    "wl_p": (wl_p, ("p",), (2, 2)),
    "wl_psi_minus": (wl_psi_minus, (), (2, 2)),
    "wl_2x3": (wl_2x3, (), (2, 3)),
    "wl_3x3": (wl_3x3, (), (3, 3)),
    "wl_phi_plus_2x4": (wl_phi_plus_2x4, (), (2, 4)),
    "wl_c": (wl_c, (), (3, 3)),
}


def make_witness(name: str, params: dict | None = None) -> Witness:
    try:
        builder, names, _ = WITNESSES[name]
    except KeyError:
        raise KeyError(f"unknown witness {name!r}; known: {sorted(WITNESSES)}") from None
    params = dict(params or {})
    if set(params) != set(names):
        raise ParameterRangeError(f"{name} expects parameters {list(names)}, got {sorted(params)}")
    return builder(**params)


def witness_registry() -> list[dict]:
    return [
        {"witness": name, "parameters": list(names), "dims": list(dims)}
        for name, (_, names, dims) in WITNESSES.items()
    ]


def _matrix_of(w) -> np.ndarray:
    return w.matrix if isinstance(w, (Witness, DensityMatrix)) else as_matrix(w)


def expectation(w, rho: DensityMatrix, imag_tol: float = 1e-10) -> float:
    """Real ``Tr(W rho)``; a non-negligible imaginary part is an error."""
    m = _matrix_of(w)
    r = rho.matrix
    if m.shape != r.shape:
        raise DimensionError(f"operator {m.shape} and state {r.shape} differ in size")
    val = trace_product(m, r)
    if abs(val.imag) > imag_tol:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return val.real


@dataclass(frozen=True)
class KTerm:
    value: float
    det_marginal: float
    det_full: float


def k_term(rho: DensityMatrix) -> KTerm:
    """``det(I + Tr_A rho) - det(I + rho)``; non-positive on PPT states."""
    d_marg = determinant(np.eye(rho.d2) + partial_trace(rho.matrix, rho.dims, "A")).real
    d_full = determinant(np.eye(rho.dims.total) + rho.matrix).real
    return KTerm(d_marg - d_full, d_marg, d_full)


@dataclass
class CertificationReport:
    witness: dict
    samples: int
    seed: int
    min_separable: float
    min_eigenvalue: float
    detected: list = field(default_factory=list)

    @property
    def has_negative_eigenvalue(self) -> bool:
        return self.min_eigenvalue < 0

    @property
    def suspect(self) -> bool:
        return self.min_separable < -SUSPECT_TOL or not self.has_negative_eigenvalue

    def to_dict(self) -> dict:
        return {
            "witness": self.witness,
            "samples": self.samples,
            "seed": self.seed,
            "min_separable_expectation": self.min_separable,
            "min_eigenvalue": self.min_eigenvalue,
            "has_negative_eigenvalue": self.has_negative_eigenvalue,
            "suspect": self.suspect,
            "detected": self.detected,
        }


def _zoo_probes(dims: Dims) -> list[tuple[str, DensityMatrix]]:
    probes = []
    for fam in FAMILIES.values():
        if fam.dims != dims:
            continue
        if not fam.params:
            probes.append((fam.name, make_state(fam)))
            continue
        if len(fam.params) != 1:
            continue
        p = fam.params[0]
        lo = p.lo if math.isfinite(p.lo) and not p.lo_open else (1e-3 if p.lo == 0 else p.lo + 1e-3)
        hi = p.hi if math.isfinite(p.hi) else 10.0
        for v in np.linspace(lo, hi, 11):
            try:
                probes.append((f"{fam.name}({p.name}={v:.4g})", make_state(fam, [v])))
            except ValueError:
                continue
    return probes


def certify_witness(w: Witness, samples: int = 10_000, seed: int = 42, scan_zoo: bool = False) -> CertificationReport:
    """Empirical check of both witness conditions.

    The minimum over ``samples`` seeded separable states, plus the
    computational product basis, should be non-negative, and ``W`` needs a
    negative eigenvalue. With ``scan_zoo`` the registered families of matching
    dimension are probed and negative expectations listed.
    """
    m = w.matrix
    # diagonal entries are the computational product-basis expectations
    lowest = float(np.min(np.diag(m).real))
    for rho in separable_samples(w.dims, samples, seed):
        lowest = min(lowest, trace_product(m, rho).real)
    detected = []
    if scan_zoo:
        for label, rho in _zoo_probes(w.dims):
            val = expectation(m, rho)
            if val < -SUSPECT_TOL:
                detected.append({"state": label, "expectation": val, "ppt": ppt_classify(rho).label})
    return CertificationReport(w.to_dict(), samples, seed, lowest, hermitian_spectrum(m).min, detected)
