"""Nonlinear witnesses built from linear ones, evaluated against a probe state.

Most constructions depend on the probe state itself, so the main entry point
is :func:`evaluate`, which returns the scalar together with every term that
went into it. :func:`materialize` gives the explicit operator when needed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .linalg import (
    DimensionError,
    correlation_matrix_canonical,
    determinant,
    hermitian_spectrum,
    partial_trace,
    trace_product,
)
from .states import DensityMatrix
from .witnesses import Witness, k_term

AUDIT_TOL = 1e-10


class NlewKind(str, enum.Enum):
    F_BASIC = "F_BASIC"
    WNL1 = "WNL1"
    WNL2 = "WNL2"
    WNL3 = "WNL3"
    WNL4 = "WNL4"
    CCNR_L = "CCNR_L"
    CCNR_NL = "CCNR_NL"
    DV_L = "DV_L"
    DV_NL = "DV_NL"

    @property
    def needs_witness(self) -> bool:
        return self not in _STATE_ONLY

    @property
    def correlation_based(self) -> bool:
        return self in _STATE_ONLY


_STATE_ONLY = {NlewKind.CCNR_L, NlewKind.CCNR_NL, NlewKind.DV_L, NlewKind.DV_NL}


class ConstructionError(ValueError):
    """The requested construction is undefined for these inputs."""


# Order of intermediates in flattened (CSV) output.
INTERMEDIATE_KEYS = (
    "tr_w",
    "tr_w2",
    "k",
    "det_marginal",
    "det_full",
    "det_rho",
    "det_marginal_rho",
    "h1",
    "h2",
    "sep_max",
    "cross",
    "cross_min_eig",
    "lambda_max_rho",
    "lambda_max_wl",
    "c_offset",
    "c_asymmetry",
    "dim",
    "d1",
    "d2",
)


def _value_from(kind: NlewKind, t: dict) -> float:
    D = t["dim"]
    if kind is NlewKind.F_BASIC:
        return t["tr_w2"] + t["tr_w"]
    if kind is NlewKind.WNL1:
        return t["tr_w2"] / D + D / (D + 1) * t["tr_w"] - t["k"]
    if kind is NlewKind.WNL2:
        return t["tr_w2"] + D**2 * t["tr_w"] - t["k"] / t["d2"] + t["d2"] * t["cross"]
    if kind is NlewKind.WNL3:
        return t["tr_w2"] - t["k"] / D**2 + D**2 * t["cross"]
    if kind is NlewKind.WNL4:
        return t["sep_max"] - t["tr_w2"] + t["h2"] * t["tr_w"]
    if kind in (NlewKind.CCNR_L, NlewKind.DV_L):
        return t["tr_w"]
    if kind in (NlewKind.CCNR_NL, NlewKind.DV_NL):
        return t["tr_w"] - t["tr_w2"] / t["lambda_max_wl"]
    raise ValueError(kind)


@dataclass
class NlewEvaluation:
    kind: NlewKind
    value: float
    intermediates: dict = field(default_factory=dict)

    def recompute(self) -> float:
        return _value_from(self.kind, self.intermediates)

    def audit(self, tol: float = AUDIT_TOL) -> bool:
        return abs(self.recompute() - self.value) <= tol

    @property
    def detected(self) -> bool:
        """Negative value from a construction that is actually a witness.

        The correlation-based linear operators are negative definite when
        ``lambda_max(W_L) <= 0``; a negative value then says nothing.
        """
        if self.kind.correlation_based:
            return self.value < 0 and self.intermediates["lambda_max_wl"] > 0
        return self.value < 0

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "value": self.value, "intermediates": dict(self.intermediates)}

    def csv_row(self) -> list:
        return [self.kind.value, self.value] + [self.intermediates.get(k, "") for k in INTERMEDIATE_KEYS]


def _base_terms(rho: DensityMatrix) -> dict:
    kt = k_term(rho)
    return {
        "k": kt.value,
        "det_marginal": kt.det_marginal,
        "det_full": kt.det_full,
        "dim": rho.dims.total,
        "d1": rho.d1,
        "d2": rho.d2,
    }


def _check_dims(w: Witness, rho: DensityMatrix) -> None:
    if w.dims != rho.dims:
        raise DimensionError(f"witness acts on {tuple(w.dims)} but state on {tuple(rho.dims)}")


def cross_operator(rho: DensityMatrix) -> np.ndarray:
    """``I (x) Tr_A(rho) - rho``; PSD for PPT states."""
    return np.kron(np.eye(rho.d1), partial_trace(rho.matrix, rho.dims, "A")) - rho.matrix


def h2_term(rho: DensityMatrix) -> tuple[float, float, float]:
    """``det(rho) - (det(Tr_A rho)/d1)**d1`` with its two ingredients."""
    det_rho = determinant(rho.matrix).real
    det_marg = determinant(partial_trace(rho.matrix, rho.dims, "A")).real
    return det_rho - (det_marg / rho.d1) ** rho.d1, det_rho, det_marg


def f_basic(w: Witness) -> np.ndarray:
    return w.squared + w.matrix


def _correlation_witness(rho: DensityMatrix, kind: NlewKind, symmetrize: bool = True) -> tuple[np.ndarray, dict]:
    if rho.d1 != rho.d2:
        raise DimensionError(f"{kind.value} needs d x d systems, got {tuple(rho.dims)}")
    d = rho.d1
    c = correlation_matrix_canonical(rho.matrix, rho.dims)
    asym = float(np.max(np.abs(c - c.T)))
    if symmetrize:
        c = (c + c.T) / 2
    offset = 1.0 if kind in (NlewKind.CCNR_L, NlewKind.CCNR_NL) else d * (d - 1) / 2
    kt = k_term(rho)
    lam_rho = hermitian_spectrum(rho.matrix).max
    w = (offset - d**2 * (d + 1) ** 2 * kt.value) * np.eye(d * d) - c / lam_rho
    terms = {
        "k": kt.value,
        "det_marginal": kt.det_marginal,
        "det_full": kt.det_full,
        "lambda_max_rho": lam_rho,
        "c_offset": offset,
        "c_asymmetry": asym,
    }
    return w, terms


def wl_ccnr(rho: DensityMatrix, symmetrize: bool = True) -> np.ndarray:
    """State-tailored linear witness from the realignment bound.

    The correlation matrix is read as an operator on the computational basis.
    By default its symmetric part is used so the result is Hermitian.
    """
    return _correlation_witness(rho, NlewKind.CCNR_L, symmetrize)[0]


def wl_dv(rho: DensityMatrix, symmetrize: bool = True) -> np.ndarray:
    return _correlation_witness(rho, NlewKind.DV_L, symmetrize)[0]


def _top_eigenvalue(m: np.ndarray) -> float:
    if np.allclose(m, m.conj().T, atol=1e-12):
        return hermitian_spectrum(m).max
    return float(np.max(np.linalg.eigvals(m).real))


def _tr(a: np.ndarray, rho: DensityMatrix) -> float:
    return trace_product(a, rho.matrix).real


def evaluate(
    kind: NlewKind | str,
    rho: DensityMatrix,
    witness: Witness | None = None,
    sep_max: float | None = None,
    symmetrize: bool = True,
) -> NlewEvaluation:
    """``Tr(W_NL rho)`` for the chosen construction, with all intermediates."""
    kind = NlewKind(kind)
    if kind.correlation_based:
        wl, terms = _correlation_witness(rho, kind, symmetrize)
        terms.update(dim=rho.dims.total, d1=rho.d1, d2=rho.d2)
        terms["tr_w"] = _tr(wl, rho)
        terms["tr_w2"] = _tr(wl @ wl, rho)
        terms["lambda_max_wl"] = _top_eigenvalue(wl)
        if kind in (NlewKind.CCNR_NL, NlewKind.DV_NL) and terms["lambda_max_wl"] <= 0:
            raise ConstructionError(
                f"{kind.value} undefined: lambda_max(W_L) = {terms['lambda_max_wl']:.6g} is not positive"
            )
        return NlewEvaluation(kind, _value_from(kind, terms), terms)

    if witness is None:
        raise ValueError(f"{kind.value} needs a linear witness")
    _check_dims(witness, rho)
    w = witness.matrix
    terms = _base_terms(rho)
    terms["tr_w"] = _tr(w, rho)
    terms["tr_w2"] = _tr(w @ w, rho)
    if kind in (NlewKind.WNL2, NlewKind.WNL3):
        cross = cross_operator(rho)
        terms["cross"] = _tr(cross, rho)
        terms["cross_min_eig"] = hermitian_spectrum(cross).min
    if kind is NlewKind.WNL4:
        if sep_max is None:
            raise ValueError("WNL4 needs sep_max")
        lmin_sq = hermitian_spectrum(w @ w).min
        if sep_max < lmin_sq - 1e-12:
            raise ConstructionError(f"sep_max {sep_max} is below lambda_min(W^2) = {lmin_sq}")
        h2, det_rho, det_marg = h2_term(rho)
        terms.update(
            sep_max=float(sep_max), h1=float(sep_max) - terms["tr_w2"], h2=h2, det_rho=det_rho, det_marginal_rho=det_marg
        )
    return NlewEvaluation(kind, _value_from(kind, terms), terms)


def materialize(
    kind: NlewKind | str,
    rho: DensityMatrix,
    witness: Witness | None = None,
    sep_max: float | None = None,
    symmetrize: bool = True,
) -> np.ndarray:
    """Explicit operator whose expectation on ``rho`` is ``evaluate(...).value``."""
    kind = NlewKind(kind)
    if kind.correlation_based:
        wl, _ = _correlation_witness(rho, kind, symmetrize)
        if kind in (NlewKind.CCNR_L, NlewKind.DV_L):
            return wl
        lam = _top_eigenvalue(wl)
        if lam <= 0:
            raise ConstructionError(f"{kind.value} undefined: lambda_max(W_L) = {lam:.6g}")
        return wl - wl @ wl / lam
    if witness is None:
        raise ValueError(f"{kind.value} needs a linear witness")
    _check_dims(witness, rho)
    w = witness.matrix
    w2 = w @ w
    D = rho.dims.total
    eye = np.eye(D)
    if kind is NlewKind.F_BASIC:
        return w2 + w
    k = k_term(rho).value
    if kind is NlewKind.WNL1:
        return w2 / D + D / (D + 1) * w - k * eye
    if kind is NlewKind.WNL2:
        return w2 + D**2 * w - k / rho.d2 * eye + rho.d2 * cross_operator(rho)
    if kind is NlewKind.WNL3:
        return w2 - k / D**2 * eye + D**2 * cross_operator(rho)
    if kind is NlewKind.WNL4:
        if sep_max is None:
            raise ValueError("WNL4 needs sep_max")
        return sep_max * eye - w2 + h2_term(rho)[0] * w
    raise ValueError(kind)


def correlation_trace_norm(rho: DensityMatrix) -> float:
    return float(np.sum(np.linalg.svd(correlation_matrix_canonical(rho.matrix, rho.dims), compute_uv=False)))


def ccnr_violated(rho: DensityMatrix) -> bool:
    return correlation_trace_norm(rho) > 1 + 1e-12


def dv_violated(rho: DensityMatrix) -> bool:
    d = rho.d1
    return correlation_trace_norm(rho) > d * (d - 1) / 2 + 1e-12

