"""Maximum of ``Tr(W^2 rho)`` over separable states.

The objective is linear in ``rho``, so the maximum over the separable set is
reached at a pure product state. We search pure products by see-saw: with one
factor fixed the best other factor is the top eigenvector of the conditioned
operator, so every half-step is an exact coordinate maximization.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .linalg import as_dims, haar_state, hermitian_spectrum, hermitize
from .states import ParameterRangeError
from .witnesses import Witness

MAX_ITER = 500
STEP_TOL = 1e-12
DEFAULT_RESTARTS = 64
GRID_RESOLUTION = 6


class NotPositiveError(ValueError):
    pass


def closed_form_wlp(p: float) -> float:
    """Separable maximum of ``Tr((W_L^p)^2 rho)``: ``(2 - 2p + p^2)/4``."""
    p = float(p)
    if not 0 < p <= 1:
        raise ParameterRangeError(f"p={p} outside (0, 1]")
    return (2 - 2 * p + p * p) / 4


@dataclass
class SepMaxResult:
    max_value: float
    argmax: tuple[np.ndarray, np.ndarray]
    restarts: int
    converged: bool
    restart_values: list[float] = field(default_factory=list)
    iterations: int = 0

    def product_state(self) -> np.ndarray:
        v = np.kron(*self.argmax)
        return np.outer(v, v.conj())

    def to_dict(self) -> dict:
        a, b = self.argmax
        return {
            "max_value": self.max_value,
            "argmax": {
                "a": {"re": a.real.tolist(), "im": a.imag.tolist()},
                "b": {"re": b.real.tolist(), "im": b.imag.tolist()},
            },
            "restarts": self.restarts,
            "converged": self.converged,
            "restart_values": list(self.restart_values),
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "SepMaxResult":
        vec = lambda o: np.asarray(o["re"]) + 1j * np.asarray(o["im"])  # noqa: E731
        return cls(
            obj["max_value"],
            (vec(obj["argmax"]["a"]), vec(obj["argmax"]["b"])),
            obj["restarts"],
            obj["converged"],
            obj.get("restart_values", []),
            obj.get("iterations", 0),
        )


def _local_grid(d: int, resolution: int) -> list[np.ndarray]:
    if d == 2:
        out = []
        for theta in np.linspace(0, math.pi, resolution):
            for phi in np.linspace(0, 2 * math.pi, resolution, endpoint=False):
                out.append(np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)]))
        return out
    out = [np.eye(d, dtype=complex)[i] for i in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            for phi in np.linspace(0, 2 * math.pi, resolution, endpoint=False):
                v = np.zeros(d, dtype=complex)
                v[i], v[j] = 1 / math.sqrt(2), np.exp(1j * phi) / math.sqrt(2)
                out.append(v)
    return out


def bloch_grid_seed(dims: Sequence[int], resolution: int = GRID_RESOLUTION) -> list[tuple[np.ndarray, np.ndarray]]:
    """Deterministic pure product states used to seed the see-saw.

    Qubits get a ``resolution x resolution`` (polar, azimuth) sphere grid.
    Larger dimensions get basis kets plus equal-weight two-level
    superpositions with ``resolution`` relative phases.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    dims = as_dims(dims)
    ga, gb = _local_grid(dims.d1, resolution), _local_grid(dims.d2, resolution)
    return [(a, b) for a in ga for b in gb]


def _objective(t: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    v = np.kron(a, b)
    n = v.size
    return float((v.conj() @ t.reshape(n, n) @ v).real)


def _grid_scores(t: np.ndarray, grid: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
    n = t.shape[0] * t.shape[1]
    kets = np.array([np.kron(a, b) for a, b in grid])
    return np.einsum("ni,ij,nj->n", kets.conj(), t.reshape(n, n), kets).real


def _top(m: np.ndarray) -> tuple[float, np.ndarray]:
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return float(w[-1]), v[:, -1]


def _best_b(t: np.ndarray, a: np.ndarray) -> tuple[float, np.ndarray]:
    return _top(np.tensordot(a.conj(), np.tensordot(t, a, axes=([2], [0])), axes=([0], [0])))


def _best_a(t: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    return _top(np.tensordot(b.conj(), np.tensordot(t, b, axes=([3], [0])), axes=([0], [1])))


def _climb(t: np.ndarray, a: np.ndarray, max_iter: int, tol: float):
    value, b = _best_b(t, a)
    for it in range(1, max_iter + 1):
        new_a_val, a = _best_a(t, b)
        new_val, b = _best_b(t, a)
        if new_a_val < value - 1e-12 or new_val < new_a_val - 1e-12:
            raise RuntimeError(f"see-saw step decreased the objective ({value} -> {new_val})")
        if new_val - value < tol:
            return new_val, a, b, it, True
        value = new_val
    return value, a, b, max_iter, False


def seesaw_max(
    w_squared,
    dims: Sequence[int],
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    grid_resolution: int = GRID_RESOLUTION,
    max_iter: int = MAX_ITER,
    tol: float = STEP_TOL,
) -> SepMaxResult:
    """Maximize ``<ab| W^2 |ab>`` over pure product states.

    A quarter of the restarts start from the best points of
    :func:`bloch_grid_seed`; the rest start from Haar-random states drawn
    from ``seed``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    dims = as_dims(dims)
    h = hermitize(w_squared)
    if h.shape != (dims.total, dims.total):
        raise ValueError(f"operator of shape {h.shape} does not act on {dims.d1}x{dims.d2}")
    lmin = hermitian_spectrum(h).min
    if lmin < -1e-10:
        raise NotPositiveError(f"operator is not PSD (lambda_min = {lmin:.3e})")
    t = h.reshape(dims.d1, dims.d2, dims.d1, dims.d2)

    grid = bloch_grid_seed(dims, grid_resolution)
    scores = _grid_scores(t, grid)
    n_grid = min(max(1, restarts // 4), len(grid))
    starts = [grid[i][0] for i in np.argsort(-scores, kind="stable")[:n_grid]]
    rng = np.random.default_rng(seed)
    starts += [haar_state(dims.d1, rng) for _ in range(restarts - n_grid)]

    best = None
    values = []
    all_converged = True
    total_iter = 0
    for a0 in starts:
        val, a, b, it, ok = _climb(t, a0, max_iter, tol)
        values.append(val)
        total_iter += it
        all_converged &= ok
        if best is None or val > best[0]:
            best = (val, a, b)
    # the grid optimum is a feasible point as well
    gi = int(np.argmax(scores))
    if scores[gi] > best[0]:
        best = (float(scores[gi]), *grid[gi])
    val, a, b = best
    return SepMaxResult(_objective(t, a, b), (a, b), restarts, all_converged, values, total_iter)


def witness_sepmax(w: Witness, **kwargs) -> SepMaxResult:
    return seesaw_max(w.squared, w.dims, **kwargs)


def brute_force_qubits(w_squared, resolution: int = 50) -> float:
    """Grid search over both Bloch spheres in (polar, azimuth) angles."""
    t = hermitize(w_squared).reshape(2, 2, 2, 2)
    thetas = np.linspace(0, math.pi, resolution)
    phis = np.linspace(0, 2 * math.pi, resolution, endpoint=False)
    th, ph = np.meshgrid(thetas, phis, indexing="ij")
    kets = np.stack([np.cos(th / 2), np.exp(1j * ph) * np.sin(th / 2)], axis=-1).reshape(-1, 2)
    vals = np.einsum("ni,mj,ijkl,nk,ml->nm", kets.conj(), kets.conj(), t, kets, kets).real
    return float(vals.max())


class SepMaxCache:
    """JSON sidecar mapping witness family and parameters to a result."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._data = json.loads(self.path.read_text()) if self.path.exists() else {}

    @staticmethod
    def key(w: Witness, restarts: int, seed: int) -> str:
        return json.dumps({"family": w.family, "params": w.params, "restarts": restarts, "seed": seed}, sort_keys=True)

    def get(self, w: Witness, restarts: int = DEFAULT_RESTARTS, seed: int = 0) -> SepMaxResult:
        k = self.key(w, restarts, seed)
        if k not in self._data:
            self._data[k] = witness_sepmax(w, restarts=restarts, seed=seed).to_dict()
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(json.dumps(self._data, indent=1, sort_keys=True))
        return SepMaxResult.from_dict(self._data[k])
