"""Density-matrix families, PPT classification and separable sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .linalg import (
    Dims,
    DimensionError,
    as_dims,
    as_matrix,
    gell_mann,
    haar_state,
    hermitian_spectrum,
    hermitize,
    partial_transpose,
    projector,
)

STATE_TOL = 1e-9
PPT_TOL = 1e-10


class InvalidStateError(ValueError):
    pass


class ParameterRangeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace PSD Hermitian matrix on ``d1 x d2``.

    The stored matrix is the Hermitian part of the input; construction fails
    if the input is more than ``STATE_TOL`` away from a valid state.
    """

    matrix: np.ndarray
    dims: Dims

    def __post_init__(self):
        dims = as_dims(self.dims)
        m = as_matrix(self.matrix)
        if m.shape != (dims.total, dims.total):
            raise DimensionError(f"state of shape {m.shape} does not act on {dims.d1}x{dims.d2}")
        try:
            m = hermitize(m, STATE_TOL)
        except ValueError as exc:
            raise InvalidStateError(str(exc)) from None
        tr = np.trace(m).real
        if abs(tr - 1) > STATE_TOL:
            raise InvalidStateError(f"trace is {tr!r}, expected 1")
        lmin = np.linalg.eigvalsh(m)[0]
        if lmin < -STATE_TOL:
            raise InvalidStateError(f"state has negative eigenvalue {lmin:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", dims)

    @property
    def d1(self) -> int:
        return self.dims.d1

    @property
    def d2(self) -> int:
        return self.dims.d2


def as_state(rho, dims: Sequence[int] | None = None) -> DensityMatrix:
    if isinstance(rho, DensityMatrix):
        return rho
    if dims is None:
        raise ValueError("dims are required when passing a raw matrix")
    return DensityMatrix(rho, dims)


@dataclass(frozen=True)
class Param:
    name: str
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def check(self, value: float) -> float:
        value = float(value)
        below = value <= self.lo if self.lo_open else value < self.lo
        above = value >= self.hi if self.hi_open else value > self.hi
        if below or above or math.isnan(value):
            raise ParameterRangeError(f"{self.name}={value} outside {self.interval()}")
        return value

    def interval(self) -> str:
        return f"{'(' if self.lo_open else '['}{self.lo}, {self.hi}{')' if self.hi_open else ']'}"


@dataclass(frozen=True)
class StateFamily:
    name: str
    dims: Dims
    params: tuple[Param, ...]
    builder: Callable[..., np.ndarray] = field(repr=False)
    description: str = ""

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)

    def to_dict(self) -> dict:
        return {
            "family": self.name,
            "dims": list(self.dims),
            "parameters": [
                {"name": p.name, "lo": p.lo, "hi": p.hi, "lo_open": p.lo_open, "hi_open": p.hi_open}
                for p in self.params
            ],
            "description": self.description,
        }


def _ket(index: int, n: int) -> np.ndarray:
    v = np.zeros(n, dtype=complex)
    v[index] = 1
    return v


def _bell_phi(sign: int = 1) -> np.ndarray:
    return (_ket(0, 4) + sign * _ket(3, 4)) / math.sqrt(2)


def _rho_ent() -> np.ndarray:
    return np.array(
        [
            [13 / 30, 0, 0, 11 / 30],
            [0, 1 / 15, 0, 0],
            [0, 0, 1 / 15, 0],
            [11 / 30, 0, 0, 13 / 30],
        ]
    )


def _rho_st(s: float, t: float) -> np.ndarray:
    return np.array(
        [
            [5 / 8, 0, 0, t / 2],
            [0, 0, 0, 0],
            [0, 0, (s - 0.25) / 2, 0],
            [t / 2, 0, 0, (1 - s) / 2],
        ]
    )


def _isotropic_2x2(alpha: float) -> np.ndarray:
    a = alpha
    return np.array(
        [
            [(1 + a) / 4, 0, 0, a / 2],
            [0, (1 - a) / 4, 0, 0],
            [0, 0, (1 - a) / 4, 0],
            [a / 2, 0, 0, (1 + a) / 4],
        ]
    )


# MEMS mixture weights other than q are fixed
_MEMS_P2 = 0.00003
_MEMS_P3 = 0.02
_MEMS_QMAX = 0.97997


def _mems(q: float) -> np.ndarray:
    p1, p2, p3, p4 = q, _MEMS_P2, _MEMS_P3, _MEMS_QMAX - q
    return (
        p1 * projector(_bell_phi(-1))
        + p2 * projector(_ket(1, 4))
        + p3 * projector(_bell_phi(+1))
        + p4 * projector(_ket(2, 4))
    )


def _rho_a(a: float) -> np.ndarray:
    return np.array(
        [
            [a / 2, 0, 0, -a / 2],
            [0, 1 - a, 0, 0],
            [0, 0, 0, 0],
            [-a / 2, 0, 0, a / 2],
        ]
    )


def _rho_2x3() -> np.ndarray:
    m = np.zeros((6, 6))
    m[1, 1] = m[3, 3] = 0.5
    m[1, 3] = m[3, 1] = -0.5
    return m


def _max_entangled(d: int) -> np.ndarray:
    return sum(_ket(i * d + i, d * d) for i in range(d)) / math.sqrt(d)


def _isotropic_3x3(gamma: float) -> np.ndarray:
    return (1 - gamma) / 8 * np.eye(9) + (9 * gamma - 1) / 8 * projector(_max_entangled(3))


def _rho_b(b: float) -> np.ndarray:
    c = b / (6 * b + 1)
    m = np.zeros((8, 8))
    for i, j in [(0, 7), (1, 6), (2, 5)]:
        m[i, i] = m[j, j] = m[i, j] = m[j, i] = c
    m[7, 7] = (b + 1) / (6 * b + 1)
    return m


RHO1_DECIMAL = (0.265822, 0.367089)
RHO1_EXACT = (21 / 79, 29 / 79)


def _rho_1(diag: float, block: float) -> np.ndarray:
    return np.array(
        [
            [diag, 0, 0, 0],
            [0, block, -block, 0],
            [0, -block, block, 0],
            [0, 0, 0, 0],
        ]
    )


def _rho_beta(beta: float) -> np.ndarray:
    vecs = []
    for i in (1, 2):
        vecs.append(_ket(0 * 3 + i, 9) - beta * _ket(i * 3 + 0, 9))
    vecs.append(_ket(0, 9) + _ket(4, 9) + _ket(8, 9))
    return sum(projector(v) for v in vecs) / (5 + 2 * beta**2)


def _rho_x(x: float) -> np.ndarray:
    m = np.zeros((9, 9))
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            m[i, j] = 1
    for idx, v in zip((1, 2, 3, 5, 6, 7), (x, 1 / x, 1 / x, x, x, 1 / x)):
        m[idx, idx] = v
    return m / (3 * (1 + x + 1 / x))


def _horodecki(gamma: float) -> np.ndarray:
    # basis ordering |00>, |01>, ..., |22>
    sigma_plus = sum(projector(_ket(3 * a + b, 9)) for a, b in [(0, 1), (1, 2), (2, 0)]) / 3
    sigma_minus = sum(projector(_ket(3 * a + b, 9)) for a, b in [(1, 0), (2, 1), (0, 2)]) / 3
    return 2 / 7 * projector(_max_entangled(3)) + gamma / 7 * sigma_plus + (5 - gamma) / 7 * sigma_minus


def _family(name, dims, params, builder, description):
    return StateFamily(name, Dims(*dims), tuple(params), builder, description)


FAMILIES: dict[str, StateFamily] = {
    f.name: f
    for f in [
        _family("phi_plus", (2, 2), [], lambda: projector(_bell_phi(+1)), "Bell state |phi+><phi+|"),
        _family("rho_ent", (2, 2), [], _rho_ent, "two-qubit entangled state detected by the psi- witness"),
        _family(
            "rho_st",
            (2, 2),
            [Param("s", 0.0, 1.0), Param("t", -1.0, 1.0)],
            _rho_st,
            "two-parameter two-qubit family; PSD checked numerically",
        ),
        _family("isotropic_2x2", (2, 2), [Param("alpha", -1 / 3, 1.0)], _isotropic_2x2, "two-qubit isotropic state"),
        _family("mems", (2, 2), [Param("q", 0.0, _MEMS_QMAX)], _mems, "maximally entangled mixed state slice"),
        _family("rho_a", (2, 2), [Param("a", 0.0, 1.0)], _rho_a, "two-qubit family, entangled for a > 0"),
        _family("rho_2x3", (2, 3), [], _rho_2x3, "qubit-qutrit NPT state"),
        _family("isotropic_3x3", (3, 3), [Param("gamma", 0.0, 1.0)], _isotropic_3x3, "two-qutrit isotropic state"),
        _family("rho_b", (2, 4), [Param("b", 0.0, 1.0)], _rho_b, "qubit-ququart NPT family"),
        _family("rho_1", (2, 2), [], lambda: _rho_1(*RHO1_DECIMAL), "two-qubit NPT state, 6-digit entries"),
        _family("rho_1_exact", (2, 2), [], lambda: _rho_1(*RHO1_EXACT), "two-qubit NPT state, entries 21/79 and 29/79"),
        _family(
            "rho_beta", (3, 3), [Param("beta", 1 / math.sqrt(2), 1.0)], _rho_beta, "two-qutrit NPT family (DV example)"
        ),
        _family("rho_x", (3, 3), [Param("x", 0.0, math.inf, lo_open=True, hi_open=True)], _rho_x, "two-qutrit PPT entangled family"),
        _family("horodecki", (3, 3), [Param("gamma", 2.0, 5.0)], _horodecki, "Horodecki two-qutrit family"),
    ]
}


def get_family(name: str) -> StateFamily:
    try:
        return FAMILIES[name]
    except KeyError:
        raise KeyError(f"unknown state family {name!r}; known: {sorted(FAMILIES)}") from None


def make_state(family: str | StateFamily, params: Sequence[float] | Mapping[str, float] | None = None, **kwargs) -> DensityMatrix:
    """Build a member of a registered family.

    ``params`` may be positional values in declared order or a mapping by
    name; keyword arguments are merged into the mapping form.
    """
    fam = get_family(family) if isinstance(family, str) else family
    if params is None:
        params = {}
    if isinstance(params, Mapping):
        given = {**params, **kwargs}
    else:
        if kwargs:
            raise TypeError("pass parameters either positionally or by name, not both")
        params = list(params)
        if len(params) != len(fam.params):
            raise ParameterRangeError(f"{fam.name} takes {len(fam.params)} parameters, got {len(params)}")
        given = dict(zip(fam.param_names, params))
    unknown = set(given) - set(fam.param_names)
    if unknown:
        raise ParameterRangeError(f"{fam.name} has no parameter(s) {sorted(unknown)}")
    missing = [n for n in fam.param_names if n not in given]
    if missing:
        raise ParameterRangeError(f"{fam.name} missing parameter(s) {missing}")
    values = [p.check(given[p.name]) for p in fam.params]
    m = fam.builder(*values)
    try:
        return DensityMatrix(m, fam.dims)
    except InvalidStateError as exc:
        raise InvalidStateError(f"{fam.name}{tuple(values)} is not a valid state: {exc}") from None


def family_registry() -> list[dict]:
    return [f.to_dict() for f in FAMILIES.values()]


@dataclass(frozen=True)
class PPTResult:
    label: str
    min_eigenvalue: float

    @property
    def is_ppt(self) -> bool:
        return self.label == "PPT"


def ppt_classify(rho: DensityMatrix, tol: float = PPT_TOL) -> PPTResult:
    lmin = hermitian_spectrum(partial_transpose(rho.matrix, rho.dims, "B")).min
    return PPTResult("NPT" if lmin < -tol else "PPT", lmin)


def bloch_matrix(vec: Sequence[float]) -> np.ndarray:
    """``(I + sum_i v_i O_i) / d`` with unnormalized Pauli/Gell-Mann ``O_i``.

    Length 3 selects a qubit, length 8 a qutrit. Components follow the
    ordering of :func:`nlew.linalg.gell_mann` (for qutrits: three symmetric,
    three antisymmetric, then ``diag(1,-1,0)`` and ``diag(1,1,-2)/sqrt(3)``).
    """
    vec = np.asarray(vec, dtype=float).reshape(-1)
    d = {3: 2, 8: 3}.get(vec.size)
    if d is None:
        raise ValueError(f"Bloch vector must have 3 or 8 components, got {vec.size}")
    g = gell_mann(d)
    return (g[0] + np.einsum("i,ijk->jk", vec, g[1:])) / d


def bloch_state(vec: Sequence[float], tol: float = STATE_TOL) -> np.ndarray:
    """Validated single-party state from a Bloch vector.

    The qutrit unit ball is larger than the state space, so PSD is checked
    explicitly.
    """
    vec = np.asarray(vec, dtype=float).reshape(-1)
    norm2 = float(vec @ vec)
    if norm2 > 1 + tol:
        raise InvalidStateError(f"Bloch vector norm^2 {norm2:.6g} exceeds 1")
    m = bloch_matrix(vec)
    lmin = np.linalg.eigvalsh(m)[0]
    if lmin < -tol:
        raise InvalidStateError(f"Bloch vector gives a non-PSD matrix (lambda_min = {lmin:.6g})")
    return m


def product_state_from_bloch(a: Sequence[float], b: Sequence[float]) -> DensityMatrix:
    ra, rb = bloch_state(a), bloch_state(b)
    return DensityMatrix(np.kron(ra, rb), (ra.shape[0], rb.shape[0]))


@dataclass(frozen=True, eq=False)
class SeparableMixture:
    dims: Dims
    weights: np.ndarray
    factors: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < 0) or abs(w.sum() - 1) > 1e-12:
            raise ValueError("weights must lie on the probability simplex")
        if len(w) != len(self.factors):
            raise ValueError("one weight per product factor")

    def matrix(self) -> np.ndarray:
        return sum(w * np.kron(a, b) for w, (a, b) in zip(self.weights, self.factors))

    def state(self) -> DensityMatrix:
        return DensityMatrix(self.matrix(), self.dims)


def sample_separable(dims: Sequence[int], k: int, seed: int | np.random.Generator | None = None) -> SeparableMixture:
    """Mixture of ``k`` Haar-random pure product states with Dirichlet(1) weights."""
    if k < 1:
        raise ValueError("k must be >= 1")
    dims = as_dims(dims)
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(k)) if k > 1 else np.ones(1)
    factors = tuple(
        (projector(haar_state(dims.d1, rng)), projector(haar_state(dims.d2, rng))) for _ in range(k)
    )
    return SeparableMixture(dims, weights, factors)


def separable_samples(dims: Sequence[int], n: int, seed: int = 42, k_max: int = 10) -> Iterator[np.ndarray]:
    """Yield ``n`` separable density matrices, one independent stream per sample."""
    for child in np.random.SeedSequence(seed).spawn(n):
        rng = np.random.default_rng(child)
        k = int(rng.integers(1, k_max + 1))
        yield sample_separable(dims, k, rng).matrix()
