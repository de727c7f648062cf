"""One-shot check of every reference number, as a pass/fail table.

Each criterion function returns a list of :class:`Check`. Checks tagged
``REFERENCE`` or ``DERIVED`` decide the exit status; ``ERRATUM`` entries record
recomputed values that disagree with reference ones and never fail a run.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .builders import ConstructionError, NlewKind, ccnr_violated, correlation_trace_norm, evaluate, h2_term
from .decomposition import (
    compare_table,
    decompose,
    reference_wlc,
    reference_wlp,
    reference_wlp_squared,
    reference_wnl1_wlc,
    reference_wnl1_wlp,
    reconstruct,
)
from .linalg import (
    correlation_matrix_canonical,
    determinant,
    hermitian_spectrum,
    partial_trace,
    realignment,
    singular_values,
    trace_norm,
)
from .sepmax import closed_form_wlp, witness_sepmax
from .states import DensityMatrix, make_state, ppt_classify, separable_samples
from .sweep import bisect_boundary
from .witnesses import (
    expectation,
    k_term,
    wl_2x3,
    wl_3x3,
    wl_c,
    wl_p,
    wl_phi_plus_2x4,
    wl_psi_minus,
)

REFERENCE, DERIVED, ERRATUM = "REFERENCE", "DERIVED", "ERRATUM"

#: reference separable maximum for wl_c, at two roundings
WLC_SEPMAX_REF = 0.0401555
WLC_SEPMAX_REF_SHORT = 0.040155
#: closed form behind the reference value; it needs a non-PSD qutrit Bloch vector
WLC_SEPMAX_CLOSED = (255 + 80 * math.sqrt(3)) / 9801


@dataclass
class Check:
    criterion: int
    name: str
    tag: str
    passed: bool
    detail: str = ""

    @property
    def counts(self) -> bool:
        return self.tag != ERRATUM


def _close(criterion, name, tag, got, want, tol) -> Check:
    ok = bool(abs(got - want) <= tol)
    return Check(criterion, name, tag, ok, f"got {got:.10g}, expected {want:.10g} +/- {tol:g}")


def _sign_root(f: Callable[[float], float], neg: float, pos: float, iters: int = 60) -> float:
    """Point where ``f`` changes sign, between a negative and a positive sample."""
    return bisect_boundary(lambda x: f(x) < 0, neg, pos, iters)


# --- criterion 1 -----------------------------------------------------------


def _wnl1_bell(p: float) -> float:
    return evaluate(NlewKind.WNL1, make_state("phi_plus"), wl_p(p)).value


def criterion_1() -> list[Check]:
    t0 = time.perf_counter()
    ps = np.linspace(0.02, 1.0, 50)
    dev = max(abs(_wnl1_bell(p) - (-20 + p * (32 + 5 * p)) / 80) for p in ps)
    root = _sign_root(_wnl1_bell, 0.1, 1.0)
    elapsed = time.perf_counter() - t0
    return [
        Check(1, "WNL1 on Bell state equals (-20+p(32+5p))/80", REFERENCE, dev <= 1e-12, f"max deviation {dev:.2e}"),
        _close(1, "sign change of WNL1 on Bell state", REFERENCE, root, 0.573, 5e-4),
        _close(1, "sign change equals (2 sqrt(89) - 16)/5", DERIVED, root, (2 * math.sqrt(89) - 16) / 5, 1e-12),
        Check(
            1,
            "every p in (0, 0.573] detected",
            DERIVED,
            all(_wnl1_bell(p) < 0 for p in np.linspace(1e-3, 0.573, 200)),
        ),
        Check(1, "runtime < 1 s", DERIVED, elapsed < 1.0, f"{elapsed:.3f} s"),
    ]


# --- criterion 2 -----------------------------------------------------------


def criterion_2() -> list[Check]:
    rho = make_state("phi_plus")
    out = []
    for p in (0.25, 0.5, 1.0):
        w = wl_p(p)
        out.append(_close(2, f"Tr(W^2 rho) = p^2/4 at p={p}", REFERENCE, expectation(w.squared, rho), p * p / 4, 1e-12))
        out.append(_close(2, f"Tr(W rho) = p/2 at p={p}", REFERENCE, expectation(w, rho), p / 2, 1e-12))
    kt = k_term(rho)
    out.append(_close(2, "det(I4 + rho) = 2", REFERENCE, kt.det_full, 2.0, 1e-12))
    out.append(_close(2, "det(I2 + Tr_A rho) = 9/4", REFERENCE, kt.det_marginal, 2.25, 1e-12))
    return out


# --- detection cells (criteria 3-5) ---------------------------------------


def _cell_checks(criterion, family, axis, kind, fixed_p, x_ref, x_edge, p_lo, p_hi, tol=1e-3) -> list[Check]:
    """Rectangle ``[x*, x_edge] x [p_lo, p_hi]`` whose corner ``(x*, p_hi)`` sits on the boundary.

    ``x*`` is bisected at ``p = p_hi``; ``p*`` is bisected at ``x = x_ref``.
    """

    def val(x, p):
        return evaluate(kind, make_state(family, {axis: x, **fixed_p}), wl_p(p)).value

    x_star = bisect_boundary(lambda x: val(x, p_hi) < 0, x_edge, x_ref - 0.05)
    p_star = bisect_boundary(lambda p: val(x_ref, p) < 0, p_lo, min(1.0, p_hi + 0.01))
    xs = np.linspace(x_star, x_edge, 25)
    ps = np.linspace(p_lo, p_hi, 25)
    worst = max(val(x, p) for x in xs for p in ps)
    return [
        _close(criterion, f"{axis} boundary at p={p_hi}", REFERENCE, x_star, x_ref, tol),
        _close(criterion, f"p boundary at {axis}={x_ref}", REFERENCE, p_star, p_hi, tol),
        Check(
            criterion,
            f"{kind.value} negative on [{axis}*, {x_edge}] x [{p_lo}, {p_hi}]",
            REFERENCE,
            worst < 0,
            f"max over 25x25 grid {worst:.3e}",
        ),
    ]


def criterion_3() -> list[Check]:
    out = []
    dev = 0.0
    for a in np.linspace(0, 1, 11):
        for p in np.linspace(0.05, 1, 11):
            got = evaluate(NlewKind.WNL2, make_state("rho_a", [a]), wl_p(p)).value
            want = (68 + 2 * p * p - 50 * a - 27 * a * a + 4 * p * (-17 + 33 * a)) / 8
            dev = max(dev, abs(got - want))
    out.append(Check(3, "WNL2 on rho_a matches reference polynomial", REFERENCE, dev <= 1e-12, f"max deviation {dev:.2e}"))
    out += _cell_checks(3, "rho_a", "a", NlewKind.WNL2, {}, 0.917, 1.0, 1e-6, 0.01044)
    return out


def criterion_4() -> list[Check]:
    out = _cell_checks(4, "isotropic_2x2", "alpha", NlewKind.WNL1, {}, 0.968, 1.0, 0.5210, 0.5213)
    lowest = min(
        expectation(wl_p(p), make_state("isotropic_2x2", [a]))
        for a in np.linspace(-1 / 3, 1, 101)
        for p in np.linspace(0.01, 1, 100)
    )
    out.append(Check(4, "wl_p never detects the isotropic family", REFERENCE, lowest >= 0, f"min {lowest:.3e}"))
    return out


def criterion_5() -> list[Check]:
    return _cell_checks(5, "mems", "q", NlewKind.WNL1, {}, 0.875, 0.97997, 0.2450, 0.2475)


# --- criterion 6 -----------------------------------------------------------


def criterion_6() -> list[Check]:
    def iso(g):
        return make_state("isotropic_3x3", [g])

    wnl1 = _sign_root(lambda g: evaluate(NlewKind.WNL1, iso(g), wl_3x3()).value, 1.0, 0.5)
    lin = _sign_root(lambda g: expectation(wl_c(), iso(g)), 1.0, 0.5)
    wnl2 = _sign_root(lambda g: evaluate(NlewKind.WNL2, iso(g), wl_c()).value, 1.0, 0.5)
    dev = max(abs(expectation(wl_c(), iso(g)) - (17 - 21 * g) / 132) for g in np.linspace(0, 1, 21))
    return [
        _close(6, "WNL1(wl_3x3) threshold on isotropic 3x3", REFERENCE, wnl1, 0.932, 1e-3),
        Check(6, "Tr(wl_c rho) = (17-21g)/132", REFERENCE, dev <= 1e-12, f"max deviation {dev:.2e}"),
        _close(6, "wl_c linear threshold = 17/21", DERIVED, lin, 17 / 21, 1e-9),
        _close(6, "wl_c linear threshold vs reference 0.81", REFERENCE, lin, 0.81, 1e-3),
        _close(6, "WNL2(wl_c) threshold on isotropic 3x3", REFERENCE, wnl2, 0.752, 1e-3),
    ]


# --- criterion 7 -----------------------------------------------------------


def rho_b_reference(b: float) -> float:
    return (48 * b - 7329 * b**2 - 93136 * b**3 - 284608 * b**4) / (64 * (1 + 6 * b) ** 4)


def criterion_7() -> list[Check]:
    w = wl_phi_plus_2x4()

    def val(b):
        return evaluate(NlewKind.WNL3, make_state("rho_b", [b]), w).value

    bs = np.linspace(0, 1, 101)
    dev = max(abs(val(b) - rho_b_reference(b)) for b in bs)
    b_star = _sign_root(val, 0.01, 1e-6)
    worst = max(val(b) for b in np.linspace(0.01, 1, 200))
    return [
        Check(7, "WNL3 on rho_b matches reference rational function", REFERENCE, dev <= 1e-12, f"max deviation {dev:.2e}"),
        Check(
            7,
            "positive below b*; claim of negativity on all of (0,1] amended",
            DERIVED,
            val(b_star / 2) > 0 and 0.005 < b_star < 0.0075,
            f"b* = {b_star:.7f}",
        ),
        Check(7, "WNL3 negative on b in [0.01, 1]", REFERENCE, worst < 0, f"max {worst:.3e}"),
    ]


# --- criterion 8 -----------------------------------------------------------


def criterion_8() -> list[Check]:
    rho = make_state("rho_1")
    lin = evaluate(NlewKind.CCNR_L, rho)
    nl = evaluate(NlewKind.CCNR_NL, rho)
    exact = evaluate(NlewKind.CCNR_L, make_state("rho_1_exact"))
    t = lin.intermediates
    return [
        _close(8, "Tr(W_L^CCNR rho1)", REFERENCE, lin.value, -0.152209, 2e-3),
        _close(8, "Tr(W_L^CCNR rho1), exact 21/79 and 29/79 entries", REFERENCE, exact.value, -0.152209, 2e-5),
        _close(8, "Tr((W_L^CCNR)^2 rho1)", REFERENCE, t["tr_w2"], 0.304097, 5e-3),
        _close(8, "lambda_max(W_L^CCNR)", REFERENCE, t["lambda_max_wl"], 0.161736, 2e-4),
        _close(8, "Tr(W_NL^CCNR rho1)", REFERENCE, nl.value, -2.0317, 1e-2),
        _close(8, "W_L^DV equals W_L^CCNR for qubits", DERIVED, evaluate(NlewKind.DV_L, rho).value, lin.value, 1e-15),
    ]


# --- criterion 9 -----------------------------------------------------------


def _detects(kind, beta) -> bool:
    try:
        return evaluate(kind, make_state("rho_beta", [beta])).detected
    except ConstructionError:
        return False


def criterion_9() -> list[Check]:
    lo_b = 1 / math.sqrt(2)
    betas = np.linspace(lo_b, 1, 201)
    norms = [correlation_trace_norm(make_state("rho_beta", [b])) for b in betas]
    out = [
        Check(9, "DV criterion detects no beta", REFERENCE, max(norms) <= 3, f"max ||C||_1 = {max(norms):.4f}"),
        Check(
            9,
            "CCNR criterion flags every beta",
            REFERENCE,
            all(ccnr_violated(make_state("rho_beta", [b])) for b in betas),
            f"min ||C||_1 = {min(norms):.4f}",
        ),
        Check(
            9,
            "rho_beta is NPT throughout",
            REFERENCE,
            all(not ppt_classify(make_state("rho_beta", [b])).is_ppt for b in betas),
        ),
    ]
    for kind, want in ((NlewKind.DV_L, (0.7308, 0.7889)), (NlewKind.DV_NL, (0.7308, 0.8096))):
        hits = [b for b in betas if _detects(kind, b)]
        if not hits:
            out.append(Check(9, f"{kind.value} interval", REFERENCE, False, "nothing detected"))
            continue
        lo = bisect_boundary(lambda b: _detects(kind, b), hits[0], hits[0] - (betas[1] - betas[0]))
        hi = bisect_boundary(lambda b: _detects(kind, b), hits[-1], hits[-1] + (betas[1] - betas[0]))
        contiguous = all(_detects(kind, b) for b in np.linspace(lo, hi, 50))
        ok = abs(lo - want[0]) <= 1e-3 and abs(hi - want[1]) <= 1e-3 and contiguous
        out.append(Check(9, f"{kind.value} detects beta in {list(want)}", REFERENCE, ok, f"got [{lo:.5f}, {hi:.5f}]"))
    return out


# --- criterion 10 ----------------------------------------------------------


def _wnl4(family, param, sep_max):
    return evaluate(NlewKind.WNL4, make_state(family, [param]), wl_c(), sep_max=sep_max).value


def criterion_10() -> list[Check]:
    h2, _, _ = h2_term(make_state("rho_ent"))
    want = Fraction(-16619, 1080000)
    out = [Check(10, "h2(rho_ent) = -16619/1080000", REFERENCE, abs(h2 - float(want)) <= 1e-15, f"got {h2!r}")]

    x_star = _sign_root(lambda x: _wnl4("rho_x", x, WLC_SEPMAX_REF_SHORT), 5.0, 1.0)
    g_star = _sign_root(lambda g: _wnl4("horodecki", g, WLC_SEPMAX_REF_SHORT), 5.0, 3.0)
    out.append(_close(10, "WNL4(wl_c) detects rho_x from x*", REFERENCE, x_star, 1.79, 1e-2))
    out.append(_close(10, "WNL4(wl_c) detects rho_gamma from gamma*", REFERENCE, g_star, 3.74, 1e-2))

    xs = [0.5, 1, 1.5, 2, 3, 5, 10]
    out.append(
        Check(10, "rho_x PPT for tested x", REFERENCE, all(ppt_classify(make_state("rho_x", [x])).is_ppt for x in xs))
    )
    gs = np.linspace(3.0001, 4, 40)
    out.append(
        Check(10, "rho_gamma PPT on (3, 4]", REFERENCE, all(ppt_classify(make_state("horodecki", [g])).is_ppt for g in gs))
    )

    dev = max(
        abs(
            _wnl4("horodecki", g, WLC_SEPMAX_CLOSED)
            - (33894093 + 11022480 * math.sqrt(3) - 14171848 * g) / 1350391581
        )
        for g in np.linspace(2, 5, 13)
    )
    out.append(Check(10, "WNL4 on rho_gamma matches reference closed form", REFERENCE, dev <= 1e-12, f"max deviation {dev:.2e}"))
    dev = max(abs(expectation(wl_c(), make_state("horodecki", [g])) - (3 + 8 * g) / 231) for g in np.linspace(2, 5, 13))
    out.append(Check(10, "Tr(wl_c rho_gamma) = (3+8g)/231", REFERENCE, dev <= 1e-12, f"max deviation {dev:.2e}"))
    return out


# --- criterion 11 ----------------------------------------------------------


def criterion_11() -> list[Check]:
    t0 = time.perf_counter()
    dev = 0.0
    for p in np.linspace(0.1, 1, 10):
        dev = max(dev, abs(witness_sepmax(wl_p(p)).max_value - closed_form_wlp(p)))
    res = witness_sepmax(wl_c())
    elapsed = time.perf_counter() - t0
    w = wl_c()
    ket01 = np.zeros(9)
    ket01[1] = 1
    at_01 = float(ket01 @ w.squared.real @ ket01)
    return [
        Check(11, "see-saw matches (2-2p+p^2)/4", REFERENCE, dev <= 1e-6, f"max deviation {dev:.2e}"),
        _close(11, "see-saw maximum for wl_c", REFERENCE, res.max_value, WLC_SEPMAX_REF, 1e-4),
        _close(11, "see-saw maximum for wl_c equals 81/1089", DERIVED, res.max_value, 81 / 1089, 1e-10),
        Check(
            11,
            "product state |01> exceeds the reference maximum",
            DERIVED,
            at_01 > WLC_SEPMAX_REF + 1e-3,
            f"Tr(W^2 |01><01|) = {at_01:.7f}",
        ),
        Check(11, "runtime < 30 s", DERIVED, elapsed < 30, f"{elapsed:.2f} s"),
    ]


# --- criterion 12 ----------------------------------------------------------


def _random_hermitian(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def criterion_12(seed: int = 42) -> list[Check]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for dims in [(2, 2), (2, 3), (3, 2), (3, 3)]:
        for _ in range(100):
            h = _random_hermitian(dims[0] * dims[1], rng)
            worst = max(worst, float(np.max(np.abs(reconstruct(decompose(h, dims)) - h))))
    out = [Check(12, "round-trip residual on random Hermitian matrices", DERIVED, worst <= 1e-10, f"max {worst:.2e}")]

    ps = np.linspace(0.05, 1, 20)
    bad = sum(len(compare_table(decompose(wl_p(p).matrix, (2, 2)), reference_wlp(p), 1e-14)) for p in ps)
    out.append(Check(12, "wl_p Pauli coefficients as given", REFERENCE, bad == 0, f"{bad} mismatching entries"))
    sq_dev = max(abs(decompose(wl_p(p).squared, (2, 2)).coefficient("X", "X") - (1 - p) / 4) for p in ps)
    out.append(Check(12, "(W_L^p)^2 XX coefficient = (1-p)/4", DERIVED, sq_dev <= 1e-14, f"max deviation {sq_dev:.1e}"))
    w = wl_c()
    out.append(
        Check(12, "wl_c Gell-Mann coefficients as given", REFERENCE, not compare_table(decompose(w.matrix, (3, 3)), reference_wlc()))
    )
    out.append(
        Check(
            12,
            "WNL1(wl_c) Gell-Mann coefficients as given",
            REFERENCE,
            not compare_table(decompose(w.squared / 9 + 0.9 * w.matrix, (3, 3)), reference_wnl1_wlc()),
        )
    )
    return out


def errata() -> list[Check]:
    """Reference coefficients that disagree with recomputation (p = 0.3 shown)."""
    p = 0.3
    w = wl_p(p)
    out = []
    for label, op, table in (
        ("(W_L^p)^2", w.squared, reference_wlp_squared(p)),
        ("WNL1(W_L^p) operator part", w.squared / 4 + 0.8 * w.matrix, reference_wnl1_wlp(p)),
    ):
        for m in compare_table(decompose(op, (2, 2)), table):
            out.append(
                Check(
                    12,
                    f"{label} {m.term[0]}{m.term[1]} coefficient",
                    ERRATUM,
                    False,
                    f"reference {m.reference:.6g}, recomputed {m.recomputed:.6g}",
                )
            )
    return out


# --- criterion 13 ----------------------------------------------------------


def _random_psd(n, rng, rank=None):
    rank = rank or n
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return g @ g.conj().T


def result_batteries(n: int = 1000, seed: int = 42, tol: float = 1e-10) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []

    viol = 0
    for _ in range(n):
        d = int(rng.integers(2, 7))
        a = _random_hermitian(d, rng)
        b = _random_psd(d, rng)
        spec = hermitian_spectrum(a)
        tb, tab = np.trace(b).real, np.trace(a @ b).real
        viol += not (spec.min * tb - tol <= tab <= spec.max * tb + tol)
    out.append(Check(13, "eigenvalue bounds on Tr(AB)", DERIVED, viol == 0, f"{viol} violations"))

    dims_cycle = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4)]
    viol2 = viol3 = 0
    for i, dims in enumerate(dims_cycle * (n // len(dims_cycle))):
        rho = next(separable_samples(dims, 1, seed + i))
        d1, d2 = dims
        full = determinant(np.eye(d1 * d2) + rho).real
        viol2 += determinant(np.eye(d2) + partial_trace(rho, dims, "A")).real > full + tol
        viol2 += determinant(np.eye(d1) + partial_trace(rho, dims, "B")).real > full + tol
        op1 = np.kron(partial_trace(rho, dims, "B"), np.eye(d2)) - rho
        op2 = np.kron(np.eye(d1), partial_trace(rho, dims, "A")) - rho
        viol3 += hermitian_spectrum(op1).min < -tol or hermitian_spectrum(op2).min < -tol
    out.append(Check(13, "determinant inequalities on separable states", DERIVED, viol2 == 0, f"{viol2} violations"))
    out.append(Check(13, "reduction operators PSD on separable states", DERIVED, viol3 == 0, f"{viol3} violations"))

    viol = 0
    for i in range(n):
        d1, d2 = dims_cycle[i % len(dims_cycle)]
        rho = _random_psd(d1 * d2, rng, rank=int(rng.integers(1, d1 * d2 + 1)))
        rho /= np.trace(rho).real
        lhs = (determinant(partial_trace(rho, (d1, d2), "A")).real / d1) ** d1
        viol += lhs < determinant(rho).real - tol
    out.append(Check(13, "determinant bound on PSD matrices", DERIVED, viol == 0, f"{viol} violations"))

    viol = 0
    for _ in range(n):
        d = int(rng.integers(2, 7))
        ev = np.linalg.eigvals(_random_psd(d, rng) @ _random_psd(d, rng))
        viol += ev.real.min() < -tol * max(1.0, np.abs(ev).max()) or np.abs(ev.imag).max() > 1e-8 * max(1.0, np.abs(ev).max())
    out.append(Check(13, "eigenvalues of a PSD product are non-negative", DERIVED, viol == 0, f"{viol} violations"))

    viol = 0
    for _ in range(n):
        d = int(rng.integers(2, 10))
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        viol += abs(np.trace(a)) > trace_norm(a) + tol
        viol += np.any(np.diff(singular_values(a)) > 0)
    out.append(Check(13, "|Tr A| <= ||A||_1", DERIVED, viol == 0, f"{viol} violations"))
    return out


def realignment_battery(n: int = 1000, seed: int = 42) -> Check:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(n):
        dims = [(2, 2), (2, 3), (3, 3)][i % 3]
        rho = _random_psd(dims[0] * dims[1], rng)
        rho /= np.trace(rho).real
        c = correlation_matrix_canonical(rho, dims)
        worst = max(worst, abs(trace_norm(realignment(rho, dims)) - trace_norm(c)))
    return Check(13, "||R(rho)||_1 = ||C^can||_1", DERIVED, worst <= 1e-9, f"max deviation {worst:.2e}")


def positivity_cases() -> list[tuple[str, NlewKind, tuple[int, int], Callable | None, float | None]]:
    """(label, kind, dims, witness factory, sep_max) for the separable-positivity battery."""
    cases = []
    linear = {
        (2, 2): [("wl_p(0.5)", lambda: wl_p(0.5)), ("wl_psi_minus", wl_psi_minus)],
        (2, 3): [("wl_2x3", wl_2x3)],
        (3, 3): [("wl_3x3", wl_3x3), ("wl_c", wl_c)],
        (2, 4): [("wl_phi_plus_2x4", wl_phi_plus_2x4)],
    }
    for dims, ws in linear.items():
        for label, factory in ws:
            for kind in (NlewKind.F_BASIC, NlewKind.WNL1, NlewKind.WNL2, NlewKind.WNL3):
                cases.append((label, kind, dims, factory, None))
    cases.append(("wl_p(0.5), closed-form max", NlewKind.WNL4, (2, 2), lambda: wl_p(0.5), closed_form_wlp(0.5)))
    cases.append(("wl_c, see-saw max", NlewKind.WNL4, (3, 3), wl_c, None))
    for dims in ((2, 2), (3, 3)):
        for kind in (NlewKind.CCNR_L, NlewKind.CCNR_NL, NlewKind.DV_L, NlewKind.DV_NL):
            cases.append(("state-tailored", kind, dims, None, None))
    return cases


def classical_probes(dims) -> list[np.ndarray]:
    """Computational product states and equal mixtures of two of them.

    These sit on faces of the separable set that Haar mixtures almost never reach.
    """
    n = dims[0] * dims[1]
    out = []
    for i in range(n):
        for j in range(i, n):
            m = np.zeros((n, n))
            m[i, i] += 0.5
            m[j, j] += 0.5
            out.append(m)
    return out


def positivity_battery(n: int = 10_000, seed: int = 42, tol: float = 1e-8) -> list[Check]:
    by_dims: dict = {}
    for case in positivity_cases():
        by_dims.setdefault(case[2], []).append(case)
    out = []
    for dims, cases in by_dims.items():
        mats = list(separable_samples(dims, n, seed)) + classical_probes(dims)
        states = [DensityMatrix(m, dims) for m in mats]
        for label, kind, _, factory, sep_max in cases:
            w = factory() if factory else None
            if kind is NlewKind.WNL4 and sep_max is None:
                sep_max = witness_sepmax(w).max_value
            lowest, undefined = math.inf, 0
            for rho in states:
                try:
                    lowest = min(lowest, evaluate(kind, rho, w, sep_max=sep_max).value)
                except ConstructionError:
                    undefined += 1
            note = f"min {lowest:.3e} over {len(states) - undefined} states ({n} sampled, rest classical)"
            if undefined:
                note += f" ({undefined} undefined)"
            out.append(
                Check(13, f"{kind.value} >= 0 on separable samples, {label}, {dims[0]}x{dims[1]}", DERIVED, lowest >= -tol, note)
            )
    return out


def criterion_13(n_results: int = 1000, n_separable: int = 10_000, seed: int = 42) -> list[Check]:
    return result_batteries(n_results, seed) + [realignment_battery(n_results, seed)] + positivity_battery(n_separable, seed)


CRITERIA: dict[int, Callable[[], list[Check]]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
    10: criterion_10,
    11: criterion_11,
    12: criterion_12,
    13: criterion_13,
}


@dataclass
class ReproductionReport:
    checks: list[Check] = field(default_factory=list)
    errata: list[Check] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.counts)

    def criterion_passed(self, n: int) -> bool:
        return all(c.passed for c in self.checks if c.criterion == n and c.counts)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "elapsed_seconds": self.elapsed,
            "checks": [asdict(c) for c in self.checks],
            "errata": [asdict(c) for c in self.errata],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def table(self) -> str:
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"[{status}] {c.criterion:>2} {c.tag:<7} {c.name}: {c.detail}")
        if self.errata:
            lines.append("")
            lines.append("Suspected errata (informational):")
            for c in self.errata:
                lines.append(f"  - {c.name}: {c.detail}")
        lines.append("")
        lines.append(f"{'ALL PASS' if self.passed else 'FAILURES PRESENT'} in {self.elapsed:.2f} s")
        return "\n".join(lines)


def run(criteria: list[int] | None = None, n_separable: int = 10_000) -> ReproductionReport:
    t0 = time.perf_counter()
    report = ReproductionReport()
    for n in criteria or sorted(CRITERIA):
        if n == 13:
            report.checks += criterion_13(n_separable=n_separable)
        else:
            report.checks += CRITERIA[n]()
        if n == 12:
            report.errata += errata()
    total = time.perf_counter() - t0
    if criteria is None or 13 in criteria:
        report.checks.append(Check(13, "full reproduce run < 5 min", DERIVED, total < 300, f"{total:.1f} s"))
    report.elapsed = total
    return report
