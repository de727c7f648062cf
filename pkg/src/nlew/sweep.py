"""Parameter sweeps with detection-interval extraction."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .builders import NlewKind, evaluate
from .sepmax import closed_form_wlp, witness_sepmax
from .states import FAMILIES, make_state, ppt_classify
from .witnesses import WITNESSES, expectation, make_witness

DEFAULT_POINTS = 200
BISECT_ITERS = 40
LINEAR = "linear"


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]
    owner: str  # "state" or "witness"


@dataclass
class SweepConfig:
    """Validated sweep description; see :meth:`from_dict` for the JSON schema."""

    family: str
    axes: list[Axis]
    state_params: dict = field(default_factory=dict)
    witness: str | None = None
    witness_params: dict = field(default_factory=dict)
    kinds: list[NlewKind] = field(default_factory=list)
    sep_max: float | str | None = None
    seed: int = 0
    bisect_iters: int = BISECT_ITERS
    bisect_tol: float = 1e-4
    restarts: int = 64

    @classmethod
    def from_dict(cls, obj: dict) -> "SweepConfig":
        """Schema::

            {"state": {"family": str, "params": {name: value}},
             "witness": {"family": str, "params": {name: value}} | null,
             "grid": {name: {"start": x, "stop": y, "step": h} | {"start", "stop", "num"} | [values]},
             "kinds": [NlewKind names],
             "sep_max": number | "seesaw" | "closed_form_wlp" | null,
             "seed": int, "bisect_iters": int, "bisect_tol": float, "restarts": int}
        """
        if not isinstance(obj, dict):
            raise ConfigError("config", "must be a JSON object")
        state = obj.get("state")
        if not isinstance(state, dict) or "family" not in state:
            raise ConfigError("state.family", "required")
        family = state["family"]
        if family not in FAMILIES:
            raise ConfigError("state.family", f"unknown family {family!r}")
        fam = FAMILIES[family]
        state_params = dict(state.get("params", {}))

        witness = obj.get("witness")
        w_name, w_params, w_names = None, {}, ()
        if witness is not None:
            if not isinstance(witness, dict) or "family" not in witness:
                raise ConfigError("witness.family", "required when a witness is given")
            w_name = witness["family"]
            if w_name not in WITNESSES:
                raise ConfigError("witness.family", f"unknown witness {w_name!r}")
            w_params = dict(witness.get("params", {}))
            w_names = WITNESSES[w_name][1]
            if tuple(WITNESSES[w_name][2]) != tuple(fam.dims):
                raise ConfigError("witness.family", f"{w_name} does not act on {tuple(fam.dims)}")

        grid = obj.get("grid", {})
        if not isinstance(grid, dict) or not grid:
            raise ConfigError("grid", "must name at least one parameter")
        axes = []
        for name, spec in grid.items():
            if name in fam.param_names:
                owner = "state"
            elif name in w_names:
                owner = "witness"
            else:
                raise ConfigError(f"grid.{name}", "not a parameter of the state family or witness")
            axes.append(Axis(name, _axis_values(name, spec), owner))

        for name in state_params:
            if name not in fam.param_names:
                raise ConfigError(f"state.params.{name}", f"not a parameter of {family}")
        for ax in axes:
            if ax.owner == "state":
                param = fam.params[fam.param_names.index(ax.name)]
                for v in ax.values:
                    try:
                        param.check(v)
                    except ValueError as exc:
                        raise ConfigError(f"grid.{ax.name}", str(exc)) from None
        for name in fam.param_names:
            if name not in state_params and not any(a.name == name for a in axes):
                raise ConfigError(f"state.params.{name}", "needs a value or a grid")
        for name in w_names:
            if name not in w_params and not any(a.name == name for a in axes):
                raise ConfigError(f"witness.params.{name}", "needs a value or a grid")

        kinds = []
        for k in obj.get("kinds", []):
            try:
                kind = NlewKind(k)
            except ValueError:
                raise ConfigError("kinds", f"unknown kind {k!r}") from None
            if kind.needs_witness and w_name is None:
                raise ConfigError("kinds", f"{kind.value} needs a witness")
            kinds.append(kind)
        if not kinds and w_name is None:
            raise ConfigError("kinds", "nothing to evaluate")

        sep_max = obj.get("sep_max")
        if NlewKind.WNL4 in kinds:
            if sep_max is None:
                raise ConfigError("sep_max", "required for WNL4")
            if isinstance(sep_max, str) and sep_max not in ("seesaw", "closed_form_wlp"):
                raise ConfigError("sep_max", f"unknown method {sep_max!r}")
            if sep_max == "closed_form_wlp" and w_name != "wl_p":
                raise ConfigError("sep_max", "closed_form_wlp only applies to wl_p")

        try:
            return cls(
                family=family,
                axes=axes,
                state_params=state_params,
                witness=w_name,
                witness_params=w_params,
                kinds=kinds,
                sep_max=sep_max,
                seed=int(obj.get("seed", 0)),
                bisect_iters=int(obj.get("bisect_iters", BISECT_ITERS)),
                bisect_tol=float(obj.get("bisect_tol", 1e-4)),
                restarts=int(obj.get("restarts", 64)),
            )
        except (TypeError, ValueError) as exc:
            raise ConfigError("config", str(exc)) from None

    @property
    def evaluators(self) -> list[str]:
        out = [LINEAR] if self.witness else []
        return out + [k.value for k in self.kinds]


def _axis_values(name: str, spec) -> tuple[float, ...]:
    if isinstance(spec, list):
        if not spec:
            raise ConfigError(f"grid.{name}", "empty value list")
        return tuple(float(v) for v in spec)
    if not isinstance(spec, dict) or "start" not in spec or "stop" not in spec:
        raise ConfigError(f"grid.{name}", "needs start and stop (plus step or num), or a list")
    start, stop = float(spec["start"]), float(spec["stop"])
    if stop < start:
        raise ConfigError(f"grid.{name}", "stop is below start")
    if "step" in spec:
        step = float(spec["step"])
        if not step > 0:
            raise ConfigError(f"grid.{name}.step", "must be > 0")
        num = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(num))
    num = int(spec.get("num", DEFAULT_POINTS))
    if num < 1:
        raise ConfigError(f"grid.{name}.num", "must be >= 1")
    return tuple(float(v) for v in np.linspace(start, stop, num))


class PointEvaluator:
    """Evaluates every configured evaluator at one parameter point."""

    def __init__(self, cfg: SweepConfig):
        self.cfg = cfg
        self._sep_cache: dict = {}

    def _split(self, point: dict) -> tuple[dict, dict]:
        sp, wp = dict(self.cfg.state_params), dict(self.cfg.witness_params)
        for ax in self.cfg.axes:
            (sp if ax.owner == "state" else wp)[ax.name] = point[ax.name]
        return sp, wp

    def _sep_max(self, w, wp: dict) -> float:
        method = self.cfg.sep_max
        if not isinstance(method, str):
            return float(method)
        key = json.dumps(wp, sort_keys=True)
        if key not in self._sep_cache:
            if method == "closed_form_wlp":
                self._sep_cache[key] = closed_form_wlp(wp["p"])
            else:
                self._sep_cache[key] = witness_sepmax(w, restarts=self.cfg.restarts, seed=self.cfg.seed).max_value
        return self._sep_cache[key]

    def __call__(self, point: dict) -> dict:
        sp, wp = self._split(point)
        out = {"ppt": None, "values": {}, "detected": {}, "evals": {}, "errors": {}}
        try:
            rho = make_state(self.cfg.family, sp)
        except ValueError as exc:
            out["errors"]["state"] = str(exc)
            out["detected"] = {e: False for e in self.cfg.evaluators}
            return out
        out["ppt"] = ppt_classify(rho)
        w = make_witness(self.cfg.witness, wp) if self.cfg.witness else None
        if w is not None:
            v = expectation(w, rho)
            out["values"][LINEAR] = v
            out["detected"][LINEAR] = v < 0
        for kind in self.cfg.kinds:
            try:
                sm = self._sep_max(w, wp) if kind is NlewKind.WNL4 else None
                ev = evaluate(kind, rho, w, sep_max=sm)
            except ValueError as exc:
                out["errors"][kind.value] = str(exc)
                out["detected"][kind.value] = False
                continue
            out["evals"][kind.value] = ev
            out["values"][kind.value] = ev.value
            out["detected"][kind.value] = ev.detected
        return out

    def detected(self, evaluator: str, point: dict) -> bool:
        try:
            return bool(self(point)["detected"][evaluator])
        except ValueError:
            return False


def bisect_boundary(pred: Callable[[float], bool], inside: float, outside: float, iters: int = BISECT_ITERS, tol: float = 0.0) -> float:
    """Boundary of a boolean predicate between ``inside`` (true) and ``outside`` (false).

    Returns the last point known to satisfy ``pred``.
    """
    for _ in range(iters):
        if abs(outside - inside) <= tol:
            break
        mid = 0.5 * (inside + outside)
        if pred(mid):
            inside = mid
        else:
            outside = mid
    return inside


@dataclass
class Interval:
    evaluator: str
    axis: str
    lo: float
    hi: float
    verified: bool

    def to_dict(self) -> dict:
        return {"evaluator": self.evaluator, "axis": self.axis, "lo": self.lo, "hi": self.hi, "verified": self.verified}


@dataclass
class DetectionReport:
    family: str
    axis_names: list[str]
    evaluators: list[str]
    rows: list[dict]
    intervals: list[Interval]

    def csv_header(self) -> list[str]:
        return ["family", *self.axis_names, "ppt_class", "ppt_min_eig", "tr_wl"] + [
            e for e in self.evaluators if e != LINEAR
        ] + ["k", "h2", "lambda_max_wl", "flags"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.csv_header())
        for r in self.rows:
            writer.writerow(
                [self.family]
                + [repr(r["point"][a]) for a in self.axis_names]
                + [r["ppt_class"], _fmt(r["ppt_min_eig"]), _fmt(r["values"].get(LINEAR))]
                + [_fmt(r["values"].get(e)) for e in self.evaluators if e != LINEAR]
                + [_fmt(r["digest"].get(k)) for k in ("k", "h2", "lambda_max_wl")]
                + [";".join(f"{k}:{v}" for k, v in sorted(r["errors"].items()))]
            )
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "axes": self.axis_names,
            "evaluators": self.evaluators,
            "rows": self.rows,
            "intervals": [i.to_dict() for i in self.intervals],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    def intervals_for(self, evaluator: str, axis: str | None = None) -> list[Interval]:
        return [i for i in self.intervals if i.evaluator == evaluator and (axis is None or i.axis == axis)]


def _fmt(v) -> str:
    return "" if v is None else repr(float(v))


def _digest(res: dict) -> dict:
    out = {}
    for ev in res["evals"].values():
        for key in ("k", "h2", "lambda_max_wl"):
            if key in ev.intermediates and key not in out:
                out[key] = ev.intermediates[key]
    return out


def run_detect(cfg: SweepConfig) -> DetectionReport:
    point_eval = PointEvaluator(cfg)
    names = [a.name for a in cfg.axes]
    shape = tuple(len(a.values) for a in cfg.axes)
    rows = []
    detected = {e: np.zeros(shape, dtype=bool) for e in cfg.evaluators}
    for idx in itertools.product(*(range(n) for n in shape)):
        point = {a.name: a.values[i] for a, i in zip(cfg.axes, idx)}
        res = point_eval(point)
        for e in cfg.evaluators:
            detected[e][idx] = res["detected"].get(e, False)
        rows.append(
            {
                "point": point,
                "ppt_class": res["ppt"].label if res["ppt"] else "invalid",
                "ppt_min_eig": res["ppt"].min_eigenvalue if res["ppt"] else None,
                "values": res["values"],
                "detected": res["detected"],
                "digest": _digest(res),
                "errors": res["errors"],
            }
        )
    intervals = []
    for e in cfg.evaluators:
        intervals += _extract(cfg, point_eval, e, detected[e])
    return DetectionReport(cfg.family, names, cfg.evaluators, rows, intervals)


def _runs(mask: np.ndarray) -> list[tuple[int, int]]:
    runs, start = [], None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        if not m and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def _refine(cfg, point_eval, evaluator, base: dict, axis: Axis, i_in: int, i_out: int | None) -> float:
    if i_out is None:
        return axis.values[i_in]

    def pred(x):
        return point_eval.detected(evaluator, {**base, axis.name: x})

    return bisect_boundary(pred, axis.values[i_in], axis.values[i_out], cfg.bisect_iters, cfg.bisect_tol / 4)


def _extract(cfg: SweepConfig, point_eval: PointEvaluator, evaluator: str, mask: np.ndarray) -> list[Interval]:
    """Detected intervals per axis.

    On a one-axis grid every run of detected points becomes an interval. With
    several axes each axis gets the extent of the detected set, refined along
    that axis from its extreme grid points.
    """
    out = []
    if not mask.any():
        return out
    for k, axis in enumerate(cfg.axes):
        n = len(axis.values)
        if mask.ndim == 1:
            runs = _runs(mask)
            bases = [{}] * len(runs)
        else:
            proj = np.moveaxis(mask, k, 0).reshape(n, -1)
            hit = proj.any(axis=1)
            lo_i, hi_i = int(np.argmax(hit)), int(n - 1 - np.argmax(hit[::-1]))
            runs = [(lo_i, hi_i)]
            others = [a for j, a in enumerate(cfg.axes) if j != k]
            def base_at(i):
                flat = int(np.argmax(proj[i]))
                sub = np.unravel_index(flat, tuple(len(a.values) for a in others))
                return {a.name: a.values[s] for a, s in zip(others, sub)}
            bases = [(base_at(lo_i), base_at(hi_i))]
        for (a, b), base in zip(runs, bases):
            b_lo, b_hi = base if isinstance(base, tuple) else (base, base)
            lo = _refine(cfg, point_eval, evaluator, b_lo, axis, a, a - 1 if a > 0 else None)
            hi = _refine(cfg, point_eval, evaluator, b_hi, axis, b, b + 1 if b < n - 1 else None)
            ok = (
                point_eval.detected(evaluator, {**b_lo, axis.name: lo})
                and point_eval.detected(evaluator, {**b_hi, axis.name: hi})
            )
            if mask.ndim == 1:
                ok = ok and point_eval.detected(evaluator, {axis.name: 0.5 * (lo + hi)})
            out.append(Interval(evaluator, axis.name, lo, hi, bool(ok)))
    return out
