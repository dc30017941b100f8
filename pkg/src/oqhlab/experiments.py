"""Experiment configs, the registry of numerical experiments, and report emission.

Every experiment is a deterministic function of its config: ensembles draw from
``numpy.random.SeedSequence(seed).spawn(count)`` so trial ``t`` always sees the
same signals regardless of how (or whether) trials are parallelized.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import ParameterError, ResourceError
from .multiplier import (MultiplierModel, EjEvaluator, M_truncated_on_grid, eval_M_truncated, eval_Mj,
                         eval_Uj, kernel_Ej, sup_on_grid)
from .modulation import major_transfer_check, modulation_projection
from .numtheory import ArcParams, coprime_residues, gauss_sum, gauss_table, level_gauss_max, \
    verify_major_arc_disjointness
from .signal import DiscreteInterval, Signal, Window, apply_halpha, inner_product
from .sparse import (SparseFormParams, build_universal_sparse, eval_sparse_form, mhl,
                     random_sparse_collection, universal_form, verify_sparse)
from .torus import TorusPoint, parse_torus
from .weights import a2_characteristic, power_weight, rh_characteristic, weighted_norm_ratio

SCHEMA = "oqhlab.experiment/1"
ALPHA_SET = ("0", "1/2", "1/3", "2/5", "1/7", "golden-1", "sqrt2-1", "pi-3")
J_CAP = 16
S_CAP = 4
GRID_CAP = 1 << 20
ENSEMBLE_CAP = 10_000
ENSEMBLE_KINDS = ("rademacher", "gaussian", "indicator", "sparse")


# -- config ------------------------------------------------------------------

@dataclass(frozen=True)
class Ensemble:
    kind: str = "rademacher"
    count: int = 20

    def __post_init__(self):
        if self.kind not in ENSEMBLE_KINDS:
            raise ParameterError(f"unknown ensemble kind {self.kind!r}; choose from {ENSEMBLE_KINDS}")
        if not 1 <= self.count <= ENSEMBLE_CAP:
            raise ResourceError(f"ensemble count {self.count} outside [1, {ENSEMBLE_CAP}]")


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    seed: int
    alphas: tuple[str, ...] = ALPHA_SET
    epsilon: float = 0.15
    j_range: tuple[int, int] = (8, 14)
    s_range: tuple[int, int] = (1, 3)
    grid: int | None = None
    N: tuple[int, ...] = (256,)
    ensemble: Ensemble = field(default_factory=Ensemble)
    r: float = 1.5
    s: float = 1.5
    weights: tuple = ()
    out: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.seed is None:
            raise ParameterError("seed is mandatory")
        for a in self.alphas:
            parse_torus(a)
        j0, j1 = self.j_range
        if not 1 <= j0 <= j1 <= J_CAP:
            raise ResourceError(f"j range {self.j_range} outside [1, {J_CAP}]")
        s0, s1 = self.s_range
        if not 1 <= s0 <= s1 <= S_CAP:
            raise ResourceError(f"s range {self.s_range} outside [1, {S_CAP}]")
        if self.grid is not None and not 1 <= self.grid <= GRID_CAP:
            raise ResourceError(f"grid {self.grid} outside [1, 2^20]")
        for n in self.N:
            if not 1 <= n <= GRID_CAP // 4:
                raise ResourceError(f"signal length {n} outside [1, 2^18]")
        if not 0 < self.epsilon <= 0.5:
            raise ParameterError(f"epsilon must lie in (0, 1/2], got {self.epsilon}")

    @property
    def js(self) -> range:
        return range(self.j_range[0], self.j_range[1] + 1)

    @property
    def ss(self) -> range:
        return range(self.s_range[0], self.s_range[1] + 1)

    def to_json(self) -> dict:
        d = asdict(self)
        d = {"schema": SCHEMA, **d}
        d["alphas"] = list(self.alphas)
        d["j_range"] = list(self.j_range)
        d["s_range"] = list(self.s_range)
        d["N"] = list(self.N)
        d["weights"] = list(self.weights)
        return d

    @classmethod
    def from_json(cls, obj: dict) -> "ExperimentConfig":
        obj = dict(obj)
        schema = obj.pop("schema", SCHEMA)
        if schema != SCHEMA:
            raise ParameterError(f"unsupported config schema {schema!r} (expected {SCHEMA!r})")
        if "name" not in obj:
            raise ParameterError("config needs a name")
        if obj.get("seed") is None:
            raise ParameterError("seed is mandatory")
        unknown = set(obj) - {f for f in cls.__dataclass_fields__}
        if unknown:
            raise ParameterError(f"unknown config fields {sorted(unknown)}")
        base = default_config(obj["name"], int(obj["seed"]))
        kw = {}
        for key, val in obj.items():
            if key in ("alphas", "j_range", "s_range", "N", "weights"):
                val = tuple(val)
            elif key == "ensemble":
                val = Ensemble(**{**asdict(base.ensemble), **val})
            elif key == "options":
                val = {**base.options, **val}
            kw[key] = val
        return replace(base, **kw)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        return cls.from_json(json.loads(Path(path).read_text()))


# -- reports -----------------------------------------------------------------

@dataclass
class Check:
    name: str
    value: float
    threshold: float
    relation: str   # "<=", ">=", "=="
    passed: bool

    @classmethod
    def le(cls, name, value, threshold):
        return cls(name, float(value), float(threshold), "<=", bool(value <= threshold))

    @classmethod
    def ge(cls, name, value, threshold):
        return cls(name, float(value), float(threshold), ">=", bool(value >= threshold))

    @classmethod
    def flag(cls, name, ok: bool):
        return cls(name, float(bool(ok)), 1.0, "==", bool(ok))


@dataclass
class Report:
    name: str
    anchor: str
    config: ExperimentConfig
    columns: list[str]
    rows: list[tuple] = field(default_factory=list)
    slopes: dict = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    plot: tuple[str, str, list[str]] | None = None   # (x column, y column, series columns)
    wall_clock: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(v) for v in row])
        return buf.getvalue()

    def metadata(self) -> dict:
        return {
            "experiment": self.name,
            "anchor": self.anchor,
            "config": self.config.to_json(),
            "columns": self.columns,
            "slopes": {k: {"slope": v[0], "intercept": v[1], "residual": v[2]} for k, v in self.slopes.items()},
            "checks": [asdict(c) for c in self.checks],
            "summary": self.summary,
            "passed": self.passed,
            "wall_clock_s": self.wall_clock,
        }

    def write(self, out_dir) -> dict[str, Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {"csv": out / f"{self.name}.csv", "json": out / f"{self.name}.json"}
        paths["csv"].write_text(self.csv_text())
        paths["json"].write_text(json.dumps(self.metadata(), indent=2, default=_json_default) + "\n")
        if self.plot is not None:
            paths["svg"] = out / f"{self.name}.svg"
            paths["svg"].write_text(self.svg())
        return paths

    def svg(self) -> str:
        xcol, ycol, series = self.plot
        groups: dict = {}
        for row in self.rows:
            key = tuple(row[self.columns.index(c)] for c in series)
            x, y = row[self.columns.index(xcol)], row[self.columns.index(ycol)]
            if y > 0:
                groups.setdefault(key, []).append((float(x), math.log2(float(y))))
        return line_plot_svg(groups, xcol, f"log2 {ycol}", self.name)


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, (np.bool_,)):
        return bool(o)
    if isinstance(o, Ensemble):
        return asdict(o)
    raise TypeError(type(o))


_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def line_plot_svg(groups: dict, xlabel: str, ylabel: str, title: str, width=640, height=400) -> str:
    """Self-contained SVG with one polyline per group."""
    pts = [p for g in groups.values() for p in g]
    pad = 50
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
             f'viewBox="0 0 {width} {height}">',
             '<rect width="100%" height="100%" fill="white"/>',
             f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
             f'<text x="{width / 2}" y="{height - 8}" text-anchor="middle" font-size="12">{xlabel}</text>',
             f'<text x="14" y="{height / 2}" font-size="12" transform="rotate(-90 14 {height / 2})" '
             f'text-anchor="middle">{ylabel}</text>']
    if pts:
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        x1 = x1 if x1 > x0 else x0 + 1
        y1 = y1 if y1 > y0 else y0 + 1

        def sx(x):
            return pad + (x - x0) / (x1 - x0) * (width - 2 * pad)

        def sy(y):
            return height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)

        lines.append(f'<polyline points="{pad},{pad} {pad},{height - pad} {width - pad},{height - pad}" '
                     'fill="none" stroke="black"/>')
        for v, lab in ((y0, f"{y0:.3g}"), (y1, f"{y1:.3g}")):
            lines.append(f'<text x="{pad - 4}" y="{sy(v) + 4:.1f}" text-anchor="end" font-size="10">{lab}</text>')
        for v, lab in ((x0, f"{x0:g}"), (x1, f"{x1:g}")):
            lines.append(f'<text x="{sx(v):.1f}" y="{height - pad + 14}" text-anchor="middle" '
                         f'font-size="10">{lab}</text>')
        for i, (key, g) in enumerate(sorted(groups.items(), key=lambda kv: str(kv[0]))):
            col = _COLORS[i % len(_COLORS)]
            path = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in sorted(g))
            lines.append(f'<polyline points="{path}" fill="none" stroke="{col}" stroke-width="1.5"/>')
            label = ", ".join(str(k) for k in key) or "all"
            lines.append(f'<text x="{width - pad + 4}" y="{pad + 14 * i}" font-size="10" fill="{col}">{label}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def fit_log_slope(points) -> tuple[float, float, float]:
    """Least squares of log2 y on x; returns (slope, intercept, RMS residual)."""
    pts = list(points)
    if len(pts) < 3:
        raise ParameterError(f"need at least 3 points, got {len(pts)}")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    if not np.all(y > 0):
        raise ParameterError("log-slope fit needs positive y")
    ly = np.log2(y)
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = float(np.sqrt(np.mean((ly - (slope * x + icpt)) ** 2)))
    return float(slope), float(icpt), resid


# -- ensembles ---------------------------------------------------------------

def trial_rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(c) for c in np.random.SeedSequence(seed).spawn(count)]


def random_signal(rng: np.random.Generator, kind: str, n: int, offset: int = 0) -> Signal:
    if kind == "rademacher":
        v = rng.choice([-1.0, 1.0], size=n)
    elif kind == "gaussian":
        v = rng.standard_normal(n)
    elif kind == "indicator":
        a = int(rng.integers(0, n))
        b = int(rng.integers(a, n))
        v = np.zeros(n)
        v[a:b + 1] = 1.0
    elif kind == "sparse":
        v = np.where(rng.random(n) < max(2.0 / n, 0.05), rng.exponential(1.0, n), 0.0)
        if not v.any():
            v[int(rng.integers(0, n))] = 1.0
    else:
        raise ParameterError(f"unknown ensemble kind {kind!r}")
    return Signal(offset, v)


# -- registry ----------------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    name: str
    anchor: str
    run: Callable[[ExperimentConfig], Report]
    defaults: dict


REGISTRY: dict[str, Experiment] = {}


def register(name: str, anchor: str, **defaults):
    def deco(fn):
        REGISTRY[name] = Experiment(name, anchor, fn, defaults)
        return fn
    return deco


def default_config(name: str, seed: int = 0) -> ExperimentConfig:
    if name not in REGISTRY:
        raise ParameterError(f"unknown experiment {name!r}; registry: {', '.join(sorted(REGISTRY))}")
    d = dict(REGISTRY[name].defaults)
    if "ensemble" in d:
        d["ensemble"] = Ensemble(**d["ensemble"])
    return ExperimentConfig(name=name, seed=seed, **d)


def run_experiment(cfg: ExperimentConfig) -> Report:
    if cfg.name not in REGISTRY:
        raise ParameterError(f"unknown experiment {cfg.name!r}; registry: {', '.join(sorted(REGISTRY))}")
    t0 = time.perf_counter()
    rep = REGISTRY[cfg.name].run(cfg)
    rep.wall_clock = time.perf_counter() - t0
    if cfg.out:
        rep.write(cfg.out)
    return rep


def _report(cfg: ExperimentConfig, columns, **kw) -> Report:
    return Report(cfg.name, REGISTRY[cfg.name].anchor, cfg, list(columns), **kw)


# number theory

@register("gauss-law", "complete Gauss sum estimate |S(A/Q,B/Q)| <~ Q^(-1/2)", options={"Q_max": 512})
def _gauss_law(cfg):
    qmax = int(cfg.options["Q_max"])
    if qmax > 4096:
        raise ResourceError(f"Q_max {qmax} > 4096")
    rows = []
    worst_bound = -math.inf
    worst_odd = 0.0
    for Q in range(1, qmax + 1):
        _, tab = gauss_table(Q)
        mags = np.abs(tab)
        mx = float(mags.max())
        excess = mx - math.sqrt(2.0 / Q)
        worst_bound = max(worst_bound, excess)
        odd_dev = float(np.max(np.abs(mags - Q**-0.5))) if Q % 2 else 0.0
        worst_odd = max(worst_odd, odd_dev)
        rows.append((Q, mx, float(mags.min()), odd_dev))
    rep = _report(cfg, ["Q", "max_abs_S", "min_abs_S", "odd_equality_dev"], rows=rows)
    rep.checks = [Check.le("max |S| - sqrt(2/Q)", worst_bound, 1e-12),
                  Check.le("odd Q: max ||S| - Q^-1/2|", worst_odd, 1e-12)]
    rep.plot = ("Q", "max_abs_S", [])
    return rep


@register("gauss-decay", "complete Gauss sum estimate, level maxima over R_s",
          options={"levels": [1, 9], "max_slope": -0.45})
def _gauss_decay(cfg):
    s0, s1 = cfg.options["levels"]
    if s1 > 12:
        raise ResourceError("gauss-decay levels capped at 12")
    rows = []
    for s in range(s0, s1 + 1):
        mx, (A, B, Q) = level_gauss_max(s)
        rows.append((s, mx, A, B, Q))
    rep = _report(cfg, ["s", "max_abs_S", "A", "B", "Q"], rows=rows)
    rep.slopes["max_abs_S"] = fit_log_slope([(r[0], r[1]) for r in rows])
    rep.checks = [Check.le("slope", rep.slopes["max_abs_S"][0], cfg.options["max_slope"])]
    rep.plot = ("s", "max_abs_S", [])
    return rep


@register("disjointness", "major boxes are disjoint for epsilon small enough",
          options={"cases": [[0.05, 40, True], [1 / 6, 6, False], [0.05, 20, True]]})
def _disjointness(cfg):
    rows = []
    checks = []
    for eps, j, expect in cfg.options["cases"]:
        rep = verify_major_arc_disjointness(ArcParams(float(eps), int(j)))
        wp = rep.worst_pair
        rows.append((float(eps), int(j), ArcParams(float(eps), int(j)).max_den, bool(rep.disjoint),
                     "" if wp is None else " ".join(f"({a},{b})" for a, b in wp)))
        checks.append(Check.flag(f"eps={eps:g} j={j} disjoint=={bool(expect)}", bool(rep.disjoint) == bool(expect)))
    out = _report(cfg, ["epsilon", "j", "Q_max", "disjoint", "worst_pair"], rows=rows)
    out.checks = checks
    return out


# multiplier

@register("closed-form", "M^0(beta) = -i pi (1 - 2 beta) on (0, 1)",
          options={"betas": [0.25, 0.75], "N": 100000, "tol": 1e-3})
def _closed_form(cfg):
    N = int(cfg.options["N"])
    rows = []
    worst = 0.0
    for b in cfg.options["betas"]:
        v = eval_M_truncated(0.0, float(b), N)
        exact = -1j * math.pi * (1 - 2 * float(b))
        err = abs(v - exact)
        worst = max(worst, err)
        rows.append((float(b), N, v.real, v.imag, exact.imag, err))
    rep = _report(cfg, ["beta", "N", "re", "im", "exact_im", "abs_err"], rows=rows)
    rep.checks = [Check.le("max |M_N - closed form|", worst, cfg.options["tol"])]
    return rep


@register("multiplier-l2", "uniform boundedness of the multiplier of H^alpha",
          grid=1 << 17, options={"N": 1 << 14, "max_ratio": 2.0})
def _multiplier_l2(cfg):
    N = int(cfg.options["N"])
    L = cfg.grid or 1 << 17
    rows = []
    for a in cfg.alphas:
        v = np.abs(M_truncated_on_grid(parse_torus(a), N, L))
        k = int(np.argmax(v))
        rows.append((a, N, L, float(v[k]), k / L))
    sups = [r[3] for r in rows]
    rep = _report(cfg, ["alpha", "N", "L", "sup_abs_M", "argmax_beta"], rows=rows)
    rep.checks = [Check.le("max sup |M|", max(sups), 2 * math.pi),
                  Check.le("max/min across alpha", max(sups) / min(sups), cfg.options["max_ratio"])]
    return rep


@register("minor-arc-decay", "L^inf decay of E_j uniformly in alpha",
          alphas=("golden-1",), epsilon=0.05, j_range=(8, 14),
          options={"max_slope": -0.25, "max_residual": 0.15})
def _minor_arc(cfg):
    model = MultiplierModel(epsilon=cfg.epsilon)
    rows = []
    for a in cfg.alphas:
        alpha = parse_torus(a)
        for j in cfg.js:
            est = sup_on_grid(EjEvaluator(alpha, j, model), j, cfg.grid and max(cfg.grid, 1 << (j + 3)),
                              epsilon=cfg.epsilon)
            rows.append((a, j, est.L, est.refine_points, est.value, est.argmax, est.grid_error_bound))
    rep = _report(cfg, ["alpha", "j", "L", "refine_points", "sup_abs_E", "argmax_beta", "grid_error_bound"],
                  rows=rows)
    for a in cfg.alphas:
        pts = [(r[1], r[4]) for r in rows if r[0] == a]
        rep.slopes[a] = sl = fit_log_slope(pts)
        rep.checks += [Check.le(f"{a} slope", sl[0], cfg.options["max_slope"]),
                       Check.le(f"{a} residual", sl[2], cfg.options["max_residual"])]
    rep.plot = ("j", "sup_abs_E", ["alpha"])
    return rep


def box_error(j: int, epsilon: float, A: int, B: int, Q: int, n_alpha: int, n_beta: int) -> tuple[float, float, float]:
    """max |M_j - S(A/Q,B/Q) U_j| over a grid on the major box at (A/Q, B/Q); also the argmax (x, y)."""
    arc = ArcParams(epsilon, j)
    S = gauss_sum(A, B, Q)
    xs = np.linspace(-arc.alpha_radius, arc.alpha_radius, n_alpha)
    ys = np.linspace(-arc.beta_radius, arc.beta_radius, n_beta)
    best, arg = 0.0, (0.0, 0.0)
    for x in xs:
        alpha = TorusPoint.rational(A, Q).with_offset(float(x))
        M = eval_Mj(alpha, B / Q + ys, j)
        U = eval_Uj(float(x), ys, j)
        err = np.abs(M - S * U)
        i = int(np.argmax(err))
        if err[i] > best:
            best, arg = float(err[i]), (float(x), float(ys[i]))
    return best, arg[0], arg[1]


@register("major-arc-approx", "major arc approximation M_j ~ S(A/Q,B/Q) U_j with error 2^((3 eps - 1) j)",
          epsilon=0.2, j_range=(10, 16),
          options={"center": [1, 1, 3], "n_alpha": 5, "n_beta": 9, "slack": 0.1})
def _major_arc(cfg):
    A, B, Q = cfg.options["center"]
    rows = []
    for j in cfg.js:
        arc = ArcParams(cfg.epsilon, j)
        err, x, y = box_error(j, cfg.epsilon, A, B, Q, cfg.options["n_alpha"], cfg.options["n_beta"])
        rows.append((j, arc.alpha_radius, arc.beta_radius, err, x, y, 2.0 ** ((3 * cfg.epsilon - 1) * j)))
    rep = _report(cfg, ["j", "alpha_radius", "beta_radius", "max_box_error", "argmax_x", "argmax_y",
                        "reference_rate"], rows=rows)
    rep.slopes["max_box_error"] = sl = fit_log_slope([(r[0], r[3]) for r in rows])
    rep.checks = [Check.le("slope", sl[0], 3 * cfg.epsilon - 1 + cfg.options["slack"])]
    rep.summary = {"floor_note": "box errors at double-precision level are rounding, not approximation error"}
    rep.plot = ("j", "max_box_error", [])
    return rep


def kernel_bound_ratio(alpha, j: int, model: MultiplierModel, L: int | None = None) -> tuple[float, int]:
    """max_m |F^-1 E_j(m)| / min(2^(-eps j), 2^(2j) / (1 + m^2)) and the argmax m."""
    L = L or 1 << (j + 4)
    ks = kernel_Ej(alpha, j, L, model)
    m = np.arange(ks.kernel.offset, ks.kernel.offset + len(ks.kernel.values))
    bound = np.minimum(2.0 ** (-model.epsilon * j), 4.0**j / (1.0 + m.astype(float) ** 2))
    r = np.abs(ks.kernel.values) / bound
    i = int(np.argmax(r))
    return float(r[i]), int(m[i])


@register("ej-kernel-bound", "kernel bound |F^-1 E_j(m)| <~ min(2^(-eps j), 2^(2j)/(1+m^2))",
          alphas=("golden-1", "1/2", "1/3", "sqrt2-1"), epsilon=0.15, j_range=(8, 12),
          options={"calibration_j": 6, "js": [8, 10, 12]})
def _kernel_bound(cfg):
    model = MultiplierModel(epsilon=cfg.epsilon)
    j0 = int(cfg.options["calibration_j"])
    rows = []
    C = 0.0
    for a in cfg.alphas:
        r, m = kernel_bound_ratio(parse_torus(a), j0, model)
        C = max(C, r)
        rows.append((a, j0, "calibration", r, m))
    worst = 0.0
    for j in cfg.options["js"]:
        if j > J_CAP:
            raise ResourceError(f"j = {j} > {J_CAP}")
        for a in cfg.alphas:
            r, m = kernel_bound_ratio(parse_torus(a), int(j), model)
            worst = max(worst, r)
            rows.append((a, int(j), "check", r, m))
    rep = _report(cfg, ["alpha", "j", "role", "ratio_to_bound", "argmax_m"], rows=rows)
    rep.summary = {"C": C, "worst_ratio": worst}
    rep.checks = [Check.le("max ratio / C", worst / C if C > 0 else 0.0, 1.0)]
    return rep


# sparse machinery

def _pair(rngs, t, kind, n):
    rng = rngs[t]
    return random_signal(rng, kind, n), random_signal(rng, kind, n)


@register("sparse-ratio", "sparse bounds for H^alpha uniformly in alpha",
          N=(256, 4096), ensemble={"kind": "rademacher", "count": 200},
          options={"max_spread": 4.0, "max_growth": 2.0})
def _sparse_ratio(cfg):
    p = SparseFormParams(cfg.r, cfg.s)
    count, kind = cfg.ensemble.count, cfg.ensemble.kind
    rows = []
    best: dict = {}
    for n in cfg.N:
        rngs = trial_rngs(cfg.seed + n, count)
        pairs = [_pair(rngs, t, kind, n) for t in range(count)]
        dens = [universal_form(f, g, p) for f, g in pairs]
        win = Window.of(0, n - 1)
        for a in cfg.alphas:
            alpha = parse_torus(a)
            for t, ((f, g), den) in enumerate(zip(pairs, dens)):
                ratio = abs(inner_product(apply_halpha(f, alpha, win), g)) / den
                rows.append((a, n, t, ratio))
                if ratio > best.get((a, n), (-1.0, 0))[0]:
                    best[(a, n)] = (ratio, t)
    rep = _report(cfg, ["alpha", "N", "trial", "ratio"], rows=rows)
    maxes = {k: v[0] for k, v in best.items()}
    finite = all(math.isfinite(v) for v in maxes.values())
    spread = max(max(maxes[(a, n)] for a in cfg.alphas) / min(maxes[(a, n)] for a in cfg.alphas) for n in cfg.N)
    checks = [Check.flag("all ratios finite", finite), Check.le("alpha spread", spread, cfg.options["max_spread"])]
    growth = 0.0
    if len(cfg.N) > 1:
        n0, n1 = min(cfg.N), max(cfg.N)
        growth = max(maxes[(a, n1)] / maxes[(a, n0)] for a in cfg.alphas)
        checks.append(Check.le("growth across N", growth, cfg.options["max_growth"]))
    top = max(best.items(), key=lambda kv: kv[1][0])
    rep.summary = {"max_ratio": top[1][0], "argmax_seed": f"{cfg.seed + top[0][1]}:{top[1][1]}",
                   "argmax_alpha": top[0][0], "alpha_spread": spread, "growth": growth,
                   "max_by_alpha": {f"{a}@{n}": v for (a, n), v in sorted(maxes.items())}}
    rep.checks = checks
    return rep


@register("mhl-sparse", "(1,1) sparse bound of the Hardy-Littlewood maximal function",
          N=(256,), r=1.0, s=1.0, ensemble={"kind": "sparse", "count": 100}, options={"max_ratio": 10.0})
def _mhl_sparse(cfg):
    p = SparseFormParams(cfg.r, cfg.s)
    rows = []
    for n in cfg.N:
        rngs = trial_rngs(cfg.seed + n, cfg.ensemble.count)
        for t in range(cfg.ensemble.count):
            f, g = _pair(rngs, t, cfg.ensemble.kind, n)
            f, g = f.abs(), g.abs()
            win = Window.of(0, n - 1)
            ratio = abs(inner_product(mhl(f, win), g)) / universal_form(f, g, p)
            rows.append((n, t, ratio))
    rep = _report(cfg, ["N", "trial", "ratio"], rows=rows)
    mx = max(r[2] for r in rows)
    rep.summary = {"max_ratio": mx}
    rep.checks = [Check.le("ensemble max ratio", mx, cfg.options["max_ratio"])]
    return rep


@register("universal-domination", "universal domination of sparse forms by one stopping-time form",
          N=(512,), r=1.0, s=1.0, ensemble={"kind": "sparse", "count": 1000},
          options={"collections": 100, "intervals": 24, "max_ratio": 16.0})
def _universal(cfg):
    p = SparseFormParams(cfg.r, cfg.s)
    n = cfg.N[0]
    kinds = ("rademacher", "gaussian", "indicator", "sparse")
    rngs = trial_rngs(cfg.seed, cfg.ensemble.count)
    rows = []
    valid = True
    worst = 0.0
    for t in range(cfg.ensemble.count):
        rng = rngs[t]
        kind = kinds[t % 4] if cfg.ensemble.kind == "sparse" else cfg.ensemble.kind
        ln = int(rng.integers(1, n + 1))
        off = int(rng.integers(-n, n))
        f = random_signal(rng, kind, ln, off).abs()
        g = random_signal(rng, kind, ln, off + int(rng.integers(-ln, ln + 1))).abs()
        if f.is_zero and g.is_zero:
            f = Signal.delta(off)
        c = build_universal_sparse(f, g, p)
        ok = verify_sparse(c).ok
        valid &= ok
        ratio = float("nan")
        if t < cfg.options["collections"]:
            lam = eval_sparse_form(c, f, g, p)
            other = random_sparse_collection(c.hull(), rng, int(cfg.options["intervals"]))
            ratio = eval_sparse_form(other, f, g, p) / lam
            worst = max(worst, ratio)
        rows.append((t, kind, len(c), ok, ratio))
    rep = _report(cfg, ["trial", "kind", "collection_size", "sparse_ok", "domination_ratio"], rows=rows)
    rep.summary = {"max_domination_ratio": worst}
    rep.checks = [Check.flag("all universal collections 1/2-sparse", valid),
                  Check.le("max domination ratio", worst, cfg.options["max_ratio"])]
    return rep


# modulation

@register("bessel", "Bessel inequality for modulation projections", s_range=(1, 3), N=(256,),
          ensemble={"kind": "gaussian", "count": 10}, options={"slack": 1e-10})
def _bessel(cfg):
    rows = []
    worst = 0.0
    rngs = trial_rngs(cfg.seed, cfg.ensemble.count)
    for t in range(cfg.ensemble.count):
        f = random_signal(rngs[t], cfg.ensemble.kind, cfg.N[0])
        for s in cfg.ss:
            alpha = f"1/{2 ** s}"
            fam = modulation_projection(f, s, parse_torus(alpha), cfg.grid)
            total = fam.bessel_sum()
            ratio = total / f.norm2() ** 2
            worst = max(worst, total - f.norm2() ** 2)
            rows.append((t, s, alpha, len(fam), fam.supports_disjoint(), ratio))
    rep = _report(cfg, ["trial", "s", "alpha", "components", "supports_disjoint", "bessel_ratio"], rows=rows)
    rep.checks = [Check.le("max (sum ||f_h||^2 - ||f||^2)", worst, cfg.options["slack"]),
                  Check.flag("Fourier supports disjoint", all(r[4] for r in rows))]
    return rep


@register("transfer-identity", "transfer identity for the level-s major arc multiplier",
          alphas=("1/2",), s_range=(1, 1), N=(256,), ensemble={"kind": "gaussian", "count": 3},
          options={"tol": 1e-6})
def _transfer(cfg):
    model = MultiplierModel(epsilon=cfg.epsilon)
    rows = []
    worst = 0.0
    rngs = trial_rngs(cfg.seed, cfg.ensemble.count)
    for t in range(cfg.ensemble.count):
        f, g = _pair(rngs, t, cfg.ensemble.kind, cfg.N[0])
        for a in cfg.alphas:
            for s in cfg.ss:
                r = major_transfer_check(f, g, s, parse_torus(a), model, L=cfg.grid)
                worst = max(worst, r.discrepancy)
                rows.append((t, a, s, r.L, r.lhs.real, r.lhs.imag, r.rhs.real, r.rhs.imag, r.discrepancy,
                             r.bound_ratio))
    rep = _report(cfg, ["trial", "alpha", "s", "L", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "discrepancy",
                        "bound_ratio"], rows=rows)
    rep.checks = [Check.le("max relative discrepancy", worst, cfg.options["tol"]),
                  Check.le("max Cauchy-Schwarz ratio", max(r[9] for r in rows), 1.0 + 1e-9)]
    return rep


# weights

@register("weighted", "weighted l^2 bound for H^alpha with w, 1/w in A_2 and RH_r",
          N=(256, 4096), ensemble={"kind": "gaussian", "count": 10},
          weights=({"kind": "power", "exponent": -0.5}, {"kind": "power", "exponent": -0.25},
                   {"kind": "power", "exponent": 0.25}, {"kind": "power", "exponent": 0.5}),
          options={"rh_r": 1.5, "a2_max": 4.0, "rh_max": 2.0, "max_growth": 2.0, "max_spread": 2.0})
def _weighted(cfg):
    from .weights import Weight

    rows = []
    best: dict = {}
    admitted: dict = {}
    for n in cfg.N:
        win = Window.of(0, n - 1)
        rngs = trial_rngs(cfg.seed + n, cfg.ensemble.count)
        sigs = [random_signal(rngs[t], cfg.ensemble.kind, n // 2, n // 4) for t in range(cfg.ensemble.count)]
        for wi, spec in enumerate(cfg.weights):
            w = Weight.from_spec(win, spec)
            a2, a2i = a2_characteristic(w), a2_characteristic(w.inverse())
            rh, rhi = rh_characteristic(w, cfg.options["rh_r"]), rh_characteristic(w.inverse(), cfg.options["rh_r"])
            ok = max(a2, a2i) <= cfg.options["a2_max"] and max(rh, rhi) <= cfg.options["rh_max"]
            admitted[(wi, n)] = ok
            for a in cfg.alphas:
                alpha = parse_torus(a)
                mx = max(weighted_norm_ratio(alpha, f, w) for f in sigs)
                rows.append((n, wi, json.dumps(spec, sort_keys=True), a2, a2i, rh, rhi, ok, a, mx))
                best[(wi, n, a)] = mx
    rep = _report(cfg, ["N", "weight", "spec", "a2", "a2_inv", "rh", "rh_inv", "in_test_set", "alpha",
                        "max_ratio"], rows=rows)
    test = [wi for wi in range(len(cfg.weights)) if all(admitted[(wi, n)] for n in cfg.N)]
    growth, spread = 1.0, 1.0
    for wi in test:
        for n in cfg.N:
            vals = [best[(wi, n, a)] for a in cfg.alphas]
            spread = max(spread, max(vals) / min(vals))
        if len(cfg.N) > 1:
            n0, n1 = min(cfg.N), max(cfg.N)
            for a in cfg.alphas:
                q = best[(wi, n1, a)] / best[(wi, n0, a)]
                growth = max(growth, q, 1.0 / q)
    rep.summary = {"test_set": test, "max_ratio": max(best.values()), "growth": growth, "alpha_spread": spread}
    rep.checks = [Check.ge("test-set size", len(test), 1),
                  Check.le("window stability", growth, cfg.options["max_growth"]),
                  Check.le("alpha spread", spread, cfg.options["max_spread"])]
    return rep
