"""Classification of the (xi, p) rectangle into separable, LHV-modelled,
gap, and Bell-violating regions, plus deterministic CSV/JSON serialization.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from typing import IO

import numpy as np

from .entanglement import family_entangled, family_pt_min_eigenvalue, ppt_verdict
from .lhv import GENERATOR_ID, lhv_validity_bound
from .linalg import NumericalFailure
from .polytope import optimize_settings, violation_threshold
from .states import XI_MAX, FamilyParams, family_state

CSV_HEADER = "xi_rad,xi_over_pi,p,entangled,lhv_modelled,bell_violating,lhv_bound,p_star,pt_min_eig"

CROSS_CHECK_STRIDE = 7


@dataclass(frozen=True)
class LpSettings:
    """Optional per-point LP search attached to a scan."""

    m: int
    restarts: int = 20

    def __post_init__(self) -> None:
        if not (1 <= self.m <= 6):
            raise ValueError("settings per side must be 1..6")
        if self.restarts < 1:
            raise ValueError("need at least one restart")


@dataclass(frozen=True)
class ScanConfig:
    xi_range: tuple[float, float] = (0.0, XI_MAX)
    p_range: tuple[float, float] = (0.0, 1.0)
    n_xi: int = 50
    n_p: int = 50
    seed: int = 0
    lp_settings: LpSettings | None = None

    def __post_init__(self) -> None:
        lo, hi = self.xi_range
        FamilyParams(0.0, lo)
        FamilyParams(0.0, hi)
        plo, phi = self.p_range
        FamilyParams(plo, 0.0)
        FamilyParams(phi, 0.0)
        if lo > hi or plo > phi:
            raise ValueError("ranges must be ordered (low, high)")
        if self.n_xi < 1 or self.n_p < 1:
            raise ValueError("grid needs at least one point per axis")

    def xi_values(self) -> np.ndarray:
        return np.linspace(self.xi_range[0], self.xi_range[1], self.n_xi)

    def p_values(self) -> np.ndarray:
        return np.linspace(self.p_range[0], self.p_range[1], self.n_p)


@dataclass(frozen=True)
class RegionPoint:
    xi: float
    p: float
    entangled: bool
    lhv_modelled: bool
    bell_violating: bool
    lhv_bound: float
    p_star: float
    pt_min_eig: float
    v_critical: float | None = None

    @property
    def region(self) -> str:
        if not self.entangled:
            return "separable"
        if self.lhv_modelled:
            return "entangled-lhv-modelled"
        if self.bell_violating:
            return "bell-violating"
        return "gap"


def classify_point(p: float, xi: float) -> RegionPoint:
    """Pointwise region classification from the analytic boundaries."""
    params = FamilyParams(p, xi)
    bound = lhv_validity_bound(xi)
    threshold = violation_threshold(xi)
    return RegionPoint(
        xi=params.xi,
        p=params.p,
        entangled=bool(family_entangled(p, xi)),
        lhv_modelled=bool(params.p <= bound),
        bell_violating=bool(params.p > threshold.p_star),
        lhv_bound=bound,
        p_star=threshold.p_star,
        pt_min_eig=family_pt_min_eigenvalue(p, xi),
    )


@dataclass(frozen=True)
class ScanResult:
    config: ScanConfig
    points: tuple[RegionPoint, ...]
    meta: dict


def _cross_validate(xis: np.ndarray, ps: np.ndarray) -> None:
    """Eigensolve a sparse subgrid and compare against the analytic columns.

    The closed-form minimum partial-transpose eigenvalue must agree with the
    eigensolver to 1e-12, a fired witness must coincide with the analytic
    entangled region, and the witness must stay silent on the separable
    edges (p = 0 or xi = 0).
    """
    sub_x = xis[:: max(1, len(xis) // CROSS_CHECK_STRIDE)]
    sub_p = ps[:: max(1, len(ps) // CROSS_CHECK_STRIDE)]
    for xi in sub_x:
        for p in sub_p:
            verdict = ppt_verdict(family_state(p, xi))
            closed = family_pt_min_eigenvalue(p, xi)
            if abs(verdict.min_eigenvalue - closed) > 1e-12:
                raise NumericalFailure(
                    f"analytic PT eigenvalue {closed!r} disagrees with eigensolver "
                    f"{verdict.min_eigenvalue!r} at p={p!r}, xi={xi!r}"
                )
            if verdict.entangled and not family_entangled(p, xi):
                raise NumericalFailure(f"witness fired in the separable region at p={p!r}, xi={xi!r}")
            if not family_entangled(p, xi) and verdict.min_eigenvalue < -1e-10:
                raise NumericalFailure(f"negative witness on a product point at p={p!r}, xi={xi!r}")


def scan(config: ScanConfig) -> ScanResult:
    """Classify the full grid, row-major with xi as the outer axis."""
    xis = config.xi_values()
    ps = config.p_values()
    _cross_validate(xis, ps)
    lp_seeds = None
    if config.lp_settings is not None:
        lp_seeds = np.random.SeedSequence(config.seed).spawn(len(xis) * len(ps))
    points = []
    flat = 0
    for xi in xis:
        for p in ps:
            point = classify_point(p, xi)
            if config.lp_settings is not None:
                search = optimize_settings(
                    family_state(p, xi),
                    m_a=config.lp_settings.m,
                    restarts=config.lp_settings.restarts,
                    seed=int(lp_seeds[flat].generate_state(1)[0]),
                )
                point = dataclasses.replace(point, v_critical=search.v_min)
            points.append(point)
            flat += 1
    return ScanResult(config=config, points=tuple(points), meta=_meta(config.seed))


def _meta(seed: int) -> dict:
    from . import __version__

    return {"version": __version__, "seed": int(seed), "generator": GENERATOR_ID}


def _fmt(value: float) -> str:
    return repr(float(value))


def _fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def write_csv(result: ScanResult, stream: IO[str]) -> None:
    stream.write(CSV_HEADER)
    stream.write("\n")
    for pt in result.points:
        row = (
            _fmt(pt.xi),
            _fmt(pt.xi / np.pi),
            _fmt(pt.p),
            _fmt_bool(pt.entangled),
            _fmt_bool(pt.lhv_modelled),
            _fmt_bool(pt.bell_violating),
            _fmt(pt.lhv_bound),
            _fmt(pt.p_star),
            _fmt(pt.pt_min_eig),
        )
        stream.write(",".join(row))
        stream.write("\n")


def parse_csv(text: str) -> list[dict]:
    """Read back a scan CSV; numeric fields as floats, flags as bools."""
    lines = text.strip().split("\n")
    if lines[0] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    names = lines[0].split(",")
    bool_fields = {"entangled", "lhv_modelled", "bell_violating"}
    out = []
    for line in lines[1:]:
        cells = line.split(",")
        rec = {}
        for name, cell in zip(names, cells):
            rec[name] = cell == "true" if name in bool_fields else float(cell)
        out.append(rec)
    return out


def point_json_dict(pt: RegionPoint) -> dict:
    rec = {
        "xiRad": pt.xi,
        "xiOverPi": pt.xi / np.pi,
        "p": pt.p,
        "entangled": pt.entangled,
        "lhvModelled": pt.lhv_modelled,
        "bellViolating": pt.bell_violating,
        "lhvBound": pt.lhv_bound,
        "pStar": pt.p_star,
        "ptMinEig": pt.pt_min_eig,
    }
    if pt.v_critical is not None:
        rec["vCritical"] = pt.v_critical
    return rec


def write_json(result: ScanResult, stream: IO[str]) -> None:
    cfg = result.config
    payload = {
        "config": {
            "xiRange": [cfg.xi_range[0], cfg.xi_range[1]],
            "pRange": [cfg.p_range[0], cfg.p_range[1]],
            "nXi": cfg.n_xi,
            "nP": cfg.n_p,
            "seed": cfg.seed,
            "lpSettings": None
            if cfg.lp_settings is None
            else {"m": cfg.lp_settings.m, "restarts": cfg.lp_settings.restarts},
        },
        "points": [point_json_dict(pt) for pt in result.points],
        "meta": result.meta,
    }
    json.dump(payload, stream, indent=2)
    stream.write("\n")


def check_point(p: float, xi: float) -> dict:
    """Single-point report used by the command-line `check`."""
    pt = classify_point(p, xi)
    return {
        "point": point_json_dict(pt),
        "region": pt.region,
        "meta": _meta(seed=0),
    }
