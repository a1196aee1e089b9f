"""Scenario files, orchestration and report/CSV emission.

A scenario is one JSON object with a ``kind`` and the inputs for that kind.
Reports are plain JSON with sorted keys and no timestamps, so identical
scenarios and seeds give byte-identical reports.  Every report embeds the
effective scenario (after command-line overrides) it was produced from.
"""

from __future__ import annotations

import copy
import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from . import __version__
from .classify import classify_convergence, theorem_1_1_check
from .domains import ModelDomain, domain_from_dict, radius_for_offset
from .harmonic import (
    BoundarySet,
    WalkRegion,
    exact_measure,
    hm_monte_carlo,
    level_set_arc,
    strong_markov_residual,
)
from .sectors import ASetSpec, Geodesic, beta_from_amplitude, exhausts
from .semigroups import (
    HypothesisError,
    SemigroupModel,
    classify_semigroup,
    corollary_4_1_predict,
    geometric_grid,
    slope_cluster,
    trajectory_record,
)

__all__ = [
    "SCENARIO_SCHEMA",
    "ScenarioError",
    "RunResult",
    "load_scenario",
    "validate_scenario",
    "generate_points",
    "run_scenario",
    "emit_plot_data",
    "SERIES",
]

SERIES = ("angle_trace", "trajectory", "level_set", "aset_boundary")

_COMPLEX = {"oneOf": [{"type": "number"},
                      {"type": "array", "items": {"type": "number"}, "minItems": 1, "maxItems": 2}]}

_END = {
    "type": "object",
    "properties": {
        "type": {"enum": ["infinity", "point"]},
        "ray_angle": {"type": "number"},
        "re": {"type": "number"}, "im": {"type": "number"},
        "approach_angle": {"type": "number"},
    },
    "required": ["type"],
}

_DOMAIN = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["disk", "half_plane", "rotated_half_plane", "sector", "strip"]},
        "theta": {"type": "number"},
        "alpha1": {"type": "number"}, "alpha2": {"type": "number"},
        "half_width": {"type": "number", "exclusiveMinimum": 0},
        "shift": _COMPLEX,
        "marked_end": _END,
    },
    "required": ["kind"],
    "allOf": [
        {"if": {"properties": {"kind": {"const": "sector"}}},
         "then": {"required": ["alpha1", "alpha2"]}},
        {"if": {"properties": {"kind": {"const": "rotated_half_plane"}}},
         "then": {"required": ["theta"]}},
    ],
}

_SEQUENCE = {
    "type": "object",
    "properties": {
        "type": {"enum": ["ray", "spiral", "parabola", "points"]},
        "n": {"type": "integer", "minimum": 1},
        "angle": {"type": "number"},
        "A": {"type": "number"},
        "p": {"type": "number"},
        "offset": _COMPLEX,
        "points": {"type": "array", "items": _COMPLEX, "minItems": 1},
    },
    "required": ["type"],
    "allOf": [
        {"if": {"properties": {"type": {"const": "points"}}},
         "then": {"required": ["points"]}, "else": {"required": ["n"]}},
    ],
}

_TARGET = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["real_interval", "ray", "disk_arc"]},
        "a": {"type": "number"}, "b": {"type": "number"},
        "angle": {"type": "number"}, "apex": _COMPLEX,
        "phi1": {"type": "number"}, "phi2": {"type": "number"},
    },
    "required": ["kind"],
}

_KNOBS = {
    "type": "object",
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "walks": {"type": "integer", "minimum": 2},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "tail_fraction": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "eps_grid": {"type": "number", "exclusiveMinimum": 0},
        "tail_start": {"type": "integer", "minimum": 0},
        "samples": {"type": "integer", "minimum": 2},
        "t_max": {"type": "number", "exclusiveMinimum": 1},
        "t_samples": {"type": "integer", "minimum": 4},
        "step": {"type": "number", "exclusiveMinimum": 0},
    },
    "additionalProperties": False,
}

SCENARIO_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "angleset scenario",
    "type": "object",
    "properties": {
        "id": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
        "kind": {"enum": ["classify", "theorem_check", "semigroup", "harmonic_measure",
                          "exhaustion"]},
        "knobs": _KNOBS,
        "domain": _DOMAIN,
        "outer": _DOMAIN,
        "inner": {"oneOf": [_DOMAIN, {"enum": ["upper_half_disk"]}]},
        "sequence": _SEQUENCE,
        "geodesic": {"type": "object", "properties": {"start": _COMPLEX}, "required": ["start"]},
        "theta1": {"type": "number", "exclusiveMinimum": 0},
        "theta2": {"type": "number"},
        "horodisk": {"type": "object",
                     "properties": {"R": {"type": "number", "exclusiveMinimum": 0},
                                    "offset": {"type": "number", "exclusiveMinimum": 0}},
                     "minProperties": 1, "maxProperties": 1},
        "expect": {"type": "object",
                   "properties": {"kind": {"type": "string"},
                                  "theta": {"type": "number"},
                                  "interval": {"type": "array", "items": {"type": "number"},
                                               "minItems": 2, "maxItems": 2}},
                   "required": ["kind"]},
        "model": {"type": "object",
                  "properties": {"model": {"enum": ["strip", "zero_step", "positive_step", "sector"]},
                                 "alpha1": {"type": "number"}, "alpha2": {"type": "number"}},
                  "required": ["model"]},
        "starts": {"type": "array", "items": _COMPLEX, "minItems": 1},
        "exploratory": {"type": "boolean"},
        "target": _TARGET,
        "z": _COMPLEX,
        "level_k": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
    },
    "required": ["id", "kind"],
    "allOf": [
        {"if": {"properties": {"kind": {"const": "classify"}}},
         "then": {"required": ["domain", "sequence"]}},
        {"if": {"properties": {"kind": {"const": "theorem_check"}}},
         "then": {"required": ["domain", "outer", "sequence", "geodesic", "theta1", "theta2",
                               "horodisk"]}},
        {"if": {"properties": {"kind": {"const": "exhaustion"}}},
         "then": {"required": ["domain", "sequence", "geodesic", "theta1", "theta2"]}},
        {"if": {"properties": {"kind": {"const": "semigroup"}}},
         "then": {"required": ["model"]}},
        {"if": {"properties": {"kind": {"const": "harmonic_measure"}}},
         "then": {"required": ["domain", "target", "z"]}},
    ],
}

DEFAULT_KNOBS = {"seed": 0, "walks": 100_000, "tol": 0.02, "tail_fraction": 0.5,
                 "eps_grid": 0.05, "samples": 10_000, "t_max": 1e6, "t_samples": 200,
                 "step": 1.0}


class ScenarioError(ValueError):
    """Malformed or schema-invalid scenario; maps to exit status 2."""


def _c(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1] if len(v) > 1 else 0.0)
    return complex(v)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def validate_scenario(data) -> dict:
    validator = jsonschema.Draft202012Validator(SCENARIO_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        pointer = "/" + "/".join(str(p) for p in e.absolute_path)
        raise ScenarioError(f"schema violation at {pointer}: {e.message}")
    return data


def load_scenario(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON: {exc}") from exc
    return validate_scenario(data)


def generate_points(gen: dict) -> np.ndarray:
    """Sequence generators: ``ray``, ``spiral``, ``parabola`` and ``points``.

    ``ray``: ``offset + n e^{i angle}``; ``spiral``: ``offset + n e^{i A sin n}``;
    ``parabola``: ``offset + n + i n^p``; ``points``: an explicit list.
    """
    kind = gen["type"]
    if kind == "points":
        return np.array([_c(p) for p in gen["points"]], dtype=complex)
    n = np.arange(1, gen["n"] + 1, dtype=float)
    off = _c(gen.get("offset", 0))
    if kind == "ray":
        return off + n * np.exp(1j * gen.get("angle", 0.0))
    if kind == "spiral":
        return off + n * np.exp(1j * gen.get("A", math.pi / 6) * np.sin(n))
    return off + n + 1j * n ** gen.get("p", 2.0)


def _domain(d: dict) -> ModelDomain:
    try:
        return domain_from_dict(d)
    except (ValueError, KeyError) as exc:
        raise ScenarioError(f"bad domain descriptor: {exc}") from exc


def _trace(scn: dict, dom: ModelDomain) -> np.ndarray:
    pts = generate_points(scn["sequence"])
    inside = np.atleast_1d(dom.contains(pts))
    if not inside.all():
        bad = pts[~inside][0]
        raise ScenarioError(f"sequence point {bad} lies outside {dom.describe()}")
    return pts


@dataclass
class RunResult:
    report: dict
    status: int
    series: dict = field(default_factory=dict)


def _angle_series(cls) -> list:
    return [("index", "theta")] + [(i, float(a)) for i, a in enumerate(cls.angles)]


def _aset_series(spec: ASetSpec, rho_max: float = 50.0, n: int = 200) -> list:
    rows = [("case", "curve", "index", "re", "im")]
    for name, poly in aset_boundary_polylines(spec, rho_max, n):
        for i, z in enumerate(poly):
            rows.append((spec.case_tag, name, i, float(z.real), float(z.imag)))
    return rows


def aset_boundary_polylines(spec: ASetSpec, rho_max: float = 50.0, n: int = 200):
    """Boundary curves of an A-set as ``(name, points)`` polylines in the domain.

    Curves are drawn in straightened coordinates, where a sector boundary is a
    pair of rays at angle ``±beta`` joined by an arc of the hyperbolic circle
    about the geodesic's start, and then mapped into the domain.
    """
    g = spec.geodesic
    r0 = g.r0
    scale = max(r0, 1.0)
    R1, R2 = spec.radii
    side_plus, side_minus = -1, 1

    def sector_curve(R, side):
        beta = beta_from_amplitude(1.0, R) if R > 0 else 0.0
        rho = np.geomspace(max(r0, 1e-3 * scale), rho_max * scale, n)
        ray = rho * np.exp(1j * side * beta)
        if r0 <= 0 or R <= 0:
            return ray
        c, s = r0 * math.cosh(2 * R), r0 * math.sinh(2 * R)
        psi0 = np.angle(r0 * np.exp(1j * beta) - c)
        psi = np.linspace(psi0, math.pi, n // 2)
        arc = c + s * np.exp(1j * side * psi)
        return np.concatenate([arc[::-1], ray])

    def geodesic_curve():
        return np.geomspace(max(r0, 1e-3 * scale), rho_max * scale, n) + 0j

    case = spec.case_tag
    curves = []
    if case == "iii":
        curves = [("sector_plus", sector_curve(R1, side_plus)),
                  ("sector_minus", sector_curve(R1, side_minus))]
    elif case == "i":
        curves = [("outer_plus", sector_curve(R1, side_plus)),
                  ("inner_plus", sector_curve(R2, side_plus))]
    elif case == "ii":
        curves = [("inner_minus", sector_curve(R1, side_minus)),
                  ("outer_minus", sector_curve(R2, side_minus))]
    elif case == "iv":
        curves = [("outer_plus", sector_curve(R1, side_plus)), ("geodesic", geodesic_curve())]
    elif case == "v":
        curves = [("outer_minus", sector_curve(R2, side_minus)), ("geodesic", geodesic_curve())]
    else:
        curves = [("outer_plus", sector_curve(R1, side_plus)),
                  ("outer_minus", sector_curve(R2, side_minus))]
    back = g._straight.inverse()
    out = []
    for name, u in curves:
        with np.errstate(all="ignore"):
            z = np.asarray(back(u, check=False), dtype=complex)
        out.append((name, z[np.isfinite(z)]))
    return out


def _knobs(scn: dict) -> dict:
    k = dict(DEFAULT_KNOBS)
    k.update(scn.get("knobs", {}))
    return k


def _expect_ok(expect: dict | None, cls, tol: float) -> bool:
    if not expect:
        return True
    if expect["kind"] != cls.kind:
        return False
    if "theta" in expect and (cls.theta is None or abs(cls.theta - expect["theta"]) > tol):
        return False
    if "interval" in expect:
        lo, hi = expect["interval"]
        if abs(cls.interval[0] - lo) > tol or abs(cls.interval[1] - hi) > tol:
            return False
    return True


def _run_classify(scn, k):
    dom = _domain(scn["domain"])
    pts = _trace(scn, dom)
    cls = classify_convergence(pts, dom, tail_fraction=k["tail_fraction"], tol=k["tol"])
    ok = _expect_ok(scn.get("expect"), cls, k["tol"])
    verdicts = {"classification": cls.to_dict(), "agree": ok}
    return verdicts, {}, ok, {"angle_trace": _angle_series(cls)}


def _geodesic(scn, dom):
    return Geodesic.ray(dom, _c(scn["geodesic"]["start"]))


def _run_theorem(scn, k):
    delta = _domain(scn["domain"])
    U = _domain(scn["outer"])
    pts = _trace(scn, delta)
    hd = scn["horodisk"]
    R = hd["R"] if "R" in hd else radius_for_offset(U, hd["offset"])
    spec = ASetSpec(_geodesic(scn, U), scn["theta1"], scn["theta2"])
    rep = theorem_1_1_check(delta, U, R, spec, pts, tol=k["tol"], eps_grid=k["eps_grid"],
                            tail_start=k.get("tail_start"), tail_fraction=k["tail_fraction"],
                            samples=k["samples"], seed=k["seed"])
    verdicts = rep.to_dict()
    verdicts["R"] = R
    ok = rep.conditions_hold and rep.agree
    witnesses = {"sandwich": verdicts["sandwich"]["witness"],
                 "exhaustion": verdicts["exhaustion"]["witness"]}
    series = {"angle_trace": _angle_series(rep.classified), "aset_boundary": _aset_series(spec)}
    return verdicts, witnesses, ok, series


def _run_exhaustion(scn, k):
    dom = _domain(scn["domain"])
    pts = _trace(scn, dom)
    spec = ASetSpec(_geodesic(scn, dom), scn["theta1"], scn["theta2"])
    ex = exhausts(pts, spec, k["eps_grid"], k.get("tail_start"))
    verdicts = {"exhaustion": ex.to_dict(), "case": spec.case_tag}
    witnesses = {"exhaustion": verdicts["exhaustion"]["witness"]}
    return verdicts, witnesses, ex.passed, {"aset_boundary": _aset_series(spec)}


def _run_semigroup(scn, k):
    model = SemigroupModel.from_dict(scn["model"])
    starts = [_c(z) for z in scn.get("starts", [0])]
    typ = classify_semigroup(model, starts[0], k["step"])
    slopes = [slope_cluster(model, z, k["t_max"], k["t_samples"]) for z in starts]
    verdicts = {"type": typ.to_dict(),
                "slopes": [{"start": _pair(z), "lo": s.lo, "hi": s.hi} for z, s in zip(starts, slopes)]}
    ok = True
    if model.name == "sector":
        a1, a2 = model.params
        try:
            pred = corollary_4_1_predict(a1, a2, strict=not scn.get("exploratory", False))
        except HypothesisError as exc:
            raise ScenarioError(str(exc)) from exc
        verdicts["predicted_slope"] = pred
        verdicts["exploratory"] = a1 + a2 < math.pi
        errs = [max(abs(s.lo - pred), abs(s.hi - pred)) for s in slopes]
        spread = max(s.hi for s in slopes) - min(s.lo for s in slopes)
        ok = max(errs) <= k["tol"] and spread <= k["tol"]
        verdicts["max_slope_error"] = max(errs)
        verdicts["trajectory_spread"] = spread
    expect = scn.get("expect")
    if expect:
        ok = ok and expect["kind"] == typ.kind
    verdicts["agree"] = ok
    times = np.concatenate([[0.0], geometric_grid(1.0, k["t_max"], k["t_samples"])])
    rec = trajectory_record(model, starts[0], times)
    rows = [("t", "re", "im", "arg")] + list(rec.rows())
    return verdicts, {}, ok, {"trajectory": rows}


def _run_harmonic(scn, k):
    dom = _domain(scn["domain"])
    target = BoundarySet.from_dict(scn["target"])
    z = _c(scn["z"])
    if not dom.contains(z):
        raise ScenarioError("evaluation point outside the domain")
    est = hm_monte_carlo(dom, target, z, k["walks"], seed=k["seed"])
    exact = exact_measure(dom, target, z)
    verdicts = {"monte_carlo": est.to_dict(),
                "exact": None if exact is None else float(exact)}
    ok = not est.unreliable
    if exact is not None:
        dev = abs(est.mean - exact)
        verdicts["deviation_in_stderr"] = dev / est.stderr if est.stderr > 0 else (0.0 if dev == 0 else math.inf)
        ok = ok and dev <= 4 * est.stderr + 1e-12
    if "inner" in scn:
        inner = scn["inner"]
        inner = WalkRegion.upper_half_disk() if inner == "upper_half_disk" else _domain(inner)
        res = strong_markov_residual(inner, dom, target, z, k["walks"], k["seed"],
                                     return_details=True)
        verdicts["strong_markov"] = res.to_dict()
        ok = ok and res.residual < max(k["tol"], 4 * res.stderr) and res.monotone
    series = {}
    if target.kind == "disk_arc" and dom.kind == "disk":
        kk = scn.get("level_k", 0.5)
        arc = level_set_arc(target, kk)
        pts = arc.endpoints if arc.is_diameter else arc.points(101, margin=0.0)
        series["level_set"] = [("k", "index", "re", "im")] + [
            (kk, i, float(p.real), float(p.imag)) for i, p in enumerate(pts)]
        verdicts["level_set"] = {"k": kk, "is_diameter": arc.is_diameter,
                                 "center": None if arc.center is None else _pair(arc.center),
                                 "radius": arc.radius if math.isfinite(arc.radius) else None}
    verdicts["agree"] = ok
    return verdicts, {}, ok, series


_RUNNERS = {"classify": _run_classify, "theorem_check": _run_theorem,
            "exhaustion": _run_exhaustion, "semigroup": _run_semigroup,
            "harmonic_measure": _run_harmonic}


def _clean(obj):
    """Make a payload JSON-safe: numpy scalars, complex numbers, non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return _pair(complex(obj))
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def apply_overrides(scn: dict, overrides: dict | None) -> dict:
    scn = copy.deepcopy(scn)
    if overrides:
        knobs = scn.setdefault("knobs", {})
        for key, val in overrides.items():
            if val is not None:
                knobs[key] = val
    return validate_scenario(scn)


def run_scenario(scn: dict, overrides: dict | None = None) -> RunResult:
    """Run a validated scenario; status 0 on agree/holds, 1 on disagree/fails.

    Raises :class:`ScenarioError` for input problems (status 2 at the CLI).
    """
    scn = apply_overrides(validate_scenario(scn), overrides)
    k = _knobs(scn)
    try:
        verdicts, witnesses, ok, series = _RUNNERS[scn["kind"]](scn, k)
    except ScenarioError:
        raise
    except (ValueError, KeyError) as exc:
        raise ScenarioError(f"{type(exc).__name__}: {exc}") from exc
    report = {
        "scenario_id": scn["id"],
        "kind": scn["kind"],
        "version": __version__,
        "seed": k["seed"],
        "knobs": k,
        "verdicts": verdicts,
        "witnesses": witnesses,
        "status": "agree" if ok else "fail",
        "series_available": sorted(series),
        "scenario": scn,
    }
    return RunResult(_clean(report), 0 if ok else 1, series)


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def emit_plot_data(result: RunResult, what: str, out_dir) -> Path:
    """Write one series as a headered CSV named ``<scenario id>_<series>.csv``."""
    if what not in SERIES:
        raise ScenarioError(f"unknown series {what!r}; choose from {', '.join(SERIES)}")
    if what not in result.series:
        raise ScenarioError(f"series {what!r} is not produced by a {result.report['kind']} scenario")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in result.series[what]:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    path = Path(out_dir) / f"{result.report['scenario_id']}_{what}.csv"
    path.write_text(buf.getvalue())
    return path
