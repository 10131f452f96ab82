"""Named example surfaces and the JSON surface spec.

A spec is a plain dict (so it round-trips through JSON unchanged)::

    {"name": "cylinder",
     "alpha": {"kind": "circle", "params": {"radius": 1.0}, "domain": null},
     "omega": {"kind": "circle", "params": {"radius": 2.0}, "domain": null},
     "base": null,
     "grid": {"nt": 101, "ns": 101, "t_range": null, "s_range": null},
     "checks": ["lagrangian", "pmc"],
     "expect": {"lagrangian": true, "pmc": true},
     "output": {"dir": ".", "formats": ["obj"], "project": null}}

``domain`` is the parameter window of the curve (the integration span for
ODE-backed kinds).  Null grid ranges fall back to the curve windows.
"""
from __future__ import annotations

import copy
import dataclasses

import jsonschema

from lagstar import curves
from lagstar.classify import FAMILIES, Grid
from lagstar.errors import DomainError
from lagstar.star import StarSurface, build

_CURVE_FACTORIES = {
    "line": curves.line,
    "circle": curves.circle,
    "cornu": curves.cornu,
    "gerono": curves.gerono,
    "lissajous": curves.lissajous,
    "lemniscate": curves.lemniscate,
    "translating": curves.translating_curve,
    "cmc_radial": curves.cmc_radial_curve,
    "elastica": curves.elastica_curve,
}
# kinds whose factory takes the window as an argument, and its keyword
_WINDOW_ARG = {"line": "window", "cornu": "window", "translating": "span", "cmc_radial": "span", "elastica": "span"}

CURVE_KINDS = tuple(_CURVE_FACTORIES)

_range = {"anyOf": [{"type": "null"}, {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}

CURVE_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": list(CURVE_KINDS)},
        "params": {"type": "object"},
        "domain": _range,
        "period": {"type": ["number", "null"]},
    },
    "additionalProperties": False,
}

_check_entry = {
    "anyOf": [
        {"enum": list(FAMILIES)},
        {
            "type": "object",
            "required": ["name"],
            "properties": {"name": {"enum": list(FAMILIES)}, "rho": {"type": "number"}, "theta": {"type": "number"}},
            "additionalProperties": False,
        },
    ]
}

SPEC_SCHEMA = {
    "type": "object",
    "required": ["alpha", "omega"],
    "properties": {
        "name": {"type": "string"},
        "alpha": CURVE_SCHEMA,
        "omega": CURVE_SCHEMA,
        "base": {"anyOf": [{"type": "null"}, {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]},
        "grid": {
            "type": "object",
            "properties": {
                "nt": {"type": "integer", "minimum": 2},
                "ns": {"type": "integer", "minimum": 2},
                "t_range": _range,
                "s_range": _range,
            },
            "additionalProperties": False,
        },
        "checks": {"type": "array", "items": _check_entry},
        "expect": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "output": {
            "type": "object",
            "properties": {
                "dir": {"type": "string"},
                "formats": {"type": "array", "items": {"enum": ["obj", "ply", "csv"]}},
                "project": {"anyOf": [{"type": "null"}, {"enum": [0, 1, 2, 3, "all"]}]},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


def validate_spec(spec: dict) -> dict:
    """Schema validation plus the range checks JSON Schema cannot express."""
    try:
        jsonschema.validate(spec, SPEC_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise DomainError(f"invalid surface spec: {exc.message}") from None
    for key in ("alpha", "omega"):
        dom = spec[key].get("domain")
        if dom is not None and not dom[0] < dom[1]:
            raise DomainError(f"{key}.domain must be a non-empty interval")
    grid = spec.get("grid") or {}
    for key in ("t_range", "s_range"):
        rng = grid.get(key)
        if rng is not None and not rng[0] < rng[1]:
            raise DomainError(f"grid.{key} must be a non-empty interval")
    return spec


def make_curve(cspec: dict) -> curves.PlanarCurve:
    kind = cspec["kind"]
    params = dict(cspec.get("params") or {})
    dom = cspec.get("domain")
    if "center_re" in params or "center_im" in params:
        params["center"] = complex(params.pop("center_re", 0.0), params.pop("center_im", 0.0))
    for key in ("p0",):
        if f"{key}_re" in params or f"{key}_im" in params:
            params[key] = complex(params.pop(f"{key}_re", 0.0), params.pop(f"{key}_im", 0.0))
    if dom is not None and kind in _WINDOW_ARG:
        params[_WINDOW_ARG[kind]] = tuple(dom)
    try:
        curve = _CURVE_FACTORIES[kind](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {kind}: {exc}") from None
    if dom is not None and kind not in _WINDOW_ARG:
        curve = dataclasses.replace(curve, window=tuple(dom))
    period = cspec.get("period")
    if period is not None:
        curve = dataclasses.replace(curve, period=float(period))
    return curve


def surface_from_spec(spec: dict) -> StarSurface:
    validate_spec(spec)
    alpha = make_curve(spec["alpha"])
    omega = make_curve(spec["omega"])
    base = spec.get("base")
    t0, s0 = (None, None) if base is None else base
    tr, sr = grid_ranges(spec, alpha, omega)
    return build(alpha, omega, t0, s0, t_window=tr, s_window=sr)


def grid_ranges(spec, alpha, omega):
    g = spec.get("grid") or {}
    tr = tuple(g["t_range"]) if g.get("t_range") else tuple(alpha.window)
    sr = tuple(g["s_range"]) if g.get("s_range") else tuple(omega.window)
    return tr, sr


def grid_from_spec(spec: dict, surf: StarSurface) -> Grid:
    g = spec.get("grid") or {}
    tr, sr = grid_ranges(spec, surf.alpha, surf.omega)
    return Grid(tr, sr, int(g.get("nt", 101)), int(g.get("ns", 101)))


# ---------------------------------------------------------------------------
# gallery
# ---------------------------------------------------------------------------


def _spec(name, alpha, omega, checks, expect, base=None):
    return {
        "name": name,
        "alpha": alpha,
        "omega": omega,
        "base": base,
        "grid": {"nt": 101, "ns": 101, "t_range": None, "s_range": None},
        "checks": checks,
        "expect": expect,
        "output": {"dir": ".", "formats": ["obj"], "project": None},
    }


def _c(kind, domain=None, **params):
    return {"kind": kind, "params": params, "domain": list(domain) if domain else None}


def plane():
    return _spec(
        "plane", _c("line", (-1, 1), a=0.0), _c("line", (-1, 1), a=0.0),
        ["lagrangian", "special", "pmc", "hsl", "cmc", "willmore"],
        {"lagrangian": True, "special": True, "pmc": True, "hsl": True, "cmc": True, "willmore": True},
    )


def special(a=1.0, b=2.0):
    return _spec(
        "special", _c("line", (-1, 1), a=a), _c("line", (-1, 1), a=b),
        ["lagrangian", "special", "holomorphic", "pmc", "hsl", "cmc"],
        {"lagrangian": True, "special": True, "holomorphic": True, "pmc": True, "hsl": True, "cmc": True},
    )


def cylinder(R=1.0):
    # omega(s) = R e^{is}: speed R, curvature 1/R
    checks = ["lagrangian", "special", "pmc", "hsl", "cmc", "willmore"]
    expect = {"lagrangian": True, "special": False, "pmc": True, "hsl": True, "cmc": True, "willmore": True}
    return _spec("cylinder", _c("circle", radius=1.0), _c("circle", radius=R), checks, expect)


def hsl_circle_line(a0=0.0, b0=0.0, R=1.0):
    alpha = _c("circle", radius=R, center_re=a0, rate=1.0 / R)
    omega = _c("line", (-2, 2), a=b0)
    return _spec("hsl-circle-line", alpha, omega, ["lagrangian", "hsl", "special"],
                 {"lagrangian": True, "hsl": True, "special": False})


def hsl_two_circles(a1=0.5, a2=1.0, R=2.0):
    alpha = _c("circle", radius=1.0, center_re=a1)
    omega = _c("circle", radius=R, center_re=a2, rate=1.0 / R)
    return _spec("hsl-two-circles", alpha, omega, ["lagrangian", "hsl", "special"],
                 {"lagrangian": True, "hsl": True, "special": False})


def hsl_cornu(a=1.0):
    return _spec(
        "hsl-cornu", _c("cornu", (-2, 2), a=a), _c("cornu", (-2, 2), a=-a),
        ["lagrangian", "hsl", "pmc", "special"],
        {"lagrangian": True, "hsl": True, "pmc": False, "special": False},
    )


def cmc_lemniscate():
    return _spec(
        "cmc-lemniscate", _c("lemniscate"), _c("lemniscate"),
        ["lagrangian", "cmc", "torus", "hsl"],
        {"lagrangian": True, "cmc": True, "torus": True, "hsl": False},
    )


def shrinker_cylinder():
    return _spec(
        "shrinker-cylinder", _c("circle", radius=1.0), _c("circle", radius=1.0),
        ["lagrangian", "self_shrinker", "self_expander"],
        {"lagrangian": True, "self_shrinker": True, "self_expander": False},
    )


def translating(rho=1.0, theta=0.0):
    alpha = _c("translating", (-2, 2), rho=rho, theta=theta, sign=1)
    omega = _c("translating", (-2, 2), rho=rho, theta=theta, sign=-1)
    return _spec(
        "translating", alpha, omega,
        ["lagrangian", {"name": "translating", "rho": rho, "theta": theta}, "special"],
        {"lagrangian": True, "translating": True, "special": False},
    )


def willmore_elastica(lambda_len=1.0):
    alpha = _c("elastica", (-3, 3), lambda_len=lambda_len, kappa0=1.0)
    omega = _c("elastica", (-3, 3), lambda_len=lambda_len, kappa0=0.5)
    return _spec("willmore-elastica", alpha, omega, ["lagrangian", "willmore"],
                 {"lagrangian": True, "willmore": True})


def torus_gerono_lissajous():
    return _spec(
        "torus-gerono-lissajous", _c("gerono"), _c("lissajous"),
        ["lagrangian", "torus", "hsl"],
        {"lagrangian": True, "torus": True, "hsl": False},
    )


GALLERY = {
    "plane": plane,
    "special": special,
    "cylinder": cylinder,
    "hsl-circle-line": hsl_circle_line,
    "hsl-two-circles": hsl_two_circles,
    "hsl-cornu": hsl_cornu,
    "cmc-lemniscate": cmc_lemniscate,
    "shrinker-cylinder": shrinker_cylinder,
    "translating": translating,
    "willmore-elastica": willmore_elastica,
    "torus-gerono-lissajous": torus_gerono_lissajous,
}


def gallery_spec(name: str, **params) -> dict:
    if name not in GALLERY:
        raise DomainError(f"unknown gallery entry {name!r}; available: {', '.join(GALLERY)}")
    try:
        return copy.deepcopy(GALLERY[name](**params))
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name}: {exc}") from None


def gallery_surface(name: str, **params) -> StarSurface:
    return surface_from_spec(gallery_spec(name, **params))
