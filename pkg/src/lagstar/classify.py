"""Residual checks for the special families of alpha * omega surfaces.

Each ``check_*`` returns a :class:`Check`: the residual, the threshold it is
judged against and free-form diagnostics.  The ``fd_oracle_*`` functions
recompute C, H and the Lagrangian angle derivatives by central differences
of the analytic tangent fields, independently of the closed forms in
:mod:`lagstar.star`.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from lagstar import specfun
from lagstar.curves import closure_report, elastica_residual, line
from lagstar.errors import DomainError, MissingPeriodError
from lagstar.geomcore import c2, herm, to_r4
from lagstar.star import StarSurface, build, project_normal

CLOSED_FORM_TOL = 1e-10
ODE_TOL = 1e-8
FD_TOL = 1e-6
FD_STEP = 1e-4

FAMILIES = (
    "lagrangian", "special", "holomorphic", "pmc", "hsl", "cmc",
    "self_shrinker", "self_expander", "translating", "willmore", "torus",
)


@dataclass(frozen=True)
class Grid:
    t_range: tuple
    s_range: tuple
    nt: int = 101
    ns: int = 101

    def __post_init__(self):
        if self.nt < 2 or self.ns < 2:
            raise DomainError("grid needs at least 2 nodes per direction")
        if not (self.t_range[0] < self.t_range[1] and self.s_range[0] < self.s_range[1]):
            raise DomainError("grid ranges must be non-empty")

    def nodes(self):
        return np.linspace(*self.t_range, self.nt), np.linspace(*self.s_range, self.ns)

    def to_dict(self):
        return {"nt": self.nt, "ns": self.ns, "t_range": list(self.t_range), "s_range": list(self.s_range)}


def default_grid(surf: StarSurface, nt: int = 101, ns: int = 101) -> Grid:
    return Grid(tuple(surf.alpha.window), tuple(surf.omega.window), nt, ns)


def grid_mask(surf: StarSurface, grid: Grid, dilate: int = 1) -> np.ndarray:
    """Singular nodes of the grid, dilated by ``dilate`` cells in each direction."""
    t, s = grid.nodes()
    mask = surf.singular_mask(t[:, None], s[None, :])
    for _ in range(dilate):
        grown = mask.copy()
        grown[1:, :] |= mask[:-1, :]
        grown[:-1, :] |= mask[1:, :]
        grown[:, 1:] |= mask[:, :-1]
        grown[:, :-1] |= mask[:, 1:]
        mask = grown
    return mask


def default_threshold(surf: StarSurface) -> float:
    return ODE_TOL if (surf.alpha.ode or surf.omega.ode) else CLOSED_FORM_TOL


@dataclass
class Check:
    name: str
    residual: float
    threshold: float
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.threshold)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "residual": float(self.residual),
            "threshold": float(self.threshold),
            "pass": self.passed,
            "details": _jsonable(self.details),
        }


@dataclass
class ClassReport:
    checks: list
    grid: Optional[Grid] = None
    parameters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "grid": self.grid.to_dict() if self.grid else None,
            "parameters": _jsonable(self.parameters),
            "checks": [c.to_dict() for c in self.checks],
            "pass": self.passed,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), indent=2, **kw)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _grid_jet(surf, grid, with_position=False):
    t, s = grid.nodes()
    mask = grid_mask(surf, grid)
    if np.all(mask):
        raise DomainError("every grid node is singular")
    jet = surf.jet(t[:, None], s[None, :], with_position=with_position, allow_singular=True)
    return jet, mask


def _cnorm(v):
    return np.sqrt(np.sum(np.abs(v) ** 2, axis=-1))


def _masked_max(values, mask):
    return float(np.max(np.where(mask, -np.inf, values)))


# ---------------------------------------------------------------------------
# family checks
# ---------------------------------------------------------------------------


def check_lagrangian(surf: StarSurface, grid: Optional[Grid] = None, threshold: Optional[float] = None) -> Check:
    """max |herm(Phi_t, Phi_s)| / (|Phi_t| |Phi_s|) over the masked grid."""
    grid = grid or default_grid(surf)
    jet, mask = _grid_jet(surf, grid)
    with np.errstate(invalid="ignore", divide="ignore"):
        r = np.abs(herm(jet.phi_t, jet.phi_s)) / np.sqrt(jet.E * jet.G)
    return Check("lagrangian", _masked_max(r, mask), threshold or default_threshold(surf),
                 {"masked_nodes": int(mask.sum())})


def check_special(surf: StarSurface, grid: Optional[Grid] = None, threshold: Optional[float] = None) -> Check:
    """Straight-line test: max |kappa| over both curves, with grid |H| as corroboration."""
    grid = grid or default_grid(surf)
    t, s = grid.nodes()
    ka = np.abs(surf.alpha.eval(t).kappa)
    kw = np.abs(surf.omega.eval(s).kappa)
    jet, mask = _grid_jet(surf, grid)
    h = _masked_max(jet.H_norm, mask)
    return Check("special", float(max(ka.max(), kw.max())), threshold or default_threshold(surf),
                 {"max_H": h, "max_kappa_alpha": float(ka.max()), "max_kappa_omega": float(kw.max())})


def holomorphic_constant(a: float, b: float) -> complex:
    """c = -(a - ib)^2 / (2 (a^2 + b^2)^2)."""
    if a == 0 and b == 0:
        raise DomainError("holomorphic correspondence is degenerate for (a, b) = (0, 0)")
    return -((a - 1j * b) ** 2) / (2.0 * (a * a + b * b) ** 2)


def swap_structure(v):
    """(x1 + i y1, x2 + i y2) -> (y1 + i y2, x1 - i x2)."""
    v = np.asarray(v)
    z1, z2 = v[..., 0], v[..., 1]
    return c2(z1.imag + 1j * z2.imag, z1.real - 1j * z2.real)


def holomorphic_correspondence(a: float, b: float, grid: Optional[Grid] = None, threshold: float = 1e-9) -> Check:
    """Residual of the image of (t + ia) * (s + ib) lying on the graph z -> c z^2.

    The surface is only defined up to translation, and translating changes
    the graph to z2 = c z1^2 + p z1 + q.  p and q are fitted by linear least
    squares with c held at its closed-form value.
    """
    c = holomorphic_constant(a, b)
    grid = grid or Grid((-1.0, 1.0), (-1.0, 1.0), 21, 21)
    surf = build(line(a, grid.t_range), line(b, grid.s_range), 0.0, 0.0)
    t, s = grid.nodes()
    img = swap_structure(surf.position(t[:, None], s[None, :])).reshape(-1, 2)
    z1, z2 = img[:, 0], img[:, 1]
    rhs = z2 - c * z1 ** 2
    design = np.stack([z1, np.ones_like(z1)], axis=1)
    (p, q), *_ = np.linalg.lstsq(design, rhs, rcond=None)
    resid = float(np.max(np.abs(rhs - p * z1 - q)))
    return Check("holomorphic", resid, threshold, {"c": c, "p": p, "q": q})


def _arclength_parts(surf, grid):
    t, s = grid.nodes()
    ja = surf.alpha.eval(t)
    jw = surf.omega.eval(s)
    return t, s, ja, jw


def check_pmc(surf: StarSurface, grid: Optional[Grid] = None, threshold: Optional[float] = None) -> Check:
    """Parallel mean curvature system in arclength derivatives, u = log(|alpha|^2 + |omega|^2)/2.

    Arclength derivatives come from the chain rule d/dsigma = |c'|^{-1} d/dt,
    which is exact for any regular parametrisation.
    """
    grid = grid or default_grid(surf)
    t, s, ja, jw = _arclength_parts(surf, grid)
    mask = grid_mask(surf, grid)
    ka, kw = ja.kappa[:, None], jw.kappa[None, :]
    dka, dkw = ja.dkappa_ds[:, None], jw.dkappa_ds[None, :]
    conf = np.abs(ja.pos[:, None]) ** 2 + np.abs(jw.pos[None, :]) ** 2
    with np.errstate(invalid="ignore", divide="ignore"):
        u_t = (np.real(np.conj(ja.pos) * ja.d1) / ja.speed)[:, None] / conf
        u_s = (np.real(np.conj(jw.pos) * jw.d1) / jw.speed)[None, :] / conf
    r1 = np.abs(dka - u_t * ka + u_s * kw)
    r2 = np.abs(u_t * kw + u_s * ka)
    r3 = np.abs(dkw - u_s * kw + u_t * ka)
    res = np.maximum(np.maximum(r1, r2), r3)
    return Check("pmc", _masked_max(res, mask), threshold or default_threshold(surf),
                 {"eq1": _masked_max(r1, mask), "eq2": _masked_max(r2, mask), "eq3": _masked_max(r3, mask)})


def _arclength_positions(curve, nodes):
    lo, hi = float(nodes[0]), float(nodes[-1])
    table = specfun.adaptive_cumulative_integral(lambda x: curve.eval(x).speed, lo, hi, tol=1e-12)
    return table(nodes)


def check_hsl(surf: StarSurface, grid: Optional[Grid] = None, threshold: Optional[float] = None) -> Check:
    """Hamiltonian stationarity: kappa_alpha' + kappa_omega' = 0 in arclength.

    Also fits kappa_alpha = a sigma + b and kappa_omega = -a tau + c.
    """
    grid = grid or default_grid(surf)
    t, s, ja, jw = _arclength_parts(surf, grid)
    da, dw = ja.dkappa_ds, jw.dkappa_ds
    res = float(np.max(np.abs(da[:, None] + dw[None, :])))
    sig = _arclength_positions(surf.alpha, t)
    tau = _arclength_positions(surf.omega, s)
    a_fit, b_fit = np.polyfit(sig, ja.kappa, 1)
    a_w, c_fit = np.polyfit(tau, jw.kappa, 1)
    details = {"a": float(a_fit), "b": float(b_fit), "c": float(c_fit), "a_from_omega": float(-a_w)}
    return Check("hsl", res, threshold or default_threshold(surf), details)


def check_cmc(surf: StarSurface, grid: Optional[Grid] = None, threshold: Optional[float] = None) -> Check:
    """Constant |H|: rho_est = mean |H|, residual = max ||H| - rho_est|.

    lambda is estimated from both curve equations
    kappa_alpha^2 = rho^2 |alpha|^2 - lambda and kappa_omega^2 = rho^2 |omega|^2 + lambda.
    """
    grid = grid or default_grid(surf)
    jet, mask = _grid_jet(surf, grid)
    hn = jet.H_norm[~mask]
    rho = float(np.mean(hn))
    res = float(np.max(np.abs(hn - rho)))
    t, s = grid.nodes()
    ja, jw = surf.alpha.eval(t), surf.omega.eval(s)
    lam_a = rho ** 2 * np.abs(ja.pos) ** 2 - ja.kappa ** 2
    lam_w = jw.kappa ** 2 - rho ** 2 * np.abs(jw.pos) ** 2
    details = {
        "rho_est": rho,
        "lambda_est": float(np.mean(lam_a)),
        "lambda_from_omega": float(np.mean(lam_w)),
        "lambda_spread": float(max(np.ptp(lam_a), np.ptp(lam_w))),
    }
    return Check("cmc", res, threshold or max(default_threshold(surf), FD_TOL), details)


def check_self_similar(surf: StarSurface, sign: int = -1, grid: Optional[Grid] = None,
                       threshold: Optional[float] = None) -> Check:
    """max |H - sign * Phi^perp|; sign = -1 tests self-shrinkers, +1 self-expanders.

    Reports the necessary condition
    <omega, omega'><alpha, J alpha'> - <omega', J omega><alpha, alpha'> as well.
    """
    grid = grid or default_grid(surf)
    jet, mask = _grid_jet(surf, grid, with_position=True)
    perp = project_normal(jet.phi, jet)
    res = _masked_max(_cnorm(jet.H - sign * perp), mask)
    t, s = grid.nodes()
    ja, jw = surf.alpha.eval(t), surf.omega.eval(s)
    a_dot = np.real(np.conj(ja.pos) * ja.d1)
    a_j = np.imag(ja.pos * np.conj(ja.d1))
    w_dot = np.real(np.conj(jw.pos) * jw.d1)
    w_j = np.imag(jw.d1 * np.conj(jw.pos))
    necessary = np.abs(w_dot[None, :] * a_j[:, None] - w_j[None, :] * a_dot[:, None])
    name = "self_shrinker" if sign < 0 else "self_expander"
    return Check(name, res, threshold or default_threshold(surf),
                 {"sign": sign, "necessary_condition": float(np.max(necessary))})


def check_translating(surf: StarSurface, rho: float = 1.0, theta: float = 0.0, grid: Optional[Grid] = None,
                      threshold: Optional[float] = None) -> Check:
    """Translating soliton with vector e = (rho e^{i theta}, 0).

    Curvature level: |alpha'| kappa_alpha = rho Im(e^{-i theta} alpha' conj(alpha)) and
    |omega'| kappa_omega = -rho Im(e^{-i theta} omega' conj(omega)).
    Surface level: |H - e^perp| over the grid.
    """
    grid = grid or default_grid(surf)
    t, s = grid.nodes()
    ja, jw = surf.alpha.eval(t), surf.omega.eval(s)
    rot = np.exp(-1j * theta)
    ra = np.abs(ja.speed * ja.kappa - rho * np.imag(rot * ja.d1 * np.conj(ja.pos)))
    rw = np.abs(jw.speed * jw.kappa + rho * np.imag(rot * jw.d1 * np.conj(jw.pos)))
    curvature_level = float(max(ra.max(), rw.max()))
    jet, mask = _grid_jet(surf, grid)
    e = np.broadcast_to(np.array([rho * np.exp(1j * theta), 0.0], dtype=complex), jet.phi_t.shape)
    surface_level = _masked_max(_cnorm(jet.H - project_normal(e, jet)), mask)
    return Check("translating", max(curvature_level, surface_level), threshold or default_threshold(surf),
                 {"rho": rho, "theta": theta, "curvature_level": curvature_level, "surface_level": surface_level})


def _energy_ranges(surf, t_range, s_range):
    def pick(curve, rng):
        if rng is not None:
            return tuple(rng)
        if curve.period is not None:
            lo = curve.window[0]
            return (lo, lo + curve.period)
        return tuple(curve.window)
    return pick(surf.alpha, t_range), pick(surf.omega, s_range)


def willmore_energy(surf: StarSurface, t_range=None, s_range=None, panels: int = 48):
    """(factored, direct) Willmore energy over a parameter rectangle.

    factored = L(omega) int kappa_alpha^2 dsigma + L(alpha) int kappa_omega^2 dtau
    direct   = double integral of |H|^2 sqrt(E G) dt ds
    Closed curves default to one period; others to their windows.
    """
    tr, sr = _energy_ranges(surf, t_range, s_range)
    la = specfun.integrate(lambda x: surf.alpha.eval(x).speed, *tr)
    lw = specfun.integrate(lambda x: surf.omega.eval(x).speed, *sr)
    ka = specfun.integrate(lambda x: (lambda j: j.kappa ** 2 * j.speed)(surf.alpha.eval(x)), *tr)
    kw = specfun.integrate(lambda x: (lambda j: j.kappa ** 2 * j.speed)(surf.omega.eval(x)), *sr)
    factored = lw * ka + la * kw

    def gl_nodes(lo, hi):
        edges = np.linspace(lo, hi, panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        x = (mid[:, None] + half[:, None] * specfun._GL_X).ravel()
        w = (half[:, None] * specfun._GL_W).ravel()
        return x, w

    xt, wt = gl_nodes(*tr)
    xs, ws = gl_nodes(*sr)
    jet = surf.jet(xt[:, None], xs[None, :], with_position=False)
    integrand = jet.H_norm ** 2 * np.sqrt(jet.E * jet.G)
    direct = float(wt @ integrand @ ws)
    return float(factored), direct


def check_willmore(surf: StarSurface, grid: Optional[Grid] = None, threshold: float = 1e-8) -> Check:
    """Energy identity (relative difference of factored and direct forms).

    For elastica generators the Euler-Lagrange residual of each curve is
    folded into the residual as well.
    """
    factored, direct = willmore_energy(surf)
    rel = abs(factored - direct) / max(abs(direct), 1.0)
    details = {"factored": factored, "direct": direct, "relative_difference": rel}
    res = rel
    for label, curve in (("alpha", surf.alpha), ("omega", surf.omega)):
        if curve.kind == "elastica":
            lo, hi = curve.domain
            t = np.linspace(lo + 0.05, hi - 0.05, 201)
            el = float(np.max(elastica_residual(curve, t)))
            details[f"el_residual_{label}"] = el
            res = max(res, el * threshold / 1e-7)
    return Check("willmore", res, threshold, details)


def check_torus(surf: StarSurface, grid: Optional[Grid] = None, threshold: float = 1e-8) -> Check:
    """Double periodicity gap of the positions plus both closure integrals."""
    if surf.alpha.period is None or surf.omega.period is None:
        raise MissingPeriodError("torus check needs periodic generators")
    grid = grid or default_grid(surf, 41, 41)
    T, S = surf.alpha.period, surf.omega.period
    t, s = grid.nodes()
    tt, ss = t[:, None], s[None, :]
    base = surf.position(tt, ss)
    gap_t = float(np.max(_cnorm(surf.position(tt + T, ss) - base)))
    gap_s = float(np.max(_cnorm(surf.position(tt, ss + S) - base)))
    ia = closure_report(surf.alpha).closure_integral
    iw = closure_report(surf.omega).closure_integral
    res = max(gap_t, gap_s, abs(ia), abs(iw))
    return Check("torus", res, threshold,
                 {"gap_t": gap_t, "gap_s": gap_s, "closure_alpha": ia, "closure_omega": iw, "periods": [T, S]})


# ---------------------------------------------------------------------------
# finite-difference oracles
# ---------------------------------------------------------------------------


def _tangents(surf, t, s):
    jet = surf.jet(t, s, with_position=False)
    return jet.phi_t, jet.phi_s


def _fd_second(surf, t, s, h):
    pt_p, _ = _tangents(surf, t + h, s)
    pt_m, _ = _tangents(surf, t - h, s)
    _, ps_p = _tangents(surf, t, s + h)
    _, ps_m = _tangents(surf, t, s - h)
    phi_tt = (pt_p - pt_m) / (2 * h)
    phi_ss = (ps_p - ps_m) / (2 * h)
    pt_sp, _ = _tangents(surf, t, s + h)
    pt_sm, _ = _tangents(surf, t, s - h)
    phi_ts = (pt_sp - pt_sm) / (2 * h)
    return phi_tt, phi_ts, phi_ss


def fd_oracle_C(surf: StarSurface, t, s, h: float = FD_STEP):
    """(C_ttt, C_tts, C_tss, C_sss) from central differences of the tangent fields."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    phi_t, phi_s = _tangents(surf, t, s)
    phi_tt, _, phi_ss = _fd_second(surf, t, s, h)
    return (
        np.imag(herm(phi_tt, phi_t)),
        np.imag(herm(phi_tt, phi_s)),
        np.imag(herm(phi_ss, phi_t)),
        np.imag(herm(phi_ss, phi_s)),
    )


def _metric(phi_t, phi_s):
    E = np.real(herm(phi_t, phi_t))
    F = np.real(herm(phi_t, phi_s))
    G = np.real(herm(phi_s, phi_s))
    det = E * G - F * F
    return E, F, G, det


def fd_oracle_H(surf: StarSurface, t, s, h: float = FD_STEP):
    """Mean curvature vector as the metric trace of the FD second fundamental form.

    Works in R^4: the normal part of each second derivative is obtained by
    subtracting its projection onto the tangent plane, with no use of J.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    phi_t, phi_s = _tangents(surf, t, s)
    phi_tt, phi_ts, phi_ss = _fd_second(surf, t, s, h)
    Xt, Xs = to_r4(phi_t), to_r4(phi_s)
    E, F, G, det = _metric(phi_t, phi_s)
    gtt, gts, gss = G / det, -F / det, E / det

    def normal(v):
        v = to_r4(v)
        a = np.sum(v * Xt, axis=-1)
        b = np.sum(v * Xs, axis=-1)
        ct = gtt * a + gts * b
        cs = gts * a + gss * b
        return v - ct[..., None] * Xt - cs[..., None] * Xs

    Hr = gtt[..., None] * normal(phi_tt) + 2 * gts[..., None] * normal(phi_ts) + gss[..., None] * normal(phi_ss)
    return c2(Hr[..., 0] + 1j * Hr[..., 1], Hr[..., 2] + 1j * Hr[..., 3])


def _beta_increment(surf, t, s, tc, sc):
    """beta(t, s) - beta(tc, sc), unwrapped locally."""
    return np.angle(surf.lagrangian_angle_phase(t, s) / surf.lagrangian_angle_phase(tc, sc))


def fd_oracle_grad_beta(surf: StarSurface, t, s, h: float = FD_STEP):
    """J grad(beta) with beta_t, beta_s from central differences of the unwrapped angle."""
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    bt = (_beta_increment(surf, t + h, s, t, s) - _beta_increment(surf, t - h, s, t, s)) / (2 * h)
    bs = (_beta_increment(surf, t, s + h, t, s) - _beta_increment(surf, t, s - h, t, s)) / (2 * h)
    phi_t, phi_s = _tangents(surf, t, s)
    E, F, G, det = _metric(phi_t, phi_s)
    ct = (G * bt - F * bs) / det
    cs = (-F * bt + E * bs) / det
    return 1j * (ct[..., None] * phi_t + cs[..., None] * phi_s)


def fd_oracle_laplace_beta(surf: StarSurface, t, s, h: float = FD_STEP):
    """Laplace-Beltrami of beta for the orthogonal metric E dt^2 + G ds^2.

    Delta beta = (EG)^{-1/2} [ d_t(sqrt(G/E) beta_t) + d_s(sqrt(E/G) beta_s) ],
    which is e^{-2u} (beta_tt + beta_ss) for unit-speed generators.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)

    def weight(tt, ss):
        jet = surf.jet(tt, ss, with_position=False)
        return np.sqrt(jet.G / jet.E), np.sqrt(jet.E * jet.G)

    w_tp, _ = weight(t + h / 2, s)
    w_tm, _ = weight(t - h / 2, s)
    wp_s, _ = weight(t, s + h / 2)
    wm_s, _ = weight(t, s - h / 2)
    _, area = weight(t, s)
    d_tp = _beta_increment(surf, t + h, s, t, s)
    d_tm = _beta_increment(surf, t - h, s, t, s)
    d_sp = _beta_increment(surf, t, s + h, t, s)
    d_sm = _beta_increment(surf, t, s - h, t, s)
    flux_t = (w_tp * d_tp + w_tm * d_tm) / (h * h)
    flux_s = (d_sp / wp_s + d_sm / wm_s) / (h * h)
    return (flux_t + flux_s) / area


def oracle_points(surf: StarSurface, grid: Optional[Grid] = None, n: int = 7, min_conf: float = 1e-2):
    """Interior sample points for the oracles, away from branch points."""
    grid = grid or default_grid(surf)
    frac = (np.arange(n) + 0.37) / n
    t = grid.t_range[0] + frac * (grid.t_range[1] - grid.t_range[0])
    s = grid.s_range[0] + frac * (grid.s_range[1] - grid.s_range[0])
    tt, ss = np.meshgrid(t, s, indexing="ij")
    tt, ss = tt.ravel(), ss.ravel()
    conf = np.abs(surf.alpha.eval(tt).pos) ** 2 + np.abs(surf.omega.eval(ss).pos) ** 2
    keep = conf > min_conf
    return tt[keep], ss[keep]


def relative_error(approx, exact, floor: float = 1e-3) -> float:
    """Normwise relative error over a sample set (denominator floored)."""
    approx = np.asarray(approx)
    exact = np.asarray(exact)
    num = np.max(np.abs(approx - exact))
    return float(num / max(float(np.max(np.abs(exact))), floor))


def oracle_errors(surf: StarSurface, t, s, h: float = FD_STEP) -> dict:
    """Relative disagreement of closed-form C, H and J grad(beta) with the FD oracles."""
    jet = surf.jet(t, s, with_position=False)
    c_exact = np.stack([jet.C_ttt, jet.C_tts, jet.C_tss, jet.C_sss], axis=-1)
    c_fd = np.stack(fd_oracle_C(surf, t, s, h), axis=-1)
    return {
        "C": relative_error(c_fd, c_exact),
        "H": relative_error(fd_oracle_H(surf, t, s, h), jet.H),
        "grad_beta": relative_error(fd_oracle_grad_beta(surf, t, s, h), jet.H),
    }


def convergence_ratios(surf: StarSurface, t, s, h: float = 1e-2) -> dict:
    """Error ratio err(h) / err(h/2) per oracle; about 4 for second-order stencils.

    None where the stencil is exact at step h (error below 1e-12).
    """
    coarse = oracle_errors(surf, t, s, h)
    fine = oracle_errors(surf, t, s, h / 2)
    return {k: (coarse[k] / fine[k] if coarse[k] > 1e-12 else None) for k in coarse}


def verify(surf: StarSurface, grid: Optional[Grid] = None, h: float = FD_STEP, threshold: float = FD_TOL) -> ClassReport:
    """FD oracle suite packaged as a report (used by the ``verify`` command)."""
    t, s = oracle_points(surf, grid)
    errs = oracle_errors(surf, t, s, h)
    checks = [Check(f"oracle_{k}", v, threshold, {"h": h, "points": int(t.size)}) for k, v in errs.items()]
    lap = fd_oracle_laplace_beta(surf, t, s, h)
    # the five-point Laplacian carries round-off of order eps / h^2, hence the unit floor
    checks.append(Check("oracle_laplace_beta", relative_error(lap, laplace_beta_exact(surf, t, s), floor=1.0),
                        threshold, {"h": h}))
    return ClassReport(checks, grid, {"h": h})


def laplace_beta_exact(surf: StarSurface, t, s):
    """Closed-form Delta beta = (|a'||w'| conf)^{-1} [ |w'| d_t(kappa_a) + |a'| d_s(kappa_w) ]."""
    ja = surf.alpha.eval(np.asarray(t, dtype=float))
    jw = surf.omega.eval(np.asarray(s, dtype=float))
    conf = np.abs(ja.pos) ** 2 + np.abs(jw.pos) ** 2
    return (ja.dkappa_ds + jw.dkappa_ds) / conf


# ---------------------------------------------------------------------------
# aggregation
# ---------------------------------------------------------------------------


def run_check(surf: StarSurface, family: str, grid: Optional[Grid] = None, tol: Optional[float] = None, **kw) -> Check:
    if family == "lagrangian":
        return check_lagrangian(surf, grid, tol)
    if family == "special":
        return check_special(surf, grid, tol)
    if family == "holomorphic":
        if surf.alpha.kind != "line" or surf.omega.kind != "line":
            raise DomainError("holomorphic correspondence needs two lines")
        return holomorphic_correspondence(surf.alpha.params["a"], surf.omega.params["a"], threshold=tol or 1e-9)
    if family == "pmc":
        return check_pmc(surf, grid, tol)
    if family == "hsl":
        return check_hsl(surf, grid, tol)
    if family == "cmc":
        return check_cmc(surf, grid, tol)
    if family == "self_shrinker":
        return check_self_similar(surf, -1, grid, tol)
    if family == "self_expander":
        return check_self_similar(surf, +1, grid, tol)
    if family == "translating":
        return check_translating(surf, kw.get("rho", 1.0), kw.get("theta", 0.0), grid, tol)
    if family == "willmore":
        return check_willmore(surf, grid, tol or 1e-8)
    if family == "torus":
        return check_torus(surf, None, tol or 1e-8)
    raise DomainError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")


def classify(surf: StarSurface, families: Sequence = FAMILIES[:1], grid: Optional[Grid] = None,
             tol: Optional[float] = None, parameters: Optional[dict] = None) -> ClassReport:
    """Run the requested family checks.  Entries are names or dicts with a ``name`` key."""
    grid = grid or default_grid(surf)
    checks = []
    for fam in families:
        if isinstance(fam, dict):
            fam = dict(fam)
            name = fam.pop("name")
            checks.append(run_check(surf, name, grid, tol, **fam))
        else:
            checks.append(run_check(surf, fam, grid, tol))
    return ClassReport(checks, grid, parameters or {})
