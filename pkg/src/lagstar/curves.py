"""Planar curves with a uniform jet interface.

A curve is a complex-valued function of one real parameter.  Every curve,
closed form or ODE backed, answers ``eval(t)`` with position and the first
three parameter derivatives; curvature and its derivative are derived from
those.  Signed curvature follows J = +pi/2 rotation:
``kappa = Im(conj(d1) d2) / |d1|^3``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import fresnel

from lagstar import specfun
from lagstar.errors import DomainError, IntegrationError, MissingPeriodError
from lagstar.geomcore import bracket_j

ODE_RTOL = 1e-12
ODE_ATOL = 1e-12
_FD_KAPPA_STEP = 1e-5


@dataclass(frozen=True)
class CurveJet:
    pos: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    @property
    def speed(self):
        return np.abs(self.d1)

    @property
    def kappa(self):
        return np.imag(np.conj(self.d1) * self.d2) / self.speed ** 3

    @property
    def dkappa(self):
        """d(kappa)/dt in the curve's own parameter."""
        v = self.speed
        cross = np.imag(np.conj(self.d1) * self.d2)
        dot = np.real(np.conj(self.d1) * self.d2)
        return np.imag(np.conj(self.d1) * self.d3) / v ** 3 - 3.0 * cross * dot / v ** 5

    @property
    def dkappa_ds(self):
        """Derivative of curvature with respect to arclength."""
        return self.dkappa / self.speed

    @property
    def angular(self):
        """<d1, J pos>, the integrand of the first-slot prefix integral."""
        return bracket_j(self.d1, self.pos)


@dataclass(frozen=True, eq=False)
class PlanarCurve:
    """A regular parametrised planar curve.

    ``jets`` maps a float array of parameters to ``(pos, d1, d2, d3)``.
    ``window`` is the default parameter interval for sampling and for the
    prefix tables of a surface; ``domain`` is where evaluation is legal.
    """

    kind: str
    params: dict
    jets: Callable
    domain: tuple = (-math.inf, math.inf)
    window: tuple = (-1.0, 1.0)
    period: Optional[float] = None
    base: float = 0.0
    ode: bool = False
    origin_crossing: bool = False
    extras: dict = field(default_factory=dict)

    def _check_domain(self, t):
        lo, hi = self.domain
        if np.any(t < lo - 1e-12) or np.any(t > hi + 1e-12):
            raise DomainError(f"{self.kind} curve evaluated outside [{lo}, {hi}]")

    def eval(self, t) -> CurveJet:
        t = np.asarray(t, dtype=float)
        self._check_domain(t)
        pos, d1, d2, d3 = self.jets(t)
        shape = t.shape
        return CurveJet(*(np.broadcast_to(np.asarray(x, dtype=complex), shape) for x in (pos, d1, d2, d3)))

    def __call__(self, t):
        return self.eval(t).pos

    def min_speed(self, n: int = 2001) -> float:
        t = np.linspace(*self.window, n)
        return float(np.min(self.eval(t).speed))

    def is_regular(self, margin: float = 1e-8) -> bool:
        return self.min_speed() > margin

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "params": dict(self.params),
            "domain": list(self.domain),
            "window": list(self.window),
            "period": self.period,
            "origin_crossing": self.origin_crossing,
        }


def _passes_origin(jets, window, n=4001) -> bool:
    t = np.linspace(*window, n)
    pos = jets(t)[0]
    return bool(np.min(np.abs(pos)) < 1e-6)


# ---------------------------------------------------------------------------
# closed-form catalog
# ---------------------------------------------------------------------------


def line(a: float = 0.0, window=(-1.0, 1.0)) -> PlanarCurve:
    """Horizontal line t + i a, unit speed."""

    def jets(t):
        zero = np.zeros_like(t, dtype=complex)
        return t + 1j * a, np.ones_like(zero), zero, zero

    return PlanarCurve("line", {"a": a}, jets, window=tuple(window), origin_crossing=(a == 0.0))


def circle(radius: float = 1.0, center: complex = 0.0, rate: float = 1.0, phase: float = 0.0) -> PlanarCurve:
    """center + radius * exp(i (rate t + phase)); unit speed when rate = 1/radius."""
    if radius <= 0 or rate == 0:
        raise DomainError("circle needs radius > 0 and rate != 0")
    center = complex(center)

    def jets(t):
        e = radius * np.exp(1j * (rate * t + phase))
        return center + e, 1j * rate * e, -(rate ** 2) * e, -1j * rate ** 3 * e

    period = 2.0 * math.pi / abs(rate)
    return PlanarCurve(
        "circle",
        {"radius": radius, "center_re": center.real, "center_im": center.imag, "rate": rate, "phase": phase},
        jets,
        window=(0.0, period),
        period=period,
        origin_crossing=abs(abs(center) - radius) < 1e-12,
    )


def cornu(a: float = 1.0, window=(-2.0, 2.0)) -> PlanarCurve:
    """Unit-speed Euler spiral through the origin with curvature a t."""
    if a == 0:
        return line(0.0, window)
    scale = math.sqrt(math.pi / abs(a))
    sign = 1.0 if a > 0 else -1.0

    def jets(t):
        ss, cc = fresnel(t / scale)
        pos = scale * (cc + 1j * sign * ss)
        d1 = np.exp(0.5j * a * t * t)
        return pos, d1, 1j * a * t * d1, (1j * a - (a * t) ** 2) * d1

    return PlanarCurve("cornu", {"a": a}, jets, window=tuple(window), origin_crossing=True)


def gerono() -> PlanarCurve:
    """(1 + 2 cos t, 2 cos t sin t), a shifted Gerono figure eight."""

    def jets(t):
        c, s = np.cos(t), np.sin(t)
        c2, s2 = np.cos(2 * t), np.sin(2 * t)
        return (1 + 2 * c + 1j * s2, -2 * s + 2j * c2, -2 * c - 4j * s2, 2 * s - 8j * c2)

    return PlanarCurve("gerono", {}, jets, window=(0.0, 2 * math.pi), period=2 * math.pi)


def lissajous() -> PlanarCurve:
    """(sin s, sin 2s)."""

    def jets(t):
        c, s = np.cos(t), np.sin(t)
        c2, s2 = np.cos(2 * t), np.sin(2 * t)
        return (s + 1j * s2, c + 2j * c2, -s - 4j * s2, -c - 8j * c2)

    return PlanarCurve("lissajous", {}, jets, window=(0.0, 2 * math.pi), period=2 * math.pi, origin_crossing=True)


def lemniscate() -> PlanarCurve:
    """Unit-speed Bernoulli lemniscate r(t) exp(i theta(t)) with r = sn(t, i).

    theta is the antiderivative of r, so the curvature is 3 r and
    kappa^2 = 9 |alpha|^2.
    """

    def jets(t):
        r, dr, _ = specfun.sn_imag_unit_derivs(t)
        e = np.exp(1j * specfun.lemniscate_angle(t))
        r2 = r * r
        return (
            r * e,
            (dr + 1j * r2) * e,
            (-3.0 * r2 * r + 3j * r * dr) * e,
            (-12.0 * r2 * dr + 3j * (dr * dr - 3.0 * r2 * r2)) * e,
        )

    period = specfun.lemniscate_period()
    return PlanarCurve("lemniscate", {}, jets, window=(0.0, period), period=period, origin_crossing=True)


# ---------------------------------------------------------------------------
# ODE-backed curves
# ---------------------------------------------------------------------------


class _TwoSidedSolution:
    """Dense ODE solution on [lo, hi] integrated outward from t0."""

    def __init__(self, rhs, y0, t0, span, max_step, stop=None):
        lo, hi = span
        if not lo <= t0 <= hi:
            raise DomainError(f"base parameter {t0} outside span {span}")
        self.t0 = t0
        self.y0 = np.asarray(y0, dtype=float)
        self.fwd = self._solve(rhs, t0, hi, max_step, stop) if hi > t0 else None
        self.bwd = self._solve(rhs, t0, lo, max_step, stop) if lo < t0 else None

    def _solve(self, rhs, t0, t1, max_step, stop):
        """``stop`` is an optional (event, describe) pair; the event ends the solve as an error."""
        events = None
        if stop is not None:
            event = stop[0]
            event.terminal = True
            events = [event]
        res = solve_ivp(
            rhs, (t0, t1), self.y0, method="DOP853", rtol=ODE_RTOL, atol=ODE_ATOL,
            dense_output=True, max_step=max_step, events=events,
        )
        if res.status == 1:
            te = float(res.t_events[0][0])
            raise IntegrationError(f"{stop[1](te, res.y_events[0][0])} at t = {te:.12g}")
        if res.status != 0:
            raise IntegrationError(f"integration from {t0} to {t1} failed: {res.message}")
        return res.sol

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        out = np.empty((self.y0.size, flat.size))
        out[:] = self.y0[:, None]
        if self.fwd is not None:
            sel = flat > self.t0
            if np.any(sel):
                out[:, sel] = self.fwd(flat[sel])
        if self.bwd is not None:
            sel = flat < self.t0
            if np.any(sel):
                out[:, sel] = self.bwd(flat[sel])
        return out.reshape((self.y0.size,) + t.shape)


def _frenet_curve(kind, params, sol, span, kappa_of, dkappa_of=None, extras=None) -> PlanarCurve:
    """Wrap a state solution (x, y, phi, ...) as a unit-speed curve."""
    lo, hi = span

    def kappa_prime_fd(t):
        h = _FD_KAPPA_STEP
        tp = np.minimum(t + h, hi)
        tm = np.maximum(t - h, lo)
        return (kappa_of(tp, sol(tp)) - kappa_of(tm, sol(tm))) / (tp - tm)

    def jets(t):
        y = sol(t)
        pos = y[0] + 1j * y[1]
        d1 = np.exp(1j * y[2])
        k = kappa_of(t, y)
        dk = dkappa_of(t, y) if dkappa_of is not None else kappa_prime_fd(t)
        return pos, d1, 1j * k * d1, (1j * dk - k * k) * d1

    curve_extras = {"state": sol, "kappa_of": kappa_of}
    if extras:
        curve_extras.update(extras)
    return PlanarCurve(
        kind, params, jets, domain=(lo, hi), window=(lo, hi), base=sol.t0, ode=True,
        origin_crossing=_passes_origin(jets, span), extras=curve_extras,
    )


def curve_from_curvature(
    kappa: Callable,
    t0: float = 0.0,
    theta0: float = 0.0,
    p0: complex = 0.0,
    span=(-1.0, 1.0),
    step: float = 0.05,
    dkappa: Optional[Callable] = None,
) -> PlanarCurve:
    """Unit-speed curve with prescribed curvature: theta' = kappa(t), alpha' = exp(i theta).

    ``step`` bounds the integrator step.  ``kappa`` must accept arrays.
    """
    if step <= 0:
        raise DomainError("step must be positive")
    p0 = complex(p0)

    def rhs(t, y):
        return [math.cos(y[2]), math.sin(y[2]), float(kappa(t))]

    sol = _TwoSidedSolution(rhs, [p0.real, p0.imag, theta0], t0, span, step)
    kfun = lambda t, y: np.asarray(kappa(t), dtype=float) * np.ones_like(t)
    dkfun = None if dkappa is None else (lambda t, y: np.asarray(dkappa(t), dtype=float) * np.ones_like(t))
    return _frenet_curve(
        "curvature", {"t0": t0, "theta0": theta0, "p0_re": p0.real, "p0_im": p0.imag}, sol, span, kfun, dkfun
    )


def translating_curve(
    rho: float = 1.0,
    theta: float = 0.0,
    sign: int = 1,
    p0: complex = 1.0,
    theta0: float = math.pi / 2,
    span=(-2.0, 2.0),
    t0: float = 0.0,
    step: float = 0.05,
) -> PlanarCurve:
    """Unit-speed curve with kappa = sign * rho * Im(exp(-i theta) alpha' conj(alpha)).

    sign = +1 gives the first generator of a translating soliton with
    translating vector (rho e^{i theta}, 0); sign = -1 the second.
    """
    rot = np.exp(-1j * theta)
    p0 = complex(p0)

    def kappa_of(t, y):
        z = y[0] + 1j * y[1]
        return sign * rho * np.imag(rot * np.exp(1j * y[2]) * np.conj(z))

    def dkappa_of(t, y):
        z = y[0] + 1j * y[1]
        d1 = np.exp(1j * y[2])
        k = kappa_of(t, y)
        return sign * rho * np.imag(rot * (1j * k * d1 * np.conj(z) + 1.0))

    def rhs(t, y):
        return [math.cos(y[2]), math.sin(y[2]), float(kappa_of(t, y))]

    sol = _TwoSidedSolution(rhs, [p0.real, p0.imag, theta0], t0, span, step)
    params = {"rho": rho, "theta": theta, "sign": sign, "p0_re": p0.real, "p0_im": p0.imag, "theta0": theta0}
    return _frenet_curve("translating", params, sol, span, kappa_of, dkappa_of)


def cmc_radial_curve(
    rho: float,
    lam: float,
    mu: float,
    r_init: float,
    span=(0.0, 1.0),
    outward: bool = True,
    step: float = 0.05,
) -> PlanarCurve:
    """Unit-speed curve with kappa^2 = rho^2 |alpha|^2 - lam and first-integral constant mu.

    Starts at alpha(0) = r_init on the positive real axis with curvature
    +sqrt(rho^2 r_init^2 - lam).  The curvature is carried through the
    conserved quantity 3 <alpha', J alpha> = kappa^3 / rho^2 + mu, which keeps
    kappa smooth where it changes sign (origin crossings, radial turning
    points).  The conjugate curve realises the negative branch.
    """
    if rho <= 0 or r_init <= 0:
        raise DomainError("need rho > 0 and r_init > 0")
    k2 = rho * rho * r_init * r_init - lam
    if k2 < 0:
        raise DomainError("rho^2 r_init^2 - lam must be non-negative")
    k0 = math.sqrt(k2)
    ang0 = (k0 ** 3 / rho ** 2 + mu) / 3.0
    if abs(ang0) > r_init:
        raise DomainError("initial data violates 1 - r'^2 >= 0")
    phi0 = math.asin(ang0 / r_init)
    if not outward:
        phi0 = math.pi - phi0

    def kappa_of(t, y):
        z = y[0] + 1j * y[1]
        ang = np.imag(np.exp(1j * y[2]) * np.conj(z))
        return np.cbrt(rho * rho * (3.0 * ang - mu))

    def rhs(t, y):
        return [math.cos(y[2]), math.sin(y[2]), float(kappa_of(t, y))]

    # With lam > 0 the curvature vanishes at r = sqrt(lam)/rho > 0, where
    # kappa^2 = rho^2 r^2 - lam has a square-root branch point and the
    # continuation is not unique.  (For lam <= 0 kappa only vanishes at the
    # origin, which the signed first integral passes smoothly.)
    stop = None
    if lam > 0:
        def kappa_zero(t, y):
            z = y[0] + 1j * y[1]
            return 3.0 * np.imag(np.exp(1j * y[2]) * np.conj(z)) - mu

        describe = lambda t, y: f"curvature vanishes at the turning radius r = {abs(complex(y[0], y[1])):.12g}"
        stop = (kappa_zero, describe)

    lo, hi = span
    t0 = min(max(0.0, lo), hi)
    sol = _TwoSidedSolution(rhs, [r_init, 0.0, phi0], t0, span, step, stop)
    params = {"rho": rho, "lam": lam, "mu": mu, "r_init": r_init, "outward": outward}
    return _frenet_curve("cmc_radial", params, sol, span, kappa_of)


def cmc_first_integral_drift(curve: PlanarCurve, t) -> np.ndarray:
    """|(rho^2 r^2 - lam)^{3/2}/rho^2 + mu - 3 r sqrt(1 - r'^2)| in signed form.

    Uses the signed curvature so the quantity stays meaningful after the
    curvature changes sign: kappa^3 / rho^2 + mu - 3 <alpha', J alpha>.
    """
    p = curve.params
    jet = curve.eval(t)
    return np.abs(jet.kappa ** 3 / p["rho"] ** 2 + p["mu"] - 3.0 * jet.angular)


def elastica_curve(
    lambda_len: float = 0.0,
    kappa0: float = 1.0,
    kappa0_prime: float = 0.0,
    span=(-3.0, 3.0),
    p0: complex = 1.0,
    theta0: float = math.pi / 2,
    t0: float = 0.0,
    step: float = 0.05,
) -> PlanarCurve:
    """Unit-speed elastica: curvature solves 2 kappa'' + kappa^3 - lambda_len kappa = 0."""
    p0 = complex(p0)

    def rhs(t, y):
        k = y[3]
        return [math.cos(y[2]), math.sin(y[2]), k, y[4], 0.5 * (lambda_len * k - k ** 3)]

    sol = _TwoSidedSolution(rhs, [p0.real, p0.imag, theta0, kappa0, kappa0_prime], t0, span, step)
    params = {
        "lambda_len": lambda_len, "kappa0": kappa0, "kappa0_prime": kappa0_prime,
        "p0_re": p0.real, "p0_im": p0.imag, "theta0": theta0, "t0": t0,
    }
    return _frenet_curve("elastica", params, sol, span, lambda t, y: y[3], lambda t, y: y[4])


def elastica_energy_level(curve: PlanarCurve, t) -> np.ndarray:
    """kappa'^2 + kappa^4/4 - lambda kappa^2/2, constant along an elastica."""
    lam = curve.params["lambda_len"]
    y = curve.extras["state"](np.asarray(t, dtype=float))
    k, dk = y[3], y[4]
    return dk * dk + k ** 4 / 4.0 - lam * k * k / 2.0


def elastica_residual(curve: PlanarCurve, t, h: float = 1e-2) -> np.ndarray:
    """|2 kappa'' + kappa^3 - lambda kappa| with kappa'' from a five-point stencil.

    kappa is read from the jets, so this checks the stored curve rather
    than the right-hand side it was integrated with.
    """
    lam = curve.params["lambda_len"]
    t = np.asarray(t, dtype=float)
    k = lambda x: curve.eval(x).kappa
    d2 = (-k(t + 2 * h) + 16 * k(t + h) - 30 * k(t) + 16 * k(t - h) - k(t - 2 * h)) / (12 * h * h)
    kt = k(t)
    return np.abs(2.0 * d2 + kt ** 3 - lam * kt)


# ---------------------------------------------------------------------------
# derived operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ClosureReport:
    period: float
    closure_integral: float
    position_gap: float


def closure_report(curve: PlanarCurve, n_samples: int = 257) -> ClosureReport:
    """Period, the integral of <alpha', J alpha> over one period, and the position gap."""
    if curve.period is None:
        raise MissingPeriodError(f"{curve.kind} curve has no declared period")
    T = curve.period
    a = curve.window[0]
    integral = specfun.integrate(lambda x: curve.eval(x).angular, a, a + T, tol=1e-13)
    t = np.linspace(a, a + T, n_samples)
    gap = float(np.max(np.abs(curve(t + T) - curve(t))))
    return ClosureReport(period=T, closure_integral=integral, position_gap=gap)


def arclength(curve: PlanarCurve, t_start: float, t_end: float) -> float:
    if t_end == t_start:
        return 0.0
    lo, hi = sorted((t_start, t_end))
    length = specfun.integrate(lambda x: curve.eval(x).speed, lo, hi, tol=1e-13)
    return length if t_end > t_start else -length


def reparametrize_by_arclength(curve: PlanarCurve, t_base: Optional[float] = None, window=None) -> PlanarCurve:
    """Unit-speed reparametrisation sigma -> alpha(t(sigma)), sigma(t_base) = 0.

    t(sigma) inverts the cumulative speed table by Newton iteration seeded
    from linear interpolation of the table nodes.
    """
    lo, hi = window if window is not None else curve.window
    t_base = lo if t_base is None else t_base
    table = specfun.adaptive_cumulative_integral(lambda x: curve.eval(x).speed, lo, hi, tol=1e-12)
    offset = table(t_base)

    def t_of(sigma):
        target = np.asarray(sigma, dtype=float) + offset
        if np.any(target < -1e-10) or np.any(target > table.total + 1e-10):
            raise DomainError("arclength outside the reparametrised window")
        t = np.interp(target, table.prefix, table.nodes)
        for _ in range(30):
            step = (table(np.clip(t, lo, hi)) - target) / curve.eval(np.clip(t, lo, hi)).speed
            t = t - step
            if np.all(np.abs(step) < 1e-14 * max(1.0, abs(hi))):
                break
        return np.clip(t, lo, hi)

    def jets(sigma):
        jet = curve.eval(t_of(sigma))
        tangent = jet.d1 / jet.speed
        k = jet.kappa
        dk = jet.dkappa_ds
        return jet.pos, tangent, 1j * k * tangent, (1j * dk - k * k) * tangent

    s_lo, s_hi = -offset, table.total - offset
    period = None
    if curve.period is not None and abs((hi - lo) - curve.period) < 1e-12:
        period = table.total
    return PlanarCurve(
        f"arclength:{curve.kind}", dict(curve.params), jets, domain=(s_lo, s_hi), window=(s_lo, s_hi),
        period=period, ode=curve.ode, origin_crossing=curve.origin_crossing,
        extras={"parent": curve, "t_of": t_of},
    )
