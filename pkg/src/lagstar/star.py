"""The alpha * omega construction and its pointwise geometry.

Positions use the gauge

    Phi(t, s) = ( (|omega|^2 - |alpha|^2)/2 + i (B(s) - A(t)),  alpha(t) omega(s) )

with A(t) = int_{t0}^t <alpha', J alpha> and B(s) = int_{s0}^s <omega', J omega>,
so A and B vanish at the base point.  Changing the base point translates the
surface by a constant vector.

All evaluators broadcast: pass ``t[:, None]`` and ``s[None, :]`` for a tensor
grid, and the prefix integrals are then computed once per distinct parameter.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from lagstar import specfun
from lagstar.curves import CurveJet, PlanarCurve
from lagstar.errors import DomainError, SingularPointError
from lagstar.geomcore import c2, herm

SINGULAR_TOL = 1e-12
# Global sign of the cubic form C(a, b, c) := Im herm(Phi_ab, Phi_c).  The
# closed forms in SurfaceJet match this definition with sign +1.
C_SIGN = 1.0
PREFIX_TOL = 1e-11


class PrefixIntegral:
    """int_{base}^x <c', J c> for one generating curve.

    Aperiodic curves get a table over their window padded by 10 %.  Periodic
    curves get a table over three periods centred on [base, base + T]; beyond
    it the value continues by whole multiples of the measured closure
    integral.
    """

    def __init__(self, curve: PlanarCurve, base: float, window: Optional[tuple] = None):
        self.curve = curve
        self.base = float(base)
        f = lambda x: curve.eval(x).angular
        if curve.period is not None:
            T = curve.period
            lo, hi = self.base - T, self.base + 2 * T
            self.period = T
        else:
            lo, hi = window if window is not None else curve.window
            lo, hi = min(lo, self.base), max(hi, self.base)
            pad = 0.1 * (hi - lo)
            dlo, dhi = curve.domain
            lo, hi = max(lo - pad, dlo), min(hi + pad, dhi)
            self.period = None
        self.table = specfun.adaptive_cumulative_integral(f, lo, hi, tol=PREFIX_TOL)
        self.offset = self.table(self.base)
        if self.period is not None:
            self.closure = self.table(self.base + self.period) - self.offset

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.period is None:
            return self.table(x) - self.offset
        T = self.period
        k = np.floor((x - (self.base - T)) / (3 * T))
        k = np.where((x >= self.base - T) & (x <= self.base + 2 * T), 0.0, k)
        shift = 3 * T * k
        return self.table(x - shift) - self.offset + 3 * k * self.closure


@dataclass(frozen=True)
class SurfaceJet:
    """Pointwise geometry of alpha * omega.  C^2 vectors have a trailing axis of 2."""

    phi: Optional[np.ndarray]
    phi_t: np.ndarray
    phi_s: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    conf: np.ndarray
    C_ttt: np.ndarray
    C_tts: np.ndarray
    C_tss: np.ndarray
    C_sss: np.ndarray
    beta: np.ndarray
    H: np.ndarray
    singular: np.ndarray
    alpha: CurveJet
    omega: CurveJet

    @property
    def kappa_alpha(self):
        return self.alpha.kappa

    @property
    def kappa_omega(self):
        return self.omega.kappa

    @property
    def H_norm(self):
        return np.sqrt(np.real(herm(self.H, self.H)))

    def second_derivatives(self):
        """(Phi_tt, Phi_ts, Phi_ss) from the analytic second derivatives of the curves."""
        a, w = self.alpha, self.omega
        phi_tt = c2(-a.d2 * np.conj(a.pos) - np.abs(a.d1) ** 2, a.d2 * w.pos)
        phi_ts = c2(np.zeros_like(a.pos * w.pos), a.d1 * w.d1)
        phi_ss = c2(w.d2 * np.conj(w.pos) + np.abs(w.d1) ** 2, a.pos * w.d2)
        return phi_tt, phi_ts, phi_ss


@dataclass(frozen=True, eq=False)
class StarSurface:
    alpha: PlanarCurve
    omega: PlanarCurve
    t0: float
    s0: float
    A: PrefixIntegral
    B: PrefixIntegral

    # -- positions ---------------------------------------------------------

    def position(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        a = self.alpha.eval(t).pos
        w = self.omega.eval(s).pos
        z1 = 0.5 * (np.abs(w) ** 2 - np.abs(a) ** 2) + 1j * (self.B(s) - self.A(t))
        return c2(z1, a * w)

    def singular_mask(self, t, s):
        a = np.abs(self.alpha.eval(np.asarray(t, dtype=float)).pos)
        w = np.abs(self.omega.eval(np.asarray(s, dtype=float)).pos)
        return (a < SINGULAR_TOL) & (w < SINGULAR_TOL)

    # -- first and second order geometry -------------------------------------

    def jet(self, t, s, with_position: bool = True, allow_singular: bool = False) -> SurfaceJet:
        """Full pointwise geometry from the closed forms.

        Raises SingularPointError at a branch point unless ``allow_singular``,
        in which case singular entries are NaN.
        """
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        ja = self.alpha.eval(t)
        jw = self.omega.eval(s)
        a, da = ja.pos, ja.d1
        w, dw = jw.pos, jw.d1
        a, da, w, dw = np.broadcast_arrays(a, da, w, dw)
        singular = (np.abs(a) < SINGULAR_TOL) & (np.abs(w) < SINGULAR_TOL)
        if np.any(singular) and not allow_singular:
            raise SingularPointError("alpha(t) = 0 = omega(s) at a requested point")

        va = np.abs(da)
        vw = np.abs(dw)
        conf = np.abs(a) ** 2 + np.abs(w) ** 2
        ka = np.broadcast_to(ja.kappa, conf.shape)
        kw = np.broadcast_to(jw.kappa, conf.shape)
        ang_a = np.broadcast_to(ja.angular, conf.shape)
        ang_w = np.broadcast_to(jw.angular, conf.shape)

        phi_t = c2(-da * np.conj(a), da * w)
        phi_s = c2(dw * np.conj(w), a * dw)
        E = va ** 2 * conf
        G = vw ** 2 * conf
        F = np.zeros_like(E)

        C_ttt = C_SIGN * va ** 2 * (conf * va * ka - ang_a)
        C_tts = C_SIGN * va ** 2 * ang_w
        C_tss = C_SIGN * vw ** 2 * ang_a
        C_sss = C_SIGN * vw ** 2 * (conf * vw * kw - ang_w)

        beta = np.mod(np.angle(da) + np.angle(dw) + math.pi, 2 * math.pi)
        with np.errstate(divide="ignore", invalid="ignore"):
            H = 1j * ((ka / (va * conf))[..., None] * phi_t + (kw / (vw * conf))[..., None] * phi_s)
        if np.any(singular):
            H = np.where(singular[..., None], np.nan, H)

        phi = self.position(t, s) if with_position else None
        if phi is not None:
            phi = np.broadcast_to(phi, phi_t.shape)
        return SurfaceJet(
            phi=phi, phi_t=phi_t, phi_s=phi_s, E=E, F=F, G=G, conf=conf,
            C_ttt=C_ttt, C_tts=C_tts, C_tss=C_tss, C_sss=C_sss, beta=beta, H=H,
            singular=singular, alpha=ja, omega=jw,
        )

    def mean_curvature(self, t, s):
        return self.jet(t, s, with_position=False).H

    def lagrangian_angle_phase(self, t, s):
        """e^{i beta} = -alpha' omega' / (|alpha'| |omega'|)."""
        da = self.alpha.eval(np.asarray(t, dtype=float)).d1
        dw = self.omega.eval(np.asarray(s, dtype=float)).d1
        return -da * dw / (np.abs(da) * np.abs(dw))


def build(
    alpha: PlanarCurve,
    omega: PlanarCurve,
    t0: Optional[float] = None,
    s0: Optional[float] = None,
    t_window: Optional[tuple] = None,
    s_window: Optional[tuple] = None,
) -> StarSurface:
    """Build alpha * omega with prefix tables; base parameters default to the curves' own."""
    t0 = alpha.base if t0 is None else float(t0)
    s0 = omega.base if s0 is None else float(s0)
    for curve, base in ((alpha, t0), (omega, s0)):
        lo, hi = curve.domain
        if not lo <= base <= hi:
            raise DomainError(f"base parameter {base} outside the {curve.kind} domain")
    return StarSurface(
        alpha=alpha, omega=omega, t0=t0, s0=s0,
        A=PrefixIntegral(alpha, t0, t_window), B=PrefixIntegral(omega, s0, s_window),
    )


def _normal_coefficients(v, jet: SurfaceJet):
    # E = G = 0 only at masked branch points, where NaN is the intended output
    with np.errstate(invalid="ignore", divide="ignore"):
        ct = np.imag(herm(v, jet.phi_t)) / jet.E
        cs = np.imag(herm(v, jet.phi_s)) / jet.G
    return ct, cs


def project_normal(v, jet: SurfaceJet):
    """Normal component of v: sum over tangents X of [Im herm(v, X)/|X|^2] J X."""
    v = np.asarray(v, dtype=complex)
    ct, cs = _normal_coefficients(v, jet)
    return 1j * (ct[..., None] * jet.phi_t + cs[..., None] * jet.phi_s)


def normal_project_position(surf: StarSurface, t, s):
    jet = surf.jet(t, s)
    return project_normal(jet.phi, jet)


def normal_project_constant(surf: StarSurface, t, s, e):
    jet = surf.jet(t, s, with_position=False)
    e = np.broadcast_to(np.asarray(e, dtype=complex), jet.phi_t.shape)
    return project_normal(e, jet)


def fit_translation(points, reference):
    """Least-squares translation d with points ~ reference + d; returns (d, max residual)."""
    points = np.asarray(points)
    reference = np.asarray(reference)
    diff = (points - reference).reshape(-1, points.shape[-1])
    d = diff.mean(axis=0)
    resid = np.sqrt(np.sum(np.abs(diff - d) ** 2, axis=-1))
    return d, float(np.max(resid))
