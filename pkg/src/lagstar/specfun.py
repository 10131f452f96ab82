"""Elliptic functions and cumulative quadrature.

All elliptic routines take the *parameter* m = k**2.  Call sites that think
in terms of the modulus k (for example k = 1/sqrt(2) for the lemniscate)
convert with ``m = k**2`` before calling in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from lagstar.errors import DomainError, QuadratureError

_AGM_MAX_ITER = 40
_EPS = np.finfo(float).eps

# m = 1/2 is the parameter of the lemniscatic case (modulus 1/sqrt(2))
LEMNISCATE_M = 0.5
SQRT2 = math.sqrt(2.0)


class EllipticTriple(NamedTuple):
    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray


def agm(a, b):
    """Arithmetic-geometric mean, elementwise."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    for _ in range(_AGM_MAX_ITER):
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        if np.all(np.abs(a - b) <= 4 * _EPS * np.abs(a)):
            break
    return 0.5 * (a + b)


def ellipk(m):
    """Complete elliptic integral of the first kind K(m), 0 <= m < 1."""
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr < 0) or np.any(m_arr >= 1) or np.any(~np.isfinite(m_arr)):
        raise DomainError(f"ellipk needs 0 <= m < 1, got {m}")
    out = np.pi / (2.0 * agm(1.0, np.sqrt(1.0 - m_arr)))
    return float(out) if out.ndim == 0 else out


def _ellipj_agm(u, m):
    """Descending Landen / AGM scheme for 0 <= m < 1 (arrays, same shape)."""
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m)
    c = np.sqrt(m)
    ratios = []  # c_n / a_n for n >= 1
    n = 0
    while n < _AGM_MAX_ITER:
        if np.all(np.abs(c) <= _EPS * np.abs(a)):
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        ratios.append(c / a)
        n += 1
    phi = (2.0 ** n) * a * u
    phi_next = phi
    for ratio in reversed(ratios):
        phi_next = phi
        phi = 0.5 * (phi + np.arcsin(ratio * np.sin(phi)))
    sn = np.sin(phi)
    cn = np.cos(phi)
    if n == 0:
        dn = np.ones_like(phi)
    else:
        # dn = cos(phi_0) / cos(phi_1 - phi_0); falls back to the algebraic
        # form where both cosines vanish together
        denom = np.cos(phi_next - phi)
        with np.errstate(divide="ignore", invalid="ignore"):
            dn = np.where(np.abs(denom) > 1e-8, cn / denom, np.sqrt(np.maximum(1.0 - m * sn * sn, 0.0)))
    return sn, cn, dn


def ellipj(u, m) -> EllipticTriple:
    """Jacobi elliptic functions (sn, cn, dn)(u | m), 0 <= m <= 1.

    The argument is first reduced modulo the real period 4K(m), which
    keeps the Landen recursion well conditioned for large |u|.
    """
    u = np.asarray(u, dtype=float)
    m = np.asarray(m, dtype=float)
    if np.any(m < 0) or np.any(m > 1) or np.any(~np.isfinite(m)):
        raise DomainError(f"ellipj needs 0 <= m <= 1, got {m}")
    u, m = np.broadcast_arrays(u, m)
    scalar = u.ndim == 0
    u = np.atleast_1d(u).astype(float)
    m = np.atleast_1d(m).astype(float)
    sn = np.empty_like(u)
    cn = np.empty_like(u)
    dn = np.empty_like(u)

    hyper = m == 1.0
    if np.any(hyper):
        uh = u[hyper]
        sn[hyper] = np.tanh(uh)
        cn[hyper] = dn[hyper] = 1.0 / np.cosh(uh)

    reg = ~hyper
    if np.any(reg):
        ur, mr = u[reg], m[reg]
        period = 4.0 * ellipk(mr)
        ur = ur - period * np.round(ur / period)
        s, c, d = _ellipj_agm(ur, mr)
        sn[reg], cn[reg], dn[reg] = s, c, d

    if scalar:
        return EllipticTriple(float(sn[0]), float(cn[0]), float(dn[0]))
    return EllipticTriple(sn, cn, dn)


def lemniscate_period() -> float:
    """Real period of r(t) = sn(t, i), i.e. 4K(1/2)/sqrt(2)."""
    return 4.0 * ellipk(LEMNISCATE_M) / SQRT2


def _lemniscate_triple(t):
    return ellipj(SQRT2 * np.asarray(t, dtype=float), LEMNISCATE_M)


def sn_imag_unit(t):
    """sn(t, i) through the real-modulus reduction sd(sqrt2 t | 1/2)/sqrt2.

    Solves r'^2 + r^4 = 1 with r(0) = 0, r'(0) = 1.
    """
    sn, cn, dn = _lemniscate_triple(t)
    return sn / (SQRT2 * dn)


def sn_imag_unit_derivs(t):
    """Return (r, r', r'') for r = sn(t, i); r' = cd*nd and r'' = -2 r^3."""
    sn, cn, dn = _lemniscate_triple(t)
    r = sn / (SQRT2 * dn)
    dr = cn / (dn * dn)
    return r, dr, -2.0 * r ** 3


def lemniscate_angle(t):
    """theta(t) = integral of sn(t, i), normalised as -arctan((1+cn)/(1-cn)).

    Evaluated with arctan2 on the non-negative pair (1+cn, 1-cn), which is
    continuous through cn = 1 and takes values in [-pi/2, 0].
    """
    _, cn, _ = _lemniscate_triple(t)
    return -np.arctan2(1.0 + cn, 1.0 - cn)


def lemniscate_cube_integral(t):
    """Antiderivative of r(t)^3 for r = sn(t, i): -cd(u) nd(u) / 2, u = sqrt2 t."""
    _, cn, dn = _lemniscate_triple(t)
    return -0.5 * cn / (dn * dn)


# ---------------------------------------------------------------------------
# cumulative quadrature
# ---------------------------------------------------------------------------

GL_POINTS = 8
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_POINTS)


def _gl_segments(f, lo, hi):
    """Gauss-Legendre integral of f over each [lo_i, hi_i] (arrays)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[..., None] + half[..., None] * _GL_X
    y = np.asarray(f(x))
    if not np.all(np.isfinite(y)):
        raise QuadratureError("integrand returned non-finite values")
    return half * np.sum(y * _GL_W, axis=-1)


@dataclass(frozen=True)
class QuadTable:
    """Prefix integrals of ``f`` at panel edges plus on-demand evaluation.

    ``table(x)`` returns the integral from ``nodes[0]`` to ``x`` by adding
    the stored prefix at the panel start and a Gauss-Legendre rule on the
    partial panel, so evaluation has the same order as the table.
    """

    nodes: np.ndarray
    prefix: np.ndarray
    f: Callable
    order: int = GL_POINTS

    @property
    def a(self) -> float:
        return float(self.nodes[0])

    @property
    def b(self) -> float:
        return float(self.nodes[-1])

    @property
    def total(self) -> float:
        return float(self.prefix[-1])

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < self.a - 1e-12) or np.any(x > self.b + 1e-12):
            raise DomainError(f"quadrature table covers [{self.a}, {self.b}]")
        k = np.clip(np.searchsorted(self.nodes, x, side="right") - 1, 0, len(self.nodes) - 2)
        start = self.nodes[k]
        out = self.prefix[k] + _gl_segments(self.f, start, x)
        return float(out) if out.ndim == 0 else out


def cumulative_integral(f: Callable, a: float, b: float, n: int) -> QuadTable:
    """Composite Gauss-Legendre prefix table of a vectorised ``f`` on n panels."""
    if not a < b:
        raise DomainError(f"need a < b, got [{a}, {b}]")
    if n < 2:
        raise DomainError("need at least two panels")
    nodes = np.linspace(a, b, n + 1)
    pieces = _gl_segments(f, nodes[:-1], nodes[1:])
    prefix = np.concatenate([[0.0], np.cumsum(pieces)])
    return QuadTable(nodes=nodes, prefix=prefix, f=f)


def adaptive_cumulative_integral(
    f: Callable, a: float, b: float, tol: float = 1e-11, n0: int = 16, n_max: int = 1 << 14
) -> QuadTable:
    """Double the panel count until the prefix values settle below ``tol``."""
    table = cumulative_integral(f, a, b, n0)
    n = n0
    while n < n_max:
        finer = cumulative_integral(f, a, b, 2 * n)
        change = np.max(np.abs(finer.prefix[::2] - table.prefix))
        table, n = finer, 2 * n
        scale = max(1.0, np.max(np.abs(finer.prefix)))
        if change <= tol * scale:
            return table
    raise QuadratureError(f"prefix table on [{a}, {b}] did not reach tol={tol} with {n} panels")


def integrate(f: Callable, a: float, b: float, tol: float = 1e-12) -> float:
    """Definite integral via the adaptive prefix table."""
    return adaptive_cumulative_integral(f, a, b, tol=tol).total
