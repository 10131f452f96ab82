"""Complex-plane and C^2 algebra.

Points of the plane are Python/numpy complex scalars.  Vectors of C^2 are
complex arrays whose last axis has length 2, so every function here
broadcasts over arbitrary leading shapes.
"""
from __future__ import annotations

import numpy as np


def c2(z1, z2) -> np.ndarray:
    """Stack two complex arrays into C^2 vectors (last axis of length 2)."""
    z1, z2 = np.broadcast_arrays(np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex))
    return np.stack([z1, z2], axis=-1)


def herm(z, w):
    """Hermitian product z1*conj(w1) + z2*conj(w2)."""
    z = np.asarray(z)
    w = np.asarray(w)
    return np.sum(z * np.conj(w), axis=-1)


def euclid(z, w):
    """Euclidean inner product of C^2 = R^4, i.e. Re herm(z, w)."""
    return np.real(herm(z, w))


def kaehler(z, w):
    """Kaehler form -Im herm(z, w) = euclid(J z, w)."""
    return -np.imag(herm(z, w))


def norm(z):
    return np.sqrt(euclid(z, z))


def jrot(p):
    """+pi/2 rotation of the plane (multiplication by i)."""
    return 1j * np.asarray(p)


def jrot2(v):
    """Complex structure of C^2: multiply both slots by i."""
    return 1j * np.asarray(v)


def planar_dot(a, b):
    """Euclidean inner product of plane points, Re(a * conj(b))."""
    return np.real(np.asarray(a) * np.conj(b))


def bracket_j(a, b):
    """<a, J b> for plane points a, b.

    Equals Im(a * conj(b)) = a_y b_x - a_x b_y.  With a = alpha' and
    b = alpha this is the angular-momentum density whose integral
    enters the first slot of the surface.
    """
    return np.imag(np.asarray(a) * np.conj(b))


def to_r4(v) -> np.ndarray:
    """C^2 -> R^4 in the order (Re z1, Im z1, Re z2, Im z2)."""
    v = np.asarray(v)
    return np.stack([v[..., 0].real, v[..., 0].imag, v[..., 1].real, v[..., 1].imag], axis=-1)


def from_r4(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return c2(x[..., 0] + 1j * x[..., 1], x[..., 2] + 1j * x[..., 3])
