"""Closed-form surfaces, written out independently of the package.

Each function returns C^2 points as an array with a trailing axis of 2.
They are only meaningful up to a translation of C^2.
"""
import numpy as np
from scipy.special import ellipj


def stack(z1, z2):
    z1, z2 = np.broadcast_arrays(z1, z2)
    return np.stack([z1, z2], axis=-1)


def plane(t, s):
    return stack((s ** 2 - t ** 2) / 2 + 0j, t * s + 0j)


def special_lines(t, s, a, b):
    return stack((s ** 2 - t ** 2) / 2 + 1j * (a * t - b * s), t * s + 1j * (a * s + b * t))


def cylinder(t, s, R):
    return stack(1j * (R * R * s - t), R * np.exp(1j * (s + t)))


def circle_line(t, s, a0, b0, R):
    e = np.exp(1j * t / R)
    return stack(s ** 2 / 2 - R * a0 * e - 1j * (b0 * s + R * t), a0 * s + R * (s + 1j * b0) * e)


def two_circles(t, s, a1, a2, R):
    return stack(
        a2 * R * np.exp(1j * s / R) - a1 * np.exp(1j * t) + 1j * (R * s - t),
        a1 * R * np.exp(1j * s / R) + a2 * np.exp(1j * t) + R * np.exp(1j * (t + s / R)),
    )


def gerono_lissajous(t, s):
    z1 = 0.25 * (8 * np.sin(t) ** 4 - 2 * np.cos(s) ** 2 - np.cos(4 * s) - 8 * np.cos(t)) + 1j / 6 * (
        9 * np.cos(s) - np.cos(3 * s) - 2 * (9 * np.sin(t) + 3 * np.sin(2 * t) + np.sin(3 * t))
    )
    z2 = (1 + (2 - 4 * np.cos(s) * np.sin(t)) * np.cos(t)) * np.sin(s) + 1j * (
        (1 + 2 * np.cos(t)) * np.sin(2 * s) + np.sin(s) * np.sin(2 * t)
    )
    return stack(z1, z2)


def _jacobi(x):
    # scipy's ellipj, deliberately a different implementation from the package's
    sn, cn, dn, _ = ellipj(np.sqrt(2) * x, 0.5)
    return sn / dn, cn / dn, 1 / dn, cn


def lemniscate_torus_as_printed(t, s):
    """The explicit sd/cd/nd expression with the 1/4 prefactor on both slots."""
    sd_t, cd_t, nd_t, cn_t = _jacobi(t)
    sd_s, cd_s, nd_s, cn_s = _jacobi(s)
    ang = np.arctan((1 + cn_t) / (1 - cn_t)) + np.arctan((1 + cn_s) / (1 - cn_s))
    z1 = 0.25 * (sd_s ** 2 - sd_t ** 2 + 1j * (cd_t * nd_t - cd_s * nd_s))
    z2 = 0.25 * 2 * sd_t * sd_s * np.exp(-1j * ang)
    return stack(z1, z2)


def lemniscate_torus_corrected(t, s):
    """Same expression with the imaginary part of the first slot halved as int r^3 = -cd nd / 2 requires."""
    sd_t, cd_t, nd_t, cn_t = _jacobi(t)
    sd_s, cd_s, nd_s, cn_s = _jacobi(s)
    ang = np.arctan2(1 + cn_t, 1 - cn_t) + np.arctan2(1 + cn_s, 1 - cn_s)
    z1 = 0.25 * (sd_s ** 2 - sd_t ** 2) + 0.5j * (cd_t * nd_t - cd_s * nd_s)
    z2 = 0.5 * sd_t * sd_s * np.exp(-1j * ang)
    return stack(z1, z2)


def gram_schmidt_normal(v, phi_t, phi_s):
    """Normal component of v in R^4 via QR of the two tangent vectors."""
    def r4(x):
        return np.stack([x[..., 0].real, x[..., 0].imag, x[..., 1].real, x[..., 1].imag], axis=-1)

    V, Xt, Xs = np.broadcast_arrays(r4(v), r4(phi_t), r4(phi_s))
    out = np.empty(V.shape)
    for idx in np.ndindex(V.shape[:-1]):
        q, _ = np.linalg.qr(np.stack([Xt[idx], Xs[idx]], axis=1))
        x = V[idx]
        out[idx] = x - q @ (q.T @ x)
    return out[..., 0] + 1j * out[..., 1], out[..., 2] + 1j * out[..., 3]


def fit_translation(points, reference):
    d = (points - reference).reshape(-1, 2).mean(axis=0)
    return d, float(np.max(np.abs(points - reference - d)))
