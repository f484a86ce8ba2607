"""Simultaneous polynomial root finding (Aberth–Ehrlich iteration).

Coefficients are ordered low to high: coeffs[j] multiplies u^j.  Initial
moduli come from the lower convex hull of j -> log|c_j| (Bini's scheme),
which places starting points on the correct magnitude shells even when the
coefficients are strongly graded, and the stopping test is relative to the
local evaluation scale sum |c_j| |z|^j so tiny roots converge fully.

The vectorized variant solves many same-degree polynomials at once, which is
how profile grids and link-sampling columns are processed.
"""

from __future__ import annotations

import math

import numpy as np


class RootFindingError(RuntimeError):
    pass


def polyval(coeffs, z):
    """Horner evaluation of one polynomial (coeffs low->high) at points z."""
    coeffs = np.asarray(coeffs, dtype=complex)
    z = np.asarray(z, dtype=complex)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def polyval_many(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Horner evaluation; coeffs (m, d+1) low->high against roots z (m, k)."""
    acc = np.zeros_like(z)
    for j in range(coeffs.shape[1] - 1, -1, -1):
        acc = acc * z + coeffs[:, j][:, None]
    return acc


def _initial_guesses(coeffs: np.ndarray) -> np.ndarray:
    """Starting points on shells read off the coefficient magnitudes.

    For each edge of the upper... lower convex hull of (j, log|c_j|) the
    |slope| is the log-radius of the roots it accounts for; the edge from
    exponent j1 to j2 contributes j2-j1 points on that circle.
    """
    m, d1 = coeffs.shape
    d = d1 - 1
    out = np.empty((m, d), dtype=complex)
    mags = np.abs(coeffs)
    golden = (math.sqrt(5) - 1) / 2
    for row in range(m):
        logs = [(j, math.log(mags[row, j])) for j in range(d1)
                if mags[row, j] > 0]
        # lower hull of points (j, log|c_j|): edges give root moduli
        hull: list[tuple[int, float]] = []
        for p in logs:
            while len(hull) >= 2:
                (x0, y0), (x1, y1) = hull[-2], hull[-1]
                if (x1 - x0) * (p[1] - y0) - (p[0] - x0) * (y1 - y0) <= 0:
                    hull.pop()
                else:
                    break
            hull.append(p)
        k = 0
        for (j1, y1), (j2, y2) in zip(hull, hull[1:]):
            r = math.exp((y1 - y2) / (j2 - j1))
            for i in range(j2 - j1):
                angle = 2 * math.pi * ((k + 0.5) / d + golden * k)
                out[row, k] = r * complex(math.cos(angle), math.sin(angle))
                k += 1
        while k < d:  # degenerate hull (single coefficient)
            angle = 2 * math.pi * (k + 0.5) / d
            out[row, k] = complex(math.cos(angle), math.sin(angle))
            k += 1
    return out


def _poly_and_derivative(coeffs: np.ndarray, z: np.ndarray):
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for j in range(coeffs.shape[1] - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, j][:, None]
    return p, dp


def _local_scale(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    """sum_j |c_j| |z|^j, the natural backward-error scale at z."""
    az = np.abs(z)
    acc = np.zeros_like(az)
    amags = np.abs(coeffs)
    for j in range(coeffs.shape[1] - 1, -1, -1):
        acc = acc * az + amags[:, j][:, None]
    return acc


def aberth_many(coeffs: np.ndarray, tol: float = 1e-12, max_iter: int = 200,
                ) -> np.ndarray:
    """Roots of m polynomials of equal degree d; returns array (m, d).

    Rows whose low-order coefficients vanish exactly are deflated first (u=0
    roots with the corresponding multiplicity), grouped, and solved together.
    Raises RootFindingError when some polynomial fails to converge; the
    message carries the worst relative residual.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=complex)
    m, d1 = coeffs.shape
    d = d1 - 1
    if d < 1:
        return np.zeros((m, 0), dtype=complex)
    if np.any(np.abs(coeffs[:, -1]) == 0):
        raise RootFindingError("zero leading coefficient")

    nonzero = np.abs(coeffs) > 0
    lowest = nonzero.argmax(axis=1)  # index of first nonzero coefficient
    if np.any(lowest > 0):
        out = np.zeros((m, d), dtype=complex)
        for mult in np.unique(lowest):
            rows = np.nonzero(lowest == mult)[0]
            if mult == 0:
                out[rows] = _aberth_full(coeffs[rows], tol, max_iter)
            elif mult < d:
                deflated = _aberth_full(coeffs[rows][:, mult:], tol, max_iter)
                out[rows, : d - mult] = deflated
            # remaining entries stay 0 (roots at the origin)
        return out
    return _aberth_full(coeffs, tol, max_iter)


def _aberth_full(coeffs: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    m, d1 = coeffs.shape
    d = d1 - 1
    if d < 1:
        return np.zeros((m, 0), dtype=complex)
    z = _initial_guesses(coeffs)
    eye = np.eye(d, dtype=bool)
    converged = np.zeros((m, d), dtype=bool)
    for _ in range(max_iter):
        p, dp = _poly_and_derivative(coeffs, z)
        scale = _local_scale(coeffs, z)
        converged = np.abs(p) <= tol * scale
        if converged.all():
            break
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = p / dp
            diff = z[:, :, None] - z[:, None, :]
            diff[:, eye] = np.inf
            repulse = (1.0 / diff).sum(axis=2)
            step = newton / (1.0 - newton * repulse)
        step = np.where(np.isfinite(step), step,
                        np.where(np.isfinite(newton), newton, 0))
        z = z - np.where(converged, 0, step)
    else:
        p, _ = _poly_and_derivative(coeffs, z)
        worst = float((np.abs(p) / _local_scale(coeffs, z)).max())
        raise RootFindingError(
            f"Aberth iteration did not converge: worst relative residual "
            f"{worst:.3g}")
    return z


def aberth(coeffs, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """Roots of a single polynomial, coefficients low->high."""
    out = aberth_many(np.asarray(coeffs, dtype=complex)[None, :], tol, max_iter)
    return out[0]


def coeffs_from_roots(roots) -> np.ndarray:
    """Monic coefficients (low->high) with the given roots."""
    acc = np.array([1.0 + 0j])
    for r in roots:
        acc = np.convolve(acc, np.array([-r, 1.0 + 0j]))
    return acc
