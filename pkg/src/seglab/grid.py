"""Finite-difference operators on regular pixel grids.

Fields are numpy arrays whose last two axes are (height, width). Any leading
axes (channels, labels) are treated independently. Vector fields carry an
extra leading axis of length 2 holding the x- (column) and y- (row)
derivatives, i.e. ``gradient(u).shape == (2,) + u.shape``.

The gradient uses forward differences with a zero outward difference on the
last column/row (Neumann). ``divergence`` is its exact negative adjoint, so
``laplacian = divergence o gradient`` is symmetric negative semi-definite.
"""

from __future__ import annotations

import numpy as np


def gradient(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.ndim < 2 or u.size == 0:
        raise ValueError("gradient expects a non-empty field with at least 2 dimensions")
    g = np.zeros((2,) + u.shape)
    g[0, ..., :, :-1] = u[..., :, 1:] - u[..., :, :-1]
    g[1, ..., :-1, :] = u[..., 1:, :] - u[..., :-1, :]
    return g


def divergence(p: np.ndarray) -> np.ndarray:
    """Negative adjoint of :func:`gradient`: <grad u, p> = -<u, div p>."""
    p = np.asarray(p, dtype=float)
    if p.ndim < 3 or p.shape[0] != 2:
        raise ValueError("divergence expects a vector field of shape (2, ..., H, W)")
    px, py = p[0], p[1]
    d = np.zeros(px.shape)

    # x part: backward difference of px, with px[..., -1] treated as absent
    if px.shape[-1] > 1:
        d[..., :, 0] += px[..., :, 0]
        d[..., :, 1:-1] += px[..., :, 1:-1] - px[..., :, :-2]
        d[..., :, -1] -= px[..., :, -2]

    if py.shape[-2] > 1:
        d[..., 0, :] += py[..., 0, :]
        d[..., 1:-1, :] += py[..., 1:-1, :] - py[..., :-2, :]
        d[..., -1, :] -= py[..., -2, :]
    return d


def laplacian(u: np.ndarray) -> np.ndarray:
    return divergence(gradient(u))


def neighbour_sum(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Sum of in-grid 4-neighbours and the neighbour count per pixel.

    ``laplacian(u) == s - k * u`` where ``s, k = neighbour_sum(u)``.
    """
    u = np.asarray(u, dtype=float)
    s = np.zeros(u.shape)
    s[..., :, 1:] += u[..., :, :-1]
    s[..., :, :-1] += u[..., :, 1:]
    s[..., 1:, :] += u[..., :-1, :]
    s[..., :-1, :] += u[..., 1:, :]
    return s, neighbour_count(u.shape[-2:])


def neighbour_count(shape: tuple[int, int]) -> np.ndarray:
    h, w = shape
    k = np.full((h, w), 4.0)
    k[:, 0] -= 1
    k[:, -1] -= 1
    k[0, :] -= 1
    k[-1, :] -= 1
    return k
