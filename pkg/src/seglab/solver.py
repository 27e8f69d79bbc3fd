"""ADMM solver for multi-label segmentation with a Huber-Huber energy.

Every label carries a relaxed partition function ``u``, its split copy ``v``
(constrained to sum to one over labels), a scaled dual ``y``, a gradient
auxiliary ``z``, a data auxiliary ``r`` and an intensity estimate ``c``. The
trade-off field ``lam`` between data fit and regularity is recomputed from
the residual at every outer iteration.

Array conventions: an image is stored channel-first as ``(C, H, W)``;
per-label fields are stacked along a leading label axis, so ``u`` is
``(n, H, W)``, ``z`` is ``(n, 2, H, W)``, ``r`` is ``(n, C, H, W)`` and ``c``
is ``(n, C)``. The update functions below broadcast over that leading axis
and work equally on a single label.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, fields

import numba
import numpy as np

from . import grid
from .adaptive import adaptive_lambda, residual_confidence
from .penalty import ParameterError, huber, soft_shrink

log = logging.getLogger(__name__)

# the system TBB is often too old for numba and only triggers a warning
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

DENOMINATOR_FLOOR = 1e-8
LAMBDA_COSTS = ("rho", "pointwise")


class NumericalDivergenceError(ArithmeticError):
    def __init__(self, iteration, variable):
        super().__init__(f"non-finite value in {variable!r} at iteration {iteration}")
        self.iteration = iteration
        self.variable = variable


@dataclass
class SolverParams:
    n_labels: int = 2
    eta: float = 0.5
    mu: float = 0.5
    alpha: float = 0.01
    beta: float = 10.0
    tau: float = 0.5
    theta: float = 1.0
    max_iters: int = 500
    primal_tol: float = 1e-3
    gs_sweeps: int = 10
    seed: int = 0
    # residuals enter the data term as intensity_scale * (f - c)
    intensity_scale: float = 1.0
    # "rho" feeds u * d into the confidence map, "pointwise" feeds d alone
    lambda_cost: str = "rho"
    # fixed trade-off instead of the adaptive one (ablation)
    global_lambda: float | None = None

    def __post_init__(self):
        if int(self.n_labels) != self.n_labels or self.n_labels < 1:
            raise ParameterError(f"n_labels must be a positive integer, got {self.n_labels!r}")
        for name in ("eta", "mu", "beta", "theta", "primal_tol", "intensity_scale"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be positive, got {value!r}")
        if not 0 < self.alpha < 1:
            raise ParameterError(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if not (np.isfinite(self.tau) and self.tau >= 0):
            raise ParameterError(f"tau must be nonnegative, got {self.tau!r}")
        if self.max_iters < 0 or self.gs_sweeps < 0:
            raise ParameterError("iteration budgets must be nonnegative")
        if self.lambda_cost not in LAMBDA_COSTS:
            raise ParameterError(f"lambda_cost must be one of {LAMBDA_COSTS}, got {self.lambda_cost!r}")
        if self.global_lambda is not None and not 0 <= self.global_lambda <= 1:
            raise ParameterError(f"global_lambda must lie in [0, 1], got {self.global_lambda!r}")

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass
class LabelState:
    """Stacked ADMM variables for all labels (leading axis = label)."""

    u: np.ndarray
    v: np.ndarray
    y: np.ndarray
    z: np.ndarray
    r: np.ndarray
    c: np.ndarray
    lam: np.ndarray

    @property
    def n_labels(self):
        return self.u.shape[0]

    def copy(self):
        return LabelState(**{f.name: getattr(self, f.name).copy() for f in fields(self)})


@dataclass
class IterationRecord:
    iteration: int
    energy: float
    primal_residual: float
    mean_lambda: tuple


@dataclass
class SegmentationResult:
    labels: np.ndarray
    soft_fields: np.ndarray
    intensities: np.ndarray
    diagnostics: list = field(default_factory=list)
    converged: bool = False

    @property
    def iterations(self):
        return len(self.diagnostics)


def as_channels(image):
    """Return a float ``(C, H, W)`` view of an ``(H, W)`` or ``(H, W, C)`` image."""
    f = np.asarray(image, dtype=float)
    if f.ndim == 2:
        return f[None]
    if f.ndim == 3:
        return np.moveaxis(f, -1, 0)
    raise ValueError(f"image must be 2-D or 3-D, got shape {f.shape}")


def init_state(image, params):
    """Random hard initialisation: every pixel picks a label uniformly at random.

    ``image`` is ``(H, W)`` or ``(H, W, C)``; the state is expressed in
    scaled units (``params.intensity_scale``).
    """
    f = as_channels(image)
    _check_image(f)
    return _random_state(f * params.intensity_scale, params)


def state_from_labels(image, assignment, params):
    """Build a state whose partition functions are indicators of ``assignment``."""
    f = as_channels(image)
    _check_image(f)
    return _state_from_assignment(f * params.intensity_scale, np.asarray(assignment), params)


def _random_state(f, params):
    n = params.n_labels
    _, h, w = f.shape
    if n > h * w:
        raise ParameterError(f"n_labels={n} exceeds the pixel count {h * w}")
    rng = np.random.default_rng(params.seed)
    assignment = rng.integers(0, n, size=(h, w))
    return _state_from_assignment(f, assignment, params)


def _state_from_assignment(f, assignment, params):
    n = params.n_labels
    c_, h, w = f.shape
    u = (assignment[None] == np.arange(n)[:, None, None]).astype(float)
    counts = u.sum(axis=(1, 2))
    sums = np.einsum("nhw,chw->nc", u, f)
    global_mean = f.mean(axis=(1, 2))
    # empty labels start at the global mean
    c = np.where(counts[:, None] > 0, sums / np.maximum(counts, 1)[:, None], global_mean[None])
    lam0 = params.global_lambda if params.global_lambda is not None else 1.0 - params.alpha
    return LabelState(
        u=u,
        v=u.copy(),
        y=np.zeros((n, h, w)),
        z=np.zeros((n, 2, h, w)),
        r=np.zeros((n, c_, h, w)),
        c=c,
        lam=np.full((n, h, w), float(lam0)),
    )


def update_intensity(image, r, lam, u, c_prev):
    """Weighted mean ``sum lam (f - r) u / sum lam u`` per channel.

    Labels whose weight mass falls below ``DENOMINATOR_FLOOR`` keep
    ``c_prev``.
    """
    f = np.asarray(image, dtype=float)
    wgt = np.asarray(lam) * np.asarray(u)
    num = np.sum(wgt[..., None, :, :] * (f - r), axis=(-2, -1))
    den = np.sum(wgt, axis=(-2, -1))[..., None]
    safe = np.where(den < DENOMINATOR_FLOOR, 1.0, den)
    return np.where(den < DENOMINATOR_FLOOR, c_prev, num / safe)


def update_r(image, c, eta):
    """Data auxiliary: shrink the residual ``f - c`` by ``eta``."""
    f = np.asarray(image, dtype=float)
    c = np.asarray(c, dtype=float)
    return soft_shrink(f - c[..., None, None], eta)


def update_z(v, mu):
    """Gradient auxiliary: componentwise shrinkage of ``grad v`` by ``mu``.

    Output has the vector axis right after any label axis: ``v.shape[:-2] +
    (2, H, W)``.
    """
    g = np.moveaxis(grid.gradient(v), 0, -3)
    return soft_shrink(g, mu)


def pointwise_data_cost(image, c, r, eta):
    """``|r| + (f - c - r)^2 / (2 eta)`` summed over channels."""
    f = np.asarray(image, dtype=float)
    c = np.asarray(c, dtype=float)[..., None, None]
    per_channel = np.abs(r) + (f - c - r) ** 2 / (2.0 * eta)
    return per_channel.sum(axis=-3)


def u_intermediate(u, v, y, d, lam, tau, theta):
    """Unconstrained minimiser of the u-subproblem for every label at once.

    The exclusivity term uses the other labels' ``u`` as passed in (the
    previous sweep), so all labels update independently.
    """
    others = u.sum(axis=0, keepdims=True) - u
    return v - y - (lam / theta) * d - (tau / theta) * others


def update_u(u, v, y, d, lam, tau, theta):
    return np.maximum(0.0, u_intermediate(u, v, y, d, lam, tau, theta))


def v_system_rhs(u, y, z, xi):
    div_z = grid.divergence(np.moveaxis(z, -3, 0))
    return u + y - xi * div_z


def v_system_residual(v, b, xi):
    """Residual of ``v - xi * laplacian(v) = b`` (xi evaluated per pixel)."""
    return v - xi * grid.laplacian(v) - b


@numba.njit(cache=True, parallel=True)
def _gs_sweeps(v, b, xi, sweeps):
    # independent systems along the leading axis run in parallel
    n, h, w = v.shape
    for l in numba.prange(n):
        for _ in range(sweeps):
            for i in range(h):
                for j in range(w):
                    s = 0.0
                    k = 0
                    if j > 0:
                        s += v[l, i, j - 1]
                        k += 1
                    if j < w - 1:
                        s += v[l, i, j + 1]
                        k += 1
                    if i > 0:
                        s += v[l, i - 1, j]
                        k += 1
                    if i < h - 1:
                        s += v[l, i + 1, j]
                        k += 1
                    x = xi[l, i, j]
                    v[l, i, j] = (b[l, i, j] + x * s) / (1.0 + x * k)


def gauss_seidel(b, xi, v0, sweeps):
    """Lexicographic Gauss-Seidel for ``(I - xi laplacian) v = b``.

    Row ``x`` of the system reads ``(1 + xi(x) k(x)) v(x) - xi(x) sum_nb v
    = b(x)`` with ``k`` the in-grid neighbour count; the matrix is strictly
    diagonally dominant for ``xi >= 0`` so the sweeps converge. Leading axes
    of ``b`` are treated as independent systems.
    """
    b = np.asarray(b, dtype=float)
    shape = b.shape
    v = np.array(np.broadcast_to(v0, shape), dtype=float).reshape((-1,) + shape[-2:])
    xi_full = np.ascontiguousarray(np.broadcast_to(xi, shape), dtype=float).reshape(v.shape)
    _gs_sweeps(v, np.ascontiguousarray(b).reshape(v.shape), xi_full, int(sweeps))
    return v.reshape(shape)


def update_v_tilde(u, y, z, lam, v_prev, params):
    xi = (1.0 - lam) / (params.mu * params.theta)
    b = v_system_rhs(u, y, z, xi)
    return gauss_seidel(b, xi, v_prev, params.gs_sweeps)


def project_sum_to_one(v_tilde):
    """Euclidean projection of each pixel's label vector onto ``sum = 1``."""
    v_tilde = np.asarray(v_tilde, dtype=float)
    n = v_tilde.shape[0]
    excess = v_tilde.sum(axis=0, keepdims=True) - 1.0
    return v_tilde - excess / n


def update_dual(y, u, v):
    return y + (u - v)


def extract_labels(soft_fields):
    """Per-pixel argmax over labels; ties go to the lowest index."""
    return np.argmax(np.asarray(soft_fields), axis=0)


def energy(state, image, params):
    """Adaptive Huber-Huber energy evaluated on the partition functions ``u``.

    ``image`` is ``(H, W)`` or ``(H, W, C)`` in [0, 1]; it is scaled by
    ``params.intensity_scale`` to match the state.
    """
    return _energy(state, as_channels(image) * params.intensity_scale, params)


def _energy(state, f, params):
    u, lam = state.u, state.lam
    resid = f[None] - state.c[:, :, None, None]
    data = huber(resid, params.eta).sum(axis=1) * u
    others = u.sum(axis=0, keepdims=True) - u
    excl = params.tau * others * u
    reg = huber(grid.gradient(u), params.mu).sum(axis=0)
    return float(np.sum(lam * data + excl + (1.0 - lam) * reg))


def _check_image(f):
    if not np.all(np.isfinite(f)):
        raise ValueError("image contains non-finite values")
    if f.min() < 0 or f.max() > 1:
        raise ValueError("image values must lie in [0, 1]")


def _check_finite(iteration, **arrays):
    for name, a in arrays.items():
        if not np.all(np.isfinite(a)):
            raise NumericalDivergenceError(iteration, name)


def step(state, f, params):
    """One outer ADMM iteration; returns the new state."""
    s = state
    c = update_intensity(f, s.r, s.lam, s.u, s.c)
    r = update_r(f, c, params.eta)
    d = pointwise_data_cost(f, c, r, params.eta)
    if params.global_lambda is not None:
        lam = np.full_like(s.lam, params.global_lambda)
    else:
        cost = d * s.u if params.lambda_cost == "rho" else d
        lam = adaptive_lambda(residual_confidence(cost, params.beta), params.alpha)
    z = update_z(s.v, params.mu)
    u = update_u(s.u, s.v, s.y, d, lam, params.tau, params.theta)
    v_tilde = update_v_tilde(u, s.y, z, lam, s.v, params)
    v = project_sum_to_one(v_tilde)
    y = update_dual(s.y, u, v)
    return LabelState(u=u, v=v, y=y, z=z, r=r, c=c, lam=lam)


def run(image, params, state=None, callback=None):
    """Segment ``image`` with ``params.n_labels`` labels.

    Iterates until ``max_i ||u_i - v_i||_inf < primal_tol`` or
    ``max_iters``. ``state`` overrides the random initialisation and must be
    expressed in scaled intensity units; ``callback`` is called as
    ``callback(record, state)`` after every iteration. Returned intensities
    are in the units of ``image``.
    """
    f = as_channels(image)
    _check_image(f)
    f = f * params.intensity_scale
    if state is None:
        state = _random_state(f, params)
    diagnostics = []
    converged = False
    for it in range(1, params.max_iters + 1):
        state = step(state, f, params)
        _check_finite(it, c=state.c, r=state.r, lam=state.lam, z=state.z,
                      u=state.u, v=state.v, y=state.y)
        primal = float(np.max(np.abs(state.u - state.v)))
        rec = IterationRecord(
            iteration=it,
            energy=_energy(state, f, params),
            primal_residual=primal,
            mean_lambda=tuple(float(m) for m in state.lam.mean(axis=(1, 2))),
        )
        if not np.isfinite(rec.energy):
            raise NumericalDivergenceError(it, "energy")
        diagnostics.append(rec)
        if callback is not None:
            callback(rec, state)
        if primal < params.primal_tol:
            converged = True
            break
    log.debug("stopped after %d iterations (converged=%s)", len(diagnostics), converged)
    return SegmentationResult(
        labels=extract_labels(state.u),
        soft_fields=state.u,
        intensities=state.c / params.intensity_scale,
        diagnostics=diagnostics,
        converged=converged,
    )
