import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seglab import grid, solver
from seglab.penalty import ParameterError, huber, soft_shrink
from seglab.solver import LabelState, NumericalDivergenceError, SolverParams


def huber_ref(x, t):
    ax = abs(x)
    return x * x / (2 * t) if ax <= t else ax - t / 2


def two_tone(size=16):
    img = np.zeros((size, size))
    img[:, size // 2:] = 1.0
    truth = (img > 0.5).astype(int)
    return img, truth


def random_state(rng, n=3, h=6, w=5, c=1):
    u = rng.uniform(0, 1, (n, h, w))
    return LabelState(
        u=u, v=rng.uniform(-0.2, 1.2, (n, h, w)), y=rng.normal(0, 0.1, (n, h, w)),
        z=rng.normal(0, 0.3, (n, 2, h, w)), r=rng.normal(0, 0.1, (n, c, h, w)),
        c=rng.uniform(0, 1, (n, c)), lam=rng.uniform(0, 0.99, (n, h, w)),
    )


# -- parameters ----------------------------------------------------------------

def test_default_parameters():
    p = SolverParams()
    assert (p.eta, p.mu, p.alpha, p.beta, p.tau, p.theta) == (0.5, 0.5, 0.01, 10.0, 0.5, 1.0)
    assert (p.max_iters, p.primal_tol, p.gs_sweeps) == (500, 1e-3, 10)
    assert p.lambda_cost == "rho" and p.global_lambda is None and p.intensity_scale == 1.0


@pytest.mark.parametrize("kw", [
    {"eta": 0}, {"mu": -1}, {"beta": 0}, {"theta": 0}, {"alpha": 0}, {"alpha": 1},
    {"tau": -0.1}, {"n_labels": 0}, {"n_labels": 2.5}, {"primal_tol": 0},
    {"lambda_cost": "other"}, {"global_lambda": 1.5}, {"max_iters": -1}, {"intensity_scale": 0},
])
def test_invalid_parameters(kw):
    with pytest.raises(ParameterError):
        SolverParams(**kw)


def test_as_dict_round_trips():
    p = SolverParams(n_labels=4, tau=0.0, seed=3)
    assert SolverParams(**p.as_dict()) == p


# -- initialisation --------------------------------------------------------------

def test_init_is_deterministic(rng):
    img = rng.random((20, 17))
    a = solver.init_state(img, SolverParams(n_labels=4, seed=11))
    b = solver.init_state(img, SolverParams(n_labels=4, seed=11))
    for name in ("u", "v", "y", "z", "r", "c", "lam"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    c = solver.init_state(img, SolverParams(n_labels=4, seed=12))
    assert not np.array_equal(a.u, c.u)


def test_init_is_a_hard_partition(rng):
    s = solver.init_state(rng.random((9, 13)), SolverParams(n_labels=3))
    assert np.all(s.v.sum(axis=0) == 1.0)
    assert set(np.unique(s.u)) <= {0.0, 1.0}
    assert np.all(s.y == 0) and np.all(s.z == 0) and np.all(s.r == 0)
    assert np.all(s.lam == 0.99)
    assert s.z.shape == (3, 2, 9, 13) and s.r.shape == (3, 1, 9, 13) and s.c.shape == (3, 1)


def test_init_region_means(rng):
    img = rng.random((8, 8))
    p = SolverParams(n_labels=3, seed=5)
    s = solver.init_state(img, p)
    assignment = np.argmax(s.u, axis=0)
    for i in range(3):
        assert s.c[i, 0] == pytest.approx(img[assignment == i].mean(), abs=1e-14)


def test_oracle_init_on_two_tone():
    img, truth = two_tone()
    s = solver.state_from_labels(img, truth, SolverParams(n_labels=2))
    np.testing.assert_array_equal(s.c[:, 0], [0.0, 1.0])


def test_empty_region_falls_back_to_global_mean():
    img = np.array([[0.2, 0.4], [0.6, 0.8]])
    s = solver.state_from_labels(img, np.zeros((2, 2), int), SolverParams(n_labels=2))
    assert s.c[1, 0] == pytest.approx(0.5)


def test_too_many_labels():
    with pytest.raises(ParameterError):
        solver.init_state(np.zeros((2, 2)), SolverParams(n_labels=5))


def test_colour_image_state_shapes(rng):
    s = solver.init_state(rng.random((6, 7, 3)), SolverParams(n_labels=2))
    assert s.c.shape == (2, 3) and s.r.shape == (2, 3, 6, 7)


def test_image_range_is_checked():
    with pytest.raises(ValueError):
        solver.init_state(np.full((4, 4), 1.5), SolverParams())
    with pytest.raises(ValueError):
        solver.run(np.array([[0.0, np.nan]]), SolverParams(n_labels=1))


# -- intensity update ----------------------------------------------------------

def test_intensity_uniform_weights_give_mean(rng):
    f = rng.random((1, 8, 8))
    c = solver.update_intensity(f, np.zeros_like(f), np.full((8, 8), 0.3), np.ones((8, 8)), np.zeros(1))
    assert c[0] == pytest.approx(f.mean(), abs=1e-14)


def test_intensity_held_for_empty_label(rng):
    f = rng.random((1, 8, 8))
    c = solver.update_intensity(f, np.zeros_like(f), np.ones((8, 8)), np.zeros((8, 8)), np.array([0.77]))
    assert c[0] == 0.77


def test_intensity_matches_double_loop(rng):
    n, C, h, w = 3, 2, 8, 8
    f = rng.random((C, h, w))
    r = rng.normal(0, 0.1, (n, C, h, w))
    lam = rng.random((n, h, w))
    u = rng.random((n, h, w))
    c = solver.update_intensity(f, r, lam, u, np.zeros((n, C)))
    for i in range(n):
        for ch in range(C):
            num = den = 0.0
            for a in range(h):
                for b in range(w):
                    num += lam[i, a, b] * (f[ch, a, b] - r[i, ch, a, b]) * u[i, a, b]
                    den += lam[i, a, b] * u[i, a, b]
            assert abs(c[i, ch] - num / den) < 1e-12


# -- data auxiliary ------------------------------------------------------------

def test_r_zero_residual():
    f = np.full((1, 4, 4), 0.4)
    assert np.all(solver.update_r(f, np.array([0.4]), 0.5) == 0)


def test_r_dead_zone():
    f = np.full((1, 2, 2), 0.8)
    assert np.all(solver.update_r(f, np.array([0.5]), 0.5) == 0)


def test_r_is_pointwise_minimiser(rng):
    grid_r = np.arange(-30000, 30001) * 1e-4
    eta = 0.5
    f = rng.random((1, 4, 4)) * 3
    c = np.array([0.9])
    r = solver.update_r(f, c, eta)
    for x, rx in zip((f - c[0]).ravel(), r.ravel()):
        obj = np.abs(grid_r) + (x - grid_r) ** 2 / (2 * eta)
        assert abs(rx - grid_r[np.argmin(obj)]) <= 1e-4


# -- gradient auxiliary --------------------------------------------------------

def test_z_constant_is_zero():
    assert np.all(solver.update_z(np.full((5, 5), 0.3), 0.5) == 0)


def test_z_step_edge():
    v = np.zeros((4, 6))
    v[:, 3:] = 1.0
    z = solver.update_z(v, 0.5)
    assert z.shape == (2, 4, 6)
    np.testing.assert_array_equal(z[0][:, 2], 0.5)
    assert np.count_nonzero(z) == 4


def test_z_is_componentwise_minimiser(rng):
    mu = 0.5
    v = rng.normal(0, 1, (5, 5))
    z = solver.update_z(v, mu)
    g = grid.gradient(v)
    zs = np.arange(-50000, 50001) * 1e-4
    for gx, zx in zip(g.ravel()[::3], z.ravel()[::3]):
        obj = np.abs(zs) + (gx - zs) ** 2 / (2 * mu)
        assert abs(zx - zs[np.argmin(obj)]) <= 1e-4


def test_z_stacked_layout(rng):
    v = rng.random((3, 4, 5))
    z = solver.update_z(v, 0.1)
    assert z.shape == (3, 2, 4, 5)
    for i in range(3):
        np.testing.assert_array_equal(z[i], solver.update_z(v[i], 0.1))


# -- pointwise data cost ------------------------------------------------------

def test_data_cost_zero():
    f = np.full((1, 3, 3), 0.25)
    assert np.all(solver.pointwise_data_cost(f, np.array([0.25]), np.zeros_like(f), 0.5) == 0)


def test_data_cost_equals_huber_after_r_update(rng):
    f = rng.random((2, 9, 9))
    c = np.array([[0.1, 0.9], [0.5, 0.5]])
    for eta in (0.1, 0.5, 1.0):
        r = solver.update_r(f, c, eta)
        d = solver.pointwise_data_cost(f, c, r, eta)
        ref = huber(f[None] - c[:, :, None, None], eta).sum(axis=1)
        assert np.max(np.abs(d - ref)) < 1e-12


def test_data_cost_random_formula(rng):
    f = rng.random((2, 4, 3))
    c = rng.random(2)
    r = rng.normal(0, 0.3, (2, 4, 3))
    eta = 0.7
    d = solver.pointwise_data_cost(f, c, r, eta)
    for a in range(4):
        for b in range(3):
            ref = sum(abs(r[k, a, b]) + (f[k, a, b] - c[k] - r[k, a, b]) ** 2 / (2 * eta) for k in range(2))
            assert abs(d[a, b] - ref) < 1e-14
    assert np.all(d >= 0)


# -- u update -----------------------------------------------------------------

def test_u_collapses_to_positive_part(rng):
    v = rng.normal(0, 1, (3, 4, 4))
    u = solver.update_u(rng.random((3, 4, 4)), v, 0 * v, rng.random((3, 4, 4)), 0.0, 0.0, 1.0)
    np.testing.assert_array_equal(u, np.maximum(0, v))


def test_u_zero_inputs():
    z = np.zeros((2, 3, 3))
    assert np.all(solver.update_u(z, z, z, z, z, 0.5, 1.0) == 0)


def test_u_stationarity(rng):
    n = 4
    u_prev = rng.random((n, 7, 7))
    v = rng.normal(0.5, 1, (n, 7, 7))
    y = rng.normal(0, 0.2, (n, 7, 7))
    d = rng.random((n, 7, 7))
    lam = rng.uniform(0, 0.99, (n, 7, 7))
    tau, theta = 0.5, 1.7
    ut = solver.u_intermediate(u_prev, v, y, d, lam, tau, theta)
    others = np.stack([sum(u_prev[j] for j in range(n) if j != i) for i in range(n)])
    resid = lam * d + tau * others + theta * (ut - v + y)
    assert np.max(np.abs(resid)) < 1e-12
    u = solver.update_u(u_prev, v, y, d, lam, tau, theta)
    assert np.all(u >= 0)
    np.testing.assert_array_equal(u, np.maximum(ut, 0))


def test_u_uses_previous_sweep_for_other_labels(rng):
    # Jacobi coupling: updating label 0 alone gives the same answer as the stacked update
    u_prev = rng.random((3, 4, 4))
    v, y, d, lam = (rng.random((3, 4, 4)) for _ in range(4))
    full = solver.update_u(u_prev, v, y, d, lam, 0.5, 1.0)
    single = np.maximum(0, v[0] - y[0] - lam[0] * d[0] - 0.5 * (u_prev[1] + u_prev[2]))
    np.testing.assert_allclose(full[0], single, atol=1e-15)


# -- v system -----------------------------------------------------------------

def assembled_matrix(xi):
    h, w = xi.shape
    n = h * w
    A = np.eye(n)
    for i in range(h):
        for j in range(w):
            row = i * w + j
            for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                a, b = i + di, j + dj
                if 0 <= a < h and 0 <= b < w:
                    A[row, row] += xi[i, j]
                    A[row, a * w + b] -= xi[i, j]
    return A


def test_v_identity_system_when_lambda_is_one(rng):
    u, y = rng.random((2, 5, 5)), rng.random((2, 5, 5))
    z = rng.normal(0, 1, (2, 2, 5, 5))
    vt = solver.update_v_tilde(u, y, z, np.ones((2, 5, 5)), rng.random((2, 5, 5)), SolverParams())
    np.testing.assert_array_equal(vt, u + y)


def test_v_constant_rhs():
    b = np.full((6, 6), 0.42)
    xi = np.random.default_rng(0).uniform(0, 2, (6, 6))
    v = solver.gauss_seidel(b, xi, b, 3)
    np.testing.assert_allclose(v, b, atol=1e-15)


def test_gauss_seidel_against_dense_solve(rng):
    lam = rng.uniform(0, 0.99, (16, 16))
    xi = (1 - lam) / (0.5 * 1.0)
    b = rng.normal(0, 1, (16, 16))
    A = assembled_matrix(xi)
    v_dense = np.linalg.solve(A, b.ravel()).reshape(16, 16)
    v = solver.gauss_seidel(b, xi, np.zeros_like(b), 200)
    assert np.max(np.abs(A @ v.ravel() - b.ravel())) < 1e-6
    assert np.max(np.abs(v - v_dense)) < 1e-6
    assert np.max(np.abs(solver.v_system_residual(v, b, xi))) < 1e-6


def test_assembled_matrix_matches_laplacian(rng):
    xi = rng.uniform(0, 1, (5, 4))
    v = rng.normal(0, 1, (5, 4))
    lhs = (assembled_matrix(xi) @ v.ravel()).reshape(5, 4)
    np.testing.assert_allclose(lhs, v - xi * grid.laplacian(v), atol=1e-13)


def test_gauss_seidel_residual_decreases(rng):
    xi = rng.uniform(0, 2, (12, 12))
    b = rng.normal(0, 1, (12, 12))
    v = np.zeros_like(b)
    last = np.inf
    for _ in range(10):
        v = solver.gauss_seidel(b, xi, v, 1)
        res = np.max(np.abs(solver.v_system_residual(v, b, xi)))
        assert res < last
        last = res


def test_gauss_seidel_treats_labels_independently(rng):
    xi = rng.uniform(0, 1, (3, 6, 6))
    b = rng.normal(0, 1, (3, 6, 6))
    v = solver.gauss_seidel(b, xi, np.zeros_like(b), 5)
    for i in range(3):
        np.testing.assert_array_equal(v[i], solver.gauss_seidel(b[i], xi[i], np.zeros((6, 6)), 5))


def test_gauss_seidel_does_not_modify_warm_start(rng):
    v0 = rng.random((4, 4))
    keep = v0.copy()
    solver.gauss_seidel(rng.random((4, 4)), np.ones((4, 4)), v0, 3)
    np.testing.assert_array_equal(v0, keep)


# -- projection and dual --------------------------------------------------------

def test_projection_example():
    v = solver.project_sum_to_one(np.array([0.7, 0.5]).reshape(2, 1, 1))
    np.testing.assert_allclose(v.ravel(), [0.6, 0.4], atol=1e-15)


def test_projection_fixed_point(rng):
    x = rng.random((4, 5, 5))
    x /= x.sum(axis=0)
    np.testing.assert_allclose(solver.project_sum_to_one(x), x, atol=1e-15)


def test_projection_matches_lagrange_solution(rng):
    # KKT system of min 0.5||x - t||^2 s.t. 1'x = 1
    K = np.block([[np.eye(3), np.ones((3, 1))], [np.ones((1, 3)), np.zeros((1, 1))]])
    for t in rng.normal(0, 2, (50, 3)):
        ref = np.linalg.solve(K, np.concatenate([t, [1.0]]))[:3]
        got = solver.project_sum_to_one(t.reshape(3, 1, 1)).ravel()
        assert np.max(np.abs(got - ref)) < 1e-12
        again = solver.project_sum_to_one(got.reshape(3, 1, 1)).ravel()
        assert np.max(np.abs(again - got)) < 1e-12


@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_projection_sums_to_one(n, seed):
    x = np.random.default_rng(seed).normal(0, 3, (n, 4, 3))
    assert np.max(np.abs(solver.project_sum_to_one(x).sum(axis=0) - 1)) < 1e-12


def test_dual_updates(rng):
    y = rng.random((2, 3, 3))
    u = rng.random((2, 3, 3))
    np.testing.assert_array_equal(solver.update_dual(y, u, u), y)
    np.testing.assert_allclose(solver.update_dual(y, u + 0.25, u), y + 0.25, atol=1e-15)
    total = y.copy()
    gaps = []
    for _ in range(3):
        a, b = rng.random((2, 3, 3)), rng.random((2, 3, 3))
        total = solver.update_dual(total, a, b)
        gaps.append(a - b)
    np.testing.assert_allclose(total, y + sum(gaps), atol=1e-14)


# -- labels --------------------------------------------------------------------

def test_extract_labels_examples():
    u = np.stack([np.ones((3, 3)), np.zeros((3, 3))])
    assert np.all(solver.extract_labels(u) == 0)
    assert np.all(solver.extract_labels(np.full((4, 3, 3), 0.25)) == 0)


@given(st.integers(0, 2**32 - 1), st.floats(1e-3, 1e3))
def test_extract_labels_scale_invariant(seed, s):
    u = np.random.default_rng(seed).random((3, 5, 5))
    np.testing.assert_array_equal(solver.extract_labels(u), solver.extract_labels(s * u))


# -- energy --------------------------------------------------------------------

def loop_energy(state, f, p):
    n, h, w = state.u.shape
    C = f.shape[0]
    total = 0.0
    for i in range(n):
        for a in range(h):
            for b in range(w):
                ui = state.u[i, a, b]
                lam = state.lam[i, a, b]
                data = sum(huber_ref(f[k, a, b] - state.c[i, k], p.eta) for k in range(C))
                others = sum(state.u[j, a, b] for j in range(n) if j != i)
                gx = state.u[i, a, b + 1] - ui if b + 1 < w else 0.0
                gy = state.u[i, a + 1, b] - ui if a + 1 < h else 0.0
                reg = huber_ref(gx, p.mu) + huber_ref(gy, p.mu)
                total += lam * data * ui + p.tau * others * ui + (1 - lam) * reg
    return total


def test_energy_matches_loop(rng):
    p = SolverParams(n_labels=3, eta=0.3, mu=0.2, tau=0.7)
    s = random_state(rng, n=3, h=6, w=5, c=2)
    f = rng.random((6, 5, 2))
    e = solver.energy(s, f, p)
    ref = loop_energy(s, np.moveaxis(f, -1, 0), p)
    assert abs(e - ref) < 1e-10


def test_energy_of_oracle_state_is_boundary_cost():
    img, truth = two_tone(16)
    p = SolverParams(n_labels=2, tau=3.0)
    s = solver.state_from_labels(img, truth, p)
    # each label has one jump of height 1 per row along the boundary
    expected = 2 * 16 * (1 - 0.99) * huber_ref(1.0, 0.5)
    assert solver.energy(s, img, p) == pytest.approx(expected, abs=1e-12)


def test_energy_of_uniform_soft_state():
    n, h, w, tau = 4, 5, 6, 0.5
    img = np.full((h, w), 0.3)
    p = SolverParams(n_labels=n, tau=tau)
    s = solver.init_state(img, p)
    s.u[:] = 1.0 / n
    s.c[:] = 0.3
    # tau * (n - 1) / n^2 per label per pixel
    assert solver.energy(s, img, p) == pytest.approx(n * h * w * tau * (n - 1) / n**2, abs=1e-12)


# -- full iteration ------------------------------------------------------------

def test_single_label_constant_image_is_exact():
    res = solver.run(np.full((10, 10), 0.6), SolverParams(n_labels=1))
    assert res.converged and res.iterations == 1
    assert np.all(res.labels == 0)
    np.testing.assert_allclose(res.soft_fields, 1.0, atol=1e-15)


def test_single_label_fixed_point(rng):
    img = rng.random((10, 10))
    p = SolverParams(n_labels=1)
    res = solver.run(img, p)
    assert np.all(res.labels == 0)
    assert res.converged
    assert np.max(np.abs(res.soft_fields - 1)) < p.primal_tol
    tight = solver.run(img, SolverParams(n_labels=1, primal_tol=1e-11, max_iters=5000))
    assert tight.converged
    assert np.max(np.abs(tight.soft_fields - 1)) < 1e-10


def test_run_is_deterministic(rng):
    img = rng.random((16, 16))
    p = SolverParams(n_labels=3, seed=4, max_iters=30)
    a, b = solver.run(img, p), solver.run(img, p)
    assert np.array_equal(a.labels, b.labels)
    assert np.array_equal(a.soft_fields, b.soft_fields)
    assert np.array_equal(a.intensities, b.intensities)
    assert [vars(r) for r in a.diagnostics] == [vars(r) for r in b.diagnostics]


def test_invariants_hold_every_iteration():
    rng = np.random.default_rng(3)
    img = np.clip(rng.normal(0.5, 0.2, (20, 20)), 0, 1)
    p = SolverParams(n_labels=3, seed=1, max_iters=40)
    f = img[None]
    seen = []

    def check(rec, s):
        assert np.all(s.u >= 0)
        assert np.max(np.abs(s.v.sum(axis=0) - 1)) < 1e-12
        assert np.all(s.lam >= 0) and np.all(s.lam <= 1 - p.alpha + 1e-15)
        d = solver.pointwise_data_cost(f, s.c, s.r, p.eta)
        assert np.max(np.abs(d - huber(f - s.c[:, :, None, None], p.eta).sum(axis=1))) < 1e-12
        seen.append(rec.iteration)

    res = solver.run(img, p, callback=check)
    assert seen == list(range(1, res.iterations + 1))
    assert np.array_equal(res.labels, np.argmax(res.soft_fields, axis=0))


def test_diagnostics_content():
    img, _ = two_tone(12)
    res = solver.run(img, SolverParams(n_labels=2, max_iters=7, primal_tol=1e-12))
    assert res.iterations == 7 and not res.converged
    for k, rec in enumerate(res.diagnostics, start=1):
        assert rec.iteration == k
        assert len(rec.mean_lambda) == 2
        assert np.isfinite(rec.energy) and rec.primal_residual >= 0


def test_ground_truth_start_is_kept():
    img, truth = two_tone(32)
    p = SolverParams(n_labels=2)
    res = solver.run(img, p, state=solver.state_from_labels(img, truth, p))
    assert res.converged
    assert np.array_equal(res.labels, truth)
    np.testing.assert_allclose(res.intensities[:, 0], [0.0, 1.0], atol=1e-12)


def test_zero_iterations_returns_initial_labels(rng):
    img = rng.random((6, 6))
    p = SolverParams(n_labels=2, max_iters=0)
    res = solver.run(img, p)
    assert res.iterations == 0
    np.testing.assert_array_equal(res.labels, np.argmax(solver.init_state(img, p).u, axis=0))


def test_global_lambda_is_constant():
    img, _ = two_tone(10)
    lams = []
    solver.run(img, SolverParams(n_labels=2, global_lambda=0.3, max_iters=5),
               callback=lambda rec, s: lams.append(s.lam.copy()))
    assert all(np.all(lam == 0.3) for lam in lams)


def test_pointwise_cost_mode_runs():
    img, _ = two_tone(10)
    res = solver.run(img, SolverParams(n_labels=2, lambda_cost="pointwise", max_iters=20))
    assert res.labels.shape == (10, 10)


def test_intensity_scale_reports_image_units():
    img, truth = two_tone(16)
    p = SolverParams(n_labels=2, intensity_scale=255.0)
    state = solver.state_from_labels(img, truth, p)
    np.testing.assert_array_equal(state.c[:, 0], [0.0, 255.0])
    res = solver.run(img, p, state=state)
    np.testing.assert_allclose(res.intensities[:, 0], [0.0, 1.0], atol=1e-12)


def test_colour_image_run(rng):
    img = np.zeros((12, 12, 3))
    img[:, 6:] = [1.0, 0.5, 0.0]
    p = SolverParams(n_labels=2)
    truth = (np.arange(12)[None, :] >= 6).repeat(12, 0).astype(int)
    res = solver.run(img, p, state=solver.state_from_labels(img, truth, p))
    assert np.array_equal(res.labels, truth)
    np.testing.assert_allclose(res.intensities[1], [1.0, 0.5, 0.0], atol=1e-12)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_divergence_is_reported():
    img, truth = two_tone(8)
    p = SolverParams(n_labels=2)
    s = solver.state_from_labels(img, truth, p)
    s.y[0, 0, 0] = np.inf
    with pytest.raises(NumericalDivergenceError) as info:
        solver.run(img, p, state=s)
    assert info.value.iteration == 1
    assert info.value.variable in {"u", "v", "y"}
    assert "iteration 1" in str(info.value)


def test_state_copy_is_deep(rng):
    s = random_state(rng)
    t = s.copy()
    t.u[0, 0, 0] = 99
    assert s.u[0, 0, 0] != 99 and t.n_labels == 3
