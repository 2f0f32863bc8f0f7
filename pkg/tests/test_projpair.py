import io
import math

import numpy as np
import pytest

from opeq import matcore as mc
from opeq import projpair as pp
from opeq.errors import BadEpsilon, BadGridSize, MatrixFormatError, SingularAtZero

INV_ROOT2 = 1.0 / math.sqrt(2.0)


@pytest.fixture(scope="module")
def grid():
    return pp.uniform_grid(1000)


@pytest.fixture(scope="module")
def pair(grid):
    return pp.canonical_pair(grid)


# ---------------------------------------------------------------------------
# grid plumbing


def test_uniform_grid_basic():
    g = pp.uniform_grid(5)
    np.testing.assert_allclose(g.points, [0.0, 0.25, 0.5, 0.75, 1.0])
    assert g.n_points == 5
    assert g.spacing == pytest.approx(0.25)


@pytest.mark.parametrize("n", [0, 1, 2, -3, 2.5])
def test_uniform_grid_rejects(n):
    with pytest.raises(BadGridSize):
        pp.uniform_grid(n)


def test_grid_rejects_nonuniform():
    with pytest.raises(BadGridSize):
        pp.Grid(np.array([0.0, 0.1, 1.0]))
    with pytest.raises(BadGridSize):
        pp.Grid(np.array([0.0, 0.5, 0.9]))


def test_gridfunction_shape_checks():
    g = pp.uniform_grid(4)
    with pytest.raises(MatrixFormatError):
        pp.GridFunction(g, np.zeros((3, 2, 2)))
    with pytest.raises(MatrixFormatError):
        pp.PartialGridFunction(g, np.zeros((4, 2, 2)))


def test_value_access(grid):
    p, _ = pp.canonical_pair(grid)
    np.testing.assert_array_equal(p.value_at(0.0), np.diag([1.0, 0.0]))
    x = pp.pointwise_solution(grid)
    with pytest.raises(SingularAtZero):
        x.value_at(0.0)
    np.testing.assert_allclose(x.value_at(1.0), np.diag([1.0, 0.0]), atol=1e-8)
    with pytest.raises(KeyError):
        p.value_at(0.12345)


# ---------------------------------------------------------------------------
# canonical pair


def test_rotating_projection_endpoints():
    g = pp.uniform_grid(1001)  # contains t = 1/2 exactly
    _, q = pp.canonical_pair(g)
    np.testing.assert_allclose(q.value_at(0.0), np.diag([1.0, 0.0]), atol=1e-15)
    np.testing.assert_allclose(q.value_at(1.0), np.diag([0.0, 1.0]), atol=1e-15)
    np.testing.assert_allclose(q.value_at(0.5), 0.5 * np.ones((2, 2)), atol=1e-15)


def test_pointwise_projection_law(pair):
    for f in pair:
        vals = f.values
        prod = np.einsum("kij,kjl->kil", vals, vals)
        assert np.max(np.abs(prod - vals)) < 1e-12
        assert np.max(np.abs(vals - np.conj(np.transpose(vals, (0, 2, 1))))) < 1e-12
        assert pp.algebra_membership(f)


# ---------------------------------------------------------------------------
# closed-form square root and inverse


def test_sqrt_sum_endpoints(grid):
    s = pp.sqrt_sum_closed_form(grid)
    np.testing.assert_allclose(s.value_at(0.0), np.diag([math.sqrt(2.0), 0.0]), atol=1e-15)
    np.testing.assert_allclose(s.value_at(1.0), np.eye(2), atol=1e-8)


def test_sqrt_sum_squares_to_sum(grid, pair):
    p, q = pair
    s = pp.sqrt_sum_closed_form(grid)
    squared = np.einsum("kij,kjl->kil", s.values, s.values)
    assert np.max(np.abs(squared - (p.values + q.values))) < 1e-9


def test_sqrt_sum_matches_generic_root(grid, pair):
    p, q = pair
    s = pp.sqrt_sum_closed_form(grid)
    worst = max(
        mc.spectral_norm(s.values[k] - mc.sqrt_psd(p.values[k] + q.values[k]))
        for k in range(grid.n_points)
    )
    assert worst < 1e-9


def test_determinant_identity(grid, pair):
    p, q = pair
    dets = np.linalg.det(p.values + q.values).real
    s = np.sin(0.5 * np.pi * grid.points)
    assert np.max(np.abs(dets - s * s)) < 1e-12


def test_inv_sqrt_sum_endpoint(grid):
    inv = pp.inv_sqrt_sum(grid)
    np.testing.assert_allclose(inv.value_at(1.0), np.eye(2), atol=1e-8)


def test_inv_sqrt_sum_is_inverse(grid):
    s = pp.sqrt_sum_closed_form(grid)
    inv = pp.inv_sqrt_sum(grid)
    prod = np.einsum("kij,kjl->kil", s.values[1:], inv.values)
    assert np.max(np.abs(prod - np.eye(2))) < 1e-9


# ---------------------------------------------------------------------------
# the unique candidate solution and the nonexistence certificate


def test_pointwise_solution_at_one(grid):
    x = pp.pointwise_solution(grid)
    np.testing.assert_allclose(x.value_at(1.0), np.array([[1.0, 0.0], [0.0, 0.0]]), atol=1e-8)


def test_pointwise_solution_limits(grid):
    x = pp.pointwise_solution(grid)
    first = x.values[0]
    assert abs(first[1, 0].real - (-INV_ROOT2)) < 2.0 * grid.spacing
    assert abs(first[0, 0].real - INV_ROOT2) < 2.0 * grid.spacing
    assert np.max(np.abs(x.values[:, :, 1])) == 0.0  # second column identically zero


def test_pointwise_solution_residual(grid, pair):
    p, q = pair
    x = pp.pointwise_solution(grid)
    assert pp.equation_residual_max(p, q, x) < 1e-9


def test_pointwise_solution_unique(grid, pair):
    # independent route: solve the 2x2 linear system at every positive node
    p, q = pair
    x = pp.pointwise_solution(grid)
    worst = 0.0
    for k in range(1, grid.n_points):
        root = mc.sqrt_psd(p.values[k] + q.values[k])
        other = np.linalg.solve(root, p.values[k])
        worst = max(worst, mc.spectral_norm(other - x.values[k - 1]))
    assert worst < 1e-8


def test_certificate_values(grid):
    cert = pp.nonexistence_certificate(grid)
    assert cert.boundary_value == 0.0
    assert cert.grid_resolution == 1000
    assert 0.705 <= cert.gap <= 0.7072
    assert cert.interior_limit == pytest.approx(-INV_ROOT2, abs=5e-3)


def test_certificate_coarse():
    cert = pp.nonexistence_certificate(pp.uniform_grid(100))
    assert cert.gap >= 0.69


def test_certificate_gap_monotone():
    gaps = [pp.nonexistence_certificate(pp.uniform_grid(n)).gap for n in (100, 200, 500, 1000)]
    assert all(g2 >= g1 for g1, g2 in zip(gaps, gaps[1:]))


def test_certificate_needs_resolution():
    with pytest.raises(BadGridSize):
        pp.nonexistence_certificate(pp.uniform_grid(50))


def test_near_solution_fails_membership(grid):
    # extend the candidate to t = 0 by its interior limit: the boundary value
    # is then off-diagonal and membership must fail
    x = pp.pointwise_solution(grid)
    limit = np.array([[INV_ROOT2, 0.0], [-INV_ROOT2, 0.0]], dtype=complex)
    extended = pp.GridFunction(grid, np.concatenate([limit[None], x.values]))
    assert not pp.algebra_membership(extended)


# ---------------------------------------------------------------------------
# the perturbation that restores solvability


def test_snap_eps(grid):
    assert pp.snap_eps(grid, 0.1) == pytest.approx(100.0 / 999.0)
    assert 0.0 < pp.snap_eps(grid, 0.9999) < 1.0
    assert 0.0 < pp.snap_eps(grid, 1e-9) < 1.0
    for bad in (0.0, 1.0, -0.2, 1.7, float("nan")):
        with pytest.raises(BadEpsilon):
            pp.snap_eps(grid, bad)


def test_perturbed_projection_frozen_left(grid):
    qp = pp.perturb_q(grid, 0.1)
    eps_hat = pp.snap_eps(grid, 0.1)
    for k, t in enumerate(grid.points):
        if t > eps_hat:
            break
        np.testing.assert_allclose(qp.values[k], np.diag([1.0, 0.0]), atol=1e-15)


def test_perturbed_projection_is_projection(grid):
    qp = pp.perturb_q(grid, 0.1)
    prod = np.einsum("kij,kjl->kil", qp.values, qp.values)
    assert np.max(np.abs(prod - qp.values)) < 1e-12
    assert pp.algebra_membership(qp)


def test_perturbation_distance(grid, pair):
    _, q = pair
    qp = pp.perturb_q(grid, 0.1)
    dist = pp.sup_distance(q, qp)
    assert dist == pytest.approx(math.sin(0.05 * math.pi), abs=0.01)
    assert dist <= math.sin(0.05 * math.pi) + 2.0 * grid.spacing


def test_perturbation_distance_decreases(grid, pair):
    _, q = pair
    dists = [pp.sup_distance(q, pp.perturb_q(grid, e)) for e in (0.2, 0.1, 0.05)]
    assert dists[0] > dists[1] > dists[2]


def test_perturbed_solution_boundary(grid):
    x = pp.perturbed_solution(grid, 0.1)
    np.testing.assert_allclose(x.value_at(0.0), np.diag([INV_ROOT2, 0.0]), atol=1e-15)
    assert pp.algebra_membership(x)


def test_perturbed_solution_continuous_at_eps(grid):
    x = pp.perturbed_solution(grid, 0.1)
    eps_hat = pp.snap_eps(grid, 0.1)
    k = int(round(eps_hat * (grid.n_points - 1)))
    assert x.values[k][1, 0].real == pytest.approx(-INV_ROOT2, abs=1e-12)
    # adjacent nodes on both sides stay within a spacing-scaled jump bound
    for j in (k - 1, k + 1):
        assert mc.spectral_norm(x.values[j] - x.values[k]) < 10.0 * grid.spacing


def test_perturbed_solution_residual(grid, pair):
    p, _ = pair
    for eps in (0.2, 0.1, 0.05, 0.9999):
        qp = pp.perturb_q(grid, eps)
        x = pp.perturbed_solution(grid, eps)
        assert pp.equation_residual_max(p, qp, x) < 1e-8
        assert pp.algebra_membership(x)


# ---------------------------------------------------------------------------
# serialization


def test_gridfunction_json_round_trip():
    g = pp.uniform_grid(4)
    p, _ = pp.canonical_pair(g)
    back = pp.gridfunction_from_json(pp.gridfunction_to_json(p))
    assert isinstance(back, pp.GridFunction)
    np.testing.assert_allclose(back.values, p.values)
    x = pp.pointwise_solution(g)
    back_x = pp.gridfunction_from_json(pp.gridfunction_to_json(x))
    assert isinstance(back_x, pp.PartialGridFunction)
    np.testing.assert_allclose(back_x.values, x.values)


def test_csv_export(grid):
    x = pp.pointwise_solution(grid)
    buf = io.StringIO()
    pp.write_csv(x, buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "t,re11,im11,re12,im12,re21,im21,re22,im22"
    assert len(lines) == grid.n_points  # header + one row per positive node
    last = lines[-1].split(",")
    assert float(last[0]) == 1.0
    assert float(last[1]) == pytest.approx(1.0, abs=1e-8)  # x11(1) = 1
    assert float(last[5]) == pytest.approx(0.0, abs=1e-8)  # x21(1) = 0
