"""Two projections in an algebra of 2x2 matrix functions on [0, 1].

The model: continuous functions from [0, 1] into 2x2 complex matrices whose
values at both endpoints are diagonal, discretized on a uniform grid.  The
canonical pair of pointwise projections is

    P(t) = [[1, 0], [0, 0]],    Q(t) = [[c^2, s c], [s c, s^2]],

with ``c = cos(pi t / 2)`` and ``s = sin(pi t / 2)``.  ``P + Q`` is
invertible for t > 0 (its determinant is ``s^2``) but singular at t = 0, and
the unique candidate solution of ``(P + Q)^{1/2} X = P`` on (0, 1] has

    x21(t) = (-sqrt(1 + c) + sqrt(1 - c)) / 2  ->  -1/sqrt(2)   as t -> 0,

while membership in the diagonal-boundary algebra forces ``x21(0) = 0``.
That quantified clash is the :class:`NonexistenceCertificate`.  Replacing Q
by the perturbation that freezes it at its t = 0 value on ``[0, eps]`` and
reparametrizes the rest restores solvability with an explicit solution,
continuous across ``t = eps``; the perturbation distance is
``sin(pi*eps/2)``, so it can be made as small as desired.

Grid functions are value tables, one 2x2 matrix per node.  Quantities that
are singular at t = 0 are represented by :class:`PartialGridFunction`,
whose table starts at the first positive node.  Membership in the algebra
(diagonal endpoint values) is a checked predicate, never silently enforced:
the whole point of the nonexistence certificate is to exhibit the
near-solution that violates it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadEpsilon, BadGridSize, MatrixFormatError, SingularAtZero
from .matcore import (
    DEFAULT_TOLERANCES,
    ToleranceConfig,
    matrix_from_json,
    matrix_to_json,
    sqrt_psd,
)

__all__ = [
    "Grid",
    "GridFunction",
    "PartialGridFunction",
    "NonexistenceCertificate",
    "uniform_grid",
    "canonical_pair",
    "sqrt_sum_closed_form",
    "inv_sqrt_sum",
    "pointwise_solution",
    "nonexistence_certificate",
    "snap_eps",
    "perturb_q",
    "perturbed_solution",
    "algebra_membership",
    "sup_distance",
    "equation_residual_max",
    "gridfunction_to_json",
    "gridfunction_from_json",
    "write_csv",
    "CSV_HEADER",
]

CSV_HEADER = ["t", "re11", "im11", "re12", "im12", "re21", "im21", "re22", "im22"]


@dataclass(frozen=True)
class Grid:
    """Uniform sample points 0 = t_0 < t_1 < ... < t_{n-1} = 1."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 1 or pts.size < 3:
            raise BadGridSize("a grid needs at least 3 points on one axis")
        if pts[0] != 0.0 or pts[-1] != 1.0:
            raise BadGridSize("grid must start at exactly 0 and end at exactly 1")
        steps = np.diff(pts)
        if np.any(steps <= 0.0):
            raise BadGridSize("grid points must be strictly increasing")
        if np.max(np.abs(steps - steps[0])) > 1e-12:
            raise BadGridSize("grid spacing must be uniform")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n_points(self) -> int:
        return int(self.points.size)

    @property
    def spacing(self) -> float:
        return 1.0 / (self.n_points - 1)


def uniform_grid(n_points: int) -> Grid:
    """Uniform grid on [0, 1] with the given number of nodes (at least 3)."""
    if not (isinstance(n_points, int) and n_points >= 3):
        raise BadGridSize(f"need an integer number of points >= 3, got {n_points!r}")
    return Grid(np.linspace(0.0, 1.0, n_points))


def _node_index(grid: Grid, t: float) -> int:
    idx = int(round(float(t) * (grid.n_points - 1)))
    if not (0 <= idx < grid.n_points) or abs(grid.points[idx] - t) > 1e-9:
        raise KeyError(f"{t!r} is not a node of this grid")
    return idx


@dataclass(frozen=True)
class GridFunction:
    """A 2x2 matrix value at every node of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n_points, 2, 2):
            raise MatrixFormatError(
                f"values must have shape ({self.grid.n_points}, 2, 2), got {vals.shape}"
            )
        if not np.all(np.isfinite(vals.real) & np.isfinite(vals.imag)):
            raise MatrixFormatError("grid-function values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    def value_at(self, t: float) -> np.ndarray:
        return self.values[_node_index(self.grid, t)]


@dataclass(frozen=True)
class PartialGridFunction:
    """A 2x2 matrix value at every positive node; undefined at t = 0.

    ``values[k]`` belongs to ``grid.points[k + 1]``.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128)
        if vals.shape != (self.grid.n_points - 1, 2, 2):
            raise MatrixFormatError(
                f"values must have shape ({self.grid.n_points - 1}, 2, 2), got {vals.shape}"
            )
        if not np.all(np.isfinite(vals.real) & np.isfinite(vals.imag)):
            raise MatrixFormatError("grid-function values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def points(self) -> np.ndarray:
        return self.grid.points[1:]

    def value_at(self, t: float) -> np.ndarray:
        idx = _node_index(self.grid, t)
        if idx == 0:
            raise SingularAtZero("this function is undefined at t = 0")
        return self.values[idx - 1]


@dataclass(frozen=True)
class NonexistenceCertificate:
    """Quantified obstruction to solving ``(P + Q)^{1/2} X = P`` in the algebra.

    The boundary constraint pins ``x21(0)`` to ``boundary_value`` (zero, by
    diagonality), while the unique candidate solution approaches
    ``interior_limit`` at the smallest positive node.  A positive ``gap``
    certifies unsolvability at this resolution.
    """

    boundary_value: float
    interior_limit: float
    gap: float
    grid_resolution: int

    def __post_init__(self):
        if abs(abs(self.interior_limit - self.boundary_value) - self.gap) > 1e-12:
            raise ValueError("gap must equal |interior_limit - boundary_value|")

    def to_json(self) -> dict:
        return {
            "boundary_value": self.boundary_value,
            "interior_limit": self.interior_limit,
            "gap": self.gap,
            "grid_resolution": self.grid_resolution,
        }


def _cos_sin(points: np.ndarray):
    half_pi = 0.5 * np.pi
    return np.cos(half_pi * points), np.sin(half_pi * points)


def canonical_pair(grid: Grid) -> tuple[GridFunction, GridFunction]:
    """The constant projection P and the rotating projection Q."""
    n = grid.n_points
    c, s = _cos_sin(grid.points)
    p_vals = np.zeros((n, 2, 2), dtype=np.complex128)
    p_vals[:, 0, 0] = 1.0
    q_vals = np.empty((n, 2, 2), dtype=np.complex128)
    q_vals[:, 0, 0] = c * c
    q_vals[:, 0, 1] = s * c
    q_vals[:, 1, 0] = s * c
    q_vals[:, 1, 1] = s * s
    return GridFunction(grid, p_vals), GridFunction(grid, q_vals)


def _alpha_beta_gamma(points: np.ndarray):
    c, s = _cos_sin(points)
    root_plus = np.sqrt(1.0 + c)
    root_minus = np.sqrt(1.0 - c)
    alpha = 0.5 * (2.0 - s) * (root_plus + root_minus)
    beta = 0.5 * s * (root_plus - root_minus)
    gamma = 0.5 * s * (root_plus + root_minus)
    return alpha, beta, gamma


def sqrt_sum_closed_form(grid: Grid) -> GridFunction:
    """Closed-form ``(P + Q)^{1/2}`` as the symmetric matrix [[a, b], [b, g]]."""
    alpha, beta, gamma = _alpha_beta_gamma(grid.points)
    vals = np.empty((grid.n_points, 2, 2), dtype=np.complex128)
    vals[:, 0, 0] = alpha
    vals[:, 0, 1] = beta
    vals[:, 1, 0] = beta
    vals[:, 1, 1] = gamma
    return GridFunction(grid, vals)


def inv_sqrt_sum(grid: Grid) -> PartialGridFunction:
    """Closed-form ``(P + Q)^{-1/2}`` on the positive nodes.

    ``P + Q`` is singular at t = 0 (determinant ``sin(pi t / 2)^2``), so the
    value table starts at the first positive node.
    """
    pts = grid.points[1:]
    alpha, beta, gamma = _alpha_beta_gamma(pts)
    _, s = _cos_sin(pts)
    vals = np.empty((pts.size, 2, 2), dtype=np.complex128)
    vals[:, 0, 0] = gamma / s
    vals[:, 0, 1] = -beta / s
    vals[:, 1, 0] = -beta / s
    vals[:, 1, 1] = alpha / s
    return PartialGridFunction(grid, vals)


def _solution_columns(points: np.ndarray):
    c, _ = _cos_sin(points)
    root_plus = np.sqrt(1.0 + c)
    root_minus = np.sqrt(1.0 - c)
    return 0.5 * (root_plus + root_minus), 0.5 * (-root_plus + root_minus)


def pointwise_solution(grid: Grid) -> PartialGridFunction:
    """The unique X(t) with ``(P + Q)^{1/2} X = P`` at each positive node.

    Equals ``(P + Q)^{-1/2} P``: first column ``(x11, x21)``, second column
    zero.  ``x11 -> 1/sqrt(2)`` and ``x21 -> -1/sqrt(2)`` as t -> 0.
    """
    pts = grid.points[1:]
    x11, x21 = _solution_columns(pts)
    vals = np.zeros((pts.size, 2, 2), dtype=np.complex128)
    vals[:, 0, 0] = x11
    vals[:, 1, 0] = x21
    return PartialGridFunction(grid, vals)


def nonexistence_certificate(grid: Grid) -> NonexistenceCertificate:
    """Certify that ``(P + Q)^{1/2} X = P`` has no solution in the algebra.

    Reads the candidate solution's lower-left entry at the smallest positive
    node instead of extrapolating; needs at least 100 nodes so the reading is
    close to the interior limit.
    """
    if grid.n_points < 100:
        raise BadGridSize(
            f"certificate needs a grid of at least 100 points, got {grid.n_points}"
        )
    t1 = grid.points[1]
    _, x21 = _solution_columns(np.array([t1]))
    interior = float(x21[0])
    boundary = 0.0
    return NonexistenceCertificate(
        boundary_value=boundary,
        interior_limit=interior,
        gap=abs(interior - boundary),
        grid_resolution=grid.n_points,
    )


def snap_eps(grid: Grid, eps: float) -> float:
    """Snap eps to the nearest interior grid node.

    Raises :class:`BadEpsilon` unless ``0 < eps < 1``; the snapped value is
    always strictly inside (0, 1) as well.
    """
    if not (isinstance(eps, (int, float)) and math.isfinite(eps) and 0.0 < eps < 1.0):
        raise BadEpsilon(f"eps must lie strictly inside (0, 1), got {eps!r}")
    idx = int(round(eps * (grid.n_points - 1)))
    idx = min(max(idx, 1), grid.n_points - 2)
    return float(grid.points[idx])


def perturb_q(grid: Grid, eps: float) -> GridFunction:
    """Projection Q' at distance about ``sin(pi*eps/2)`` from Q.

    Q' freezes Q at its t = 0 value on ``[0, eps]`` and traverses the
    original path on ``[eps, 1]`` (linearly reparametrized), so it is again
    a pointwise projection with diagonal endpoint values.  ``eps`` snaps to
    the nearest interior node, keeping the piecewise definition exact on
    grid nodes.
    """
    eps_hat = snap_eps(grid, eps)
    pts = grid.points
    u = np.where(pts >= eps_hat, (pts - eps_hat) / (1.0 - eps_hat), 0.0)
    c, s = _cos_sin(u)
    vals = np.empty((grid.n_points, 2, 2), dtype=np.complex128)
    vals[:, 0, 0] = c * c
    vals[:, 0, 1] = s * c
    vals[:, 1, 0] = s * c
    vals[:, 1, 1] = s * s
    return GridFunction(grid, vals)


def perturbed_solution(grid: Grid, eps: float) -> GridFunction:
    """Solution X of ``(P + Q')^{1/2} X = P`` that belongs to the algebra.

    On ``[0, eps]`` the equation only constrains the first row, so the free
    lower-left entry is ramped linearly from 0 to ``-1/sqrt(2)``, where it
    meets the unique solution of the reparametrized equation on ``[eps, 1]``
    continuously.  The result has diagonal values at both endpoints.
    """
    eps_hat = snap_eps(grid, eps)
    pts = grid.points
    n = grid.n_points
    inv_root2 = 1.0 / math.sqrt(2.0)
    vals = np.zeros((n, 2, 2), dtype=np.complex128)
    left = pts < eps_hat
    vals[left, 0, 0] = inv_root2
    vals[left, 1, 0] = -pts[left] / (eps_hat * math.sqrt(2.0))
    right = ~left
    u = (pts[right] - eps_hat) / (1.0 - eps_hat)
    x11, x21 = _solution_columns(u)
    vals[right, 0, 0] = x11
    vals[right, 1, 0] = x21
    return GridFunction(grid, vals)


def algebra_membership(f: GridFunction, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """True iff the values at t = 0 and t = 1 are diagonal within tolerance."""
    for value in (f.values[0], f.values[-1]):
        if max(abs(value[0, 1]), abs(value[1, 0])) > tol.residual_atol:
            return False
    return True


def _stack_spectral_norms(stack: np.ndarray) -> np.ndarray:
    return np.linalg.svd(stack, compute_uv=False)[:, 0]


def sup_distance(f: GridFunction, g: GridFunction) -> float:
    """Max over shared nodes of the operator-norm distance between values."""
    if f.grid.n_points != g.grid.n_points:
        raise MatrixFormatError("grid functions live on different grids")
    return float(np.max(_stack_spectral_norms(f.values - g.values)))


def equation_residual_max(
    p: GridFunction,
    q: GridFunction,
    x,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> float:
    """Max over nodes of ``||(P + Q)^{1/2} X - P||``.

    The square root is recomputed numerically at each node
    (:func:`opeq.matcore.sqrt_psd`), keeping this check independent of the
    closed forms used to build candidate solutions.  ``x`` may be partial,
    in which case t = 0 is skipped.
    """
    if isinstance(x, PartialGridFunction):
        offset = 1
        x_vals = x.values
    else:
        offset = 0
        x_vals = x.values
    worst = 0.0
    for k in range(x_vals.shape[0]):
        node = k + offset
        root = sqrt_psd(p.values[node] + q.values[node], tol)
        resid = float(np.linalg.norm(root @ x_vals[k] - p.values[node], 2))
        worst = max(worst, resid)
    return worst


def gridfunction_to_json(f) -> dict:
    """Serialize a (possibly partial) grid function with its node count."""
    return {
        "n_points": f.grid.n_points,
        "start_index": 1 if isinstance(f, PartialGridFunction) else 0,
        "values": [matrix_to_json(v) for v in f.values],
    }


def gridfunction_from_json(obj):
    """Inverse of :func:`gridfunction_to_json`."""
    if not isinstance(obj, dict) or "n_points" not in obj or "values" not in obj:
        raise MatrixFormatError("grid-function JSON must carry n_points and values")
    n = obj["n_points"]
    if not (isinstance(n, int) and n >= 3):
        raise MatrixFormatError("n_points must be an integer >= 3")
    grid = uniform_grid(n)
    start = obj.get("start_index", 0)
    vals = np.array([matrix_from_json(v) for v in obj["values"]], dtype=np.complex128)
    if start == 0:
        return GridFunction(grid, vals)
    if start == 1:
        return PartialGridFunction(grid, vals)
    raise MatrixFormatError(f"unsupported start_index {start!r}")


def write_csv(f, stream) -> None:
    """Write node-by-node entries as CSV: t, then re/im of all four entries."""
    writer = csv.writer(stream)
    writer.writerow(CSV_HEADER)
    for t, value in zip(f.points, f.values):
        row = [repr(float(t))]
        for i in (0, 1):
            for j in (0, 1):
                row.append(repr(float(value[i, j].real)))
                row.append(repr(float(value[i, j].imag)))
        writer.writerow(row)
