"""Dense complex-matrix primitives with explicit tolerance control.

Matrices are plain 2-D ``numpy`` arrays of ``complex128``; :func:`as_matrix`
is the single validation gate (finite entries, two axes).  Every
floating-point judgment call -- what counts as rank, as positive, as a zero
residual -- goes through a :class:`ToleranceConfig` so the decision
thresholds are visible and overridable.

The wire format shared by all modules is
``{"rows": r, "cols": c, "data": [[re, im], ...]}`` with ``data`` row-major
of length ``r * c``; the parser rejects NaN and infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MatrixFormatError, NotPSD, ShapeMismatch

__all__ = [
    "ToleranceConfig",
    "DEFAULT_TOLERANCES",
    "MajorizationResult",
    "as_matrix",
    "matrix_from_json",
    "matrix_to_json",
    "spectral_norm",
    "adjoint",
    "hermitian_deviation",
    "is_hermitian",
    "pinv",
    "matrix_rank",
    "row_space_basis",
    "row_space_projector",
    "range_projector",
    "sqrt_psd",
    "polar_partial_isometry",
    "is_psd",
    "range_inclusion",
    "range_inclusion_residual",
    "least_dominating_scale",
    "min_majorization_scale",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds governing every floating-point decision.

    rank_rtol
        Relative singular-value cutoff: values below ``rank_rtol * sigma_max``
        are treated as zero.
    psd_atol
        Eigenvalue floor for positivity tests, scaled by the matrix norm
        where noted.
    residual_atol
        Absolute residual threshold for equation and Hermitian-deviation
        checks.
    """

    rank_rtol: float = 1e-10
    psd_atol: float = 1e-10
    residual_atol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rtol", "psd_atol", "residual_atol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and 0.0 < value < 1.0):
                raise ValueError(
                    f"{name} must be a number strictly between 0 and 1, got {value!r}"
                )


DEFAULT_TOLERANCES = ToleranceConfig()


@dataclass(frozen=True)
class MajorizationResult:
    """Least scale ``mu`` with ``C C* <= mu A A*``, or the fact that none exists.

    Infinity is an explicit flag, never a sentinel float: ``finite`` is False
    exactly when ``mu_star`` is None.
    """

    finite: bool
    mu_star: float | None

    def __post_init__(self):
        if self.finite != (self.mu_star is not None):
            raise ValueError("finite flag must match presence of mu_star")
        if self.mu_star is not None and not (
            math.isfinite(self.mu_star) and self.mu_star >= 0.0
        ):
            raise ValueError("mu_star must be a finite nonnegative number")

    def to_json(self):
        return {"finite": self.finite, "mu_star": self.mu_star if self.finite else "inf"}


def as_matrix(m) -> np.ndarray:
    """Validate and return ``m`` as a 2-D complex128 array.

    Raises :class:`MatrixFormatError` for wrong dimensionality or non-finite
    entries.
    """
    try:
        a = np.asarray(m, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"not a complex matrix: {exc}") from exc
    if a.ndim != 2:
        raise MatrixFormatError(f"expected a 2-D matrix, got {a.ndim} axes")
    if a.size and not np.all(np.isfinite(a.real) & np.isfinite(a.imag)):
        raise MatrixFormatError("matrix entries must be finite (no NaN/Inf)")
    return a


def matrix_from_json(obj) -> np.ndarray:
    """Parse the shared matrix wire format into an array."""
    if not isinstance(obj, dict):
        raise MatrixFormatError("matrix JSON must be an object")
    try:
        rows, cols, data = obj["rows"], obj["cols"], obj["data"]
    except KeyError as exc:
        raise MatrixFormatError(f"matrix JSON missing key {exc}") from exc
    if not (isinstance(rows, int) and isinstance(cols, int) and rows >= 1 and cols >= 1):
        raise MatrixFormatError("rows and cols must be positive integers")
    if not isinstance(data, list) or len(data) != rows * cols:
        raise MatrixFormatError(f"data must hold exactly rows*cols = {rows * cols} entries")
    values = np.empty(rows * cols, dtype=np.complex128)
    for k, entry in enumerate(data):
        if (
            not isinstance(entry, (list, tuple))
            or len(entry) != 2
            or not all(isinstance(part, (int, float)) and math.isfinite(part) for part in entry)
        ):
            raise MatrixFormatError(f"data[{k}] must be a finite [re, im] pair")
        values[k] = complex(entry[0], entry[1])
    return values.reshape(rows, cols)


def matrix_to_json(m) -> dict:
    """Serialize a matrix to the shared wire format."""
    a = as_matrix(m)
    return {
        "rows": int(a.shape[0]),
        "cols": int(a.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in a.ravel()],
    }


def spectral_norm(m) -> float:
    """Operator norm (largest singular value)."""
    a = as_matrix(m)
    if a.size == 0:
        return 0.0
    return float(np.linalg.norm(a, 2))


def adjoint(m) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(m).conj().T


def hermitian_deviation(m) -> float:
    """Operator norm of M - M*."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch("Hermitian deviation needs a square matrix")
    return float(np.linalg.norm(a - a.conj().T, 2))


def is_hermitian(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """True when ``||M - M*|| <= residual_atol`` (absolute)."""
    return hermitian_deviation(m) <= tol.residual_atol


def _svd(a):
    return np.linalg.svd(a, full_matrices=False)


def matrix_rank(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> int:
    """Rank under the relative singular-value cutoff."""
    a = as_matrix(m)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol.rank_rtol * s[0]))


def pinv(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Moore-Penrose pseudoinverse with the shared rank cutoff.

    Singular values below ``rank_rtol * sigma_max`` are treated as exactly
    zero, so the zero matrix maps to the zero matrix of transposed shape.
    """
    a = as_matrix(m)
    u, s, vh = _svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=np.complex128)
    keep = s > tol.rank_rtol * s[0]
    u, s, vh = u[:, keep], s[keep], vh[keep, :]
    return (vh.conj().T / s) @ u.conj().T


def row_space_basis(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Orthonormal columns spanning the row space (range of M*)."""
    a = as_matrix(m)
    _, s, vh = _svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[1], 0), dtype=np.complex128)
    r = int(np.sum(s > tol.rank_rtol * s[0]))
    return vh[:r, :].conj().T


def row_space_projector(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Orthogonal projector onto the row space of M."""
    b = row_space_basis(m, tol)
    return b @ b.conj().T


def range_projector(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Orthogonal projector onto the column space of M."""
    a = as_matrix(m)
    u, s, _ = _svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((a.shape[0], a.shape[0]), dtype=np.complex128)
    r = int(np.sum(s > tol.rank_rtol * s[0]))
    ur = u[:, :r]
    return ur @ ur.conj().T


def _eigh_sym(m):
    """Eigendecomposition of the Hermitian symmetrization of m."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ShapeMismatch("eigendecomposition needs a square matrix")
    h = 0.5 * (a + a.conj().T)
    w, v = np.linalg.eigh(h)
    return w, v


def sqrt_psd(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in ``[-psd_atol * ||M||, 0)`` are clamped to zero (roundoff
    from upstream products); anything more negative, or a gross failure of
    Hermitian symmetry, raises :class:`NotPSD`.
    """
    a = as_matrix(m)
    dev = hermitian_deviation(a)
    scale = spectral_norm(a)
    if dev > tol.residual_atol * max(1.0, scale):
        raise NotPSD(
            f"matrix is not Hermitian (deviation {dev:.3e})",
            certificate={"hermitian_deviation": dev},
        )
    w, v = _eigh_sym(a)
    norm = float(np.max(np.abs(w))) if w.size else 0.0
    floor = tol.psd_atol * norm
    if w.size and w[0] < -floor:
        raise NotPSD(
            f"matrix has eigenvalue {w[0]:.6e} below -psd_atol*norm = {-floor:.6e}",
            certificate={"min_eigenvalue": float(w[0]), "floor": -floor},
        )
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def polar_partial_isometry(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Partial isometry U with ``U (M* M)^{1/2} = M`` and ``U* U`` the row-space projector.

    Built from the SVD with the shared rank cutoff; the zero matrix yields
    the zero partial isometry.
    """
    a = as_matrix(m)
    u, s, vh = _svd(a)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros_like(a)
    r = int(np.sum(s > tol.rank_rtol * s[0]))
    return u[:, :r] @ vh[:r, :]


def is_psd(m, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """Positive-semidefinite test.

    True iff ``||M - M*|| <= residual_atol`` and the smallest eigenvalue of
    the symmetrization is at least ``-psd_atol * max(1, ||M||)``.  The
    ``max(1, .)`` scaling keeps the floor sensible near the zero matrix.
    """
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        return False
    if hermitian_deviation(a) > tol.residual_atol:
        return False
    w, _ = _eigh_sym(a)
    if w.size == 0:
        return True
    scale = max(1.0, float(np.max(np.abs(w))))
    return bool(w[0] >= -tol.psd_atol * scale)


def range_inclusion_residual(a, c, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """Residual ``||A A^dagger C - C||`` of the range-inclusion test."""
    a = as_matrix(a)
    c = as_matrix(c)
    if a.shape[0] != c.shape[0]:
        raise ShapeMismatch(
            f"A has {a.shape[0]} rows but C has {c.shape[0]}; ranges live in different spaces"
        )
    return spectral_norm(a @ (pinv(a, tol) @ c) - c)


def range_inclusion(a, c, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """True iff the column space of C is contained in the column space of A."""
    resid = range_inclusion_residual(a, c, tol)
    return resid <= tol.residual_atol * max(1.0, spectral_norm(c))


def least_dominating_scale(g, h, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> float | None:
    """Least ``t >= 0`` with ``H <= t G`` for Hermitian PSD ``G`` and ``H``.

    Returns None when no finite ``t`` exists, i.e. when ``H`` leaks outside
    the range of ``G`` (tested through a projector residual).  Otherwise the
    value is the top eigenvalue of ``G^{dagger/2} H G^{dagger/2}`` restricted
    to the range of ``G``; both matrices are symmetrized and eigenvalue-
    clamped before use, so roundoff-level negativity is tolerated.
    """
    g = as_matrix(g)
    h = as_matrix(h)
    if g.shape != h.shape or g.shape[0] != g.shape[1]:
        raise ShapeMismatch("G and H must be square matrices of equal size")
    w, v = _eigh_sym(g)
    w = np.clip(w, 0.0, None)
    wmax = float(w[-1]) if w.size else 0.0
    keep = w > tol.rank_rtol * wmax if wmax > 0.0 else np.zeros_like(w, dtype=bool)
    vr = v[:, keep]
    outside = h - vr @ (vr.conj().T @ h) if np.any(keep) else h
    if spectral_norm(outside) > tol.residual_atol * max(1.0, spectral_norm(h)):
        return None
    if not np.any(keep):
        return 0.0
    scaled = vr / np.sqrt(w[keep])
    compressed = scaled.conj().T @ h @ scaled
    ew, _ = _eigh_sym(compressed)
    return float(max(ew[-1], 0.0)) if ew.size else 0.0


def min_majorization_scale(a, c, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> MajorizationResult:
    """Least ``mu`` with ``C C* <= mu A A*`` in the semidefinite order.

    Finite exactly when the kernel of ``A A*`` sits inside the kernel of
    ``C C*``; the value then equals the squared operator norm of the reduced
    solution of ``AX = C`` whenever that equation is consistent.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    if a.shape[0] != c.shape[0]:
        raise ShapeMismatch("A and C must share their row count")
    mu = least_dominating_scale(a @ a.conj().T, c @ c.conj().T, tol)
    if mu is None:
        return MajorizationResult(finite=False, mu_star=None)
    return MajorizationResult(finite=True, mu_star=mu)
