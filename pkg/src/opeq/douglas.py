"""Solvability criteria and solution families for the operator equation AX = C.

Everything here works with finite complex matrices, where ranges are closed
and Moore-Penrose inverses always exist, so the closed-range hypotheses of
the underlying operator theory are automatic.  The genuinely infinite-
dimensional obstructions live in :mod:`opeq.projpair`, which models an
algebra of matrix-valued functions where they do occur.

The central objects: the reduced solution ``D = A^dagger C`` (the unique
solution whose range lies in the row space of ``A``), the row-space
projector ``P``, and three nested solution families::

    general    X = D + (I - P) Y                       (any Y)
    Hermitian  X = D + (I - P) D* + (I - P) Y (I - P)  (Y Hermitian)
    positive   X = X0 + (I - P) Z (I - P)              (Z PSD)

with ``X0 = D + (I - P) D* + (I - P) D* (D P)^dagger D (I - P)``.  The
positive family keeps its free parameter in the complement of ``P``: that is
the form under which ``A X = C`` holds for every PSD ``Z``.

Positive solvability admits two equivalent finite-dimensional tests, and
both are computed so they can cross-check each other: the least ``t`` with
``C C* <= t C A*`` is finite exactly when ``C A*`` is PSD and the ranges of
``D`` and ``D P`` coincide.  The range-equality test is authoritative; the
compressed-resolvent sequence ``T_n`` is a diagnostic whose norms converge
to the positive-family correction term when a positive solution exists and
grow linearly when it does not.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotASolution,
    NotHermitian,
    NotSolvable,
    NotSolvableHermitian,
    NotSolvablePositive,
    ParameterNotHermitian,
    ParameterNotPSD,
    PreconditionFailed,
    ShapeMismatch,
)
from .matcore import (
    DEFAULT_TOLERANCES,
    ToleranceConfig,
    as_matrix,
    hermitian_deviation,
    is_psd,
    least_dominating_scale,
    matrix_rank,
    pinv,
    range_inclusion_residual,
    range_projector,
    row_space_basis,
    spectral_norm,
)

__all__ = [
    "Verdict",
    "SolvabilityReport",
    "SolutionKind",
    "SolutionFamily",
    "LambdaDiagnostic",
    "DEFAULT_N_MAX",
    "reduced_solution",
    "general_solution",
    "recover_parameter",
    "solvability_report",
    "hermitian_solvability",
    "hermitian_solution",
    "positive_solvability",
    "positive_solution",
    "solution_family",
    "tn_sequence",
    "tn_matrix",
    "lambda_diagnostic",
    "block_psd_test",
]

# cap for the geometric schedule n = 1, 2, 4, ... used by the T_n diagnostic;
# large enough to separate convergence from linear growth, small enough that
# 1/n stays well above eigenvalue roundoff
DEFAULT_N_MAX = 2**40


class Verdict(enum.Enum):
    """Solvability classes, ordered: positive implies Hermitian implies general."""

    UNSOLVABLE = "Unsolvable"
    GENERAL = "SolvableGeneral"
    HERMITIAN = "SolvableHermitian"
    POSITIVE = "SolvablePositive"

    @property
    def level(self) -> int:
        return _VERDICT_LEVEL[self]

    def at_least(self, other: "Verdict") -> bool:
        return self.level >= other.level


_VERDICT_LEVEL = {
    Verdict.UNSOLVABLE: 0,
    Verdict.GENERAL: 1,
    Verdict.HERMITIAN: 2,
    Verdict.POSITIVE: 3,
}


@dataclass(frozen=True)
class SolvabilityReport:
    """Structured verdict for AX = C with the failing certificate when negative.

    ``t_min`` is the least ``t`` with ``C C* <= t C A*`` (None when no finite
    ``t`` exists).  ``lambda_estimate`` is the limit estimate of the
    compressed-resolvent norms ``||T_n||`` (None when they diverge or the
    diagnostic does not apply).  Both serialize as the string ``"inf"``.
    """

    range_ok: bool
    ca_star_hermitian: bool
    ca_star_psd: bool
    t_min: float | None
    dp_range_eq: bool
    lambda_estimate: float | None
    verdict: Verdict
    certificate: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is Verdict.POSITIVE and not (
            self.range_ok and self.ca_star_psd and self.dp_range_eq
        ):
            raise ValueError("positive verdict requires range, PSD and range-equality flags")
        if self.verdict.at_least(Verdict.HERMITIAN) and not (
            self.range_ok and self.ca_star_hermitian
        ):
            raise ValueError("Hermitian verdict requires range and Hermitian flags")

    def to_json(self) -> dict:
        return {
            "range_ok": self.range_ok,
            "ca_star_hermitian": self.ca_star_hermitian,
            "ca_star_psd": self.ca_star_psd,
            "t_min": self.t_min if self.t_min is not None else "inf",
            "dp_range_eq": self.dp_range_eq,
            "lambda_estimate": self.lambda_estimate
            if self.lambda_estimate is not None
            else "inf",
            "verdict": self.verdict.value,
            "certificate": self.certificate,
        }


class SolutionKind(enum.Enum):
    GENERAL = "General"
    HERMITIAN = "Hermitian"
    POSITIVE = "Positive"


@dataclass(frozen=True)
class SolutionFamily:
    """Reduced solution plus the projector data that parametrizes a family.

    ``x_zero`` is only populated for the positive family (the distinguished
    PSD member reached at parameter zero).
    """

    reduced: np.ndarray
    projector_p: np.ndarray
    complement: np.ndarray
    x_zero: np.ndarray | None
    kind: SolutionKind


@dataclass(frozen=True)
class LambdaDiagnostic:
    """Outcome of scanning ``||T_n||`` along a geometric schedule.

    ``estimate`` is the last norm on the schedule, or None when sustained
    geometric growth marks the sequence as divergent.  ``converged`` means
    the final doubling changed the norm by less than
    ``residual_atol * (1 + estimate)``.
    """

    converged: bool
    diverged: bool
    estimate: float | None
    n_max: int

    def __post_init__(self):
        if self.converged and self.diverged:
            raise ValueError("a sequence cannot both converge and diverge")
        if self.diverged != (self.estimate is None):
            raise ValueError("estimate must be absent exactly when divergent")


def _check_same_shape(a, c):
    if a.shape != c.shape:
        raise ShapeMismatch(
            f"A and C must have identical shape for a square solution space, "
            f"got {a.shape} and {c.shape}"
        )


def reduced_solution(a, c, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """The unique solution D of AX = C with range inside the row space of A.

    Computed as ``A^dagger C``.  Raises :class:`NotSolvable` carrying the
    range residual ``||A A^dagger C - C||`` when the equation is inconsistent.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    resid = range_inclusion_residual(a, c, tol)
    if resid > tol.residual_atol * max(1.0, spectral_norm(c)):
        raise NotSolvable(
            f"range of C is not contained in range of A (residual {resid:.3e})",
            certificate={"range_residual": resid},
        )
    return pinv(a, tol) @ c


def general_solution(a, c, y, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Member ``D + (I - P) Y`` of the general solution family."""
    a = as_matrix(a)
    c = as_matrix(c)
    y = as_matrix(y)
    d = reduced_solution(a, c, tol)
    if y.shape != d.shape:
        raise ShapeMismatch(f"parameter Y must have shape {d.shape}, got {y.shape}")
    b = row_space_basis(a, tol)
    ip = np.eye(a.shape[1], dtype=np.complex128) - b @ b.conj().T
    return d + ip @ y


def recover_parameter(a, c, x, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Invert the general parametrization: the Y with X = D + (I - P) Y.

    Returns ``Y = X - D``; feeding it back through :func:`general_solution`
    reproduces X, which makes the parametrization onto the full solution set.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    x = as_matrix(x)
    if x.shape != (a.shape[1], c.shape[1]):
        raise ShapeMismatch(f"X must have shape {(a.shape[1], c.shape[1])}, got {x.shape}")
    resid = spectral_norm(a @ x - c)
    if resid > tol.residual_atol * max(1.0, spectral_norm(c)):
        raise NotASolution(
            f"AX differs from C by {resid:.3e}", certificate={"equation_residual": resid}
        )
    return x - reduced_solution(a, c, tol)


def _range_equality(d, dp, tol):
    """Mutual projector residuals and rank comparison for R(D) = R(DP)."""
    rank_d = matrix_rank(d, tol)
    rank_dp = matrix_rank(dp, tol)
    proj_dp = range_projector(dp, tol)
    proj_d = range_projector(d, tol)
    resid_d = spectral_norm(d - proj_dp @ d)
    resid_dp = spectral_norm(dp - proj_d @ dp)
    ok = (
        rank_d == rank_dp
        and resid_d <= tol.residual_atol * max(1.0, spectral_norm(d))
        and resid_dp <= tol.residual_atol * max(1.0, spectral_norm(dp))
    )
    return ok, {
        "rank_d": rank_d,
        "rank_dp": rank_dp,
        "d_outside_range_dp": resid_d,
        "dp_outside_range_d": resid_dp,
    }


def _compressed_state(a, d, tol):
    """Eigendata of DP compressed to the row space of A, plus D(I - P) there.

    Returns ``(w, f, n)``: eigenvalues ``w`` of the compression, and ``f``
    such that ``T_n = f* diag(1 / (1/n + w)) f``.  Raises
    :class:`PreconditionFailed` unless the compression is Hermitian PSD
    within tolerance.
    """
    n = d.shape[0]
    b = row_space_basis(a, tol)
    if b.shape[1] == 0:
        return np.zeros(0), np.zeros((0, n), dtype=np.complex128), n
    comp = b.conj().T @ d @ b
    dev = float(np.linalg.norm(comp - comp.conj().T, 2))
    if dev > tol.residual_atol * max(1.0, float(np.linalg.norm(comp, 2))):
        raise PreconditionFailed(
            f"DP is not Hermitian on the row space (deviation {dev:.3e})",
            certificate={"dp_hermitian_deviation": dev},
        )
    w, vecs = np.linalg.eigh(0.5 * (comp + comp.conj().T))
    scale = max(1.0, float(np.max(np.abs(w))) if w.size else 0.0)
    if w.size and w[0] < -tol.psd_atol * scale:
        raise PreconditionFailed(
            f"DP is not PSD on the row space (eigenvalue {w[0]:.3e})",
            certificate={"dp_min_eigenvalue": float(w[0])},
        )
    w = np.clip(w, 0.0, None)
    e = d - d @ (b @ b.conj().T)  # D (I - P)
    f = vecs.conj().T @ (b.conj().T @ e)
    return w, f, n


def _tn_from_state(w, f, n_value, size):
    if w.size == 0:
        return np.zeros((size, size), dtype=np.complex128)
    inv = 1.0 / (1.0 / n_value + w)
    return (f.conj().T * inv) @ f


def _schedule(n_max: int):
    if not (isinstance(n_max, int) and n_max >= 1):
        raise ValueError(f"n_max must be a positive integer, got {n_max!r}")
    ns = [1]
    while ns[-1] * 2 <= n_max:
        ns.append(ns[-1] * 2)
    return ns


def tn_matrix(a, c, n_value: int, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Single compressed-resolvent term for one value of n (mainly for tests)."""
    a = as_matrix(a)
    c = as_matrix(c)
    d = reduced_solution(a, c, tol)
    w, f, size = _compressed_state(a, d, tol)
    return _tn_from_state(w, f, float(n_value), size)


def tn_sequence(a, c, n_max: int = DEFAULT_N_MAX, tol: ToleranceConfig = DEFAULT_TOLERANCES):
    """Norms ``||T_n||`` along the geometric schedule ``1, 2, 4, ..., n_max``.

    ``T_n = (I - P) D* (1/n + DP)^{-1}|_{row space} D (I - P)`` is PSD and
    nondecreasing in n.  Requires the equation to be consistent and the
    compression of DP to be Hermitian PSD; otherwise
    :class:`~opeq.errors.PreconditionFailed` (or
    :class:`~opeq.errors.NotSolvable`) is raised.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    d = reduced_solution(a, c, tol)
    w, f, size = _compressed_state(a, d, tol)
    out = []
    for n_value in _schedule(n_max):
        t = _tn_from_state(w, f, float(n_value), size)
        norm = float(np.linalg.norm(t, 2)) if t.size else 0.0
        out.append((n_value, norm))
    return out


def lambda_diagnostic(
    a, c, n_max: int = DEFAULT_N_MAX, tol: ToleranceConfig = DEFAULT_TOLERANCES
) -> LambdaDiagnostic:
    """Classify sup_n ||T_n|| as finite or divergent from the schedule norms.

    Convergence is declared when the final doubling moves the norm by less
    than ``residual_atol * (1 + estimate)``; divergence when, absent that,
    each of the last three doublings grew the norm by at least the factor
    ``1 + psd_atol`` (linear growth in n doubles it).  A uniform bound on the
    compressed resolvent norms would also certify finiteness; for matrices
    that is exactly invertibility of DP on the range of DP, i.e. the range
    equality R(D) = R(DP), which remains the authoritative test.
    """
    norms = [norm for _, norm in tn_sequence(a, c, n_max, tol)]
    estimate = norms[-1]
    converged = (
        len(norms) >= 2 and abs(norms[-1] - norms[-2]) < tol.residual_atol * (1.0 + estimate)
    )
    diverged = False
    if not converged and len(norms) >= 4:
        tail = norms[-4:]
        diverged = all(
            tail[k + 1] >= (1.0 + tol.psd_atol) * tail[k] and tail[k + 1] > 0.0
            for k in range(3)
        )
    return LambdaDiagnostic(
        converged=converged,
        diverged=diverged,
        estimate=None if diverged else estimate,
        n_max=int(n_max),
    )


def solvability_report(
    a,
    c,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
    n_max: int = DEFAULT_N_MAX,
) -> SolvabilityReport:
    """Full solvability classification of AX = C over square parameter space.

    Populates every criterion: range inclusion, Hermitian-ness and
    positivity of ``C A*``, the least majorization scale ``t_min`` with
    ``C C* <= t C A*``, the range equality ``R(D) = R(DP)``, and the ``T_n``
    limit estimate.  The verdict is decided by the exact finite-dimensional
    tests (range, PSD, range equality); ``t_min`` offers the independent
    route, finite precisely when those hold, so the two can be checked
    against each other.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    _check_same_shape(a, c)

    c_norm = spectral_norm(c)
    range_residual = range_inclusion_residual(a, c, tol)
    range_ok = range_residual <= tol.residual_atol * max(1.0, c_norm)

    ca = c @ a.conj().T
    ca_dev = hermitian_deviation(ca)
    ca_hermitian = ca_dev <= tol.residual_atol
    ca_psd = is_psd(ca, tol)

    t_min = least_dominating_scale(ca, c @ c.conj().T, tol) if ca_psd else None

    d = pinv(a, tol) @ c
    b = row_space_basis(a, tol)
    dp = (d @ b) @ b.conj().T
    dp_range_eq, range_detail = _range_equality(d, dp, tol)

    lam = None
    if range_ok and ca_psd:
        try:
            diag = lambda_diagnostic(a, c, n_max, tol)
        except PreconditionFailed:
            diag = None
        if diag is not None:
            lam = diag.estimate

    if not range_ok:
        verdict = Verdict.UNSOLVABLE
    elif ca_psd and dp_range_eq:
        verdict = Verdict.POSITIVE
    elif ca_hermitian:
        verdict = Verdict.HERMITIAN
    else:
        verdict = Verdict.GENERAL

    certificate = {}
    if verdict is not Verdict.POSITIVE:
        failed = []
        if not range_ok:
            failed.append("range_inclusion")
            certificate["range_residual"] = range_residual
        if not ca_hermitian:
            failed.append("ca_star_hermitian")
            certificate["ca_star_deviation"] = ca_dev
        if not ca_psd:
            failed.append("ca_star_psd")
        if not dp_range_eq:
            failed.append("dp_range_eq")
            certificate.update(range_detail)
        certificate["failed_conditions"] = failed

    return SolvabilityReport(
        range_ok=range_ok,
        ca_star_hermitian=ca_hermitian,
        ca_star_psd=ca_psd,
        t_min=t_min,
        dp_range_eq=dp_range_eq,
        lambda_estimate=lam,
        verdict=verdict,
        certificate=certificate,
    )


def hermitian_solvability(
    a, c, tol: ToleranceConfig = DEFAULT_TOLERANCES
) -> SolvabilityReport:
    """Does AX = C admit a Hermitian solution?  (range inclusion and CA* Hermitian)."""
    return solvability_report(a, c, tol)


def positive_solvability(
    a, c, tol: ToleranceConfig = DEFAULT_TOLERANCES, n_max: int = DEFAULT_N_MAX
) -> SolvabilityReport:
    """Does AX = C admit a PSD solution?  (adds CA* PSD and R(D) = R(DP))."""
    return solvability_report(a, c, tol, n_max)


def hermitian_solution(a, c, y, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Member ``D + (I-P) D* + (I-P) Y (I-P)`` of the Hermitian family.

    Y must be Hermitian; the output is then Hermitian and solves AX = C.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    y = as_matrix(y)
    _check_same_shape(a, c)
    if y.shape != (a.shape[1], a.shape[1]):
        raise ShapeMismatch(f"parameter Y must be {a.shape[1]}x{a.shape[1]}, got {y.shape}")

    range_residual = range_inclusion_residual(a, c, tol)
    if range_residual > tol.residual_atol * max(1.0, spectral_norm(c)):
        raise NotSolvableHermitian(
            "no solutions at all: range inclusion fails",
            certificate={"failed_conditions": ["range_inclusion"], "range_residual": range_residual},
        )
    ca_dev = hermitian_deviation(c @ a.conj().T)
    if ca_dev > tol.residual_atol:
        raise NotSolvableHermitian(
            f"C A* is not Hermitian (deviation {ca_dev:.3e})",
            certificate={"failed_conditions": ["ca_star_hermitian"], "ca_star_deviation": ca_dev},
        )
    y_dev = hermitian_deviation(y)
    if y_dev > tol.residual_atol:
        raise ParameterNotHermitian(
            f"parameter Y must be Hermitian (deviation {y_dev:.3e})",
            certificate={"parameter_deviation": y_dev},
        )

    d = pinv(a, tol) @ c
    b = row_space_basis(a, tol)
    ip = np.eye(a.shape[1], dtype=np.complex128) - b @ b.conj().T
    return d + ip @ d.conj().T + ip @ y @ ip


def _x_zero(d, b, tol):
    """Distinguished PSD member: D + (I-P) D* + (I-P) D* (DP)^dagger D (I-P)."""
    ip = np.eye(d.shape[0], dtype=np.complex128) - b @ b.conj().T
    dp = d - d @ ip
    return d + ip @ d.conj().T + ip @ d.conj().T @ pinv(dp, tol) @ (d @ ip)


def positive_solution(a, c, z, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """Member ``X0 + (I-P) Z (I-P)`` of the positive family.

    Z must be PSD.  The free part lives in the complement of the row-space
    projector, which is what keeps ``A X = C`` true for every admissible Z.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    z = as_matrix(z)
    _check_same_shape(a, c)
    if z.shape != (a.shape[1], a.shape[1]):
        raise ShapeMismatch(f"parameter Z must be {a.shape[1]}x{a.shape[1]}, got {z.shape}")

    report = positive_solvability(a, c, tol)
    if report.verdict is not Verdict.POSITIVE:
        raise NotSolvablePositive(
            f"no PSD solution exists (verdict {report.verdict.value})",
            certificate=report.certificate,
        )
    if not is_psd(z, tol):
        raise ParameterNotPSD("parameter Z must be positive semidefinite")

    d = pinv(a, tol) @ c
    b = row_space_basis(a, tol)
    ip = np.eye(a.shape[1], dtype=np.complex128) - b @ b.conj().T
    return _x_zero(d, b, tol) + ip @ z @ ip


def solution_family(
    a,
    c,
    kind: SolutionKind = SolutionKind.GENERAL,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> SolutionFamily:
    """Bundle the reduced solution with its projector data for one family kind."""
    a = as_matrix(a)
    c = as_matrix(c)
    d = reduced_solution(a, c, tol)
    b = row_space_basis(a, tol)
    p = b @ b.conj().T
    identity = np.eye(a.shape[1], dtype=np.complex128)
    x_zero = None
    if kind is not SolutionKind.GENERAL:
        _check_same_shape(a, c)
        ca_dev = hermitian_deviation(c @ a.conj().T)
        if ca_dev > tol.residual_atol:
            raise NotSolvableHermitian(
                f"C A* is not Hermitian (deviation {ca_dev:.3e})",
                certificate={"ca_star_deviation": ca_dev},
            )
    if kind is SolutionKind.POSITIVE:
        report = positive_solvability(a, c, tol)
        if report.verdict is not Verdict.POSITIVE:
            raise NotSolvablePositive(
                f"no PSD solution exists (verdict {report.verdict.value})",
                certificate=report.certificate,
            )
        x_zero = _x_zero(d, b, tol)
    return SolutionFamily(
        reduced=d, projector_p=p, complement=identity - p, x_zero=x_zero, kind=kind
    )


def block_psd_test(a11, a12, a22, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """Positivity of the Hermitian block matrix ``[[A11, A12], [A12*, A22]]``.

    Three conditions, jointly equivalent to positivity of the assembled
    matrix: A11 PSD, the columns of A12 inside the range of A11, and the
    Schur complement ``A22 - A12* A11^dagger A12`` PSD.
    """
    a11 = as_matrix(a11)
    a12 = as_matrix(a12)
    a22 = as_matrix(a22)
    if a11.shape[0] != a11.shape[1] or a22.shape[0] != a22.shape[1]:
        raise ShapeMismatch("diagonal blocks must be square")
    if a12.shape != (a11.shape[0], a22.shape[0]):
        raise ShapeMismatch(
            f"off-diagonal block must be {(a11.shape[0], a22.shape[0])}, got {a12.shape}"
        )
    for name, block in (("A11", a11), ("A22", a22)):
        dev = hermitian_deviation(block)
        if dev > tol.residual_atol:
            raise NotHermitian(
                f"{name} must be Hermitian (deviation {dev:.3e})",
                certificate={"block": name, "deviation": dev},
            )
    if not is_psd(a11, tol):
        return False
    a11_pinv = pinv(a11, tol)
    range_resid = spectral_norm(a11 @ (a11_pinv @ a12) - a12)
    if range_resid > tol.residual_atol * max(1.0, spectral_norm(a12)):
        return False
    schur = a22 - a12.conj().T @ a11_pinv @ a12
    return is_psd(schur, tol)
