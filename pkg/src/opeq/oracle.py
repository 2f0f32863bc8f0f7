"""Independent brute-force verifiers and the randomized property suite.

Nothing here shares a code path with the decision logic it checks: the
least-squares route goes through normal equations instead of the SVD
pseudoinverse, positivity is probed with random quadratic forms, and PSD
solutions are hunted by sampling the Hermitian family rather than by the
closed-form construction.  Absence of a search hit is evidence, never proof.

All randomness flows from a named generator (PCG64) with an explicit seed;
every trial derives its own sub-seed deterministically from the seed and the
trial index, so any reported failure is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import douglas
from .errors import NotHermitian, NotSolvable, ShapeMismatch
from .matcore import (
    DEFAULT_TOLERANCES,
    ToleranceConfig,
    adjoint,
    as_matrix,
    hermitian_deviation,
    is_psd,
    matrix_rank,
    matrix_to_json,
    min_majorization_scale,
    pinv,
    polar_partial_isometry,
    range_inclusion,
    row_space_basis,
    row_space_projector,
    spectral_norm,
    sqrt_psd,
)

__all__ = [
    "GENERATOR_NAME",
    "DEFAULT_SEED",
    "TrialSpec",
    "DouglasReport",
    "lsq_solve",
    "psd_quadratic_probe",
    "positive_search",
    "douglas_properties_check",
    "property_suite",
    "PROPERTY_NAMES",
]

GENERATOR_NAME = "PCG64"
DEFAULT_SEED = 20514


@dataclass(frozen=True)
class TrialSpec:
    """How to drive a randomized run: dimensions, rank policy, count, seed."""

    dim_min: int = 1
    dim_max: int = 6
    rank_policy: str = "random"
    trials: int = 500
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not (1 <= self.dim_min <= self.dim_max <= 8):
            raise ValueError("dimensions must satisfy 1 <= dim_min <= dim_max <= 8")
        if self.rank_policy not in ("full", "deficient", "random"):
            raise ValueError(f"unknown rank policy {self.rank_policy!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise ValueError("seed must be a nonnegative integer")


def _sub_rng(seed: int, *indices: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *indices])))


# ---------------------------------------------------------------------------
# independent verifiers


def lsq_solve(a, c) -> np.ndarray:
    """Least-squares solution of AX = C through the normal equations.

    Solves ``A* A X = A* C`` by eigendecomposition of ``A* A`` with a fixed
    relative cutoff; deliberately avoids the SVD pseudoinverse route.  When
    the equation is consistent this is the reduced solution; when it is not,
    the residual ``||A X - C||`` stays strictly positive.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    if a.shape[0] != c.shape[0]:
        raise ShapeMismatch("A and C must share their row count")
    gram = a.conj().T @ a
    rhs = a.conj().T @ c
    w, v = np.linalg.eigh(0.5 * (gram + gram.conj().T))
    wmax = float(w[-1]) if w.size else 0.0
    inv = np.zeros_like(w)
    keep = w > 1e-12 * wmax
    inv[keep] = 1.0 / w[keep]
    return (v * inv) @ (v.conj().T @ rhs)


def psd_quadratic_probe(m, probes: int = 1000, seed: int = DEFAULT_SEED) -> bool:
    """Monte Carlo positivity probe: random vectors x against Re<Mx, x> >= 0.

    A False answer exhibits a witness vector and is conclusive; True only
    says no witness was found among the probes (one-sided evidence).
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeMismatch("positivity is only defined for square matrices")
    dev = hermitian_deviation(m)
    if dev > 1e-8 * max(1.0, spectral_norm(m)):
        raise NotHermitian(f"probe needs a Hermitian matrix (deviation {dev:.3e})")
    if probes < 1:
        raise ValueError("probes must be at least 1")
    rng = _sub_rng(seed, 0)
    n = m.shape[0]
    xs = rng.standard_normal((probes, n)) + 1j * rng.standard_normal((probes, n))
    quad = np.einsum("pi,ij,pj->p", xs.conj(), m, xs).real
    norms = np.einsum("pi,pi->p", xs.conj(), xs).real
    floor = -1e-10 * max(1.0, spectral_norm(m))
    return bool(np.all(quad >= floor * norms))


def positive_search(
    a,
    c,
    budget: int = 1000,
    seed: int = DEFAULT_SEED,
    tol: ToleranceConfig = DEFAULT_TOLERANCES,
) -> np.ndarray | None:
    """Randomized hunt for a PSD solution of AX = C inside the Hermitian family.

    Samples ``Y = s G* G`` (Gaussian G, slowly growing scale s), forms
    ``X = D + (I-P) D* + (I-P) Y (I-P)`` and keeps the first X that passes
    the PSD and residual tests.  Returns None when the budget is exhausted;
    that is evidence of unsolvability, not proof.
    """
    a = as_matrix(a)
    c = as_matrix(c)
    if a.shape != c.shape:
        raise ShapeMismatch("A and C must have identical shape")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if not range_inclusion(a, c, tol):
        return None
    ca_dev = hermitian_deviation(c @ a.conj().T)
    if ca_dev > tol.residual_atol:
        return None

    n = a.shape[1]
    d = pinv(a, tol) @ c
    b = row_space_basis(a, tol)
    ip = np.eye(n, dtype=np.complex128) - b @ b.conj().T
    base = d + ip @ d.conj().T

    rng = _sub_rng(seed, 1)
    chunk = 256
    drawn = 0
    while drawn < budget:
        take = min(chunk, budget - drawn)
        g = rng.standard_normal((take, n, n)) + 1j * rng.standard_normal((take, n, n))
        # gentle scale ladder, capped: blowing the parameter up without bound
        # would eventually slip an indefinite matrix of huge norm past any
        # norm-relative eigenvalue floor, turning absence-evidence into noise
        scales = 2.0 ** np.minimum((drawn + np.arange(take)) // 256, 6)
        y = np.einsum("kij,kil->kjl", g.conj(), g) * scales[:, None, None]
        x = base[None, :, :] + ip[None, :, :] @ y @ ip[None, :, :]
        x = 0.5 * (x + np.conj(np.transpose(x, (0, 2, 1))))
        eigs = np.linalg.eigvalsh(x)
        scale = np.maximum(1.0, np.max(np.abs(eigs), axis=1))
        hits = np.nonzero(eigs[:, 0] >= -tol.psd_atol * scale)[0]
        for k in hits:
            candidate = x[k]
            resid = spectral_norm(a @ candidate - c)
            if resid <= tol.residual_atol * max(1.0, spectral_norm(c)) and is_psd(
                candidate, tol
            ):
                return candidate
        drawn += take
    return None


@dataclass(frozen=True)
class DouglasReport:
    """Checks of the three classical properties of the reduced solution D.

    norm identity: ``||D||^2`` equals the least majorization scale;
    kernel match: ``N(D) = N(C)`` through mutual projector residuals;
    row-space location: ``(I - P) D = 0``.
    """

    mu_star: float | None
    d_norm_sq: float
    norm_identity_ok: bool
    kernel_match_ok: bool
    rowspace_ok: bool
    kernel_residuals: tuple[float, float]
    rowspace_residual: float

    @property
    def all_ok(self) -> bool:
        return self.norm_identity_ok and self.kernel_match_ok and self.rowspace_ok

    def to_json(self) -> dict:
        return {
            "mu_star": self.mu_star if self.mu_star is not None else "inf",
            "d_norm_sq": self.d_norm_sq,
            "norm_identity_ok": self.norm_identity_ok,
            "kernel_match_ok": self.kernel_match_ok,
            "rowspace_ok": self.rowspace_ok,
            "kernel_residuals": list(self.kernel_residuals),
            "rowspace_residual": self.rowspace_residual,
            "all_ok": self.all_ok,
        }


def douglas_properties_check(
    a, c, tol: ToleranceConfig = DEFAULT_TOLERANCES
) -> DouglasReport:
    """Verify the norm identity, kernel equality and row-space location of D."""
    a = as_matrix(a)
    c = as_matrix(c)
    d = douglas.reduced_solution(a, c, tol)  # raises NotSolvable if inconsistent

    maj = min_majorization_scale(a, c, tol)
    d_norm_sq = spectral_norm(d) ** 2
    norm_ok = maj.finite and abs(maj.mu_star - d_norm_sq) <= 1e-8 * max(1.0, d_norm_sq)

    proj_c = row_space_projector(c, tol)
    proj_d = row_space_projector(d, tol)
    resid_dc = spectral_norm(proj_d - proj_c @ proj_d)
    resid_cd = spectral_norm(proj_c - proj_d @ proj_c)
    kernel_ok = resid_dc <= 1e-8 and resid_cd <= 1e-8

    proj_a = row_space_projector(a, tol)
    rowspace_resid = spectral_norm(d - proj_a @ d)
    rowspace_ok = rowspace_resid < 1e-10 * max(1.0, spectral_norm(d))

    return DouglasReport(
        mu_star=maj.mu_star,
        d_norm_sq=d_norm_sq,
        norm_identity_ok=norm_ok,
        kernel_match_ok=kernel_ok,
        rowspace_ok=rowspace_ok,
        kernel_residuals=(resid_dc, resid_cd),
        rowspace_residual=rowspace_resid,
    )


# ---------------------------------------------------------------------------
# randomized instance generators (controlled singular spectra so the suite's
# 1e-8 / 1e-9 assertions sit far above roundoff)


def _unitary(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(g)
    diag = np.diag(r).copy()
    diag[diag == 0] = 1.0
    return q * (diag / np.abs(diag))


def _pick_rank(rng, n, policy):
    if policy == "full" or n == 1:
        return n
    if policy == "deficient":
        return int(rng.integers(1, n))
    return int(rng.integers(1, n + 1))


def random_operator(rng, rows, cols, rank=None):
    """Random matrix with singular values in [0.3, 2] at the requested rank."""
    full = min(rows, cols)
    if rank is None:
        rank = full
    rank = max(0, min(rank, full))
    if rank == 0:
        return np.zeros((rows, cols), dtype=np.complex128)
    u = _unitary(rng, rows)[:, :rank]
    v = _unitary(rng, cols)[:, :rank]
    sing = rng.uniform(0.3, 2.0, size=rank)
    return (u * sing) @ v.conj().T


def random_hermitian(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (g + g.conj().T)


def random_psd(rng, n, rank=None):
    """Random PSD matrix with nonzero eigenvalues in [0.3, 2]."""
    if rank is None:
        rank = n
    rank = max(0, min(rank, n))
    u = _unitary(rng, n)
    eigs = np.zeros(n)
    eigs[:rank] = rng.uniform(0.3, 2.0, size=rank)
    return (u * eigs) @ u.conj().T


def _hermitian_but_never_positive(rng, n):
    """Consistent pair with CA* PSD yet no PSD solution (needs n >= 3).

    A random-basis copy of the pattern A = diag(a, b, 0), C = a E11 + b E23:
    the reduced solution has rank 2 while its compression to the row space
    has rank 1, so the range equality fails.
    """
    a_diag = np.zeros((n, n), dtype=np.complex128)
    c_core = np.zeros((n, n), dtype=np.complex128)
    scale_1, scale_2 = rng.uniform(0.3, 2.0, size=2)
    a_diag[0, 0] = scale_1
    a_diag[1, 1] = scale_2
    c_core[0, 0] = scale_1
    c_core[1, 2] = scale_2
    for extra in range(3, n):
        if rng.random() < 0.5:
            val = rng.uniform(0.3, 2.0)
            a_diag[extra, extra] = val
            c_core[extra, extra] = val
    u = _unitary(rng, n)
    v = _unitary(rng, n)
    return u @ a_diag @ v.conj().T, u @ c_core @ v.conj().T


def _consistent_pair(rng, spec: TrialSpec, flavor: str):
    """Dimensions and factors for one randomized AX = C instance."""
    n = int(rng.integers(spec.dim_min, spec.dim_max + 1))
    rank = _pick_rank(rng, n, spec.rank_policy)
    a = random_operator(rng, n, n, rank)
    if flavor == "general":
        w = random_operator(rng, n, n)
        return a, a @ w, w
    if flavor == "hermitian":
        h = random_hermitian(rng, n)
        return a, a @ h, h
    if flavor == "positive":
        x0 = random_psd(rng, n, rank=_pick_rank(rng, n, "random"))
        return a, a @ x0, x0
    raise ValueError(flavor)


# ---------------------------------------------------------------------------
# one check per named property; return None on pass, failure detail on fail


def _instance_json(**mats):
    return {name: matrix_to_json(m) for name, m in mats.items()}


def _fail(detail, **mats):
    return {"detail": detail, "instance": _instance_json(**mats)}


def _check_penrose(rng, spec, tol):
    rows = int(rng.integers(spec.dim_min, spec.dim_max + 1))
    cols = int(rng.integers(spec.dim_min, spec.dim_max + 1))
    m = random_operator(rng, rows, cols, _pick_rank(rng, min(rows, cols), spec.rank_policy))
    mp = pinv(m, tol)
    scale = max(1.0, spectral_norm(m))
    checks = [
        ("M Mp M = M", spectral_norm(m @ mp @ m - m), tol.residual_atol * scale),
        ("Mp M Mp = Mp", spectral_norm(mp @ m @ mp - mp), tol.residual_atol * scale),
        ("M Mp Hermitian", hermitian_deviation(m @ mp), tol.residual_atol),
        ("Mp M Hermitian", hermitian_deviation(mp @ m), tol.residual_atol),
    ]
    for label, resid, bound in checks:
        if resid > bound:
            return _fail(f"{label} violated by {resid:.3e}", m=m)
    return None


def _check_sqrt_round_trip(rng, spec, tol):
    n = int(rng.integers(spec.dim_min, spec.dim_max + 1))
    m = random_psd(rng, n, rank=_pick_rank(rng, n, spec.rank_policy))
    s = sqrt_psd(m, tol)
    resid = spectral_norm(s @ s - m)
    if resid > 1e-9 * max(1.0, spectral_norm(m)):
        return _fail(f"sqrt round trip off by {resid:.3e}", m=m)
    if not is_psd(s, tol):
        return _fail("square root is not PSD", m=m)
    return None


def _check_polar(rng, spec, tol):
    rows = int(rng.integers(spec.dim_min, spec.dim_max + 1))
    cols = int(rng.integers(spec.dim_min, spec.dim_max + 1))
    a = random_operator(rng, rows, cols, _pick_rank(rng, min(rows, cols), spec.rank_policy))
    u = polar_partial_isometry(a, tol)
    scale = max(1.0, spectral_norm(a))
    if spectral_norm(u @ sqrt_psd(a.conj().T @ a, tol) - a) > tol.residual_atol * scale:
        return _fail("U |A| does not reproduce A", a=a)
    if spectral_norm(u @ u.conj().T @ u - u) > tol.residual_atol:
        return _fail("U is not a partial isometry", a=a)
    p = u.conj().T @ u
    if hermitian_deviation(p) > tol.residual_atol or spectral_norm(p @ p - p) > tol.residual_atol:
        return _fail("U*U is not an orthogonal projection", a=a)
    if matrix_rank(p, tol) != matrix_rank(a, tol):
        return _fail("initial projection has wrong rank", a=a)
    return None


def _check_consistency_and_lsq(rng, spec, tol):
    a, c, _ = _consistent_pair(rng, spec, "general")
    if not range_inclusion(a, c, tol):
        return _fail("range inclusion rejected a consistent pair", a=a, c=c)
    d = douglas.reduced_solution(a, c, tol)
    x = lsq_solve(a, c)
    gap = spectral_norm(d - x)
    if gap > 1e-8 * max(1.0, spectral_norm(d)):
        return _fail(f"normal-equation route disagrees by {gap:.3e}", a=a, c=c)
    return None


def _check_parametrization(rng, spec, tol):
    a, c, _ = _consistent_pair(rng, spec, "general")
    n = a.shape[1]
    y0 = random_operator(rng, n, c.shape[1])
    x = douglas.general_solution(a, c, y0, tol)
    if spectral_norm(a @ x - c) > tol.residual_atol * max(1.0, spectral_norm(c)):
        return _fail("family member does not solve the equation", a=a, c=c)
    y = douglas.recover_parameter(a, c, x, tol)
    x_back = douglas.general_solution(a, c, y, tol)
    gap = spectral_norm(x_back - x)
    if gap > 1e-9 * max(1.0, spectral_norm(x)):
        return _fail(f"parameter round trip off by {gap:.3e}", a=a, c=c)
    return None


def _hermitian_flags(a, c, tol):
    d = pinv(a, tol) @ c
    b = row_space_basis(a, tol)
    dp = (d @ b) @ b.conj().T
    ca = c @ a.conj().T
    return (
        hermitian_deviation(dp) <= tol.residual_atol,
        hermitian_deviation(ca) <= tol.residual_atol,
        is_psd(dp, tol),
        is_psd(ca, tol),
    )


def _check_hermitian_criterion(rng, spec, tol):
    flavor = ("hermitian", "general", "positive")[int(rng.integers(3))]
    a, c, _ = _consistent_pair(rng, spec, flavor)
    dp_herm, ca_herm, dp_psd, ca_psd = _hermitian_flags(a, c, tol)
    if dp_herm != ca_herm:
        return _fail("Hermitian-ness of DP and CA* disagree", a=a, c=c)
    if dp_psd != ca_psd:
        return _fail("positivity of DP and CA* disagree", a=a, c=c)
    report = douglas.hermitian_solvability(a, c, tol)
    if flavor == "hermitian" and not report.verdict.at_least(douglas.Verdict.HERMITIAN):
        return _fail("pair built from a Hermitian factor judged non-Hermitian", a=a, c=c)
    if report.verdict.at_least(douglas.Verdict.HERMITIAN):
        y = random_hermitian(rng, a.shape[1])
        x = douglas.hermitian_solution(a, c, y, tol)
        scale = max(1.0, spectral_norm(x))
        if hermitian_deviation(x) > 1e-9 * scale:
            return _fail("emitted solution is not Hermitian", a=a, c=c)
        if spectral_norm(a @ x - c) > 1e-9 * max(1.0, spectral_norm(c)):
            return _fail("emitted Hermitian member does not solve the equation", a=a, c=c)
    return None


def _check_positive_criteria(rng, spec, tol):
    pick = int(rng.integers(4))
    if pick == 3 and spec.dim_max >= 3:
        lo = max(3, spec.dim_min)
        n = int(rng.integers(lo, spec.dim_max + 1))
        a, c = _hermitian_but_never_positive(rng, n)
        expect = "blocked"
    else:
        flavor = ("positive", "hermitian", "general")[pick % 3]
        a, c = _consistent_pair(rng, spec, flavor)[:2]
        expect = "positive" if flavor == "positive" else None
    report = douglas.positive_solvability(a, c, tol)
    t_finite = report.t_min is not None
    exact = report.ca_star_psd and report.dp_range_eq
    if t_finite != exact:
        return _fail(
            f"majorization route (finite={t_finite}) disagrees with "
            f"range-equality route (satisfied={exact})",
            a=a,
            c=c,
        )
    if expect == "positive":
        if report.verdict is not douglas.Verdict.POSITIVE:
            return _fail("pair built from a PSD factor judged not positively solvable", a=a, c=c)
        z = random_psd(rng, a.shape[1], rank=_pick_rank(rng, a.shape[1], "random"))
        x = douglas.positive_solution(a, c, z, tol)
        if not is_psd(x, tol):
            return _fail("emitted member of the positive family is not PSD", a=a, c=c)
        if spectral_norm(a @ x - c) > tol.residual_atol * max(1.0, spectral_norm(c)):
            return _fail("emitted positive member does not solve the equation", a=a, c=c)
        if report.t_min > spectral_norm(x) + 1e-8:
            return _fail("t_min exceeds the norm of an emitted positive solution", a=a, c=c)
    if expect == "blocked":
        if report.verdict is not douglas.Verdict.HERMITIAN:
            return _fail(
                f"range-deficient pattern misclassified as {report.verdict.value}", a=a, c=c
            )
        if report.dp_range_eq or report.t_min is not None:
            return _fail("range-deficient pattern passed a positivity route", a=a, c=c)
    return None


def _check_block_positivity(rng, spec, tol):
    d1 = int(rng.integers(1, min(4, spec.dim_max) + 1))
    d2 = int(rng.integers(1, min(4, spec.dim_max) + 1))
    if rng.random() < 0.5:
        full = random_psd(rng, d1 + d2, rank=_pick_rank(rng, d1 + d2, "random"))
    else:
        full = np.zeros((d1 + d2, d1 + d2), dtype=np.complex128)
        full[:d1, :d1] = random_hermitian(rng, d1)
        full[d1:, d1:] = random_hermitian(rng, d2)
        off = rng.standard_normal((d1, d2)) + 1j * rng.standard_normal((d1, d2))
        full[:d1, d1:] = off
        full[d1:, :d1] = off.conj().T
    a11, a12, a22 = full[:d1, :d1], full[:d1, d1:], full[d1:, d1:]
    by_blocks = douglas.block_psd_test(a11, a12, a22, tol)
    by_eigen = is_psd(full, tol)
    if by_blocks != by_eigen:
        return _fail(
            f"block conditions say {by_blocks}, assembled eigenvalues say {by_eigen}",
            a11=a11,
            a12=a12,
            a22=a22,
        )
    return None


def _check_douglas_properties(rng, spec, tol):
    flavor = ("general", "hermitian", "positive")[int(rng.integers(3))]
    a, c, _ = _consistent_pair(rng, spec, flavor)
    report = douglas_properties_check(a, c, tol)
    if not report.all_ok:
        return _fail(
            f"reduced-solution properties failed: norm={report.norm_identity_ok} "
            f"kernel={report.kernel_match_ok} rowspace={report.rowspace_ok}",
            a=a,
            c=c,
        )
    return None


def _check_tn_lambda(rng, spec, tol):
    if spec.dim_max >= 3 and rng.random() < 0.4:
        lo = max(3, spec.dim_min)
        n = int(rng.integers(lo, spec.dim_max + 1))
        a, c = _hermitian_but_never_positive(rng, n)
    else:
        a, c = _consistent_pair(rng, spec, "positive")[:2]

    seq = douglas.tn_sequence(a, c, n_max=16, tol=tol)
    prev = None
    for n_value, _ in seq:
        t = douglas.tn_matrix(a, c, n_value, tol)
        eigs = np.linalg.eigvalsh(0.5 * (t + t.conj().T))
        scale = max(1.0, float(np.max(np.abs(eigs))) if eigs.size else 0.0)
        if eigs.size and eigs[0] < -tol.psd_atol * scale:
            return _fail(f"T_{n_value} is not PSD", a=a, c=c)
        if prev is not None:
            diff = np.linalg.eigvalsh(0.5 * ((t - prev) + (t - prev).conj().T))
            if diff.size and diff[0] < -tol.psd_atol * scale:
                return _fail(f"T_n not nondecreasing at n={n_value}", a=a, c=c)
        prev = t

    diag = douglas.lambda_diagnostic(a, c, tol=tol)
    report = douglas.positive_solvability(a, c, tol)
    if report.dp_range_eq and not diag.converged:
        return _fail("ranges match but the T_n norms did not settle", a=a, c=c)
    if not report.dp_range_eq and not diag.diverged:
        return _fail("ranges differ but the T_n norms did not diverge", a=a, c=c)
    return None


def _check_positive_search(rng, spec, tol):
    flavor = ("positive", "hermitian")[int(rng.integers(2))]
    a, c, _ = _consistent_pair(rng, spec, flavor)
    sub_seed = int(rng.integers(2**32))
    found = positive_search(a, c, budget=384, seed=sub_seed, tol=tol)
    if found is None:
        return None
    report = douglas.positive_solvability(a, c, tol)
    if report.verdict is not douglas.Verdict.POSITIVE:
        return _fail("search produced a PSD solution on a pair judged unsolvable", a=a, c=c)
    if not is_psd(found, tol):
        return _fail("search returned a non-PSD matrix", a=a, c=c)
    if spectral_norm(a @ found - c) > tol.residual_atol * max(1.0, spectral_norm(c)):
        return _fail("search returned a non-solution", a=a, c=c)
    return None


_PROPERTY_CHECKS = [
    ("penrose_identities", _check_penrose),
    ("sqrt_psd_round_trip", _check_sqrt_round_trip),
    ("polar_consistency", _check_polar),
    ("consistency_and_lsq_agreement", _check_consistency_and_lsq),
    ("parametrization_completeness", _check_parametrization),
    ("hermitian_criterion_transfer", _check_hermitian_criterion),
    ("positive_criteria_agreement", _check_positive_criteria),
    ("block_positivity_vs_eigen", _check_block_positivity),
    ("reduced_solution_properties", _check_douglas_properties),
    ("tn_monotone_lambda_match", _check_tn_lambda),
    ("positive_search_consistency", _check_positive_search),
]

PROPERTY_NAMES = [name for name, _ in _PROPERTY_CHECKS]


def property_suite(spec: TrialSpec, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> dict:
    """Run every named property for ``spec.trials`` seeded trials each.

    Returns a JSON-ready report with per-property pass counts and the first
    failing instance (serialized matrices) when there is one.  Identical
    specs produce identical reports.
    """
    properties = {}
    violations = 0
    for prop_index, (name, check) in enumerate(_PROPERTY_CHECKS):
        failures = 0
        first_failure = None
        for trial in range(spec.trials):
            rng = _sub_rng(spec.seed, prop_index, trial)
            outcome = check(rng, spec, tol)
            if outcome is not None:
                failures += 1
                if first_failure is None:
                    first_failure = {"trial": trial, **outcome}
        violations += failures
        properties[name] = {
            "trials": spec.trials,
            "failures": failures,
            "first_failure": first_failure,
        }
    return {
        "generator": GENERATOR_NAME,
        "seed": spec.seed,
        "trials_per_property": spec.trials,
        "dim_min": spec.dim_min,
        "dim_max": spec.dim_max,
        "rank_policy": spec.rank_policy,
        "properties": properties,
        "total_trials": spec.trials * len(_PROPERTY_CHECKS),
        "violations": violations,
    }
