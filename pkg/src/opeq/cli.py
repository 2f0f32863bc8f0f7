"""Command-line front end.

Subcommands::

    solve     --a FILE --c FILE [--mode general|hermitian|positive] [--y FILE | --z FILE]
    check     --a FILE --c FILE
    majorize  --a FILE --c FILE
    twoproj   --n N [--csv FILE]
    perturb   --n N --eps E [--csv-x FILE] [--csv-q FILE]
    verify    [--trials T] [--seed S] [--max-dim D] [--rank-policy P]

All commands emit UTF-8 JSON to stdout (or ``--out FILE``); the grid
commands optionally export CSV curves with the header
``t,re11,im11,re12,im12,re21,im21,re22,im22``.

Exit codes: 0 success, 1 input error (parse, shape, bad flag values),
2 negative verdict with certificate (unsolvable equation, failed
perturbation residual, property violations).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import douglas, oracle, projpair
from .errors import (
    BadEpsilon,
    BadGridSize,
    MatrixFormatError,
    NotSolvable,
    NotSolvableHermitian,
    NotSolvablePositive,
    OpeqError,
    ParameterNotHermitian,
    ParameterNotPSD,
    ShapeMismatch,
)
from .matcore import (
    ToleranceConfig,
    matrix_from_json,
    matrix_to_json,
    min_majorization_scale,
    range_inclusion,
    spectral_norm,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NEGATIVE = 2

PERTURB_RESIDUAL_LIMIT = 1e-8


class _InputError(Exception):
    """Anything that should terminate with exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the exit-code contract
    # reserves 2 for negative verdicts, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _InputError(message)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write JSON here instead of stdout")
    common.add_argument("--rank-rtol", type=float, default=None, metavar="X")
    common.add_argument("--psd-atol", type=float, default=None, metavar="X")
    common.add_argument("--residual-atol", type=float, default=None, metavar="X")

    parser = _Parser(prog="opeq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_solve = sub.add_parser("solve", parents=[common], help="solve AX = C in a chosen class")
    p_solve.add_argument("--a", required=True, metavar="FILE")
    p_solve.add_argument("--c", required=True, metavar="FILE")
    p_solve.add_argument(
        "--mode", choices=("general", "hermitian", "positive"), default="general"
    )
    p_solve.add_argument("--y", metavar="FILE", help="free parameter for general/hermitian")
    p_solve.add_argument("--z", metavar="FILE", help="free PSD parameter for positive")

    p_check = sub.add_parser("check", parents=[common], help="full solvability report")
    p_check.add_argument("--a", required=True, metavar="FILE")
    p_check.add_argument("--c", required=True, metavar="FILE")

    p_major = sub.add_parser("majorize", parents=[common], help="least scale with CC* <= mu AA*")
    p_major.add_argument("--a", required=True, metavar="FILE")
    p_major.add_argument("--c", required=True, metavar="FILE")

    p_two = sub.add_parser(
        "twoproj", parents=[common], help="nonexistence certificate for (P+Q)^(1/2) X = P"
    )
    p_two.add_argument("--n", required=True, type=int, metavar="N", help="grid points (>= 100)")
    p_two.add_argument("--csv", metavar="FILE", help="export the candidate solution curve")

    p_pert = sub.add_parser(
        "perturb", parents=[common], help="perturb Q so the equation becomes solvable"
    )
    p_pert.add_argument("--n", required=True, type=int, metavar="N")
    p_pert.add_argument("--eps", required=True, type=float, metavar="E")
    p_pert.add_argument("--csv-x", metavar="FILE", help="export the solution curve")
    p_pert.add_argument("--csv-q", metavar="FILE", help="export the perturbed projection")

    p_ver = sub.add_parser("verify", parents=[common], help="seeded randomized property suite")
    p_ver.add_argument("--trials", type=int, default=500, metavar="T")
    p_ver.add_argument("--seed", type=int, default=oracle.DEFAULT_SEED, metavar="S")
    p_ver.add_argument("--max-dim", type=int, default=6, metavar="D")
    p_ver.add_argument(
        "--rank-policy", choices=("full", "deficient", "random"), default="random"
    )
    return parser


def _tolerances(args) -> ToleranceConfig:
    overrides = {}
    if args.rank_rtol is not None:
        overrides["rank_rtol"] = args.rank_rtol
    if args.psd_atol is not None:
        overrides["psd_atol"] = args.psd_atol
    if args.residual_atol is not None:
        overrides["residual_atol"] = args.residual_atol
    try:
        return ToleranceConfig(**overrides)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc


def _load_matrix(path: str) -> np.ndarray:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            obj = json.load(handle)
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _InputError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return matrix_from_json(obj)
    except MatrixFormatError as exc:
        raise _InputError(f"{path}: {exc}") from exc


def _emit(payload: dict, out_path: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out_path:
        try:
            with open(out_path, "w", encoding="utf-8") as handle:
                handle.write(text)
        except OSError as exc:
            raise _InputError(f"cannot write {out_path}: {exc}") from exc
    else:
        sys.stdout.write(text)


def _write_csv(fn, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            projpair.write_csv(fn, handle)
    except OSError as exc:
        raise _InputError(f"cannot write {path}: {exc}") from exc


def _cmd_solve(args, tol) -> int:
    a = _load_matrix(args.a)
    c = _load_matrix(args.c)
    if args.mode == "positive" and args.y:
        raise _InputError("--y does not apply to positive mode; use --z")
    if args.mode != "positive" and args.z:
        raise _InputError("--z only applies to positive mode; use --y")

    n_param = (a.shape[1], c.shape[1])
    try:
        if args.mode == "general":
            y = _load_matrix(args.y) if args.y else np.zeros(n_param)
            x = douglas.general_solution(a, c, y, tol)
        elif args.mode == "hermitian":
            y = _load_matrix(args.y) if args.y else np.zeros((a.shape[1], a.shape[1]))
            x = douglas.hermitian_solution(a, c, y, tol)
        else:
            z = _load_matrix(args.z) if args.z else np.zeros((a.shape[1], a.shape[1]))
            x = douglas.positive_solution(a, c, z, tol)
    except (NotSolvable, NotSolvableHermitian, NotSolvablePositive) as exc:
        report = douglas.solvability_report(a, c, tol) if a.shape == c.shape else None
        _emit(
            {
                "status": "unsolvable",
                "mode": args.mode,
                "reason": str(exc),
                "certificate": exc.certificate,
                "report": report.to_json() if report else None,
            },
            args.out,
        )
        return EXIT_NEGATIVE
    except (ParameterNotHermitian, ParameterNotPSD, ShapeMismatch) as exc:
        raise _InputError(str(exc)) from exc

    _emit(
        {
            "status": "ok",
            "mode": args.mode,
            "solution": matrix_to_json(x),
            "residual": spectral_norm(a @ x - c),
        },
        args.out,
    )
    return EXIT_OK


def _cmd_check(args, tol) -> int:
    a = _load_matrix(args.a)
    c = _load_matrix(args.c)
    try:
        report = douglas.solvability_report(a, c, tol)
    except ShapeMismatch as exc:
        raise _InputError(str(exc)) from exc
    _emit(report.to_json(), args.out)
    return EXIT_OK


def _cmd_majorize(args, tol) -> int:
    a = _load_matrix(args.a)
    c = _load_matrix(args.c)
    try:
        result = min_majorization_scale(a, c, tol)
        included = range_inclusion(a, c, tol)
    except ShapeMismatch as exc:
        raise _InputError(str(exc)) from exc
    payload = result.to_json()
    payload["range_inclusion"] = included
    if included:
        d = douglas.reduced_solution(a, c, tol)
        payload["d_norm_sq"] = spectral_norm(d) ** 2
    else:
        payload["d_norm_sq"] = None
    _emit(payload, args.out)
    return EXIT_OK


def _cmd_twoproj(args, tol) -> int:
    try:
        grid = projpair.uniform_grid(args.n)
        certificate = projpair.nonexistence_certificate(grid)
    except BadGridSize as exc:
        raise _InputError(str(exc)) from exc
    if args.csv:
        _write_csv(projpair.pointwise_solution(grid), args.csv)
    _emit(certificate.to_json(), args.out)
    return EXIT_OK


def _cmd_perturb(args, tol) -> int:
    try:
        grid = projpair.uniform_grid(args.n)
        eps_snapped = projpair.snap_eps(grid, args.eps)
        q_prime = projpair.perturb_q(grid, args.eps)
        x = projpair.perturbed_solution(grid, args.eps)
    except (BadGridSize, BadEpsilon) as exc:
        raise _InputError(str(exc)) from exc
    p, q = projpair.canonical_pair(grid)
    distance = projpair.sup_distance(q, q_prime)
    residual = projpair.equation_residual_max(p, q_prime, x, tol)
    member = projpair.algebra_membership(x, tol)
    _emit(
        {
            "eps_requested": args.eps,
            "eps_snapped": eps_snapped,
            "n_points": grid.n_points,
            "distance": distance,
            "residual_max": residual,
            "algebra_membership": member,
        },
        args.out,
    )
    if args.csv_x:
        _write_csv(x, args.csv_x)
    if args.csv_q:
        _write_csv(q_prime, args.csv_q)
    return EXIT_OK if (residual < PERTURB_RESIDUAL_LIMIT and member) else EXIT_NEGATIVE


def _cmd_verify(args, tol) -> int:
    try:
        spec = oracle.TrialSpec(
            dim_min=1,
            dim_max=args.max_dim,
            rank_policy=args.rank_policy,
            trials=args.trials,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    report = oracle.property_suite(spec, tol)
    _emit(report, args.out)
    return EXIT_OK if report["violations"] == 0 else EXIT_NEGATIVE


_COMMANDS = {
    "solve": _cmd_solve,
    "check": _cmd_check,
    "majorize": _cmd_majorize,
    "twoproj": _cmd_twoproj,
    "perturb": _cmd_perturb,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, _tolerances(args))
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OpeqError as exc:
        # typed failures not handled more specifically above are input errors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
