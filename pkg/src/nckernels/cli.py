"""Command-line front end.

JSON reports go to stdout (or --out); human-readable summaries go to
stderr.  Exit codes encode the mathematical verdict: 0 for a positive /
confirmed outcome, 1 for a negative one, 2 for input errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .certificates import check_nc_positivity, factor_kernel
from .evaluation import (
    MatrixTuple,
    block_eval_matrix,
    joint_nilpotency_rank,
    tuple_from_json,
    tuple_to_json,
)
from .kernels import (
    HereditaryKernel,
    KernelParseError,
    hermitian_defect,
    kernel_from_json,
    parse_kernel,
    polynomial_to_json,
)
from .numerics import NotPsdError, SizeCapError, hermitian_min_eig, inf_norm
from .serialize import matrix_to_json
from .witnesses import (
    DEFAULT_S_GRID,
    abelianized_coefficients,
    commutative_gram_check,
    counterexample_demo,
    eval_commutative_kernel,
    nilpotent_tensor_tuple,
    shift_tuple,
    shift_witness_test,
    torus_extract,
)


@dataclass
class CliConfig:
    command: str
    kernel_path: str | None = None
    expr: str | None = None
    N: int | None = None
    p: int = 1
    m: int | None = None
    tolerance: float = 1e-9
    s_grid: tuple[float, ...] = DEFAULT_S_GRID
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if any(s <= 0 for s in self.s_grid):
            raise ValueError("all s-grid entries must be positive")


class CliInputError(ValueError):
    pass


def _parse_s_grid(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise CliInputError(f"bad --s-grid value {text!r}") from exc


def _parse_lambda(text: str) -> list[complex]:
    vals = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            vals.append(complex(part))
        except ValueError as exc:
            raise CliInputError(f"bad scaling value {part!r}") from exc
    return vals


def _load_kernel(cfg: CliConfig) -> HereditaryKernel:
    if (cfg.expr is None) == (cfg.kernel_path is None):
        raise CliInputError("provide exactly one of a kernel file or --expr")
    if cfg.expr is not None:
        if cfg.N is None:
            raise CliInputError("--expr requires --N")
        kernel = parse_kernel(cfg.expr, cfg.N, cfg.p)
    else:
        try:
            with open(cfg.kernel_path) as fh:
                kernel = kernel_from_json(json.load(fh))
        except OSError as exc:
            raise CliInputError(f"cannot read kernel file: {exc}") from exc
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise CliInputError(f"malformed kernel file: {exc}") from exc
    if cfg.m is not None:
        if cfg.m < kernel.support_degree():
            raise CliInputError(
                f"--m {cfg.m} is below the kernel support degree {kernel.support_degree()}"
            )
        kernel = dataclasses.replace(kernel, m=cfg.m)
    return kernel


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


def _word_list(words) -> list[list[int]]:
    return [list(w) for w in words]


def cmd_check(cfg: CliConfig) -> int:
    kernel = _load_kernel(cfg)
    cert = check_nc_positivity(kernel, cfg.tolerance)
    payload = {
        "verdict": cert.verdict,
        "min_gram_eigenvalue": cert.min_gram_eigenvalue,
        "word_index": _word_list(cert.word_index),
        "inner_dimension": cert.inner_dimension,
        "residual": cert.residual,
        "factor": polynomial_to_json(cert.factor) if cert.factor is not None else None,
    }
    if cfg.s_grid and cert.verdict == "NotPositive":
        sweep = shift_witness_test(kernel, cfg.s_grid, cfg.tolerance)
        payload["shift_witness"] = {
            "verdict": sweep.verdict,
            "s_grid": list(sweep.s_grid),
            "min_eigenvalues": list(sweep.min_eigenvalues),
            "witness_s": sweep.witness_s,
        }
    _emit(payload, cfg.out)
    _note(f"verdict: {cert.verdict} (min Gram eigenvalue {cert.min_gram_eigenvalue:.6e})")
    return 0 if cert.verdict == "PositiveKernel" else 1


def cmd_factor(cfg: CliConfig) -> int:
    kernel = _load_kernel(cfg)
    try:
        factor = factor_kernel(kernel, cfg.tolerance)
    except NotPsdError as exc:
        _note(f"not factorable: {exc}")
        return 1
    _emit(polynomial_to_json(factor), cfg.out)
    _note(f"factored with inner dimension {factor.q}")
    return 0


def cmd_eval(cfg: CliConfig, tuple_paths: list[str]) -> int:
    kernel = _load_kernel(cfg)
    if not tuple_paths:
        raise CliInputError("at least one tuple file is required")
    points = []
    for path in tuple_paths:
        try:
            with open(path) as fh:
                points.append(tuple_from_json(json.load(fh)))
        except OSError as exc:
            raise CliInputError(f"cannot read tuple file: {exc}") from exc
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise CliInputError(f"malformed tuple file {path}: {exc}") from exc
    block = block_eval_matrix(kernel, points)
    report = hermitian_min_eig(block, cfg.tolerance)
    payload = {
        "num_points": len(points),
        "matrix_size": block.shape[0],
        "min_eigenvalue": report.min_eigenvalue,
        "is_psd": report.is_psd,
        "scale": inf_norm(block),
    }
    _emit(payload, cfg.out)
    _note(
        f"block evaluation over {len(points)} point(s): min eigenvalue "
        f"{report.min_eigenvalue:.6e}, {'PSD' if report.is_psd else 'not PSD'}"
    )
    return 0 if report.is_psd else 1


def cmd_witness(cfg: CliConfig, construction: str, lam_text: str | None, s: float) -> int:
    if construction == "theorem1":
        if cfg.N is None or cfg.m is None:
            raise CliInputError("theorem1 construction requires --N and --m")
        lam = _parse_lambda(lam_text) if lam_text else [1.0 + 0j] * cfg.N
        if len(lam) != cfg.N:
            raise CliInputError(f"expected {cfg.N} scaling values, got {len(lam)}")
        Z = nilpotent_tensor_tuple(cfg.N, cfg.m, lam)
        params = {"N": cfg.N, "m": cfg.m, "lambda": [[v.real, v.imag] for v in lam]}
    elif construction == "shift":
        if cfg.N is None or cfg.m is None:
            raise CliInputError("shift construction requires --N and --m")
        if s <= 0:
            raise CliInputError("--s must be positive")
        Z = shift_tuple(cfg.N, cfg.m, s)
        params = {"N": cfg.N, "m": cfg.m, "s": s}
    else:
        raise CliInputError(f"unknown construction {construction!r}")
    nilp = joint_nilpotency_rank(Z)
    expected = cfg.m + 1
    verified = nilp.is_nilpotent and nilp.rank == expected
    payload = {
        "construction": construction,
        "params": params,
        "tuple": tuple_to_json(Z),
        "nilpotency": {
            "is_nilpotent": nilp.is_nilpotent,
            "rank": nilp.rank,
            "expected_rank": expected,
            "verified": verified,
        },
    }
    _emit(payload, cfg.out)
    _note(
        f"{construction} tuple of size {Z.n}: nilpotency rank {nilp.rank} "
        f"({'matches' if verified else 'does not match'} expected {expected})"
    )
    return 0 if verified else 1


def cmd_demo_counterexample(cfg: CliConfig, samples: int, radius: float) -> int:
    try:
        report = counterexample_demo(samples=samples, radius=radius, seed=cfg.seed)
    except ValueError as exc:
        raise CliInputError(str(exc)) from exc
    payload = {
        "samples": report.samples,
        "radius": report.radius,
        "gram_eigenvalues": list(report.gram_eigenvalues),
        "gram_confirmed": report.gram_confirmed,
        "diag_min_eigenvalues": list(report.diag_min_eigenvalues),
        "diagonal_confirmed": report.diagonal_confirmed,
        "pair_min_eigenvalue": report.pair_min_eigenvalue,
        "pair_confirmed": report.pair_confirmed,
        "all_confirmed": report.all_confirmed,
    }
    _emit(payload, cfg.out)
    _note(
        "counterexample facts: "
        f"gram {'ok' if report.gram_confirmed else 'FAILED'}, "
        f"diagonal {'ok' if report.diagonal_confirmed else 'FAILED'}, "
        f"two-point {'ok' if report.pair_confirmed else 'FAILED'}"
    )
    return 0 if report.all_confirmed else 1


def cmd_extract(cfg: CliConfig) -> int:
    kernel = _load_kernel(cfg)
    if hermitian_defect(kernel) > cfg.tolerance:
        raise CliInputError("extraction expects a Hermitian kernel")
    order = max(kernel.m, 1)
    base = nilpotent_tensor_tuple(kernel.N, order)
    direct = abelianized_coefficients(kernel, base)
    sampler = lambda lam, lamp: eval_commutative_kernel(direct, lam, lamp)
    extracted = torus_extract(sampler, kernel.N, kernel.m, direct.block_dim)
    keys = set(direct.coeffs) | set(extracted.coeffs)
    deviation = max(
        (inf_norm(extracted.coeff(t, tp) - direct.coeff(t, tp)) for t, tp in keys),
        default=0.0,
    )
    gram = commutative_gram_check(extracted, cfg.tolerance)
    entries = [
        {"t": list(t), "tp": list(tp), "coeff": matrix_to_json(c)}
        for (t, tp), c in sorted(
            extracted.coeffs.items(), key=lambda kv: ((sum(kv[0][0]), kv[0][0]), (sum(kv[0][1]), kv[0][1]))
        )
    ]
    payload = {
        "N": extracted.N,
        "m": extracted.m,
        "block_dim": extracted.block_dim,
        "entries": entries,
        "max_deviation_from_direct": deviation,
        "gram_min_eigenvalue": gram.min_eigenvalue,
        "is_psd": gram.is_psd,
    }
    _emit(payload, cfg.out)
    _note(
        f"extracted {len(entries)} coefficient blocks, max deviation {deviation:.3e}, "
        f"commutative Gram min eigenvalue {gram.min_eigenvalue:.6e}"
    )
    return 0 if gram.is_psd else 1


def _add_kernel_inputs(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("kernel", nargs="?", help="kernel JSON file")
    sub.add_argument("--expr", help="kernel expression (scalar grammar)")
    sub.add_argument("--N", type=int, help="arity for --expr")
    sub.add_argument("--p", type=int, default=1, help="coefficient dimension for --expr")
    sub.add_argument("--m", type=int, help="override the degree window")


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tol", type=float, default=1e-9, help="positivity tolerance")
    sub.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    sub.add_argument("--out", help="write the JSON report to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nckernels",
        description="Hereditary non-commutative kernels: certify, factor, evaluate, witness.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check", help="certify kernel positivity")
    _add_kernel_inputs(sub)
    _add_common(sub)
    sub.add_argument(
        "--s-grid",
        default="",
        help="comma-separated shift weights; sweep attached when the verdict is NotPositive",
    )

    sub = subs.add_parser("factor", help="compute the sums-of-squares factor")
    _add_kernel_inputs(sub)
    _add_common(sub)

    sub = subs.add_parser("eval", help="evaluate the kernel block matrix on tuple files")
    sub.add_argument(
        "inputs",
        nargs="*",
        help="kernel JSON file (unless --expr) followed by matrix tuple JSON files",
    )
    sub.add_argument("--expr", help="kernel expression (scalar grammar)")
    sub.add_argument("--N", type=int, help="arity for --expr")
    sub.add_argument("--p", type=int, default=1, help="coefficient dimension for --expr")
    sub.add_argument("--m", type=int, help="override the degree window")
    _add_common(sub)

    sub = subs.add_parser("witness", help="build a witness tuple and verify its nilpotency")
    sub.add_argument("--construction", required=True, choices=["theorem1", "shift"])
    sub.add_argument("--N", type=int, required=True)
    sub.add_argument("--m", type=int, required=True)
    sub.add_argument("--lambda", dest="lam", help="comma-separated scalings (theorem1)")
    sub.add_argument("--s", type=float, default=1.0, help="shift weight (shift)")
    _add_common(sub)

    sub = subs.add_parser("demo-counterexample", help="run the convergent-case counterexample")
    sub.add_argument("--samples", type=int, default=100)
    sub.add_argument("--radius", type=float, default=0.5)
    _add_common(sub)

    sub = subs.add_parser("extract", help="torus-extract commutative coefficients of a kernel")
    _add_kernel_inputs(sub)
    _add_common(sub)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = CliConfig(
            command=args.command,
            kernel_path=getattr(args, "kernel", None),
            expr=getattr(args, "expr", None),
            N=getattr(args, "N", None),
            p=getattr(args, "p", 1),
            m=getattr(args, "m", None),
            tolerance=args.tol,
            s_grid=_parse_s_grid(getattr(args, "s_grid", "")) or DEFAULT_S_GRID,
            seed=args.seed,
            out=args.out,
        )
        if args.command == "check":
            # empty --s-grid means: no sweep requested
            cfg = dataclasses.replace(cfg, s_grid=_parse_s_grid(args.s_grid))
            return cmd_check(cfg)
        if args.command == "factor":
            return cmd_factor(cfg)
        if args.command == "eval":
            inputs = list(args.inputs)
            if args.expr is None and inputs:
                cfg = dataclasses.replace(cfg, kernel_path=inputs.pop(0))
            return cmd_eval(cfg, inputs)
        if args.command == "witness":
            return cmd_witness(cfg, args.construction, args.lam, args.s)
        if args.command == "demo-counterexample":
            return cmd_demo_counterexample(cfg, args.samples, args.radius)
        if args.command == "extract":
            return cmd_extract(cfg)
        raise CliInputError(f"unknown command {args.command!r}")
    except (CliInputError, KernelParseError, SizeCapError, ValueError) as exc:
        _note(f"error: {exc}")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
