"""Command-line front end.

Usage::

    spectrace trace s1 --power 1
    spectrace trace t2 --power 3
    spectrace trace p --power 4 --tol 1e-6
    spectrace lattice-sum --n 2 --radius 2000 --format csv -o shells.csv
    spectrace mellin --n 3
    spectrace diverge p2 --target 5
    spectrace counterexample left-shift-psi --terms 100
    spectrace finop demo --dim 8 --seed 1
    spectrace special zeta --s 2

Each run prints one JSON record (or CSV / plain text). Exit status is 0 on
success, including a definitive "not trace class" answer, 2 on bad arguments
and 3 when a numerical method fails to converge.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from . import counterexamples as cx
from . import finop
from .errors import DomainError, NonConvergenceError
from .lattice import lattice_sum_closed, lattice_sum_direct, shell_csv
from .records import dumps
from .special_fn import dirichlet_beta, mellin_theta, zeta
from .torus_spectral import (
    GrowthCertificate,
    TraceClassification,
    p2_divergence_certificate,
    trace_inv_laplacian_s1,
    trace_inv_laplacian_t2,
    trace_p_power_t2,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

TOL_MIN, TOL_MAX = 1e-13, 1e-2


class UsageError(Exception):
    pass


def _tolerance(text: str) -> float:
    value = float(text)
    if not TOL_MIN <= value <= TOL_MAX:
        raise argparse.ArgumentTypeError(f"tolerance must lie in [{TOL_MIN:g}, {TOL_MAX:g}]")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be an integer >= 1")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("-o", "--output", type=Path, help="write the report here instead of stdout")
    common.add_argument("--threads", type=_positive_int, default=1)
    common.add_argument("--timing", action="store_true",
                        help="fill runtime_ms (otherwise null, keeping output reproducible)")

    parser = _Parser(prog="spectrace", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("trace", parents=[common], help="trace of D^-n or P^n")
    p.add_argument("space", choices=("s1", "t2", "p"))
    p.add_argument("--power", type=_positive_int, required=True)
    p.add_argument("--tol", type=_tolerance, default=None)
    p.add_argument("--target", type=_positive_int, default=5, help="P^2 certificate target")

    p = sub.add_parser("lattice-sum", parents=[common], help="direct sum of (k^2+m^2)^-n")
    p.add_argument("--n", type=float, required=True)
    p.add_argument("--radius", type=_positive_int, required=True)

    p = sub.add_parser("mellin", parents=[common], help="Mellin transform of theta3^2 - 1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=_tolerance, default=1e-10)

    p = sub.add_parser("diverge", parents=[common], help="dyadic divergence certificate")
    p.add_argument("which", choices=("p2",))
    p.add_argument("--target", type=_positive_int, required=True)

    p = sub.add_parser("counterexample", parents=[common], help="diagonal sums of l^2 examples")
    p.add_argument("name", choices=cx.EXAMPLES)
    p.add_argument("--terms", type=_positive_int, required=True)

    p = sub.add_parser("finop", parents=[common], help="finite-dimensional operator checks")
    p.add_argument("which", choices=("demo",))
    p.add_argument("--dim", type=_positive_int, default=8)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("special", parents=[common], help="zeta or Dirichlet beta")
    p.add_argument("function", choices=("zeta", "beta"))
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--tol", type=_tolerance, default=1e-12)
    return parser


def _envelope(subcommand: str, params: dict[str, Any]) -> dict[str, Any]:
    return {
        "tool_version": __version__,
        "subcommand": subcommand,
        "params": params,
        "status": "ok",
        "terms": 0,
        "runtime_ms": None,
        "extension_flag": False,
    }


def _bounded(rec, bv) -> None:
    rec["value"] = {"re": bv.value, "im": 0.0}
    rec["error_bound"] = bv.error_bound
    rec["terms"] = bv.terms_used


def _growth_csv(cert: GrowthCertificate) -> str:
    lines = ["radius,partial_sum,lower_bound"]
    for r, s, lb in zip(cert.radii, cert.partial_sums, cert.lower_bounds):
        lines.append(f"{r},{s:.17g},{lb:.17g}")
    return "\n".join(lines) + "\n"


def _cmd_trace(a) -> tuple[dict, str | None]:
    params = {"power": a.power}
    if a.space == "s1":
        tol = a.tol or 1e-10
        res = trace_inv_laplacian_s1(a.power, tol)
    elif a.space == "t2":
        tol = a.tol or 1e-10
        res = trace_inv_laplacian_t2(a.power, tol)
    else:
        tol = a.tol or 1e-6
        params["target"] = a.target
        res = trace_p_power_t2(a.power, tol, target=a.target)
    params["tol"] = tol
    rec = _envelope(f"trace {a.space}", params)
    rec.update(_trace_fields(res))
    table = None
    cert = res.certificate
    if isinstance(cert, GrowthCertificate):
        table = _growth_csv(cert)
    elif cert is not None:
        table = _blocks_csv(cert)
    return rec, table


def _trace_fields(res: TraceClassification) -> dict[str, Any]:
    out = res.to_record()
    out["extension_flag"] = res.extension
    return out


def _blocks_csv(cert) -> str:
    lines = ["j,block_sum,cumulative"]
    running = 0.0
    for j, b in enumerate(cert.block_sums, start=1):
        running += b
        lines.append(f"{j},{b:.17g},{running:.17g}")
    return "\n".join(lines) + "\n"


def _cmd_lattice(a) -> tuple[dict, str]:
    out = lattice_sum_direct(a.n, a.radius, threads=a.threads)
    rec = _envelope("lattice-sum", {"n": a.n, "radius": a.radius})
    rec["value"] = {"re": out.value.real, "im": out.value.imag}
    rec["error_bound"] = out.tail_bound
    rec["terms"] = out.terms
    rec["radius"] = out.radius
    rec["abs_sum"] = out.abs_sum
    if float(a.n).is_integer():
        closed = lattice_sum_closed(int(a.n))
        rec["closed_form"] = {"value": closed.value, "error_bound": closed.error_bound}
    return rec, shell_csv(out, a.n)


def _cmd_mellin(a) -> tuple[dict, None]:
    bv = mellin_theta(a.n, a.tol)
    rec = _envelope("mellin", {"n": a.n, "tol": a.tol})
    _bounded(rec, bv)
    return rec, None


def _cmd_diverge(a) -> tuple[dict, str]:
    cert = p2_divergence_certificate(a.target)
    rec = _envelope("diverge p2", {"target": a.target})
    rec["status"] = "NotTraceClass"
    rec["certificate"] = cert.to_record()
    rec["terms"] = 4 * cert.radius * (cert.radius + 1)
    return rec, _blocks_csv(cert)


def _cmd_counterexample(a) -> tuple[dict, str]:
    sums = cx.diag_partial_sums(a.name, a.terms)
    rec = _envelope(f"counterexample {a.name}", {"terms": a.terms})
    rec["terms"] = a.terms
    rec["partial_sums_tail"] = sums[-min(5, sums.size):].tolist()
    rec["last_partial_sum"] = float(sums[-1])
    return rec, cx.partial_sums_csv(a.name, a.terms)


def _cmd_finop(a) -> tuple[dict, None]:
    op = finop.random_operator(a.dim, a.seed)
    absolute = finop.abs_op(op, 1e-10)
    diag_sums = [
        finop.trace_diag(absolute, finop.random_orthonormal_basis(a.dim, a.seed * 7919 + i)).real
        for i in range(5)
    ]
    _, tnorm = finop.canonical_and_trace_norm(op)
    psd = op.conj().T @ op
    root = finop.sqrt_psd(psd, 1e-10)
    tr = finop.trace_diag(op)
    rec = _envelope("finop demo", {"dim": a.dim, "seed": a.seed})
    rec["value"] = {"re": tr.real, "im": tr.imag}
    rec["terms"] = a.dim
    rec["trace_norm"] = tnorm
    rec["abs_diag_sums"] = diag_sums
    rec["abs_diag_spread"] = float(np.ptp(diag_sums))
    rec["eigenvalue_sum_gap"] = abs(tr - complex(np.sum(np.linalg.eigvals(op))))
    rec["sqrt_residual"] = finop.opnorm(root @ root - psd)
    rec["lidskii"] = finop.lidskii_check(op)
    return rec, None


def _cmd_special(a) -> tuple[dict, None]:
    fn = zeta if a.function == "zeta" else dirichlet_beta
    bv = fn(a.s, a.tol)
    rec = _envelope(f"special {a.function}", {"s": a.s, "tol": a.tol})
    _bounded(rec, bv)
    return rec, None


_COMMANDS = {
    "trace": _cmd_trace,
    "lattice-sum": _cmd_lattice,
    "mellin": _cmd_mellin,
    "diverge": _cmd_diverge,
    "counterexample": _cmd_counterexample,
    "finop": _cmd_finop,
    "special": _cmd_special,
}


def _plain(rec: dict[str, Any], prefix: str = "") -> str:
    lines = []
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            lines.append(_plain(val, name + "."))
        elif isinstance(val, float):
            lines.append(f"{name}: {val:.17g}")
        else:
            lines.append(f"{name}: {val}")
    return "\n".join(lines)


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Parse ``argv`` and return ``(exit status, report text)``."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        rec, table = _COMMANDS[args.command](args)
    except DomainError as exc:
        return EXIT_USAGE, f"error: {exc}"
    except NonConvergenceError as exc:
        return EXIT_NUMERICAL, f"numerical failure: {exc}"
    if args.timing:
        rec["runtime_ms"] = 1e3 * (time.perf_counter() - start)
    if args.format == "json":
        text = dumps(rec)
    elif args.format == "plain":
        text = _plain(rec)
    else:
        if table is None:
            return EXIT_USAGE, f"error: {args.command} has no CSV form"
        text = table.rstrip("\n")
    if args.output is not None:
        args.output.write_text(text + "\n")
        return EXIT_OK, ""
    return EXIT_OK, text


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    if text:
        print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
