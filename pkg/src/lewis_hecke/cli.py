"""Command-line front end.  Every command prints one JSON document (or CSV
table) to stdout.  Exit codes: 0 pass, 1 verification failure, 2 usage."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

SCHEMA_VERSION = 1
FORMATS = ("json", "csv")
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: Optional[int] = None
    s: complex = 1.0
    lam: float = 1.0
    order: int = 32
    fmt: str = "json"
    tol: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.n is not None and self.n < 1:
            raise UsageError("levels must be >= 1")
        if not 4 <= self.order <= 128:
            raise UsageError("order must lie in [4, 128]")
        if self.fmt not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tolerance must be positive")


# parsing helpers -----------------------------------------------------------


def parse_weight(text: str) -> complex:
    """'re' or 're,im'."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"weight must look like RE or RE,IM, got {text!r}")


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected p/q, got {text!r}")


def parse_sweep(text: str):
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError("sweep must look like LO:HI:COUNT")
    if count < 1:
        raise argparse.ArgumentTypeError("sweep count must be >= 1")
    return lo, hi, count


def _rational(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _complex(z: complex) -> list:
    return [complex(z).real, complex(z).imag]


# output --------------------------------------------------------------------


def _emit_json(command: str, result) -> None:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "result": result}
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")


def _emit_csv(header: Sequence[str], rows: Sequence[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _emit(cfg: RunConfig, result, header=None, rows=None) -> None:
    if cfg.fmt == "csv" and header is not None:
        _emit_csv(header, rows)
    else:
        _emit_json(cfg.command, result)


# commands --------------------------------------------------------------------


def _level(args) -> int:
    n = getattr(args, "n_pos", None)
    n = args.n if n is None else n
    if n is None:
        raise UsageError("a level n is required")
    return n


def cmd_cosets(args, cfg: RunConfig) -> int:
    from .cosets import A_of, enumerate_cosets, x_of

    rows = []
    for i in enumerate_cosets(cfg.n):
        rows.append({"c": i.c, "b": i.b, "d": i.d, "A": A_of(i).as_list(), "x": str(x_of(i))})
    _emit(
        cfg,
        {"n": cfg.n, "count": len(rows), "cosets": rows},
        ["c", "b", "d", "a11", "a12", "a21", "a22", "x"],
        [[r["c"], r["b"], r["d"], *r["A"], r["x"]] for r in rows],
    )
    return EXIT_OK


def cmd_partition(args, cfg: RunConfig) -> int:
    from .partitions import m_of, minimal_partition

    P = minimal_partition(args.x)
    m = m_of(P)
    _emit(cfg, {"x": str(args.x), "points": P.to_json(), "m": m.to_json()},
          ["coeff", "a11", "a12", "a21", "a22"], [[k, *A.as_list()] for A, k in m.items()])
    return EXIT_OK


def cmd_chains(args, cfg: RunConfig) -> int:
    from .chains import chain_of
    from .cosets import enumerate_cosets

    chains = [chain_of(i) for i in enumerate_cosets(cfg.n)]
    rows = [[ch.owner.c, ch.owner.b, j, *A.as_list()] for ch in chains for j, A in enumerate(ch.matrices)]
    _emit(cfg, {"n": cfg.n, "chains": [ch.to_json() for ch in chains]},
          ["c", "b", "step", "a11", "a12", "a21", "a22"], rows)
    return EXIT_OK


def cmd_psi(args, cfg: RunConfig) -> int:
    from .chains import psi_of

    psi = psi_of(cfg.n)
    data = psi.to_json()
    rows = [[e["c"], e["b"], t["coeff"], *t["matrix"]] for e in data for t in e["terms"]]
    _emit(cfg, {"n": cfg.n, "terms": psi.term_count(), "psi": data},
          ["c", "b", "coeff", "a11", "a12", "a21", "a22"], rows)
    return EXIT_OK


def cmd_hecke(args, cfg: RunConfig) -> int:
    from .hecke import tn_set, ttilde_set

    H = ttilde_set(cfg.n) if args.variant == "tilde" else tn_set(cfg.n)
    _emit(cfg, H.to_json(), ["coeff", "a11", "a12", "a21", "a22"],
          [[k, *A.as_list()] for A, k in H.terms.items()])
    return EXIT_OK


def cmd_hecke_kappa(args, cfg: RunConfig) -> int:
    from .hecke import exact_multiplier

    k = exact_multiplier(cfg.n, args.variant)
    _emit(cfg, {"n": cfg.n, "variant": args.variant, "kappa": _rational(k)},
          ["n", "variant", "kappa"], [[cfg.n, args.variant, _rational(k)]])
    return EXIT_OK


def cmd_verify(args, cfg: RunConfig) -> int:
    if args.target == "lewis":
        from .chains import verify_lewis_system

        if args.lam_pos not in (1, -1):
            raise UsageError("lambda must be 1 or -1")
        report = verify_lewis_system(cfg.n, args.lam_pos)
        out = report.to_json()
        if cfg.fmt == "csv":
            _emit_csv(["c", "b", "ok", "ok_lambda", "R_terms", "R_lambda_terms"],
                      [[c["c"], c["b"], c["ok"], c["ok_lambda"], c["R_terms"], c["R_lambda_terms"]]
                       for c in out["certificates"]])
        else:
            _emit_json(cfg.command, out)
        return EXIT_OK if report.passed else EXIT_FAIL

    from .acceptance import run_all

    results = run_all(max_n=args.max_n, seed=cfg.seed, workers=args.workers)
    for r in results:
        sys.stderr.write(r.line() + "\n")
    passed = all(r.passed for r in results)
    out = {"max_n": args.max_n, "passed": passed, "criteria": [r.to_json() for r in results]}
    first = next((r for r in results if not r.passed), None)
    if first is not None:
        out["counterexample"] = {"criterion": first.number, **(first.counterexample or {"detail": first.detail})}
    _emit(cfg, out, ["criterion", "title", "passed", "seconds", "detail"],
          [[r.number, r.title, r.passed, f"{r.seconds:.3f}", r.detail] for r in results])
    return EXIT_OK if passed else EXIT_FAIL


def cmd_spectrum(args, cfg: RunConfig) -> int:
    from .transfer import build, spectrum

    sp = spectrum(build(cfg.n, cfg.s, cfg.order))
    count = args.count or len(sp.eigenvalues)
    out = sp.to_json(count)
    if args.plot:
        from .plotting import plot_spectrum

        out["plot"] = plot_spectrum(sp.eigenvalues, args.plot, f"n = {cfg.n}, s = {cfg.s}, N = {cfg.order}")
    _emit(cfg, out, ["rank", "re", "im", "abs"],
          [[k, v.real, v.imag, abs(v)] for k, v in enumerate(sp.eigenvalues[:count])])
    return EXIT_OK


def cmd_zeta(args, cfg: RunConfig) -> int:
    from .transfer import selberg_zeta

    if args.sweep is None:
        r = selberg_zeta(cfg.n, cfg.s, cfg.order)
        _emit(cfg, r.to_json(), ["re_s", "im_s", "re_Z", "im_Z", "discrepancy"],
              [[cfg.s.real, cfg.s.imag, r.value.real, r.value.imag, r.discrepancy]])
        return EXIT_OK
    lo, hi, count = args.sweep
    grid = np.linspace(lo, hi, count)
    svals = [complex(x, cfg.s.imag) if args.axis == "re" else complex(cfg.s.real, x) for x in grid]
    results = [selberg_zeta(cfg.n, s, cfg.order) for s in svals]
    out = {"n": cfg.n, "order": cfg.order, "axis": args.axis,
           "points": [{"s": _complex(r.s), "Z": _complex(r.value), "discrepancy": r.discrepancy} for r in results]}
    if args.plot:
        from .plotting import plot_zeta_sweep

        out["plot"] = plot_zeta_sweep(svals, [r.value for r in results], args.plot, f"n = {cfg.n}, N = {cfg.order}")
    fmt_csv = cfg.fmt == "csv" or args.format is None
    rows = [[r.s.real, r.s.imag, r.value.real, r.value.imag, r.discrepancy] for r in results]
    if fmt_csv:
        _emit_csv(["re_s", "im_s", "re_Z", "im_Z", "discrepancy"], rows)
    else:
        _emit_json(cfg.command, out)
    return EXIT_OK


def cmd_lewis_check(args, cfg: RunConfig) -> int:
    from .slash import RationalFunction, constant, inv_z, lewis_residual, lewis_residual_exact

    s, lam = cfg.s, cfg.lam
    out = {"phi": args.phi, "s": _complex(s), "lambda": lam}
    if args.phi == "eigen":
        from .transfer import build, eigenfunction, vector_lewis_residual

        n = cfg.n or 1
        ef = eigenfunction(build(n, s, cfg.order), which=complex(lam))
        tol = cfg.tol or 1e-8
        residual = vector_lewis_residual(n, s, ef.eigenvalue, ef)
        out.update(n=n, order=cfg.order, eigenvalue=_complex(ef.eigenvalue),
                   eigenvalue_gap=abs(ef.eigenvalue - lam), residual=residual, tol=tol)
        passed = residual <= tol
    else:
        phi = inv_z() if args.phi == "inv" else constant(1.0)
        tol = cfg.tol or 1e-12
        residual = lewis_residual(phi, s, lam)
        out.update(residual=residual, tol=tol)
        passed = residual <= tol
        integral = s.imag == 0 and float(s.real).is_integer() and lam in (1, -1)
        if args.phi == "inv" and integral:
            exact = lewis_residual_exact(RationalFunction.inv_z(), int(s.real), int(lam))
            out.update(exact_residual=str(exact), exact_zero=exact.is_zero())
            passed = exact.is_zero()
    out["passed"] = passed
    _emit(cfg, out, ["phi", "residual", "tol", "passed"], [[args.phi, out["residual"], tol, passed]])
    return EXIT_OK if passed else EXIT_FAIL


def cmd_rho(args, cfg: RunConfig) -> int:
    from .cosets import enumerate_cosets, parse_word, rho

    g = parse_word(args.word)
    P = rho(cfg.n, g)
    out = {"n": cfg.n, "word": args.word, "g": g.as_list(),
           "cosets": [repr(i) for i in enumerate_cosets(cfg.n)], "one_line": P.one_line(), "order": P.order()}
    _emit(cfg, out, ["row", "column"], [[k, j] for k, j in enumerate(P.one_line())])
    return EXIT_OK


# parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=0)

    def level(p, positional=True):
        if positional:
            p.add_argument("n_pos", type=int, nargs="?", metavar="n")
        p.add_argument("--n", type=int, default=None)

    def numeric(p):
        p.add_argument("--s", type=parse_weight, default=complex(1.0))
        p.add_argument("--order", type=int, default=32)

    parser = argparse.ArgumentParser(prog="lewis-hecke", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cosets", parents=[common], help="ordered coset indices of level n")
    level(p)
    p = sub.add_parser("partition", parents=[common], help="minimal partition of p/q and m(P)")
    p.add_argument("x", type=parse_fraction, metavar="p/q")
    for name, text in (("chains", "K-chains of level n"), ("psi", "the special solution of level n")):
        p = sub.add_parser(name, parents=[common], help=text)
        level(p)
    for name, text in (("hecke", "Hecke matrix list"), ("hecke-kappa", "exact s = 1 multiplier")):
        p = sub.add_parser(name, parents=[common], help=text)
        level(p)
        p.add_argument("--variant", choices=("tilde", "full"), default="tilde")

    p = sub.add_parser("verify", parents=[common], help="verify lewis N LAMBDA | verify all")
    p.add_argument("target", choices=("lewis", "all"))
    p.add_argument("n_pos", type=int, nargs="?", metavar="n")
    p.add_argument("lam_pos", type=int, nargs="?", metavar="lambda")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--lambda", dest="lam", type=int, default=None)
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("spectrum", parents=[common], help="truncated transfer operator eigenvalues")
    level(p, positional=False)
    numeric(p)
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--plot", metavar="PATH", default=None)

    p = sub.add_parser("zeta", parents=[common], help="det(1 - L_s^2), optionally along an s-grid")
    level(p, positional=False)
    numeric(p)
    p.add_argument("--sweep", type=parse_sweep, default=None, metavar="LO:HI:COUNT")
    p.add_argument("--axis", choices=("re", "im"), default="im")
    p.add_argument("--plot", metavar="PATH", default=None)

    p = sub.add_parser("lewis-check", parents=[common], help="Lewis residual of a test function")
    level(p, positional=False)
    numeric(p)
    p.add_argument("--phi", choices=("inv", "const", "eigen"), default="inv")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)

    p = sub.add_parser("rho", parents=[common], help="permutation rho(g) of a word in T, t, M, Q, q")
    p.add_argument("n_pos", type=int, metavar="n")
    p.add_argument("word")
    p.add_argument("--n", type=int, default=None)
    return parser


HANDLERS = {
    "cosets": cmd_cosets,
    "partition": cmd_partition,
    "chains": cmd_chains,
    "psi": cmd_psi,
    "hecke": cmd_hecke,
    "hecke-kappa": cmd_hecke_kappa,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "zeta": cmd_zeta,
    "lewis-check": cmd_lewis_check,
    "rho": cmd_rho,
}

NEEDS_LEVEL = {"cosets", "chains", "psi", "hecke", "hecke-kappa", "spectrum", "zeta", "rho"}


def _config(args) -> RunConfig:
    n = None
    if args.command in NEEDS_LEVEL or (args.command == "verify" and args.target == "lewis"):
        n = _level(args)
    elif getattr(args, "n", None) is not None:
        n = args.n
    if args.command == "verify":
        if args.target == "lewis" and args.lam_pos is None:
            args.lam_pos = args.lam
        if args.target == "lewis" and args.lam_pos is None:
            raise UsageError("verify lewis needs a lambda")
        if args.max_n is not None and args.max_n < 1:
            raise UsageError("--max-n must be >= 1")
        if args.workers < 1:
            raise UsageError("--workers must be >= 1")
    return RunConfig(
        command=args.command,
        n=n,
        s=getattr(args, "s", complex(1.0)),
        lam=args.lam if args.command == "lewis-check" else 1.0,
        order=getattr(args, "order", 32),
        fmt=args.format or "json",
        tol=args.tol,
        seed=args.seed,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        return HANDLERS[args.command](args, cfg)
    except ArithmeticError as exc:
        _emit_json(args.command, {"passed": False, "counterexample": {"error": str(exc)}})
        return EXIT_FAIL
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"lewis-hecke: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
