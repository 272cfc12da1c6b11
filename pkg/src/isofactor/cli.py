"""Command line front end.

Subcommands read and write JSON; ``-`` stands for standard input.  Exit
status is 0 on success, 1 when a verification (or a construction) fails and
2 for malformed input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__
from .antiholo import antiholo_factorization, commutator_antiholo
from .classify import IsometryClass, classify_isometry
from .errors import IsofactorError, MatrixFormatError
from .factorization import Commutator, factorization_from_json
from .forms import standardize_form
from .gen import (
    CLASS_NAMES,
    GenSpec,
    generate,
    min_n,
    random_involution,
    random_reversible_su,
    random_su,
)
from .jsonio import dumps, loads, matrix_from_json
from .sun_factor import commutator_split, factor_su, two_reversible_split
from .tolerances import ENV_VAR, Tolerances, default_tolerances
from .un1_factor import decompose, hermitian_witness
from .verify import check_commutator, check_factorization

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Unreadable or malformed input (exit status 2)."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    tolerances: Tolerances
    seed: int = 0
    trials: int = 1


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return loads(text)
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _read_matrix(path: str, form_path: str | None = None) -> np.ndarray:
    try:
        A = matrix_from_json(_read_json(path))
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if form_path is not None:
        try:
            H = matrix_from_json(_read_json(form_path))
            C = standardize_form(H)
        except (MatrixFormatError, ValueError) as exc:
            raise InputError(f"{form_path}: {exc}") from exc
        A = np.linalg.solve(C, A @ C)
    return A


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _cmd_gen(args, cfg) -> int:
    spec = GenSpec(args.cls, args.n, args.seed, r=args.r, theta=args.theta, conjugate=not args.no_conjugate)
    _emit(generate(spec).to_json())
    return EXIT_OK


def _cmd_classify(args, cfg) -> int:
    T = _read_matrix(args.file, args.hermitian_form)
    _emit(classify_isometry(T, cfg.tolerances).to_json())
    return EXIT_OK


def _cmd_decompose(args, cfg) -> int:
    T = _read_matrix(args.file, args.hermitian_form)
    tols = cfg.tolerances
    if args.target == "involutions":
        fact = factor_su(T, tols) if args.form == "definite" else decompose(T, tols)
        _emit(fact.to_json())
    elif args.target == "antiholo":
        if args.form == "definite":
            raise InputError("anti-holomorphic splitting is defined for the indefinite form only")
        _emit(antiholo_factorization(T, tols).to_json())
    else:
        comm = commutator_split(T, tols) if args.form == "definite" else commutator_antiholo(T, tols)
        _emit(comm.to_json())
    return EXIT_OK


def _cmd_verify(args, cfg) -> int:
    T = _read_matrix(args.target)
    obj = _read_json(args.factors)
    try:
        if isinstance(obj, dict) and "commutator" in obj:
            c = obj["commutator"]
            comm = Commutator(
                matrix_from_json(c["x"]), matrix_from_json(c["y"]), T, bool(c.get("antiholomorphic", False))
            )
            report = check_commutator(T, comm, args.tol)
        else:
            report = check_factorization(T, factorization_from_json(obj, T), args.tol)
    except (MatrixFormatError, KeyError, TypeError) as exc:
        raise InputError(f"{args.factors}: {exc}") from exc
    _emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


def _parse_range(text: str) -> list[int]:
    try:
        lo, _, hi = text.partition("..")
        lo, hi = int(lo), int(hi or lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid range {text!r}")
    return list(range(lo, hi + 1))


def _fuzzed(fact, rng):
    from .factorization import Factor, Factorization

    i = int(rng.integers(len(fact.factors)))
    F = fact.factors[i]
    M = F.matrix.copy()
    r, c = rng.integers(M.shape[0], size=2)
    M[r, c] += 1e-3 * np.exp(2j * np.pi * rng.random())
    fs = list(fact.factors)
    fs[i] = Factor(M, F.tag, F.k, F.lam)
    return Factorization(fact.lift_scalar, tuple(fs), fact.target, fact.form, fact.isometry_class, fact.beyond_paper)


class _Tally:
    def __init__(self):
        self.rows: dict = {}

    def add(self, check: str, n, ok: bool, residual: float = 0.0):
        row = self.rows.setdefault((check, n), [0, 0, 0.0])
        row[0] += bool(ok)
        row[1] += 1
        if np.isfinite(residual):
            row[2] = max(row[2], float(residual))
        else:
            row[2] = float("inf")

    @property
    def ok(self) -> bool:
        return all(p == t for p, t, _ in self.rows.values())

    def table(self) -> str:
        lines = [f"{'check':<36} {'n':>3} {'passed':>9} {'worst':>9}"]
        for (check, n), (p, t, w) in self.rows.items():
            lines.append(f"{check:<36} {n:>3} {f'{p}/{t}':>9} {w:>9.1e}")
        lines.append("PASS" if self.ok else "FAIL")
        return "\n".join(lines)


def selftest(n_values, trials: int, seed: int) -> _Tally:
    """Run the acceptance matrix at desk scale; deterministic in ``seed``."""
    from .rng import stream

    tally = _Tally()
    rng = stream(seed, "selftest-fuzz")
    classes = [c.value for c in IsometryClass]
    for n in n_values:
        for cls in classes:
            if n < min_n(cls):
                continue
            for t in range(trials):
                s = seed * 100003 + t
                T = generate(GenSpec(cls, n, s)).matrix
                try:
                    got = classify_isometry(T).isometry_class.value
                except IsofactorError:
                    got = None
                tally.add(f"classify:{cls}", n, got == cls)
                try:
                    fact = decompose(T)
                    rep = check_factorization(T, fact)
                    tally.add(f"decompose:{cls}", n, rep.ok, rep.reconstruction_residual)
                    if fact.factors:
                        tally.add("fuzz_rejected", n, not check_factorization(T, _fuzzed(fact, rng)).ok)
                except IsofactorError:
                    tally.add(f"decompose:{cls}", n, False, np.inf)
                try:
                    af = antiholo_factorization(T)
                    rep = check_factorization(T, af)
                    tally.add("antiholo_split", n, rep.ok, rep.reconstruction_residual)
                    comm = commutator_antiholo(T)
                    rep = check_commutator(T, comm)
                    tally.add("commutator_antiholo", n, rep.ok, rep.reconstruction_residual)
                except IsofactorError:
                    tally.add("antiholo_split", n, False, np.inf)
        m = n + 1
        for t in range(trials):
            s = seed * 100003 + t
            T = random_su(m, s)
            fact = factor_su(T)
            rep = check_factorization(T, fact)
            tally.add("factor_su", m, rep.ok, rep.reconstruction_residual)
            R1, R2 = two_reversible_split(T)
            tally.add("two_reversible_split", m, True, float(np.linalg.norm(R1 @ R2 - T)))
            R = random_reversible_su(m, s)
            rep = check_commutator(R, commutator_split(R))
            tally.add("commutator_split", m, rep.ok, rep.reconstruction_residual)
            inv = random_involution(n, s)
            other = generate(GenSpec("elliptic", n, s)).matrix
            tally.add("hermitian_witness", n, bool(hermitian_witness(inv)) and not hermitian_witness(other))
    return tally


def _cmd_selftest(args, cfg) -> int:
    tally = selftest(args.n_range, args.trials, args.seed)
    sys.stdout.write(tally.table() + "\n")
    return EXIT_OK if tally.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="isofactor",
        description="Classify and factor isometries of complex hyperbolic space.",
        epilog=f"The environment variable {ENV_VAR} overrides the residual tolerance.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a labelled test element")
    g.add_argument("--class", dest="cls", required=True, choices=CLASS_NAMES)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--r", type=float, default=None, help="modulus of the expanding null eigenvalue")
    g.add_argument("--theta", type=float, default=None, help="phase of the distinguished eigenvalue")
    g.add_argument("--no-conjugate", action="store_true", help="emit the normal form itself")
    g.set_defaults(func=_cmd_gen)

    c = sub.add_parser("classify", help="classify a matrix of U(n,1)")
    c.add_argument("file")
    c.add_argument("--hermitian-form", default=None, help="JSON matrix of the form the input preserves")
    c.set_defaults(func=_cmd_classify)

    d = sub.add_parser("decompose", help="factor a matrix")
    d.add_argument("file")
    d.add_argument("--target", choices=("involutions", "antiholo", "commutator"), default="involutions")
    d.add_argument("--form", choices=("indefinite", "definite"), default="indefinite")
    d.add_argument("--hermitian-form", default=None, help="JSON matrix of the form the input preserves")
    d.set_defaults(func=_cmd_decompose)

    v = sub.add_parser("verify", help="check a factorization against its target")
    v.add_argument("target")
    v.add_argument("factors")
    v.add_argument("--tol", type=float, default=None, help="acceptance threshold for every residual")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("selftest", help="run the acceptance matrix")
    s.add_argument("--n-range", type=_parse_range, default=_parse_range("2..4"))
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tols = default_tolerances()
        if getattr(args, "trials", 1) < 1:
            raise InputError("--trials must be at least 1")
        cfg = RunConfig(args.command, tols, getattr(args, "seed", 0), getattr(args, "trials", 1))
        return args.func(args, cfg)
    except InputError as exc:
        sys.stderr.write(f"isofactor: {exc}\n")
        return EXIT_INPUT
    except (IsofactorError, ValueError) as exc:
        sys.stderr.write(f"isofactor: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
