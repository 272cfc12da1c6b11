"""Acceptance criteria, one test per criterion.

Each check prints a single ``criterion N ... PASS|FAIL`` line with the
measured worst case.  Run directly (``python3 tests/test_acceptance.py``) to
get just the eight lines.
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from isofactor.antiholo import (
    antiholo_factorization,
    antiholo_split,
    commutator_antiholo,
)
from isofactor.classify import IsometryClass, classify_isometry
from isofactor.factorization import Factor, Factorization, FactorTag
from isofactor.forms import HermitianSpace
from isofactor.gen import (
    GenSpec,
    generate,
    min_n,
    random_involution,
    random_reversible_su,
    random_su,
)
from isofactor.spectral import unitary_log_sample
from isofactor.sun_factor import commutator_split, factor_su, two_reversible_split
from isofactor.un1_factor import decompose, hermitian_witness
from isofactor.verify import check_factorization

pytestmark = pytest.mark.acceptance

UN1_CLASSES = [c.value for c in IsometryClass]
EXPECTED_K = {"elliptic": 0, "hyperbolic": 1, "ellipto_translation": 1, "ellipto_parabolic": 2}


def _elements(per_class, n_values=(2, 3, 4)):
    """``per_class`` generated elements per class and dimension, seeds 0.."""
    for cls in UN1_CLASSES:
        for n in n_values:
            if n < min_n(cls):
                continue
            for seed in range(per_class):
                yield cls, n, generate(GenSpec(cls, n, seed)).matrix


def _per_class(count, n_values=(2, 3, 4)):
    """``count`` generated elements per class, cycling through ``n_values``."""
    for cls in UN1_CLASSES:
        ns = [n for n in n_values if n >= min_n(cls)]
        for seed in range(count):
            n = ns[seed % len(ns)]
            yield cls, n, generate(GenSpec(cls, n, seed)).matrix


def criterion_1():
    """SU(n) involution length."""
    t0 = time.perf_counter()
    worst_inv = worst_unit = worst_rec = 0.0
    bad = 0
    for n in range(3, 9):
        bound = 5 if n % 4 == 2 else 4
        for seed in range(200):
            T = random_su(n, seed)
            f = factor_su(T)
            for F in f.factors:
                M = F.matrix
                worst_inv = max(worst_inv, np.linalg.norm(M @ M - np.eye(n)))
                worst_unit = max(worst_unit, np.linalg.norm(M.conj().T @ M - np.eye(n)))
            worst_rec = max(worst_rec, f.residual)
            bad += len(f.factors) > bound or any(F.tag is not FactorTag.INVOLUTION for F in f.factors)
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and worst_inv <= 1e-9 and worst_unit <= 1e-9 and worst_rec <= 1e-8 and elapsed < 30
    return ok, f"over-length={bad}, involution={worst_inv:.1e}, unitarity={worst_unit:.1e}, reconstruction={worst_rec:.1e}, {elapsed:.1f}s"


def _display(lam):
    """``R1 = diag(P1, conj P1, P3, conj P3, ...)``, ``R2 = diag(1, P2, conj P2, ...)``."""
    P = np.cumprod(np.concatenate([[1.0], lam]))  # P[k] = lambda_1 ... lambda_k
    n = len(lam)
    r1, r2 = [], [1.0]
    for j in range(1, n + 1, 2):
        r1 += [P[j], np.conj(P[j])]
    for j in range(2, n + 1, 2):
        r2 += [P[j], np.conj(P[j])]
    return np.array(r1[:n]), np.array(r2[:n])


def criterion_2():
    """Two-reversible split matches the closed-form diagonals."""
    worst = 0.0
    missing_one = 0
    count = 0
    rng = np.random.default_rng(2)
    for n in range(2, 9):
        for _ in range(50):
            a = rng.uniform(0, 2 * np.pi, n)
            a[-1] = -a[:-1].sum()
            lam = np.exp(1j * a)
            R1, R2 = two_reversible_split(np.diag(lam))
            order = np.argsort(np.angle(lam) % (2 * np.pi), kind="stable")
            r1, r2 = _display(lam[order])
            e1 = np.zeros(n, dtype=complex)
            e2 = np.zeros(n, dtype=complex)
            e1[order], e2[order] = r1, r2
            worst = max(worst, np.max(np.abs(R1 - np.diag(e1))), np.max(np.abs(R2 - np.diag(e2))))
            missing_one += np.min(np.abs(np.linalg.eigvals(R2) - 1)) > 1e-12
            count += 1
    ok = worst <= 1e-12 and missing_one == 0
    return ok, f"{count} diagonal elements, worst entry error={worst:.1e}, R2 without eigenvalue 1: {missing_one}"


def criterion_3():
    """Involution-and-reflection table for U(n,1)."""
    failures = []
    worst = 0.0
    total = 0
    for cls, n, T in _elements(100):
        f = decompose(T)
        refl = [F for F in f.factors if F.tag is FactorTag.K_REFLECTION]
        invs = [F for F in f.factors if F.tag is FactorTag.INVOLUTION]
        want = EXPECTED_K.get(cls)
        shape_ok = len(invs) <= 4 and ([F.k for F in refl] == ([want] if want is not None else []))
        rep = check_factorization(T, f)
        worst = max(worst, f.residual)
        total += 1
        if not (shape_ok and f.residual <= 1e-7 and rep.ok):
            failures.append((cls, n))
    return not failures, f"{total} elements, failures={len(failures)}, worst residual={worst:.1e}"


def criterion_4():
    """Hermitian witness succeeds exactly on involutions."""
    fp = fn = 0
    worst_inv = 0.0
    least_non = np.inf
    for i in range(200):
        n = 1 + i % 4
        w = hermitian_witness(random_involution(n, i))
        worst_inv = max(worst_inv, w.defect)
        fn += not w
    non_classes = [c for c in UN1_CLASSES if c != "central"]
    for i in range(200):
        cls = non_classes[i % len(non_classes)]
        n = max(min_n(cls), 2 + i % 3)
        T = generate(GenSpec(cls, n, 1000 + i)).matrix
        w = hermitian_witness(T)
        least_non = min(least_non, w.defect)
        fp += bool(w)
    ok = fp == 0 and fn == 0 and worst_inv <= 1e-8 and least_non >= 1e-4
    return ok, f"false positives={fp}, false negatives={fn}, involution defect<={worst_inv:.1e}, non-involution defect>={least_non:.1e}"


def criterion_5():
    """Anti-holomorphic split and commutator."""
    worst_inv = worst_pt = worst_comm = 0.0
    total = 0
    for cls, n, T in _per_class(100):
        beta, alpha = antiholo_split(T)
        worst_inv = max(worst_inv, beta.involution_residual, alpha.involution_residual)
        r = np.random.default_rng(total)
        V = r.standard_normal((n + 1, 20)) + 1j * r.standard_normal((n + 1, 20))
        got = beta.matrix @ np.conj(alpha.matrix @ np.conj(V))
        err = np.linalg.norm(got - T @ V, axis=0) / (np.linalg.norm(T, 2) * np.linalg.norm(V, axis=0))
        worst_pt = max(worst_pt, float(err.max()))
        total += 1
    for i in range(100):
        n = 1 + i % 4
        A = unitary_log_sample(HermitianSpace(n), i, 0.2 + 1.8 * (i % 10) / 9, purpose="acceptance-5")
        worst_comm = max(worst_comm, commutator_antiholo(A).residual)
    ok = worst_inv <= 1e-9 and worst_pt <= 1e-8 and worst_comm <= 1e-8
    return ok, f"{total} split elements, involution={worst_inv:.1e}, pointwise={worst_pt:.1e}, commutator={worst_comm:.1e}"


def criterion_6():
    """Reversible SU(n) elements are commutators."""
    worst = 0.0
    for i in range(200):
        n = 2 + i % 7
        T = random_reversible_su(n, i)
        worst = max(worst, commutator_split(T).residual)
    return worst <= 1e-8, f"200 elements, worst residual={worst:.1e}"


def _fuzzed(f, rng):
    i = int(rng.integers(len(f.factors)))
    F = f.factors[i]
    M = F.matrix.copy()
    r, c = rng.integers(M.shape[0], size=2)
    M[r, c] += 1e-3 * np.exp(2j * np.pi * rng.random())
    fs = list(f.factors)
    fs[i] = Factor(M, F.tag, F.k, F.lam)
    return Factorization(f.lift_scalar, tuple(fs), f.target, f.form, f.isometry_class, f.beyond_paper)


def criterion_7():
    """Fuzzed factorizations are rejected; classification round-trips."""
    rng = np.random.default_rng(7)
    fuzzed = accepted = 0
    wrong_class = total = 0
    for cls, n, T in _elements(100):
        total += 1
        wrong_class += classify_isometry(T).isometry_class.value != cls
        for f in (decompose(T), antiholo_factorization(T)):
            if f.factors:
                fuzzed += 1
                accepted += check_factorization(T, _fuzzed(f, rng)).ok
    for n in range(2, 9):
        for seed in range(20):
            T = random_su(n, seed)
            f = factor_su(T)
            fuzzed += 1
            accepted += check_factorization(T, _fuzzed(f, rng)).ok
    ok = accepted == 0 and wrong_class == 0
    return ok, f"fuzzed accepted={accepted}/{fuzzed}, misclassified={wrong_class}/{total}"


def criterion_8():
    """The selftest report is byte-identical across runs."""
    cmd = [sys.executable, "-m", "isofactor", "selftest", "--n-range", "2..4", "--trials", "10", "--seed", "2026"]
    runs = [subprocess.run(cmd, capture_output=True) for _ in range(2)]
    same = runs[0].stdout == runs[1].stdout and runs[0].returncode == runs[1].returncode
    verdict = runs[0].stdout.decode().strip().splitlines()[-1] if runs[0].stdout else "no output"
    return same and len(runs[0].stdout) > 0, f"identical={same}, {len(runs[0].stdout)} bytes, selftest verdict {verdict}"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def _line(i, fn, ok, detail):
    return f"criterion {i} ({fn.__doc__.strip().rstrip('.')}): {'PASS' if ok else 'FAIL'} [{detail}]"


@pytest.mark.parametrize("idx", range(1, 9))
def test_criterion(idx, capsys):
    fn = CRITERIA[idx - 1]
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + _line(idx, fn, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail = fn()
        results.append(ok)
        print(_line(i, fn, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
