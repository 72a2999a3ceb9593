"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line with its case count and wall
time.  Run just these with ``pytest tests/test_acceptance.py -v``, or as a
script with ``python3 tests/test_acceptance.py``.
"""
import sys
import time
from pathlib import Path

import pytest

from supergeom import perms
from supergeom.dsl import emit_dsl, parse_atlas
from supergeom.fixtures import weighted_fixture
from supergeom.laws import run_suite
from supergeom.parity import total_reversion
from supergeom.polar import diag_embedding, polarize

FIXTURES = Path(__file__).parent / "fixtures"
SEED = 20240917


def _rows(rows, need=None):
    bad = [r.line() for r in rows if not r.ok]
    cases = sum(r.cases for r in rows)
    ok = not bad
    detail = f"{len(rows)} laws, {cases} checks"
    if need:
        for law, minimum in need.items():
            got = next((r.cases for r in rows if r.law == law), 0)
            if got < minimum:
                ok = False
                bad.append(f"{law}: {got} cases < {minimum}")
    return ok, detail + ("; " + "; ".join(bad[:3]) if bad else "")


def crit_cross_term():
    a = parse_atlas((FIXTURES / "cross_term.gsa").read_text()).atlas
    pi = total_reversion(a)
    golden = (FIXTURES / "cross_term.reversed.gsa").read_text()
    z, x, y = pi.chart.var(3), pi.chart.var(1), pi.chart.var(2)
    ok = emit_dsl(pi) == golden and pi.transition_map("U", "V").images[3] == z - x * y
    return ok, "x^(1,1) + x^(1,0) x^(0,1) -> x_pi^(1,1) - x_pi^(1,0) x_pi^(0,1)"


def crit_koszul():
    return _rows(run_suite("koszul", SEED, n_max=4), {"multiplicativity n=4": 9216})


def crit_phi():
    return _rows(run_suite("phi", SEED, n_max=3, count=100), {"naturality": 600, "composition": 3600})


def crit_flip():
    return _rows(run_suite("flip", SEED, n_max=3, count=3), {"group law": 36})


def crit_nice():
    return _rows(run_suite("nice", SEED, n_max=3, count=50), {"nice for every sigma": 50})


def crit_xi():
    return _rows(run_suite("xi", SEED, n_max=3, count=20), {"[n]-vector input gives even output": 10})


def crit_polar():
    ok, detail = _rows(run_suite("polar", SEED, n_max=3, count=51), {"roundtrip isomorphism": 50})
    # the diagonal image is fixed by every flip with the constant c(m) = m as well
    fixed = 0
    for case in range(12):
        a = weighted_fixture((SEED, "linear", case), 1 + case % 3)
        p = polarize(a, check=False)
        diag = diag_embedding(a, p, "linear")
        for per in p.action.entries.values():
            for u in a.chart_names:
                ok = ok and per[u].compose(diag.maps[(u, u)]) == diag.maps[(u, u)]
                fixed += 1
    return ok, detail + f", {fixed} flip checks with c(m) = m"


def crit_desuperize():
    return _rows(run_suite("desuperize", SEED, n_max=3, count=20), {"functor preserves composition": 20})


def crit_tangent():
    return _rows(run_suite("tangent", SEED, n_max=3, count=25), {"lift respects bracket": 100})


def crit_algebra():
    # three random polynomials per case
    return _rows(run_suite("algebra", SEED, count=350), {"associativity": 350})


CRITERIA = [
    (1, "cross-term reversion", crit_cross_term, 1),
    (2, "Koszul sign laws at n=4", crit_koszul, 5),
    (3, "Phi composition and naturality", crit_phi, 60),
    (4, "flip action on T^(3)", crit_flip, 30),
    (5, "nice coordinates", crit_nice, 60),
    (6, "Xi equivalence", crit_xi, 30),
    (7, "polarization roundtrip", crit_polar, 120),
    (8, "desuperization", crit_desuperize, 120),
    (9, "tangent calculus", crit_tangent, 30),
    (10, "algebra core", crit_algebra, 10),
]


def run_criterion(number, title, fn, limit):
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    passed = ok and elapsed < limit
    line = f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}  {title:<32} {elapsed:6.2f}s / {limit}s  {detail}"
    return passed, line


@pytest.mark.parametrize("number, title, fn, limit", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(number, title, fn, limit, capsys):
    passed, line = run_criterion(number, title, fn, limit)
    with capsys.disabled():
        print("\n" + line)
    assert passed, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(p for p, _ in results) else 1)
