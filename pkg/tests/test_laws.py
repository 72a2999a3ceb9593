import pytest

from supergeom.laws import SUITES, run_suite

SMALL = {"algebra": 40, "phi": 2, "flip": 1, "tangent": 5, "bundle": 2, "nice": 3, "xi": 2,
         "polar": 4, "desuperize": 2, "dsl": 3}


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes(name):
    rows = run_suite(name, seed=11, n_max=3, count=SMALL.get(name))
    assert rows
    bad = [r.line() for r in rows if not r.ok]
    assert not bad, "\n".join(bad)
    assert all(r.cases > 0 for r in rows)


def test_suites_are_deterministic():
    first = [r.line() for r in run_suite("algebra", 5, count=20)]
    assert first == [r.line() for r in run_suite("algebra", 5, count=20)]


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("nope", 0)
