"""Permutations of {1..n} in one-line notation.

Internally a permutation is a tuple ``p`` of 0-based images, ``p[i] = sigma(i+1) - 1``.
Products follow function composition: ``compose(p, q)`` is ``p o q`` (apply ``q`` first).
Weights are acted on from the right, ``alpha^sigma = alpha o sigma``.
"""
from __future__ import annotations

import itertools
from math import factorial

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    if len(p) != len(q):
        raise ValueError(f"permutation size mismatch: {len(p)} vs {len(q)}")
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_perm(p) -> bool:
    return sorted(p) == list(range(len(p)))


def act(alpha: tuple[int, ...], p: Perm) -> tuple[int, ...]:
    """Right action on weight tuples: ``(alpha o sigma)_k = alpha_{sigma(k)}``."""
    if len(alpha) != len(p):
        raise ValueError(f"weight of length {len(alpha)} vs permutation of size {len(p)}")
    return tuple(alpha[p[k]] for k in range(len(p)))


def all_perms(n: int) -> list[Perm]:
    return [tuple(p) for p in itertools.permutations(range(n))]


def transposition(n: int, i: int, j: int) -> Perm:
    """Transposition of the 1-based slots ``i`` and ``j``."""
    p = list(range(n))
    p[i - 1], p[j - 1] = p[j - 1], p[i - 1]
    return tuple(p)


def adjacent_transpositions(n: int) -> list[Perm]:
    return [transposition(n, i, i + 1) for i in range(1, n)]


def sign(p: Perm) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def extend(p: Perm, n: int) -> Perm:
    """Embed ``p`` in S_n acting trivially on the trailing slots."""
    return tuple(p) + tuple(range(len(p), n))


def stabilizer(alpha: tuple[int, ...]) -> list[Perm]:
    return [p for p in all_perms(len(alpha)) if act(alpha, p) == tuple(alpha)]


def stabilizer_order(alpha: tuple[int, ...]) -> int:
    m = sum(alpha)
    return factorial(m) * factorial(len(alpha) - m)


def parse(text: str) -> Perm:
    """Parse 1-based one-line notation such as ``"2 1 3"`` or ``"2,1,3"``."""
    parts = text.replace(",", " ").split()
    try:
        p = tuple(int(x) - 1 for x in parts)
    except ValueError:
        raise ValueError(f"not a permutation: {text!r}") from None
    if not p or not is_perm(p):
        raise ValueError(f"not a permutation: {text!r}")
    return p


def format_perm(p: Perm) -> str:
    return " ".join(str(x + 1) for x in p)
