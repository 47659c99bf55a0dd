"""Exact linear solves by fraction-free (Bareiss) elimination."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .rational import common_denominator


class SingularMatrix(ValueError):
    pass


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``A x = b`` exactly for square nonsingular ``A``.

    Each row of ``[A | b]`` is scaled to integers first, so the elimination
    itself runs on Python ints and every intermediate division is exact.
    """
    n = len(A)
    if any(len(row) != n for row in A) or len(b) != n:
        raise ValueError("expected a square system")
    M: list[list[int]] = []
    for row, rhs in zip(A, b):
        full = [Fraction(x) for x in row] + [Fraction(rhs)]
        d = common_denominator(full)
        M.append([int(x * d) for x in full])

    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        pk = M[k]
        akk = pk[k]
        for i in range(k + 1, n):
            row = M[i]
            aik = row[k]
            for j in range(k + 1, n + 1):
                row[j] = (row[j] * akk - aik * pk[j]) // prev
            row[k] = 0
        prev = akk

    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(M[i][n])
        for j in range(i + 1, n):
            acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return x


DENSE_LIMIT = 60


def sparse_solve(rows: Sequence[dict], rhs: Sequence[Fraction]) -> dict:
    """Solve a square sparse system given as ``rows[i] = {var: coef}``.

    Gauss-Jordan with a pivot variable of fewest remaining occurrences at
    each step, which keeps fill-in low on chain-shaped systems.  Returns
    ``{var: value}``.
    """
    rows = [{v: Fraction(c) for v, c in r.items() if c != 0} for r in rows]
    rhs = [Fraction(x) for x in rhs]
    occurs: dict = {}
    for i, r in enumerate(rows):
        for v in r:
            occurs.setdefault(v, set()).add(i)
    if len(occurs) != len(rows):
        raise ValueError("expected a square system")
    free = set(range(len(rows)))
    pivot_row: dict = {}
    pending = set(occurs)
    while pending:
        v = min(pending, key=lambda u: (len(occurs[u] & free), repr(u)))
        cands = occurs[v] & free
        if not cands:
            raise SingularMatrix("matrix is singular")
        r = min(cands, key=lambda i: (len(rows[i]), i))
        row = rows[r]
        c = row[v]
        if c != 1:
            for u in row:
                row[u] /= c
            rhs[r] /= c
        for q in list(occurs[v]):
            if q == r:
                continue
            other = rows[q]
            f = other[v]
            for u, cu in row.items():
                x = other.get(u, 0) - f * cu
                if x:
                    other[u] = x
                    occurs[u].add(q)
                else:
                    other.pop(u, None)
                    occurs[u].discard(q)
            rhs[q] -= f * rhs[r]
        free.discard(r)
        pending.discard(v)
        pivot_row[v] = r
    return {v: rhs[r] for v, r in pivot_row.items()}


def solve_system(rows: Sequence[dict], rhs: Sequence[Fraction], variables: Sequence) -> dict:
    """Exact solve of ``rows · x = rhs`` over ``variables``; dense Bareiss for
    small systems, sparse elimination otherwise."""
    if len(variables) <= DENSE_LIMIT:
        A = [[r.get(v, 0) for v in variables] for r in rows]
        return dict(zip(variables, solve(A, rhs)))
    return sparse_solve(rows, rhs)
