"""Exact integer Smith normal form and homology of chain complexes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    if inner is None:
        inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U @ A @ V == D``, ``U`` and ``V`` unimodular.

    ``D`` is diagonal with non-negative entries, each dividing the next.
    Python integers keep every step exact.
    """
    m = len(a)
    n = ncols if ncols is not None else (len(a[0]) if m else 0)
    d = [list(map(int, row)) for row in a]
    u = identity_matrix(m)
    v = identity_matrix(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = d[t][t]
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
            rest = [(abs(d[i][t]), i, "r") for i in range(t + 1, m) if d[i][t]]
            rest += [(abs(d[t][j]), j, "c") for j in range(t + 1, n) if d[t][j]]
            if rest:
                # a remainder smaller than the pivot: make it the pivot
                _, k, kind = min(rest)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return d, u, v


def invariant_factors(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    d, _, _ = smith_normal_form(a, ncols)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def determinant(a: Matrix) -> int:
    """Exact integer determinant by fraction-free elimination (Bareiss)."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def is_smith_form(d: Matrix) -> bool:
    rows, cols = len(d), len(d[0]) if d else 0
    if any(d[i][j] for i in range(rows) for j in range(cols) if i != j):
        return False
    diag = [d[i][i] for i in range(min(rows, cols))]
    if any(x < 0 for x in diag):
        return False
    nz = [x for x in diag if x]
    if diag[: len(nz)] != nz:
        return False
    return all(b % a == 0 for a, b in zip(nz, nz[1:]))


@dataclass(frozen=True)
class ChainComplex:
    """Free chain groups of the given ranks with boundaries ``∂_k: C_k -> C_{k-1}``.

    ``boundaries[k]`` is a ``ranks[k-1] x ranks[k]`` matrix; ``boundaries[0]``
    is unused.
    """

    ranks: tuple[int, ...]
    boundaries: tuple[Matrix, ...]

    def boundary_squares_vanish(self) -> bool:
        for k in range(2, len(self.ranks)):
            prod = matmul(self.boundaries[k - 1], self.boundaries[k], inner=self.ranks[k - 1])
            if any(x for row in prod for x in row):
                return False
        return True


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    chain_ranks: tuple[int, ...]
    exact_through: int

    @property
    def reduced_betti(self) -> tuple[int, ...]:
        if not self.betti or self.chain_ranks[0] == 0:
            return self.betti
        return (self.betti[0] - 1,) + self.betti[1:]

    @property
    def euler_from_chains(self) -> int:
        return sum((-1) ** k * r for k, r in enumerate(self.chain_ranks))

    @property
    def euler_from_betti(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    def reduced_trivial(self, up_to: int | None = None) -> bool:
        top = self.exact_through if up_to is None else min(up_to, self.exact_through)
        return all(b == 0 for b in self.reduced_betti[: top + 1]) and not any(self.torsion[: top + 1])

    def profile(self) -> str:
        groups = []
        for b, tors in zip(self.betti, self.torsion):
            parts = []
            if b:
                parts.append("ℤ" if b == 1 else f"ℤ^{b}")
            parts += [f"ℤ/{t}" for t in tors]
            groups.append(" ⊕ ".join(parts) if parts else "0")
        return "(" + ", ".join(groups) + ")"

    def to_dict(self) -> dict:
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "chain_ranks": list(self.chain_ranks),
            "exact_through": self.exact_through,
            "profile": self.profile(),
        }


def homology(complex_: ChainComplex, exact_through: int | None = None) -> HomologyResult:
    """Integer homology via Smith normal form of each boundary matrix."""
    ranks = complex_.ranks
    top = len(ranks) - 1
    rank_of = [0] * (top + 2)
    factors: list[list[int]] = [[] for _ in range(top + 2)]
    for k in range(1, top + 1):
        if ranks[k] and ranks[k - 1]:
            inv = invariant_factors(complex_.boundaries[k], ncols=ranks[k])
            rank_of[k] = len(inv)
            factors[k] = inv
    betti = tuple(ranks[k] - rank_of[k] - rank_of[k + 1] for k in range(top + 1))
    torsion = tuple(tuple(f for f in factors[k + 1] if f > 1) for k in range(top + 1))
    return HomologyResult(betti, torsion, tuple(ranks), top if exact_through is None else exact_through)
