"""Linear algebra over prime fields GF(p).

Subspaces are stored by the reduced row echelon form of a spanning set, which
makes them hashable and canonical.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def rref(rows, p: int) -> tuple[tuple[int, ...], ...]:
    """Reduced row echelon form of ``rows`` over GF(p), zero rows dropped."""
    m = [[x % p for x in r] for r in rows]
    if not m:
        return ()
    ncols = len(m[0])
    out: list[list[int]] = []
    for c in range(ncols):
        piv = next((i for i, r in enumerate(m) if r[c]), None)
        if piv is None:
            continue
        r = m.pop(piv)
        inv = pow(r[c], p - 2, p)
        r = [(x * inv) % p for x in r]
        for other in itertools.chain(out, m):
            f = other[c]
            if f:
                for j in range(ncols):
                    other[j] = (other[j] - f * r[j]) % p
        out.append(r)
        m = [x for x in m if any(x)]
    return tuple(tuple(r) for r in out)


def rank(rows, p: int) -> int:
    return len(rref(rows, p))


def mat_vec(g, v, p: int) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) % p for row in g)


def mat_mul(a, b, p: int) -> tuple[tuple[int, ...], ...]:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(r, c)) % p for c in cols) for r in a)


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^n given by its canonical echelon basis."""

    p: int
    n: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, vectors, p: int, n: int) -> "Subspace":
        return cls(p, n, rref(list(vectors), p))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def key(self) -> str:
        return "".join(str(x) for r in self.basis for x in r)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.p, self.n)

    def __le__(self, other: "Subspace") -> bool:  # type: ignore[override]
        return self.dim <= other.dim and (self + other).dim == other.dim

    def __lt__(self, other: "Subspace") -> bool:  # type: ignore[override]
        return self.dim < other.dim and self <= other

    def meet(self, other: "Subspace") -> "Subspace":
        return intersection(self, other)

    def image(self, g) -> "Subspace":
        return Subspace.span([mat_vec(g, v, self.p) for v in self.basis], self.p, self.n)

    def vectors(self):
        """All vectors of the subspace."""
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield tuple(
                sum(c * b[j] for c, b in zip(coeffs, self.basis)) % self.p for j in range(self.n)
            )

    def __repr__(self) -> str:
        return f"<{self.key or '0'}>"


def intersection(a: Subspace, b: Subspace) -> Subspace:
    p, n = a.p, a.n
    if not a.basis or not b.basis:
        return Subspace(p, n, ())
    # Zassenhaus: echelonize [a | a] over [b | 0]; rows with zero left half give the meet.
    rows = [list(v) + list(v) for v in a.basis] + [list(v) + [0] * n for v in b.basis]
    red = rref(rows, p)
    meet = [r[n:] for r in red if not any(r[:n])]
    return Subspace.span(meet, p, n)


def total_span(spaces, p: int, n: int) -> Subspace:
    return Subspace.span([v for s in spaces for v in s.basis], p, n)


def is_direct(spaces) -> bool:
    spaces = list(spaces)
    if not spaces:
        return True
    s = total_span(spaces, spaces[0].p, spaces[0].n)
    return s.dim == sum(x.dim for x in spaces)


def all_subspaces(p: int, n: int, dim: int) -> list[Subspace]:
    """Every ``dim``-dimensional subspace of GF(p)^n, sorted by key."""
    out = []
    for pivots in itertools.combinations(range(n), dim):
        free = [(i, j) for i, c in enumerate(pivots) for j in range(c + 1, n) if j not in pivots]
        for vals in itertools.product(range(p), repeat=len(free)):
            m = [[0] * n for _ in range(dim)]
            for i, c in enumerate(pivots):
                m[i][c] = 1
            for (i, j), v in zip(free, vals):
                m[i][j] = v
            out.append(Subspace(p, n, tuple(tuple(r) for r in m)))
    out.sort(key=lambda s: s.key)
    return out


def proper_subspaces(p: int, n: int) -> list[Subspace]:
    """Nonzero proper subspaces ordered by dimension, then key."""
    return [s for d in range(1, n) for s in all_subspaces(p, n, d)]


def primitive_root(p: int) -> int:
    if p == 2:
        return 1
    return next(g for g in range(2, p) if all(pow(g, (p - 1) // q, p) != 1
                                              for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)))


def general_linear_generators(p: int, n: int) -> list[tuple[tuple[int, ...], ...]]:
    """A generating set of GL_n(p): a primitive diagonal element, a transvection and an n-cycle."""
    gens = []
    if p > 2:
        prim = primitive_root(p)
        d = [list(r) for r in identity(n)]
        d[0][0] = prim
        gens.append(tuple(tuple(r) for r in d))
    if n >= 2:
        t = [list(r) for r in identity(n)]
        t[0][1] = 1
        gens.append(tuple(tuple(r) for r in t))
        c = tuple(tuple(int(j == (i + 1) % n) for j in range(n)) for i in range(n))
        gens.append(c)
    return gens


def gl_order(p: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out
