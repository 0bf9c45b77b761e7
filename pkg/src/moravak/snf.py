"""Smith normal form over the discrete valuation ring Z_(p)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, IntegralityError
from .series import p_valuation


def _matrix(rows, p: int) -> list:
    out = [[Fraction(x) for x in row] for row in rows]
    for row in out:
        for x in row:
            if x.denominator % p == 0:
                raise IntegralityError(f"matrix entry {x} is not {p}-local")
    return out


def identity(n: int) -> list:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a, b) -> list:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(cols)]
            for i in range(len(a))]


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == D`` with ``D`` diagonal and ``U``, ``V`` invertible over Z_(p)."""

    prime: int
    diagonal: tuple  # valuations of the nonzero pivots, ascending
    rank: int
    U: list
    V: list
    D: list


def smith_normal_form(rows: Sequence[Sequence], p: int, ncols: int | None = None) -> SmithForm:
    A = _matrix(rows, p)
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    if any(len(r) != n for r in A):
        raise DomainError("ragged matrix")
    U = identity(m)
    V = identity(n)
    vals = []
    for k in range(min(m, n)):
        best = None
        for i in range(k, m):
            for j in range(k, n):
                if A[i][j] != 0:
                    v = p_valuation(A[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        A[k], A[i] = A[i], A[k]
        U[k], U[i] = U[i], U[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        for row in V:
            row[k], row[j] = row[j], row[k]
        unit = A[k][k] / Fraction(p) ** v
        A[k] = [x / unit for x in A[k]]
        U[k] = [x / unit for x in U[k]]
        piv = A[k][k]
        for i in range(m):
            if i != k and A[i][k] != 0:
                f = A[i][k] / piv
                A[i] = [a - f * b for a, b in zip(A[i], A[k])]
                U[i] = [a - f * b for a, b in zip(U[i], U[k])]
        for j in range(n):
            if j != k and A[k][j] != 0:
                f = A[k][j] / piv
                for row in A:
                    row[j] -= f * row[k]
                for row in V:
                    row[j] -= f * row[k]
        vals.append(v)
    return SmithForm(p, tuple(vals), len(vals), U, V, A)


@dataclass(frozen=True)
class AbelianGroupShape:
    """``Z_(p)^free_rank`` plus cyclic p-power torsion summands."""

    prime: int
    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        tors = tuple(sorted(int(t) for t in self.torsion))
        for t in tors:
            q = t
            while q % self.prime == 0:
                q //= self.prime
            if q != 1 or t == 1:
                raise DomainError(f"torsion order {t} is not a positive power of {self.prime}")
        object.__setattr__(self, "torsion", tors)

    def __add__(self, other: "AbelianGroupShape") -> "AbelianGroupShape":
        if other.prime != self.prime:
            raise DomainError("shapes over different primes")
        return AbelianGroupShape(self.prime, self.free_rank + other.free_rank,
                                 self.torsion + other.torsion)

    def times(self, k: int) -> "AbelianGroupShape":
        return AbelianGroupShape(self.prime, self.free_rank * k, self.torsion * k)

    def is_free(self) -> bool:
        return not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        counts: dict = {}
        for t in self.torsion:
            counts[t] = counts.get(t, 0) + 1
        for t, c in sorted(counts.items()):
            parts.append(f"Z/{t}" if c == 1 else f"(Z/{t})^{c}")
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion), "text": str(self)}


def smith_decompose(rows: Sequence[Sequence], p: int, ngens: int | None = None) -> AbelianGroupShape:
    """Shape of the cokernel of the relation matrix (rows are relations)."""
    if ngens is None:
        if not rows:
            raise DomainError("generator count needed for an empty relation matrix")
        ngens = len(rows[0])
    form = smith_normal_form(rows, p, ngens)
    torsion = tuple(p ** v for v in form.diagonal if v > 0)
    return AbelianGroupShape(p, ngens - form.rank, torsion)
