"""Characteristic numbers of hypersurfaces and the nu_n-variety test.

Symmetric polynomials are handled in the monomial basis ``m_lambda`` indexed by
partitions, so nothing is ever expanded in ``r`` explicit variables unless a
caller asks for it.  Elementary products are expanded into that basis by
counting 0-1 matrices with prescribed row and column sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations

from .errors import DomainError
from .series import PLocalScalar


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(sorted((int(x) for x in self.parts), reverse=True))
        if any(x <= 0 for x in parts):
            raise DomainError(f"partition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def conjugate(self) -> "Partition":
        return Partition(conjugate(self.parts))


def conjugate(parts: tuple) -> tuple:
    if not parts:
        return ()
    return tuple(sum(1 for x in parts if x > i) for i in range(parts[0]))


@lru_cache(maxsize=None)
def count_01_matrices(rows: tuple, cols: tuple) -> int:
    """Number of 0-1 matrices with the given row sums and column sums."""
    if sum(rows) != sum(cols):
        return 0
    if not rows:
        return 1
    first, rest = rows[0], rows[1:]
    # columns with equal remaining sums are interchangeable
    classes = sorted(set(c for c in cols if c > 0), reverse=True)
    mult = {c: cols.count(c) for c in classes}
    total = 0

    def choose(i, need, picked):
        nonlocal total
        if need == 0:
            new = []
            for c in cols:
                new.append(c)
            ways = 1
            for c, j in picked:
                ways *= math.comb(mult[c], j)
                for _ in range(j):
                    new.remove(c)
                    new.append(c - 1)
            new = tuple(sorted((c for c in new if c > 0), reverse=True))
            total += ways * count_01_matrices(rest, new)
            return
        if i == len(classes):
            return
        c = classes[i]
        for j in range(min(mult[c], need), -1, -1):
            choose(i + 1, need - j, picked + ((c, j),) if j else picked)

    choose(0, first, ())
    return total


def partitions_of(n: int, max_len: int | None = None, max_part: int | None = None):
    """All partitions of ``n`` in lexicographically decreasing order."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield ()
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, None if max_len is None else max_len - 1, first):
            yield (first,) + rest


def elementary_in_monomial_basis(nu: tuple, r: int) -> dict:
    """``e_nu = sum_mu M[nu, mu] m_mu`` over partitions ``mu`` of length at most ``r``."""
    n = sum(nu)
    nu = tuple(sorted(nu, reverse=True))
    return {mu: c for mu in partitions_of(n, r)
            if (c := count_01_matrices(nu, mu))}


@dataclass(frozen=True)
class SymmetricResult:
    partition: Partition
    nvars: int
    elementary: dict  # partition of elementary indices -> coefficient

    def orbit_monomials(self):
        """Exponent vectors of the orbit sum ``P_J`` in ``nvars`` variables."""
        padded = self.partition.parts + (0,) * (self.nvars - len(self.partition))
        return sorted(set(permutations(padded)), reverse=True)

    def evaluate_elementary(self, sigma) -> Fraction:
        """``Q_J`` at the values ``sigma[1..r]`` (``sigma[0]`` is ignored)."""
        total = Fraction(0)
        for idx, c in self.elementary.items():
            term = Fraction(c)
            for i in idx:
                term *= sigma[i]
            total += term
        return total


def smallest_symmetric(J, r: int) -> SymmetricResult:
    """The orbit sum of ``x^J`` and its expression in elementary symmetric polynomials."""
    J = J if isinstance(J, Partition) else Partition(tuple(J))
    if r < len(J):
        raise DomainError(f"{r} variables cannot carry a partition of length {len(J)}")
    current = {J.parts: 1}
    Q: dict = {}
    while current:
        mu = max(current)
        c = current[mu]
        nu = conjugate(mu)
        Q[nu] = Q.get(nu, 0) + c
        for lam, m in elementary_in_monomial_basis(nu, r).items():
            v = current.get(lam, 0) - c * m
            if v:
                current[lam] = v
            else:
                current.pop(lam, None)
    return SymmetricResult(J, r, {k: v for k, v in Q.items() if v})


def newton_power_sum(e, k: int) -> Fraction:
    """Power sum ``p_k`` from elementary values ``e[1..k]`` by Newton's identities."""
    p = [Fraction(0)] * (k + 1)
    for j in range(1, k + 1):
        acc = Fraction((-1) ** (j - 1) * j) * (e[j] if j < len(e) else 0)
        for i in range(1, j):
            acc += (-1) ** (i - 1) * (e[i] if i < len(e) else 0) * p[j - i]
        p[j] = acc
    return p[k]


@dataclass(frozen=True)
class HypersurfaceChernData:
    """Total Chern class of minus the tangent bundle of a degree-k hypersurface."""

    dim: int
    degree: int

    @property
    def chern(self) -> tuple:
        """``c_0..c_D`` with ``c(-T) = (1 + k h)(1 + h)^-(D+2)`` truncated at ``h^D``."""
        D, k = self.dim, self.degree
        m = D + 2

        def binom_neg(i):
            return (-1) ** i * math.comb(m + i - 1, i) if i >= 0 else 0

        return tuple(binom_neg(i) + k * binom_neg(i - 1) for i in range(D + 1))

    def degree_of_top(self, coeff) -> Fraction:
        """Degree of ``coeff * h^D``."""
        return Fraction(coeff) * self.degree


def milnor_degree_closed(k: int, D: int) -> int:
    return k ** (D + 1) - (D + 2) * k


def milnor_degree_pipeline(k: int, D: int) -> Fraction:
    """``deg S_D`` through ``Q_(D)`` evaluated at the Chern classes."""
    data = HypersurfaceChernData(D, k)
    Q = smallest_symmetric((D,), D)
    return data.degree_of_top(Q.evaluate_elementary(data.chern))


def milnor_number(k: int, D: int, p: int, method: str = "closed") -> PLocalScalar:
    if D < 1:
        raise DomainError("dimension must be positive")
    if method == "closed":
        deg = milnor_degree_closed(k, D)
    elif method == "pipeline":
        deg = milnor_degree_pipeline(k, D)
    else:
        raise ValueError(f"unknown method {method!r}")
    if Fraction(deg) % p:
        raise DomainError(f"degree of S not divisible by p: deg S_{D} = {deg}")
    return PLocalScalar(p, Fraction(deg) / p)


def nu_check(k: int, D: int, p: int, n: int) -> bool:
    if D != p ** n - 1:
        return False
    return milnor_number(k, D, p).is_unit()


@dataclass(frozen=True)
class EulerVerdict:
    kind: str  # "zero", "unit_times_vn" or "unspecified"
    invertible: bool | None = None

    def as_dict(self) -> dict:
        return {"kind": self.kind, "invertible": self.invertible}


def euler_char_kn_mod_p(D: int, p: int, n: int, s_d=None) -> EulerVerdict:
    step = p ** n - 1
    if D % step:
        return EulerVerdict("zero", False)
    if D != step:
        return EulerVerdict("unspecified")
    if s_d is None:
        return EulerVerdict("unit_times_vn")
    return EulerVerdict("unit_times_vn", PLocalScalar.of(s_d, p).is_unit())
