"""Torsion bounds in low-codimension Chow groups of quadrics (p = 2).

Two routes to the same number.  :func:`torsion_bound` evaluates the closed
case analysis.  :func:`build_instance` plus :func:`compute_gr_torsion` rebuild
it from the declared gamma-filtration generators inside the lattice spanned by
the linear-subspace classes ``l_s``, with arbitrary tail coefficients, and read
the torsion of the graded piece off a Smith normal form.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ConsistencyError, DomainError
from .series import p_valuation
from .snf import AbelianGroupShape, smith_decompose, smith_normal_form

P = 2


def nu2(x: int) -> int:
    return p_valuation(x, 2)


@dataclass(frozen=True)
class QuadricParams:
    n: int
    D: int
    d: int
    j: int
    r: int | None

    @property
    def step(self) -> int:
        return 2 ** self.n - 1

    @property
    def odd(self) -> bool:
        return self.D % 2 == 1

    def as_dict(self) -> dict:
        return {"n": self.n, "dim": self.D, "d": self.d, "j": self.j, "r": self.r,
                "parity": "odd" if self.odd else "even"}


def classify(n: int, D: int) -> QuadricParams:
    if n < 1:
        raise DomainError("n must be positive")
    if D < 2 ** (n + 2) - 3:
        raise DomainError(f"dimension below guaranteed splitting threshold: "
                          f"need dim >= {2 ** (n + 2) - 3}, got {D}")
    N = 2 ** n - 1
    d = D // 2
    j = (d - 1) % N
    r = (d - 1) // N if j == 0 else None
    if r is not None and D % 2 == 0 and r < 2:
        raise DomainError(f"even-dimensional case needs r >= 2, got r = {r}")
    return QuadricParams(n, D, d, j, r)


def torsion_free_range(p: int, n: int) -> int:
    """Codimensions up to this value carry no p-torsion."""
    return (p ** n - 1) // (p - 1)


def bound_exponent(params: QuadricParams) -> int:
    """``s`` with torsion at codim ``2^n`` at most ``Z/2^s`` (0 means none)."""
    if params.j != 0:
        return 0
    if params.odd:
        return 1
    r = params.r
    if r % 2 == 0:
        return 1
    return min(nu2(r - 1) + 2, 2 ** params.n)


@dataclass(frozen=True)
class TorsionBound:
    params: QuadricParams
    table: dict  # codim -> (free rank, torsion order bound)

    @property
    def codim(self) -> int:
        return 2 ** self.params.n

    @property
    def order(self) -> int:
        return self.table[self.codim][1]

    def as_dict(self) -> dict:
        return {**self.params.as_dict(),
                "torsion_free_upto": torsion_free_range(P, self.params.n),
                "codim": self.codim, "free_rank": self.table[self.codim][0],
                "torsion_order": self.order,
                "table": {str(k): {"free_rank": f, "torsion_order": o}
                          for k, (f, o) in sorted(self.table.items())}}


def torsion_bound(n: int, D: int) -> TorsionBound:
    params = classify(n, D)
    table = {i: (1, 1) for i in range(2 ** n)}
    table[2 ** n] = (1, 2 ** bound_exponent(params))
    return TorsionBound(params, table)


@dataclass(frozen=True)
class ValuationConstants:
    """2-adic valuations of the leading coefficients of the declared generators."""

    r: int | None
    n: int

    @property
    def e_unit(self) -> bool:
        return True

    @property
    def t_r(self) -> int | None:
        if self.r is None or self.r < 2:
            return None
        if self.r % 2 == 0:
            return 1
        return nu2(self.r - 1) + 2

    @property
    def f_valuation(self) -> int:
        return 2 ** self.n


class TailSource:
    """Supplies tail coefficients and unit multipliers in Z_(2)."""

    def tail(self, element: str, index: int) -> Fraction:
        raise NotImplementedError

    def unit(self, element: str) -> Fraction:
        raise NotImplementedError


class ZeroTails(TailSource):
    def tail(self, element, index):
        return Fraction(0)

    def unit(self, element):
        return Fraction(1)


class RandomTails(TailSource):
    """Seeded random 2-local values; units have odd numerator and denominator."""

    def __init__(self, seed: int, bound: int = 64):
        self.rng = random.Random(seed)
        self.bound = bound

    def _odd(self):
        return 2 * self.rng.randint(0, self.bound) + 1

    def tail(self, element, index):
        num = self.rng.randint(-self.bound, self.bound)
        return Fraction(num, self._odd())

    def unit(self, element):
        sign = self.rng.choice((1, -1))
        return Fraction(sign * self._odd(), self._odd())


@dataclass(frozen=True)
class DeclaredElement:
    name: str
    leading: int
    level: int
    coeffs: dict = field(hash=False)  # basis index -> Z_(2) coefficient

    @property
    def leading_coefficient(self) -> Fraction:
        return self.coeffs[self.leading]


@dataclass(frozen=True)
class QuadricFiltrationInstance:
    params: QuadricParams
    basis: tuple  # indices d, d - N, ..., >= 0
    elements: tuple

    @property
    def component(self) -> int:
        """Graded component of every ``l_s`` in the progression, modulo ``2^n - 1``."""
        return (1 + self.params.j) % self.params.step

    def promote(self, level: int) -> int:
        """Smallest level at or above ``level`` compatible with the component."""
        N = self.params.step
        c = self.component
        while level % N != c % N:
            level += 1
        return level

    def vectors(self, min_level: int) -> list:
        rows = []
        for el in self.elements:
            if self.promote(el.level) >= min_level:
                rows.append([el.coeffs.get(s, Fraction(0)) for s in self.basis])
        return rows


def build_instance(params: QuadricParams, tails: TailSource | None = None,
                   consts: ValuationConstants | None = None) -> QuadricFiltrationInstance:
    if params.j != 0:
        raise DomainError("engine not applicable; bound is trivial because l_d lies "
                          "in a filtration step beyond codimension 2^n")
    tails = ZeroTails() if tails is None else tails
    consts = ValuationConstants(params.r, params.n) if consts is None else consts
    n, d, N = params.n, params.d, params.step
    basis = tuple(range(d, -1, -N))

    def element(name, lead, coeff, level):
        coeffs = {lead: Fraction(coeff)}
        for s in basis:
            if s < lead:
                coeffs[s] = tails.tail(name, s)
        return DeclaredElement(name, lead, level, coeffs)

    seeds = [element("a", d, tails.unit("a"), 2 ** n)]
    if consts.t_r is not None:
        seeds.append(element("b", d, 2 ** consts.t_r * tails.unit("b"), 2 ** (n + 1) - 1))
    seeds.append(element("c", d, 2 ** consts.f_valuation * tails.unit("c"), 2 ** (n + 1) - 1))
    if params.odd:
        seeds.append(element("d", d, 2, d))
    out = []
    for seed in seeds:
        out.append(seed)
        i = 1
        while seed.leading - i * N >= 0:
            out.append(element(f"{seed.name}{i}", seed.leading - i * N,
                               seed.leading_coefficient, seed.level + i * N))
            i += 1
    return QuadricFiltrationInstance(params, basis, tuple(out))


def quotient_shape(lo: list, hi: list, width: int) -> AbelianGroupShape:
    """Shape of ``span(lo) / span(hi)`` for Z_(2)-lattices with ``span(hi)`` inside ``span(lo)``."""
    form = smith_normal_form(lo, P, width)
    rank = form.rank
    coords = []
    for w in hi:
        wv = [sum((w[k] * form.V[k][i] for k in range(width)), Fraction(0)) for i in range(width)]
        if any(wv[i] != 0 for i in range(rank, width)):
            raise ConsistencyError("upper filtration step is not contained in the lower one")
        row = []
        for i in range(rank):
            x = wv[i] / Fraction(P) ** form.diagonal[i]
            if x.denominator % P == 0:
                raise ConsistencyError("upper filtration step is not contained in the lower one")
            row.append(x)
        coords.append(row)
    if rank == 0:
        return AbelianGroupShape(P, 0)
    if not coords:
        return AbelianGroupShape(P, rank)
    return smith_decompose(coords, P, rank)


def compute_gr_torsion(instance: QuadricFiltrationInstance, codim: int | None = None) -> int:
    """Order of the torsion in ``gamma^codim / gamma^(codim+1)`` restricted to the l-lattice."""
    codim = 2 ** instance.params.n if codim is None else codim
    width = len(instance.basis)
    lo = instance.vectors(codim)
    hi = instance.vectors(codim + 1)
    shape = quotient_shape(lo, hi, width)
    order = 1
    for t in shape.torsion:
        order *= t
    return order


def verify_bound(n: int, D: int, trials: int, seed: int = 0) -> dict:
    bound = torsion_bound(n, D)
    params = bound.params
    if params.j != 0:
        return {"trials": 0, "orders_observed": [1], "expected": 1, "pass": bound.order == 1,
                "note": "j != 0: bound is trivial, engine not applicable"}
    observed = set()
    for k in range(trials):
        inst = build_instance(params, RandomTails(seed * 1_000_003 + k))
        observed.add(compute_gr_torsion(inst))
    return {"trials": trials, "orders_observed": sorted(observed), "expected": bound.order,
            "pass": observed == {bound.order}}


def albert_check(r: int) -> dict:
    """A form of dimension ``6 * 2^r`` in ``I^(r+2)`` at height ``n = r``."""
    n = r
    D = 6 * 2 ** r - 2
    bound = torsion_bound(n, D)
    params = bound.params
    free_codims = [i for i, (_, o) in bound.table.items() if o == 1]
    torsion_free = all(o == 1 for _, o in bound.table.values())
    return {"r": r, "n": n, "dim": D, "d": params.d, "j": params.j,
            "torsion_free_upto": max(free_codims), "consistent": params.j == 1 and torsion_free}
