"""Formal group laws built from logarithms.

Laws are bivariate series in ``x, y`` whose coefficient ring is generated by
negative-degree ``v`` variables.  The Brown-Peterson logarithm uses the
Hazewinkel-style recursion, the Morava logarithm the closed form supported on
``t^(p^(i*n))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import partial
from typing import Callable, Iterable

from .errors import DomainError, IntegralityError
from .series import (
    GradedSeries,
    SeriesSpace,
    compositional_inverse,
    laurent_divide,
    reduce_mod_ideal,
    substitute,
)


def _coeff_vars(space: SeriesSpace) -> tuple:
    return tuple(v for v in space.variables if v[1] < 0)


def log_space(p: int, coeff_vars: Iterable, T: int) -> SeriesSpace:
    return SeriesSpace(p, tuple(coeff_vars) + (("t", 1),), T)


def law_space(p: int, coeff_vars: Iterable, T: int, names=("x", "y")) -> SeriesSpace:
    return SeriesSpace(p, tuple(coeff_vars) + tuple((n, 1) for n in names), T)


@dataclass(frozen=True)
class FormalGroupLaw:
    prime: int
    label: str
    law: GradedSeries
    log: GradedSeries | None = None
    exp: GradedSeries | None = None
    # rebuilds the law at a larger truncation; absent for laws known only to finite degree
    builder: Callable | None = field(default=None, compare=False, repr=False)

    @property
    def truncation(self) -> int:
        return self.law.space.truncation

    @property
    def coeff_vars(self) -> tuple:
        return _coeff_vars(self.law.space)

    def series_space(self, T: int | None = None, var: str = "t") -> SeriesSpace:
        return SeriesSpace(self.prime, self.coeff_vars + ((var, 1),),
                           self.truncation if T is None else T)

    def add(self, a: GradedSeries, b: GradedSeries) -> GradedSeries:
        """Formal sum ``a +_F b`` of two series sharing a space."""
        return substitute(self.law, {"x": a, "y": b}, a.space)

    def at_truncation(self, T: int) -> "FormalGroupLaw":
        """The same law at truncation ``T``, rebuilt from the logarithm if needed."""
        if T == self.truncation:
            return self
        if T < self.truncation:
            return replace(
                self, law=self.law.truncate(T),
                log=None if self.log is None else self.log.truncate(T),
                exp=None if self.exp is None else self.exp.truncate(T))
        if self.builder is None:
            raise DomainError(f"law {self.label!r} is only known to degree {self.truncation}")
        return self.builder(T)

    def specialize(self, **values) -> "FormalGroupLaw":
        """Set coefficient variables to scalars, e.g. ``v=1``."""
        drop = set(values)
        keep = tuple(v for v in self.coeff_vars if v[0] not in drop)

        def specialized(s: GradedSeries | None, names):
            if s is None:
                return None
            target = SeriesSpace(self.prime, keep + tuple((n, 1) for n in names),
                                 s.space.truncation)
            return substitute(s, dict(values), target)

        label = self.label + "|" + ",".join(f"{k}={v}" for k, v in sorted(values.items()))
        builder = None
        if self.builder is not None:
            builder = partial(_specialized_builder, self.builder, tuple(sorted(values.items())))
        return FormalGroupLaw(self.prime, label, specialized(self.law, ("x", "y")),
                              specialized(self.log, ("t",)), specialized(self.exp, ("t",)), builder)


def _specialized_builder(builder, values, T):
    return builder(T).specialize(**dict(values))


def additive(p: int, T: int) -> FormalGroupLaw:
    S = law_space(p, (), T)
    L = log_space(p, (), T)
    t = L.var("t")
    return FormalGroupLaw(p, "additive", S.var("x") + S.var("y"), t, t, partial(additive, p))


def multiplicative(p: int, T: int) -> FormalGroupLaw:
    S = law_space(p, (), T)
    L = log_space(p, (), T)
    log = GradedSeries(L, {(k,): Fraction(1, k) for k in range(1, T + 1)})
    exp = GradedSeries(L, {(k,): Fraction((-1) ** (k + 1), math.factorial(k))
                           for k in range(1, T + 1)})
    x, y = S.var("x"), S.var("y")
    return FormalGroupLaw(p, "multiplicative", x + y - x * y, log, exp, partial(multiplicative, p))


def bp_vars(p: int, k: int) -> tuple:
    return tuple((f"v{j}", -(p ** j - 1)) for j in range(1, k + 1))


def bp_log(p: int, k: int, T: int, vanishing: Iterable[int] = ()) -> GradedSeries:
    """Brown-Peterson logarithm ``sum m_j t^(p^j)`` in ``v1..vk``.

    ``m_j = (v_j + sum_{i<j} m_i v_{j-i}^(p^i)) / p`` with ``v_j = 0`` for
    ``j > k`` and for every index in ``vanishing``.
    """
    if T < 1:
        raise DomainError("truncation must be at least 1")
    vanishing = set(vanishing)
    L = log_space(p, bp_vars(p, k), T)

    def v(j):
        if j < 1 or j > k or j in vanishing:
            return L.zero()
        return L.var(f"v{j}")

    m = [L.one()]
    j = 1
    while p ** j <= T:
        acc = v(j)
        for i in range(1, j):
            acc = acc + m[i] * v(j - i) ** (p ** i)
        m.append(acc.scale(Fraction(1, p)))
        j += 1
    t = L.var("t")
    return sum((m[j] * t ** (p ** j) for j in range(len(m))), L.zero())


def morava_log(p: int, n: int, T: int, vname: str = "v") -> GradedSeries:
    """``sum_i v^((p^(in)-1)/(p^n-1)) t^(p^(in)) / p^i``."""
    if n < 1:
        raise DomainError("Morava height must be positive")
    if T < 1:
        raise DomainError("truncation must be at least 1")
    L = log_space(p, ((vname, -(p ** n - 1)),), T)
    terms = {}
    i = 0
    while p ** (i * n) <= T:
        e = (p ** (i * n) - 1) // (p ** n - 1)
        terms[(e, p ** (i * n))] = Fraction(1, p ** i)
        i += 1
    return GradedSeries(L, terms)


def fgl_from_log(log: GradedSeries, T: int | None = None, label: str = "custom") -> FormalGroupLaw:
    """``F(x, y) = e(l(x) + l(y))`` with ``e`` the compositional inverse of ``l``."""
    if T is not None and T != log.space.truncation:
        log = log.truncate(T)
    p = log.prime
    T = log.space.truncation
    exp = compositional_inverse(log)
    S = law_space(p, _coeff_vars(log.space), T)
    lx = substitute(log, {"t": S.var("x")}, S)
    ly = substitute(log, {"t": S.var("y")}, S)
    law = substitute(exp, {"t": lx + ly}, S)
    try:
        law.check_p_local("formal group law")
    except IntegralityError as exc:
        raise IntegralityError(f"logarithm not integral: {exc}") from None
    return FormalGroupLaw(p, label, law, log, exp)


def bp(p: int, k: int, T: int, vanishing: Iterable[int] = ()) -> FormalGroupLaw:
    vanishing = tuple(vanishing)
    label = f"bp({k})" if not vanishing else f"bp({k};{','.join(map(str, vanishing))}=0)"
    law = fgl_from_log(bp_log(p, k, T, vanishing), label=label)
    return replace(law, builder=partial(bp, p, k, vanishing=vanishing))


def morava(p: int, n: int, T: int) -> FormalGroupLaw:
    law = fgl_from_log(morava_log(p, n, T), label=f"morava({n})")
    return replace(law, builder=partial(morava, p, n))


def morava_closed_form(p: int, n: int, T: int | None = None) -> GradedSeries:
    """``x + y - v * sum_{0<i<p} C(p,i)/p * x^(i p^(n-1)) y^((p-i) p^(n-1))``."""
    T = 2 * p ** n if T is None else T
    S = law_space(p, (("v", -(p ** n - 1)),), T)
    q = p ** (n - 1)
    terms = {(0, 1, 0): 1, (0, 0, 1): 1}
    for i in range(1, p):
        terms[(1, i * q, (p - i) * q)] = -Fraction(math.comb(p, i), p)
    return GradedSeries(S, terms)


def reduce_mod_J(f: GradedSeries, p: int, n: int) -> GradedSeries:
    """Reduction modulo ``(p, x^(p^n), y^(p^n))``."""
    return reduce_mod_ideal(f, p, [{"x": p ** n}, {"y": p ** n}])


def formal_inverse(fgl: FormalGroupLaw, T: int | None = None) -> GradedSeries:
    """``i(t)`` with ``F(t, i(t)) = 0``, solved degree by degree."""
    S = fgl.series_space(T)
    t = S.var("t")
    inv = -t
    for _ in range(S.truncation):
        err = substitute(fgl.law, {"x": t, "y": inv}, S)
        if err.is_zero():
            break
        inv = inv - err
    return inv


def m_series(fgl: FormalGroupLaw, m: int, T: int | None = None) -> GradedSeries:
    """``[m](t)``, the m-fold formal sum, via a binary addition chain."""
    S = fgl.series_space(T)
    base = S.var("t") if m >= 0 else formal_inverse(fgl, T)
    m = abs(m)
    acc = S.zero()
    while m:
        if m & 1:
            acc = fgl.add(acc, base)
        m >>= 1
        if m:
            base = fgl.add(base, base)
    return acc


def height_mod_p(fgl: FormalGroupLaw) -> float | int:
    """``k`` with ``[p](t) = unit * t^(p^k) + ...`` mod p after setting every v to 1."""
    p = fgl.prime
    reduced = fgl.specialize(**{name: 1 for name, _ in fgl.coeff_vars}) if fgl.coeff_vars else fgl
    ps = reduce_mod_ideal(m_series(reduced, p), p)
    if ps.is_zero():
        return math.inf
    low = min(e[0] for e, _ in ps.items())
    k = 0
    while p ** k < low:
        k += 1
    if p ** k != low:
        raise DomainError(f"[p](t) mod p starts at t^{low}, not a power of {p}: "
                          "not p-typical-compatible")
    return k


def invariant_form(fgl: FormalGroupLaw) -> GradedSeries:
    """Coefficient of dt in the invariant differential, ``1 / F_y(t, 0)``.

    One degree is lost to differentiation, so the result is truncated at
    ``T - 1``.
    """
    S = fgl.series_space(fgl.truncation - 1)
    dy = fgl.law.derivative("y").truncate(fgl.truncation - 1)
    at0 = substitute(dy, {"x": S.var("t"), "y": 0}, S)
    return laurent_divide(S.one(), at0)


def associativity_defect(fgl: FormalGroupLaw) -> GradedSeries:
    """``F(F(x,y),z) - F(x,F(y,z))`` as a trivariate series (zero for a law)."""
    S = law_space(fgl.prime, fgl.coeff_vars, fgl.truncation, ("x", "y", "z"))
    x, y, z = S.var("x"), S.var("y"), S.var("z")
    return fgl.add(fgl.add(x, y), z) - fgl.add(x, fgl.add(y, z))


def axiom_report(fgl: FormalGroupLaw) -> dict:
    """Exact checks of unitality, commutativity and associativity."""
    F = fgl.law
    S = F.space
    x, y = S.var("x"), S.var("y")
    unit_left = substitute(F, {"x": x, "y": 0}, S) == x
    unit_right = substitute(F, {"x": 0, "y": y}, S) == y
    comm = substitute(F, {"x": y, "y": x}, S) == F
    assoc = associativity_defect(fgl).is_zero()
    return {"unital": unit_left and unit_right, "commutative": comm, "associative": assoc}
