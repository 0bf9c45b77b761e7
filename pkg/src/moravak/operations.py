"""Residue pushforwards, Steenrod slices and the symmetric division check."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConsistencyError, DomainError
from .fgl import FormalGroupLaw, bp, invariant_form, m_series
from .series import (
    GradedSeries,
    SeriesSpace,
    laurent_divide,
    mod_representative,
    reduce_mod_ideal,
    residue,
    substitute,
)


@dataclass(frozen=True)
class OperationProfile:
    """The series ``F^c`` in ``z1..zc`` describing an operation on a codimension-c class."""

    codim: int
    series: GradedSeries
    label: str = "custom"

    def __post_init__(self):
        zs = {f"z{i}" for i in range(1, self.codim + 1)}
        extra = [n for n, d in self.series.space.variables if d > 0 and n not in zs]
        if extra:
            raise DomainError(f"profile series has unexpected variables {extra}")

    @property
    def z_names(self) -> tuple:
        return tuple(f"z{i}" for i in range(1, self.codim + 1))

    @classmethod
    def from_g(cls, g: GradedSeries, codim: int, label: str = "custom") -> "OperationProfile":
        """Divide ``G^c(1)`` by ``z1...zc``; it must be divisible."""
        idx = [g.space.index(f"z{i}") for i in range(1, codim + 1)]
        out = {}
        for exps, c in g.items():
            if any(exps[i] == 0 for i in idx):
                raise DomainError("G^c(1) is not divisible by z1...zc")
            e = list(exps)
            for i in idx:
                e[i] -= 1
            out[tuple(e)] = c
        return cls(codim, GradedSeries(g.space, out), label)

    def g_series(self) -> GradedSeries:
        """``G^c(1) = F^c * z1...zc``, widened by ``c`` so no term of ``F^c`` is cut."""
        space = self.series.space
        wide = space.with_truncation(space.truncation + self.codim)
        prod = self.series.embed(wide)
        for z in self.z_names:
            prod = prod * wide.var(z)
        return prod


def profile_space(p: int, codim: int, T: int, coeff_vars: Sequence = ()) -> SeriesSpace:
    return SeriesSpace(p, tuple(coeff_vars) + tuple((f"z{i}", 1) for i in range(1, codim + 1)), T)


def identity_profile(p: int, codim: int, T: int) -> OperationProfile:
    return OperationProfile(codim, profile_space(p, codim, T).one(), "identity")


def _check_roots(profile: OperationProfile, roots: Sequence[GradedSeries]):
    if len(roots) != profile.codim:
        raise DomainError(f"expected {profile.codim} roots, got {len(roots)}")
    space = roots[0].space
    for mu in roots:
        if mu.space != space:
            raise DomainError("roots must share a series space")
        if mu.constant_term() != 0:
            raise DomainError("roots must have zero constant term")
    return space


def rr_shortcut(profile: OperationProfile, roots: Sequence[GradedSeries]) -> GradedSeries:
    """``F^c`` evaluated at the roots."""
    space = _check_roots(profile, roots)
    return substitute(profile.series, dict(zip(profile.z_names, roots)), space)


def rr_pushforward_residue(profile: OperationProfile, roots: Sequence[GradedSeries],
                           fgl: FormalGroupLaw) -> GradedSeries:
    """``Res_{t=0} G^c(1)|_{z_i = t +_F mu_i} / (t prod(t +_F mu_i)) * omega_t``.

    Computed at a widened working truncation so the result is exact up to the
    truncation of the roots' space.
    """
    space = _check_roots(profile, roots)
    T = space.truncation
    c = profile.codim
    W = T + c + 2
    work = space.extended(fgl.coeff_vars).extended((("t", 1),), laurent="t",
                                                   floor=-(W + c + 2))
    work = work.with_truncation(W)
    law = fgl.at_truncation(W + 1)
    t = work.var("t")
    shifted = [law.add(t, mu.embed(work)) for mu in roots]
    g = profile.g_series()
    num = substitute(g, dict(zip(profile.z_names, shifted)), work)
    den = t
    for s in shifted:
        den = den * s
    try:
        quotient = laurent_divide(num, den)
    except DomainError as exc:
        raise DomainError(f"residue pushforward undefined: {exc}") from None
    omega = invariant_form(law).embed(work)
    res = residue(quotient, omega)
    return res.truncate(T).restrict(space)


@dataclass(frozen=True)
class IdealWindow:
    """Reduction modulo ``I(n) = (p, v1, ..., v(n-1))`` with a Laurent floor in t."""

    prime: int
    n: int
    floor: int

    @property
    def vn_degree(self) -> int:
        return -(self.prime ** self.n - 1)

    def space(self, T: int) -> SeriesSpace:
        return SeriesSpace(self.prime, (("v", self.vn_degree), ("t", 1)), T, "t", self.floor)

    def reduce(self, s: GradedSeries) -> GradedSeries:
        low = [f"v{i}" for i in range(1, self.n) if f"v{i}" in s.space.names]
        return reduce_mod_ideal(s.set_zero(*low) if low else s, self.prime)


def steenrod_slice_vn(p: int, n: int, k: int, T: int | None = None,
                      floor: int | None = None) -> GradedSeries:
    """``St(v^k)`` modulo I(n), by multiplicativity from ``St(v) = -v t^-((p-1)(p^n-1))``.

    Returned with exact integer signs; apply :meth:`IdealWindow.reduce` for residues.
    """
    if k < 1:
        raise DomainError("power must be positive")
    N = p ** n - 1
    shift = (p - 1) * N
    floor = -k * shift if floor is None else floor
    space = IdealWindow(p, n, floor).space(p ** n if T is None else T)
    one = space.monomial({"v": 1, "t": -shift}, -1)
    return one ** k


def p_series_mod_In(p: int, n: int, T: int | None = None, floor: int = -1) -> GradedSeries:
    """``[p](t)/t`` for the BP law with ``v1..v(n-1) = 0``, reduced mod p, in ``(v, t)``."""
    T = p ** n if T is None else T
    if T < p ** n:
        raise DomainError(f"truncation must be at least p^n = {p ** n}")
    law = bp(p, n, T + 1, vanishing=range(1, n))
    ps = reduce_mod_ideal(m_series(law, p), p)
    window = IdealWindow(p, n, floor)
    target = window.space(T)
    vi = ps.space.index(f"v{n}")
    ti = ps.space.index("t")
    out = {}
    for exps, c in ps.items():
        if any(e for i, e in enumerate(exps) if i not in (vi, ti)):
            raise ConsistencyError("a vanishing v variable survived")
        out[(exps[vi], exps[ti] - 1)] = c
    result = GradedSeries(target, out)
    lowest = min(e[1] for e, _ in result.items()) if not result.is_zero() else None
    N = p ** n - 1
    if lowest != N or result.coefficient_of("t", N) != result.coefficient_of("t", N).space.var("v"):
        raise ConsistencyError(f"[p](t)/t mod I({n}) does not start with v*t^{N}")
    return result


@dataclass(frozen=True)
class SymmDivision:
    prime: int
    n: int
    k: int
    exponent: int
    slice: GradedSeries  # coefficient of t^exponent, a series in v

    @property
    def v_power(self) -> int | None:
        terms = list(self.slice.items())
        return terms[0][0][0] if len(terms) == 1 else None

    @property
    def coefficient(self) -> int:
        terms = list(self.slice.items())
        return mod_representative(terms[0][1], self.prime) if len(terms) == 1 else 0

    @property
    def is_unit_multiple(self) -> bool:
        """The slice is ``v^(k-1)`` times a unit modulo p."""
        return self.v_power == self.k - 1 and self.coefficient % self.prime != 0

    @property
    def is_exact(self) -> bool:
        """The slice is congruent to ``v^(k-1)`` itself."""
        return self.is_unit_multiple and self.coefficient == 1


def symm_division_check(p: int, n: int, k: int) -> SymmDivision:
    """Divide ``alpha^p - St(alpha)`` by ``[p](t)/t`` for ``alpha = v^k`` and read the lowest slice."""
    if k < 1:
        raise DomainError("power must be positive")
    N = p ** n - 1
    target = -k * (p - 1) * N - N
    window = IdealWindow(p, n, target - 1)
    T = p ** n
    space = window.space(T)
    st = steenrod_slice_vn(p, n, k, T, window.floor).embed(space)
    alpha = space.var("v", k)
    num = window.reduce(alpha ** p - st)
    den = p_series_mod_In(p, n, T, window.floor).embed(space)
    phi = window.reduce(laurent_divide(num, den))
    return SymmDivision(p, n, k, target, phi.coefficient_of("t", target))


def cartan_combine(cx: GradedSeries, cy: GradedSeries, fgl: FormalGroupLaw) -> GradedSeries:
    """``F(cx, cy)``: total classes combine through the formal group law."""
    if cx.space != cy.space:
        raise DomainError("classes must share a series space")
    law = fgl.at_truncation(max(fgl.truncation, cx.space.truncation)) \
        if fgl.log is not None else fgl
    space = cx.space
    missing = [v for v in law.coeff_vars if v[0] not in space.names]
    if missing:
        raise DomainError(f"classes lack coefficient variables {[m[0] for m in missing]}")
    return substitute(law.law, {"x": cx, "y": cy}, space)
