"""Exact p-local scalars and truncated multivariate graded (Laurent) series.

A series lives in a :class:`SeriesSpace`, which fixes the prime, the ordered
variables with their integer degrees, the truncation bound and (optionally) a
single Laurent variable with a finite floor.  Coefficients are exact rationals
stored sparsely, keyed by exponent vectors.

Truncation rules, applied after every operation:

* the *weight* of a monomial is the degree-weighted sum of the exponents of the
  positive-degree variables (a negative exponent of the Laurent variable counts
  negatively); monomials of weight above the truncation are discarded;
* the degree in the positive-degree variables other than the Laurent variable
  is bounded by the truncation as well, which makes those variables nilpotent;
* Laurent exponents below the floor are discarded, and the result is flagged
  ``lossy`` because it no longer represents the exact quotient.

Negative-degree variables (``v_i``) never trigger truncation.  They may carry
negative exponents, as ``v_n`` is invertible in Morava K-theory.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

from .errors import DomainError, IntegralityError, NonUnitDivision, StructuralError

Scalar = Union[int, Fraction]
Exponents = tuple


def _norm(c) -> Scalar:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    if isinstance(c, (int, Fraction)):
        return c
    if isinstance(c, PLocalScalar):
        return _norm(c.value)
    if isinstance(c, Rational):
        return _norm(Fraction(c.numerator, c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def p_valuation(q, p: int) -> int:
    """The p-adic valuation of a nonzero rational."""
    q = Fraction(q)
    if q == 0:
        raise DomainError("valuation of zero is infinite")
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_p_local(q, p: int) -> bool:
    return Fraction(q).denominator % p != 0


def mod_representative(q, m: int) -> int:
    """Least nonnegative representative of a rational modulo ``m``."""
    q = Fraction(q)
    try:
        inv = pow(q.denominator, -1, m)
    except ValueError:
        raise IntegralityError(f"{q} is not defined modulo {m}") from None
    return (q.numerator * inv) % m


@dataclass(frozen=True)
class PLocalScalar:
    """An element of Z_(p): a reduced fraction whose denominator is prime to p."""

    prime: int
    value: Fraction

    def __post_init__(self):
        value = Fraction(self.value)
        object.__setattr__(self, "value", value)
        if value.denominator % self.prime == 0:
            raise IntegralityError(f"{value} is not {self.prime}-local")

    @classmethod
    def of(cls, value, prime: int) -> "PLocalScalar":
        if isinstance(value, PLocalScalar):
            return value
        return cls(prime, Fraction(value))

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def is_zero(self) -> bool:
        return self.value == 0

    def is_unit(self) -> bool:
        return self.value.numerator % self.prime != 0

    def valuation(self) -> int:
        return p_valuation(self.value, self.prime)

    def unit_part(self) -> "PLocalScalar":
        return PLocalScalar(self.prime, self.value / Fraction(self.prime) ** self.valuation())

    def inverse(self) -> "PLocalScalar":
        if not self.is_unit():
            raise NonUnitDivision(f"{self.value} is not a unit in Z_({self.prime})")
        return PLocalScalar(self.prime, 1 / self.value)

    def mod(self, m: int) -> int:
        return mod_representative(self.value, m)

    def _coerce(self, other) -> Fraction:
        if isinstance(other, PLocalScalar):
            if other.prime != self.prime:
                raise StructuralError("scalars over different primes")
            return other.value
        return Fraction(other)

    def __add__(self, other):
        return PLocalScalar(self.prime, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PLocalScalar(self.prime, self.value - self._coerce(other))

    def __rsub__(self, other):
        return PLocalScalar(self.prime, self._coerce(other) - self.value)

    def __mul__(self, other):
        return PLocalScalar(self.prime, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return PLocalScalar(self.prime, -self.value)

    def __eq__(self, other):
        if isinstance(other, PLocalScalar):
            return self.prime == other.prime and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.prime, self.value))

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class SeriesSpace:
    """The ambient ring of a :class:`GradedSeries`."""

    prime: int
    variables: tuple
    truncation: int
    laurent: str | None = None
    floor: int = 0

    def __post_init__(self):
        variables = tuple((str(n), int(d)) for n, d in self.variables)
        object.__setattr__(self, "variables", variables)
        names = [n for n, _ in variables]
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate variable names in {names}")
        if any(d == 0 for _, d in variables):
            raise StructuralError("variables must have nonzero degree")
        if self.laurent is not None:
            if self.laurent not in names:
                raise StructuralError(f"Laurent variable {self.laurent!r} is not declared")
            if dict(variables)[self.laurent] <= 0:
                raise StructuralError("the Laurent variable must have positive degree")
            if self.floor > 0:
                raise StructuralError("Laurent floor must be <= 0")
        elif self.floor != 0:
            raise StructuralError("a floor requires a Laurent variable")

    # -- bookkeeping -------------------------------------------------------

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.variables)

    @property
    def degrees(self) -> tuple:
        return tuple(d for _, d in self.variables)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise StructuralError(f"no variable {name!r} in {self.names}") from None

    def degree_of(self, name: str) -> int:
        return self.degrees[self.index(name)]

    @property
    def laurent_index(self) -> int | None:
        return None if self.laurent is None else self.index(self.laurent)

    def weight(self, exps: Sequence[int]) -> int:
        return sum(e * d for e, d in zip(exps, self.degrees) if d > 0)

    def nil_degree(self, exps: Sequence[int]) -> int:
        li = self.laurent_index
        return sum(e * d for i, (e, d) in enumerate(zip(exps, self.degrees)) if d > 0 and i != li)

    def internal_degree(self, exps: Sequence[int]) -> int:
        """Degree counting every variable, negative ones included."""
        return sum(e * d for e, d in zip(exps, self.degrees))

    # -- derived spaces ----------------------------------------------------

    def with_truncation(self, truncation: int) -> "SeriesSpace":
        return SeriesSpace(self.prime, self.variables, truncation, self.laurent, self.floor)

    def with_laurent(self, name: str, floor: int) -> "SeriesSpace":
        return SeriesSpace(self.prime, self.variables, self.truncation, name, floor)

    def without(self, *names: str) -> "SeriesSpace":
        keep = tuple(v for v in self.variables if v[0] not in names)
        laurent = self.laurent if self.laurent not in names else None
        return SeriesSpace(self.prime, keep, self.truncation, laurent, self.floor if laurent else 0)

    def extended(self, variables: Iterable, laurent: str | None = None, floor: int | None = None) -> "SeriesSpace":
        """Append variables not already present (matched by name)."""
        have = dict(self.variables)
        extra = []
        for n, d in variables:
            if n in have:
                if have[n] != d:
                    raise StructuralError(f"variable {n!r} declared with degrees {have[n]} and {d}")
            else:
                extra.append((n, d))
        lau = laurent if laurent is not None else self.laurent
        fl = floor if floor is not None else (self.floor if lau == self.laurent else 0)
        return SeriesSpace(self.prime, self.variables + tuple(extra), self.truncation, lau, fl)

    # -- constructors ------------------------------------------------------

    def zero(self) -> "GradedSeries":
        return GradedSeries(self, {})

    def one(self) -> "GradedSeries":
        return self.const(1)

    def const(self, c) -> "GradedSeries":
        return GradedSeries(self, {(0,) * self.nvars: c})

    def var(self, name: str, power: int = 1) -> "GradedSeries":
        return self.monomial({name: power})

    def monomial(self, powers: Mapping[str, int], coeff=1) -> "GradedSeries":
        exps = [0] * self.nvars
        for n, e in powers.items():
            exps[self.index(n)] += e
        return GradedSeries(self, {tuple(exps): coeff})

    def parse(self, text: str) -> "GradedSeries":
        """Read the canonical text rendering back, e.g. ``"t - 1/2*t^2"``."""
        return _parse(self, text)

    def keeps(self, exps: Sequence[int]) -> bool:
        T = self.truncation
        if self.weight(exps) > T or self.nil_degree(exps) > T:
            return False
        li = self.laurent_index
        return li is None or exps[li] >= self.floor


class GradedSeries:
    """An immutable truncated series with exact rational coefficients."""

    __slots__ = ("space", "_coeffs", "lossy")

    def __init__(self, space: SeriesSpace, coeffs: Mapping, lossy: bool = False):
        self.space = space
        li = space.laurent_index
        degrees = space.degrees
        out = {}
        for exps, c in coeffs.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != space.nvars:
                raise StructuralError(f"exponent vector {exps} does not match {space.names}")
            c = _norm(c)
            if c == 0:
                continue
            for i, e in enumerate(exps):
                if e < 0 and i != li and degrees[i] > 0:
                    raise StructuralError(
                        f"negative exponent of non-Laurent variable {space.names[i]!r}")
            if li is not None and exps[li] < space.floor:
                lossy = True
                continue
            if not space.keeps(exps):
                continue
            out[exps] = c
        self._coeffs = out
        self.lossy = lossy

    @classmethod
    def _raw(cls, space, coeffs, lossy=False):
        obj = cls.__new__(cls)
        obj.space = space
        obj._coeffs = coeffs
        obj.lossy = lossy
        return obj

    # -- inspection --------------------------------------------------------

    @property
    def prime(self) -> int:
        return self.space.prime

    def items(self):
        return self._coeffs.items()

    def terms(self) -> dict:
        return dict(self._coeffs)

    def __len__(self):
        return len(self._coeffs)

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, powers: Mapping[str, int] | Sequence[int] | None = None) -> Scalar:
        if powers is None:
            exps = (0,) * self.space.nvars
        elif isinstance(powers, Mapping):
            e = [0] * self.space.nvars
            for n, k in powers.items():
                e[self.space.index(n)] = k
            exps = tuple(e)
        else:
            exps = tuple(powers)
        return self._coeffs.get(exps, 0)

    def constant_term(self) -> Scalar:
        return self.coefficient()

    def coefficient_of(self, name: str, power: int) -> "GradedSeries":
        """The coefficient of ``name**power`` as a series in the remaining variables."""
        i = self.space.index(name)
        target = self.space.without(name)
        out = {}
        for exps, c in self._coeffs.items():
            if exps[i] == power:
                out[exps[:i] + exps[i + 1:]] = c
        return GradedSeries(target, out, self.lossy)

    def exponents_of(self, name: str) -> list:
        i = self.space.index(name)
        return sorted({e[i] for e in self._coeffs})

    def is_p_local(self) -> bool:
        p = self.prime
        return all(Fraction(c).denominator % p for c in self._coeffs.values())

    def check_p_local(self, what: str = "series") -> "GradedSeries":
        p = self.prime
        for exps, c in self._coeffs.items():
            if Fraction(c).denominator % p == 0:
                raise IntegralityError(
                    f"{what} has coefficient {c} at {_render_monomial(self.space, exps) or '1'}, "
                    f"which is not {p}-local")
        return self

    def lowest_weight(self) -> int | None:
        if not self._coeffs:
            return None
        return min(self.space.weight(e) for e in self._coeffs)

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "GradedSeries"):
        if not isinstance(other, GradedSeries):
            raise StructuralError(f"cannot combine a series with {type(other).__name__}")
        if other.space != self.space:
            a, b = self.space, other.space
            if a.prime != b.prime:
                raise StructuralError(f"mismatched primes {a.prime} and {b.prime}")
            if a.variables != b.variables:
                raise StructuralError(f"mismatched variables {a.names} and {b.names}")
            raise StructuralError("mismatched truncation or Laurent floor")

    def _lift(self, other):
        if isinstance(other, GradedSeries):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, PLocalScalar)):
            return self.space.const(other)
        raise StructuralError(f"cannot combine a series with {type(other).__name__}")

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._coeffs)
        for e, c in other._coeffs.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return GradedSeries._raw(self.space, {e: _norm(c) for e, c in out.items()},
                                 self.lossy or other.lossy)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries._raw(self.space, {e: -c for e, c in self._coeffs.items()}, self.lossy)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "GradedSeries":
        c = _norm(c)
        if c == 0:
            return self.space.zero()
        return GradedSeries._raw(self.space, {e: _norm(v * c) for e, v in self._coeffs.items()},
                                 self.lossy)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PLocalScalar)):
            return self.scale(other)
        other = self._lift(other)
        return _mul(self, other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("series powers must be integers")
        if k < 0:
            return laurent_divide(self.space.one(), self) ** (-k)
        result = self.space.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, GradedSeries):
            return self.space == other.space and self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self == self.space.const(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.space, frozenset(self._coeffs.items())))

    # -- transformations ---------------------------------------------------

    def embed(self, space: SeriesSpace) -> "GradedSeries":
        """Re-express in ``space``, matching variables by name."""
        if space == self.space:
            return self
        idx = [space.index(n) for n in self.space.names]
        out = {}
        for exps, c in self._coeffs.items():
            e = [0] * space.nvars
            for i, k in zip(idx, exps):
                e[i] = k
            out[tuple(e)] = c
        return GradedSeries(space, out, self.lossy)

    def truncate(self, truncation: int) -> "GradedSeries":
        return self.embed(self.space.with_truncation(truncation))

    def restrict(self, space: SeriesSpace) -> "GradedSeries":
        """Drop variables absent from ``space``; they must not occur."""
        idx = []
        for i, n in enumerate(self.space.names):
            if n in space.names:
                idx.append((i, space.index(n)))
        kept = {i for i, _ in idx}
        out = {}
        for exps, c in self._coeffs.items():
            if any(exps[i] for i in range(len(exps)) if i not in kept):
                raise StructuralError("cannot restrict: a dropped variable occurs")
            e = [0] * space.nvars
            for i, j in idx:
                e[j] = exps[i]
            out[tuple(e)] = c
        return GradedSeries(space, out, self.lossy)

    def derivative(self, name: str) -> "GradedSeries":
        i = self.space.index(name)
        out = {}
        for exps, c in self._coeffs.items():
            k = exps[i]
            if k:
                e = list(exps)
                e[i] -= 1
                out[tuple(e)] = c * k
        return GradedSeries(self.space, out, self.lossy)

    def set_zero(self, *names: str) -> "GradedSeries":
        idx = [self.space.index(n) for n in names]
        return GradedSeries._raw(
            self.space, {e: c for e, c in self._coeffs.items() if not any(e[i] for i in idx)},
            self.lossy)

    def filter(self, predicate) -> "GradedSeries":
        """Keep the terms whose exponent mapping satisfies ``predicate``."""
        names = self.space.names
        return GradedSeries._raw(
            self.space,
            {e: c for e, c in self._coeffs.items() if predicate(dict(zip(names, e)))},
            self.lossy)

    def map_coefficients(self, fn) -> "GradedSeries":
        return GradedSeries(self.space, {e: fn(c) for e, c in self._coeffs.items()}, self.lossy)

    # -- presentation ------------------------------------------------------

    def render(self) -> str:
        return render(self)

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"GradedSeries({render(self)!r}, vars={self.space.names}, T={self.space.truncation})"


_FIELD = 20
_BIAS = 1 << (_FIELD - 1)
_MASK = (1 << _FIELD) - 1


def _pack(exps) -> int:
    key = 0
    for i, e in enumerate(exps):
        key |= (e + _BIAS) << (_FIELD * i)
    return key


def _unpack(key: int, n: int) -> tuple:
    return tuple(((key >> (_FIELD * i)) & _MASK) - _BIAS for i in range(n))


def _integer_rows(s: GradedSeries, pos, nil, deg, li):
    """Rows ``(weight, nil degree, t exponent, packed key, numerator)`` over a common denominator."""
    den = 1
    for c in s._coeffs.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    rows = []
    for e, c in s._coeffs.items():
        w = sum(e[i] * deg[i] for i in pos)
        h = sum(e[i] * deg[i] for i in nil)
        te = e[li] if li is not None else 0
        num = c * den
        rows.append((w, h, te, _pack(e), int(num)))
    rows.sort(key=lambda r: r[0])
    return rows, den


def _mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    # Exponent vectors are packed into one integer so that adding keys adds
    # exponents; coefficients are integers over a shared denominator.
    space = a.space
    T = space.truncation
    li = space.laurent_index
    floor = space.floor
    deg = space.degrees
    pos = [i for i, d in enumerate(deg) if d > 0]
    nil = [i for i in pos if i != li]
    ra, da = _integer_rows(a, pos, nil, deg, li)
    rb, db = _integer_rows(b, pos, nil, deg, li)
    if len(ra) > len(rb):
        ra, rb = rb, ra
    bias = _pack((0,) * space.nvars)
    check_floor = li is not None
    out: dict = {}
    get = out.get
    lossy = a.lossy or b.lossy
    for wa, ha, ta, ka, ca in ra:
        wmax = T - wa
        hmax = T - ha
        tmin = floor - ta
        kb0 = ka - bias
        for wb, hb, tb, kb, cb in rb:
            if wb > wmax:
                break
            if hb > hmax:
                continue
            if check_floor and tb < tmin:
                lossy = True
                continue
            k = kb0 + kb
            out[k] = get(k, 0) + ca * cb
    den = da * db
    n = space.nvars
    if den == 1:
        coeffs = {_unpack(k, n): c for k, c in out.items() if c}
    else:
        coeffs = {_unpack(k, n): _norm(Fraction(c, den)) for k, c in out.items() if c}
    return GradedSeries._raw(space, coeffs, lossy)


# ---------------------------------------------------------------------------
# named operations


def add(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    a._check(b)
    return a + b


def mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    a._check(b)
    return a * b


def substitute(f: GradedSeries, bindings: Mapping[str, object],
               target: SeriesSpace | None = None) -> GradedSeries:
    """Formal composition: replace variables of ``f`` by series or scalars.

    Bound series must all live in ``target`` (default: the space of the first
    bound series, else ``f.space``).  Unbound variables of ``f`` are carried to
    the variable of the same name in ``target``.
    """
    if target is None:
        target = next((s.space for s in bindings.values() if isinstance(s, GradedSeries)), f.space)
    images = []
    for name, deg in f.space.variables:
        if name in bindings:
            img = bindings[name]
            if not isinstance(img, GradedSeries):
                img = target.const(img)
            elif img.space != target:
                raise StructuralError(f"image of {name!r} lives in a different space")
            if deg > 0 and name != f.space.laurent and img.constant_term() != 0:
                raise DomainError(
                    f"substituting a series with nonzero constant term into {name!r} is undefined")
            images.append(img)
        else:
            images.append(target.var(name))
    lossy = f.lossy or any(i.lossy for i in images)
    cache: list[dict] = [dict() for _ in images]

    def power(i: int, k: int) -> GradedSeries:
        c = cache[i]
        if k not in c:
            if k == 0:
                c[k] = target.one()
            elif k < 0:
                c[k] = power(i, -1) ** (-k) if k != -1 else laurent_divide(target.one(), images[i])
            elif k == 1:
                c[k] = images[i]
            else:
                c[k] = power(i, k // 2) * power(i, k - k // 2)
        return c[k]

    def horner(items: list, depth: int) -> GradedSeries:
        if depth == len(images):
            total = sum(c for _, c in items)
            return target.const(total)
        groups: dict = {}
        for exps, c in items:
            groups.setdefault(exps[depth], []).append((exps, c))
        acc = target.zero()
        for k, grp in groups.items():
            inner = horner(grp, depth + 1)
            if inner.is_zero():
                continue
            acc = acc + (inner if k == 0 else power(depth, k) * inner)
        return acc

    result = horner(list(f.items()), 0)
    result.lossy = result.lossy or lossy
    return result


def _single_positive(f: GradedSeries) -> str:
    pos = [n for n, d in f.space.variables if d > 0]
    if len(pos) != 1:
        raise DomainError(f"expected exactly one positive-degree variable, got {pos}")
    return pos[0]


def compositional_inverse(f: GradedSeries) -> GradedSeries:
    """The series ``g`` with ``f(g(t)) = t`` up to the truncation."""
    t = _single_positive(f)
    space = f.space
    ti = space.index(t)
    if any(e[ti] == 0 for e in f._coeffs):
        raise DomainError("compositional inverse needs zero constant term")
    linear = f.coefficient_of(t, 1)
    if linear != linear.space.one():
        raise DomainError("compositional inverse needs leading coefficient 1")
    tser = space.var(t)
    g = tser
    for k in range(2, space.truncation + 1):
        fg = substitute(f, {t: g}, space)
        err = {e: c for e, c in fg.items() if e[ti] == k}
        if err:
            g = g - GradedSeries(space, err)
    return g


def _parse_monomial(space: SeriesSpace, mono) -> tuple:
    if isinstance(mono, Mapping):
        e = [0] * space.nvars
        for n, k in mono.items():
            e[space.index(n)] += k
        return tuple(e)
    if isinstance(mono, str):
        return next(iter(space.parse(mono)._coeffs))
    return tuple(mono)


def reduce_mod_ideal(f: GradedSeries, modulus: int, monomials: Iterable = ()) -> GradedSeries:
    """Reduce modulo the ideal ``(modulus, *monomials)``.

    Coefficients become least nonnegative residues (``modulus == 0`` leaves
    them alone); terms divisible by any listed monomial are dropped.
    """
    gens = [_parse_monomial(f.space, m) for m in monomials]
    out = {}
    for exps, c in f.items():
        if any(all(e >= g for e, g in zip(exps, gen) if g) for gen in gens):
            continue
        if modulus:
            c = mod_representative(c, modulus)
        if c:
            out[exps] = c
    return GradedSeries(f.space, out, f.lossy)


def residue(f: GradedSeries, form: GradedSeries | None = None) -> GradedSeries:
    """Coefficient of ``t^-1`` in ``f * form`` (``form`` is the coefficient of dt)."""
    t = f.space.laurent
    if t is None:
        raise DomainError("residue needs a Laurent variable")
    prod = f if form is None else f * form
    if prod.lossy:
        raise DomainError("Laurent floor not established: negative terms were truncated")
    return prod.coefficient_of(t, -1)


def _order_key(space: SeriesSpace, exps) -> tuple:
    li = space.laurent_index
    if li is None:
        return (space.weight(exps),)
    return (space.nil_degree(exps), exps[li])


def laurent_divide(num: GradedSeries, den: GradedSeries) -> GradedSeries:
    """Quotient ``num / den`` as a (Laurent) series in the common space.

    The lowest term of ``den`` (ordered by the degree in the nilpotent
    variables, then by the Laurent exponent, or by weight when there is no
    Laurent variable) must be a unique p-local unit times an invertible
    monomial.  The remainder is inverted as a geometric series, which
    terminates because it is nilpotent under the truncation rules.
    """
    num._check(den)
    space = den.space
    if den.is_zero():
        raise NonUnitDivision("division by zero")
    keys = {e: _order_key(space, e) for e in den._coeffs}
    low = min(keys.values())
    lead = [e for e, k in keys.items() if k == low]
    if len(lead) != 1:
        raise NonUnitDivision("lowest term of the divisor is not a monomial")
    lead_e = lead[0]
    c = Fraction(den._coeffs[lead_e])
    if c.numerator % space.prime == 0 or c.denominator % space.prime == 0:
        raise NonUnitDivision(f"lowest coefficient {c} is not a {space.prime}-local unit")
    li = space.laurent_index
    for i, e in enumerate(lead_e):
        if e and space.degrees[i] > 0 and i != li:
            raise NonUnitDivision(
                f"lowest term involves the non-invertible variable {space.names[i]!r}")
    inv_lead = GradedSeries._raw(space, {tuple(-e for e in lead_e): _norm(1 / c)})
    rest = den * inv_lead - space.one()
    q = num * inv_lead
    acc = q
    term = q
    for _ in range(4 * space.truncation + 4 - space.floor):
        term = -(term * rest)
        if term.is_zero():
            break
        acc = acc + term
    else:
        if not term.is_zero():
            raise DomainError("geometric series for the quotient did not terminate")
    return acc


# ---------------------------------------------------------------------------
# canonical text rendering


def _render_monomial(space: SeriesSpace, exps) -> str:
    parts = []
    for (name, _), e in zip(space.variables, exps):
        if e == 0:
            continue
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def sort_key(space: SeriesSpace, exps) -> tuple:
    return (space.weight(exps), tuple(-e for e in exps))


def render(s: GradedSeries) -> str:
    """Canonical text: weight ascending, then lexicographic in declared order."""
    if s.is_zero():
        return "0"
    out = []
    for exps in sorted(s._coeffs, key=lambda e: sort_key(s.space, e)):
        c = Fraction(s._coeffs[exps])
        mono = _render_monomial(s.space, exps)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        out.append((sign, body))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text


def _parse(space: SeriesSpace, text: str) -> GradedSeries:
    text = text.strip()
    if text in ("", "0"):
        return space.zero()
    # split on top-level + / - that are not exponent signs
    terms = []
    buf = ""
    sign = 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch in "+-" and (not buf.strip() or buf.rstrip()[-1] != "^"):
            if buf.strip():
                terms.append((sign, buf.strip()))
            sign = 1 if ch == "+" else -1
            buf = ""
        else:
            buf += ch
        i += 1
    if buf.strip():
        terms.append((sign, buf.strip()))
    out: dict = {}
    for sgn, body in terms:
        coeff = Fraction(sgn)
        e = [0] * space.nvars
        for factor in body.replace(" ", "").split("*"):
            if not factor:
                continue
            if re.fullmatch(r"\d+(/\d+)?", factor):
                coeff *= Fraction(factor)
                continue
            m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?", factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r}")
            e[space.index(m.group(1))] += int(m.group(2) or 1)
        key = tuple(e)
        out[key] = out.get(key, 0) + coeff
    return GradedSeries(space, out)
