"""Three-valued splitting verdicts for Morava motives of homogeneous varieties."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import permutations

from .errors import ConsistencyError, DomainError
from .series import p_valuation

DYNKIN_TYPES = ("A", "B", "C", "D", "E6", "E7", "E8", "F4", "G2")
K0 = "K0"  # integral K^0, a theory outside the Morava tower


class Verdict(str, enum.Enum):
    SPLIT = "split"
    NOT_SPLIT = "not_split"
    UNKNOWN = "unknown"


RULE_INNER = "inner-type iff K(0) split"
RULE_TITS = "Tits algebras split iff K0 split (inner type)"
RULE_ROST = "Rost invariant trivial iff K(2) split (inner, Tits split)"
RULE_E8 = "E8 at p=2: odd-degree split iff K(m) split for m >= 4"
RULE_MONO = "K(n) split implies K(m) split for 1 <= m <= n"
RULE_IM = "q in I^m iff K(m-2) split"
RULE_ODD = "q + <c> with q in I^m: K(n) split for 1 <= n < m-1"
RULE_EXCELLENT = "excellent form: q in I^m iff 2^m divides dim"
RULE_NONE = "no rule applies"


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    rules: tuple = ()

    def as_dict(self) -> dict:
        return {"verdict": self.verdict.value, "rule": list(self.rules) or [RULE_NONE]}


def monotonic_closure(verdicts: dict, upto: int | None = None) -> dict:
    """Propagate Split downward and NotSplit upward over heights ``n >= 1``."""
    definite = {n: v for n, v in verdicts.items() if v != Verdict.UNKNOWN}
    if any(n < 1 for n in definite):
        raise DomainError("monotonicity applies to heights n >= 1 only")
    if not definite:
        return {}
    top = max(definite) if upto is None else max(upto, max(definite))
    split_max = max((n for n, v in definite.items() if v == Verdict.SPLIT), default=0)
    not_min = min((n for n, v in definite.items() if v == Verdict.NOT_SPLIT), default=None)
    if not_min is not None and not_min <= split_max:
        raise ConsistencyError(f"split at {split_max} contradicts not split at {not_min}")
    out = {m: Verdict.SPLIT for m in range(1, split_max + 1)}
    if not_min is not None:
        out.update({m: Verdict.NOT_SPLIT for m in range(not_min, top + 1)})
    return out


def excellent_decomposition(dim: int) -> list:
    """Exponents with ``dim = 2^r1 - 2^r2 + ... `` and ``r1 > ... > r_(s-1) > r_s + 1 >= 2``."""
    if dim < 2 or dim % 2:
        raise DomainError(f"dimension must be even and at least 2, got {dim}")
    out = []
    rest = dim
    while rest:
        r = (rest - 1).bit_length()
        out.append(r)
        rest = 2 ** r - rest
    total = sum((-1) ** i * 2 ** r for i, r in enumerate(out))
    chain = all(a > b for a, b in zip(out[:-2], out[1:-1]))
    last = len(out) < 2 or out[-2] > out[-1] + 1
    if total != dim or out[-1] + 1 < 2 or not (chain and last):
        raise ConsistencyError(f"alternating decomposition of {dim} violates its constraints: {out}")
    return out


def excellent_in_Im(dim: int, m: int) -> bool:
    return dim % 2 ** m == 0


def maximal_power(dim: int) -> int:
    return p_valuation(dim, 2)


@dataclass(frozen=True)
class QuadFormDescriptor:
    dim: int
    im_membership: int | None = None
    maximal: bool = False
    odd_part: bool = False
    excellent: bool = False

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError("dimension must be positive")
        odd = self.dim % 2 == 1
        if odd and self.excellent:
            raise DomainError("excellent-form criterion needs an even dimension")
        if odd and self.im_membership is not None and not self.odd_part:
            raise DomainError("an odd-dimensional form lies in no I^m; declare the odd part")
        if not odd and self.odd_part:
            raise DomainError("odd part declared for an even-dimensional form")
        if self.excellent and self.im_membership is not None:
            raise DomainError("excellent forms determine their own I^m membership")
        m = self.im_membership
        if m is not None and not odd and self.dim < 2 ** m:
            raise DomainError(f"a nonzero anisotropic form in I^{m} has dimension >= {2 ** m}")


def quadric_kn_split(desc: QuadFormDescriptor, n: int) -> Decision:
    if n < 0:
        raise DomainError("height must be nonnegative")
    if desc.excellent:
        m = maximal_power(desc.dim)
        ok = n <= m - 2
        return Decision(Verdict.SPLIT if ok else Verdict.NOT_SPLIT, (RULE_EXCELLENT, RULE_IM))
    m = desc.im_membership
    if m is None:
        return Decision(Verdict.UNKNOWN)
    if desc.odd_part:
        if 1 <= n <= m - 2:
            return Decision(Verdict.SPLIT, (RULE_ODD,))
        return Decision(Verdict.UNKNOWN)
    if n <= m - 2:
        return Decision(Verdict.SPLIT, (RULE_IM,) if n == m - 2 else (RULE_IM, RULE_MONO))
    if desc.maximal:
        return Decision(Verdict.NOT_SPLIT, (RULE_IM,) if n == m - 1 else (RULE_IM, RULE_MONO))
    return Decision(Verdict.UNKNOWN)


@dataclass(frozen=True)
class GroupDescriptor:
    dynkin_type: str
    prime: int
    inner: bool
    tits_algebras_p_split: bool
    rost_p_trivial: bool | None = None
    e8_u_invariant_zero: bool | None = None

    def __post_init__(self):
        if self.dynkin_type not in DYNKIN_TYPES:
            raise DomainError(f"unknown Dynkin type {self.dynkin_type!r}")
        if self.e8_u_invariant_zero is not None:
            if self.dynkin_type != "E8" or self.prime != 2:
                raise DomainError("the invariant u exists only for E8 at p = 2")
            if self.rost_p_trivial is False:
                raise DomainError("the invariant u is defined only when the Rost invariant is trivial")

    @property
    def is_e8_2(self) -> bool:
        return self.dynkin_type == "E8" and self.prime == 2


def _rule_inner(desc, heights):
    return {0: Verdict.SPLIT if desc.inner else Verdict.NOT_SPLIT}


def _rule_tits(desc, heights):
    if not desc.inner:
        return {}
    return {K0: Verdict.SPLIT if desc.tits_algebras_p_split else Verdict.NOT_SPLIT}


def _rule_rost(desc, heights):
    if not (desc.inner and desc.tits_algebras_p_split) or desc.rost_p_trivial is None:
        return {}
    return {2: Verdict.SPLIT if desc.rost_p_trivial else Verdict.NOT_SPLIT}


def _rule_e8(desc, heights):
    if not desc.is_e8_2:
        return {}
    if desc.rost_p_trivial is False or desc.e8_u_invariant_zero is False:
        v = Verdict.NOT_SPLIT
    elif desc.rost_p_trivial and desc.e8_u_invariant_zero:
        v = Verdict.SPLIT
    else:
        return {}
    return {m: v for m in heights if isinstance(m, int) and m >= 4}


RULES = ((RULE_INNER, _rule_inner), (RULE_TITS, _rule_tits),
         (RULE_ROST, _rule_rost), (RULE_E8, _rule_e8))


def _merge(found: dict, cites: dict, key, verdict, rule):
    if key in found and found[key] != verdict:
        raise ConsistencyError(f"rules disagree at {key}: {found[key].value} vs {verdict.value}")
    found[key] = verdict
    cites.setdefault(key, []).append(rule)


def group_verdicts(desc: GroupDescriptor, top: int, order=None) -> tuple:
    """Verdicts for heights ``0..top`` and ``K0`` after applying the rules in ``order``."""
    heights = list(range(0, max(top, 4) + 1)) + [K0]
    found: dict = {}
    cites: dict = {}
    for name, rule in (RULES if order is None else order):
        for key, v in rule(desc, heights).items():
            _merge(found, cites, key, v, name)
    tower = {k: v for k, v in found.items() if isinstance(k, int) and k >= 1}
    closed = monotonic_closure(tower, upto=max(heights[:-1]))
    for k, v in closed.items():
        if k not in found:
            found[k] = v
            cites[k] = [RULE_MONO]
        elif found[k] != v:
            raise ConsistencyError(f"monotonicity contradicts a rule at height {k}")
    return found, cites


def group_kn_split(desc: GroupDescriptor, n) -> Decision:
    """Verdict at height ``n`` (an integer, or ``"K0"`` for integral K^0)."""
    if n != K0 and (not isinstance(n, int) or n < 0):
        raise DomainError(f"height must be a nonnegative integer or {K0!r}")
    found, cites = group_verdicts(desc, n if isinstance(n, int) else 0)
    if n not in found:
        return Decision(Verdict.UNKNOWN)
    return Decision(found[n], tuple(cites[n]))


def rule_order_independent(desc: GroupDescriptor, top: int = 6) -> bool:
    """Every permutation of the rules yields the same verdict map."""
    baseline = None
    for order in permutations(RULES):
        found, _ = group_verdicts(desc, top, order)
        if baseline is None:
            baseline = found
        elif found != baseline:
            return False
    return True
