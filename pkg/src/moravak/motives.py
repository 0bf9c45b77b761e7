"""Module presentations over the BP coefficient ring and Morava K-groups of Rost motives."""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConsistencyError, DomainError
from .fgl import bp_vars
from .series import GradedSeries, SeriesSpace, substitute
from .snf import AbelianGroupShape, smith_decompose, smith_normal_form


@dataclass(frozen=True)
class ModulePresentation:
    prime: int
    generators: tuple  # (name, degree)
    relations: tuple  # rows of GradedSeries in the v variables
    space: SeriesSpace

    def degree_of(self, s: GradedSeries) -> int | None:
        """Internal degree of a homogeneous entry (``None`` for zero)."""
        degs = {self.space.internal_degree(e) for e, _ in s.items()}
        if not degs:
            return None
        if len(degs) > 1:
            raise DomainError("entry is not homogeneous")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        for row in self.relations:
            seen = set()
            for (_, gdeg), entry in zip(self.generators, row):
                d = self.degree_of(entry)
                if d is not None:
                    seen.add(d + gdeg)
            if len(seen) > 1:
                return False
        return True


def koszul_ideal(p: int, m: int) -> ModulePresentation:
    """Koszul presentation of ``I(m-1) = (p, v1, ..., v(m-2))``.

    Generator ``g_i`` maps to ``v_i`` (``v_0 = p``); for ``i < j`` the
    relation is ``v_j g_i - v_i g_j``.
    """
    if m < 2:
        raise DomainError("m must be at least 2")
    k = m - 2
    space = SeriesSpace(p, bp_vars(p, k), 0)

    def v(i):
        return space.const(p) if i == 0 else space.var(f"v{i}")

    gens = tuple((f"g{i}", -(p ** i - 1)) for i in range(k + 1))
    rels = []
    for i in range(k + 1):
        for j in range(i + 1, k + 1):
            row = [space.zero()] * (k + 1)
            row[i] = v(j)
            row[j] = -v(i)
            rels.append(tuple(row))
    return ModulePresentation(p, gens, tuple(rels), space)


def specialize_to_Kn(pres: ModulePresentation, n: int) -> list:
    """Relation matrix with ``v_n = 1`` and every other ``v_i = 0``."""
    target = SeriesSpace(pres.prime, (), 0)
    values = {name: int(name == f"v{n}") for name, _ in pres.space.variables}
    out = []
    for row in pres.relations:
        out.append([substitute(e, values, target).constant_term() for e in row])
    return out


@dataclass(frozen=True)
class RostResult:
    prime: int
    m: int
    n: int
    case: str  # "split", "tate_plus_L" or "indecomposable"
    tate_twists: tuple = ()
    shape: AbelianGroupShape | None = None
    descriptor: str | None = None
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"case": self.case, "p": self.prime, "m": self.m, "n": self.n}
        if self.tate_twists:
            out["tate_twists"] = list(self.tate_twists)
        if self.shape is not None:
            out["free_rank"] = self.shape.free_rank
            out["torsion"] = list(self.shape.torsion)
            out["group"] = str(self.shape)
        if self.descriptor is not None:
            out["descriptor"] = self.descriptor
        return out


def rost_closed_form(p: int, m: int) -> AbelianGroupShape:
    """``Z^(p-1) + (Z/p)^((m-2)(p-1))`` for the indecomposable summand."""
    return AbelianGroupShape(p, p - 1, (p,) * ((m - 2) * (p - 1)))


def rost_kn_groups(p: int, m: int, n: int) -> RostResult:
    if m < 2 or n < 1:
        raise DomainError("need m >= 2 and n >= 1")
    b = (p ** (m - 1) - 1) // (p - 1)
    pres = koszul_ideal(p, m)
    if n < m - 1:
        matrix = specialize_to_Kn(pres, n)
        form = smith_normal_form(matrix, p, len(pres.generators))
        shape = smith_decompose(matrix, p, len(pres.generators))
        if 0 not in form.diagonal or shape != AbelianGroupShape(p, 1):
            raise ConsistencyError(f"I({m - 1}) does not become free of rank 1 in K({n})")
        return RostResult(p, m, n, "split", tuple(b * i for i in range(p)),
                          details={"b": b, "ideal_shape": str(shape)})
    if n == m - 1:
        matrix = specialize_to_Kn(pres, n)
        per_summand = smith_decompose(matrix, p, len(pres.generators))
        snf_shape = per_summand.times(p - 1)
        closed = rost_closed_form(p, m)
        if snf_shape != closed:
            raise ConsistencyError(f"presentation gives {snf_shape}, closed form gives {closed}")
        return RostResult(p, m, n, "tate_plus_L", (0,), closed,
                          details={"b": b, "ideal_shape": str(per_summand),
                                   "snf_shape": str(snf_shape)})
    return RostResult(p, m, n, "indecomposable",
                      descriptor=f"indecomposable; K({n}) groups agree with the Chow groups of "
                                 f"R_{m} tensored with Z_({p})[v,v^-1]; not computed",
                      details={"b": b})
