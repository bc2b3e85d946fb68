"""Codistances: W-valued maps on chambers satisfying the panel axiom.

Values are stored as a dense array of Weyl ids; equality and hashing use
the value tuple so atlases can deduplicate members cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .chambersys import Building, ResidueRef
from .errors import PreconditionFailed


class Codistance:
    def __init__(self, building: Building, values: Sequence[int]) -> None:
        if len(values) != building.n:
            raise ValueError("one value per chamber required")
        self.building = building
        self.values = tuple(values)
        self._fop: Optional[tuple[int, ...]] = None
        self._fop_set: Optional[frozenset] = None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Codistance)
            and self.building is other.building
            and self.values == other.values
        )

    def __hash__(self) -> int:
        return hash(self.values)

    def __call__(self, c: int) -> int:
        return self.values[c]

    def vlen(self, c: int) -> int:
        return self.building.weyl.length[self.values[c]]

    def fop(self) -> tuple[int, ...]:
        if self._fop is None:
            self._fop = tuple(c for c, v in enumerate(self.values) if v == 0)
            self._fop_set = frozenset(self._fop)
        return self._fop

    def fop_set(self) -> frozenset:
        self.fop()
        return self._fop_set  # type: ignore[return-value]


@dataclass
class PanelViolation:
    generator: int
    panel: tuple[int, ...]
    values: tuple[int, ...]
    detail: str


@dataclass
class CodistanceReport:
    ok: bool
    violation: Optional[PanelViolation] = None


def validate_codistance(f: Codistance) -> CodistanceReport:
    """Check the panel axiom on every panel of the building."""
    b = f.building
    table = b.weyl
    for s in range(b.system.rank):
        for panel in b.system.panels[s]:
            vals = tuple(f(c) for c in panel)
            distinct = sorted(set(vals), key=lambda v: table.length[v])
            if len(distinct) != 2:
                return CodistanceReport(False, PanelViolation(
                    s, panel, vals,
                    f"{len(distinct)} distinct values on panel, need exactly 2",
                ))
            short, long_ = distinct
            if table.right[short][s] != long_:
                return CodistanceReport(False, PanelViolation(
                    s, panel, vals,
                    "values are not of the form {w, ws}",
                ))
            if table.length[long_] != table.length[short] + 1:
                return CodistanceReport(False, PanelViolation(
                    s, panel, vals, "value lengths do not differ by 1",
                ))
            if sum(1 for v in vals if v == long_) != 1:
                return CodistanceReport(False, PanelViolation(
                    s, panel, vals, "longest value not attained by a unique chamber",
                ))
    return CodistanceReport(True)


def from_opposite_chamber(b: Building, c: int) -> Codistance:
    """The self-twinning of a spherical building seen from chamber c:
    f(x) = r_S * delta(c, x)."""
    table = b.weyl
    r = table.longest_element(range(table.rank))
    values = [table.mult(r, b.delta(c, x)) for x in range(b.n)]
    return Codistance(b, values)


@dataclass
class ResidueProfile:
    image: frozenset[int]          # the coset f(x) W_J as a set of Weyl ids
    l_f: int
    A_f: tuple[int, ...]
    proj_f: Optional[int]          # chamber of maximal f-length (spherical J)


def residue_profile(f: Codistance, R: ResidueRef) -> ResidueProfile:
    b = f.building
    table = b.weyl
    chambers = R.chambers()
    x0 = chambers[0]
    coset = frozenset(table.mult(f(x0), w) for w in table.subgroup(R.J))
    lengths = [f.vlen(x) for x in chambers]
    l_f = min(lengths)
    l_max = max(lengths)
    A_f = tuple(x for x, l in zip(chambers, lengths) if l == l_f)
    maxers = [x for x, l in zip(chambers, lengths) if l == l_max]
    proj = maxers[0] if len(maxers) == 1 else None
    return ResidueProfile(image=coset, l_f=l_f, A_f=A_f, proj_f=proj)


def proj_f(f: Codistance, R: ResidueRef) -> int:
    p = residue_profile(f, R).proj_f
    if p is None:
        raise PreconditionFailed("no unique chamber of maximal f-length in residue")
    return p


def fop(f: Codistance) -> tuple[int, ...]:
    return f.fop()


def fop_c(f: Codistance, c: int) -> tuple[int, ...]:
    b = f.building
    w = f(c)
    return tuple(x for x in f.fop() if b.delta(x, c) == w)


def unique_chamber(f: Codistance, x: int, w: int) -> int:
    """The unique chamber c with f(c) = f(x) w and delta(x, c) = w, found by
    the greedy panel walk: each step moves to the single chamber whose
    f-value extends by the next letter."""
    b = f.building
    table = b.weyl
    fx = f(x)
    if table.length[table.mult(fx, w)] != table.length[fx] + table.length[w]:
        raise PreconditionFailed("l(f(x) w) != l(f(x)) + l(w)")
    cur = x
    val = fx
    for s in table.word[w]:
        val = table.right[val][s]
        nxt = None
        for z in b.system.panel_members(cur, s):
            if z != cur and f(z) == val:
                if nxt is not None:
                    raise PreconditionFailed("panel axiom broken: two extensions")
                nxt = z
        if nxt is None:
            raise PreconditionFailed("panel axiom broken: no extension chamber")
        cur = nxt
    return cur
