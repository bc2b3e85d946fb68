"""Finite chamber systems and W-metric buildings.

A Building wraps a ChamberSystem together with the Weyl-valued distance
delta computed from minimal galleries.  Residues are lightweight views
(building, type set, base chamber) with their chamber sets cached; the full
delta table is materialized for small buildings since the lemma sweeps of
the test suite consult it exhaustively.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .coxeter import WeylTable
from .errors import Disconnected, NotInResidue

DENSE_DELTA_LIMIT = 5000


@dataclass
class ChamberSystem:
    """Chambers 0..n-1 with one panel partition per generator."""

    weyl: WeylTable
    n: int
    panels: list[list[tuple[int, ...]]]       # per generator: sorted panels
    panel_of: list[list[int]] = field(init=False)  # per generator: chamber -> panel idx

    def __post_init__(self) -> None:
        rank = self.weyl.rank
        if len(self.panels) != rank:
            raise ValueError("one panel family per generator required")
        self.panel_of = []
        for s in range(rank):
            owner = [-1] * self.n
            for idx, p in enumerate(self.panels[s]):
                if len(p) < 2:
                    raise ValueError(f"panel {p} of type {s} has fewer than 2 chambers")
                for c in p:
                    if not 0 <= c < self.n:
                        raise ValueError(f"chamber id {c} out of range")
                    if owner[c] != -1:
                        raise ValueError(f"chamber {c} in two panels of type {s}")
                    owner[c] = idx
            if any(o == -1 for o in owner):
                raise ValueError(f"panels of type {s} do not cover all chambers")
            self.panel_of.append(owner)
        # chamber-system axiom: distinct chambers adjacent for one type only
        seen: dict[tuple[int, int], int] = {}
        for s in range(rank):
            for p in self.panels[s]:
                for i, a in enumerate(p):
                    for b in p[i + 1:]:
                        prev = seen.setdefault((a, b), s)
                        if prev != s:
                            raise ValueError(
                                f"chambers {a},{b} adjacent for types {prev} and {s}"
                            )

    @property
    def rank(self) -> int:
        return self.weyl.rank

    def panel_members(self, c: int, s: int) -> tuple[int, ...]:
        return self.panels[s][self.panel_of[s][c]]

    def is_thick(self) -> bool:
        return all(len(p) >= 3 for fam in self.panels for p in fam)

    def is_thin(self) -> bool:
        return all(len(p) == 2 for fam in self.panels for p in fam)

    def neighbors(self, c: int):
        """Yield (s, d) over all chambers d != c adjacent to c, ascending d per panel."""
        for s in range(self.rank):
            for d in self.panel_members(c, s):
                if d != c:
                    yield s, d


@dataclass(frozen=True, eq=False)
class ResidueRef:
    """View of the J-residue containing ``base`` (base = least chamber)."""

    building: "Building"
    J: frozenset[int]
    base: int

    def chambers(self) -> tuple[int, ...]:
        return self.building._residue_set(self.J, self.base)

    def __contains__(self, c: int) -> bool:
        return c in self.building._residue_member_set(self.J, self.base)

    def __len__(self) -> int:
        return len(self.chambers())

    def __iter__(self):
        return iter(self.chambers())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ResidueRef)
            and self.building is other.building
            and self.J == other.J
            and self.base == other.base
        )

    def __hash__(self) -> int:
        return hash((id(self.building), self.J, self.base))

    @property
    def rank(self) -> int:
        return len(self.J)

    def typ(self) -> frozenset[int]:
        return self.J


@dataclass
class AxiomViolation:
    axiom: str
    witness: tuple
    detail: str


@dataclass
class BuildingReport:
    ok: bool
    violations: list[AxiomViolation]
    thick: bool

    def first(self) -> Optional[AxiomViolation]:
        return self.violations[0] if self.violations else None


class Building:
    """A finite building: chamber system plus W-valued distance."""

    def __init__(self, system: ChamberSystem, name: str = "building") -> None:
        self.system = system
        self.weyl = system.weyl
        self.name = name
        self.n = system.n
        self._rows: dict[int, list[int]] = {}
        self._residues: dict[tuple[frozenset, int], tuple[int, ...]] = {}
        self._residue_sets: dict[tuple[frozenset, int], frozenset] = {}
        if self.n <= DENSE_DELTA_LIMIT:
            for x in range(self.n):
                self._row(x)

    # -- distance ----------------------------------------------------------

    def _row(self, x: int) -> list[int]:
        row = self._rows.get(x)
        if row is None:
            row = self._compute_row(x)
            self._rows[x] = row
        return row

    def _compute_row(self, x: int) -> list[int]:
        right = self.weyl.right
        row = [-1] * self.n
        row[x] = 0
        queue = deque([x])
        while queue:
            y = queue.popleft()
            w = row[y]
            for s, z in self.system.neighbors(y):
                if row[z] == -1:
                    row[z] = right[w][s]
                    queue.append(z)
        if any(v == -1 for v in row):
            raise Disconnected(f"chamber system not gallery-connected from {x}")
        return row

    def delta(self, x: int, y: int) -> int:
        return self._row(x)[y]

    def ldist(self, x: int, y: int) -> int:
        return self.weyl.length[self.delta(x, y)]

    # -- residues ----------------------------------------------------------

    def _closure(self, c: int, J: frozenset[int]) -> tuple[int, ...]:
        seen = {c}
        queue = deque([c])
        while queue:
            y = queue.popleft()
            for s in J:
                for z in self.system.panel_members(y, s):
                    if z not in seen:
                        seen.add(z)
                        queue.append(z)
        return tuple(sorted(seen))

    def _residue_set(self, J: frozenset[int], base: int) -> tuple[int, ...]:
        key = (J, base)
        cached = self._residues.get(key)
        if cached is None:
            cached = self._closure(base, J)
            self._residues[key] = cached
            self._residue_sets[key] = frozenset(cached)
        return cached

    def _residue_member_set(self, J: frozenset[int], base: int) -> frozenset:
        self._residue_set(J, base)
        return self._residue_sets[(J, base)]

    def residue(self, c: int, J: Iterable[int]) -> ResidueRef:
        J = frozenset(J)
        if not J:
            key = (J, c)
            self._residues.setdefault(key, (c,))
            self._residue_sets.setdefault(key, frozenset((c,)))
            return ResidueRef(self, J, c)
        members = self._closure(c, J)
        base = members[0]
        key = (J, base)
        self._residues.setdefault(key, members)
        self._residue_sets.setdefault(key, frozenset(members))
        return ResidueRef(self, J, base)

    def panel(self, c: int, s: int) -> ResidueRef:
        return self.residue(c, frozenset((s,)))

    def all_panels(self, s: int) -> list[ResidueRef]:
        return [self.residue(p[0], frozenset((s,))) for p in self.system.panels[s]]

    def rank2_residues(self) -> list[ResidueRef]:
        out = []
        seen = set()
        k = self.weyl.rank
        for a in range(k):
            for b in range(a + 1, k):
                J = frozenset((a, b))
                for c in range(self.n):
                    R = self.residue(c, J)
                    if (R.J, R.base) not in seen:
                        seen.add((R.J, R.base))
                        out.append(R)
        return out

    def residues_of_type(self, J: Iterable[int]) -> list[ResidueRef]:
        J = frozenset(J)
        out = []
        seen = set()
        for c in range(self.n):
            R = self.residue(c, J)
            if R.base not in seen:
                seen.add(R.base)
                out.append(R)
        return out

    # -- projections -------------------------------------------------------

    def proj_chamber(self, R: ResidueRef, c: int) -> int:
        lengths = self.weyl.length
        row = self._row(c)
        best = -1
        best_l = None
        for x in R.chambers():
            l = lengths[row[x]]
            if best_l is None or l < best_l:
                best, best_l = x, l
        return best

    def proj_residue(self, R: ResidueRef, Q: ResidueRef) -> ResidueRef:
        image = sorted({self.proj_chamber(R, x) for x in Q.chambers()})
        # determine the type of the image residue from its adjacency
        base = image[0]
        J: set[int] = set()
        img = set(image)
        for x in image:
            for s, z in self.system.neighbors(x):
                if z in img:
                    J.add(s)
        ref = self.residue(base, frozenset(J))
        if set(ref.chambers()) != img:
            raise NotInResidue(
                f"projection image {image} is not a single {sorted(J)}-residue"
            )
        return ref

    def are_parallel(self, R1: ResidueRef, R2: ResidueRef) -> bool:
        c1, c2 = R1.chambers(), R2.chambers()
        if len(c1) != len(c2):
            return False
        fwd = {x: self.proj_chamber(R2, x) for x in c1}
        bwd = {y: self.proj_chamber(R1, y) for y in c2}
        if sorted(fwd.values()) != list(c2) or sorted(bwd.values()) != list(c1):
            return False
        if any(bwd[fwd[x]] != x for x in c1):
            return False
        adj1 = self._adjacent_pairs(c1)
        adj2 = self._adjacent_pairs(c2)
        for a, b in adj1:
            if (min(fwd[a], fwd[b]), max(fwd[a], fwd[b])) not in adj2 and fwd[a] != fwd[b]:
                return False
        for a, b in adj2:
            if (min(bwd[a], bwd[b]), max(bwd[a], bwd[b])) not in adj1 and bwd[a] != bwd[b]:
                return False
        return True

    def _adjacent_pairs(self, chambers: Sequence[int]) -> set[tuple[int, int]]:
        cs = set(chambers)
        pairs = set()
        for x in chambers:
            for _, z in self.system.neighbors(x):
                if z in cs and x < z:
                    pairs.add((x, z))
        return pairs

    # -- opposition --------------------------------------------------------

    def opposite_chambers(self, R: ResidueRef, x: int, y: int) -> bool:
        if x not in R or y not in R:
            raise NotInResidue(f"{x} or {y} not in residue")
        return self.delta(x, y) == self.weyl.longest_element(R.J)

    def residue_type_of(self, R: ResidueRef) -> frozenset[int]:
        return R.J

    def opposite_residues(self, R: ResidueRef, R1: ResidueRef, R2: ResidueRef) -> bool:
        rset = self._residue_member_set(R.J, R.base)
        if not set(R1.chambers()) <= rset or not set(R2.chambers()) <= rset:
            raise NotInResidue("R1 or R2 not contained in R")
        rJ = self.weyl.longest_element(R.J)
        table = self.weyl
        K2conj = frozenset(
            table.gen_index(table.mult(table.mult(rJ, table.gen(k)), rJ))
            for k in R2.J
        )
        if K2conj != R1.J:
            return False
        row_has = any(
            self.delta(a, b) == rJ for a in R1.chambers() for b in R2.chambers()
        )
        return row_has


def wdistance(b: Building, x: int, y: int) -> int:
    return b.delta(x, y)


def validate_building(b: Building, max_violations: int = 1) -> BuildingReport:
    """Exhaustively verify axioms Bu1-Bu3 on all pairs."""
    table = b.weyl
    lengths = table.length
    right = table.right
    violations: list[AxiomViolation] = []

    def bad(axiom: str, witness: tuple, detail: str) -> bool:
        violations.append(AxiomViolation(axiom, witness, detail))
        return len(violations) >= max_violations

    done = False
    for x in range(b.n):
        if done:
            break
        row = b._row(x)
        for y in range(b.n):
            w = row[y]
            if (w == 0) != (x == y):
                done = bad("Bu1", (x, y), f"delta={table.word_str(w)}")
                break
            for s in range(b.system.rank):
                ws = right[w][s]
                up = lengths[ws] == lengths[w] + 1
                found_ws = False
                for z in b.system.panel_members(y, s):
                    if z == y:
                        continue
                    d = row[z]
                    if d == ws:
                        found_ws = True
                    elif d != w:
                        done = bad(
                            "Bu2", (x, y, z, s),
                            f"delta(x,z)={table.word_str(d)} not in "
                            f"{{{table.word_str(w)}, {table.word_str(ws)}}}",
                        )
                        break
                    elif up:
                        done = bad(
                            "Bu2", (x, y, z, s),
                            "l(ws)=l(w)+1 but delta(x,z)=w",
                        )
                        break
                else:
                    if not found_ws:
                        done = bad("Bu3", (x, y, s), "no z with delta(x,z)=ws")
                if done:
                    break
            if done:
                break
    if not violations:
        # delta symmetry and numerical-distance consistency
        for x in range(b.n):
            row = b._row(x)
            for y in range(x + 1, b.n):
                if table.inv(row[y]) != b._row(y)[x]:
                    bad("delta-symmetry", (x, y), "delta(x,y) != delta(y,x)^-1")
                    break
            else:
                continue
            break
    if not violations:
        for x in range(b.n):
            dist = _graph_distances(b, x)
            row = b._row(x)
            for y in range(b.n):
                if dist[y] != lengths[row[y]]:
                    bad("gallery-distance", (x, y), "numerical distance != l(delta)")
                    break
            else:
                continue
            break
    return BuildingReport(
        ok=not violations, violations=violations, thick=b.system.is_thick()
    )


def _graph_distances(b: Building, x: int) -> list[int]:
    dist = [-1] * b.n
    dist[x] = 0
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for _, z in b.system.neighbors(y):
            if dist[z] == -1:
                dist[z] = dist[y] + 1
                queue.append(z)
    return dist
