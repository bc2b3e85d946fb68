"""Adjacent codistances, the codistance atlas, and twin assembly.

From one codistance f the adjacent-codistance construction produces the
s-neighbours of f among codistances; closing under it yields the atlas,
the chamber set of the "other half" B+ of the twin.  Everything claimed
about the result (building axioms for B+, the twinning axioms for
delta*(g, c) = g(c), local opposition, the seed identity) is verified
exhaustively rather than assumed.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .chambersys import Building, ChamberSystem, ResidueRef, validate_building
from .codistance import Codistance, proj_f, validate_codistance
from .errors import BuildingMismatch, CapExceeded, PreconditionFailed, TwinbuildError
from .panelcalc import (
    PanelBijection,
    _op_panel_gap,
    beta,
    panel_key,
    panel_type,
    panels_op,
    panels_op_c,
)

DEFAULT_ATLAS_CAP = 50_000


class TwinViolation(TwinbuildError):
    """A verified property of the assembled twin failed."""


def s_adjacent(f: Codistance, g: Codistance, s: int) -> bool:
    """Equality of the s-panel opposition sets."""
    if f.building is not g.building:
        raise BuildingMismatch("codistances live on different buildings")
    return panels_op(f, s) == panels_op(g, s)


def beta_orbit(f: Codistance, Ptilde: ResidueRef, p: int) -> dict[ResidueRef, int]:
    """The chamber beta(Ptilde, Q)(p) in each panel Q meeting f^op."""
    s = panel_type(Ptilde)
    return {Q: beta(f, Ptilde, Q)(p) for Q in panels_op(f, s)}


def adjacent_codistance(
    f: Codistance,
    s: int,
    Ptilde: ResidueRef,
    p: int,
    check_choices: bool = False,
) -> Codistance:
    """The codistance obtained from f by moving its trace on each panel of
    P_s^op(f) to the beta-orbit of p.

    g(c) = s f(c) when the projection of c to a panel P meeting f^op_c hits
    the old or the new marked chamber of P, and g(c) = f(c) otherwise.  The
    choice of P does not matter; ``check_choices`` recomputes with every
    admissible P and demands agreement.
    """
    b = f.building
    table = b.weyl
    if Ptilde not in panels_op(f, s):
        raise PreconditionFailed("Ptilde does not meet f^op")
    if p not in set(Ptilde.chambers()) or f(p) != 0:
        raise PreconditionFailed("p must be a chamber of Ptilde inside f^op")
    marked = beta_orbit(f, Ptilde, p)
    gaps = {P: _op_panel_gap(f, P) for P in marked}
    values = []
    for c in range(b.n):
        choices = panels_op_c(f, s, c)
        if not choices:
            raise PreconditionFailed(f"no panel of f^op_{c} of type {s}")
        use = choices if check_choices else choices[:1]
        vals = set()
        for P in use:
            m = b.proj_chamber(P, c)
            if m == gaps[P] or m == marked[P]:
                vals.add(table.left[f(c)][s])
            else:
                vals.add(f(c))
        if len(vals) != 1:
            raise PreconditionFailed(
                f"panel choice changes the value at chamber {c}"
            )
        values.append(vals.pop())
    g = Codistance(b, values)
    report = validate_codistance(g)
    if not report.ok:
        raise PreconditionFailed(f"constructed map is not a codistance: {report}")
    return g


@dataclass
class CodistanceAtlas:
    building: Building
    members: list[Codistance]
    panels: list[list[tuple[int, ...]]]   # per generator, member-index panels
    origin: int = 0

    def index_of(self, g: Codistance) -> Optional[int]:
        for i, h in enumerate(self.members):
            if h.values == g.values:
                return i
        return None

    def chamber_system(self) -> ChamberSystem:
        return ChamberSystem(
            self.building.weyl, len(self.members),
            [sorted(fam) for fam in self.panels],
        )

    def residue_members(self, i: int, J: Iterable[int]) -> tuple[int, ...]:
        """Member indices J-connected to member i."""
        J = tuple(J)
        panel_of = [
            {m: idx for idx, pan in enumerate(fam) for m in pan}
            for fam in self.panels
        ]
        seen = {i}
        queue = deque([i])
        while queue:
            x = queue.popleft()
            for s in J:
                for y in self.panels[s][panel_of[s][x]]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
        return tuple(sorted(seen))


def atlas_component(f: Codistance, cap: int = DEFAULT_ATLAS_CAP) -> CodistanceAtlas:
    """Close the seed codistance under the adjacent-codistance construction.

    For each member g and type s the s-panel is enumerated from the
    smallest-id panel of P_s^op(g); members are deduplicated by their value
    vectors.
    """
    b = f.building
    rank = b.system.rank
    members: list[Codistance] = [f]
    index: dict[tuple[int, ...], int] = {f.values: 0}
    panel_of: list[dict[int, int]] = [dict() for _ in range(rank)]
    panels: list[list[tuple[int, ...]]] = [[] for _ in range(rank)]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        g = members[i]
        for s in range(rank):
            if i in panel_of[s]:
                continue
            Ptilde = panels_op(g, s)[0]
            group = [i]
            for p in sorted(Ptilde.chambers()):
                if g(p) != 0:
                    continue
                h = adjacent_codistance(g, s, Ptilde, p)
                j = index.get(h.values)
                if j is None:
                    j = len(members)
                    if j >= cap:
                        raise CapExceeded(f"atlas exceeds {cap} members")
                    members.append(h)
                    index[h.values] = j
                    queue.append(j)
                if j not in group:
                    group.append(j)
            group_t = tuple(sorted(group))
            pidx = len(panels[s])
            panels[s].append(group_t)
            for j in group_t:
                if j in panel_of[s] and panels[s][panel_of[s][j]] != group_t:
                    raise TwinViolation(
                        f"member {j} falls into two distinct {s}-panels"
                    )
                panel_of[s][j] = pidx
    return CodistanceAtlas(building=b, members=members, panels=panels, origin=0)


# -- alpha bijections ---------------------------------------------------------


@dataclass
class AlphaReport:
    ok: bool
    bijective: bool
    adjacency_ok: bool
    opposition_ok: bool
    witnesses: list = field(default_factory=list)


def alpha_check(
    atlas: CodistanceAtlas, i: int, J: Iterable[int], R: Optional[ResidueRef] = None
) -> AlphaReport:
    """Verify that h -> proj_R h is a bijection from the atlas J-residue of
    member i onto a J-residue R in its f^op, matching adjacency through
    conjugation by r_J and opposition through distance r_J."""
    b = atlas.building
    table = b.weyl
    J = frozenset(J)
    g = atlas.members[i]
    if R is None:
        inside = [x for x in g.fop()]
        R = b.residue(min(inside), J)
    if not any(g(x) == 0 for x in R.chambers()):
        raise PreconditionFailed("residue does not meet the member's f^op")
    rJ = table.longest_element(J)
    tilde = atlas.residue_members(i, J)
    alpha = {j: proj_f(atlas.members[j], R) for j in tilde}
    witnesses = []
    bijective = sorted(alpha.values()) == sorted(R.chambers())
    if not bijective:
        witnesses.append(("bijection", sorted(alpha.values())))
    adjacency_ok = True
    panel_of = [
        {m: idx for idx, pan in enumerate(fam) for m in pan}
        for fam in atlas.panels
    ]
    for s in sorted(J):
        sbar = table.gen_index(table.mult(table.mult(rJ, table.gen(s)), rJ))
        for j1 in tilde:
            for j2 in tilde:
                lhs = panel_of[s][j1] == panel_of[s][j2]
                rhs = (
                    b.system.panel_of[sbar][alpha[j1]]
                    == b.system.panel_of[sbar][alpha[j2]]
                )
                if lhs != rhs:
                    adjacency_ok = False
                    witnesses.append(("adjacency", s, j1, j2))
    opposition_ok = True
    for j in tilde:
        h = atlas.members[j]
        for c in R.chambers():
            if (h(c) == 0) != (b.delta(alpha[j], c) == rJ):
                opposition_ok = False
                witnesses.append(("opposition", j, c))
    ok = bijective and adjacency_ok and opposition_ok
    return AlphaReport(ok, bijective, adjacency_ok, opposition_ok, witnesses)


# -- twin assembly ------------------------------------------------------------


@dataclass
class TwinReport:
    building_ok: bool
    tw_axioms_ok: bool
    opposition_ok: bool
    plus_star_ok: bool
    diagram_ok: bool
    seed_ok: bool

    @property
    def ok(self) -> bool:
        return (
            self.building_ok and self.tw_axioms_ok and self.opposition_ok
            and self.plus_star_ok and self.diagram_ok and self.seed_ok
        )


@dataclass
class TwinAssembly:
    minus: Building
    plus: Building
    atlas: CodistanceAtlas
    report: TwinReport

    def costar(self, i: int, c: int) -> int:
        """delta*(member i of B+, chamber c of B-)."""
        return self.atlas.members[i](c)

    def costar_rev(self, c: int, i: int) -> int:
        return self.minus.weyl.inv(self.costar(i, c))

    def opposition(self) -> set[tuple[int, int]]:
        return {
            (i, c)
            for i, g in enumerate(self.atlas.members)
            for c in g.fop()
        }


def _check_tw_axioms(minus: Building, plus: Building, atlas: CodistanceAtlas) -> bool:
    table = minus.weyl
    length = table.length
    nplus = len(atlas.members)
    for i in range(nplus):
        g = atlas.members[i]
        for c in range(minus.n):
            w = g(c)
            # side +: y = c in B-, moves z within B-
            for s in range(minus.system.rank):
                ws = table.right[w][s]
                extended = length[ws] == length[w] + 1
                found = False
                for z in minus.system.panel_members(c, s):
                    if z == c:
                        continue
                    if not extended and g(z) != ws:
                        return False            # Tw2
                    if g(z) == ws:
                        found = True
                if not found:
                    return False                # Tw3
            # side -: x = c, y = member i, w' = w^{-1}; z ranges in B+
            winv = table.inv(w)
            for s in range(plus.system.rank):
                ws = table.right[winv][s]
                extended = length[ws] == length[winv] + 1
                found = False
                for j in plus.system.panel_members(i, s):
                    if j == i:
                        continue
                    zval = table.inv(atlas.members[j](c))
                    if not extended and zval != ws:
                        return False            # Tw2
                    if zval == ws:
                        found = True
                if not found:
                    return False                # Tw3
    return True


def _check_plus_star(minus: Building, plus: Building, atlas: CodistanceAtlas) -> bool:
    """delta+(x,y) = delta*(x,z) forces y, z opposite; equal opposition sets
    force equality.  Checked on both halves."""
    nplus = len(atlas.members)
    for x in range(nplus):
        gx = atlas.members[x]
        for y in range(nplus):
            d = plus.delta(x, y)
            for z in range(minus.n):
                if gx(z) == d and atlas.members[y](z) != 0:
                    return False
    fops = [frozenset(g.fop()) for g in atlas.members]
    if len(set(fops)) != nplus:
        return False
    chamber_ops = {}
    for c in range(minus.n):
        key = frozenset(i for i in range(nplus) if atlas.members[i](c) == 0)
        if key in chamber_ops.values():
            return False
        chamber_ops[c] = key
    table = minus.weyl
    for x in range(minus.n):
        for y in range(minus.n):
            d = minus.delta(x, y)
            for z in range(nplus):
                gz = atlas.members[z]
                if table.inv(gz(x)) == d and gz(y) != 0:
                    return False
    return True


def _gonality(b: Building, R: ResidueRef) -> Optional[int]:
    """Half the girth of the panel incidence graph of a rank-2 residue; its
    diameter must agree for a generalized m-gon."""
    s, t = sorted(R.J)
    cs = R.chambers()
    spanels = sorted({b.panel(c, s) for c in cs}, key=panel_key)
    tpanels = sorted({b.panel(c, t) for c in cs}, key=panel_key)
    nodes = spanels + tpanels
    idx = {P: k for k, P in enumerate(nodes)}
    adj: list[set[int]] = [set() for _ in nodes]
    for P in spanels:
        for Q in tpanels:
            if set(P.chambers()) & set(Q.chambers()):
                adj[idx[P]].add(idx[Q])
                adj[idx[Q]].add(idx[P])
    girth = None
    diameter = 0
    for src in range(len(nodes)):
        dist = {src: 0}
        parent = {src: -1}
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    queue.append(v)
                elif parent[u] != v:
                    cyc = dist[u] + dist[v] + 1
                    if girth is None or cyc < girth:
                        girth = cyc
        if len(dist) != len(nodes):
            return None
        diameter = max(diameter, max(dist.values()))
    if girth is None or girth != 2 * diameter:
        return None
    return diameter


def assemble_twin(
    atlas: CodistanceAtlas, b: Building, seed: Optional[Codistance] = None
) -> TwinAssembly:
    """Build B+ from the atlas and verify the twinning exhaustively."""
    system = atlas.chamber_system()
    plus = Building(system, name=b.name + "_plus")
    breport = validate_building(plus)
    building_ok = breport.ok

    tw_ok = _check_tw_axioms(b, plus, atlas)

    opposition_ok = True
    checked: set[tuple[int, frozenset]] = set()
    rank = b.system.rank
    small_J = [frozenset()] + [frozenset((s,)) for s in range(rank)] + [
        frozenset((s, t)) for s in range(rank) for t in range(s + 1, rank)
    ]
    for i, g in enumerate(atlas.members):
        for c in g.fop():
            for J in small_J:
                key = (
                    tuple(atlas.residue_members(i, J)),
                    b.residue(c, J) if J else c,
                    tuple(sorted(J)),
                )
                if key in checked:
                    continue
                checked.add(key)
                R = b.residue(c, J)
                rep = alpha_check(atlas, i, J, R=R)
                if not rep.ok:
                    opposition_ok = False

    plus_star_ok = _check_plus_star(b, plus, atlas)

    diagram_ok = True
    for R in plus.rank2_residues():
        s, t = sorted(R.J)
        m = b.weyl.matrix.m[s][t]
        if _gonality(plus, R) != m:
            diagram_ok = False
    for R in b.rank2_residues():
        s, t = sorted(R.J)
        if _gonality(b, R) != b.weyl.matrix.m[s][t]:
            diagram_ok = False

    origin = atlas.members[atlas.origin]
    seed_ok = seed is None or origin.values == seed.values

    report = TwinReport(
        building_ok=building_ok,
        tw_axioms_ok=tw_ok,
        opposition_ok=opposition_ok,
        plus_star_ok=plus_star_ok,
        diagram_ok=diagram_ok,
        seed_ok=seed_ok,
    )
    if not report.ok:
        raise TwinViolation(f"twin verification failed: {report}")
    return TwinAssembly(minus=b, plus=plus, atlas=atlas, report=report)
