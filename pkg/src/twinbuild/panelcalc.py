"""The panel calculus: the graph of mutually opposite panels, compatible
paths, the transported panels pi(P, w), and the bijections beta.

Panels are ResidueRef views of rank 1.  The central objects are the sets
of s-panels meeting f^op; between two such panels there is a canonical
bijection obtained by composing projections through rank-2 residues, and
its gallery independence is what the triviality verdicts of the homotopy
module certify.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .chambersys import Building, ResidueRef
from .codistance import Codistance, fop_c, unique_chamber
from .errors import (
    HomotopyInconclusive,
    NoWitnessPair,
    NotAdjacent,
    NotEquivalent,
    NotInResidue,
    NotOpposite,
    NotParallel,
    PreconditionFailed,
)


def panel_type(P: ResidueRef) -> int:
    if len(P.J) != 1:
        raise ValueError("not a panel")
    return next(iter(P.J))


def panel_key(P: ResidueRef) -> tuple[int, int]:
    return (panel_type(P), P.base)


def delta_panels(b: Building, P: ResidueRef, Q: ResidueRef) -> int:
    """The Weyl distance between two parallel panels, with the independence
    of the defining chamber asserted."""
    if not b.are_parallel(P, Q):
        raise NotParallel("panels are not parallel")
    table = b.weyl
    values = {b.delta(x, b.proj_chamber(Q, x)) for x in P.chambers()}
    if len(values) != 1:
        raise NotParallel(f"distance depends on the chamber: {sorted(values)}")
    w = values.pop()
    s1, s2 = panel_type(P), panel_type(Q)
    if table.conj_by(w, s1) != table.gen(s2):
        raise NotParallel("type relation s2 = w^-1 s1 w fails")
    return w


def residue_between(b: Building, P: ResidueRef, Q: ResidueRef) -> Optional[ResidueRef]:
    """The rank-2 residue in which P and Q are opposite, if any."""
    if P == Q:
        return None
    s, t = panel_type(P), panel_type(Q)
    if s != t:
        candidates = [frozenset((s, t))]
    else:
        candidates = [frozenset((s, u)) for u in range(b.system.rank) if u != s]
    for J in candidates:
        R = b.residue(P.base, J)
        if Q.base not in R:
            continue
        if b.opposite_residues(R, P, Q):
            return R
    return None


class PanelGraph:
    """Panels of the building, two being adjacent when they are opposite in
    a (necessarily unique) common rank-2 residue."""

    def __init__(self, b: Building) -> None:
        self.building = b
        self.nodes: list[ResidueRef] = sorted(
            (P for s in range(b.system.rank) for P in b.all_panels(s)),
            key=panel_key,
        )
        self.edge_residue: dict[frozenset, ResidueRef] = {}
        self._adj: dict[ResidueRef, list[ResidueRef]] = {P: [] for P in self.nodes}
        for i, P in enumerate(self.nodes):
            for Q in self.nodes[i + 1:]:
                R = residue_between(b, P, Q)
                if R is not None:
                    self.edge_residue[frozenset((P, Q))] = R
                    self._adj[P].append(Q)
                    self._adj[Q].append(P)
        for P in self._adj:
            self._adj[P].sort(key=panel_key)

    def neighbors(self, P: ResidueRef) -> list[ResidueRef]:
        return self._adj[P]

    def adjacent(self, P: ResidueRef, Q: ResidueRef) -> bool:
        return frozenset((P, Q)) in self.edge_residue


def is_compatible_path(b: Building, path: Sequence[ResidueRef]) -> bool:
    """Whether consecutive panels are opposite in rank-2 residues onto which
    the first panel projects to the preceding one."""
    if len(set(path)) != len(path):
        return False
    P0 = path[0]
    for prev, cur in zip(path, path[1:]):
        R = residue_between(b, prev, cur)
        if R is None:
            raise NotAdjacent(f"{panel_key(prev)} and {panel_key(cur)}")
        if b.proj_residue(R, P0) != prev:
            return False
    return True


def compatible_path(
    b: Building, P: ResidueRef, Q: ResidueRef
) -> tuple[ResidueRef, ...]:
    """A compatible path from P to Q of length l_c(P, Q).

    Breadth-first over compatible extensions; compatibility of an extension
    from L depends only on L and P, so the first path found is shortest,
    and sorted expansion makes the choice deterministic.
    """
    if not b.are_parallel(P, Q):
        raise NotParallel("panels are not parallel")
    if P == Q:
        return (P,)
    paths = {P: (P,)}
    queue = deque([P])
    while queue:
        last = queue.popleft()
        for nxt in _compatible_neighbors(b, P, last):
            if nxt in paths:
                continue
            paths[nxt] = paths[last] + (nxt,)
            if nxt == Q:
                return paths[nxt]
            queue.append(nxt)
    raise NotParallel("no compatible path found")


def _compatible_neighbors(b: Building, P0: ResidueRef, L: ResidueRef):
    """Panels N with L, N opposite in R(L, N) and proj_{R(L,N)} P0 = L."""
    s = panel_type(L)
    out = []
    for t in range(b.system.rank):
        if t == s:
            continue
        R = b.residue(L.base, frozenset((s, t)))
        try:
            if b.proj_residue(R, P0) != L:
                continue
        except NotInResidue:
            continue
        for N in _opposite_panels_in(b, R, L):
            out.append(N)
    return sorted(out, key=panel_key)


def _opposite_panels_in(b: Building, R: ResidueRef, L: ResidueRef):
    table = b.weyl
    rJ = table.longest_element(R.J)
    tt = table.gen_index(table.mult(table.mult(rJ, table.gen(panel_type(L))), rJ))
    seen = set()
    for x in L.chambers():
        for y in R.chambers():
            if b.delta(x, y) == rJ:
                N = b.panel(y, tt)
                if N not in seen:
                    seen.add(N)
                    yield N


def all_compatible_paths(
    b: Building, P: ResidueRef, Q: ResidueRef, max_len: int = 6
) -> list[tuple[ResidueRef, ...]]:
    """Exhaustive enumeration, for well-definedness checks of l_c."""
    out = []
    stack = [(P,)]
    while stack:
        path = stack.pop()
        if path[-1] == Q and (len(path) > 1 or P == Q):
            out.append(path)
            continue
        if len(path) > max_len:
            continue
        for nxt in _compatible_neighbors(b, P, path[-1]):
            if nxt not in path:
                stack.append(path + (nxt,))
    return out


def l_c(b: Building, P: ResidueRef, Q: ResidueRef) -> int:
    return len(compatible_path(b, P, Q)) - 1


def l_c_of_w(b: Building, w: int, s: int) -> int:
    """l_c of any pair of parallel panels at Weyl distance w, the first
    panel of type s."""
    table = b.weyl
    ok, t = table.in_X_s(w, s)
    if not ok:
        raise PreconditionFailed(f"{table.word_str(w)} is not in X_{s}")
    for P in b.all_panels(s):
        x = P.base
        target = {y for y in range(b.n) if b.delta(x, y) == w}
        for y in sorted(target):
            Q = b.panel(y, t)
            if b.are_parallel(P, Q) and delta_panels(b, P, Q) == w:
                return l_c(b, P, Q)
    raise NoWitnessPair(f"no parallel pair at distance {table.word_str(w)}")


# -- panels in f^op and the bijections ---------------------------------------


def panels_op(f: Codistance, s: int) -> tuple[ResidueRef, ...]:
    """The s-panels meeting f^op, memoized on the codistance."""
    cache = getattr(f, "_psop_cache", None)
    if cache is None:
        cache = {}
        f._psop_cache = cache
    got = cache.get(s)
    if got is None:
        b = f.building
        got = tuple(
            sorted({b.panel(x, s) for x in f.fop()}, key=panel_key)
        )
        cache[s] = got
    return got


def panels_op_c(f: Codistance, s: int, c: int) -> tuple[ResidueRef, ...]:
    b = f.building
    return tuple(sorted({b.panel(x, s) for x in fop_c(f, c)}, key=panel_key))


def _op_panel_gap(f: Codistance, P: ResidueRef) -> int:
    """The single chamber of an f^op panel outside f^op (its f-value is the
    panel type, as a one-letter word)."""
    outside = [x for x in P.chambers() if f(x) != 0]
    if len(outside) != 1 or f(outside[0]) != f.building.weyl.gen(panel_type(P)):
        raise PreconditionFailed("panel does not meet f^op correctly")
    return outside[0]


def pi(f: Codistance, P: ResidueRef, w: int) -> ResidueRef:
    """The panel of type w^-1 s w at distance w from P characterized by
    containing a chamber with f-value w."""
    b = f.building
    table = b.weyl
    s = panel_type(P)
    ok, t = table.in_X_s(w, s)
    if not ok:
        raise PreconditionFailed(f"{table.word_str(w)} not in X_{s}")
    if P not in panels_op(f, s):
        raise PreconditionFailed("panel does not meet f^op")
    p = _op_panel_gap(f, P)
    c = unique_chamber(f, p, w)
    return b.panel(c, t)


def reverse_pi(f: Codistance, Q: ResidueRef) -> ResidueRef:
    """An s-panel P meeting f^op with Q = pi(P, w), w the shorter f-value
    on Q."""
    b = f.building
    table = b.weyl
    t = panel_type(Q)
    vals = sorted({f(x) for x in Q.chambers()}, key=lambda v: table.length[v])
    w = vals[0]
    s = table.gen_index(table.mult(table.mult(w, table.gen(t)), table.inv(w)))
    if s is None:
        raise PreconditionFailed("w t w^-1 is not a generator")
    x = min(y for y in Q.chambers() if f(y) == w)
    ys = fop_c(f, x)
    if not ys:
        raise PreconditionFailed("no chamber of f^op realizes f at x")
    P = b.panel(min(ys), s)
    return P


@dataclass
class PanelBijection:
    source: ResidueRef
    target: ResidueRef
    mapping: dict[int, int]

    def __post_init__(self) -> None:
        src = set(self.source.chambers())
        tgt = set(self.target.chambers())
        if set(self.mapping) != src or set(self.mapping.values()) != tgt:
            raise ValueError("mapping is not a bijection between the panels")

    def __call__(self, c: int) -> int:
        return self.mapping[c]

    def compose(self, other: "PanelBijection") -> "PanelBijection":
        """self after other."""
        if other.target != self.source:
            raise ValueError("panels do not match for composition")
        return PanelBijection(
            other.source, self.target,
            {c: self.mapping[v] for c, v in other.mapping.items()},
        )

    def inverse(self) -> "PanelBijection":
        return PanelBijection(
            self.target, self.source, {v: c for c, v in self.mapping.items()}
        )

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            c == v for c, v in self.mapping.items()
        )


def identity_bijection(P: ResidueRef) -> PanelBijection:
    return PanelBijection(P, P, {c: c for c in P.chambers()})


def beta_w(f: Codistance, P: ResidueRef, Q: ResidueRef, w: int) -> PanelBijection:
    """proj_Q proj_{pi(P,w)} restricted to P, defined when pi(P,w) = pi(Q,w)."""
    b = f.building
    M = pi(f, P, w)
    if pi(f, Q, w) != M:
        raise NotEquivalent("pi(P, w) != pi(Q, w)")
    mapping = {
        c: b.proj_chamber(Q, b.proj_chamber(M, c)) for c in P.chambers()
    }
    return PanelBijection(P, Q, mapping)


def _fop_gallery(f: Codistance, start: int, targets: frozenset) -> list[int]:
    """Shortest gallery inside f^op from start to any target chamber."""
    b = f.building
    inside = f.fop_set()
    parent = {start: start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x in targets:
            path = [x]
            while parent[path[-1]] != path[-1]:
                path.append(parent[path[-1]])
            return list(reversed(path))
        for s in range(b.system.rank):
            for z in b.system.panel_members(x, s):
                if z != x and z in inside and z not in parent:
                    parent[z] = x
                    queue.append(z)
    raise NotOpposite("no gallery in f^op joins the panels")


def beta(
    f: Codistance,
    P: ResidueRef,
    Q: ResidueRef,
    fop_verdict=None,
) -> PanelBijection:
    """The canonical bijection between two s-panels meeting f^op, composed
    along a gallery in f^op; independence of the gallery is a theorem whose
    hypotheses (f^op connected and simply 2-connected) the caller certifies
    through ``fop_verdict``."""
    if fop_verdict is not None and not fop_verdict.proven_trivial:
        raise HomotopyInconclusive(
            f"f^op triviality verdict is {fop_verdict.status}"
        )
    b = f.building
    s = panel_type(P)
    if panel_type(Q) != s:
        raise NotOpposite("panels have different types")
    ps = panels_op(f, s)
    if P not in ps or Q not in ps:
        raise NotOpposite("panel does not meet f^op")
    if P == Q:
        return identity_bijection(P)
    table = b.weyl
    start = min(x for x in P.chambers() if f(x) == 0)
    targets = frozenset(x for x in Q.chambers() if f(x) == 0)
    gallery = _fop_gallery(f, start, targets)
    current = identity_bijection(P)
    prev_panel = P
    for x, y in zip(gallery, gallery[1:]):
        next_panel = b.panel(y, s)
        if next_panel == prev_panel:
            continue
        t = next(
            tt for tt, z in b.system.neighbors(x) if z == y
        )
        xJ = table.mult(table.gen(s), table.longest_element((s, t)))
        step = beta_w(f, prev_panel, next_panel, xJ)
        current = step.compose(current)
        prev_panel = next_panel
    if prev_panel != Q:
        raise NotOpposite("gallery did not end in the target panel")
    return current
