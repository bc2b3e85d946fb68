"""Generators for the concrete finite buildings used as fixtures.

All generators order points/lines/planes by lexicographic coordinate
vectors so repeated runs emit byte-identical bundles.  Field arithmetic is
plain modular arithmetic over F_2 and F_3, the only sizes we need.
"""

from __future__ import annotations

from itertools import product as iproduct
from typing import Iterable, Sequence

from .chambersys import Building, ChamberSystem
from .coxeter import CoxeterMatrix, WeylTable, enumerate_weyl
from .errors import NameClash, UnsupportedQ


def matrix_A1(name: str = "a") -> CoxeterMatrix:
    return CoxeterMatrix((name,), ((1,),))


def matrix_A2(names: tuple[str, str] = ("p", "l")) -> CoxeterMatrix:
    return CoxeterMatrix(names, ((1, 3), (3, 1)))


def matrix_B2(names: tuple[str, str] = ("p", "l")) -> CoxeterMatrix:
    return CoxeterMatrix(names, ((1, 4), (4, 1)))


def matrix_I2(m: int, names: tuple[str, str] = ("p", "l")) -> CoxeterMatrix:
    return CoxeterMatrix(names, ((1, m), (m, 1)))


def matrix_A3(names: tuple[str, str, str] = ("p", "l", "h")) -> CoxeterMatrix:
    return CoxeterMatrix(names, ((1, 3, 2), (3, 1, 3), (2, 3, 1)))


def gen_thin(matrix: CoxeterMatrix | WeylTable) -> Building:
    """Coxeter complex: chambers are group elements, delta(x,y) = x^-1 y."""
    table = matrix if isinstance(matrix, WeylTable) else enumerate_weyl(matrix)
    n = table.size
    panels = []
    for s in range(table.rank):
        fam = set()
        for w in range(n):
            fam.add(tuple(sorted((w, table.right[w][s]))))
        panels.append(sorted(fam))
    system = ChamberSystem(weyl=table, n=n, panels=panels)
    return Building(system, name=f"thin_{'x'.join(table.matrix.gens)}")


def gen_digon(a: int, b: int) -> Building:
    """Generalized digon: every point incident with every line."""
    if a < 2 or b < 2:
        raise ValueError("digon sizes must be >= 2")
    table = enumerate_weyl(matrix_I2(2))
    chambers = [(i, j) for i in range(a) for j in range(b)]
    index = {c: k for k, c in enumerate(chambers)}
    point_panels = sorted(
        tuple(index[(i, j)] for i in range(a)) for j in range(b)
    )
    line_panels = sorted(
        tuple(index[(i, j)] for j in range(b)) for i in range(a)
    )
    system = ChamberSystem(weyl=table, n=a * b, panels=[point_panels, line_panels])
    return Building(system, name=f"digon_{a}_{b}")


# -- finite-field linear algebra over F_2, F_3 ------------------------------


def _check_q(q: int) -> None:
    if q not in (2, 3):
        raise UnsupportedQ(f"q={q} not supported (prime fields F2, F3 only)")


def _vectors(q: int, dim: int):
    return [v for v in iproduct(range(q), repeat=dim) if any(v)]


def _normalize(v: Sequence[int], q: int) -> tuple[int, ...]:
    for x in v:
        if x:
            inv = pow(x, q - 2, q) if q > 2 else 1
            return tuple((inv * y) % q for y in v)
    raise ValueError("zero vector")


def _points(q: int, dim: int) -> list[tuple[int, ...]]:
    return sorted({_normalize(v, q) for v in _vectors(q, dim)})


def _span2(p1: Sequence[int], p2: Sequence[int], q: int) -> frozenset:
    pts = set()
    for a in range(q):
        for b in range(q):
            v = tuple((a * x + b * y) % q for x, y in zip(p1, p2))
            if any(v):
                pts.add(_normalize(v, q))
    return frozenset(pts)


def _lines(points: list[tuple[int, ...]], q: int) -> list[frozenset]:
    out = set()
    for i, p1 in enumerate(points):
        for p2 in points[i + 1:]:
            out.add(_span2(p1, p2, q))
    return sorted(out, key=lambda l: sorted(l))


def _hyperplanes(q: int, dim: int) -> list[frozenset]:
    """3-dim subspaces of F_q^4 as point sets, via normalized dual vectors."""
    out = []
    for f in _points(q, dim):
        pts = frozenset(
            p for p in _points(q, dim) if sum(a * b for a, b in zip(f, p)) % q == 0
        )
        out.append(pts)
    return sorted(set(out), key=lambda h: sorted(h))


def _panels_by_key(chambers: list, key_fn) -> list[tuple[int, ...]]:
    groups: dict = {}
    for idx, c in enumerate(chambers):
        groups.setdefault(key_fn(c), []).append(idx)
    return sorted(tuple(g) for g in groups.values())


def gen_pg2(q: int) -> Building:
    """Flag building of the projective plane PG(2, q), type A2."""
    _check_q(q)
    points = _points(q, 3)
    lines = _lines(points, q)
    chambers = sorted(
        (p, tuple(sorted(l))) for l in lines for p in l
    )
    # point-type panel: flags sharing the line; line-type panel: sharing the point
    panels = [
        _panels_by_key(chambers, lambda c: c[1]),
        _panels_by_key(chambers, lambda c: c[0]),
    ]
    table = enumerate_weyl(matrix_A2())
    system = ChamberSystem(weyl=table, n=len(chambers), panels=panels)
    return Building(system, name=f"pg2_{q}")


def gen_pg3(q: int) -> Building:
    """Full-flag building of PG(3, q), type A3."""
    _check_q(q)
    points = _points(q, 4)
    lines = _lines(points, q)
    planes = _hyperplanes(q, 4)
    line_key = {l: tuple(sorted(l)) for l in lines}
    plane_key = {h: tuple(sorted(h)) for h in planes}
    chambers = sorted(
        (p, line_key[l], plane_key[h])
        for h in planes
        for l in lines
        if l <= h
        for p in l
    )
    panels = [
        _panels_by_key(chambers, lambda c: (c[1], c[2])),
        _panels_by_key(chambers, lambda c: (c[0], c[2])),
        _panels_by_key(chambers, lambda c: (c[0], c[1])),
    ]
    table = enumerate_weyl(matrix_A3())
    system = ChamberSystem(weyl=table, n=len(chambers), panels=panels)
    return Building(system, name=f"pg3_{q}")


def _symplectic(u: Sequence[int], v: Sequence[int], q: int) -> int:
    return (u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2]) % q


def gen_sp4(q: int) -> Building:
    """Flag building of the symplectic quadrangle W(q), type B2."""
    _check_q(q)
    points = _points(q, 4)
    ti_lines = []
    seen = set()
    for i, p1 in enumerate(points):
        for p2 in points[i + 1:]:
            if _symplectic(p1, p2, q) == 0:
                l = _span2(p1, p2, q)
                if l not in seen:
                    seen.add(l)
                    ti_lines.append(l)
    ti_lines = sorted(seen, key=lambda l: sorted(l))
    chambers = sorted((p, tuple(sorted(l))) for l in ti_lines for p in l)
    panels = [
        _panels_by_key(chambers, lambda c: c[1]),
        _panels_by_key(chambers, lambda c: c[0]),
    ]
    table = enumerate_weyl(matrix_B2())
    system = ChamberSystem(weyl=table, n=len(chambers), panels=panels)
    return Building(system, name=f"sp4_{q}")


def product(b1: Building, b2: Building) -> Building:
    """Direct product building of reducible type."""
    m1, m2 = b1.weyl.matrix, b2.weyl.matrix
    if set(m1.gens) & set(m2.gens):
        raise NameClash(f"generator names overlap: {set(m1.gens) & set(m2.gens)}")
    k1, k2 = m1.rank, m2.rank
    gens = m1.gens + m2.gens
    rows = []
    for i in range(k1):
        rows.append(tuple(m1.m[i]) + tuple(2 for _ in range(k2)))
    for j in range(k2):
        rows.append(tuple(2 for _ in range(k1)) + tuple(m2.m[j]))
    matrix = CoxeterMatrix(gens, tuple(rows))
    table = enumerate_weyl(matrix)
    n1, n2 = b1.n, b2.n
    def cid(x1: int, x2: int) -> int:
        return x1 * n2 + x2

    panels: list[list[tuple[int, ...]]] = []
    for s in range(k1):
        fam = []
        for p in b1.system.panels[s]:
            for y in range(n2):
                fam.append(tuple(cid(x, y) for x in p))
        panels.append(sorted(fam))
    for s in range(k2):
        fam = []
        for x in range(n1):
            for p in b2.system.panels[s]:
                fam.append(tuple(sorted(cid(x, y) for y in p)))
        panels.append(sorted(fam))
    system = ChamberSystem(weyl=table, n=n1 * n2, panels=panels)
    return Building(system, name=f"{b1.name}_x_{b2.name}")


def poincare_count(table: WeylTable, q: int) -> int:
    """Sum of q^l(w) over the enumerated group."""
    return sum(q ** l for l in table.length)
