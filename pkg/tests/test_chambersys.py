import pytest

from twinbuild.catalog import gen_pg2, matrix_A2
from twinbuild.chambersys import Building, ChamberSystem, validate_building
from twinbuild.coxeter import CoxeterMatrix, enumerate_weyl
from twinbuild.errors import Disconnected, NotInResidue


def test_validate_fixtures(fano, digon33, sp42, thin_a3):
    for b in (fano, digon33, sp42):
        report = validate_building(b)
        assert report.ok
        assert b.system.is_thick()
    report = validate_building(thin_a3)
    assert report.ok
    assert thin_a3.system.is_thin()


def test_delta_symmetry_and_length(fano):
    table = fano.weyl
    for x in range(fano.n):
        for y in range(fano.n):
            assert fano.delta(y, x) == table.inv(fano.delta(x, y))
            assert fano.ldist(x, y) == table.length[fano.delta(x, y)]
    # numerical distance equals graph distance (checked by validator too)
    assert fano.delta(0, 0) == 0


def test_gate_property(fano):
    """delta(c, y) = delta(c, proj) * delta(proj, y) for every residue."""
    table = fano.weyl
    for J in [frozenset({0}), frozenset({1}), frozenset({0, 1})]:
        seen = set()
        for c0 in range(fano.n):
            R = fano.residue(c0, J)
            if (R.J, R.base) in seen:
                continue
            seen.add((R.J, R.base))
            for c in range(fano.n):
                gate = fano.proj_chamber(R, c)
                for y in R.chambers():
                    assert fano.delta(c, y) == table.mult(
                        fano.delta(c, gate), fano.delta(gate, y)
                    )
                    if y != gate:
                        assert fano.ldist(c, y) > fano.ldist(c, gate)


def test_singleton_panel_rejected(fano):
    panels = [list(map(tuple, fam)) for fam in fano.system.panels]
    # split one panel into a singleton and the rest
    victim = panels[0][0]
    panels[0][0] = victim[:1]
    panels[0].append(victim[1:])
    with pytest.raises(ValueError):
        ChamberSystem(fano.weyl, fano.n, panels)


def test_moved_chamber_fails_validation(fano):
    panels = [sorted(tuple(p) for p in fam) for fam in fano.system.panels]
    a = list(panels[0][0])
    b = list(panels[0][1])
    b.append(a.pop())
    panels[0][0] = tuple(sorted(a))
    panels[0][1] = tuple(sorted(b))
    try:
        system = ChamberSystem(fano.weyl, fano.n, panels)
        building = Building(system, name="mutated")
        report = validate_building(building)
        assert not report.ok
    except (ValueError, Disconnected):
        pass  # the mutation may already break the chamber system


def test_disconnected_raises():
    table = enumerate_weyl(CoxeterMatrix(("a",), ((1,),)))
    system = ChamberSystem(table, 4, [[(0, 1), (2, 3)]])
    with pytest.raises(Disconnected):
        Building(system, name="twopieces")


def test_residue_views(fano):
    R = fano.residue(0, {0})
    assert 0 in R
    assert len(R) == 3
    assert R == fano.residue(min(R.chambers()), {0})
    with pytest.raises(NotInResidue):
        fano.opposite_chambers(R, 0, max(range(fano.n), key=lambda c: fano.ldist(0, c)))


def test_opposite_chambers_and_residues(fano):
    table = fano.weyl
    rS = table.longest_element((0, 1))
    whole = fano.residue(0, {0, 1})
    opp = [y for y in range(fano.n) if fano.delta(0, y) == rS]
    assert opp
    for y in opp:
        assert fano.opposite_chambers(whole, 0, y)
    # opposite panels inside the whole (rank-2) building
    P = fano.panel(0, 0)
    y = opp[0]
    Q = fano.panel(y, 1)
    assert fano.opposite_residues(whole, P, Q) == (
        fano.weyl.gen_index(
            table.mult(table.mult(rS, table.gen(1)), rS)
        ) == 0
        and any(fano.delta(a, c) == rS for a in P.chambers() for c in Q.chambers())
    )


def test_parallel_panels(fano):
    # an s-panel is parallel to itself and to any opposite panel
    P = fano.panel(0, 0)
    assert fano.are_parallel(P, P)
    rS = fano.weyl.longest_element((0, 1))
    y = next(y for y in range(fano.n) if fano.delta(0, y) == rS)
    Q = fano.panel(y, 1)
    if fano.opposite_residues(fano.residue(0, {0, 1}), P, Q):
        assert fano.are_parallel(P, Q)
    # panels of equal type through adjacent chambers are not parallel here
    z = next(z for z in range(fano.n) if fano.delta(0, z) == fano.weyl.gen(1))
    assert not fano.are_parallel(P, fano.panel(z, 0))


def test_proj_residue_panel(fano):
    rS = fano.weyl.longest_element((0, 1))
    y = next(y for y in range(fano.n) if fano.delta(0, y) == rS)
    P = fano.panel(0, 0)
    Q = fano.panel(y, 1)
    img = fano.proj_residue(Q, P)
    assert img.J == Q.J and set(img.chambers()) <= set(Q.chambers()) or img == Q
