"""Gallery homotopy, connectivity certificates, and residual filtrations."""

import pytest

from twinbuild.codistance import Codistance, from_opposite_chamber
from twinbuild.errors import EndpointMismatch, NotConnected
from twinbuild.homotopy import (
    FiltrationViolation,
    Gallery,
    INCONCLUSIVE,
    PROVEN_NONTRIVIAL,
    PROVEN_TRIVIAL,
    check_lco,
    check_lsco,
    connected,
    elementary_2_homotopic,
    opposite_set,
    residual_filtration,
    simply_2_connected,
    two_homotopic,
)


def step(b, c, s):
    """The first chamber other than c in the s-panel of c."""
    return next(z for z in b.system.panel_members(c, s) if z != c)


def walk(b, start, types):
    chambers = [start]
    for s in types:
        chambers.append(step(b, chambers[-1], s))
    return Gallery.check(b, chambers, types)


def coxeter_cycle(b):
    """The orbit cycle of chamber 0 under repeated 0,1,2 panel steps."""
    orbit = [0]
    c = 0
    while True:
        for s in (0, 1, 2):
            c = step(b, c, s)
            if c == 0:
                return orbit
            orbit.append(c)


# -- galleries ----------------------------------------------------------------


def test_gallery_check_accepts_panel_walk(fano):
    g = walk(fano, 0, [0, 1, 0])
    assert g.start == 0
    assert len(g) == 3


def test_gallery_check_rejects_non_adjacent(fano):
    far = next(
        c for c in range(fano.n) if fano.ldist(0, c) > 1
    )
    with pytest.raises(ValueError):
        Gallery.check(fano, [0, far], [0])


def test_gallery_shape_mismatch():
    with pytest.raises(ValueError):
        Gallery((0, 1, 2), (0,))


# -- elementary 2-homotopy ----------------------------------------------------


def test_identical_galleries_elementary(fano):
    g = walk(fano, 0, [0, 1])
    assert elementary_2_homotopic(g, g)


def test_rank2_detour_is_elementary(fano):
    # replace the first step 0 ~0~ m with a two-step tour of the 0-panel
    g = walk(fano, 0, [0, 1])
    m = g.chambers[1]
    m2 = next(
        z for z in fano.system.panel_members(0, 0) if z not in (0, m)
    )
    h = Gallery.check(fano, [0, m2, m, g.chambers[2]], [0, 0, 1])
    assert elementary_2_homotopic(g, h)
    assert elementary_2_homotopic(h, g)


def test_three_type_middles_are_not_elementary(thin_a1cubed):
    # in the thin A1 x A1 x A1 building the generators commute, so the
    # reversed type sequence reaches the same endpoint
    b = thin_a1cubed
    g = walk(b, 0, [0, 1, 2])
    h = walk(b, 0, [2, 1, 0])
    assert g.end == h.end
    assert g.chambers != h.chambers
    assert not elementary_2_homotopic(g, h)


def test_two_homotopic_identity(fano):
    g = walk(fano, 0, [0, 1, 0])
    v = two_homotopic(g, g, b=fano)
    assert v.status == PROVEN_TRIVIAL


def test_two_homotopic_requires_shared_endpoints(fano):
    g = walk(fano, 0, [0, 1])
    h = walk(fano, 0, [1, 0])
    if g.end == h.end:
        pytest.skip("chose galleries with equal endpoints")
    with pytest.raises(EndpointMismatch):
        two_homotopic(g, h, b=fano)


def test_two_homotopic_in_rank2_building(fano):
    # the whole building is one rank-2 residue, so any two galleries with
    # the same endpoints are one elementary move apart
    g = walk(fano, 0, [0, 1, 0])
    target = g.end
    h = None
    for types in ([1, 0, 1], [0, 1, 0]):
        for cand_ch in _all_walks(fano, 0, types):
            if cand_ch[-1] == target and cand_ch != g.chambers:
                h = Gallery.check(fano, cand_ch, types)
                break
        if h is not None:
            break
    assert h is not None
    v = two_homotopic(g, h, b=fano)
    assert v.status == PROVEN_TRIVIAL


def _all_walks(b, start, types):
    partial = [(start,)]
    for s in types:
        nxt = []
        for ch in partial:
            for z in b.system.panel_members(ch[-1], s):
                if z != ch[-1]:
                    nxt.append(ch + (z,))
        partial = nxt
    return partial


def test_two_homotopic_bounded_exploration(thin_a3):
    b = thin_a3
    g = walk(b, 0, [0, 1, 2, 0, 1, 2])
    h = walk(b, 0, [0, 1, 2, 0, 1, 2, 2, 2])
    assert g.end == h.end
    v = two_homotopic(g, h, bound=1, b=b, max_replace=1)
    assert v.status == INCONCLUSIVE


# -- connectivity -------------------------------------------------------------


def test_whole_building_connected(fano):
    assert connected(range(fano.n), range(2), fano)


def test_empty_subset_connected(fano):
    assert connected((), range(2), fano)


def test_two_far_chambers_disconnected(fano):
    far = next(c for c in range(fano.n) if fano.ldist(0, c) == 3)
    assert not connected({0, far}, range(2), fano)


def test_simply_2_connected_whole_building(fano):
    v = simply_2_connected(range(fano.n), fano)
    assert v.status == PROVEN_TRIVIAL


def test_simply_2_connected_rank3_thin(thin_a3):
    v = simply_2_connected(range(thin_a3.n), thin_a3)
    assert v.status == PROVEN_TRIVIAL


def test_coxeter_cycle_proven_nontrivial(thin_a3):
    orbit = coxeter_cycle(thin_a3)
    assert len(orbit) == 12
    v = simply_2_connected(orbit, thin_a3, coset_cap=1000)
    assert v.status == PROVEN_NONTRIVIAL
    assert v.certificate == ("free", 1)


def test_disconnected_subset_raises(fano):
    far = next(c for c in range(fano.n) if fano.ldist(0, c) == 3)
    with pytest.raises(NotConnected):
        simply_2_connected({0, far}, fano)


# -- local conditions ---------------------------------------------------------


def test_lco_passes_on_projective_planes(fano, pg23, digon33):
    for b in (fano, pg23, digon33):
        report = check_lco(b)
        assert report.ok
        assert report.first_failure() is None


def test_lco_fails_on_symplectic_quadrangle(sp42):
    report = check_lco(sp42)
    assert not report.ok
    first = report.first_failure()
    assert first is not None
    assert first.verdict.status == PROVEN_NONTRIVIAL
    # every chamber of every residue witnesses the failure here
    assert len(report.entries) == 45


def test_opposite_set_contents(fano):
    R = fano.residue(0, (0, 1))
    opp = opposite_set(fano, R, 0)
    r = fano.weyl.longest_element((0, 1))
    assert opp == frozenset(
        y for y in range(fano.n) if fano.delta(0, y) == r
    )
    assert opp
    assert connected(opp, (0, 1), fano)


def test_lsco_on_thin_rank3(thin_a3, thin_a1cubed):
    for b in (thin_a3, thin_a1cubed):
        report = check_lsco(b)
        assert report.ok


def test_lsco_vacuous_in_rank2(fano):
    # no rank-3 residues to check
    assert check_lsco(fano).ok


# -- residual filtration ------------------------------------------------------


def test_filtration_levels(fano):
    f = from_opposite_chamber(fano, 0)
    filt = residual_filtration(f)
    assert [len(L) for L in filt.levels] == [8, 12, 16, 18, 20, 21]
    assert filt.levels[0] == f.fop_set()
    assert filt.levels[-1] == frozenset(range(fano.n))
    for n in range(1, len(filt.levels)):
        assert filt.levels[n - 1] < filt.levels[n]
        assert n in filt.witnesses


def test_filtration_level_of(fano):
    f = from_opposite_chamber(fano, 0)
    filt = residual_filtration(f)
    for c in range(fano.n):
        lvl = filt.level_of(c)
        assert c in filt.levels[lvl]
        assert lvl == 0 or c not in filt.levels[lvl - 1]


def test_filtration_on_all_fixtures(sp42, thin_a3, digon33):
    for b in (sp42, thin_a3, digon33):
        f = from_opposite_chamber(b, 0)
        filt = residual_filtration(f)
        assert filt.levels[0] == f.fop_set()


def test_filtration_violation_detected(fano):
    r = fano.weyl.longest_element(range(2))
    values = [r] * fano.n
    values[0] = 0
    with pytest.raises(FiltrationViolation) as exc:
        residual_filtration(Codistance(fano, values))
    assert exc.value.axiom == "F3"
