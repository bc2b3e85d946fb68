import pytest

from twinbuild.catalog import (
    gen_digon,
    gen_pg2,
    gen_pg3,
    gen_sp4,
    gen_thin,
    matrix_A2,
    matrix_A3,
    poincare_count,
    product,
)
from twinbuild.chambersys import validate_building
from twinbuild.errors import NameClash, UnsupportedQ


COUNTS = [
    ("pg2", 2, 21),
    ("pg2", 3, 52),
    ("pg3", 2, 315),
    ("sp4", 2, 45),
    ("sp4", 3, 160),
]


@pytest.mark.parametrize("family,q,n", COUNTS)
def test_chamber_counts_and_poincare(family, q, n):
    gen = {"pg2": gen_pg2, "pg3": gen_pg3, "sp4": gen_sp4}[family]
    b = gen(q)
    assert b.n == n
    # independent count: sum of q^l(w) over the Weyl group
    assert poincare_count(b.weyl, q) == n
    assert validate_building(b).ok


def test_thin_building(thin_a2, thin_a3):
    assert thin_a2.n == 6
    assert thin_a3.n == 24
    for b in (thin_a2, thin_a3):
        assert b.system.is_thin()
        assert validate_building(b).ok
        # delta from the identity chamber enumerates the group
        assert sorted(b.delta(0, y) for y in range(b.n)) == list(range(b.n))


def test_digon(digon33):
    assert digon33.n == 9
    assert validate_building(digon33).ok
    # every point panel meets every line panel in exactly one chamber
    for p in digon33.system.panels[0]:
        for q in digon33.system.panels[1]:
            assert len(set(p) & set(q)) == 1


def test_unsupported_q():
    with pytest.raises(UnsupportedQ):
        gen_pg2(4)
    with pytest.raises(UnsupportedQ):
        gen_sp4(5)


def test_product():
    b1 = gen_thin(matrix_A2())
    b2 = gen_pg2(2)
    with pytest.raises(NameClash):
        product(b1, b2)  # both use generator names p, l
    b1 = gen_thin(matrix_A2(("a", "b")))
    combined = product(b1, b2)
    assert combined.n == b1.n * b2.n
    assert validate_building(combined).ok
    # cross-type bonds are commuting
    m = combined.weyl.matrix.m
    assert all(m[i][j] == 2 for i in range(2) for j in range(2, 4))


def test_sp4_is_generalized_quadrangle(sp42):
    # B2 building: longest element has length 4
    table = sp42.weyl
    assert table.length[table.longest_element((0, 1))] == 4
    assert validate_building(sp42).ok
