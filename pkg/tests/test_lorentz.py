from __future__ import annotations

import random

import pytest

from coxglue.coxeter import DECK_GENERATOR, LONGEST_ELEMENT_DIM8, ORDER8_SYMMETRY
from coxglue.lorentz import (
    DimensionMismatch,
    LorentzMatrix,
    LorentzVector,
    RowSpan,
    classify,
    det,
    form_matrix,
    identity,
    is_positive_lorentzian,
    lorentz_inner,
    mat_mul,
    mat_vec,
    primitive,
    rank,
    reflection_in,
)

E7 = (0, 0, 0, 0, 0, 0, 1)
U7 = (1, 1, 0, 0, 0, 0, 1)
U22 = (1, 1, 1, 1, 1, 0, 2)

R7_EXPECTED = (
    (-1, -2, 0, 0, 0, 0, 2),
    (-2, -1, 0, 0, 0, 0, 2),
    (0, 0, 1, 0, 0, 0, 0),
    (0, 0, 0, 1, 0, 0, 0),
    (0, 0, 0, 0, 1, 0, 0),
    (0, 0, 0, 0, 0, 1, 0),
    (-2, -2, 0, 0, 0, 0, 3),
)

R22_EXPECTED = (
    (-1, -2, -2, -2, -2, 0, 4),
    (-2, -1, -2, -2, -2, 0, 4),
    (-2, -2, -1, -2, -2, 0, 4),
    (-2, -2, -2, -1, -2, 0, 4),
    (-2, -2, -2, -2, -1, 0, 4),
    (0, 0, 0, 0, 0, 1, 0),
    (-4, -4, -4, -4, -4, 0, 9),
)


def test_inner_product_examples():
    assert lorentz_inner(E7, E7) == -1
    assert lorentz_inner(U7, U7) == 1
    assert lorentz_inner(U22, U22) == 1


def test_inner_product_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        lorentz_inner((1, 0), (1, 0, 0))


def test_classification():
    assert classify(E7) == "timelike"
    assert classify((1, 0, 0, 0, 0, 0, 1)) == "lightlike"
    assert classify(U7) == "spacelike"


def test_reflection_displays():
    assert reflection_in(U7) == R7_EXPECTED
    assert reflection_in(U22) == R22_EXPECTED
    u1 = (-1, 0, 0, 0, 0, 0, 0)
    assert reflection_in(u1) == (
        (-1, 0, 0, 0, 0, 0, 0),
        (0, 1, 0, 0, 0, 0, 0),
        (0, 0, 1, 0, 0, 0, 0),
        (0, 0, 0, 1, 0, 0, 0),
        (0, 0, 0, 0, 1, 0, 0),
        (0, 0, 0, 0, 0, 1, 0),
        (0, 0, 0, 0, 0, 0, 1),
    )


def test_reflection_rejects_non_unit():
    with pytest.raises(ValueError):
        reflection_in((1, 1, 0, 0, 0, 0, 0), norm=1)
    with pytest.raises(ValueError):
        reflection_in(E7)


def test_reflection_involution_and_positivity():
    for u in (U7, U22, (-1, 0, 0, 0, 0, 0, 0)):
        r = reflection_in(u)
        assert mat_mul(r, r) == identity(7)
        assert is_positive_lorentzian(r)


def test_reflection_fixes_perpendicular():
    r = reflection_in(U7)
    for w in ((1, 1, 1, 0, 0, 0, 2), (1, -1, 0, 0, 0, 0, 0)):
        assert lorentz_inner(U7, w) == 0
        assert mat_vec(r, w) == w


def test_is_positive_lorentzian():
    assert is_positive_lorentzian(DECK_GENERATOR)
    assert is_positive_lorentzian(ORDER8_SYMMETRY)
    assert not is_positive_lorentzian(form_matrix(7))  # time reversing
    assert is_positive_lorentzian(LONGEST_ELEMENT_DIM8)
    assert not is_positive_lorentzian(((1, 0), (1, 1)))


def test_primitive():
    assert primitive((2, 4, 6)) == (1, 2, 3)
    assert primitive((0, 0, -2)) == (0, 0, 1)
    assert primitive((-3, 0, 0)) == (1, 0, 0)
    assert primitive((0, 0, 0)) == (0, 0, 0)


def test_det_and_rank():
    assert det(((2, 0), (0, 3))) == 6
    assert det(identity(5)) == 1
    assert det(((1, 2), (2, 4))) == 0
    assert rank([(1, 2, 3), (2, 4, 6), (0, 1, 1)]) == 2
    span = RowSpan()
    assert span.add((1, 0, 2))
    assert not span.add((2, 0, 4))
    assert span.add((0, 5, 1))
    assert span.rank == 2


def test_random_dets_against_expansion():
    rng = random.Random(7)

    def naive(m):
        n = len(m)
        if n == 1:
            return m[0][0]
        return sum((-1) ** j * m[0][j] *
                   naive([row[:j] + row[j + 1:] for row in m[1:]])
                   for j in range(n))

    for _ in range(50):
        n = rng.randint(1, 5)
        m = [[rng.randint(-6, 6) for _ in range(n)] for _ in range(n)]
        assert det(tuple(tuple(r) for r in m)) == naive(m)


def test_dataclass_wrappers():
    v = LorentzVector.of(U7)
    assert v.ambient_dim == 6 and v.classify() == "spacelike"
    with pytest.raises(DimensionMismatch):
        LorentzVector((1, 0), 3)
    m = LorentzMatrix(reflection_in(U7))
    assert m.is_form_preserving() and m.is_positive()
    assert (m @ m).entries == identity(7)
    assert m.inverse().entries == m.entries
    assert m.det() == -1
    assert m.apply(LorentzVector.of(E7)).coords == (2, 2, 0, 0, 0, 0, 3)


def test_all_side_reflections_are_involutions(p6):
    from coxglue.lorentz import mat_mul, mat_vec, identity
    for u in p6.normals:
        r = reflection_in(u, norm=1)
        assert mat_mul(r, r) == identity(7)
        assert is_positive_lorentzian(r)
        for v in p6.vertices:
            if lorentz_inner(u, v) == 0:
                assert mat_vec(r, v) == v
