from itertools import product
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldman_tensor.homgoldman import (
    HGElement,
    LatticeMismatch,
    PairingLattice,
    UnsupportedPairing,
    center_member,
    commutator_member,
    hg_bracket,
    ideal_shape_check,
    nu,
)

SYM1 = PairingLattice.symplectic(1)
A, B = (1, 0), (0, 1)


@st.composite
def lattices(draw, max_rank=6):
    r = draw(st.integers(1, max_rank))
    m = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            m[i][j] = draw(st.integers(-5, 5))
            m[j][i] = -m[i][j]
    return PairingLattice(r, tuple(map(tuple, m)))


def elements(lat, nterms=3):
    vec = st.tuples(*[st.integers(-3, 3)] * lat.rank)
    return st.dictionaries(vec, st.integers(-4, 4), max_size=nterms).map(lambda d: HGElement(lat, d))


@st.composite
def lattice_triples(draw):
    lat = draw(lattices())
    return lat, draw(elements(lat)), draw(elements(lat)), draw(elements(lat))


# -- bracket ------------------------------------------------------------------


def test_bracket_examples():
    assert hg_bracket(HGElement.basis(SYM1, A), HGElement.basis(SYM1, B)) == HGElement.basis(SYM1, (1, 1))
    x = HGElement.basis(SYM1, (2, 3))
    assert not hg_bracket(x, x)
    assert hg_bracket(HGElement.basis(SYM1, (2, -1)), HGElement.basis(SYM1, B)) == HGElement.basis(SYM1, (2, 0), 2)


@settings(max_examples=300, deadline=None)
@given(lattice_triples())
def test_jacobi_and_antisymmetry(t):
    _, x, y, z = t
    assert hg_bracket(x, y) == -hg_bracket(y, x)
    j = hg_bracket(x, hg_bracket(y, z)) + hg_bracket(y, hg_bracket(z, x)) + hg_bracket(z, hg_bracket(x, y))
    assert not j


def test_lattice_validation_and_mismatch():
    with pytest.raises(ValueError):
        PairingLattice(2, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        PairingLattice(2, ((0, 1),))
    with pytest.raises(LatticeMismatch):
        hg_bracket(HGElement.basis(SYM1, A), HGElement.basis(PairingLattice.symplectic(2), (1, 0, 0, 0)))


# -- nu and the commutator ideal ----------------------------------------------


def test_nu():
    assert nu((2, 4)) == 2
    assert nu((0, 0)) == 0
    assert nu((3, 5)) == 1
    assert nu((-6, 9, 0)) == 3


def test_commutator_member_examples():
    assert commutator_member(HGElement.basis(SYM1, (2, 4), 2))
    assert not commutator_member(HGElement.basis(SYM1, (2, 4), 1))
    assert not commutator_member(HGElement.basis(SYM1, (0, 0), 5))


def _reachable_gcd(lat, v, bound):
    g = 0
    for y in product(range(-bound, bound + 1), repeat=lat.rank):
        x = tuple(a - b for a, b in zip(v, y))
        if all(abs(c) <= bound for c in x):
            g = gcd(g, lat.pair(x, y))
    return g


@pytest.mark.parametrize("lat", [SYM1, PairingLattice(2, ((0, -1), (1, 0)))])
def test_commutator_member_matches_bracket_closure(lat):
    for v in product(range(-3, 4), repeat=2):
        g = _reachable_gcd(lat, v, 3)
        assert g == nu(v)
        for c in range(-6, 7):
            assert commutator_member(HGElement.basis(lat, v, c)) == (c == 0 or (g != 0 and c % g == 0))


def test_commutator_member_requires_unimodular_pairing():
    with pytest.raises(UnsupportedPairing):
        commutator_member(HGElement.basis(PairingLattice(2, ((0, 2), (-2, 0))), A))
    with pytest.raises(UnsupportedPairing):
        commutator_member(HGElement.basis(PairingLattice(1, ((0,),)), (1,)))


# -- center and ideals --------------------------------------------------------


def test_center_examples():
    assert center_member(HGElement.basis(SYM1, (0, 0)))
    assert not center_member(HGElement.basis(SYM1, A))
    degenerate = PairingLattice(3, ((0, 1, 0), (-1, 0, 0), (0, 0, 0)))
    assert center_member(HGElement.basis(degenerate, (0, 0, 5)))
    assert degenerate.kernel_basis() == [(0, 0, 1)]


@settings(max_examples=100, deadline=None)
@given(lattices(5), st.data())
def test_center_is_span_of_kernel(lat, data):
    u = data.draw(elements(lat))
    for z in lat.kernel_basis():
        u = u + HGElement.basis(lat, z)
    units = [tuple(int(i == j) for j in range(lat.rank)) for i in range(lat.rank)]
    commutes = all(not hg_bracket(HGElement.basis(lat, e), u) for e in units)
    assert commutes == center_member(u)


def test_ideal_shape_examples():
    zero = HGElement.basis(SYM1, (0, 0))
    assert ideal_shape_check(SYM1, [zero], [])
    assert ideal_shape_check(SYM1, [], [zero])
    assert not ideal_shape_check(SYM1, [HGElement.basis(SYM1, A)], [])


def test_json_roundtrip():
    lat = PairingLattice(3, ((0, 1, -2), (-1, 0, 3), (2, -3, 0)))
    assert PairingLattice.from_json(lat.to_json()) == lat
    u = HGElement(lat, {(1, 2, 0): "3/2", (0, 0, 0): -1})
    d = u.to_json()
    assert d == {"terms": [{"vec": [0, 0, 0], "coeff": "-1"}, {"vec": [1, 2, 0], "coeff": "3/2"}]}
    assert HGElement.from_json(lat, d) == u
    d["terms"].append(dict(d["terms"][0]))
    with pytest.raises(ValueError):
        HGElement.from_json(lat, d)
