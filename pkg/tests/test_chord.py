import random
from fractions import Fraction
from functools import lru_cache
from itertools import product

import pytest

from goldman_tensor.chord import (
    LinearChord,
    a_map,
    a_map_comb,
    amalgamate,
    cc_bracket,
    circular_sum,
    double_factorial,
    is_rotation_invariant,
    lc_bracket,
    lc_bracket_comb,
    lc_normalize,
    omega_diagram,
    standard_diagrams,
)
from goldman_tensor.johnson import map_to_tensor, tensor_to_map
from goldman_tensor.linalg import rank
from goldman_tensor.maps import TensorDerivation
from goldman_tensor.necklace import Necklace, act_derivation, bracket_necklace
from goldman_tensor.tensor import DomainError, SurfaceSignature, Tensor


@lru_cache(maxsize=None)
def circular_basis(m):
    out = []
    for C in standard_diagrams(m):
        e = circular_sum(C)
        if e and rank([dict(x) for x in out + [e]]) > len(out):
            out.append(e)
    return tuple(out)


def derivation_commutator(u: Tensor, v: Tensor) -> Tensor:
    du, dv = tensor_to_map(u), tensor_to_map(v)
    Du, Dv = TensorDerivation(u.sig, du), TensorDerivation(u.sig, dv)
    return map_to_tensor(u.sig, [Du(b) - Dv(a) for a, b in zip(du, dv)])


# -- linear diagrams ----------------------------------------------------------


def test_normalize_examples():
    assert lc_normalize([(2, 1)]) == LinearChord(1, ((1, 2),), -1)
    assert lc_normalize([(1, 2), (3, 5), (4, 6)]) == LinearChord(3, ((1, 2), (3, 5), (4, 6)), 1)
    assert lc_normalize([(2, 1), (4, 3)]).sign == 1
    with pytest.raises(ValueError):
        lc_normalize([(1, 3)])
    with pytest.raises(ValueError):
        lc_normalize([(1, 2), (2, 3)])


def test_standard_counts():
    assert [len(standard_diagrams(m)) for m in range(1, 5)] == [1, 3, 15, 105]
    assert [double_factorial(2 * m - 1) for m in range(1, 5)] == [1, 3, 15, 105]


def test_json_roundtrip():
    c = lc_normalize([(3, 1), (2, 4)])
    assert LinearChord.from_json(c.to_json()) == c
    with pytest.raises(ValueError):
        LinearChord.from_json({"m": 3, "pairs": [[1, 2]], "sign": 1})


# -- a-map --------------------------------------------------------------------


def test_a_map_examples():
    s = SurfaceSignature(2, 0, 4)
    assert a_map(s, ((1, 2),)) == Tensor.omega(s)
    assert a_map(s, [(2, 1)]) == -Tensor.omega(s)
    assert a_map(s, ((1, 2), (3, 4))) == Tensor.omega(s) * Tensor.omega(s)
    with pytest.raises(DomainError):
        a_map(SurfaceSignature(2, 0, 3), ((1, 2), (3, 4)))


@pytest.mark.parametrize("g,m", [(1, 2), (2, 2), (1, 3)])
def test_a_map_images_are_invariant(g, m):
    # degree-2 necklaces act on H through sp(H)
    s = SurfaceSignature(g, 0, 2 * m)
    gens = [Necklace.of_word(s, w) for w in product(range(2 * g), repeat=2)]
    for C in standard_diagrams(m):
        t = a_map(s, C)
        assert all(not act_derivation(u, t) for u in gens)


def test_a_map_rank_table():
    table = {(m, g): rank([a_map(SurfaceSignature(g, 0, 2 * m), C) for C in standard_diagrams(m)]) for m in (1, 2, 3) for g in (1, 2, 3)}
    assert table == {(1, 1): 1, (1, 2): 1, (1, 3): 1, (2, 1): 2, (2, 2): 3, (2, 3): 3, (3, 1): 5, (3, 2): 14, (3, 3): 15}
    # genus one invariants are counted by Catalan numbers
    assert [table[(m, 1)] for m in (1, 2, 3)] == [1, 2, 5]
    # injective exactly when m <= g on this grid (see notes)
    for (m, g), r in table.items():
        assert (r == double_factorial(2 * m - 1)) == (m <= g)


# -- linear bracket -----------------------------------------------------------


def test_lc_bracket_basic():
    for m in (1, 2):
        for C in standard_diagrams(m):
            assert not lc_bracket(C, C)
    for C, Cp in product(standard_diagrams(2), standard_diagrams(3)):
        assert all(len(k) == 4 for k in lc_bracket(C, Cp))
    assert amalgamate(((1, 2),), ((1, 2),), 2) == {((1, 2),): 1}


@pytest.mark.parametrize("g,m,l", [(1, 1, 2), (1, 2, 1), (2, 1, 2), (2, 2, 2)])
def test_a_map_is_homomorphism_on_linear_diagrams(g, m, l):
    s = SurfaceSignature(g, 0, 2 * (m + l))
    nonzero = 0
    for C in standard_diagrams(m):
        for Cp in standard_diagrams(l):
            lhs = a_map_comb(s, lc_bracket(C, Cp))
            assert lhs == derivation_commutator(a_map(s, C), a_map(s, Cp))
            nonzero += bool(lhs)
    assert nonzero


def test_lc_jacobi_direct():
    rng = random.Random(7)
    diagrams = {m: standard_diagrams(m) for m in (1, 2, 3)}
    for sizes in [(1, 1, 1), (1, 1, 2), (1, 2, 2), (1, 1, 3)] * 5:
        x, y, z = ({rng.choice(diagrams[m]): Fraction(1)} for m in sizes)
        j: dict = {}
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            for k, v in lc_bracket_comb(a, lc_bracket_comb(b, c)).items():
                j[k] = j.get(k, 0) + v
        assert not any(j.values())


# -- circular diagrams --------------------------------------------------------


def test_single_chord_circular_diagram_vanishes():
    assert circular_sum(((1, 2),)) == {}


def test_circular_dimensions():
    assert [len(circular_basis(m)) for m in (2, 3, 4)] == [1, 2, 17]
    for m in (2, 3, 4):
        assert all(is_rotation_invariant(e) for e in circular_basis(m))


def test_omega_two_is_central():
    om = omega_diagram(2)
    for m in (1, 2, 3):
        for C in standard_diagrams(m):
            assert not cc_bracket(om, circular_sum(C))


def test_cc_bracket_requires_invariant_input():
    with pytest.raises(DomainError):
        cc_bracket({((1, 2), (3, 4)): 1}, omega_diagram(2))


@pytest.mark.slow
def test_cc_bracket_structure_in_first_nontrivial_degree():
    # C_2 and C_3 are spanned by central elements, so C_3 x C_4 is the first place brackets can live
    b3, b4 = circular_basis(3), circular_basis(4)
    nonzero = 0
    for x, y in product(b3, b4[:6]):
        r = cc_bracket(x, y)
        assert is_rotation_invariant(r)
        assert {k: -v for k, v in cc_bracket(y, x).items()} == r
        assert all(len(k) == 6 for k in r)
        nonzero += bool(r)
    assert nonzero
    assert not cc_bracket(b4[0], b4[0])


@pytest.mark.slow
def test_a_map_intertwines_nonzero_bracket():
    s = SurfaceSignature(2, 0, 12)
    b3, b4 = circular_basis(3), circular_basis(4)
    x, y = next((x, y) for x, y in product(b3, b4) if cc_bracket(x, y))
    lhs = a_map_comb(s, cc_bracket(x, y))
    rhs = bracket_necklace(Necklace(a_map_comb(s, x)), Necklace(a_map_comb(s, y))).value
    assert lhs
    assert lhs == rhs
