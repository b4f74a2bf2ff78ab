from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goldman_tensor.lie import is_lyndon, lie_basis, lyndon_words, mobius, standard_factorization, witt_dimension
from goldman_tensor.tensor import (
    DomainError,
    PairTensor,
    SignatureMismatch,
    SurfaceSignature,
    Tensor,
    antipode,
    aug,
    bracket,
    contract_c12,
    coproduct,
    cyclicize,
    exp_t,
    is_cyclic_invariant,
    is_grouplike,
    is_primitive,
    is_primitive_by_coproduct,
    log_t,
    power_series,
    sym_project,
)

SIG = SurfaceSignature(1, 1, 5)

coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def tensors(sig=SIG, min_deg=0, max_deg=None, max_terms=4):
    max_deg = sig.trunc if max_deg is None else max_deg
    word = st.integers(min_deg, max_deg).flatmap(
        lambda k: st.tuples(*[st.integers(0, sig.rank - 1)] * k) if k else st.just(())
    )
    return st.dictionaries(word, coeffs, max_size=max_terms).map(lambda d: Tensor(sig, d))


# -- signature ----------------------------------------------------------------


def test_signature_validation():
    with pytest.raises(ValueError):
        SurfaceSignature(0, 0, 4)
    with pytest.raises(ValueError):
        SurfaceSignature(1, 0, 1)
    with pytest.raises(ValueError):
        SurfaceSignature(-1, 2, 4)
    s = SurfaceSignature(2, 1, 4)
    assert s.rank == 5
    assert s.symbols() == ["A1", "B1", "A2", "B2", "C1"]
    assert s.parse_word("A1 B2C1") == (0, 3, 4)
    with pytest.raises(ValueError):
        s.parse_word("A3")
    with pytest.raises(ValueError):
        s.parse_word("C2")


def test_pairing_table():
    s = SurfaceSignature(2, 1, 4)
    assert s.pairing(0, 1) == 1 and s.pairing(1, 0) == -1
    assert s.pairing(0, 3) == 0 and s.pairing(4, 0) == 0 and s.pairing(0, 0) == 0


def test_omega_is_sum_of_symplectic_pairs():
    s = SurfaceSignature(2, 0, 4)
    om = Tensor.omega(s)
    assert om == Tensor.word(s, "A1B1") - Tensor.word(s, "B1A1") + Tensor.word(s, "A2B2") - Tensor.word(s, "B2A2")


# -- algebra ------------------------------------------------------------------


@given(tensors(), tensors(), tensors())
def test_multiplication_associative(u, v, w):
    assert (u * v) * w == u * (v * w)


@given(tensors(), tensors())
def test_distributive_and_unit(u, v):
    one = Tensor.one(SIG)
    assert u * one == u == one * u
    assert u * (v + one) == u * v + u


def test_truncation_drops_long_words():
    s = SurfaceSignature(1, 0, 3)
    A = Tensor.symbol(s, "A1")
    assert A * A * A * A == Tensor.zero(s)
    assert (A * A * A).degrees() == [3]


def test_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        Tensor.symbol(SurfaceSignature(1, 0, 4), 0) + Tensor.symbol(SurfaceSignature(1, 0, 5), 0)


@given(tensors(min_deg=1))
def test_exp_log_inverse(u):
    assert log_t(exp_t(u)) == u


@given(tensors(min_deg=1), tensors(min_deg=1))
def test_exp_of_commuting_sum(u, v):
    # u and 2u commute, so exp(3u) = exp(u) exp(2u)
    assert exp_t(u.scale(3)) == exp_t(u) * exp_t(u.scale(2))


def test_exp_requires_zero_constant():
    with pytest.raises(DomainError):
        exp_t(Tensor.one(SIG))
    with pytest.raises(DomainError):
        log_t(Tensor.zero(SIG))


def test_power_series_geometric():
    s = SurfaceSignature(1, 0, 4)
    x = Tensor.symbol(s, "A1")
    geo = power_series([1] * 5, x)
    assert geo * (Tensor.one(s) - x) == Tensor.one(s)


# -- Hopf structure -----------------------------------------------------------


@given(tensors(max_deg=3), tensors(max_deg=2))
def test_coproduct_is_multiplicative(u, v):
    assert coproduct(u * v) == coproduct(u) * coproduct(v)


@given(tensors(max_deg=3), tensors(max_deg=2))
def test_antipode_is_antimultiplicative(u, v):
    assert antipode(u * v) == antipode(v) * antipode(u)
    assert antipode(antipode(u)) == u


@given(tensors(max_deg=4))
def test_antipode_convolution(u):
    # m (S (x) id) Delta = unit o counit
    conv = Tensor.zero(SIG)
    for (a, b), c in coproduct(u).items():
        conv = conv + antipode(Tensor.word(SIG, a)) * Tensor.word(SIG, b).scale(c)
    assert conv == Tensor.one(SIG, aug(u))


@given(tensors(min_deg=1, max_deg=1), tensors(min_deg=1, max_deg=1), tensors(min_deg=1, max_deg=1))
def test_brackets_are_primitive(x, y, z):
    p = bracket(bracket(x, y), z) + bracket(x, z).scale(2) + y
    assert is_primitive(p)
    assert is_primitive_by_coproduct(p)


@given(tensors(min_deg=1, max_deg=4))
def test_primitivity_criteria_agree(u):
    assert is_primitive(u) == is_primitive_by_coproduct(u)


def test_exp_of_primitive_is_grouplike():
    s = SurfaceSignature(1, 0, 5)
    A, B = Tensor.symbol(s, 0), Tensor.symbol(s, 1)
    g = exp_t(A + bracket(A, B).scale(Fraction(1, 3)))
    assert is_grouplike(g)
    assert coproduct(g) == PairTensor.from_tensors(g, g)
    assert not is_grouplike(Tensor.one(s) + A * A)


def test_pair_tensor_swap_and_truncation():
    s = SurfaceSignature(1, 0, 3)
    A, B = Tensor.symbol(s, 0), Tensor.symbol(s, 1)
    p = PairTensor.from_tensors(A * B, A)
    assert p.swap() == PairTensor.from_tensors(A, A * B)
    assert PairTensor.from_tensors(A * B, A * B) == PairTensor(s)
    assert PairTensor.from_json(p.to_json()) == p


# -- cyclic structure ---------------------------------------------------------


@given(tensors(min_deg=1, max_deg=2), tensors(min_deg=1, max_deg=3))
def test_cyclic_trace_property(u, v):
    assert cyclicize(u * v) == cyclicize(v * u)


@given(tensors())
def test_cyclicize_image_is_invariant_and_kills_constants(u):
    n = cyclicize(u)
    assert is_cyclic_invariant(n)
    assert n.coeff(()) == 0


def test_cyclicize_example():
    s = SurfaceSignature(1, 0, 4)
    n = cyclicize(Tensor.word(s, "A1A1B1"))
    assert n == Tensor.word(s, "A1A1B1") + Tensor.word(s, "A1B1A1") + Tensor.word(s, "B1A1A1")
    assert cyclicize(Tensor.word(s, "A1B1A1B1")) == Tensor.word(s, "A1B1A1B1", 2) + Tensor.word(s, "B1A1B1A1", 2)


def test_contraction_and_symmetrization():
    s = SurfaceSignature(2, 0, 4)
    t = Tensor.word(s, "A1B1A2") + Tensor.word(s, "B1A1B2") + Tensor.word(s, "A1A2B2")
    assert contract_c12(t) == Tensor.word(s, "A2") - Tensor.word(s, "B2")
    assert sym_project(Tensor.word(s, "B1A1") - Tensor.word(s, "A1B1")) == Tensor.zero(s)
    with pytest.raises(DomainError):
        contract_c12(Tensor.symbol(s, 0))


@given(tensors())
def test_json_roundtrip(u):
    assert Tensor.from_json(u.to_json()) == u


def test_json_rejects_duplicates_and_long_words():
    d = Tensor.word(SIG, "A1").to_json()
    d["terms"].append(dict(d["terms"][0]))
    with pytest.raises(ValueError):
        Tensor.from_json(d)
    d = SurfaceSignature(1, 0, 2).to_json()
    d["terms"] = [{"word": ["A1", "A1", "A1"], "coeff": "1"}]
    with pytest.raises(ValueError):
        Tensor.from_json(d)


def test_json_coefficients_are_exact_strings():
    t = Tensor.word(SIG, "A1", Fraction(-2, 3))
    assert t.to_json()["terms"][0]["coeff"] == "-2/3"


# -- Lie basis ----------------------------------------------------------------


def test_mobius_and_witt():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    # necklace-polynomial values for rank 2
    assert [witt_dimension(2, k) for k in range(1, 9)] == [2, 1, 2, 3, 6, 9, 18, 30]
    assert [witt_dimension(4, k) for k in range(1, 6)] == [4, 6, 20, 60, 204]


def test_lyndon_words_and_factorization():
    words = lyndon_words(2, 4)
    assert words == [(0, 0, 0, 1), (0, 0, 1, 1), (0, 1, 1, 1)]
    assert all(is_lyndon(w) for w in words)
    assert not is_lyndon((0, 1, 0, 1))
    assert standard_factorization((0, 0, 1, 1)) == ((0,), (0, 1, 1))
    assert standard_factorization((0, 1, 0, 1, 1)) == ((0, 1), (0, 1, 1))


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 5))
def test_lie_basis_is_primitive_and_independent(k):
    from goldman_tensor.linalg import rank

    s = SurfaceSignature(1, 1, 5)
    basis = lie_basis(s, k)
    assert len(basis) == witt_dimension(s.rank, k)
    assert rank(basis) == len(basis)
    assert all(is_primitive(b) for b in basis)
