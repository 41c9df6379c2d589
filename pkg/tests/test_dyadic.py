import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from haargc.dyadic import (
    CONSTANT,
    DyadicIndex,
    Exponent,
    HaarExpansion,
    Interval,
    UniformStepFunction,
    analyze,
    atom_values,
    from_rank,
    indices_up_to,
    lp_norm,
    natural_rank,
    norm,
    pairing,
    synthesize,
)

exponents = st.floats(1.05, 20.0)


@st.composite
def expansions(draw, max_level=4, p=None):
    if p is None:
        p = draw(exponents)
    pool = indices_up_to(max_level)
    chosen = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=12, unique=True))
    coeffs = draw(st.lists(st.floats(-5, 5).filter(lambda c: abs(c) > 1e-3),
                           min_size=len(chosen), max_size=len(chosen)))
    return HaarExpansion(p, dict(zip(chosen, coeffs)))


def test_natural_rank_examples():
    assert natural_rank(CONSTANT) == 0
    assert natural_rank(Interval(0, 0)) == 1
    assert natural_rank(Interval(2, 3)) == 7


def test_natural_rank_is_a_bijection_onto_prefix():
    ranks = [natural_rank(i) for i in indices_up_to(5)]
    assert ranks == list(range(64))
    assert all(from_rank(r) == i for r, i in zip(ranks, indices_up_to(5)))


def test_rank_follows_level_offset_order():
    pool = indices_up_to(4)[1:]
    by_rank = sorted(pool, key=natural_rank)
    assert by_rank == sorted(pool, key=lambda i: (i.level, i.offset))


@pytest.mark.parametrize("level,offset", [(0, 1), (2, 4), (-2, 0), (3, -1)])
def test_invalid_index(level, offset):
    with pytest.raises(ValueError):
        DyadicIndex(level, offset)


def test_measure():
    assert CONSTANT.measure == 1.0
    assert Interval(3, 5).measure == 0.125


@pytest.mark.parametrize("p", [1.0, 0.5, math.inf, math.nan])
def test_exponent_rejects(p):
    with pytest.raises(ValueError):
        Exponent(p)
    with pytest.raises(ValueError):
        HaarExpansion(p, {})


def test_exponent_accessors():
    e = Exponent(3.0)
    assert e.conjugate == pytest.approx(1.5)
    assert e.star == 3.0 and e.sharp == pytest.approx(1.5)


def test_step_function_length():
    with pytest.raises(ValueError):
        UniformStepFunction(2, np.zeros(3))


def test_expansion_drops_zeros():
    f = HaarExpansion(2, {CONSTANT: 0.0, Interval(1, 1): 2.0})
    assert f.support == {Interval(1, 1)}
    assert f.max_level == 1 and f.min_depth == 2


def test_synthesize_examples():
    s = synthesize(HaarExpansion(2, {Interval(0, 0): 1}), 1)
    np.testing.assert_allclose(s.values, [-1, 1])
    s = synthesize(HaarExpansion(2, {CONSTANT: 1, Interval(0, 0): 1}), 1)
    np.testing.assert_allclose(s.values, [0, 2])
    s = synthesize(HaarExpansion(3, {Interval(1, 0): 1}), 2)
    c = 2 ** (1 / 3)
    np.testing.assert_allclose(s.values, [-c, c, 0, 0], rtol=1e-15)


def test_synthesize_insufficient_resolution():
    with pytest.raises(ValueError, match="insufficient resolution"):
        synthesize(HaarExpansion(2, {Interval(2, 1): 1}), 2)


def test_lp_norm_examples():
    assert lp_norm(UniformStepFunction(1, [-1, 1]), 2) == pytest.approx(1, abs=1e-15)
    assert lp_norm(UniformStepFunction(1, [0, 2]), 2) == pytest.approx(math.sqrt(2), abs=1e-15)
    four = HaarExpansion(2, {Interval(2, k): 1 for k in range(4)})
    assert lp_norm(synthesize(four, 3), 2) == pytest.approx(2, abs=1e-12)
    assert lp_norm(UniformStepFunction(2, [0, -3, 1, 2]), math.inf) == 3


def test_pairing_examples():
    p, q = 3.0, 1.5
    I, J = Interval(1, 1), Interval(2, 0)
    hI = synthesize(HaarExpansion(p, {I: 1}), 2)
    assert pairing(hI, synthesize(HaarExpansion(q, {I: 1}), 2)) == pytest.approx(1, abs=1e-12)
    assert pairing(hI, synthesize(HaarExpansion(q, {J: 1}), 3)) == pytest.approx(0, abs=1e-12)
    A = [CONSTANT, Interval(0, 0), Interval(3, 5)]
    s_p = synthesize(HaarExpansion(p, {i: 1 for i in A}), 4)
    s_q = synthesize(HaarExpansion(q, {i: 1 for i in A}), 4)
    assert pairing(s_q, s_p) == pytest.approx(3, abs=1e-12)


def test_analyze_examples():
    f = HaarExpansion(3, {Interval(0, 0): 1})
    assert analyze(synthesize(f, 1), 3).allclose(f)
    g = analyze(UniformStepFunction(3, np.ones(8)), 3)
    assert g.allclose(HaarExpansion(3, {CONSTANT: 1}))
    assert g.support == {CONSTANT}


def test_analyze_random_round_trip():
    rng = np.random.default_rng(0)
    pool = indices_up_to(3)
    for p in (1.3, 2.0, 5.0):
        f = HaarExpansion(p, {i: rng.uniform(-1, 1) for i in pool})
        for depth in (4, 6):
            g = analyze(synthesize(f, depth), p)
            assert max(abs(f[i] - g[i]) for i in pool) < 1e-12
            assert g.support == f.support


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(indices_up_to(6)), exponents, st.integers(0, 3))
def test_atoms_are_normalized(idx, p, extra):
    depth = max(idx.level + 1, 0) + extra
    assert lp_norm(UniformStepFunction(depth, atom_values(idx, p, depth)), p) == \
        pytest.approx(1.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(indices_up_to(4)), st.sampled_from(indices_up_to(4)), exponents)
def test_biorthogonality(I, J, p):
    q = p / (p - 1)
    u = UniformStepFunction(5, atom_values(I, p, 5))
    v = UniformStepFunction(5, atom_values(J, q, 5))
    assert pairing(u, v) == pytest.approx(float(I == J), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(expansions(p=2.0))
def test_parseval(f):
    total = sum(c * c for c in f.coeffs.values())
    assert lp_norm(synthesize(f), 2) ** 2 == pytest.approx(total, rel=1e-12, abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(exponents, st.integers(0, 2**32 - 1))
def test_holder(p, seed):
    rng = np.random.default_rng(seed)
    u = UniformStepFunction(5, rng.normal(size=32))
    v = UniformStepFunction(4, rng.normal(size=16))
    q = p / (p - 1)
    assert abs(pairing(u, v)) <= lp_norm(u, p) * lp_norm(v, q) * (1 + 1e-12)


@settings(max_examples=100, deadline=None)
@given(expansions(), st.integers(0, 2))
def test_round_trip(f, extra):
    g = analyze(synthesize(f, f.min_depth + extra), f.p)
    assert g.allclose(f, tol=1e-12 * max(1.0, max(abs(c) for c in f.coeffs.values()) * 2 ** 3))


def test_norm_of_empty_expansion():
    assert norm(HaarExpansion(2.5, {})) == 0.0


def test_expansion_arithmetic():
    f = HaarExpansion(2, {CONSTANT: 1.0, Interval(0, 0): 2.0})
    g = HaarExpansion(2, {Interval(0, 0): 2.0})
    assert (f - g) == HaarExpansion(2, {CONSTANT: 1.0})
    assert (-f)[CONSTANT] == -1.0
    with pytest.raises(ValueError):
        f + HaarExpansion(3, {})
