import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfhoch.crossed import (
    BarChain,
    CrossedElement,
    LevelCapError,
    augmentation,
    bar_differential,
    bar_face,
    x_act_on_A,
    x_act_on_bar,
    x_multiply,
)
from hopfhoch.linalg import ExactArray
from hopfhoch.models import load
from hopfhoch.structures import StructureError

from conftest import SMALL


def reference_action(ma, i, x, p, idx):
    """(e_i (x) e_x (x) h_p) acting on the basis chain e_idx, by explicit sums.

    Returns {index tuple: Fraction}.
    """
    d, k = ma.dim, len(idx)
    mu = ma.alg.mult.tolist()
    rho = ma.action.tolist()
    hp = ExactArray.basis_vector(ma.field, ma.hopf.dim, p)
    cop = ma.hopf.iterated_coproduct(hp, k).tolist()
    terms = {}
    for hs in itertools.product(range(ma.hopf.dim), repeat=k):
        node = cop
        for h in hs:
            node = node[h]
        c = Fraction(node)
        if not c:
            continue
        # each slot s becomes h_s . a_s, as a vector
        slots = [[Fraction(rho[h][a][m]) for m in range(d)] for h, a in zip(hs, idx)]
        first = [sum(Fraction(mu[i][m][o]) * slots[0][m] for m in range(d)) for o in range(d)]
        slots[0] = first
        last = [sum(slots[-1][m] * Fraction(mu[m][x][o]) for m in range(d)) for o in range(d)]
        slots[-1] = last
        for out in itertools.product(range(d), repeat=k):
            w = c
            for s, o in enumerate(out):
                w *= slots[s][o]
                if not w:
                    break
            if w:
                terms[out] = terms.get(out, 0) + w
    return {t: v for t, v in terms.items() if v}


def as_dict(t: ExactArray):
    return {idx: Fraction(t[idx]) for idx in t.nonzero()}


def x_basis(ma):
    return [(i, x, p) for i in range(ma.dim) for x in range(ma.dim) for p in range(ma.hopf.dim)]


@pytest.mark.parametrize("name", SMALL)
def test_action_on_chains_matches_explicit_sums(name):
    ma = load(name)
    for (i, x, p), level in itertools.product(x_basis(ma), range(3)):
        for idx in itertools.product(range(ma.dim), repeat=level + 2):
            got = x_act_on_bar(ma, CrossedElement.basis(ma, i, x, p), BarChain.basis(ma, idx))
            assert as_dict(got.tensor) == reference_action(ma, i, x, p, idx)


@pytest.mark.parametrize("name", SMALL)
def test_x_is_associative_and_unital(name):
    ma = load(name)
    B = [CrossedElement.basis(ma, *t) for t in x_basis(ma)]
    one = CrossedElement.one(ma)
    for u in B:
        assert x_multiply(ma, one, u) == u
        assert x_multiply(ma, u, one) == u
    for u, v, w in itertools.product(B, repeat=3):
        assert x_multiply(ma, x_multiply(ma, u, v), w) == x_multiply(ma, u, x_multiply(ma, v, w))


@pytest.mark.parametrize("name", SMALL)
def test_multiplication_matches_composed_actions(name):
    # (uv).c = u.(v.c) on level-1 chains pins down the structure constants
    ma = load(name)
    B = [CrossedElement.basis(ma, *t) for t in x_basis(ma)]
    chains = [BarChain.basis(ma, idx) for idx in itertools.product(range(ma.dim), repeat=3)]
    for u, v in itertools.product(B, repeat=2):
        uv = x_multiply(ma, u, v)
        for c in chains:
            assert x_act_on_bar(ma, uv, c) == x_act_on_bar(ma, u, x_act_on_bar(ma, v, c))


@pytest.mark.parametrize("name", SMALL + ("group-translate(C3)",))
@pytest.mark.parametrize("level", [1, 2, 3])
def test_faces_are_x_linear(name, level):
    ma = load(name)
    gens = ([CrossedElement.basis(ma, i, 0, 0) for i in range(ma.dim)]
            + [CrossedElement.basis(ma, 0, x, 0) for x in range(ma.dim)]
            + [CrossedElement.basis(ma, 0, 0, p) for p in range(ma.hopf.dim)])
    idxs = list(itertools.product(range(ma.dim), repeat=level + 2))
    if len(idxs) > 250:
        idxs = idxs[:: len(idxs) // 250 + 1]
    for u, idx in itertools.product(gens, idxs):
        c = BarChain.basis(ma, idx)
        for j in range(level + 1):
            assert bar_face(ma, j, x_act_on_bar(ma, u, c)) == x_act_on_bar(ma, u, bar_face(ma, j, c))


@pytest.mark.parametrize("name", SMALL)
def test_augmentation_is_x_linear(name):
    ma = load(name)
    for t in x_basis(ma):
        u = CrossedElement.basis(ma, *t)
        for idx in itertools.product(range(ma.dim), repeat=2):
            c = BarChain.basis(ma, idx)
            assert augmentation(ma, x_act_on_bar(ma, u, c)) == x_act_on_A(ma, u, augmentation(ma, c))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), st.integers(2, 3), st.data())
def test_bar_differential_squares_to_zero(name, level, data):
    ma = load(name)
    idx = tuple(data.draw(st.integers(0, ma.dim - 1)) for _ in range(level + 2))
    c = BarChain.basis(ma, idx)
    dd = bar_differential(ma, bar_differential(ma, c))
    assert dd.tensor.is_zero()


def test_level_checks():
    ma = load("c2-sign")
    c = BarChain.basis(ma, (0, 1))
    with pytest.raises(ValueError):
        bar_face(ma, 0, c)
    with pytest.raises(ValueError):
        bar_differential(ma, c)
    with pytest.raises(ValueError):
        bar_face(ma, 3, BarChain.basis(ma, (0, 1, 1, 0)))
    with pytest.raises(LevelCapError):
        bar_differential(ma, BarChain.basis(ma, (0,) * 8), cap=5)
    with pytest.raises(StructureError):
        BarChain(2, ExactArray.zeros(ma.field, (2, 2)))
    with pytest.raises(StructureError):
        x_multiply(ma, CrossedElement(ExactArray.zeros(ma.field, (2, 2))), CrossedElement.one(ma))
