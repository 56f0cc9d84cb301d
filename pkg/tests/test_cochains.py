import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfhoch.cochains import (
    ContractError,
    DegreeCapError,
    ReducedCochain,
    cochain_space_basis,
    d_CH,
    d_CH_dual,
    d_CH_matrix,
    extend,
    is_equivariant,
    reduce,
)
from hopfhoch.linalg import QQ, ExactArray
from hopfhoch.models import load

from conftest import REGISTRY, SMALL


def character_dimension(ma, n):
    """dim Hom_G(A^{(x) n}, A) = (1/|G|) sum_g chi(g)^n chi(g^-1) for a group algebra H."""
    H = ma.hopf
    mult = H.mult.tolist()
    unit = H.unit.values().index(1)
    chi = [sum(Fraction(ma.action.tolist()[g][a][a]) for a in range(ma.dim)) for g in range(H.dim)]
    total = Fraction(0)
    for g in range(H.dim):
        inv = next(k for k in range(H.dim) if mult[g][k][unit] == 1)
        total += chi[g] ** n * chi[inv]
    return total / H.dim


def random_cochain(ma, n, seed):
    S = cochain_space_basis(ma, n)
    rng = np.random.default_rng(seed)
    coords = ExactArray(QQ, rng.integers(-3, 4, S.dim))
    return S.combination(coords)


@pytest.mark.parametrize("name", REGISTRY)
@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_space_dimensions_match_characters(name, n):
    ma = load(name)
    S = cochain_space_basis(ma, n)
    assert S.dim == character_dimension(ma, n)
    assert S.ambient_dim == ma.dim ** (n + 1)


@pytest.mark.parametrize("name", SMALL)
def test_space_bases_are_equivariant(name):
    ma = load(name)
    for n in range(3):
        assert all(is_equivariant(ma, f) for f in cochain_space_basis(ma, n).cochains())


def test_sign_action_kills_odd_cochains(c2):
    # f(x) = 1 would need f(-x) = f(x)
    f = ReducedCochain.from_matrix(ExactArray.from_values(QQ, [[0, 1], [0, 0]]))
    assert not is_equivariant(c2, f)
    with pytest.raises(ContractError, match="not H-equivariant for g"):
        extend(c2, f)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("n", [0, 1, 2])
def test_extend_then_reduce_is_identity(name, n):
    ma = load(name)
    for f in cochain_space_basis(ma, n).cochains():
        assert reduce(ma, extend(ma, f)) == f


def test_reduce_rejects_maps_that_are_not_x_linear(dual):
    g = ExactArray.zeros(QQ, (2, 2, 2)).num.copy()
    g[0, 1, 0] = 1  # x (x) 1 -> 1 but 1 (x) 1 -> 0
    with pytest.raises(ContractError, match="not X-linear"):
        reduce(dual, ExactArray(QQ, g))


def test_degree_one_differential_by_hand(dual):
    # (df)(a, b) = a f(b) - f(ab) + f(a) b, evaluated on basis pairs
    f = ReducedCochain.from_matrix(ExactArray.from_values(QQ, [[0, 0], [0, 1]]))  # the derivation x d/dx
    df = d_CH(dual, f)
    e = [ExactArray.basis_vector(QQ, 2, i) for i in range(2)]

    def prod(u, v):
        return dual.alg.multiply(u, v)

    for a, b in itertools.product(range(2), repeat=2):
        want = prod(e[a], f(e[b])) - f(prod(e[a], e[b])) + prod(f(e[a]), e[b])
        assert df(e[a], e[b]) == want
    assert df.is_zero()  # x d/dx is a derivation


@pytest.mark.parametrize("name", SMALL + ("m2",))
@pytest.mark.parametrize("n", [0, 1, 2])
def test_differential_is_dual_of_bar_differential(name, n):
    ma = load(name)
    for f in cochain_space_basis(ma, n).cochains()[:12]:
        assert d_CH_dual(ma, f) == d_CH(ma, f)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(REGISTRY), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_d_squared_is_zero(name, n, seed):
    ma = load(name)
    f = random_cochain(ma, n, seed)
    assert d_CH(ma, d_CH(ma, f)).is_zero()


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_differential_preserves_equivariance(name, n, seed):
    ma = load(name)
    f = random_cochain(ma, n, seed)
    assert cochain_space_basis(ma, n + 1).contains(d_CH(ma, f))


@pytest.mark.parametrize("name", SMALL)
def test_differential_matrix_rows_are_images(name):
    ma = load(name)
    for n in range(3):
        D = d_CH_matrix(ma, n)
        src, dst = cochain_space_basis(ma, n), cochain_space_basis(ma, n + 1)
        for i, f in enumerate(src.cochains()):
            assert dst.combination(D[i]) == d_CH(ma, f)


def test_batched_differential_matches_items(c2):
    fs = cochain_space_basis(c2, 2).cochains()
    batched = d_CH(c2, ReducedCochain.stack(fs))
    assert batched.batch_size == len(fs)
    assert all(batched.item(i) == d_CH(c2, f) for i, f in enumerate(fs))


def test_degree_cap(dual):
    with pytest.raises(DegreeCapError):
        cochain_space_basis(dual, 5)
    f = ReducedCochain.zero(dual, 4)
    with pytest.raises(DegreeCapError):
        d_CH(dual, f)
    with pytest.raises(ValueError):
        cochain_space_basis(dual, -1)


def test_cochain_arithmetic_checks_degrees(dual):
    f, g = ReducedCochain.zero(dual, 1), ReducedCochain.zero(dual, 2)
    with pytest.raises(ValueError):
        f + g
    assert (f - f).is_zero() and f.signed(3) == -f
