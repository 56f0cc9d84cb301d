import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfhoch.cochains import DegreeCapError, ReducedCochain, cochain_space_basis, d_CH
from hopfhoch.cohomology import (
    DEGREE_ZERO_NOTE,
    G_CHECKS,
    check_gerstenhaber,
    cohomology_dimensions,
    compute_HH,
    induced_bracket,
    induced_cup,
    invariant_center_dimension,
    is_coboundary,
)
from hopfhoch.linalg import QQ, ExactArray
from hopfhoch.models import load, parse
from hopfhoch.operad import calculus

from conftest import REGISTRY, SMALL

TRUNCATED_CUBIC = """\
model truncated-cubic
description K[x]/(x^3) with trivial H
field rationals

algebra
  basis 1 x y
  unit 1
  mult
    1: 1 | x | y
    x: x | y | 0
    y: y | 0 | 0
"""


@pytest.fixture(scope="module")
def cubic():
    ma = parse(TRUNCATED_CUBIC).module
    assert ma.validate().ok
    return ma


def random_cochain(ma, n, seed):
    S = cochain_space_basis(ma, n)
    if S.dim == 0:
        return ReducedCochain.zero(ma, n)
    return S.combination(ExactArray(QQ, np.random.default_rng(seed).integers(-3, 4, S.dim)))


@pytest.mark.parametrize(
    "name,dims",
    [
        ("dual-numbers", [2, 1, 1, 1]),
        ("m2", [1, 0, 0, 0]),
        ("c2-sign", [1, 1, 1, 1]),
        ("trivial-H(fun(C3))", [3, 0, 0, 0]),
    ],
)
def test_known_dimensions(name, dims):
    assert cohomology_dimensions(load(name), 3) == dims


def test_truncated_polynomial_dimensions(cubic):
    # K[x]/(x^n) in characteristic 0: HH^0 = n and n - 1 in every positive degree
    assert cohomology_dimensions(cubic, 3) == [3, 2, 2, 2]


@pytest.mark.parametrize("name", REGISTRY)
def test_degree_zero_is_the_invariant_center(name):
    ma = load(name)
    assert compute_HH(ma, 0).dimension == invariant_center_dimension(ma)


@pytest.mark.parametrize("name", REGISTRY)
def test_group_bookkeeping(name):
    ma = load(name)
    for n in range(4):
        g = compute_HH(ma, n)
        assert g.dimension == g.cocycles.dim - g.coboundaries.dim
        for f in g.representative_cochains():
            assert g.is_cocycle(f) and not g.is_coboundary(f)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_images_are_coboundaries(name, n, seed):
    ma = load(name)
    assert is_coboundary(ma, d_CH(ma, random_cochain(ma, n - 1, seed)))


def test_is_coboundary_examples(dual):
    assert is_coboundary(dual, ReducedCochain.zero(dual, 2))
    rep = compute_HH(dual, 1).representative(0)
    assert not is_coboundary(dual, rep)


def test_class_of_ignores_coboundaries(dual):
    g = compute_HH(dual, 2)
    f = g.representative(0) + d_CH(dual, random_cochain(dual, 1, 3))
    assert g.class_of(f) == g.basis_class(0)
    with pytest.raises(ValueError, match="not a cocycle"):
        g.class_of(random_cochain(dual, 2, 11))


def test_cup_and_bracket_tables_on_dual_numbers(dual):
    e1, e2 = compute_HH(dual, 1).basis_class(0), compute_HH(dual, 2).basis_class(0)
    e3 = compute_HH(dual, 3).basis_class(0)
    assert induced_cup(e1, e1).is_zero()
    assert induced_cup(e1, e2) == e3
    assert induced_bracket(e1, e1).is_zero()
    assert induced_bracket(e1, e2).coordinates.values() == [-2]
    assert induced_bracket(e1, e3).coordinates.values() == [-2]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["dual-numbers", "c2-sign"]), st.integers(1, 2), st.integers(1, 2),
       st.integers(0, 2**32 - 1))
def test_graded_commutativity_witness_is_a_coboundary(name, m, n, seed):
    ma = load(name)
    gm, gn = compute_HH(ma, m), compute_HH(ma, n)
    rng = np.random.default_rng(seed)
    x = gm.representative_cochains()[0] + d_CH(ma, random_cochain(ma, m - 1, int(rng.integers(2**31))))
    y = gn.representative_cochains()[0] + d_CH(ma, random_cochain(ma, n - 1, int(rng.integers(2**31))))
    C = calculus(ma)
    witness = C.cup(x, y) - C.cup(y, x).signed(m * n)
    assert is_coboundary(ma, witness)


def test_degree_zero_classes_are_excluded(dual):
    z = compute_HH(dual, 0).basis_class(0)
    e1 = compute_HH(dual, 1).basis_class(0)
    with pytest.raises(ValueError, match="excluded"):
        induced_cup(z, e1)
    with pytest.raises(ValueError, match="excluded"):
        induced_bracket(e1, z)
    assert "excluded" in DEGREE_ZERO_NOTE


def test_cap_errors(dual):
    with pytest.raises(DegreeCapError):
        compute_HH(dual, 4)
    e2 = compute_HH(dual, 2).basis_class(0)
    e3 = compute_HH(dual, 3).basis_class(0)
    with pytest.raises(DegreeCapError):
        induced_cup(e2, e3)
    with pytest.raises(DegreeCapError):
        check_gerstenhaber(dual, 4)


@pytest.mark.parametrize("name", ["dual-numbers", "c2-sign", "m2"])
def test_gerstenhaber_checks_pass(name):
    rep = check_gerstenhaber(load(name), 3, seed=0, perturbations=16)
    assert [c.name for c in rep.checks] == list(G_CHECKS)
    assert rep.ok, [(c.name, c.counterexample) for c in rep.checks if not c.passed]


def test_gerstenhaber_checks_on_a_larger_model(cubic):
    rep = check_gerstenhaber(cubic, 3, seed=1, perturbations=16)
    assert rep.ok
    # with two classes per degree the checks are not vacuous
    assert all(c.instances > 0 for c in rep.checks)
