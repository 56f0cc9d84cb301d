import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hopfhoch.linalg import QQ, ExactArray
from hopfhoch.models import load
from hopfhoch.structures import (
    FiniteAlgebra,
    ModuleAlgebra,
    StructureError,
    basis_tensor,
    iterated_coproduct,
    trivial_bialgebra,
    validate_module_algebra,
)

from conftest import REGISTRY, corrupted


def reference_module_algebra_ok(ma: ModuleAlgebra) -> bool:
    """b(a1 a2) = sum (b1 a1)(b2 a2) checked with explicit loops."""
    d, h = ma.dim, ma.hopf.dim
    mu = ma.alg.mult.tolist()
    rho = ma.action.tolist()
    D = ma.hopf.comult.tolist()
    for b, i, j in itertools.product(range(h), range(d), range(d)):
        lhs = [sum(Fraction(mu[i][j][m]) * Fraction(rho[b][m][c]) for m in range(d)) for c in range(d)]
        rhs = [Fraction(0)] * d
        for p, q in itertools.product(range(h), repeat=2):
            if D[b][p][q] == 0:
                continue
            for s, t in itertools.product(range(d), repeat=2):
                w = Fraction(D[b][p][q]) * Fraction(rho[p][i][s]) * Fraction(rho[q][j][t])
                if w:
                    for c in range(d):
                        rhs[c] += w * Fraction(mu[s][t][c])
        if lhs != rhs:
            return False
    return True


@pytest.mark.parametrize("name", REGISTRY)
def test_registry_models_validate_exhaustively(name):
    rep = validate_module_algebra(load(name))
    assert rep.ok, rep.lines()
    ma = load(name)
    d, h = ma.dim, ma.hopf.dim
    # every basis triple of both A and H was inspected
    assert rep.checked["associativity"] == d**3 + h**3
    assert rep.checked["module-algebra axiom b(a1 a2) = sum (b1 a1)(b2 a2)"] == h * d * d
    assert rep.checked["coassociativity"] == h


def test_translation_not_additive_breaks_module_axioms():
    # g.x = x + 1 is not a module structure and does not respect products
    bad = corrupted("c2-sign", "g: 1 | -x", "g: 1 | x + 1")
    rep = validate_module_algebra(bad)
    failed = rep.axioms_failed()
    assert "module-algebra axiom b(a1 a2) = sum (b1 a1)(b2 a2)" in failed
    assert "module action (xy).a = x.(y.a)" in failed
    assert "unit compatibility b.1 = eps(b) 1" not in failed


def test_scaling_action_fails_only_the_module_action():
    bad = corrupted("c2-sign", "g: 1 | -x", "g: 1 | 2*x")
    assert validate_module_algebra(bad).axioms_failed() == ["module action (xy).a = x.(y.a)"]


def test_moving_the_unit_fails_unit_compatibility():
    bad = corrupted("c2-sign", "g: 1 | -x", "g: -1 | -x")
    assert "unit compatibility b.1 = eps(b) 1" in validate_module_algebra(bad).axioms_failed()


def test_violation_reports_name_the_basis_elements():
    bad = corrupted("c2-sign", "g: 1 | -x", "g: 1 | 2*x")
    v = validate_module_algebra(bad).violations[0]
    assert v.indices == ("g", "g", "x")
    assert "fails at (g, g, x)" in str(v)


def test_changing_x_squared_keeps_a_valid_algebra():
    # K[x]/(x^2 - 1) is still a commutative unital algebra
    assert validate_module_algebra(corrupted("dual-numbers", "x: x | 0", "x: x | 1")).ok


def test_broken_unit_row_is_caught():
    bad = corrupted("dual-numbers", "1: 1 | x", "1: 1 | 1")
    assert "left unitality" in validate_module_algebra(bad).axioms_failed()


def test_bialgebra_axioms_on_a_broken_counit():
    bad = corrupted("c2-sign", "    g: 1\n", "    g: 2\n")
    failed = validate_module_algebra(bad).axioms_failed()
    assert "left counit" in failed and "counit is multiplicative" in failed


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1), st.integers(0, 1), st.integers(-2, 2))
def test_validator_agrees_with_loop_reference(a, c, value):
    base = load("c2-sign")
    rho = base.action.tolist()
    rho[1][a][c] = value
    action = ExactArray.from_values(QQ, rho)
    ma = ModuleAlgebra(base.hopf, base.alg, action, "perturbed")
    rep = validate_module_algebra(ma)
    failed = "module-algebra axiom b(a1 a2) = sum (b1 a1)(b2 a2)" in rep.axioms_failed()
    assert failed == (not reference_module_algebra_ok(ma))


def test_shape_errors():
    with pytest.raises(StructureError):
        FiniteAlgebra(QQ, ExactArray.zeros(QQ, (2, 2, 3)), ExactArray.zeros(QQ, (2,)), ("a", "b"))
    A = load("dual-numbers").alg
    with pytest.raises(StructureError):
        ModuleAlgebra(trivial_bialgebra(QQ), A, ExactArray.zeros(QQ, (1, 3, 3)))


def test_iterated_coproduct_of_grouplike():
    H = load("c2-sign").hopf
    g = ExactArray.basis_vector(QQ, 2, 1)
    cop = iterated_coproduct(H, g, 3)
    assert cop.nonzero() == [(1, 1, 1)]
    with pytest.raises(ValueError):
        iterated_coproduct(H, g, 0)


def test_diagonal_action_on_tensors(c2):
    # g acts by -1 on each x, so on x (x) x (x) 1 by +1 and on x (x) 1 by -1
    g = ExactArray.basis_vector(QQ, 2, 1)
    t = basis_tensor(QQ, 2, (1, 1, 0))
    assert c2.act_diagonal(g, t) == t
    t2 = basis_tensor(QQ, 2, (1, 0))
    assert c2.act_diagonal(g, t2) == -t2
    # degree 0: the counit
    assert c2.diagonal_action_matrix(g, 0).values() == [1]


def test_opposite_and_commutativity():
    A = load("m2").alg
    assert not A.is_commutative()
    assert A.opposite().opposite().mult == A.mult
    assert load("dual-numbers").alg.is_commutative()
