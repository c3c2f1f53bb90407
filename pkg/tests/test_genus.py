import pytest
from hypothesis import given, settings, strategies as st

from corpus import P2, P3A, P3B, QO1, QO5, by_label
from pfmod import SteinitzModule, free_module
from pfmod.arith import is_squarefree, primes_upto
from pfmod.genus import (
    NotProjectiveError, class_group, class_ideal, compose_forms, genus_candidates, ideal_form,
    ideal_to_class, reduce_form, steinitz_class,
)
from pfmod.ideals import QuadIdeal, ideal_product
from pfmod.quotients import IndistinguishableUpTo, as_presentation
from pfmod.rings import QuadOrder

SQUAREFREE = [d for d in range(-200, 0) if is_squarefree(-d)]


def _kronecker(D, p):
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    r = pow(D % p, (p - 1) // 2, p)
    return 0 if r == 0 else (1 if r == 1 else -1)


def analytic_class_number(D):
    """Dirichlet's formula h = -(w / 2|D|) * sum chi(a) a, chi multiplicative."""
    chi = {}
    for p in primes_upto(-D):
        chi[p] = _kronecker(D, p)
    total = 0
    for a in range(1, -D):
        val, n = 1, a
        for p in primes_upto(a):
            while n % p == 0:
                val *= chi[p]
                n //= p
        total += val * a
    w = {-3: 6, -4: 4}.get(D, 2)
    return -w * total // (2 * -D)


def test_class_number_examples():
    assert class_group(-1).order == 1
    G = class_group(-5)
    assert G.order == 2 and set(G.forms) == {(1, 0, 5), (2, 2, 3)}
    assert class_group(-23).order == 3


@pytest.mark.parametrize("d", SQUAREFREE[::3] + [-1, -2, -3, -5, -23, -47, -71])
def test_class_number_matches_analytic_formula(d):
    G = class_group(d)
    assert G.order == analytic_class_number(G.discriminant)


@pytest.mark.parametrize("d", [d for d in SQUAREFREE if abs(class_group(d).discriminant) <= 200])
def test_group_axioms(d):
    assert class_group(d).verify()


def test_invalid_discriminants():
    with pytest.raises(ValueError):
        class_group(5)
    with pytest.raises(ValueError):
        class_group(-12)


def test_reduction_preserves_discriminant():
    for f in [(10, 7, 3), (5, 12, 9), (3, -4, 7)]:
        a, b, c = f
        r = reduce_form(*f)
        assert r[1] ** 2 - 4 * r[0] * r[2] == b * b - 4 * a * c
    assert compose_forms((2, 2, 3), (2, 2, 3)) == (1, 0, 5)


def test_ideal_classes_over_minus_five():
    G = class_group(-5)
    assert G.forms[ideal_to_class(G, P2)] == (2, 2, 3)
    seven = QuadIdeal.from_generators(QO5, [7])
    assert ideal_to_class(G, seven) == G.identity
    assert ideal_to_class(G, ideal_product(QO5, P2, P2)) == G.identity
    assert ideal_to_class(G, P3A) == ideal_to_class(G, P3B) != G.identity


def quad_elements(bound=6):
    return st.tuples(st.integers(-bound, bound), st.integers(-bound, bound)).filter(lambda e: e != (0, 0))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([-5, -14, -23, -26, -47]), quad_elements())
def test_principal_ideals_are_trivial(d, alpha):
    R = QuadOrder(d)
    G = class_group(d)
    assert ideal_to_class(G, QuadIdeal.from_generators(R, [alpha])) == G.identity


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([-5, -14, -23, -26]), quad_elements(), quad_elements(), quad_elements(), quad_elements())
def test_ideal_to_class_is_a_homomorphism(d, a1, a2, b1, b2):
    R = QuadOrder(d)
    G = class_group(d)
    I = QuadIdeal.from_generators(R, [a1, a2])
    J = QuadIdeal.from_generators(R, [b1, b2])
    assert ideal_to_class(G, ideal_product(R, I, J)) == G.mul(ideal_to_class(G, I), ideal_to_class(G, J))


@pytest.mark.parametrize("d", [-5, -14, -23, -26, -47])
def test_class_representatives(d):
    R = QuadOrder(d)
    G = class_group(d)
    for i in range(G.order):
        I = class_ideal(G, R, i)
        assert ideal_to_class(G, I) == i
        assert reduce_form(*ideal_form(R, I)) == G.forms[i]


def test_steinitz_examples():
    G = class_group(-5)
    lam2 = by_label("Lambda^2")
    mixed = by_label("Lambda+(2,1+w)")
    assert steinitz_class(lam2) == G.identity
    assert steinitz_class(mixed) != G.identity
    assert steinitz_class([P2, P2]) == G.identity
    assert steinitz_class([P2]) == steinitz_class(mixed)


@pytest.mark.parametrize("label", ["Lambda^2", "Lambda+(2,1+w)", "(2,1+w)"])
def test_steinitz_class_of_presentation_matches_structure(label):
    m = by_label(label)
    assert steinitz_class(as_presentation(m)) == steinitz_class(m)


def test_steinitz_additivity():
    """[I + J] = [IJ], and on presentations of sums as well."""
    G = class_group(-5)
    for I in (P2, P3A, P3B):
        for J in (P2, P3A, P3B):
            direct = steinitz_class(SteinitzModule(QO5, (), 2, ideal_product(QO5, I, J)))
            assert steinitz_class([I, J]) == direct == G.mul(ideal_to_class(G, I), ideal_to_class(G, J))


def test_steinitz_rejects_torsion():
    with pytest.raises(NotProjectiveError):
        steinitz_class(by_label("Lambda/P2"))
    with pytest.raises(NotProjectiveError):
        steinitz_class(by_label("Lambda/P3a+Lambda"))
    with pytest.raises(NotProjectiveError):
        steinitz_class(as_presentation(by_label("Lambda/P3a+Lambda")))


def test_genus_table_minus_five():
    table = genus_candidates(by_label("Lambda^2"), 81)
    assert table.class_number == 2 and len(table.entries) == 2
    assert table.all_indistinguishable and table.distinct_classes
    verdict = table.cross_check[0][2]
    assert isinstance(verdict, IndistinguishableUpTo) and verdict.bound == 81


def test_genus_table_with_torsion():
    table = genus_candidates(by_label("Lambda/P3a+Lambda"), 81)
    assert len(table.entries) == 2
    assert {e.candidate.torsion for e in table.entries} == {((P3A, 1),)}
    assert table.all_indistinguishable and table.distinct_classes


def test_genus_table_trivial_class_group():
    table = genus_candidates(SteinitzModule(QO1, (), 1), 25)
    assert len(table.entries) == 1 and table.cross_check == ()


def test_genus_requires_steinitz_form():
    with pytest.raises(TypeError):
        genus_candidates(free_module(QO5, 2), 9)
