import random

import pytest
from hypothesis import given, settings, strategies as st

from corpus import LZ, QO5, X, by_label, corpus, quad_modules, random_zz_presentation, zz, zz_modules
from oracles import (
    brute_isomorphic, brute_quotient_codes, presentation_of, quotient_signatures, random_laurent_finite,
    torsion_signature,
)
from pfmod import (
    Distinguished, FpModule, IndistinguishableUpTo, compare, cyclic_module, direct_sum,
    epi_implies_iso_check, fingerprint, free_module, m_nu_quotient, zero_module,
)
from pfmod.finite import FiniteModule, ResourceLimitError, canonical_code
from pfmod.modules import relation_snf
from pfmod.quotients import (
    as_presentation, count_homs, finite_homs, hom_lattice, lattice_points, m_nu_parts, partitions,
)
from pfmod.rings import ZZ

ZZR = ZZ()


def codes(*mods):
    return {canonical_code(q) for q in mods}


# ----- worked examples --------------------------------------------------------

@pytest.mark.parametrize("strategy", ["subgroups", "targets", "truncation"])
def test_cyclic_group_of_order_four(strategy):
    fp = fingerprint(zz([[4]], "Z/4"), 8, strategy=strategy)
    assert set(fp.classes) == {"()", "(2)", "(4)"}


@pytest.mark.parametrize("strategy", ["targets", "truncation"])
def test_omega_mod_x_minus_2(strategy):
    fp = fingerprint(cyclic_module(LZ, [X - 2]), 10, strategy=strategy)
    expected = {"()|"} | codes(*(FiniteModule(LZ, (m,), [[2 % m]]) for m in (3, 5, 7, 9)))
    assert set(fp.classes) == expected


def test_bound_one_gives_only_zero():
    for m in (free_module(ZZR, 2), free_module(QO5, 1), free_module(LZ, 1)):
        assert len(fingerprint(m, 1)) == 1


def test_ceiling_guard():
    with pytest.raises(ResourceLimitError):
        fingerprint(free_module(ZZR, 1), 257)
    assert len(fingerprint(free_module(ZZR, 1), 300, ceiling=300)) == 300
    with pytest.raises(ValueError):
        fingerprint(free_module(ZZR, 1), 8, strategy="magic")


def test_compare_examples():
    v = compare(zz([[2]], "a"), zz([[3]], "b"), 6)
    assert v == Distinguished("(3)", "second")
    assert isinstance(compare(by_label("Lambda^2"), by_label("Lambda+(2,1+w)"), 81), IndistinguishableUpTo)
    a, b = cyclic_module(LZ, [X - 2]), cyclic_module(LZ, [X - 3])
    v = compare(a, b, 10)
    assert isinstance(v, Distinguished) and v.present_in == "second"
    assert v.witness in fingerprint(b, 10) and v.witness not in fingerprint(a, 10)
    # the (Z/5, x = 2) versus (Z/5, x = 3) difference is visible at bound 5
    fa, fb = fingerprint(a, 5), fingerprint(b, 5)
    assert canonical_code(FiniteModule(LZ, (5,), [[2]])) in set(fa.classes) - set(fb.classes)
    assert canonical_code(FiniteModule(LZ, (5,), [[3]])) in set(fb.classes) - set(fa.classes)
    with pytest.raises(ValueError):
        compare(zz([[2]], "a"), free_module(QO5, 1), 4)


def test_m_nu_examples():
    q = m_nu_quotient(free_module(ZZR, 1), 4)
    assert q.factors == (12,)
    assert m_nu_quotient(zz([[2]], "Z/2"), 1).is_zero()
    q = m_nu_quotient(cyclic_module(LZ, [X - 2]), 5)
    assert brute_isomorphic(q, FiniteModule(LZ, (15,), [[2]]))


def test_epi_iso_examples():
    r = epi_implies_iso_check(zz([[4]], "a"), zz([[4]], "b"), 4)
    assert r.epimorphisms == 2 and r.all_bijective
    r = epi_implies_iso_check(zz([[6]], "a"), zz([[6]], "b"), 6)
    assert r.epimorphisms == 2 and r.all_bijective
    r = epi_implies_iso_check(by_label("Lambda^2"), by_label("Lambda+(2,1+w)"), 9)
    assert r.all_bijective and r.epimorphisms > 0
    # Z/4 onto Z/2: epimorphisms exist and none is bijective
    r = epi_implies_iso_check(zz([[4]], "a"), zz([[2]], "b"), 4)
    assert r.epimorphisms > 0 and not r.all_bijective


def test_hom_counts_by_brute_force():
    q = FiniteModule(LZ, (5,), [[2]])
    m = cyclic_module(LZ, [X - 2])
    assert count_homs(m, q) == 5
    assert count_homs(cyclic_module(LZ, [X - 3]), q) == 1
    A = FiniteModule(ZZR, (2, 4))
    B = FiniteModule(ZZR, (4,))
    assert sum(1 for _ in finite_homs(A, B)) == 2 * 4
    assert lattice_points(hom_lattice(free_module(ZZR, 1), B), B.factors) is not None


def test_partitions():
    assert sorted(partitions(3, 2)) == sorted([(1,), (2,), (1, 1), (3,), (2, 1)])


# ----- properties -------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_zz_fingerprint_matches_subgroup_oracle(seed):
    rng = random.Random(seed)
    m = random_zz_presentation(rng, max_gens=3, lo=-4, hi=4)
    snf = relation_snf(m)
    order = 1
    for d in snf.torsion:
        order *= d
    if snf.free_rank or order > 48:
        return
    fp = fingerprint(m, 48)
    got = {torsion_signature(q) for q in fp.members.values()}
    assert got == quotient_signatures(snf.torsion, 48)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6))
def test_laurent_fingerprint_of_finite_module_matches_brute_force(seed):
    rng = random.Random(seed)
    q = random_laurent_finite(rng, LZ, max_order=27)
    if q is None:
        return
    bound = rng.choice([4, 9, 16, 27])
    assert set(fingerprint(presentation_of(q), bound).classes) == brute_quotient_codes(q, bound)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_quad_fingerprint_of_finite_module_matches_brute_force(seed):
    rng = random.Random(seed)
    src = rng.choice([by_label("Lambda^2"), by_label("Lambda+(2,1+w)"), by_label("Lambda/P3a+Lambda")])
    members = [q for q in fingerprint(src, 27).members.values() if q.order > 1]
    q = rng.choice(members)
    bound = rng.choice([4, 9, 27])
    fp = fingerprint(presentation_of(q), bound)
    assert set(fp.classes) == brute_quotient_codes(q, bound)
    for strategy in ("targets", "truncation"):
        assert fingerprint(presentation_of(q), bound, strategy=strategy).classes == fp.classes


@pytest.mark.parametrize("m", corpus(), ids=str)
def test_quotient_closure(m):
    bound = 24
    fp = fingerprint(m, bound)
    for q in fp.members.values():
        sub = fingerprint(presentation_of(q), bound)
        assert set(sub.classes) <= set(fp.classes)


@pytest.mark.parametrize("m", corpus(), ids=str)
def test_monotonicity(m):
    big = fingerprint(m, 40)
    for b in (1, 7, 16, 25):
        assert fingerprint(m, b).classes == big.restrict(b).classes


@pytest.mark.parametrize("m", corpus(), ids=str)
def test_direct_sum_with_zero(m):
    p = as_presentation(m)
    assert fingerprint(direct_sum(p, zero_module(p.ring)), 24).classes == fingerprint(p, 24).classes


@pytest.mark.parametrize("m", zz_modules() + quad_modules(), ids=str)
def test_strategies_agree(m):
    ref = fingerprint(m, 40, strategy="subgroups")
    for strategy in ("targets", "truncation"):
        assert fingerprint(m, 40, strategy=strategy).classes == ref.classes


def _torsion_order(m):
    snf = relation_snf(as_presentation(m))
    order = 1
    for d in snf.torsion:
        order *= d
    return snf, order


@pytest.mark.parametrize("m", zz_modules(), ids=str)
def test_snf_consistency(m):
    """Equal fingerprints at twice the larger finite order force equal Smith forms."""
    snf, order = _torsion_order(m)
    if snf.free_rank:
        return
    for other in zz_modules():
        snf2, order2 = _torsion_order(other)
        bound = 2 * max(order, order2 if not snf2.free_rank else 1)
        if fingerprint(m, bound).classes == fingerprint(other, bound).classes:
            assert snf2.torsion == snf.torsion and snf2.free_rank == 0


def test_m_nu_parts_kill_small_index_submodules():
    m = cyclic_module(LZ, [X - 2])
    for nu in (3, 5, 9):
        parts = m_nu_parts(m, nu)
        for I, q in parts.items():
            # every quotient of order <= nu of the local piece is a quotient of M
            assert set(fingerprint(presentation_of(q), nu).classes) <= set(fingerprint(m, nu).classes)


def test_free_module_is_not_a_presentation_error():
    with pytest.raises(TypeError):
        fingerprint("Z/2", 4)
    with pytest.raises(ValueError):
        FpModule(ZZR, 0)
