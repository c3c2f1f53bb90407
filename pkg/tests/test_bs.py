import pytest
from hypothesis import given, settings, strategies as st

from corpus import LZ, X
from pfmod import fingerprint
from pfmod.arith import mult_order_naive, primes_upto
from pfmod.bs import (
    BsGroup, StandardQuotient, abelianization, conjugacy_module, normalize_pair, order_profile,
    order_row, prime_support_check, restrict_quotient_to_module, rigidity_scan, standard_quotients,
    verify_survivor,
)
from pfmod.finite import FiniteModule, canonical_code
from pfmod.modules import cyclic_module

NS = [n for n in range(-10, 11) if n not in (0, 1)]


@pytest.mark.parametrize("n", NS)
def test_abelianization(n):
    snf = abelianization(n)
    assert snf.free_rank == 1
    expected = () if abs(n - 1) == 1 else (abs(n - 1),)
    assert tuple(snf.torsion) == expected


def test_group_guard():
    for n in (-1, 0, 1):
        with pytest.raises(ValueError):
            BsGroup(n)


def test_conjugacy_module():
    assert conjugacy_module(BsGroup(2)).relations == cyclic_module(LZ, [X - 2]).relations
    assert conjugacy_module(BsGroup(-3)).relations == cyclic_module(LZ, [X + 3]).relations
    assert fingerprint(conjugacy_module(BsGroup(2)), 10).classes == \
        fingerprint(cyclic_module(LZ, [X - 2]), 10).classes


def test_standard_quotient_examples():
    pairs = {(m, k) for m, k, _ in standard_quotients(BsGroup(2), 6)}
    assert (3, 2) in pairs
    assert [(m, k) for m, k, _ in standard_quotients(BsGroup(2), 1)] == [(1, 1)]
    assert (4, 2) in {(m, k) for m, k, _ in standard_quotients(BsGroup(3), 8)}
    s3 = StandardQuotient(2, 3, 2)
    assert s3.order == 6 and s3.check_group()
    # nonabelian: a and t do not commute
    assert s3.mul(s3.a, s3.t) != s3.mul(s3.t, s3.a)


@pytest.mark.parametrize("n", [2, 3, 5, -2])
def test_standard_quotients_are_groups(n):
    quotients = standard_quotients(BsGroup(n), 50)
    assert all(ok for _, _, ok in quotients)
    for m, k, _ in quotients:
        if m * k <= 24:
            assert StandardQuotient(n, m, k).check_group()


def test_standard_quotient_count_is_monotone():
    counts = [len(standard_quotients(BsGroup(3), b)) for b in range(1, 40)]
    assert counts == sorted(counts)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_restricted_quotients_are_fingerprint_members(n):
    g = BsGroup(n)
    fp = fingerprint(conjugacy_module(g), 50)
    for m, k, _ in standard_quotients(g, 50):
        q = restrict_quotient_to_module(g, m, k)
        assert canonical_code(q) in fp


def test_restriction_examples():
    g = BsGroup(2)
    q = restrict_quotient_to_module(g, 3, 2)
    assert canonical_code(q) == canonical_code(FiniteModule(LZ, (3,), [[2]]))
    assert canonical_code(q) in fingerprint(conjugacy_module(g), 3)
    assert restrict_quotient_to_module(g, 1, 1).is_zero()
    q = restrict_quotient_to_module(BsGroup(5), 6, 2)
    assert canonical_code(q) == canonical_code(FiniteModule(LZ, (6,), [[5]]))
    with pytest.raises(ValueError):
        restrict_quotient_to_module(g, 4, 1)


def test_order_profile_examples():
    assert order_profile(2, 1, 2, 100).all_equal
    assert order_profile(2, 2, 1, 100).all_equal
    rows = {r.p: r for r in order_profile(2, 1, 3, 10).rows}
    assert (rows[5].ord_n, rows[5].ord_ratio, rows[5].subgroup_equal) == (4, 4, True)
    assert (rows[7].ord_n, rows[7].ord_ratio, rows[7].subgroup_equal) == (3, 6, False)
    with pytest.raises(ValueError):
        order_profile(2, 2, 4, 10)
    with pytest.raises(ValueError):
        order_profile(2, 0, 1, 10)


def test_negative_ratio_fails_at_eleven():
    rows = {r.p: r for r in order_profile(2, 1, -2, 100).rows}
    assert rows[5].subgroup_equal
    assert (rows[11].ord_n, rows[11].ord_ratio, rows[11].subgroup_equal) == (10, 5, False)
    assert order_profile(2, 1, -2, 100, stop_at_failure=True).first_failure().p == 3


@settings(max_examples=100, deadline=None)
@given(st.integers(-12, 12).filter(lambda n: abs(n) >= 2), st.integers(1, 12), st.integers(-12, 12),
       st.sampled_from(primes_upto(60)))
def test_order_rows_match_naive_orders(n, a, b, p):
    if b == 0 or (n * a * b) % p == 0:
        return
    row = order_row(n, a, b, p)
    ratio = b * pow(a, -1, p) % p
    assert row.ord_n == mult_order_naive(n % p, p)
    assert row.ord_ratio == mult_order_naive(ratio, p)
    assert (p - 1) % row.ord_n == 0 and (p - 1) % row.ord_ratio == 0
    # in a cyclic group, two cyclic subgroups coincide exactly when their orders agree
    powers_n = {pow(n, e, p) for e in range(p - 1)}
    powers_r = {pow(ratio, e, p) for e in range(p - 1)}
    assert row.subgroup_equal == (powers_n == powers_r)


def test_prime_support_examples():
    assert prime_support_check(4, 1, 2)
    assert prime_support_check(2, 1, 2)
    assert not prime_support_check(2, 1, 6)


def test_normalization():
    assert normalize_pair(-2, 3) == (2, -3)
    assert normalize_pair(4, 2) == (2, 1)


@pytest.mark.parametrize("n", range(2, 11))
def test_rigidity_scan(n):
    result = rigidity_scan(n, 10, 2000)
    assert result.survivors == ((1, n), (n, 1))
    assert result.matches_prediction and result.extras == ()
    for a, b in result.survivors:
        assert verify_survivor(n, a, b, 2000)


def test_small_height_scan_has_no_survivors():
    # height 1 only admits b = +-1, whose prime support differs from that of 2
    assert rigidity_scan(2, 1, 100).survivors == ()


def test_negative_n_scan():
    result = rigidity_scan(-3, 6, 500)
    assert result.matches_prediction


def test_verify_survivor_rejects_non_survivors():
    assert not verify_survivor(2, 1, 3, 100)
    assert not verify_survivor(2, 1, -2, 100)
