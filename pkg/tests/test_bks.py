from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import one_atom_traces

from cslab import bks
from cslab.constructions import sqrt2_drift, standard_drift, trace_of
from cslab.errors import HorizonExhausted, NotDeduped, NotNormalized, RepeatingKernel, UninhabitedFixture
from cslab.numeric import pair
from cslab.subject import Judgment, Kind, build_trace, validate_schedule

AFF = Judgment.affirm("A")
binary = st.lists(st.integers(0, 1), max_size=40).map(lambda v: bks.BinarySeq(tuple(v)))


def fixture(members, horizon):
    return build_trace(validate_schedule(bks.fixture_schedule(members, horizon)))


def test_alpha_from_trace():
    assert bks.alpha_from_trace(trace_of(6, (3, AFF)), AFF).values == (0, 0, 1, 1, 1, 1)
    assert bks.alpha_from_trace(trace_of(4), AFF).values == (0, 0, 0, 0)
    assert bks.dedup(bks.alpha_from_trace(trace_of(6, (3, AFF)), AFF)).values == (0, 0, 1, 0, 0, 0)


def test_binary_seq_rejects_non_binary():
    with pytest.raises(ValueError):
        bks.BinarySeq((0, 2))


@given(binary)
def test_dedup_idempotent_and_single(alpha):
    d = bks.dedup(alpha)
    assert bks.dedup(d) == d
    assert len(d.ones) == min(1, len(alpha.ones))
    assert d.first_one() == alpha.first_one()


def test_zigzag_small():
    fam = [bks.BinarySeq((0, 1, 1)), bks.BinarySeq((1, 0, 1))]
    zz = bks.zigzag_merge(fam, 6)
    # codes 0..5 are (0,0) (1,0) (0,1) (2,0) (1,1) (0,2)
    assert zz.values == (0, 1, 1, 0, 0, 1)
    assert zz.flagged == (3,)


@settings(max_examples=50)
@given(st.lists(st.lists(st.integers(0, 1), min_size=1, max_size=8), min_size=1, max_size=8))
def test_zigzag_agrees_with_family(rows):
    fam = [bks.BinarySeq(tuple(r)) for r in rows]
    zz = bks.zigzag_merge(fam, 100)
    for x, row in enumerate(rows):
        for k, v in enumerate(row):
            if pair(x, k) < 100:
                assert zz[pair(x, k)] == v


def test_species_enumerator():
    trace = fixture({0: 0, 3: 2, 5: 4}, 6)
    e = bks.species_enumerator(trace)
    assert e.inhabitant == 0
    assert [n for n in range(8) if e.enumerates(n)] == [0, 3, 5]
    assert e(pair(3, 1)) == 0 and e(pair(3, 2)) == 3
    assert e.range_upto(60) == {0, 3, 5}
    assert e(pair(5, 100)) == 5
    with pytest.raises(HorizonExhausted):
        e(pair(4, 100))


def test_enumerator_errors():
    with pytest.raises(UninhabitedFixture):
        bks.species_enumerator(trace_of(3))
    with pytest.raises(UninhabitedFixture):
        bks.species_enumerator(fixture({2: 1}, 3), inhabitant=4)
    with pytest.raises(NotNormalized):
        bks.cs_enumerate(fixture({0: 1, 2: 1}, 3))
    assert bks.species_enumerator(fixture({4: 3, 2: 1}, 3)).inhabitant == 2


def test_wednesday_check():
    t = lambda x: 2 * x
    trace = trace_of(6, (3, AFF))
    alpha = bks.dedup(bks.alpha_from_trace(trace, AFF))
    assert alpha.first_one() == 2
    assert bks.wednesday_check(alpha, t, trace, AFF).is_established
    v = bks.wednesday_check(alpha, t, trace, AFF, assert_never=True)
    assert v.is_refuted and v.certificate.kind == "Violation"
    assert bks.wednesday_check(alpha, lambda x: 2 * x + 1, trace, AFF, assert_never=True).is_established
    with pytest.raises(NotDeduped):
        bks.wednesday_check(bks.alpha_from_trace(trace, AFF), t, trace, AFF)
    assert bks.wednesday_check(bks.BinarySeq((0,) * 6), t, trace_of(6), AFF).is_unknown
    assert bks.wednesday_check(bks.BinarySeq((0,) * 6), t, trace, AFF).certificate.kind == "MissedEvent"
    assert bks.wednesday_check(alpha, t, trace_of(6), AFF).certificate.kind == "Spurious"


def test_splitmix64_reference_vector():
    # first outputs of the reference generator seeded with 0
    s, a = bks.splitmix64(0)
    s, b = bks.splitmix64(s)
    assert a == 0xE220A8397B1DCDAF
    assert b == 0x6E789E6AA1B965F4


def test_random_witness():
    trace = trace_of(6, (3, AFF))
    w = bks.random_witness(trace, "A", 42)
    assert w == bks.random_witness(trace, "A", 42)
    k = bks.random_choice(42, "A")
    assert w == (0, 0, k, k, k, k) and k > 0
    assert bks.random_witness(trace_of(6), "A", 42) == (0,) * 6
    assert bks.random_choice(42, "A") != bks.random_choice(43, "A")


def test_bks_plus_examples():
    assert bks.bks_plus_from_conditional(
        bks.conditional_prefix(trace_of(5, (3, AFF)), "A")).values == (0, 0, 1, 1, 1)
    assert bks.bks_plus_from_conditional(bks.conditional_prefix(trace_of(5), "A")).values == (0, 0, 0, 0)
    with pytest.raises(RepeatingKernel):
        bks.bks_plus_from_conditional([1, 1, 2])
    with pytest.raises(RepeatingKernel):
        bks.conditional_prefix(trace_of(3), "A", drift=_constant_kernel())
    assert bks.conditional_prefix(trace_of(3), "A", sqrt2_drift())[:2] == (1, Fraction(3, 2))


def _constant_kernel():
    from cslab.constructions import Drift
    from cslab.creal import constant

    d = standard_drift()
    return Drift(constant(1), d.counting, d.modulus)


def test_clause_suite_on_all_schedules():
    for trace in one_atom_traces(6):
        for kind in Kind:
            target = Judgment("A", kind)
            alpha = bks.alpha_from_trace(trace, target)
            assert bks.verify_bks_clauses(alpha, trace, target, plus=True).passed


def test_spurious_one_fails_clause3():
    trace = trace_of(6, (4, AFF))
    alpha = bks.BinarySeq((0, 1, 0, 0, 0, 0))
    rep = bks.verify_bks_clauses(alpha, trace, AFF)
    assert rep.clause1 and rep.clause2_forward and rep.clause2_backward
    assert not rep.clause3 and not rep.passed


def test_missing_one_fails_clause2():
    rep = bks.verify_bks_clauses(bks.BinarySeq((0,) * 6), trace_of(6, (2, AFF)), AFF)
    assert not rep.clause2_forward and not rep.passed
