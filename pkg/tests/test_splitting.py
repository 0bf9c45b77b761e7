import pytest

from moravak.errors import ConsistencyError, DomainError
from moravak.splitting import (
    K0,
    GroupDescriptor,
    QuadFormDescriptor,
    Verdict,
    excellent_decomposition,
    excellent_in_Im,
    group_kn_split,
    monotonic_closure,
    quadric_kn_split,
    rule_order_independent,
)

S, N, U = Verdict.SPLIT, Verdict.NOT_SPLIT, Verdict.UNKNOWN


def test_excellent_decomposition_examples():
    assert excellent_decomposition(8) == [3]
    assert excellent_decomposition(12) == [4, 2]
    assert excellent_decomposition(6) == [3, 1]
    with pytest.raises(DomainError):
        excellent_decomposition(7)


def test_excellent_in_Im_examples():
    assert excellent_in_Im(12, 2)
    assert not excellent_in_Im(12, 3)
    assert excellent_in_Im(8, 3)


def test_excellent_quadric_verdicts():
    desc = QuadFormDescriptor(12, excellent=True)
    assert quadric_kn_split(desc, 0).verdict == S
    assert quadric_kn_split(desc, 1).verdict == N


def test_albert_form_declared_in_I():
    for r in (1, 2, 3):
        desc = QuadFormDescriptor(6 * 2 ** r, im_membership=r + 2)
        assert quadric_kn_split(desc, r).verdict == S


def test_declared_lower_bound_only_gives_unknown_above():
    desc = QuadFormDescriptor(16, im_membership=3)
    assert quadric_kn_split(desc, 1).verdict == S
    assert quadric_kn_split(desc, 2).verdict == U
    maximal = QuadFormDescriptor(16, im_membership=3, maximal=True)
    assert quadric_kn_split(maximal, 2).verdict == N


def test_odd_dimensional_variant():
    desc = QuadFormDescriptor(17, im_membership=4, odd_part=True)
    assert quadric_kn_split(desc, 1).verdict == S
    assert quadric_kn_split(desc, 2).verdict == S
    assert quadric_kn_split(desc, 3).verdict == U
    assert quadric_kn_split(desc, 0).verdict == U


def test_descriptor_validation():
    with pytest.raises(DomainError):
        QuadFormDescriptor(6, im_membership=3)
    with pytest.raises(DomainError):
        GroupDescriptor("F4", 2, True, True, True, e8_u_invariant_zero=True)
    with pytest.raises(DomainError):
        GroupDescriptor("X9", 2, True, True)


def test_group_examples():
    f4 = GroupDescriptor("F4", 3, True, True, True)
    assert group_kn_split(f4, 2).verdict == S
    e8 = GroupDescriptor("E8", 2, True, True, True, False)
    assert group_kn_split(e8, 4).verdict == N
    assert group_kn_split(e8, 3).verdict == U
    assert group_kn_split(e8, 2).verdict == S
    assert group_kn_split(e8, 1).verdict == S
    assert group_kn_split(e8, K0).verdict == S
    assert group_kn_split(e8, 0).verdict == S


def test_outer_type_only_height_zero():
    outer = GroupDescriptor("E6", 2, False, False)
    assert group_kn_split(outer, 0).verdict == N
    assert group_kn_split(outer, 1).verdict == U
    assert group_kn_split(outer, K0).verdict == U


def test_decision_carries_citations():
    d = group_kn_split(GroupDescriptor("F4", 3, True, True, True), 1)
    assert d.as_dict()["rule"] and d.rules


def test_closure_examples():
    assert monotonic_closure({3: S}) == {1: S, 2: S, 3: S}
    closed = monotonic_closure({2: N}, upto=5)
    assert closed == {m: N for m in range(2, 6)}
    assert monotonic_closure({}) == {}
    with pytest.raises(ConsistencyError):
        monotonic_closure({2: N, 3: S})
    with pytest.raises(DomainError):
        monotonic_closure({0: S})


def test_rule_order_independence_examples():
    for desc in (GroupDescriptor("E8", 2, True, True, True, False),
                 GroupDescriptor("E8", 2, True, True, True, True),
                 GroupDescriptor("E7", 3, True, False),
                 GroupDescriptor("G2", 2, True, True, False)):
        assert rule_order_independent(desc)
