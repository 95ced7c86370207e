import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigineq import majorize
from eigineq.ensembles import ginibre, gue
from eigineq.errors import DomainError
from eigineq.majorize import RELATIONS, align_witness, fan_dominance_check, kyfan_norm, relate
from eigineq.matcore import eigvals, matrix_abs

S2 = np.sqrt(2.0)


def test_relate_examples():
    v = relate([2, 2], [3, 1], "prec_w")
    assert v.holds
    # partial sums (2, 4) vs (3, 4): slack 1 at k=1, 0 at k=2
    assert v.margin == 0.0 and v.worst_k == 2

    v = relate([1 / S2, 0], [0.5 + 1 / (2 * S2), 0.5 - 1 / (2 * S2)], "entrywise_down")
    assert v.holds

    x = [3.0, 1.5, -0.5]
    for r in RELATIONS:
        if "log" in r:
            v = relate(np.abs(x), np.abs(x), r)
        else:
            v = relate(x, x, r)
        assert v.holds, r
    assert relate(x, x, "prec").margin == 0.0


def test_relate_failures_and_direction():
    assert not relate([3, 1], [2, 2], "prec_w").holds
    assert relate([3, 1], [2, 2], "prec_w").worst_k == 1
    # prec requires equal totals
    assert not relate([1, 1], [2, 1], "prec").holds
    assert relate([1, 1], [2, 1], "prec_w").holds
    # the ascending-sum relation: (2,2) has larger smallest entry than (3,1)
    assert relate([2, 2], [3, 1], "prec_sup_w").holds
    assert not relate([3, 1], [2, 2], "prec_sup_w").holds
    assert relate([1, 2], [3, 1], "entrywise_up").holds
    assert not relate([2, 2], [3, 1], "entrywise_up").holds


def test_log_relations():
    # products (2, 2) vs (4, 4): log-weak majorization with equality of totals not needed
    assert relate([2, 1], [4, 1], "prec_wlog").holds
    assert not relate([4, 1], [2, 1], "prec_wlog").holds
    # ascending products: x=(1,1) has min product 1 >= y=(4, 0.25) min product 0.25
    assert relate([1, 1], [4, 0.25], "prec_sup_wlog").holds
    # zeros compared through products, not logarithms
    v = relate([1, 0], [1, 0], "prec_wlog")
    assert v.holds
    assert not relate([1, 1], [1, 0], "prec_wlog").holds


def test_relate_length_mismatch():
    with pytest.raises(DomainError):
        relate([1, 2], [1, 2, 3], "prec_w")
    with pytest.raises((DomainError, ValueError)):
        relate([1, 2], [1, 2], "bogus")


def test_tolerance_scaling():
    # a violation of 1e-9 is inside tau_maj = 1e-8 (1 + 1)
    assert relate([1 + 1e-9], [1.0], "prec_w").holds
    assert not relate([1 + 1e-7], [1.0], "prec_w").holds


def test_kyfan_examples():
    assert kyfan_norm(np.eye(3), 2) == pytest.approx(2.0)
    assert kyfan_norm(np.array([[1.5, 0.5], [0.5, 0.5]]), 2) == pytest.approx(2.0)
    h = np.array([3.0, 4.0j]) / 5
    for k in (1, 2):
        assert kyfan_norm(np.outer(h, h.conj()), k) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        kyfan_norm(np.eye(2), 3)
    with pytest.raises(DomainError):
        kyfan_norm(np.eye(2), 0)


def test_fan_dominance_examples():
    A = gue(np.random.default_rng(0), 3)
    assert fan_dominance_check(A, A) == (True, True)
    assert fan_dominance_check(np.eye(3), 2 * np.eye(3)) == (True, True)
    assert fan_dominance_check(2 * np.eye(3), np.eye(3)) == (False, False)
    with pytest.raises(DomainError):
        fan_dominance_check(np.eye(2), np.eye(3))


def test_fan_dominance_agreement_random():
    rng = np.random.default_rng(1)
    seen = set()
    for _ in range(200):
        n = int(rng.integers(1, 6))
        A, B = ginibre(rng, n), ginibre(rng, n) * rng.uniform(0.5, 2.0)
        a, b = fan_dominance_check(A, B)
        assert a == b
        seen.add(a)
    assert seen == {True, False}


def test_align_witness_examples():
    w = align_witness(np.diag([1.0, 0.0]), np.diag([2.0, 1.0]))
    assert w.certified
    assert np.allclose(np.abs(w.unitary), np.eye(2))
    assert w.certificate == pytest.approx(1.0)

    A, B = np.diag([1.0, 0.0]), np.full((2, 2), 0.5)
    P, Q = matrix_abs(A @ B), (A @ A + B @ B) / 2
    w = align_witness(P, Q)
    assert w.certified
    assert np.allclose(eigvals(P), [1 / S2, 0], atol=1e-14)
    assert np.allclose(eigvals(Q), [0.85355, 0.14645], atol=1e-5)

    r = align_witness(np.diag([2.0, 0.0]), np.diag([1.0, 1.0]))
    assert not r
    assert isinstance(r, majorize.Refusal) and r.index == 1

    with pytest.raises(DomainError):
        align_witness(np.eye(2), np.eye(3))


def test_align_witness_iff_entrywise():
    rng = np.random.default_rng(2)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        P, Q = gue(rng, n), gue(rng, n) + rng.uniform(0, 2) * np.eye(n)
        w = align_witness(P, Q)
        holds = relate(eigvals(P), eigvals(Q), "entrywise_down").holds
        assert bool(w) == holds
        if w:
            assert w.certified


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=1, max_size=6), st.integers(0, 2**32 - 1))
def test_log_majorization_implies_weak(xs, seed):
    rng = np.random.default_rng(seed)
    x = np.array(xs)
    y = x * rng.uniform(0.5, 2.0, size=x.size)
    if relate(x, y, "prec_wlog").holds and relate(x, y, "prec_wlog").margin >= 0:
        assert relate(x, y, "prec_w").holds


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_weak_majorization_transitive(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    y = x + np.abs(rng.standard_normal(n))
    z = y + np.abs(rng.standard_normal(n))
    a, b = relate(x, y, "prec_w"), relate(y, z, "prec_w")
    assert a.margin >= 0 and b.margin >= 0
    assert relate(x, z, "prec_w").holds
