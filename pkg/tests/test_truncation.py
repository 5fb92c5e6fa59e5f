import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgs.corpus import corpus
from mgs.region import Window, add, total
from mgs.ring import Ring, free_module, hypersurface_example, quotient_by_blocks, truncate
from mgs.truncation import (
    ZeroModule,
    delta_bound,
    initial_degree,
    sample_ts,
    total_regularity,
    truncation_cohomology_check,
    verify_free_identity,
    verify_linear_truncation,
)

R22 = free_module(Ring.make((2, 2)))


def test_total_regularity_examples():
    assert total_regularity(free_module(Ring.make((3, 3)))) == 0
    assert total_regularity(hypersurface_example("F2")) == 1
    assert total_regularity(truncate(R22, (1, 1))) == 2
    assert initial_degree(truncate(R22, (1, 1))) == 2


def test_zero_module_has_no_regularity():
    Z = truncate(quotient_by_blocks(Ring.make((1, 1)), [0, 1]), (1, 0))
    with pytest.raises(ZeroModule):
        total_regularity(Z)


def test_delta_bound_examples():
    R = free_module(Ring.make((3, 3)))
    assert delta_bound(R, (-1, 2)) == (2, {0: 1})
    assert delta_bound(hypersurface_example("F5"), (1, 1)) == (2, {0: 0, 1: 0})
    # t above every shift: all deltas vanish and the bound is |t|
    bound, deltas = delta_bound(hypersurface_example("F5"), (3, 2))
    assert bound == 5 and set(deltas.values()) == {0}


def test_free_identity_exhaustive():
    rep = verify_free_identity((2, 2), Window((-2, -2), (3, 3)))
    assert rep.ok, rep.failures()
    assert len(rep.checks) == 36


def test_free_module_linear_from_origin():
    rep = verify_linear_truncation(R22, (0, 0))
    assert rep.ok
    assert any(c.witness == (1, 1) for c in rep.checks)


def test_hypersurface_linear_truncation():
    M = hypersurface_example("F5")
    assert total_regularity(truncate(M, (1, 1))) == 2
    rep = verify_linear_truncation(M, (-1, -1), ts=[(1, 1)])
    assert rep.ok and not rep.precondition


def test_precondition_inside_star():
    rep = verify_linear_truncation(hypersurface_example("F5"), (-2, -3))
    assert rep.precondition and not rep.ok and not rep.checks


def test_sample_ts():
    ts = sample_ts(R22, (0, 0), seed=3)
    assert ts[:3] == [(1, 1), (2, 1), (1, 2)]
    assert all(t[0] >= 1 and t[1] >= 1 for t in ts)
    assert sample_ts(R22, (0, 0), seed=3) == ts


def test_cohomology_check_free_module():
    rep = truncation_cohomology_check(R22, (1, 1), Window((-5, -5), (3, 3)))
    assert rep.ok, [c.to_json() for c in rep.failures()]


def test_cohomology_check_block_quotient():
    M = quotient_by_blocks(Ring.make((2, 2)), [0])
    rep = truncation_cohomology_check(M, (0, 0), Window((-4, -4), (3, 3)))
    assert rep.ok, [c.to_json() for c in rep.failures()]
    assert any(c.name == "B1 case (ii)(1)" for c in rep.checks)


def test_cohomology_check_one_block():
    M = quotient_by_blocks(Ring.make((2,)), [0]).shifted((0,))
    R = free_module(Ring.make((3,)))
    for N, t in ((R, (1,)), (R, (-1,)), (M, (1,))):
        rep = truncation_cohomology_check(N, t, Window((-6,), (4,)))
        assert rep.ok, [c.to_json() for c in rep.failures()]
        assert {"k=1 (i)", "k=1 (ii)", "k=1 (iii)"} <= {c.name for c in rep.checks}


def test_cohomology_check_hypersurface():
    M = hypersurface_example("F2")
    rep = truncation_cohomology_check(M, (1, 1), Window((-6, -6), (3, 3)))
    assert rep.ok, [c.to_json() for c in rep.failures()]


# -- properties ----------------------------------------------------------------------

SMALL = [i for i, M in enumerate(corpus(0, 30)) if M.ring.d <= 4]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_regularity_within_delta_bound(idx, data):
    M = corpus(0, 30)[idx]
    t = tuple(data.draw(st.integers(-1, 2)) for _ in range(M.k))
    T = truncate(M, t)
    if not T.resolution().shifts[0]:
        return
    reg = total_regularity(T)
    bound, _ = delta_bound(M, t)
    assert initial_degree(T) <= reg <= bound


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_linear_truncation_is_monotone(idx, data):
    M = corpus(0, 30)[idx]
    k = M.k
    t = tuple(data.draw(st.integers(-1, 2)) for _ in range(k))
    step = tuple(data.draw(st.integers(0, 1)) for _ in range(k))
    T = truncate(M, t)
    if not T.resolution().shifts[0] or total_regularity(T) != total(t):
        return
    t2 = add(t, step)
    T2 = truncate(M, t2)
    if T2.resolution().shifts[0]:
        assert total_regularity(T2) == total(t2)
