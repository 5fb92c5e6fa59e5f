import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgs.corpus import corpus
from mgs.field import FieldSpec, rank
from mgs.parse import ParseError, parse_module_file, parse_polynomial
from mgs.region import Window
from mgs.ring import (
    DegreeError,
    GradedPresentation,
    IdealDescriptor,
    Ring,
    assemble_degree,
    block_restrict,
    free_module,
    graded_piece,
    hilbert_R,
    hypersurface_example,
    print_module,
    quotient_by_blocks,
    support_in_window,
    truncate,
)

HYPERSURFACE_FILE = """
ring { k = 2; n = [3,3]; field = "F2"; vars = [["a","b","c"],["x","y","z"]] }
module { target_shifts = [[0,0]]; source_shifts = [[1,1]]; matrix = [["a*x+b*y+c*z"]] }
"""


def test_graded_piece_examples():
    R = free_module(Ring.make((3, 5)))
    assert R.dim((1, 1)) == 15
    Rm = quotient_by_blocks(Ring.make((3, 5)), [0, 1])
    assert Rm.dim((0, 0)) == 1
    assert Rm.dim((1, 0)) == 0
    M = hypersurface_example("F2")
    assert M.dim((1, 1)) == 8
    basis, dim = graded_piece(M, (1, 1))
    assert dim == 8 and len(basis) == 8


def test_hypersurface_piece_by_brute_force():
    # R_{(1,1)} has the 9 products of {a,b,c} x {x,y,z}; the relation spans one line
    M = hypersurface_example("F5")
    F = M.field
    rows = [[1 if (i, j) in ((0, 0), (1, 1), (2, 2)) else 0 for i in range(3) for j in range(3)]]
    assert 9 - rank(F, F.array(rows)) == M.dim((1, 1))


def test_supports():
    ring = Ring.make((2, 2))
    w = Window((0, 0), (1, 1))
    assert support_in_window(free_module(ring), w) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert support_in_window(free_module(ring).shifted((1, 1)), w) == [(1, 1)]
    w2 = Window((-1, -1), (1, 1))
    assert support_in_window(quotient_by_blocks(ring, [0]), w2) == [(0, 0), (0, 1)]


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 8), st.tuples(st.integers(-2, 2), st.integers(-2, 2)))
def test_shift_lemma(idx, mu):
    M = corpus(0, 30)[idx]
    if M.k != 2:
        return
    Ms = M.shifted(mu)
    for nu in Window((-2, -2), (2, 2)).points():
        assert Ms.dim(nu) == M.dim((nu[0] - mu[0], nu[1] - mu[1]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.data())
def test_hilbert_function_of_R(n, data):
    mu = tuple(data.draw(st.integers(-1, 3)) for _ in n)
    expected = 1
    for m, b in zip(mu, n):
        expected *= comb(m + b - 1, b - 1) if m >= 0 else 0
    assert hilbert_R(n, mu) == expected
    assert free_module(Ring.make(n)).dim(mu) == expected


def test_truncate_examples():
    R = free_module(Ring.make((2, 2)))
    T0 = truncate(R, (0, 0))
    for mu in Window((-1, -1), (3, 3)).points():
        assert T0.dim(mu) == R.dim(mu)
    R11 = free_module(Ring.make((1, 1)))
    T = truncate(R11, (1, 1))
    assert T.dim((1, 1)) == T.dim((3, 2)) == 1
    assert T.dim((0, 5)) == T.dim((5, 0)) == 0


def test_truncation_pieces_match_original():
    rng = random.Random(7)
    M = hypersurface_example("F5")
    t = (1, 0)
    T = truncate(M, t)
    for _ in range(20):
        mu = (rng.randint(-1, 4), rng.randint(-1, 4))
        if mu[0] >= t[0] and mu[1] >= t[1]:
            assert T.dim(mu) == M.dim(mu)
        else:
            assert T.dim(mu) == 0


def test_truncate_twice():
    M = hypersurface_example("F5")
    twice = truncate(truncate(M, (1, 0)), (1, 1))
    once = truncate(M, (1, 1))
    for mu in Window((0, 0), (3, 3)).points():
        assert twice.dim(mu) == once.dim(mu)


def test_tdeg_filter():
    R = free_module(Ring.make((2, 2)))
    assert all(R.tdeg_filter(0).dim(mu) == R.dim(mu) for mu in Window((0, 0), (2, 2)).points())
    f = R.tdeg_filter(3)
    assert f.dim((1, 1)) == 0
    assert f.dim((2, 1)) == R.dim((2, 1))
    assert all(f.quotient_dim(mu) == 0 for mu in Window((0, 0), (4, 4)).points() if sum(mu) >= 3)


def test_block_restrict_examples():
    R = free_module(Ring.make((2, 3)))
    T0 = block_restrict(R, [0], (0,))
    assert T0.target == ((0,),) and T0.is_free()
    T1 = block_restrict(R, [0], (1,))
    assert len(T1.target) == 3 and T1.is_free()
    M = hypersurface_example("F5")
    TM = block_restrict(M, [0], (1,))
    assert len(TM.target) == 3
    assert TM.source == ((1,),)
    for m in range(4):
        assert TM.dim((m,)) == M.dim((m, 1))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 29), st.integers(0, 2), st.data())
def test_block_restrict_pieces(idx, j, data):
    M = corpus(0, 30)[idx]
    k = M.k
    if k < 2:
        return
    blocks = sorted(data.draw(st.sets(st.integers(0, k - 1), min_size=1, max_size=k - 1)))
    others = [i for i in range(k) if i not in blocks]
    nu = tuple(data.draw(st.integers(-1, 2)) for _ in others)
    T = block_restrict(M, blocks, nu)
    for mu_i in itertools.product(range(-1, 3), repeat=len(blocks)):
        assert T.dim(mu_i) == M.dim(assemble_degree(k, blocks, mu_i, nu))


def test_ideal_descriptor():
    assert IdealDescriptor.parse("B1+B2", 2).blocks == frozenset({0, 1})
    assert IdealDescriptor.parse("m", 3) == IdealDescriptor.full(3)
    assert IdealDescriptor.parse("B", 2).product
    with pytest.raises(ValueError):
        IdealDescriptor.parse("B3", 2)
    with pytest.raises(ValueError):
        IdealDescriptor.parse("C1", 2)


def test_degree_inconsistent_entry_rejected():
    ring = Ring.make((2, 2))
    with pytest.raises(DegreeError):
        GradedPresentation(ring, [(0, 0)], [(1, 1)], [{0: ring.var(0)}])


# -- files --------------------------------------------------------------------


def test_hypersurface_file_parses():
    M = parse_module_file(HYPERSURFACE_FILE)
    assert M.ring.n == (3, 3) and M.field.p == 2
    assert M.dim((1, 1)) == 8
    assert [list(s) for s in M.resolution().shifts] == [[(0, 0)], [(1, 1)]]


def test_missing_field_is_an_error():
    with pytest.raises(ParseError, match="field"):
        parse_module_file('ring { k = 1; n = [2] }')


def test_wrong_degree_names_entry():
    text = HYPERSURFACE_FILE.replace("a*x+b*y+c*z", "a*b + x*y")
    with pytest.raises(ParseError, match=r"entry \(0, 0\)"):
        parse_module_file(text)


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_module_file('ring { k = 1; n = [2; field = "Q" }')
    assert exc.value.line == 1


def test_polynomial_parser():
    ring = Ring.make((2,), "Q", names=("x", "y"))
    f = parse_polynomial("(x - y)^2 + 2*x*y", ring)
    assert f == {(2, 0): 1, (0, 2): 1}
    with pytest.raises(ParseError):
        parse_polynomial("x + z", ring)
    with pytest.raises(ParseError):
        parse_polynomial("x +", ring)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 29))
def test_print_parse_round_trip(idx):
    M = corpus(0, 30)[idx]
    again = parse_module_file(print_module(M))
    w = Window(tuple(-1 for _ in range(M.k)), tuple(2 for _ in range(M.k)))
    for mu in w.points():
        assert again.dim(mu) == M.dim(mu)


def test_round_trip_over_q():
    ring = Ring.make((2, 2), FieldSpec.parse("Q"))
    f = ring.parse("3*x1_1*x2_1 - 7*x1_2*x2_2")
    M = GradedPresentation(ring, [(0, 0)], [(1, 1)], [{0: f}])
    again = parse_module_file(print_module(M))
    assert again.columns == M.columns
