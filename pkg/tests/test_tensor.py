from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from plsurf.core import InputError, vec
from plsurf.plpath import concat, inverse, word
from plsurf.tensor import (
    TruncatedTensor,
    bracket,
    exp_segment,
    format_word,
    is_lie,
    letter,
    log,
    mul,
    parse_word,
    path_signature,
    right_nested,
    tensor_exp,
    tensor_inverse,
    unit,
)

coord = st.integers(-2, 2)


def words(dim=2, max_len=4):
    return st.lists(st.tuples(*[coord] * dim), max_size=max_len).map(lambda ls: word(dim, ls))


def test_inverse_of_one_plus_letter():
    x = unit(1, 4) + letter(1, 4, 0)
    inv = tensor_inverse(x)
    assert inv.coeffs == {(): 1, (0,): -1, (0, 0): 1, (0, 0, 0): -1, (0, 0, 0, 0): 1}
    assert mul(x, inv) == unit(1, 4)


def test_segment_signature():
    s = path_signature(word(1, [(1,)]), 2)
    assert s.coeffs == {(): 1, (0,): 1, (0, 0): Fraction(1, 2)}


def test_square_area():
    sq = word(2, [(1, 0), (0, 1), (-1, 0), (0, -1)])
    s = path_signature(sq, 2)
    assert s[(0, 1)] + s[(1, 0)] == 0
    assert s[(0, 1)] - s[(1, 0)] == 2


def test_empty_word_signature():
    assert path_signature(word(3, []), 3) == unit(3, 3)


@given(words(), words())
@settings(max_examples=40)
def test_chen(a, b):
    n = 3
    assert path_signature(concat(a, b), n) == mul(path_signature(a, n), path_signature(b, n))
    assert path_signature(inverse(a), n) == tensor_inverse(path_signature(a, n))


@given(words())
@settings(max_examples=30)
def test_log_is_lie_and_exp_inverts(a):
    s = path_signature(a, 3)
    L = log(s)
    assert is_lie(L)
    assert tensor_exp(L) == s


def test_exp_segment_matches_series():
    v = vec(1, -2)
    e = exp_segment(v, 3)
    assert e[(1, 1, 1)] == Fraction(-8, 6)
    assert e[(0, 1)] == -1


def test_is_lie():
    assert is_lie(right_nested((0, 1, 1), 2, 3))
    assert not is_lie(mul(letter(2, 3, 0), letter(2, 3, 1)))
    assert bracket(letter(2, 2, 0), letter(2, 2, 0)).is_zero()


def test_word_format():
    assert format_word((0, 1, 1), 3) == "122"
    assert parse_word("122", 3) == (0, 1, 1)
    assert format_word((9, 0), 12) == "10,1"
    assert parse_word("10,1", 12) == (9, 0)
    with pytest.raises(InputError):
        parse_word("4", 3)


def test_bad_keys():
    with pytest.raises(InputError):
        TruncatedTensor(2, 1, {(0, 0): Fraction(1)})
    with pytest.raises(InputError):
        tensor_inverse(letter(2, 2, 0))


@given(words(), st.integers(0, 4), st.tuples(coord, coord).filter(any))
def test_thin_invariance_under_retracing(a, pos, z):
    ls = list(a.letters)
    pos = min(pos, len(ls))
    ls[pos:pos] = [vec(*z), vec(*(-x for x in z))]
    b = word(2, ls)
    assert path_signature(b, 3) == path_signature(a, 3)


def test_loop_degree_one_vanishes():
    loop = word(3, [(1, 2, 0), (0, -1, 3), (-1, -1, -3)])
    assert path_signature(loop, 3).degree_part(1).is_zero()


def test_square_matches_ode_oracle():
    from oracles import rk4_signature

    sq = word(2, [(1, 0), (0, 1), (-1, 0), (0, -1)])
    S = rk4_signature(sq.letters, 2, 200)
    exact = path_signature(sq, 2)
    assert abs(S[2][0, 1] - 1) < 1e-10 and abs(S[2][1, 0] + 1) < 1e-10
    assert exact[(0, 1)] == 1 and exact[(1, 0)] == -1
