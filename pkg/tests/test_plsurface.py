import random

import pytest

from plsurf import decide as D
from plsurf.core import InputError, vec
from plsurf.currents import codifferential, soup_current
from plsurf.plpath import concat, endpoint, inverse, is_loop, reduce, word
from plsurf.plsurface import (
    Kite,
    KiteWord,
    act,
    boundary_delta,
    closed_soup,
    fold,
    gamma_after_action,
    identity,
    inv,
    is_closed_soup,
    kite,
    local_simplify,
    mul,
    split_kite,
    surface_signature,
    suspension_soup,
    triangulate_kite,
    validate,
)
from plsurf.tensor import log, mul as tmul, tensor_inverse, unit

TRI = word(3, [(1, 0, 0), (-1, 1, 0), (0, -1, 0)])
SQ = word(3, [(1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)])
E = word(3, [])


def words(seed, n=20):
    rng = random.Random(seed)
    return [D.random_word(rng) for _ in range(n)]


def test_boundary_examples():
    assert boundary_delta(KiteWord(3, (Kite(E, SQ),))) == reduce(SQ)
    assert boundary_delta(fold(word(3, [(0, 0, 1)]), TRI)).letters == ()
    for X, Y in zip(words(1), words(2)):
        assert boundary_delta(mul(X, Y)) == concat(boundary_delta(X), boundary_delta(Y))


def test_triangulate_kite():
    assert len(triangulate_kite(Kite(E, TRI))) == 1
    sq = triangulate_kite(Kite(word(3, [(0, 0, 5)]), SQ, -1))
    assert len(sq) == 2 and {s for _, s in sq} == {-1}
    assert all(t.p0 == vec(0, 0, 5) for t, _ in sq)


def test_split_kite_multiplies_back():
    rng = random.Random(4)
    for _ in range(20):
        k = D.random_kite(rng, 3)
        parts = KiteWord(3, tuple(split_kite(k)))
        assert boundary_delta(parts) == boundary_delta(KiteWord(3, (k,)))
        assert D.thin_equiv(parts, KiteWord(3, (k,)), level=None).equal


def test_closed_soup():
    assert closed_soup(KiteWord(3, (Kite(E, SQ),))) != []
    assert soup_current(closed_soup(KiteWord(3, (Kite(E, SQ),))), 5, 3).is_zero()
    for X in words(3):
        assert is_closed_soup(closed_soup(X))
        assert codifferential(soup_current(closed_soup(X), 4, 3)).is_zero()


def test_signature_identity_and_fold():
    one = surface_signature(identity(3), 3, 4)
    assert one.boundary == unit(3, 3) and one.gamma.is_zero()
    assert surface_signature(fold(word(3, [(1, 1, 0)]), SQ), 3, 4) == one


def test_signature_homomorphism_and_inverse():
    for X, Y in zip(words(5, 10), words(6, 10)):
        sx, sy = surface_signature(X, 3, 4), surface_signature(Y, 3, 4)
        sxy = surface_signature(mul(X, Y), 3, 4)
        assert sxy.boundary == tmul(sx.boundary, sy.boundary)
        assert sxy.gamma == sx.gamma + sy.gamma
        si = surface_signature(inv(X), 3, 4)
        assert si.boundary == tensor_inverse(sx.boundary)
        assert si.gamma == -sx.gamma


def test_boundary_log_has_no_degree_one_part():
    for X in words(7, 10):
        L = log(surface_signature(X, 3, 3).boundary)
        assert L.degree_part(1).is_zero()


def test_peiffer_invariance():
    rng = random.Random(8)
    for _ in range(10):
        e1, e2 = D.random_kite(rng, 3), D.random_kite(rng, 3)
        E1, E2 = KiteWord(3, (e1,)), KiteWord(3, (e2,))
        lhs = act(boundary_delta(E1), E2)
        rhs = mul(E1, E2, inv(E1))
        assert surface_signature(lhs, 3, 5) == surface_signature(rhs, 3, 5)


def test_action_identity():
    rng = random.Random(12)
    for _ in range(10):
        X = D.random_word(rng)
        x = D.random_tail(rng, 3, 3)
        lhs = soup_current(closed_soup(act(x, X)), 4, 3)
        assert lhs == gamma_after_action(x, X, 4)


def test_suspension_degenerate_cases():
    assert soup_current(suspension_soup(vec(0, 0, 0), SQ), 5, 3).is_zero()
    assert suspension_soup(vec(1, 2, 3), E) == []
    with pytest.raises(InputError):
        suspension_soup(vec(1, 0, 0), word(3, [(1, 0, 0)]))


def test_local_simplify():
    assert local_simplify(fold(word(3, [(2, 0, 1)]), SQ)).kites == ()
    x = word(3, [(1, 0, 0)])
    k = Kite(word(3, [(0, 0, 1)]), concat(x, SQ, inverse(x)))
    s = local_simplify(KiteWord(3, (k,)))
    assert len(s) == 1
    assert s.kites[0].tail == word(3, [(0, 0, 1), (1, 0, 0)])
    assert s.kites[0].loop == reduce(SQ)
    lhs, rhs = D.peiffer_pair()
    assert len(local_simplify(mul(lhs, inv(rhs)), budget=200)) == 0
    for X in words(13, 15):
        Y = local_simplify(D.scramble(X, random.Random(1)))
        assert surface_signature(Y, 3, 4) == surface_signature(X, 3, 4)


def test_validate():
    assert validate(KiteWord(3, (Kite(E, SQ),))) == []
    tet = word(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])
    assert "planar" in validate(KiteWord(3, (Kite(E, tet),)))[0]
    assert "close" in validate(KiteWord(3, (Kite(E, word(3, [(1, 0, 0)])),)))[0]
    with pytest.raises(InputError):
        kite(E, tet)
    with pytest.raises(InputError):
        KiteWord(3, (Kite(word(2, []), word(2, [])),))
    with pytest.raises(InputError):
        Kite(E, SQ, 2)


def test_act_examples():
    X = D.random_word(random.Random(1))
    assert act(E, X) == X
    x = word(3, [(1, 2, 3)])
    assert boundary_delta(act(x, X)) == concat(x, boundary_delta(X), inverse(x))
    assert is_loop(boundary_delta(X))
    assert endpoint(x) == vec(1, 2, 3)
