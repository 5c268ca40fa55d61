import logging
import random

import pytest

from plsurf import decide as D
from plsurf.core import InputError
from plsurf.plpath import word
from plsurf.core import plane_of_triangle
from plsurf.plsurface import (
    Kite,
    KiteWord,
    boundary_delta,
    identity,
    inv,
    mul,
    surface_signature,
    triangulate_kite,
)

log = logging.getLogger(__name__)
E = word(3, [])


def test_fixed_examples():
    assert D.is_null(identity(3)).equal
    assert D.is_null(D.fold_example()).equal
    lhs, rhs = D.peiffer_pair()
    assert D.thin_equiv(lhs, rhs).equal
    r = D.is_null(D.tetrahedron())
    assert not r.equal and r.boundary_x.letters == ()
    assert sorted(abs(v) for v in r.chain.values()) == [1, 1, 1, 1]


def test_single_kite_not_null():
    tri = word(3, [(1, 0, 0), (-1, 1, 0), (0, -1, 0)])
    r = D.is_null(KiteWord(3, (Kite(E, tri),)))
    assert r.verdict == D.NOT_EQUAL and "boundary" in r.witness
    X, Y = D.diagonal_pair(random.Random(0))
    r = D.thin_equiv(X, Y)
    assert not r.equal
    assert r.boundary_x == r.boundary_y
    assert len(r.chain) == 4 and set(r.chain.values()) <= {1, -1}
    assert "multiplicity" in r.witness


def test_generators():
    assert len(D.gen_example("fold")) == 2
    t = D.gen_example("tetrahedron")
    assert len(t) == 4 and boundary_delta(t).letters == ()
    with pytest.raises(InputError):
        D.gen_example("nope")
    assert D.gen_example("random_null", 3) == D.gen_example("random_null", 3)


def test_antipodal_is_null():
    X = D.antipodal()
    assert len(X) == 20 and boundary_delta(X).letters == ()
    assert D.is_null(X, level=None).equal


@pytest.mark.parametrize("seed", range(20))
def test_move_closure(seed):
    rng = random.Random(seed)
    X = D.random_word(rng)
    Y = D.scramble(X, rng, 5)
    r = D.thin_equiv(X, Y, level=3, max_weight=5)
    assert r.equal
    sx, sy = surface_signature(X, 3, 5), surface_signature(Y, 3, 5)
    assert sx == sy
    assert r.signature_excerpt.gamma.is_zero()


@pytest.mark.parametrize("seed", range(20))
def test_not_equal_consistency(seed):
    Z = D.random_nonnull(seed)
    r = D.is_null(Z, level=3, max_weight=5)
    assert not r.equal and r.witness
    if r.boundary_x == r.boundary_y and r.signature_excerpt.gamma.is_zero():
        log.info("chain witness for seed %d not detected at weight 5", seed)


def kite_plane(k):
    return plane_of_triangle(triangulate_kite(k)[0][0])


def test_separation_distinct_planes():
    rng = random.Random(1)
    for _ in range(10):
        a, b = D.random_kite(rng, 3), D.random_kite(rng, 3)
        X, Y = KiteWord(3, (a,)), KiteWord(3, (b,))
        if kite_plane(a) == kite_plane(b):
            continue
        assert not D.thin_equiv(X, Y, level=None).equal


def test_dim_mismatch():
    with pytest.raises(InputError):
        D.thin_equiv(identity(2), identity(3))


def test_inverse_word_is_null():
    X = D.random_word(random.Random(4), kites=3)
    assert D.is_null(mul(X, inv(X)), level=None).equal
