import random
from fractions import Fraction

import pytest

from plsurf import kapranov as K
from plsurf.core import InputError, vec
from plsurf.currents import basis_gamma, codifferential, e_op
from plsurf.tensor import bracket as tbracket, is_lie
from plsurf.cli import random_k1, random_lie


def mobius(n):
    out, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    return -out if n > 1 else out


def witt(d, n):
    """Dimension of the degree-n part of the free Lie algebra on d letters."""
    return sum(mobius(k) * d ** (n // k) for k in range(1, n + 1) if n % k == 0) // n


@pytest.fixture(scope="module")
def ctx():
    return K.get_context(3, 5)


def test_quotient_dims_frozen(ctx):
    assert [ctx.quotient_dim(w) for w in (2, 3, 4, 5)] == [3, 9, 21, 54]


@pytest.mark.parametrize("w", [2, 3, 4, 5])
def test_quotient_dim_is_lie_plus_closed(ctx, w):
    assert ctx.quotient_dim(w) == witt(3, w) + K.closed_current_dim(3, w)


def test_ker_delta_matches_closed_currents(ctx):
    assert [ctx.ker_delta_dim(w) for w in (2, 3, 4, 5)] == [0, 1, 3, 6]
    for w in (2, 3, 4, 5):
        assert ctx.ker_delta_dim(w) == K.closed_current_dim(3, w)
    c2 = K.get_context(2, 5)
    assert all(c2.ker_delta_dim(w) == 0 for w in range(2, 6))


def test_delta_lands_in_lie(ctx):
    rng = random.Random(3)
    for _ in range(20):
        assert is_lie(K.delta(random_k1(ctx, rng)))


def test_rho_of_B(ctx):
    B = K.B_basis(ctx, (), 0, 1, 2)
    assert K.delta(B).is_zero()
    assert K.rho(B) == codifferential(basis_gamma((), 0, 1, 2, 3))
    with pytest.raises(InputError):
        K.B_basis(ctx, (), 1, 0, 2)


def test_crossed_module_axioms(ctx):
    rng = random.Random(11)
    for _ in range(30):
        A, B, C = (random_k1(ctx, rng, 3) for _ in range(3))
        x = random_lie(ctx, rng)
        assert K.delta(K.act(x, A)) == tbracket(x, K.delta(A))
        assert K.bracket(A, B) == -K.bracket(B, A)
        jac = K.bracket(A, K.bracket(B, C)) - K.bracket(K.bracket(A, B), C) - K.bracket(B, K.bracket(A, C))
        assert jac.is_zero()


def test_cone_section(ctx):
    rng = random.Random(5)
    for _ in range(10):
        y = K.delta(random_k1(ctx, rng))
        c = K.cone_c(ctx, y)
        assert K.delta(c) == y
        assert e_op(K.rho(c)).is_zero()


def test_psi_round_trip(ctx):
    rng = random.Random(9)
    for _ in range(10):
        A = random_k1(ctx, rng)
        gamma, y = K.Psi(A)
        assert codifferential(gamma).is_zero()
        assert K.Psi_inv(ctx, gamma, y) == A


@pytest.mark.parametrize("r", [3, 4, 5])
def test_curvature_identity(ctx, r):
    M = K.abelianized_curvature_component(ctx, r)
    assert M == [[Fraction(int(i == j)) for j in range(len(M))] for i in range(len(M))]


def test_suspension_two_ways(ctx):
    rng = random.Random(2)
    for _ in range(8):
        y = K.delta(random_k1(ctx, rng, 4))
        v = vec(*(rng.randint(-2, 2) for _ in range(3)))
        assert K.suspension_s(ctx, v, y) == K.suspension_s_projection(ctx, v, y)


def test_suspension_is_closed(ctx):
    rng = random.Random(21)
    for _ in range(5):
        y = K.delta(random_k1(ctx, rng, 4))
        v = vec(*(rng.randint(-2, 2) for _ in range(3)))
        assert codifferential(K.suspension_s(ctx, v, y)).is_zero()


@pytest.mark.parametrize("w", [2, 3, 4, 5])
def test_psi_is_invertible_per_weight(ctx, w):
    n = ctx.quotient_dim(w)
    picks = range(n) if w < 5 else random.Random(w).sample(range(n), 8)
    for i in picks:
        unit_i = tuple(int(i == j) for j in range(n))
        g, y = K.Psi(K.from_coords(ctx, w, unit_i))
        assert not (g.is_zero() and y.is_zero())
        assert K.Psi_inv(ctx, g, y).coords(w) == unit_i
