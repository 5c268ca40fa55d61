"""Acceptance suite: one test per criterion, each reporting PASS or FAIL."""

import random
import subprocess
import sys
from fractions import Fraction
from itertools import product

from plsurf import cli, decide as D, kapranov as K
from plsurf.core import scale
from plsurf.currents import (
    PolyCurrent,
    basis_gamma,
    basis_omega,
    closed_pairing,
    codifferential,
    index_data,
    soup_current,
)
from plsurf.plpath import (
    PLWord,
    concat,
    inverse,
    reduce,
    reduce_with_schedule,
)
from plsurf.plsurface import (
    KiteWord,
    act,
    boundary_delta,
    closed_soup,
    gamma_after_action,
    inv,
    local_simplify,
    mul,
    surface_signature,
    suspension_soup,
)
from plsurf.tensor import bracket as tbracket, log, mul as tmul, path_signature, tensor_inverse
from plsurf.triangulate import compatible_triangulation, is_compatible, triangulation_violations

from acceptance_log import criterion
from oracles import random_instance, rk4_signature, soup_coefficient


def rq(rng, lo=-3, hi=3):
    return Fraction(rng.randint(lo, hi), rng.choice((1, 2, 3)))


def random_path(rng, dim, max_len):
    return PLWord(dim, tuple(tuple(rq(rng) for _ in range(dim)) for _ in range(rng.randint(0, max_len))))


def dependent_heavy_word(rng):
    """Random word whose letters are often parallel, so many rewrites apply."""
    dim = rng.randint(1, 4)
    dirs = [tuple(Fraction(rng.randint(-2, 2)) for _ in range(dim)) for _ in range(3)]
    letters = []
    for _ in range(rng.randint(0, 12)):
        r = rng.random()
        if r < 0.15:
            letters.append((Fraction(0),) * dim)
        elif r < 0.8:
            letters.append(scale(rq(rng), rng.choice(dirs)))
        else:
            letters.append(tuple(rq(rng) for _ in range(dim)))
    return PLWord(dim, tuple(letters))


def test_criterion_01_confluence():
    with criterion(1, "minimal-word confluence, 1000 words x 5 schedules"):
        rng = random.Random(101)
        for _ in range(1000):
            w = dependent_heavy_word(rng)
            target = reduce(w)
            assert target.is_minimal()
            for s in range(5):
                assert reduce_with_schedule(w, random.Random(rng.random())) == target


def test_criterion_02_chen():
    with criterion(2, "Chen identity and inversion, 300 pairs at N = 4"):
        rng = random.Random(202)
        for _ in range(300):
            dim = rng.randint(1, 3)
            a, b = random_path(rng, dim, 4), random_path(rng, dim, 4)
            sa, sb = path_signature(a, 4), path_signature(b, 4)
            assert path_signature(concat(a, b), 4) == tmul(sa, sb)
            assert path_signature(inverse(a), 4) == tensor_inverse(sa)


def test_criterion_03_ode_oracle():
    with criterion(3, "RK4 oracle, 50 paths in dim 3, N = 3, deviation <= 1e-8"):
        rng = random.Random(303)
        worst = 0.0
        for _ in range(50):
            w = PLWord(3, tuple(tuple(rq(rng, -2, 2) for _ in range(3)) for _ in range(rng.randint(1, 6))))
            S = rk4_signature(w.letters, 3, 1000)
            exact = path_signature(w, 3)
            for k in range(1, 4):
                for idx in product(range(3), repeat=k):
                    worst = max(worst, abs(S[k][idx] - float(exact[idx])))
        print(f"max deviation {worst:.3e}")
        assert worst <= 1e-8


def test_criterion_04_dual_bases():
    with criterion(4, "pairing of dual bases is the identity up to weight 6, dim 3"):
        for r in range(3, 7):
            data = index_data(3, r)
            M = [[closed_pairing(codifferential(basis_gamma(*a, 3)), basis_omega(*b, 3)) for b in data] for a in data]
            assert M == [[int(i == j) for j in range(len(data))] for i in range(len(data))]


def random_k1(ctx, rng, top):
    out = ctx.zero()
    for _ in range(rng.randint(1, 3)):
        w = rng.randint(2, top)
        i, j = rng.sample(range(ctx.dim), 2)
        out = out + ctx.generator(tuple(rng.randrange(ctx.dim) for _ in range(w - 2)), i, j) * rng.randint(-3, 3)
    return out


def random_lie(ctx, rng, top=2):
    return K.lie_elements(ctx.dim, ctx.level, [tuple(rng.randrange(ctx.dim) for _ in range(rng.randint(1, top)))
                                               for _ in range(2)], [rng.randint(-2, 2), rng.randint(-2, 2)])


def test_criterion_05_crossed_module():
    with criterion(5, "crossed-module axioms in the Peiffer quotient, 200 instances each"):
        ctx = K.get_context(3, 5)
        rng = random.Random(505)
        for _ in range(200):
            A = random_k1(ctx, rng, 4)
            x = random_lie(ctx, rng)
            assert K.delta(K.act(x, A)) == tbracket(x, K.delta(A))
        for _ in range(200):
            A, B = random_k1(ctx, rng, 3), random_k1(ctx, rng, 3)
            assert K.act(K.delta(A), B) == K.bracket(A, B) == -K.bracket(B, A)
            assert K.delta(K.bracket(A, B)) == tbracket(K.delta(A), K.delta(B))
        for _ in range(200):
            # the action is a Lie representation
            A = random_k1(ctx, rng, 3)
            x, y = random_lie(ctx, rng, 1), random_lie(ctx, rng, 1)
            lhs = K.act(x, K.act(y, A)) - K.act(y, K.act(x, A))
            assert lhs == K.act(tbracket(x, y), A)
        # triple brackets of weight >= 2 elements need level 6 to be nonzero
        ctx6 = K.get_context(3, 6)
        nonzero = 0
        for _ in range(200):
            A, B, C = (random_k1(ctx6, rng, 2) for _ in range(3))
            t1 = K.bracket(A, K.bracket(B, C))
            jac = t1 + K.bracket(B, K.bracket(C, A)) + K.bracket(C, K.bracket(A, B))
            assert jac.is_zero()
            nonzero += not t1.is_zero()
        assert nonzero > 50


def test_criterion_06_ker_delta():
    with criterion(6, "dim ker delta equals closed-current dimension, weight <= 5, dim <= 3"):
        for dim in (1, 2, 3):
            ctx = K.get_context(dim, 5)
            for w in range(2, 6):
                assert ctx.ker_delta_dim(w) == K.closed_current_dim(dim, w)


def test_criterion_07_curvature():
    with criterion(7, "abelianized curvature is the identity at weights 3..5, dim 3"):
        ctx = K.get_context(3, 5)
        for r in (3, 4, 5):
            M = K.abelianized_curvature_component(ctx, r)
            assert M == [[int(i == j) for j in range(len(M))] for i in range(len(M))]


def test_criterion_08_signature_structure():
    with criterion(8, "homomorphism, inverse and Peiffer invariance, 100 pairs, N = 3, Nw = 5"):
        rng = random.Random(808)
        for _ in range(100):
            X, Y = D.random_word(rng, kites=rng.randint(1, 2)), D.random_word(rng, kites=rng.randint(1, 2))
            sx, sy = surface_signature(X, 3, 5), surface_signature(Y, 3, 5)
            sxy = surface_signature(mul(X, Y), 3, 5)
            assert sxy.boundary == tmul(sx.boundary, sy.boundary)
            assert sxy.gamma == sx.gamma + sy.gamma
            si = surface_signature(inv(X), 3, 5)
            assert si.boundary == tensor_inverse(sx.boundary) and si.gamma == -sx.gamma
            assert surface_signature(act(boundary_delta(X), Y), 3, 5) == surface_signature(mul(X, Y, inv(X)), 3, 5)


def _linear_part(values):
    """Derivative at 0 of the interpolating polynomial through (t, values[t])."""
    n = len(values)
    total = Fraction(0)
    for i in range(n):
        others = [x for x in range(n) if x != i]
        den = 1
        for x in others:
            den *= i - x
        d = Fraction(0)
        for j in others:
            p = 1
            for x in others:
                if x != j:
                    p *= -x
            d += p
        total += values[i] * d / den
    return total


def test_criterion_09_action_identity():
    with criterion(9, "geometric action identity, 100 instances, and the suspension cross-check"):
        rng = random.Random(909)
        for _ in range(100):
            X = D.random_word(rng, kites=rng.randint(1, 2))
            x = D.random_tail(rng, 3, 3)
            assert soup_current(closed_soup(act(x, X)), 5, 3) == gamma_after_action(x, X, 5)
        ctx = K.get_context(3, 5)
        sign = K.SUSPENSION_SIGN
        for _ in range(10):
            b = boundary_delta(D.random_word(rng, kites=2))
            v = D.random_vector(rng, 3)
            y = log(path_signature(b, 5))
            algebraic = K.suspension_s(ctx, v, y)
            vals = [soup_current(suspension_soup(scale(Fraction(t), v), b), 5, 3) for t in range(7)]
            keys = {k for c in vals for k in c.coeffs}
            geometric = PolyCurrent(3, 2, {k: _linear_part([c[k] for c in vals]) for k in keys})
            assert geometric == algebraic * sign


def test_criterion_10_tetrahedron():
    with criterion(10, "tetrahedron current matches quadrature and the divergence theorem"):
        X = D.gen_example("tetrahedron")
        assert boundary_delta(X).letters == ()
        g = surface_signature(X, 3, 3).gamma
        key = ((1, 0, 0), (1, 2))
        assert g[key] in (Fraction(1, 6), Fraction(-1, 6))
        soup = closed_soup(X)
        assert abs(float(g[key]) - soup_coefficient(soup, (1, 0, 0), (1, 2))) < 1e-10
        # signed volume from the soup; the flux of x e_1 through the boundary equals it
        vol = sum(s * (t.p0[0] * (t.p1[1] * t.p2[2] - t.p1[2] * t.p2[1])
                       - t.p0[1] * (t.p1[0] * t.p2[2] - t.p1[2] * t.p2[0])
                       + t.p0[2] * (t.p1[0] * t.p2[1] - t.p1[1] * t.p2[0])) for t, s in soup) / 6
        assert abs(vol) == Fraction(1, 6)
        assert g[key] == vol


def test_criterion_11_triangulation():
    with criterion(11, "compatible triangulation postconditions, 200 random instances"):
        rng = random.Random(1111)
        for _ in range(200):
            E, P = random_instance(rng)
            C = compatible_triangulation(E, P)
            assert is_compatible(C)
            assert triangulation_violations(E, P, C) == []


def test_criterion_12_decisions():
    with criterion(12, "200 scrambled pairs decide equal, 200 distinct pairs decide not_equal"):
        rng = random.Random(1212)
        for _ in range(200):
            X = D.random_word(rng)
            Y = D.scramble(X, rng, rng.randint(2, 6))
            assert D.thin_equiv(X, Y, level=None).verdict == D.EQUAL
        for n in range(200):
            if n % 2:
                X, Y = KiteWord(3, (D.random_kite(rng, 3),)), KiteWord(3, ())
            else:
                X, Y = D.diagonal_pair(rng)
            r = D.thin_equiv(X, Y, level=None)
            assert r.verdict == D.NOT_EQUAL and r.witness
            assert r.boundary_x != r.boundary_y or r.chain


def test_criterion_13_antipodal():
    with criterion(13, "antipodal double cover: trivial boundary, not locally simplifiable, null, gamma = 0"):
        X = D.gen_example("antipodal")
        assert len(X) == 20
        assert boundary_delta(X).letters == ()
        assert len(local_simplify(X, budget=10000)) > 0
        assert D.is_null(X, level=None).verdict == D.EQUAL
        assert surface_signature(X, 2, 8).gamma.is_zero()


def run_cli(args, stdin):
    p = subprocess.run([sys.executable, "-m", "plsurf.cli", *args], input=stdin, capture_output=True)
    assert p.returncode in (0, 1), p.stderr
    return p.stdout


def test_criterion_14_determinism():
    with criterion(14, "thin-equiv and surface-sig byte-identical across 1 and 8 threads"):
        fixtures = [(n, 0) for n in ("fold", "peiffer", "tetrahedron", "antipodal")]
        fixtures += [(n, s) for n in ("random_null", "random_nonnull") for s in range(3)]
        for name, seed in fixtures:
            doc = cli.to_text(cli.dump_kites(D.gen_example(name, seed))).encode()
            for cmd in (["thin-equiv", "-", "identity"], ["surface-sig"]):
                one = run_cli([*cmd, "--threads", "1"], doc)
                eight = run_cli([*cmd, "--threads", "8"], doc)
                assert one == eight and one
