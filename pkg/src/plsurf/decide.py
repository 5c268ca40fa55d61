"""Exact decision of thin homotopy equivalence for kite words.

X and Y are equivalent iff their boundaries have the same minimal word and
the closed word X Y^-1, written over a compatible complex, has zero face
chain.  Example generators used as fixtures live here as well.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from .core import InputError, Vec, add, basis, rank, scale, sub, vec, zero
from .plpath import PLWord, concat, inverse, is_planar_loop, partial_sums, reduce
from .plsurface import (
    Kite,
    KiteWord,
    SurfaceSignature,
    boundary_delta,
    identity,
    inv,
    mul,
    surface_signature,
)
from .triangulate import chain, compatible_representative

EQUAL = "equal"
NOT_EQUAL = "not_equal"


@dataclass(frozen=True)
class DecisionReport:
    verdict: str
    boundary_x: PLWord
    boundary_y: PLWord
    chain: dict  # face as a vertex triple -> signed multiplicity
    witness: str | None
    signature_excerpt: SurfaceSignature | None

    @property
    def equal(self) -> bool:
        return self.verdict == EQUAL


def thin_equiv(X: KiteWord, Y: KiteWord, level: int | None = 3, max_weight: int | None = 4,
               threads: int = 1) -> DecisionReport:
    """Decide whether X and Y are equal as elements of the PL surface group.

    level and max_weight control only the attached signature excerpt; pass
    None to skip it.
    """
    if X.dim != Y.dim:
        raise InputError("dimension mismatch")
    Z = mul(X, inv(Y))
    excerpt = None
    if level is not None and max_weight is not None:
        excerpt = surface_signature(Z, level, max_weight, threads)
    dx, dy = boundary_delta(X), boundary_delta(Y)
    if dx != dy:
        return DecisionReport(NOT_EQUAL, dx, dy, {}, _boundary_witness(dx, dy), excerpt)
    if not Z.kites:
        return DecisionReport(EQUAL, dx, dy, {}, None, excerpt)
    _, C, m = compatible_representative(Z, threads)
    ch = chain(m)
    if not ch:
        return DecisionReport(EQUAL, dx, dy, {}, None, excerpt)
    geo = {tuple(C.vertices[i] for i in face): v for face, v in ch.items()}
    tri, mult = next(iter(geo.items()))
    witness = "face [" + ", ".join("(" + ", ".join(map(str, p)) + ")" for p in tri) + f"] has signed multiplicity {mult}"
    return DecisionReport(NOT_EQUAL, dx, dy, geo, witness, excerpt)


def _boundary_witness(a: PLWord, b: PLWord) -> str:
    n = 0
    while n < min(len(a), len(b)) and a.letters[n] == b.letters[n]:
        n += 1
    return f"minimal boundary words differ at letter {n} (lengths {len(a)} and {len(b)})"


def is_null(X: KiteWord, **kw) -> DecisionReport:
    return thin_equiv(X, identity(X.dim), **kw)


# -- closed surfaces as kite words -----------------------------------------

Face = tuple[int, int, int]


def closed_surface_word(points: Sequence[Vec], faces: Sequence[Face], dim: int | None = None) -> KiteWord:
    """Kite word of an oriented closed triangulated surface, built by shelling.

    faces must be consistently oriented.  The disk grown so far has boundary
    loop beta = P (u -> w) Q; gluing a face across u -> w appends the kite with
    tail Q^-1 and loop (w -> u -> x -> w).  The boundary of the result is
    trivial, which is asserted.
    """
    if dim is None:
        dim = len(points[0])
    faces = [tuple(f) for f in faces]
    pts = [tuple(p) for p in points]

    def seg_word(vs: Sequence[int]) -> list[Vec]:
        return [sub(pts[b], pts[a]) for a, b in zip(vs, vs[1:])]

    def tri_loop(a: int, b: int, c: int) -> PLWord:
        return PLWord(dim, tuple(seg_word([a, b, c, a])))

    first = faces[0]
    base = first[0]
    ring = list(first)
    origin = zero(dim)
    to_base = [sub(pts[base], origin)] if any(pts[base]) else []
    kites = [Kite(PLWord(dim, tuple(to_base)), tri_loop(*first), 1)]
    remaining = list(faces[1:])
    while remaining:
        m = len(ring)
        pos = {v: i for i, v in enumerate(ring)}
        pick = None
        for n, f in enumerate(remaining):
            # find the boundary edges this face is glued along (reversed in f)
            fe = [(f[i], f[(i + 1) % 3]) for i in range(3)]
            shared = [(b, a) for a, b in fe if a in pos and b in pos and ring[(pos[b] + 1) % m] == a]
            on = [v for v in f if v in pos]
            if len(shared) == 1 and len(on) == 2:
                pick = (n, "one", shared[0])
                break
            if len(shared) == 2 and len(on) == 3 and m > 3:
                (u1, w1), (u2, w2) = shared
                if w1 == u2:
                    u, x, w = u1, w1, w2
                elif w2 == u1:
                    u, x, w = u2, w2, w1
                else:
                    continue
                if x == base:
                    continue
                pick = (n, "two", (u, x, w))
                break
            if len(shared) == 3 and len(remaining) == 1:
                pick = (n, "last", None)
                break
        if pick is None:
            raise AssertionError("surface is not shellable in the chosen order")
        n, kind, data = pick
        f = remaining.pop(n)
        if kind == "last":
            loop = PLWord(dim, tuple(seg_word(ring + [ring[0]])))
            kites.append(Kite(PLWord(dim, tuple(to_base)), inverse(loop), 1))
            ring = []
            break
        if kind == "one":
            u, w = data
            i = pos[u]
            x = next(v for v in f if v not in (u, w))
            q_back = [base] + list(reversed(ring[i + 1:]))
            tail = to_base + seg_word(q_back)
            kites.append(Kite(PLWord(dim, tuple(tail)), tri_loop(w, u, x), 1))
            ring = ring[:i + 1] + [x] + ring[i + 1:]
        else:
            u, x, w = data
            k = pos[x]
            q_back = [base] + list(reversed(ring[k + 1:]))
            tail = to_base + seg_word(q_back)
            kites.append(Kite(PLWord(dim, tuple(tail)), tri_loop(w, x, u), 1))
            del ring[k]
    X = KiteWord(dim, tuple(kites))
    if boundary_delta(X).letters:
        raise AssertionError("closed surface word has nontrivial boundary")
    return X


def outward_faces(points: Sequence[Sequence[float]], faces: Sequence[Face]) -> list[Face]:
    """Orient faces of a convex polytope outward (float determinant)."""
    n = len(points)
    c = [sum(p[k] for p in points) / n for k in range(3)]
    out = []
    for a, b, d in faces:
        pa, pb, pd = points[a], points[b], points[d]
        u = [pb[k] - pa[k] for k in range(3)]
        v = [pd[k] - pa[k] for k in range(3)]
        w = [pa[k] - c[k] for k in range(3)]
        det = (u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0])
               + u[2] * (v[0] * w[1] - v[1] * w[0]))
        out.append((a, b, d) if det > 0 else (a, d, b))
    return out


def tetrahedron() -> KiteWord:
    pts = [zero(3), basis(3, 0), basis(3, 1), basis(3, 2)]
    faces = outward_faces([[float(x) for x in p] for p in pts], list(combinations(range(4), 3)))
    return closed_surface_word(pts, faces)


ANTIPODAL_IMAGES = [(0, 0, 0), (4, 1, 0), (1, 5, 1), (2, 1, 6), (5, 4, 3), (3, 7, 5)]


def icosahedron() -> tuple[list[tuple[float, float, float]], list[Face]]:
    phi = (1 + math.sqrt(5)) / 2
    pts = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            base = (0.0, s1 * 1.0, s2 * phi)
            for r in range(3):
                pts.append(tuple(base[(k - r) % 3] for k in range(3)))
    faces = []
    for f in combinations(range(12), 3):
        if all(abs(math.dist(pts[a], pts[b]) - 2) < 1e-9 for a, b in combinations(f, 2)):
            faces.append(f)
    return pts, outward_faces(pts, faces)


def antipodal() -> KiteWord:
    """Icosahedron with antipodal vertices identified, mapped into R^3.

    Every image triangle is covered twice with opposite orientations, so the
    word is thinly null homotopic, although no local cancellation exists.
    """
    pts, faces = icosahedron()
    classes: list[int] = []
    reps: list[int] = []
    for i, p in enumerate(pts):
        j = next((n for n, r in enumerate(reps) if all(abs(a + b) < 1e-9 for a, b in zip(p, pts[r]))), None)
        if j is None:
            reps.append(i)
            j = len(reps) - 1
        classes.append(j)
    images = [vec(*ANTIPODAL_IMAGES[c]) for c in classes]
    return closed_surface_word(images, faces)


def fold_example() -> KiteWord:
    w = PLWord(3, (vec(1, 1, 0),))
    b = PLWord(3, (vec(1, 0, 0), vec(-1, 1, 0), vec(0, -1, 0)))
    return KiteWord(3, (Kite(w, b, 1), Kite(w, b, -1)))


def peiffer_pair() -> tuple[KiteWord, KiteWord]:
    """E1 E2 E1^-1 and d(E1) > E2, equal by the Peiffer identity."""
    e1 = Kite(PLWord(3, ()), PLWord(3, (vec(1, 0, 0), vec(-1, 1, 0), vec(0, -1, 0))), 1)
    e2 = Kite(PLWord(3, (vec(0, 0, 1),)), PLWord(3, (vec(0, 1, 0), vec(0, -1, 1), vec(0, 0, -1))), 1)
    lhs = KiteWord(3, (e1, e2, Kite(e1.tail, e1.loop, -1)))
    rhs = KiteWord(3, (Kite(concat(e1.boundary(), e2.tail), e2.loop, 1),))
    return lhs, rhs


def peiffer_example() -> KiteWord:
    lhs, rhs = peiffer_pair()
    return mul(lhs, inv(rhs))


# -- random words and moves ------------------------------------------------

def _rq(rng: random.Random, lo: int = -3, hi: int = 3) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.choice((1, 1, 2)))


def random_vector(rng: random.Random, dim: int) -> Vec:
    while True:
        v = tuple(_rq(rng) for _ in range(dim))
        if any(v):
            return v


def random_tail(rng: random.Random, dim: int, max_len: int = 2) -> PLWord:
    return reduce(PLWord(dim, tuple(random_vector(rng, dim) for _ in range(rng.randint(0, max_len)))))


def random_planar_loop(rng: random.Random, dim: int, corners: int | None = None) -> PLWord:
    """Closed polygon in a random 2-plane through 0 (triangle or quad)."""
    while True:
        u, v = random_vector(rng, dim), random_vector(rng, dim)
        if len({(u[i] * v[j] - u[j] * v[i]) for i in range(dim) for j in range(dim)}) > 1:
            break
    k = corners or rng.choice((3, 3, 4))
    pts = [zero(dim)]
    for _ in range(k - 1):
        a, b = rng.randint(-2, 2), rng.randint(-2, 2)
        pts.append(add(scale(Fraction(a), u), scale(Fraction(b), v)))
    letters = tuple(sub(q, p) for p, q in zip(pts, pts[1:] + [pts[0]]))
    return reduce(PLWord(dim, letters))


def random_kite(rng: random.Random, dim: int) -> Kite:
    while True:
        b = random_planar_loop(rng, dim)
        if b.letters:
            return Kite(random_tail(rng, dim), b, rng.choice((1, -1)))


def random_word(rng: random.Random, dim: int = 3, kites: int | None = None) -> KiteWord:
    n = kites if kites is not None else rng.randint(1, 3)
    return KiteWord(dim, tuple(random_kite(rng, dim) for _ in range(n)))


def _move_fold(rng: random.Random, ks: list[Kite], dim: int) -> list[Kite]:
    k = random_kite(rng, dim)
    i = rng.randint(0, len(ks))
    pair = [k, Kite(k.tail, k.loop, -k.sign)]
    return ks[:i] + pair + ks[i:]


def _move_peiffer(rng: random.Random, ks: list[Kite], dim: int) -> list[Kite]:
    # E_i E_(i+1) = (d(E_i) > E_(i+1)) E_i
    if len(ks) < 2:
        return ks
    i = rng.randrange(len(ks) - 1)
    a, b = ks[i], ks[i + 1]
    if rng.random() < 0.5:
        moved = Kite(concat(a.boundary(), b.tail), b.loop, b.sign)
        return ks[:i] + [moved, a] + ks[i + 2:]
    # E_i E_(i+1) = E_(i+1) (d(E_(i+1))^-1 > E_i)
    moved = Kite(concat(inverse(b.boundary()), a.tail), a.loop, a.sign)
    return ks[:i] + [b, moved] + ks[i + 2:]


def _move_conjugate(rng: random.Random, ks: list[Kite], dim: int) -> list[Kite]:
    # (w, b) = (w x^-1, x b x^-1) for x in the plane of b
    if not ks:
        return ks
    i = rng.randrange(len(ks))
    k = ks[i]
    pts = partial_sums(reduce(k.loop))
    dirs = [p for p in pts if any(p)]
    x = add(scale(Fraction(rng.randint(-2, 2)), dirs[0]), scale(Fraction(rng.randint(-2, 2), 2), dirs[-1]))
    if not any(x):
        return ks
    xw = PLWord(dim, (x,))
    new = Kite(concat(k.tail, inverse(xw)), concat(xw, k.loop, inverse(xw)), k.sign)
    if not is_planar_loop(new.loop):
        return ks
    return ks[:i] + [new] + ks[i + 1:]


def _move_split(rng: random.Random, ks: list[Kite], dim: int) -> list[Kite]:
    # (w, b1 b2) = (w, b1)(w, b2) for a planar loop cut along a chord
    cands = [i for i, k in enumerate(ks) if len(reduce(k.loop).letters) >= 3]
    if not cands:
        return ks
    i = rng.choice(cands)
    k = ks[i]
    pts = partial_sums(reduce(k.loop))
    j = rng.randint(1, len(pts) - 2)
    c = pts[j]
    first = reduce(PLWord(dim, tuple(sub(q, p) for p, q in zip(pts[:j + 1], pts[1:j + 1])) + (scale(-1, c),)))
    second = reduce(PLWord(dim, (c,) + tuple(sub(q, p) for p, q in zip(pts[j:], pts[j + 1:]))))
    parts = [Kite(k.tail, first, 1), Kite(k.tail, second, 1)]
    if k.sign == -1:
        parts = [Kite(k.tail, second, -1), Kite(k.tail, first, -1)]
    parts = [p for p in parts if p.loop.letters]
    return ks[:i] + parts + ks[i + 1:]


def _move_retrace(rng: random.Random, ks: list[Kite], dim: int) -> list[Kite]:
    # insert z z^-1 into a tail
    if not ks:
        return ks
    i = rng.randrange(len(ks))
    k = ks[i]
    z = random_vector(rng, dim)
    letters = list(k.tail.letters)
    j = rng.randint(0, len(letters))
    letters[j:j] = [z, scale(-1, z)]
    return ks[:i] + [Kite(PLWord(dim, tuple(letters)), k.loop, k.sign)] + ks[i + 1:]


MOVES: list[Callable] = [_move_fold, _move_peiffer, _move_conjugate, _move_split, _move_retrace]


def scramble(X: KiteWord, rng: random.Random, moves: int = 4) -> KiteWord:
    """Apply random equivalence-preserving moves."""
    ks = list(X.kites)
    for _ in range(moves):
        ks = rng.choice(MOVES)(rng, ks, X.dim)
    return KiteWord(X.dim, tuple(ks))


def random_null(seed: int, dim: int = 3) -> KiteWord:
    rng = random.Random(seed)
    return scramble(identity(dim), rng, rng.randint(3, 6))


def diagonal_pair(rng: random.Random, dim: int = 3) -> tuple[KiteWord, KiteWord]:
    """Two double-kite words spanning the same skew quadrilateral.

    They share the boundary 0 -> A -> B -> C -> 0 but split along different
    diagonals, so together they bound a tetrahedron.
    """
    while True:
        A, B, C = (random_vector(rng, dim) for _ in range(3))
        if rank([A, B, C]) == 3:
            break
    e = PLWord(dim, ())
    X = KiteWord(dim, (
        Kite(e, PLWord(dim, (A, sub(B, A), scale(-1, B))), 1),
        Kite(e, PLWord(dim, (B, sub(C, B), scale(-1, C))), 1),
    ))
    Y = KiteWord(dim, (
        Kite(PLWord(dim, (A,)), PLWord(dim, (sub(B, A), sub(C, B), sub(A, C))), 1),
        Kite(e, PLWord(dim, (A, sub(C, A), scale(-1, C))), 1),
    ))
    return X, Y


def random_nonnull(seed: int, dim: int = 3) -> KiteWord:
    rng = random.Random(seed)
    if seed % 2:
        return KiteWord(dim, (random_kite(rng, dim),))
    X, Y = diagonal_pair(rng, dim)
    return mul(X, inv(Y))


EXAMPLES = ("fold", "peiffer", "tetrahedron", "antipodal", "random_null", "random_nonnull")


def gen_example(name: str, seed: int = 0) -> KiteWord:
    if name == "fold":
        return fold_example()
    if name == "peiffer":
        return peiffer_example()
    if name == "tetrahedron":
        return tetrahedron()
    if name == "antipodal":
        return antipodal()
    if name == "random_null":
        return random_null(seed)
    if name == "random_nonnull":
        return random_nonnull(seed)
    raise InputError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
