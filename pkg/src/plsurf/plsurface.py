"""Kite words: a combinatorial model of PL surfaces up to thin homotopy.

A kite (w, b, s) is a tail path w together with a planar loop b, raised to
the power s = +-1.  A kite word is a product of kites in list order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import InputError, Triangle, Vec, add, dependent, make_line, neg, sub
from .currents import PolyCurrent, soup_current, translate_current
from .plpath import (
    PLWord,
    concat,
    endpoint,
    inverse,
    is_loop,
    is_planar_loop,
    partial_sums,
    reduce,
    segment,
    triangle_fan,
)
from .tensor import TruncatedTensor, path_signature

SignedSoup = list[tuple[Triangle, int]]


@dataclass(frozen=True)
class Kite:
    tail: PLWord
    loop: PLWord
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InputError("kite sign must be +1 or -1")
        if self.tail.dim != self.loop.dim:
            raise InputError("tail and loop dimensions differ")

    @property
    def dim(self) -> int:
        return self.tail.dim

    def boundary(self) -> PLWord:
        b = self.loop if self.sign == 1 else inverse(self.loop)
        return concat(self.tail, b, inverse(self.tail))

    def base(self) -> Vec:
        return endpoint(self.tail)


@dataclass(frozen=True)
class KiteWord:
    dim: int
    kites: tuple[Kite, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kites", tuple(self.kites))
        for k in self.kites:
            if k.dim != self.dim:
                raise InputError(f"kite of dim {k.dim} in a word of dim {self.dim}")

    def __len__(self) -> int:
        return len(self.kites)


@dataclass(frozen=True, eq=False)
class SurfaceSignature:
    boundary: TruncatedTensor
    gamma: PolyCurrent

    def __eq__(self, other) -> bool:
        if not isinstance(other, SurfaceSignature):
            return NotImplemented
        return self.boundary == other.boundary and self.gamma == other.gamma


def kite(tail: PLWord, loop: PLWord, sign: int = 1) -> Kite:
    k = Kite(tail, loop, sign)
    if not is_planar_loop(loop):
        raise InputError("kite loop must be a planar loop")
    return k


def identity(dim: int) -> KiteWord:
    return KiteWord(dim, ())


def validate(X: KiteWord) -> list[str]:
    """Diagnostics; an empty list means the word is well formed."""
    out = []
    for n, k in enumerate(X.kites):
        if k.tail.dim != X.dim or k.loop.dim != X.dim:
            out.append(f"kite {n}: dimension mismatch ({k.tail.dim}, {k.loop.dim} vs {X.dim})")
            continue
        if not is_loop(k.loop):
            out.append(f"kite {n}: loop does not close")
        elif not is_planar_loop(k.loop):
            out.append(f"kite {n}: loop is not planar")
    return out


def _check(X: KiteWord) -> None:
    v = validate(X)
    if v:
        raise InputError("; ".join(v))


def boundary_delta(X: KiteWord) -> PLWord:
    _check(X)
    letters: list[Vec] = []
    for k in X.kites:
        b = k.loop if k.sign == 1 else inverse(k.loop)
        letters.extend(k.tail.letters)
        letters.extend(b.letters)
        letters.extend(inverse(k.tail).letters)
    return reduce(PLWord(X.dim, tuple(letters)))


def mul(*Xs: KiteWord) -> KiteWord:
    if not Xs:
        raise InputError("mul needs at least one word")
    dim = Xs[0].dim
    if any(X.dim != dim for X in Xs):
        raise InputError("dimension mismatch")
    return KiteWord(dim, tuple(k for X in Xs for k in X.kites))


def inv(X: KiteWord) -> KiteWord:
    return KiteWord(X.dim, tuple(Kite(k.tail, k.loop, -k.sign) for k in reversed(X.kites)))


def act(x: PLWord, X: KiteWord) -> KiteWord:
    if x.dim != X.dim:
        raise InputError("dimension mismatch")
    return KiteWord(X.dim, tuple(Kite(concat(x, k.tail), k.loop, k.sign) for k in X.kites))


def triangulate_kite(k: Kite) -> SignedSoup:
    """Fan of the loop from its start point, translated to the tail end."""
    if not is_planar_loop(k.loop):
        raise InputError("kite loop must be a planar loop")
    a = k.base()
    return [(t.translate(a), k.sign) for t in triangle_fan(k.loop)]


def split_kite(k: Kite) -> list[Kite]:
    """Factor a kite into triangular kites sharing its tail."""
    pts = partial_sums(reduce(k.loop))
    parts = []
    for i in range(1, len(pts) - 2):
        u, v = pts[i], pts[i + 1]
        lp = reduce(PLWord(k.dim, (u, sub(v, u), neg(v))))
        if lp.letters:
            parts.append(Kite(k.tail, lp, k.sign))
    return parts if k.sign == 1 else list(reversed(parts))


def cone_soup(b: PLWord, base: Vec | None = None, sign: int = 1) -> SignedSoup:
    ts = triangle_fan(b)
    if base is not None:
        ts = [t.translate(base) for t in ts]
    return [(t, sign) for t in ts]


def closed_soup(X: KiteWord) -> SignedSoup:
    """Kite triangles followed by the negated cone over the boundary."""
    out: SignedSoup = []
    for k in X.kites:
        out.extend(triangulate_kite(k))
    out.extend(cone_soup(boundary_delta(X), sign=-1))
    return out


def surface_signature(X: KiteWord, level: int = 4, max_weight: int = 6, threads: int = 1) -> SurfaceSignature:
    d = boundary_delta(X)
    return SurfaceSignature(
        path_signature(d, level),
        soup_current(closed_soup(X), max_weight, X.dim, threads),
    )


def suspension_soup(a: Vec, b: PLWord) -> SignedSoup:
    """Cone of b translated by a, minus the cone of the loop a b a^-1."""
    if not is_loop(b):
        raise InputError("suspension needs a loop")
    seg = PLWord(b.dim, (tuple(a),))
    conj = concat(seg, b, inverse(seg))
    return cone_soup(b, a, 1) + cone_soup(conj, None, -1)


def edge_chain(soup: Sequence[tuple[Triangle, int]]) -> dict[tuple[Vec, Vec], int]:
    """Oriented boundary edges with multiplicity; empty iff the soup is closed."""
    out: dict[tuple[Vec, Vec], int] = {}
    for t, s in soup:
        if t.is_degenerate():
            continue
        for p, q in ((t.p0, t.p1), (t.p1, t.p2), (t.p2, t.p0)):
            key, m = ((p, q), s) if p < q else ((q, p), -s)
            out[key] = out.get(key, 0) + m
    return {k: v for k, v in out.items() if v}


def segment_chain(soup: Sequence[tuple[Triangle, int]]) -> dict:
    """Boundary 1-chain after splitting edges at every soup vertex on them.

    Exact closedness test even when adjacent triangles subdivide edges
    differently.  Collinear pieces are keyed by their supporting line and
    compared as signed measures.
    """
    verts = sorted({p for t, _ in soup if not t.is_degenerate() for p in t.points})
    acc: dict = {}
    for t, s in soup:
        if t.is_degenerate():
            continue
        for p, q in ((t.p0, t.p1), (t.p1, t.p2), (t.p2, t.p0)):
            line = make_line(p, sub(q, p))
            tp, tq = line.param(p), line.param(q)
            lo, hi = min(tp, tq), max(tp, tq)
            m = s if tq > tp else -s
            cuts = sorted({line.param(v) for v in verts if line.contains(v) and lo <= line.param(v) <= hi})
            for x, y in zip(cuts, cuts[1:]):
                key = (line, x, y)
                acc[key] = acc.get(key, 0) + m
    return {k: v for k, v in acc.items() if v}


def is_closed_soup(soup: Sequence[tuple[Triangle, int]]) -> bool:
    return not segment_chain(soup)


# -- local moves -----------------------------------------------------------

def _strip_conjugation(k: Kite) -> Kite:
    """(w, x b x^-1) -> (w x, b) while the loop starts and ends by retracing."""
    ls = list(reduce(k.loop).letters)
    tail = k.tail
    while len(ls) >= 3:
        first, last = ls[0], ls[-1]
        if not dependent(first, last) or _same_direction(first, last):
            break
        # x is the shorter of first and -last
        x = first if _shorter(first, neg(last)) else neg(last)
        tail = concat(tail, segment(x))
        ls = list(reduce(PLWord(k.dim, (sub(first, x),) + tuple(ls[1:-1]) + (add(last, x),))).letters)
    return Kite(tail, PLWord(k.dim, tuple(ls)), k.sign)


def _same_direction(u: Vec, v: Vec) -> bool:
    return sum(a * b for a, b in zip(u, v)) > 0


def _shorter(u: Vec, v: Vec) -> bool:
    return sum(a * a for a in u) <= sum(b * b for b in v)


def _try_merge(a: Kite, b: Kite) -> Kite | None:
    """(w1, b1)(w2, b2) -> (w1, b1 u b2 u^-1) with u = w1^-1 w2, if planar."""
    u = concat(inverse(a.tail), b.tail)
    l1 = a.loop if a.sign == 1 else inverse(a.loop)
    l2 = b.loop if b.sign == 1 else inverse(b.loop)
    merged = concat(l1, u, l2, inverse(u))
    if not is_planar_loop(merged):
        return None
    return Kite(a.tail, merged, 1)


def _peiffer_move_left(X: list[Kite], j: int, i: int) -> list[Kite]:
    """Move kite j to position i+1 using E_k E_j = (d(E_k) > E_j) E_k."""
    out = list(X)
    while j > i + 1:
        ek, ej = out[j - 1], out[j]
        moved = Kite(concat(ek.boundary(), ej.tail), ej.loop, ej.sign)
        out[j - 1], out[j] = moved, ek
        j -= 1
    return out


def local_simplify(X: KiteWord, budget: int = 1000) -> KiteWord:
    """Greedy simplification by local moves; returns an equivalent word.

    Moves: drop trivial kites, strip retraced loop prefixes into the tail,
    cancel or merge adjacent coplanar kites, and bring a later kite next to
    an earlier one by Peiffer conjugation when that enables a merge.  The
    number of attempted moves is bounded by the budget.
    """
    _check(X)
    ks = [_strip_conjugation(k) for k in X.kites if reduce(k.loop).letters]
    moves = 0
    changed = True
    while changed and moves < budget:
        changed = False
        for i in range(len(ks)):
            if changed or moves >= budget:
                break
            for j in range(i + 1, len(ks)):
                moves += 1
                if moves > budget:
                    break
                cand = _peiffer_move_left(ks, j, i) if j > i + 1 else ks
                m = _try_merge(cand[i], cand[i + 1])
                if m is None:
                    continue
                new = cand[:i] + ([_strip_conjugation(m)] if reduce(m.loop).letters else []) + cand[i + 2:]
                if len(new) < len(ks):
                    ks = new
                    changed = True
                    break
    return KiteWord(X.dim, tuple(ks))


def fold(tail: PLWord, loop: PLWord) -> KiteWord:
    return KiteWord(loop.dim, (Kite(tail, loop, 1), Kite(tail, loop, -1)))


def translate_soup(soup: Sequence[tuple[Triangle, int]], a: Vec) -> SignedSoup:
    return [(t.translate(a), s) for t, s in soup]


def gamma_after_action(x: PLWord, X: KiteWord, max_weight: int) -> PolyCurrent:
    """Right-hand side of the action identity, computed geometrically."""
    a = endpoint(x)
    g = soup_current(closed_soup(X), max_weight, X.dim)
    return translate_current(g, a, max_weight) + soup_current(
        suspension_soup(a, boundary_delta(X)), max_weight, X.dim
    )
