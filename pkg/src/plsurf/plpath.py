"""Piecewise linear paths as words of edge vectors.

Two rewrite rules act on words: adjacent linearly dependent letters merge
into their sum, and zero letters disappear.  Every word has a unique
minimal form, which is what :func:`reduce` computes.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    InputError,
    Triangle,
    Vec,
    add,
    check_dims,
    dependent,
    is_zero,
    matvec,
    rat,
    neg,
    scale,
    span_basis,
    span_dim,
    sub,
    vec,
    vsum,
    zero,
)


@dataclass(frozen=True)
class PLWord:
    dim: int
    letters: tuple[Vec, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dim must be positive")
        for v in self.letters:
            if len(v) != self.dim:
                raise InputError(f"letter {v} does not have dim {self.dim}")

    def __len__(self) -> int:
        return len(self.letters)

    def is_minimal(self) -> bool:
        if any(is_zero(v) for v in self.letters):
            return False
        return not any(dependent(a, b) for a, b in zip(self.letters, self.letters[1:]))


def word(dim: int, letters: Sequence[Sequence]) -> PLWord:
    return PLWord(dim, tuple(vec(*v) for v in letters))


def empty(dim: int) -> PLWord:
    return PLWord(dim)


def reduce(w: PLWord) -> PLWord:
    """Leftmost stack reduction to the minimal representative."""
    stack: list[Vec] = []
    for v in w.letters:
        if is_zero(v):
            continue
        stack.append(v)
        while len(stack) >= 2 and dependent(stack[-2], stack[-1]):
            s = add(stack.pop(), stack.pop())
            if not is_zero(s):
                stack.append(s)
    return PLWord(w.dim, tuple(stack))


def equivalent(a: PLWord, b: PLWord) -> bool:
    """Equality in the path group (as opposed to equality of words)."""
    return reduce(a) == reduce(b)


# -- explicit rewriting, used to exercise confluence ------------------------

def rewrite_sites(w: PLWord) -> list[tuple[str, int]]:
    """All applicable single rewrites: ("drop", i) or ("merge", i)."""
    sites: list[tuple[str, int]] = []
    for i, v in enumerate(w.letters):
        if is_zero(v):
            sites.append(("drop", i))
    for i in range(len(w.letters) - 1):
        a, b = w.letters[i], w.letters[i + 1]
        if not is_zero(a) and not is_zero(b) and dependent(a, b):
            sites.append(("merge", i))
    return sites


def apply_rewrite(w: PLWord, site: tuple[str, int]) -> PLWord:
    kind, i = site
    ls = list(w.letters)
    if kind == "drop":
        if not is_zero(ls[i]):
            raise InputError("drop site is not a zero letter")
        del ls[i]
    elif kind == "merge":
        if not dependent(ls[i], ls[i + 1]):
            raise InputError("merge site is not a dependent pair")
        ls[i:i + 2] = [add(ls[i], ls[i + 1])]
    else:
        raise InputError(f"unknown rewrite {kind}")
    return PLWord(w.dim, tuple(ls))


def reduce_with_schedule(w: PLWord, rng: random.Random) -> PLWord:
    """Rewrite at randomly chosen sites until no rule applies."""
    while True:
        sites = rewrite_sites(w)
        if not sites:
            return w
        w = apply_rewrite(w, rng.choice(sites))


# -- group structure -------------------------------------------------------

def _same_dim(a: PLWord, b: PLWord) -> None:
    if a.dim != b.dim:
        raise InputError(f"dimension mismatch: {a.dim} vs {b.dim}")


def concat(*ws: PLWord) -> PLWord:
    if not ws:
        raise InputError("concat needs at least one word")
    for w in ws[1:]:
        _same_dim(ws[0], w)
    return reduce(PLWord(ws[0].dim, tuple(v for w in ws for v in w.letters)))


def inverse(a: PLWord) -> PLWord:
    return PLWord(a.dim, tuple(neg(v) for v in reversed(a.letters)))


def endpoint(a: PLWord) -> Vec:
    return vsum(a.letters, a.dim)


def span(a: PLWord) -> tuple[Vec, ...]:
    """RREF basis of the span of the minimal representative."""
    return span_basis(reduce(a).letters)


def span_dimension(a: PLWord) -> int:
    return span_dim(reduce(a).letters)


def is_loop(a: PLWord) -> bool:
    return is_zero(endpoint(a))


def is_planar_loop(a: PLWord) -> bool:
    return is_loop(a) and span_dimension(a) <= 2


def segment(v: Vec) -> PLWord:
    return reduce(PLWord(len(v), (tuple(v),)))


def partial_sums(a: PLWord) -> list[Vec]:
    pts = [zero(a.dim)]
    for v in a.letters:
        pts.append(add(pts[-1], v))
    return pts


def loop_generator(v: Vec, u: Vec) -> PLWord:
    """The triangular loop (v, u - v, -u)."""
    return reduce(PLWord(len(v), (tuple(v), sub(u, v), neg(u))))


def triangle_fan(b: PLWord) -> list[Triangle]:
    """Fan triangles [0, p_i, p_(i+1)] of a loop, degenerate ones dropped."""
    if not is_loop(b):
        raise InputError("triangle_fan needs a loop")
    pts = partial_sums(reduce(b))
    o = zero(b.dim)
    out = []
    for i in range(1, len(pts) - 2):
        t = Triangle(o, pts[i], pts[i + 1])
        if not t.is_degenerate():
            out.append(t)
    return out


def apply_linear_map(M: Sequence[Sequence], a: PLWord) -> PLWord:
    if not M or any(len(row) != a.dim for row in M):
        raise InputError("matrix shape does not match the word dimension")
    Mq = [[rat(x) for x in row] for row in M]
    return reduce(PLWord(len(Mq), tuple(matvec(Mq, v) for v in a.letters)))


def free_group_embed(images: Mapping[str, Vec], fword: Sequence[tuple[str, int]]) -> PLWord:
    """Image of a free-group word (letter, exponent) under letter -> vector.

    Images must be nonzero and pairwise independent.
    """
    keys = sorted(images)
    if not keys:
        raise InputError("empty alphabet")
    dim = check_dims([tuple(images[k]) for k in keys])
    for i, k in enumerate(keys):
        if is_zero(images[k]):
            raise InputError(f"image of {k} is zero")
        for k2 in keys[i + 1:]:
            if dependent(images[k], images[k2]):
                raise InputError(f"images of {k} and {k2} are dependent")
    letters = []
    for g, n in fword:
        if g not in images:
            raise InputError(f"unknown letter {g}")
        letters.append(scale(Fraction(n), images[g]))
    return reduce(PLWord(dim, tuple(letters)))
