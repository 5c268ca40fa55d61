"""Exact rational arithmetic, linear algebra and affine predicates.

Vectors are plain tuples of :class:`fractions.Fraction`.  Everything here is a
pure function on immutable values.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar

Vec = tuple[Fraction, ...]
Matrix = list[list[Fraction]]

T = TypeVar("T")
R = TypeVar("R")


class InputError(ValueError):
    """Raised on malformed or inconsistent input data."""


def rat(x) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` string into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise InputError("empty rational")
        if "/" in s:
            num, _, den = s.partition("/")
            try:
                p, q = int(num), int(den)
            except ValueError as exc:
                raise InputError(f"not a rational: {x!r}") from exc
            if q == 0:
                raise InputError(f"zero denominator: {x!r}")
            return Fraction(p, q)
        try:
            return Fraction(int(s))
        except ValueError as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"not a rational: {x!r}")


def vec(*xs) -> Vec:
    return tuple(rat(x) for x in xs)


def zero(dim: int) -> Vec:
    return (Fraction(0),) * dim


def basis(dim: int, i: int) -> Vec:
    return tuple(Fraction(1 if k == i else 0) for k in range(dim))


def add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def neg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def scale(c, u: Vec) -> Vec:
    return tuple(c * a for a in u)


def is_zero(u: Vec) -> bool:
    return not any(u)


def vsum(vs: Iterable[Vec], dim: int) -> Vec:
    out = [Fraction(0)] * dim
    for v in vs:
        for k, a in enumerate(v):
            out[k] += a
    return tuple(out)


def dependent(u: Vec, v: Vec) -> bool:
    """True iff u and v are linearly dependent (all 2x2 minors vanish)."""
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


def check_dims(vs: Sequence[Vec], dim: int | None = None) -> int:
    dims = {len(v) for v in vs}
    if dim is not None:
        dims.add(dim)
    if len(dims) > 1:
        raise InputError(f"dimension mismatch: {sorted(dims)}")
    return dims.pop() if dims else 0


# -- row reduction ---------------------------------------------------------

def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; pivots are chosen in column order."""
    m = [list(map(Fraction, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows)[1])


def span_dim(vs: Sequence[Vec]) -> int:
    """Rank of a list of vectors by exact elimination."""
    check_dims(vs)
    return rank(vs)


def span_basis(vs: Sequence[Vec]) -> tuple[Vec, ...]:
    """Canonical (RREF) basis of the span; equal spans give equal tuples."""
    if not vs:
        return ()
    rows, _ = rref(vs)
    return tuple(tuple(r) for r in rows)


def solve_linear(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vec | None:
    """Pivot solution of A x = b (free variables set to zero), or None."""
    if not A:
        return None if any(b) else ()
    n = len(A[0])
    aug = [list(row) + [rat(bi)] for row, bi in zip(A, b)]
    m, pivots = rref(aug, n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(m, pivots):
        x[c] = row[n]
    return tuple(x)


def kernel_basis(A: Sequence[Sequence[Fraction]], ncols: int | None = None) -> list[Vec]:
    """Basis of the null space, one vector per free column in column order."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    m, pivots = rref(A, ncols) if A else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    out = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, c in zip(m, pivots):
            x[c] = -row[f]
        out.append(tuple(x))
    return out


def matvec(A: Sequence[Sequence[Fraction]], x: Sequence[Fraction]) -> Vec:
    return tuple(sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in A)


def det2(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def sign(x) -> int:
    return (x > 0) - (x < 0)


# -- geometric objects -----------------------------------------------------

@dataclass(frozen=True)
class Triangle:
    p0: Vec
    p1: Vec
    p2: Vec

    @property
    def points(self) -> tuple[Vec, Vec, Vec]:
        return (self.p0, self.p1, self.p2)

    def is_degenerate(self) -> bool:
        return dependent(sub(self.p1, self.p0), sub(self.p2, self.p0))

    def translate(self, a: Vec) -> "Triangle":
        return Triangle(add(self.p0, a), add(self.p1, a), add(self.p2, a))

    def reversed(self) -> "Triangle":
        return Triangle(self.p0, self.p2, self.p1)


def _reduce_point(p: Vec, dirs: Sequence[Vec], pivots: Sequence[int]) -> Vec:
    # subtract direction multiples so that pivot coordinates become zero
    out = list(p)
    for d, c in zip(dirs, pivots):
        f = out[c]
        if f:
            out = [a - f * b for a, b in zip(out, d)]
    return tuple(out)


@dataclass(frozen=True)
class AffinePlane:
    """Plane with RREF direction basis and base point reduced modulo it.

    The ordered pair (dir1, dir2) defines the positive orientation.
    """

    base: Vec
    dir1: Vec
    dir2: Vec
    orientation: int = 1

    @property
    def pivots(self) -> tuple[int, int]:
        return (_first_nonzero(self.dir1), _first_nonzero(self.dir2))

    def coords(self, p: Vec) -> tuple[Fraction, Fraction]:
        """Coordinates of a point of the plane in the (dir1, dir2) frame."""
        c1, c2 = self.pivots
        return (p[c1] - self.base[c1], p[c2] - self.base[c2])

    def point(self, x: Fraction, y: Fraction) -> Vec:
        return tuple(b + x * u + y * v for b, u, v in zip(self.base, self.dir1, self.dir2))

    def contains(self, p: Vec) -> bool:
        x, y = self.coords(p)
        return self.point(x, y) == tuple(p)

    def contains_direction(self, d: Vec) -> bool:
        c1, c2 = self.pivots
        return add(scale(d[c1], self.dir1), scale(d[c2], self.dir2)) == tuple(d)

    def canonicalize(self) -> "AffinePlane":
        return make_plane(self.base, (self.dir1, self.dir2))


def _first_nonzero(v: Vec) -> int:
    return next(i for i, a in enumerate(v) if a != 0)


def make_plane(point: Vec, dirs: Sequence[Vec]) -> AffinePlane:
    rows, piv = rref(dirs, len(point))
    if len(rows) != 2:
        raise InputError("plane directions must span a 2-dimensional space")
    d1, d2 = tuple(rows[0]), tuple(rows[1])
    return AffinePlane(_reduce_point(tuple(point), (d1, d2), piv), d1, d2)


@dataclass(frozen=True)
class AffineLine:
    base: Vec
    dir: Vec

    def param(self, p: Vec) -> Fraction:
        c = _first_nonzero(self.dir)
        return p[c] - self.base[c]

    def point(self, t: Fraction) -> Vec:
        return tuple(b + t * d for b, d in zip(self.base, self.dir))

    def contains(self, p: Vec) -> bool:
        return self.point(self.param(p)) == tuple(p)

    def canonicalize(self) -> "AffineLine":
        return make_line(self.base, self.dir)


def make_line(point: Vec, direction: Vec) -> AffineLine:
    if is_zero(direction):
        raise InputError("line direction must be nonzero")
    c = _first_nonzero(direction)
    d = scale(1 / direction[c], direction)
    return AffineLine(_reduce_point(tuple(point), (d,), (c,)), d)


def line_through(p: Vec, q: Vec) -> AffineLine:
    return make_line(p, sub(q, p))


def plane_of_triangle(t: Triangle) -> AffinePlane:
    if t.is_degenerate():
        raise InputError("degenerate triangle has no plane")
    return make_plane(t.p0, (sub(t.p1, t.p0), sub(t.p2, t.p0)))


def canonical_orientation_sign(t: Triangle, h: AffinePlane | None = None) -> int:
    """Sign of det(p1-p0, p2-p0) in the (dir1, dir2) frame of the plane."""
    if h is None:
        h = plane_of_triangle(t)
    elif t.is_degenerate():
        raise InputError("degenerate triangle has no orientation")
    if not all(h.contains(p) for p in t.points):
        raise InputError("triangle does not lie in the plane")
    a = h.coords(t.p0)
    b = h.coords(t.p1)
    c = h.coords(t.p2)
    return sign(det2((b[0] - a[0], b[1] - a[1]), (c[0] - a[0], c[1] - a[1])))


def signed_area2(t: Triangle, h: AffinePlane) -> Fraction:
    """Signed area in plane coordinates."""
    a, b, c = (h.coords(p) for p in t.points)
    return det2((b[0] - a[0], b[1] - a[1]), (c[0] - a[0], c[1] - a[1])) / 2


# -- small parallel helper -------------------------------------------------

def pmap(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> list[R]:
    """Order-preserving map, optionally on a thread pool."""
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def fmt_rat(x: Fraction) -> str:
    return str(x)
