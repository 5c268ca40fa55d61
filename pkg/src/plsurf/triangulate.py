"""Compatible triangulations, compatible representatives and face chains.

The arrangement is computed plane by plane.  For each supporting plane of
the input triangles we collect the lines that must become unions of edges:
extended triangle sides, input edges in the plane and intersections with the
other planes.  Triangles are cut by every line into convex cells, and each
cell is triangulated using all arrangement vertices on its boundary.  Points
that end up strictly inside a cell (transverse crossings of edges, isolated
contacts) get an extra line through them first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .core import (
    AffinePlane,
    InputError,
    Triangle,
    Vec,
    add,
    det2,
    kernel_basis,
    make_plane,
    pmap,
    rank,
    sign,
    solve_linear,
    sub,
)
from .plpath import PLWord, concat, endpoint, inverse, partial_sums, reduce
from .plsurface import Kite, KiteWord, boundary_delta, split_kite

P2 = tuple[Fraction, Fraction]
# a line a*x + b*y = c in plane coordinates, normalized
Line2 = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class PLSC:
    vertices: tuple[Vec, ...]
    edges: tuple[tuple[int, int], ...]
    faces: tuple[tuple[int, int, int], ...]

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    def face_triangle(self, f: tuple[int, int, int]) -> Triangle:
        return Triangle(*(self.vertices[i] for i in f))

    def edge_points(self, e: tuple[int, int]) -> tuple[Vec, Vec]:
        return self.vertices[e[0]], self.vertices[e[1]]


@dataclass(frozen=True)
class SimplexMapping:
    entries: tuple[tuple[int, tuple[int, int, int], int], ...]


@dataclass(frozen=True)
class Provenance:
    """Which complex simplices came from which kite of the input word."""

    faces: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)


def make_plsc(vertices: Iterable[Vec], edges: Iterable[tuple[Vec, Vec]], faces: Iterable[Triangle]) -> PLSC:
    """Assemble a complex from geometric simplices; closes under faces."""
    faces = [t for t in faces if not t.is_degenerate()]
    edges = [(p, q) for p, q in edges if p != q]
    vs = set(vertices)
    for p, q in edges:
        vs.update((p, q))
    for t in faces:
        vs.update(t.points)
    order = sorted(vs)
    idx = {v: n for n, v in enumerate(order)}
    fs = {tuple(sorted(idx[p] for p in t.points)) for t in faces}
    es = {tuple(sorted((idx[p], idx[q]))) for p, q in edges}
    for a, b, c in fs:
        es.update(((a, b), (a, c), (b, c)))
    return PLSC(tuple(order), tuple(sorted(es)), tuple(sorted(fs)))


# -- exact primitives ------------------------------------------------------

def _bbox(pts: Sequence[Vec]) -> tuple[Vec, Vec]:
    return tuple(map(min, zip(*pts))), tuple(map(max, zip(*pts)))


def _boxes_meet(a, b) -> bool:
    return all(lo1 <= hi2 and lo2 <= hi1 for lo1, hi1, lo2, hi2 in zip(a[0], a[1], b[0], b[1]))


def on_segment(p: Vec, a: Vec, b: Vec) -> bool:
    """Closed segment membership."""
    d = sub(b, a)
    w = sub(p, a)
    k = next(i for i, x in enumerate(d) if x)
    lam = w[k] / d[k]
    if not 0 <= lam <= 1:
        return False
    return all(w[i] == lam * d[i] for i in range(len(d)))


def _solve_params(base: Vec, dirs: Sequence[Vec], p: Vec) -> tuple[Fraction, ...] | None:
    """Unique coefficients with base + sum c_i dirs_i = p, or None."""
    A = [[d[r] for d in dirs] for r in range(len(p))]
    return solve_linear(A, sub(p, base))


def in_triangle(p: Vec, t: Triangle) -> bool:
    """Closed triangle membership."""
    c = _solve_params(t.p0, (sub(t.p1, t.p0), sub(t.p2, t.p0)), p)
    return c is not None and c[0] >= 0 and c[1] >= 0 and c[0] + c[1] <= 1


def segment_crossing(a: Vec, b: Vec, c: Vec, d: Vec) -> Vec | None:
    """Single intersection point of two non-parallel closed segments."""
    u, v = sub(b, a), sub(d, c)
    if rank([u, v]) < 2:
        return None
    A = [[u[r], -v[r]] for r in range(len(a))]
    x = solve_linear(A, sub(c, a))
    if x is None:
        return None
    lam, mu = x
    if 0 <= lam <= 1 and 0 <= mu <= 1:
        return tuple(p + lam * q for p, q in zip(a, u))
    return None


def segment_triangle_crossing(a: Vec, b: Vec, t: Triangle) -> Vec | None:
    """Transverse intersection point of a segment with a closed triangle."""
    d = sub(b, a)
    e1, e2 = sub(t.p1, t.p0), sub(t.p2, t.p0)
    if rank([e1, e2, d]) < 3:
        return None
    A = [[d[r], -e1[r], -e2[r]] for r in range(len(a))]
    x = solve_linear(A, sub(t.p0, a))
    if x is None:
        return None
    lam, s, u = x
    if 0 <= lam <= 1 and s >= 0 and u >= 0 and s + u <= 1:
        return tuple(p + lam * q for p, q in zip(a, d))
    return None


# -- compatibility check ---------------------------------------------------

def compatibility_violations(C: PLSC, limit: int = 1) -> list[str]:
    V = C.vertices
    edges = list(C.edges)
    faces = list(C.faces)
    ebox = [_bbox([V[i], V[j]]) for i, j in edges]
    fbox = [_bbox([V[i] for i in f]) for f in faces]
    tris = [C.face_triangle(f) for f in faces]
    out: list[str] = []

    def bad(msg: str) -> bool:
        out.append(msg)
        return len(out) >= limit

    if len(set(V)) != len(V):
        if bad("duplicate vertices"):
            return out
    for t, f in zip(tris, faces):
        if t.is_degenerate() and bad(f"degenerate face {f}"):
            return out
    for n, v in enumerate(V):
        vb = (v, v)
        for e, bx in zip(edges, ebox):
            if n not in e and _boxes_meet(vb, bx) and on_segment(v, *C.edge_points(e)):
                if bad(f"vertex {n} lies on edge {e}"):
                    return out
        for f, t, bx in zip(faces, tris, fbox):
            if n not in f and _boxes_meet(vb, bx) and in_triangle(v, t):
                if bad(f"vertex {n} lies in face {f}"):
                    return out
    for x in range(len(edges)):
        for y in range(x + 1, len(edges)):
            if not _boxes_meet(ebox[x], ebox[y]):
                continue
            p = segment_crossing(*C.edge_points(edges[x]), *C.edge_points(edges[y]))
            if p is not None and not (p in C.edge_points(edges[x]) and p in C.edge_points(edges[y])):
                if bad(f"edges {edges[x]} and {edges[y]} cross"):
                    return out
    for e, eb in zip(edges, ebox):
        a, b = C.edge_points(e)
        for f, t, fb in zip(faces, tris, fbox):
            if not _boxes_meet(eb, fb):
                continue
            p = segment_triangle_crossing(a, b, t)
            if p is not None and not (p in (a, b) and p in t.points):
                if bad(f"edge {e} crosses face {f}"):
                    return out
    return out


def is_compatible(C: PLSC) -> bool:
    return not compatibility_violations(C)


# -- plane geometry --------------------------------------------------------

def _line2(p: P2, q: P2) -> Line2:
    a, b = q[1] - p[1], p[0] - q[0]
    c = a * p[0] + b * p[1]
    f = a if a != 0 else b
    return (a / f, b / f, c / f)


def _line2_dir(p: P2, d: P2) -> Line2:
    return _line2(p, (p[0] + d[0], p[1] + d[1]))


def _eval(line: Line2, p: P2) -> Fraction:
    return line[0] * p[0] + line[1] * p[1] - line[2]


def _meet(l1: Line2, l2: Line2) -> P2 | None:
    det = l1[0] * l2[1] - l1[1] * l2[0]
    if det == 0:
        return None
    return ((l1[2] * l2[1] - l1[1] * l2[2]) / det, (l1[0] * l2[2] - l1[2] * l2[0]) / det)


def _area2(a: P2, b: P2, c: P2) -> Fraction:
    return det2((b[0] - a[0], b[1] - a[1]), (c[0] - a[0], c[1] - a[1]))


def _in_tri2(p: P2, t: Sequence[P2]) -> bool:
    s = [_area2(t[i], t[(i + 1) % 3], p) for i in range(3)]
    return all(x >= 0 for x in s) or all(x <= 0 for x in s)


def _on_seg2(p: P2, a: P2, b: P2) -> bool:
    if _area2(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def plane_intersection(h: AffinePlane, g: AffinePlane) -> tuple[str, Vec | None, Vec | None]:
    """("line", point, dir), ("point", point, None), ("none", ...) or ("same", ...)."""
    n = len(h.base)
    A = [[h.dir1[r], h.dir2[r], -g.dir1[r], -g.dir2[r]] for r in range(n)]
    x = solve_linear(A, sub(g.base, h.base))
    if x is None:
        return ("none", None, None)
    p = tuple(b + x[0] * u + x[1] * v for b, u, v in zip(h.base, h.dir1, h.dir2))
    ker = kernel_basis(A, 4)
    dirs = [tuple(k[0] * u + k[1] * v for u, v in zip(h.dir1, h.dir2)) for k in ker]
    r = rank(dirs) if dirs else 0
    if r == 0:
        return ("point", p, None)
    if r == 1:
        d = next(d for d in dirs if any(d))
        return ("line", p, d)
    return ("same", p, None)


def _cut(poly: list[P2], line: Line2) -> list[list[P2]]:
    vals = [_eval(line, p) for p in poly]
    if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
        return [poly]
    pos: list[P2] = []
    negs: list[P2] = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        vp, vq = vals[i], vals[(i + 1) % m]
        if vp >= 0:
            pos.append(p)
        if vp <= 0:
            negs.append(p)
        if (vp > 0 and vq < 0) or (vp < 0 and vq > 0):
            t = vp / (vp - vq)
            x = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            pos.append(x)
            negs.append(x)
    return [pos, negs]


def _ccw(poly: list[P2]) -> list[P2]:
    a = sum((_area2(poly[0], poly[i], poly[i + 1]) for i in range(1, len(poly) - 1)), Fraction(0))
    return poly if a > 0 else list(reversed(poly))


def _boundary_ring(corners: list[P2], pts: Sequence[P2]) -> list[P2]:
    """Corners (ccw) with every point lying on a side inserted in order."""
    ring: list[P2] = []
    m = len(corners)
    for i in range(m):
        a, b = corners[i], corners[(i + 1) % m]
        ring.append(a)
        side = [p for p in pts if p != a and p != b and _on_seg2(p, a, b)]
        k = 0 if a[0] != b[0] else 1
        side.sort(key=lambda p: (p[k] - a[k]) / (b[k] - a[k]))
        ring.extend(side)
    return ring


def ear_clip(ring: list[P2]) -> list[tuple[P2, P2, P2]]:
    """Triangulate a convex ring whose sides may carry extra vertices.

    An ear is a strict corner whose chord carries no other ring vertex.
    Candidates are tried starting from the lexicographically least vertex.
    """
    ring = list(ring)
    out = []
    while len(ring) > 3:
        m = len(ring)
        start = min(range(m), key=lambda i: ring[i])
        for s in range(m):
            i = (start + s) % m
            a, b, c = ring[i - 1], ring[i], ring[(i + 1) % m]
            if _area2(a, b, c) <= 0:
                continue
            if any(_on_seg2(p, a, c) for p in ring if p not in (a, b, c)):
                continue
            out.append((a, b, c))
            del ring[i]
            break
        else:
            raise AssertionError("no ear found in convex cell")
    if _area2(*ring) != 0:
        out.append(tuple(ring))
    return out


@dataclass
class _PlaneData:
    plane: AffinePlane
    tris: list[Triangle]
    tris2: list[tuple[P2, P2, P2]]
    lines: set[Line2]

    def in_content(self, p2: P2) -> bool:
        return any(_in_tri2(p2, t) for t in self.tris2)

    def on_line(self, p2: P2) -> bool:
        return any(_eval(line, p2) == 0 for line in self.lines)


def _arrangement_points(pd: _PlaneData, lines: Iterable[Line2], against: Iterable[Line2]) -> set[Vec]:
    out = set()
    against = list(against)
    for l1 in lines:
        for l2 in against:
            if l1 == l2:
                continue
            x = _meet(l1, l2)
            if x is not None and pd.in_content(x):
                out.add(pd.plane.point(*x))
    return out


def compatible_triangulation(E: Sequence[tuple[Vec, Vec]], P: Sequence[Triangle], threads: int = 1) -> PLSC:
    """Common refinement of edges and triangles into a compatible complex."""
    segs = sorted({tuple(sorted((tuple(p), tuple(q)))) for p, q in E if tuple(p) != tuple(q)})
    for t in P:
        if t.is_degenerate():
            raise InputError("input triangles must be nondegenerate")
    base_pts: set[Vec] = {p for s in segs for p in s} | {p for t in P for p in t.points}
    if not P and not segs:
        return make_plsc(base_pts, [], [])

    groups: dict[AffinePlane, list[Triangle]] = {}
    for t in P:
        h = make_plane(t.p0, (sub(t.p1, t.p0), sub(t.p2, t.p0)))
        groups.setdefault(h, []).append(t)
    planes = sorted(groups, key=lambda h: (h.dir1, h.dir2, h.base))
    data: list[_PlaneData] = []
    for h in planes:
        tris = groups[h]
        tris2 = [tuple(h.coords(p) for p in t.points) for t in tris]
        lines = set()
        for t2 in tris2:
            for i in range(3):
                lines.add(_line2(t2[i], t2[(i + 1) % 3]))
        for p, q in segs:
            if h.contains(p) and h.contains(q):
                lines.add(_line2(h.coords(p), h.coords(q)))
        data.append(_PlaneData(h, tris, tris2, lines))

    C0 = set(base_pts)
    pairwise_points = []
    for x, y in combinations(range(len(data)), 2):
        kind, p, d = plane_intersection(data[x].plane, data[y].plane)
        if kind == "line":
            for pd in (data[x], data[y]):
                h = pd.plane
                pd.lines.add(_line2(h.coords(p), h.coords(add(p, d))))
        elif kind == "point":
            pairwise_points.append((p, x, y))
    for p, x, y in pairwise_points:
        if data[x].in_content(data[x].plane.coords(p)) and data[y].in_content(data[y].plane.coords(p)):
            C0.add(p)
    for pd in data:
        ls = sorted(pd.lines)
        C0 |= _arrangement_points(pd, ls, ls)
    seg_box = [_bbox(s) for s in segs]
    for (p, q), sb in zip(segs, seg_box):
        for pd in data:
            h = pd.plane
            if h.contains(p) and h.contains(q):
                continue
            for t in pd.tris:
                if _boxes_meet(sb, _bbox(t.points)):
                    x = segment_triangle_crossing(p, q, t)
                    if x is not None:
                        C0.add(x)
    for x, y in combinations(range(len(segs)), 2):
        if _boxes_meet(seg_box[x], seg_box[y]):
            pt = segment_crossing(*segs[x], *segs[y])
            if pt is not None:
                C0.add(pt)

    # extra lines through points that no line of their plane passes through
    for pd in data:
        h = pd.plane
        local = [h.coords(p) for p in C0 if h.contains(p)]
        local = [p for p in local if pd.in_content(p)]
        stray = sorted(p for p in local if not pd.on_line(p))
        new_lines: list[Line2] = []
        for p in stray:
            if any(_eval(line, p) == 0 for line in new_lines):
                continue
            others = [q for q in local if q != p]
            for k in range(1, 64):
                d = (Fraction(1), Fraction(k - 1)) if k > 1 else (Fraction(1), Fraction(0))
                line = _line2_dir(p, d)
                if not any(_eval(line, q) == 0 for q in others):
                    break
            new_lines.append(line)
        if new_lines:
            C0 |= _arrangement_points(pd, new_lines, sorted(pd.lines | set(new_lines)))
            pd.lines |= set(new_lines)

    C0_sorted = sorted(C0)

    def plane_faces(pd: _PlaneData) -> list[Triangle]:
        h = pd.plane
        local = [h.coords(p) for p in C0_sorted if h.contains(p)]
        local = [p for p in local if pd.in_content(p)]
        lines = sorted(pd.lines)
        cells: dict[frozenset, list[P2]] = {}
        for t2 in pd.tris2:
            polys = [list(t2)]
            for line in lines:
                nxt = []
                for poly in polys:
                    nxt.extend(_cut(poly, line))
                polys = nxt
            for poly in polys:
                poly = _dedupe_ring(poly)
                if len(poly) < 3:
                    continue
                key = frozenset(poly)
                if key not in cells:
                    cells[key] = _ccw(poly)
        out = []
        for key in sorted(cells, key=lambda k: sorted(k)):
            ring = _boundary_ring(_strict_corners(cells[key]), local)
            for a, b, c in ear_clip(ring):
                out.append(Triangle(h.point(*a), h.point(*b), h.point(*c)))
        return out

    faces = [t for part in pmap(plane_faces, data, threads) for t in part]
    edges = []
    for p, q in segs:
        on = sorted((x for x in C0_sorted if on_segment(x, p, q)), key=lambda x: _param(x, p, q))
        edges.extend(zip(on, on[1:]))
    return make_plsc(base_pts, edges, faces)


def _param(x: Vec, p: Vec, q: Vec) -> Fraction:
    d = sub(q, p)
    k = next(i for i, a in enumerate(d) if a)
    return (x[k] - p[k]) / d[k]


def _dedupe_ring(poly: list[P2]) -> list[P2]:
    out: list[P2] = []
    for p in poly:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _strict_corners(poly: list[P2]) -> list[P2]:
    m = len(poly)
    return [poly[i] for i in range(m) if _area2(poly[i - 1], poly[i], poly[(i + 1) % m]) != 0]


# -- postconditions --------------------------------------------------------

def triangulation_violations(E: Sequence[tuple[Vec, Vec]], P: Sequence[Triangle], C: PLSC) -> list[str]:
    """Containment, coverage and conservation checks for an output complex."""
    out = compatibility_violations(C)
    tris = [C.face_triangle(f) for f in C.faces]
    segs = [(tuple(p), tuple(q)) for p, q in E if tuple(p) != tuple(q)]
    for f, t in zip(C.faces, tris):
        if not any(all(in_triangle(p, T) for p in t.points) for T in P):
            out.append(f"face {f} is not contained in an input triangle")
    for e in C.edges:
        a, b = C.edge_points(e)
        if not (any(on_segment(a, p, q) and on_segment(b, p, q) for p, q in segs)
                or any(in_triangle(a, T) and in_triangle(b, T) for T in P)):
            out.append(f"edge {e} is not contained in an input simplex")
    face_planes = {}
    for T in P:
        h = make_plane(T.p0, (sub(T.p1, T.p0), sub(T.p2, T.p0)))
        area = abs(_area2(*(h.coords(p) for p in T.points)))
        got = Fraction(0)
        for f, t in zip(C.faces, tris):
            if all(in_triangle(p, T) for p in t.points):
                got += abs(_area2(*(h.coords(p) for p in t.points)))
        face_planes[T] = h
        if got != area:
            out.append(f"area of input triangle {T} is not conserved: {got} vs {area}")
    for p, q in segs:
        got = Fraction(0)
        for e in C.edges:
            a, b = C.edge_points(e)
            if on_segment(a, p, q) and on_segment(b, p, q):
                got += abs(_param(b, p, q) - _param(a, p, q))
        if got != 1:
            out.append(f"edge {(p, q)} is not covered exactly: {got}")
    for T in P:
        for p, q in ((T.p0, T.p1), (T.p1, T.p2), (T.p2, T.p0)):
            got = Fraction(0)
            for e in C.edges:
                a, b = C.edge_points(e)
                if on_segment(a, p, q) and on_segment(b, p, q):
                    got += abs(_param(b, p, q) - _param(a, p, q))
            if got != 1:
                out.append(f"side {(p, q)} of an input triangle is not covered exactly: {got}")
    return out


# -- kite words over a complex ---------------------------------------------

def _triangular_kites(X: KiteWord) -> list[tuple[int, Kite]]:
    out = []
    for n, k in enumerate(X.kites):
        for part in split_kite(k):
            out.append((n, part))
    return out


def _kite_triangle(k: Kite) -> Triangle:
    a = endpoint(k.tail)
    pts = partial_sums(reduce(k.loop))
    return Triangle(a, add(a, pts[1]), add(a, pts[2]))


def _tail_segments(w: PLWord) -> list[tuple[Vec, Vec]]:
    pts = partial_sums(w)
    return list(zip(pts, pts[1:]))


def build_plsc(X: KiteWord, threads: int = 1) -> tuple[PLSC, Provenance]:
    """Complex of the tails and triangles of the fan-split word."""
    parts = _triangular_kites(X)
    E: list[tuple[Vec, Vec]] = []
    P: list[Triangle] = []
    src_e: list[int] = []
    src_f: list[int] = []
    for n, k in parts:
        for s in _tail_segments(k.tail):
            E.append(s)
            src_e.append(n)
        P.append(_kite_triangle(k))
        src_f.append(n)
    if X.dim and not E and not P:
        return make_plsc([], [], []), Provenance()
    C = make_plsc([], E, P)
    idx = {v: i for i, v in enumerate(C.vertices)}
    faces: dict = {}
    for t, n in zip(P, src_f):
        f = tuple(sorted(idx[p] for p in t.points))
        faces.setdefault(f, []).append(n)
    edges: dict = {}
    for (p, q), n in zip(E, src_e):
        e = tuple(sorted((idx[p], idx[q])))
        edges.setdefault(e, []).append(n)
    return C, Provenance(faces, edges)


class _Skeleton:
    def __init__(self, C: PLSC):
        self.C = C
        self.index = {v: i for i, v in enumerate(C.vertices)}
        self.edge_set = set(C.edges)

    def refine_segment(self, p: Vec, q: Vec) -> list[Vec]:
        lo, hi = _bbox([p, q])
        on = [v for v in self.C.vertices
              if all(a <= x <= b for a, x, b in zip(lo, v, hi)) and on_segment(v, p, q)]
        on.sort(key=lambda v: _param(v, p, q))
        if not on or on[0] != p or on[-1] != q:
            raise AssertionError("segment endpoints are not complex vertices")
        for a, b in zip(on, on[1:]):
            if tuple(sorted((self.index[a], self.index[b]))) not in self.edge_set:
                raise AssertionError("refined segment does not run along the 1-skeleton")
        return on

    def refine_path(self, w: PLWord) -> list[Vec]:
        return self.refine_points(partial_sums(w))

    def refine_points(self, pts: Sequence[Vec]) -> list[Vec]:
        out = [pts[0]]
        for p, q in zip(pts, pts[1:]):
            out.extend(self.refine_segment(p, q)[1:])
        return out


def _path_word(dim: int, pts: Sequence[Vec]) -> PLWord:
    return PLWord(dim, tuple(sub(b, a) for a, b in zip(pts, pts[1:])))


def _orientation_sign(C: PLSC, f: tuple[int, int, int], tri: tuple[Vec, Vec, Vec]) -> int:
    """+1 when the oriented triangle agrees with the vertex order of face f."""
    ft = C.face_triangle(f)
    h = make_plane(ft.p0, (sub(ft.p1, ft.p0), sub(ft.p2, ft.p0)))
    s1 = sign(_area2(*(h.coords(p) for p in tri)))
    s2 = sign(_area2(*(h.coords(p) for p in ft.points)))
    return s1 * s2


def _shell(ring: list[Vec], faces: list[tuple[Vec, Vec, Vec]]) -> list[tuple[list[Vec], tuple[Vec, Vec, Vec]]]:
    """Factor the loop around a triangulated disk into conjugated face loops.

    ring is the cyclic boundary vertex sequence starting at the base.  The
    result lists (path from the base along the 1-skeleton, oriented face)
    pairs; the product of the conjugated face loops is the boundary loop.
    """
    ring = list(ring)
    faces = list(faces)
    lead = [ring[0]]
    prefix: list[tuple[list[Vec], tuple[Vec, Vec, Vec]]] = []
    suffix: list[tuple[list[Vec], tuple[Vec, Vec, Vec]]] = []
    while len(faces) > 1:
        m = len(ring)
        for n, f in enumerate(faces):
            fs = set(f)
            hits = [i for i in range(m) if ring[i] in fs and ring[(i + 1) % m] in fs]
            on_ring = sum(1 for v in f if v in ring)
            if len(hits) == 1 and on_ring == 2:
                # one boundary edge u -> w, apex x inside
                i = hits[0]
                u, w = ring[i], ring[(i + 1) % m]
                x = next(v for v in f if v not in (u, w))
                prefix.append((lead + ring[1:i + 1], (u, w, x)))
                ring = ring[:i + 1] + [x] + ring[i + 1:]
                break
            if len(hits) == 2 and on_ring == 3 and m > 3:
                i, j = hits
                if j == i + 1:
                    k = i
                elif (i, j) == (0, m - 1):
                    k = m - 1
                else:
                    continue
                u, x, w = ring[k], ring[(k + 1) % m], ring[(k + 2) % m]
                if k == m - 1:
                    # the ear tip is the base: move the base to w
                    suffix.insert(0, (list(lead), (x, w, u)))
                    lead = lead + [w]
                    ring = ring[1:]
                else:
                    prefix.append((lead + ring[1:k + 1], (u, x, w)))
                    del ring[k + 1]
                break
        else:
            raise AssertionError("no shellable face found")
        del faces[n]
    if len(ring) != 3 or set(ring) != set(faces[0]):
        raise AssertionError("shelling ended with a non-triangular boundary")
    prefix.append((lead, (ring[0], ring[1], ring[2])))
    return prefix + suffix


def compatible_representative(X: KiteWord, threads: int = 1) -> tuple[KiteWord, PLSC, SimplexMapping]:
    """Equivalent word whose kites are faces of a compatible complex."""
    dim = X.dim
    parts = _triangular_kites(X)
    E: list[tuple[Vec, Vec]] = []
    P: list[Triangle] = []
    for _, k in parts:
        E.extend(_tail_segments(k.tail))
        t = _kite_triangle(k)
        P.append(t)
        E.extend(((t.p0, t.p1), (t.p1, t.p2), (t.p2, t.p0)))
    C = compatible_triangulation(E, P, threads)
    sk = _Skeleton(C)
    by_plane: dict[AffinePlane, list] = {}
    for f in C.faces:
        t = C.face_triangle(f)
        h = make_plane(t.p0, (sub(t.p1, t.p0), sub(t.p2, t.p0)))
        by_plane.setdefault(h, []).append((f, t, [h.coords(p) for p in t.points]))
    kites: list[Kite] = []
    entries = []
    for src, k in parts:
        tail_pts = sk.refine_path(k.tail)
        T = _kite_triangle(k)
        h = make_plane(T.p0, (sub(T.p1, T.p0), sub(T.p2, T.p0)))
        T2 = [h.coords(p) for p in T.points]
        inside = [(f, t) for f, t, t2 in by_plane.get(h, []) if all(_in_tri2(p, T2) for p in t2)]
        ring = sk.refine_points([T.p0, T.p1, T.p2, T.p0])[:-1]
        oriented = [_orient_like(t, T) for _, t in inside]
        pieces = _shell(ring, oriented)
        local = []
        for path, tri in pieces:
            if path[0] != T.p0 or path[-1] != tri[0]:
                raise AssertionError("face loop does not start at the end of its tail")
            tail_word = reduce(_path_word(dim, tail_pts + path[1:]))
            loop = PLWord(dim, (sub(tri[1], tri[0]), sub(tri[2], tri[1]), sub(tri[0], tri[2])))
            f = tuple(sorted(sk.index[p] for p in tri))
            local.append((Kite(tail_word, loop, 1), f, _orientation_sign(C, f, tri)))
        if k.sign == -1:
            local = [(Kite(kk.tail, kk.loop, -1), f, -s) for kk, f, s in reversed(local)]
        for kk, f, s in local:
            entries.append((len(kites), f, s))
            kites.append(kk)
    Xp = KiteWord(dim, tuple(kites))
    if reduce(concat(boundary_delta(Xp), inverse(boundary_delta(X)))).letters:
        raise AssertionError("compatible representative changed the boundary")
    return Xp, C, SimplexMapping(tuple(entries))


def _orient_like(t: Triangle, T: Triangle) -> tuple[Vec, Vec, Vec]:
    """Vertices of t ordered to agree with the orientation of T."""
    h = make_plane(T.p0, (sub(T.p1, T.p0), sub(T.p2, T.p0)))
    s = sign(_area2(*(h.coords(p) for p in T.points)))
    if sign(_area2(*(h.coords(p) for p in t.points))) == s:
        return t.points
    return (t.p0, t.p2, t.p1)


def chain(m: SimplexMapping) -> dict[tuple[int, int, int], int]:
    out: dict[tuple[int, int, int], int] = {}
    for _, f, s in m.entries:
        out[f] = out.get(f, 0) + s
    return {f: v for f, v in sorted(out.items()) if v}
