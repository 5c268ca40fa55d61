"""Polynomial differential forms and currents.

A current of grade m is a sparse map (alpha, I) -> coefficient standing for
sum c * e^alpha (x) e_I, with alpha a multi-index and I a strictly increasing
index tuple of length m.  Forms use the same keys for z^alpha dz_I.  The
weight of a key is |alpha| + m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, Sequence

from .core import InputError, Triangle, Vec, pmap, sub

Alpha = tuple[int, ...]
Key = tuple[Alpha, tuple[int, ...]]


def alpha_factorial(a: Alpha) -> int:
    out = 1
    for k in a:
        out *= factorial(k)
    return out


def multi_indices(dim: int, degree: int) -> Iterator[Alpha]:
    """All multi-indices of the given total degree, in lexicographic order."""
    if dim == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in multi_indices(dim - 1, degree - first):
            yield (first,) + rest


def alpha_of(indices: Iterable[int], dim: int) -> Alpha:
    a = [0] * dim
    for i in indices:
        a[i] += 1
    return tuple(a)


def _wedge_insert(i: int, I: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted index tuple of e_i wedge e_I, or None if i is in I."""
    if i in I:
        return None
    pos = sum(1 for j in I if j < i)
    return (-1) ** pos, tuple(sorted(I + (i,)))


def _sort_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]] | None:
    if len(set(idx)) != len(idx):
        return None
    s = 1
    lst = list(idx)
    for i in range(len(lst)):
        for j in range(len(lst) - 1 - i):
            if lst[j] > lst[j + 1]:
                lst[j], lst[j + 1] = lst[j + 1], lst[j]
                s = -s
    return s, tuple(lst)


def _norm(d: Mapping[Key, Fraction]) -> dict[Key, Fraction]:
    items = sorted(((k, v) for k, v in d.items() if v != 0),
                   key=lambda kv: (sum(kv[0][0]), kv[0][1], tuple(-a for a in kv[0][0])))
    return dict(items)


class _Graded:
    dim: int
    grade: int
    coeffs: dict[Key, Fraction]

    def _check(self) -> None:
        for (a, I) in self.coeffs:
            if len(a) != self.dim or len(I) != self.grade or list(I) != sorted(set(I)):
                raise InputError(f"bad key {(a, I)} for dim {self.dim} grade {self.grade}")
            if any(not 0 <= i < self.dim for i in I) or any(x < 0 for x in a):
                raise InputError(f"bad key {(a, I)}")

    def weights(self) -> list[int]:
        return sorted({sum(a) + self.grade for a, _ in self.coeffs})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: Key) -> Fraction:
        return self.coeffs.get(k, Fraction(0))


@dataclass(frozen=True, eq=False)
class PolyCurrent(_Graded):
    dim: int
    grade: int
    coeffs: dict[Key, Fraction] = field(default_factory=dict)
    max_weight: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _norm(self.coeffs))
        self._check()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyCurrent):
            return NotImplemented
        return (self.dim, self.grade, self.coeffs) == (other.dim, other.grade, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.grade, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        return f"PolyCurrent(dim={self.dim}, grade={self.grade}, {self.coeffs})"

    def _new(self, coeffs, max_weight=None) -> "PolyCurrent":
        mw = self.max_weight if max_weight is None else max_weight
        return PolyCurrent(self.dim, self.grade, coeffs, mw)

    def __add__(self, other: "PolyCurrent") -> "PolyCurrent":
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise InputError("incompatible currents")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        mw = _min_weight(self.max_weight, other.max_weight)
        return PolyCurrent(self.dim, self.grade, out, mw)

    def __neg__(self) -> "PolyCurrent":
        return self._new({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "PolyCurrent") -> "PolyCurrent":
        return self + (-other)

    def __mul__(self, c) -> "PolyCurrent":
        c = Fraction(c)
        return self._new({k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def weight_part(self, r: int) -> "PolyCurrent":
        return self._new({k: v for k, v in self.coeffs.items() if sum(k[0]) + self.grade == r})

    def up_to_weight(self, r: int) -> "PolyCurrent":
        return self._new({k: v for k, v in self.coeffs.items() if sum(k[0]) + self.grade <= r}, r)


def _min_weight(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class PolyForm(_Graded):
    dim: int
    grade: int
    coeffs: dict[Key, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _norm(self.coeffs))
        self._check()

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return (self.dim, self.grade, self.coeffs) == (other.dim, other.grade, other.coeffs)

    def __hash__(self):
        return hash((self.dim, self.grade, tuple(self.coeffs.items())))

    def __add__(self, other: "PolyForm") -> "PolyForm":
        if (self.dim, self.grade) != (other.dim, other.grade):
            raise InputError("incompatible forms")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return PolyForm(self.dim, self.grade, out)

    def __mul__(self, c) -> "PolyForm":
        c = Fraction(c)
        return PolyForm(self.dim, self.grade, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__


def current_basis(dim: int, grade: int, weight: int) -> list[Key]:
    """Monomial keys of a graded piece, in a fixed order."""
    deg = weight - grade
    if deg < 0:
        return []
    return [(a, I) for I in combinations(range(dim), grade) for a in multi_indices(dim, deg)]


# -- pairing and operators -------------------------------------------------

def pairing(c: PolyCurrent, f: PolyForm) -> Fraction:
    """<e^a (x) e_I, z^b dz_J> = (-1)^(m(m-1)/2) a! [a = b][I = J]."""
    if c.grade != f.grade or c.dim != f.dim:
        raise InputError("pairing needs equal grade and dimension")
    m = c.grade
    s = -1 if (m * (m - 1) // 2) % 2 else 1
    total = Fraction(0)
    small, big = (c.coeffs, f.coeffs) if len(c.coeffs) <= len(f.coeffs) else (f.coeffs, c.coeffs)
    for k, v in small.items():
        w = big.get(k)
        if w:
            total += v * w * alpha_factorial(k[0])
    return s * total


def exterior_d(f: PolyForm) -> PolyForm:
    out: dict[Key, Fraction] = {}
    for (a, I), c in f.coeffs.items():
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            ins = _wedge_insert(i, I)
            if ins is None:
                continue
            s, J = ins
            b = a[:i] + (ai - 1,) + a[i + 1:]
            out[(b, J)] = out.get((b, J), 0) + s * ai * c
    return PolyForm(f.dim, f.grade + 1, out)


def codifferential(c: PolyCurrent) -> PolyCurrent:
    """Adjoint of d: <d_m c, w> = (-1)^m <c, dw>.

    On monomials: e^a (x) e_I -> -sum_p (-1)^p e^(a + e_(I_p)) (x) e_(I without I_p).
    """
    if c.grade == 0:
        raise InputError("codifferential of a 0-current is undefined")
    out: dict[Key, Fraction] = {}
    for (a, I), v in c.coeffs.items():
        for p, i in enumerate(I):
            b = a[:i] + (a[i] + 1,) + a[i + 1:]
            J = I[:p] + I[p + 1:]
            out[(b, J)] = out.get((b, J), 0) - (-1) ** p * v
    return PolyCurrent(c.dim, c.grade - 1, out, c.max_weight)


def e_op(c: PolyCurrent) -> PolyCurrent:
    """u_1..u_r (x) v -> sum_i u_1..^u_i..u_r (x) u_i wedge v."""
    out: dict[Key, Fraction] = {}
    for (a, I), v in c.coeffs.items():
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            ins = _wedge_insert(i, I)
            if ins is None:
                continue
            s, J = ins
            b = a[:i] + (ai - 1,) + a[i + 1:]
            out[(b, J)] = out.get((b, J), 0) + s * ai * v
    return PolyCurrent(c.dim, c.grade + 1, out, c.max_weight)


def ell(c: PolyCurrent) -> PolyCurrent:
    """e d + d e; acts as minus the weight."""
    parts = []
    if c.grade > 0:
        parts.append(e_op(codifferential(c)))
    parts.append(codifferential(e_op(c)))
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def _inv_weight(c: PolyCurrent) -> PolyCurrent:
    out = {}
    for k, v in c.coeffs.items():
        r = sum(k[0]) + c.grade
        if r == 0:
            raise InputError("weight-0 component has no inverse under ell")
        out[k] = v / -r
    return c._new(out)


def project_closed(c: PolyCurrent) -> PolyCurrent:
    """ell^-1 d e: projection onto the kernel of the codifferential."""
    return _inv_weight(codifferential(e_op(c)))


def project_ker_e(c: PolyCurrent) -> PolyCurrent:
    """ell^-1 e d: projection onto the kernel of e."""
    return _inv_weight(e_op(codifferential(c)))


def multiply_vector(v: Vec, c: PolyCurrent) -> PolyCurrent:
    """Multiply the symmetric factor by v in S(V)."""
    out: dict[Key, Fraction] = {}
    for (a, I), x in c.coeffs.items():
        for i, vi in enumerate(v):
            if vi:
                b = a[:i] + (a[i] + 1,) + a[i + 1:]
                out[(b, I)] = out.get((b, I), 0) + vi * x
    return PolyCurrent(c.dim, c.grade, out, c.max_weight)


# -- dual bases ------------------------------------------------------------

def _check_index_data(q: Sequence[int], i: int, j: int, k: int) -> None:
    if not i < j < k:
        raise InputError("need i < j < k")
    chain = list(q) + [i]
    if any(chain[t] < chain[t + 1] for t in range(len(chain) - 1)):
        raise InputError("need q_1 >= ... >= q_r >= i")


def basis_gamma(q: Sequence[int], i: int, j: int, k: int, dim: int) -> PolyCurrent:
    """-e_q1 ... e_qr (x) e_i wedge e_j wedge e_k (0-based indices)."""
    _check_index_data(q, i, j, k)
    return PolyCurrent(dim, 3, {(alpha_of(q, dim), (i, j, k)): Fraction(-1)})


def basis_omega(q: Sequence[int], i: int, j: int, k: int, dim: int) -> PolyForm:
    """(z^a / a!) dz_j wedge dz_k with a counting the indices of (q, i)."""
    _check_index_data(q, i, j, k)
    a = alpha_of(list(q) + [i], dim)
    return PolyForm(dim, 2, {(a, (j, k)): Fraction(1, alpha_factorial(a))})


def index_data(dim: int, weight: int) -> list[tuple[tuple[int, ...], int, int, int]]:
    """All (q, i, j, k) with q nonincreasing, q_r >= i < j < k, |q| = weight - 3."""
    r = weight - 3
    if r < 0:
        return []
    out = []
    for i, j, k in combinations(range(dim), 3):
        for q in _nonincreasing(r, dim - 1, i):
            out.append((q, i, j, k))
    return out


def _nonincreasing(r: int, hi: int, lo: int) -> Iterator[tuple[int, ...]]:
    if r == 0:
        yield ()
        return
    for first in range(hi, lo - 1, -1):
        for rest in _nonincreasing(r - 1, first, lo):
            yield (first,) + rest


def closed_pairing(c: PolyCurrent, primitive: PolyForm) -> Fraction:
    """Pairing of a closed 2-current with the closed 3-form d(primitive)."""
    return -pairing(c, primitive)


# -- integration over triangles -------------------------------------------

Poly2 = dict[tuple[int, int], Fraction]


def _poly_mul(p: Poly2, q: Poly2) -> Poly2:
    out: Poly2 = {}
    for (a, b), x in p.items():
        for (c, d), y in q.items():
            k = (a + c, b + d)
            out[k] = out.get(k, 0) + x * y
    return out


@lru_cache(maxsize=None)
def _moment(a: int, b: int) -> Fraction:
    """Integral of s^a t^b over the standard simplex."""
    return Fraction(factorial(a) * factorial(b), factorial(a + b + 2))


def triangle_moments(t: Triangle, max_degree: int) -> dict[Alpha, Fraction]:
    """Integral of z^alpha over the standard simplex pulled back along t.

    The result is in parameter measure ds dt; multiply by the Jacobian
    minor of (i, j) to obtain the integral of z^alpha dz_i wedge dz_j.
    """
    dim = len(t.p0)
    a = sub(t.p1, t.p0)
    b = sub(t.p2, t.p0)
    lin = [{(0, 0): t.p0[k], (1, 0): a[k], (0, 1): b[k]} for k in range(dim)]
    lin = [{m: c for m, c in p.items() if c != 0} for p in lin]
    polys: dict[Alpha, Poly2] = {(0,) * dim: {(0, 0): Fraction(1)}}
    out: dict[Alpha, Fraction] = {}
    for deg in range(max_degree + 1):
        for al in multi_indices(dim, deg):
            if al not in polys:
                k = next(i for i, x in enumerate(al) if x > 0)
                prev = al[:k] + (al[k] - 1,) + al[k + 1:]
                polys[al] = _poly_mul(polys[prev], lin[k])
            out[al] = sum((c * _moment(m, n) for (m, n), c in polys[al].items()), Fraction(0))
    return out


def triangle_integral(t: Triangle, alpha: Alpha, ij: tuple[int, int]) -> Fraction:
    """Integral of z^alpha dz_i wedge dz_j over t, oriented by vertex order."""
    i, j = ij
    a = sub(t.p1, t.p0)
    b = sub(t.p2, t.p0)
    minor = a[i] * b[j] - a[j] * b[i]
    if minor == 0:
        return Fraction(0)
    return minor * triangle_moments(t, sum(alpha))[tuple(alpha)]


SignedTriangleSoup = list[tuple[Triangle, int]]


def _triangle_current(item: tuple[Triangle, int, int]) -> dict[Key, Fraction]:
    t, s, max_weight = item
    dim = len(t.p0)
    a = sub(t.p1, t.p0)
    b = sub(t.p2, t.p0)
    minors = {}
    for i, j in combinations(range(dim), 2):
        m = a[i] * b[j] - a[j] * b[i]
        if m:
            minors[(i, j)] = m
    out: dict[Key, Fraction] = {}
    if not minors or max_weight < 2:
        return out
    mom = triangle_moments(t, max_weight - 2)
    for al, val in mom.items():
        if not val:
            continue
        f = s * val / alpha_factorial(al)
        for ij, m in minors.items():
            out[(al, ij)] = f * m
    return out


def soup_current(soup: Sequence[tuple[Triangle, int]], max_weight: int, dim: int | None = None,
                 threads: int = 1) -> PolyCurrent:
    """sum over keys of weight <= max_weight of (1/a!) sum sign * integral."""
    if dim is None:
        if not soup:
            raise InputError("dim is required for an empty soup")
        dim = len(soup[0][0].p0)
    parts = pmap(_triangle_current, [(t, s, max_weight) for t, s in soup], threads)
    out: dict[Key, Fraction] = {}
    for part in parts:
        for k, v in part.items():
            out[k] = out.get(k, 0) + v
    return PolyCurrent(dim, 2, out, max_weight)


def translate_current(c: PolyCurrent, a: Vec, max_weight: int | None = None) -> PolyCurrent:
    """Current of the translated surface: c'(b + g) += c(b) a^g / g!."""
    mw = c.max_weight if max_weight is None else max_weight
    if mw is None:
        raise InputError("translation needs a weight cap")
    out: dict[Key, Fraction] = {}
    for (b, I), v in c.coeffs.items():
        room = mw - c.grade - sum(b)
        for deg in range(room + 1):
            for g in multi_indices(c.dim, deg):
                coef = Fraction(1)
                for ai, gi in zip(a, g):
                    if gi:
                        coef *= Fraction(ai) ** gi / factorial(gi)
                if coef == 0:
                    continue
                k = (tuple(x + y for x, y in zip(b, g)), I)
                out[k] = out.get(k, 0) + v * coef
    return PolyCurrent(c.dim, c.grade, out, mw)


def format_key(k: Key) -> str:
    a, I = k
    return "α=(" + ",".join(map(str, a)) + ");(" + ",".join(str(i + 1) for i in I) + ")"


def parse_key(s: str) -> Key:
    try:
        left, right = s.split(";")
        assert left.startswith("α=(") and left.endswith(")")
        a = tuple(int(x) for x in left[3:-1].split(",") if x != "")
        assert right.startswith("(") and right.endswith(")")
        I = tuple(int(x) - 1 for x in right[1:-1].split(",") if x != "")
    except (ValueError, AssertionError) as exc:
        raise InputError(f"bad current key {s!r}") from exc
    return a, I


def binomial_alpha(a: Alpha, b: Alpha) -> int:
    out = 1
    for x, y in zip(a, b):
        out *= comb(x, y)
    return out
