"""Truncated tensor algebra with exact coefficients, and PL path signatures.

Keys are tuples of 0-based letter indices; the empty tuple is the scalar
part.  Only nonzero coefficients are stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Iterable, Mapping

from .core import InputError, Vec
from .plpath import PLWord, reduce

Word = tuple[int, ...]


def _clean(d: Mapping[Word, Fraction]) -> dict[Word, Fraction]:
    return {k: v for k, v in sorted(d.items(), key=lambda kv: (len(kv[0]), kv[0])) if v != 0}


@dataclass(frozen=True, eq=False)
class TruncatedTensor:
    dim: int
    level: int
    coeffs: dict[Word, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _clean(self.coeffs))
        for k in self.coeffs:
            if len(k) > self.level or any(not 0 <= i < self.dim for i in k):
                raise InputError(f"bad tensor key {k} for dim {self.dim}, level {self.level}")

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedTensor):
            return NotImplemented
        return (self.dim, self.level, self.coeffs) == (other.dim, other.level, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.dim, self.level, tuple(self.coeffs.items())))

    def __getitem__(self, k: Word) -> Fraction:
        return self.coeffs.get(tuple(k), Fraction(0))

    def __add__(self, other: "TruncatedTensor") -> "TruncatedTensor":
        _compat(self, other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return TruncatedTensor(self.dim, self.level, out)

    def __neg__(self) -> "TruncatedTensor":
        return TruncatedTensor(self.dim, self.level, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "TruncatedTensor") -> "TruncatedTensor":
        return self + (-other)

    def __mul__(self, other) -> "TruncatedTensor":
        if isinstance(other, TruncatedTensor):
            return mul(self, other)
        c = Fraction(other)
        return TruncatedTensor(self.dim, self.level, {k: c * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def degree_part(self, k: int) -> "TruncatedTensor":
        return TruncatedTensor(self.dim, self.level, {w: v for w, v in self.coeffs.items() if len(w) == k})

    def constant(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, level: int) -> "TruncatedTensor":
        return TruncatedTensor(self.dim, level, {w: v for w, v in self.coeffs.items() if len(w) <= level})


def _compat(a: TruncatedTensor, b: TruncatedTensor) -> None:
    if a.dim != b.dim or a.level != b.level:
        raise InputError(f"incompatible tensors: dim {a.dim}/{b.dim}, level {a.level}/{b.level}")


def zero_tensor(dim: int, level: int) -> TruncatedTensor:
    return TruncatedTensor(dim, level, {})


def unit(dim: int, level: int) -> TruncatedTensor:
    return TruncatedTensor(dim, level, {(): Fraction(1)})


def letter(dim: int, level: int, i: int) -> TruncatedTensor:
    return TruncatedTensor(dim, level, {(i,): Fraction(1)})


def from_vector(v: Vec, level: int) -> TruncatedTensor:
    return TruncatedTensor(len(v), level, {(i,): a for i, a in enumerate(v) if a})


def mul(a: TruncatedTensor, b: TruncatedTensor) -> TruncatedTensor:
    """Concatenation product, truncated above the level."""
    _compat(a, b)
    n = a.level
    out: dict[Word, Fraction] = {}
    for ka, va in a.coeffs.items():
        room = n - len(ka)
        for kb, vb in b.coeffs.items():
            if len(kb) <= room:
                k = ka + kb
                out[k] = out.get(k, 0) + va * vb
    return TruncatedTensor(a.dim, n, out)


def tensor_inverse(g: TruncatedTensor) -> TruncatedTensor:
    """Inverse via the geometric series in the nilpotent part."""
    c = g.constant()
    if c == 0:
        raise InputError("tensor with zero constant term is not invertible")
    h = g * (1 / c)
    x = h - unit(g.dim, g.level)
    out = unit(g.dim, g.level)
    term = unit(g.dim, g.level)
    for _ in range(g.level):
        term = mul(term, -x)
        out = out + term
    return out * (1 / c)


def exp_segment(v: Vec, level: int) -> TruncatedTensor:
    """sum_k v^(tensor k) / k! up to the level."""
    dim = len(v)
    out: dict[Word, Fraction] = {(): Fraction(1)}
    layer: dict[Word, Fraction] = {(): Fraction(1)}
    nz = [(i, a) for i, a in enumerate(v) if a]
    for k in range(1, level + 1):
        nxt: dict[Word, Fraction] = {}
        for w, c in layer.items():
            for i, a in nz:
                nxt[w + (i,)] = c * a
        layer = nxt
        f = Fraction(1, factorial(k))
        for w, c in layer.items():
            out[w] = c * f
    return TruncatedTensor(dim, level, out)


def path_signature(w: PLWord, level: int) -> TruncatedTensor:
    """Ordered product of segment exponentials over the minimal word."""
    out = unit(w.dim, level)
    for v in reduce(w).letters:
        out = mul(out, exp_segment(v, level))
    return out


def tensor_exp(x: TruncatedTensor) -> TruncatedTensor:
    if x.constant() != 0:
        raise InputError("exp expects zero constant term")
    out = unit(x.dim, x.level)
    term = unit(x.dim, x.level)
    for k in range(1, x.level + 1):
        term = mul(term, x) * Fraction(1, k)
        out = out + term
    return out


def log(g: TruncatedTensor) -> TruncatedTensor:
    """Mercator series log(1 + x) = sum (-1)^(k+1) x^k / k."""
    if g.constant() != 1:
        raise InputError("log expects constant term 1")
    x = g - unit(g.dim, g.level)
    out = zero_tensor(g.dim, g.level)
    term = unit(g.dim, g.level)
    for k in range(1, g.level + 1):
        term = mul(term, x)
        out = out + term * Fraction((-1) ** (k + 1), k)
    return out


def bracket(a: TruncatedTensor, b: TruncatedTensor) -> TruncatedTensor:
    return mul(a, b) - mul(b, a)


def right_nested(w: Word, dim: int, level: int) -> TruncatedTensor:
    """[e_w1, [e_w2, ... e_wk]] expanded in the tensor algebra."""
    if not w:
        raise InputError("empty word has no bracketing")
    out = letter(dim, level, w[-1])
    for i in reversed(w[:-1]):
        out = bracket(letter(dim, level, i), out)
    return out


def dynkin(x: TruncatedTensor) -> TruncatedTensor:
    """Linear map e_w -> right-nested bracket of w."""
    out: dict[Word, Fraction] = {}
    for w, c in x.coeffs.items():
        if not w:
            continue
        for k, v in right_nested(w, x.dim, x.level).coeffs.items():
            out[k] = out.get(k, 0) + c * v
    return TruncatedTensor(x.dim, x.level, out)


def is_lie(x: TruncatedTensor) -> bool:
    """Dynkin criterion: D(x_k) = k x_k on every homogeneous component."""
    if x.constant() != 0:
        raise InputError("Lie test expects zero constant term")
    d = dynkin(x)
    for k in range(1, x.level + 1):
        if d.degree_part(k) != x.degree_part(k) * k:
            return False
    return True


def lie_span(dim: int, level: int, min_degree: int = 1) -> dict[int, list[TruncatedTensor]]:
    """Right-nested brackets of all words, grouped by degree."""
    out: dict[int, list[TruncatedTensor]] = {}
    for k in range(min_degree, level + 1):
        out[k] = [right_nested(w, dim, level) for w in product(range(dim), repeat=k)]
    return out


def format_word(w: Word, dim: int) -> str:
    """1-based index word; digits are comma separated once dim exceeds 9."""
    if dim <= 9:
        return "".join(str(i + 1) for i in w)
    return ",".join(str(i + 1) for i in w)


def parse_word(s: str, dim: int) -> Word:
    if not s:
        return ()
    parts = s.split(",") if dim > 9 else list(s)
    try:
        w = tuple(int(p) - 1 for p in parts)
    except ValueError as exc:
        raise InputError(f"bad index word {s!r}") from exc
    if any(not 0 <= i < dim for i in w):
        raise InputError(f"index out of range in {s!r}")
    return w


def iter_words(dim: int, level: int) -> Iterable[Word]:
    for k in range(level + 1):
        yield from product(range(dim), repeat=k)
