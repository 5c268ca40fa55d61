"""Command line interface and JSON document formats.

Every document is a JSON object with a "format" tag and a "dim" field.
Rationals are strings such as "3" or "-1/2".  Output is deterministic: keys
appear in a fixed order and sparse maps are emitted in graded order.
"""

from __future__ import annotations

import json
import os
import random
import sys
from fractions import Fraction
from typing import Any

import click

from . import currents, decide, kapranov, plpath, plsurface, tensor, triangulate
from .core import InputError, Triangle, fmt_rat, rat

PATH_FORMAT = "plsurf/path/1"
KITES_FORMAT = "plsurf/kiteword/1"
TENSOR_FORMAT = "plsurf/tensor/1"
SURFACE_SIG_FORMAT = "plsurf/surface-signature/1"
REPORT_FORMAT = "plsurf/decision/1"
PLSC_FORMAT = "plsurf/plsc/1"
TRI_INPUT_FORMAT = "plsurf/triangulation-input/1"

COMPOSITION = "free-monoid order, left to right"


# -- documents ---------------------------------------------------------------

def _vec_out(v) -> list[str]:
    return [fmt_rat(x) for x in v]


def _vec_in(v, dim: int):
    if not isinstance(v, list) or len(v) != dim:
        raise InputError(f"expected a list of {dim} rationals, got {v!r}")
    return tuple(rat(x) for x in v)


def _dim(doc: dict) -> int:
    d = doc.get("dim")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise InputError("document needs a positive integer 'dim'")
    return d


def _expect(doc: Any, fmt: str | None) -> dict:
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    if fmt is not None and doc.get("format", fmt) != fmt:
        raise InputError(f"expected format {fmt!r}, got {doc.get('format')!r}")
    return doc


def dump_path(w: plpath.PLWord) -> dict:
    return {"format": PATH_FORMAT, "dim": w.dim, "word": [_vec_out(v) for v in w.letters]}


def load_path(doc: Any) -> plpath.PLWord:
    doc = _expect(doc, PATH_FORMAT)
    dim = _dim(doc)
    word = doc.get("word")
    if not isinstance(word, list):
        raise InputError("path document needs a 'word' list")
    return plpath.PLWord(dim, tuple(_vec_in(v, dim) for v in word))


def dump_kites(X: plsurface.KiteWord) -> dict:
    return {
        "format": KITES_FORMAT,
        "dim": X.dim,
        "composition": COMPOSITION,
        "kites": [
            {"tail": [_vec_out(v) for v in k.tail.letters],
             "loop": [_vec_out(v) for v in k.loop.letters],
             "sign": k.sign}
            for k in X.kites
        ],
    }


def load_kites(doc: Any) -> plsurface.KiteWord:
    doc = _expect(doc, KITES_FORMAT)
    dim = _dim(doc)
    ks = doc.get("kites")
    if not isinstance(ks, list):
        raise InputError("kite word document needs a 'kites' list")
    out = []
    for k in ks:
        if not isinstance(k, dict) or not isinstance(k.get("tail"), list) or not isinstance(k.get("loop"), list):
            raise InputError("each kite needs 'tail' and 'loop' lists")
        s = k.get("sign", 1)
        if s not in (1, -1):
            raise InputError("kite sign must be 1 or -1")
        tail = plpath.PLWord(dim, tuple(_vec_in(v, dim) for v in k["tail"]))
        loop = plpath.PLWord(dim, tuple(_vec_in(v, dim) for v in k["loop"]))
        out.append(plsurface.Kite(tail, loop, s))
    X = plsurface.KiteWord(dim, tuple(out))
    problems = plsurface.validate(X)
    if problems:
        raise InputError("; ".join(problems))
    return X


def _tensor_map(t: tensor.TruncatedTensor) -> dict:
    items = sorted(t.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return {tensor.format_word(w, t.dim): fmt_rat(c) for w, c in items}


def _tensor_from_map(m: Any, dim: int, level: int) -> tensor.TruncatedTensor:
    if not isinstance(m, dict):
        raise InputError("tensor coefficients must be an object")
    return tensor.TruncatedTensor(dim, level, {tensor.parse_word(k, dim): rat(v) for k, v in m.items()})


def dump_tensor(t: tensor.TruncatedTensor) -> dict:
    return {"format": TENSOR_FORMAT, "dim": t.dim, "level": t.level, "signature": _tensor_map(t)}


def load_tensor(doc: Any) -> tensor.TruncatedTensor:
    doc = _expect(doc, TENSOR_FORMAT)
    return _tensor_from_map(doc.get("signature"), _dim(doc), _level(doc, "level"))


def _level(doc: dict, key: str) -> int:
    n = doc.get(key)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise InputError(f"document needs a nonnegative integer {key!r}")
    return n


def _current_map(c: currents.PolyCurrent) -> dict:
    items = sorted(c.coeffs.items(), key=lambda kv: (sum(kv[0][0]) + len(kv[0][1]), kv[0]))
    return {currents.format_key(k): fmt_rat(v) for k, v in items}


def _current_from_map(m: Any, dim: int, weight: int) -> currents.PolyCurrent:
    if not isinstance(m, dict):
        raise InputError("current coefficients must be an object")
    return currents.PolyCurrent(dim, 2, {currents.parse_key(k): rat(v) for k, v in m.items()}, weight)


def dump_surface_sig(s: plsurface.SurfaceSignature, level: int, weight: int) -> dict:
    return {
        "format": SURFACE_SIG_FORMAT,
        "dim": s.boundary.dim,
        "level": level,
        "weight": weight,
        "boundary": _tensor_map(s.boundary),
        "gamma": _current_map(s.gamma),
    }


def load_surface_sig(doc: Any) -> tuple[plsurface.SurfaceSignature, int, int]:
    doc = _expect(doc, SURFACE_SIG_FORMAT)
    dim = _dim(doc)
    level, weight = _level(doc, "level"), _level(doc, "weight")
    sig = plsurface.SurfaceSignature(
        _tensor_from_map(doc.get("boundary"), dim, level),
        _current_from_map(doc.get("gamma"), dim, weight),
    )
    return sig, level, weight


def dump_plsc(C: triangulate.PLSC, dim: int) -> dict:
    return {
        "format": PLSC_FORMAT,
        "dim": dim,
        "vertices": [_vec_out(v) for v in C.vertices],
        "edges": [list(e) for e in C.edges],
        "faces": [list(f) for f in C.faces],
    }


def load_plsc(doc: Any) -> triangulate.PLSC:
    doc = _expect(doc, PLSC_FORMAT)
    dim = _dim(doc)
    vs = tuple(_vec_in(v, dim) for v in doc.get("vertices", []))
    n = len(vs)

    def idx(xs, k):
        if not isinstance(xs, list) or len(xs) != k or not all(isinstance(i, int) and 0 <= i < n for i in xs):
            raise InputError(f"bad simplex {xs!r}")
        return tuple(xs)

    return triangulate.PLSC(vs, tuple(idx(e, 2) for e in doc.get("edges", [])),
                            tuple(idx(f, 3) for f in doc.get("faces", [])))


def load_triangulation_input(doc: Any) -> tuple[int, list, list]:
    doc = _expect(doc, TRI_INPUT_FORMAT)
    dim = _dim(doc)
    E = []
    for e in doc.get("edges", []):
        if not isinstance(e, list) or len(e) != 2:
            raise InputError("each edge is a pair of points")
        E.append((_vec_in(e[0], dim), _vec_in(e[1], dim)))
    P = []
    for t in doc.get("triangles", []):
        if not isinstance(t, list) or len(t) != 3:
            raise InputError("each triangle is a triple of points")
        tri = Triangle(*(_vec_in(p, dim) for p in t))
        if tri.is_degenerate():
            raise InputError("degenerate input triangle")
        P.append(tri)
    return dim, E, P


def dump_report(r: decide.DecisionReport, dim: int, level: int | None, weight: int | None) -> dict:
    out: dict[str, Any] = {
        "format": REPORT_FORMAT,
        "dim": dim,
        "verdict": r.verdict,
        "boundary_check": {
            "x": [_vec_out(v) for v in r.boundary_x.letters],
            "y": [_vec_out(v) for v in r.boundary_y.letters],
        },
        "chain": [{"face": [_vec_out(p) for p in f], "multiplicity": m} for f, m in r.chain.items()],
        "witness": r.witness,
    }
    if r.signature_excerpt is not None:
        out["signature_excerpt"] = dump_surface_sig(r.signature_excerpt, level, weight)
    return out


def load_report(doc: Any) -> tuple[decide.DecisionReport, int | None, int | None]:
    doc = _expect(doc, REPORT_FORMAT)
    dim = _dim(doc)
    if doc.get("verdict") not in (decide.EQUAL, decide.NOT_EQUAL):
        raise InputError("bad verdict")
    b = doc.get("boundary_check", {})
    bx = plpath.PLWord(dim, tuple(_vec_in(v, dim) for v in b.get("x", [])))
    by = plpath.PLWord(dim, tuple(_vec_in(v, dim) for v in b.get("y", [])))
    ch = {tuple(_vec_in(p, dim) for p in e["face"]): int(e["multiplicity"]) for e in doc.get("chain", [])}
    sig, level, weight = (None, None, None)
    if "signature_excerpt" in doc:
        sig, level, weight = load_surface_sig(doc["signature_excerpt"])
    return decide.DecisionReport(doc["verdict"], bx, by, ch, doc.get("witness"), sig), level, weight


def to_text(doc: dict) -> str:
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"


# -- plumbing ----------------------------------------------------------------

def _read(stream) -> Any:
    text = stream.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc


def _emit(doc: dict) -> None:
    click.echo(to_text(doc), nl=False)


def _threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("PLSURF_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise InputError("PLSURF_THREADS must be an integer") from exc
    return 1


threads_option = click.option("--threads", type=int, default=None,
                              help="Worker threads (default: $PLSURF_THREADS or 1).")


@click.group()
def cli() -> None:
    """Exact PL path and surface signatures and thin homotopy decisions."""


@cli.command("path-reduce")
@click.argument("infile", type=click.File("r"), default="-")
def path_reduce(infile) -> None:
    """Minimal representative of a path."""
    _emit(dump_path(plpath.reduce(load_path(_read(infile)))))


@cli.command("path-sig")
@click.argument("infile", type=click.File("r"), default="-")
@click.option("--level", type=click.IntRange(min=1), default=4, show_default=True)
def path_sig(infile, level: int) -> None:
    """Truncated signature of a path."""
    _emit(dump_tensor(tensor.path_signature(load_path(_read(infile)), level)))


@cli.command("surface-sig")
@click.argument("infile", type=click.File("r"), default="-")
@click.option("--level", type=click.IntRange(min=0), default=4, show_default=True)
@click.option("--weight", type=click.IntRange(min=0), default=6, show_default=True)
@threads_option
def surface_sig(infile, level: int, weight: int, threads: int | None) -> None:
    """Boundary signature and closed current of a kite word."""
    X = load_kites(_read(infile))
    s = plsurface.surface_signature(X, level, weight, _threads(threads))
    _emit(dump_surface_sig(s, level, weight))


@cli.command("thin-equiv")
@click.argument("inputs", nargs=-1)
@click.option("--level", type=click.IntRange(min=0), default=3, show_default=True,
              help="Level of the attached signature excerpt.")
@click.option("--weight", type=click.IntRange(min=0), default=4, show_default=True,
              help="Weight of the attached signature excerpt.")
@threads_option
def thin_equiv(inputs: tuple[str, ...], level: int, weight: int, threads: int | None) -> None:
    """Decide thin homotopy equivalence of X and Y; exit 0 if equal, 1 if not.

    INPUTS is X [Y]; either may be "-" for standard input and Y may be the
    word "identity" (the default).  A lone "identity" reads X from stdin.
    """
    if len(inputs) > 2:
        raise click.UsageError("expected at most two inputs")
    if inputs == ("identity",):
        inputs = ("-", "identity")
    xname = inputs[0] if inputs else "-"
    yname = inputs[1] if len(inputs) > 1 else "identity"
    X = _load_named(xname)
    Y = plsurface.identity(X.dim) if yname == "identity" else _load_named(yname)
    r = decide.thin_equiv(X, Y, level, weight, _threads(threads))
    _emit(dump_report(r, X.dim, level, weight))
    sys.exit(0 if r.equal else 1)


def _load_named(name: str) -> plsurface.KiteWord:
    try:
        with click.open_file(name, "r") as fh:
            return load_kites(_read(fh))
    except OSError as exc:
        raise InputError(f"cannot read {name}: {exc}") from exc


@cli.command("triangulate")
@click.argument("infile", type=click.File("r"), default="-")
@threads_option
def triangulate_cmd(infile, threads: int | None) -> None:
    """Compatible triangulation of edges and triangles, or of a kite word."""
    doc = _read(infile)
    t = _threads(threads)
    if isinstance(doc, dict) and doc.get("format") == KITES_FORMAT:
        X = load_kites(doc)
        _, C, _ = triangulate.compatible_representative(X, t)
        _emit(dump_plsc(C, X.dim))
        return
    dim, E, P = load_triangulation_input(doc)
    _emit(dump_plsc(triangulate.compatible_triangulation(E, P, t), dim))


@cli.command("gen-example")
@click.argument("name", type=click.Choice(decide.EXAMPLES))
@click.option("--seed", type=int, default=0, show_default=True)
def gen_example(name: str, seed: int) -> None:
    """Emit a fixture kite word."""
    _emit(dump_kites(decide.gen_example(name, seed)))


@cli.command("selfcheck")
@click.option("--samples", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def selfcheck(samples: int, seed: int) -> None:
    """Dual bases, abelianized curvature and crossed-module axioms."""
    results = run_selfcheck(samples, seed)
    for name, ok in results:
        click.echo(f"{'PASS' if ok else 'FAIL'} {name}")
    sys.exit(0 if all(ok for _, ok in results) else 1)


def run_selfcheck(samples: int = 20, seed: int = 0) -> list[tuple[str, bool]]:
    out = []
    ok = True
    for r in range(3, 7):
        data = currents.index_data(3, r)
        for a in data:
            g = currents.codifferential(currents.basis_gamma(*a, 3))
            for b in data:
                v = currents.closed_pairing(g, currents.basis_omega(*b, 3))
                ok &= v == (1 if a == b else 0)
    out.append(("dual bases, dim 3, weights 3..6", ok))
    ctx = kapranov.get_context(3, 5)
    ok = True
    for r in (3, 4, 5):
        M = kapranov.abelianized_curvature_component(ctx, r)
        ok &= all(M[i][j] == (1 if i == j else 0) for i in range(len(M)) for j in range(len(M)))
    out.append(("abelianized curvature, dim 3, weights 3..5", ok))
    rng = random.Random(seed)
    ok = True
    for _ in range(samples):
        A, B = random_k1(ctx, rng), random_k1(ctx, rng)
        x = random_lie(ctx, rng)
        ok &= kapranov.delta(kapranov.act(x, A)) == tensor.bracket(x, kapranov.delta(A))
        ok &= kapranov.act(kapranov.delta(A), B) == -kapranov.act(kapranov.delta(B), A)
    out.append((f"crossed-module axioms, {samples} samples", ok))
    return out


def random_k1(ctx: kapranov.QuotientContext, rng: random.Random, max_weight: int | None = None) -> kapranov.K1Elt:
    """Random element of low weight with small integer coefficients."""
    top = max_weight or min(ctx.level, 4)
    out = ctx.zero()
    for _ in range(rng.randint(1, 3)):
        w = rng.randint(2, top)
        word = tuple(rng.randrange(ctx.dim) for _ in range(w - 2))
        i, j = rng.sample(range(ctx.dim), 2)
        out = out + ctx.generator(word, i, j) * rng.randint(-3, 3)
    return out


def random_lie(ctx: kapranov.QuotientContext, rng: random.Random, max_degree: int = 2) -> tensor.TruncatedTensor:
    out = tensor.zero_tensor(ctx.dim, ctx.level)
    for _ in range(rng.randint(1, 3)):
        d = rng.randint(1, max_degree)
        word = tuple(rng.randrange(ctx.dim) for _ in range(d))
        out = out + tensor.right_nested(word, ctx.dim, ctx.level) * Fraction(rng.randint(-2, 2))
    return out


def main() -> None:
    try:
        cli.main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.Abort:
        sys.exit(2)
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    except (ValueError, KeyError, TypeError) as exc:
        click.echo(f"error: malformed input: {exc}", err=True)
        sys.exit(2)
    except AssertionError as exc:
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(3)


if __name__ == "__main__":
    main()
