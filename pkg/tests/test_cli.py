import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from plsurf import cli, decide as D
from plsurf.plpath import PLWord, word
from plsurf.plsurface import surface_signature
from plsurf.tensor import path_signature


def run(args, stdin="", env=None):
    p = subprocess.run([sys.executable, "-m", "plsurf.cli", *args], input=stdin,
                       capture_output=True, text=True, env=env)
    return p.returncode, p.stdout, p.stderr


def doc(name, seed=0):
    return cli.to_text(cli.dump_kites(D.gen_example(name, seed)))


def test_path_reduce():
    code, out, _ = run(["path-reduce"], '{"dim":2,"word":[["1/1","0/1"],["-1/1","0/1"]]}')
    assert code == 0
    assert json.loads(out) == {"format": "plsurf/path/1", "dim": 2, "word": []}
    code, again, _ = run(["path-reduce"], out)
    assert again == out


@pytest.mark.parametrize("bad", ['{"dim":2,"word":[["1/0","0"]]}', "not json", '{"dim":2,"word":[["1"]]}', "[]"])
def test_malformed_input_exits_2(bad):
    code, out, err = run(["path-reduce"], bad)
    assert code == 2 and out == "" and err.startswith("error:")


def test_path_sig():
    _, out, _ = run(["path-sig", "--level", "2"], '{"dim":1,"word":[["1"]]}')
    assert json.loads(out)["signature"] == {"": "1", "1": "1", "11": "1/2"}
    _, out, _ = run(["path-sig"], '{"dim":3,"word":[]}')
    assert json.loads(out)["signature"] == {"": "1"}
    sq = '{"dim":2,"word":[["1","0"],["0","1"],["-1","0"],["0","-1"]]}'
    sig = json.loads(run(["path-sig", "--level", "2"], sq)[1])["signature"]
    assert sig["12"] == "1" and sig["21"] == "-1"


def test_surface_sig_tetrahedron():
    code, out, _ = run(["surface-sig", "--weight", "3"], doc("tetrahedron"))
    assert code == 0
    assert json.loads(out)["gamma"]["α=(1,0,0);(2,3)"] in ("1/6", "-1/6")


def test_thin_equiv_exit_codes(tmp_path):
    code, out, _ = run(["thin-equiv", "identity"], doc("fold"))
    assert code == 0 and json.loads(out)["verdict"] == "equal"
    code, out, _ = run(["thin-equiv", "-"], doc("tetrahedron"))
    assert code == 1 and json.loads(out)["witness"]
    code, _, _ = run(["thin-equiv", "identity"], doc("antipodal"))
    assert code == 0
    lhs, rhs = D.peiffer_pair()
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(cli.to_text(cli.dump_kites(lhs)))
    b.write_text(cli.to_text(cli.dump_kites(rhs)))
    assert run(["thin-equiv", str(a), str(b)])[0] == 0
    assert run(["thin-equiv", str(tmp_path / "missing.json")])[0] == 2
    assert run(["thin-equiv", "a", "b", "c"])[0] == 2


def test_triangulate_and_selfcheck():
    tri_in = {"format": "plsurf/triangulation-input/1", "dim": 3,
              "edges": [[["1", "1", "-1"], ["1", "1", "1"]]],
              "triangles": [[["0", "0", "0"], ["4", "0", "0"], ["0", "4", "0"]]]}
    code, out, _ = run(["triangulate"], json.dumps(tri_in))
    C = cli.load_plsc(json.loads(out))
    assert code == 0 and ("1", "1", "0") in {tuple(map(str, v)) for v in C.vertices}
    code, out, _ = run(["triangulate"], doc("fold"))
    assert code == 0 and json.loads(out)["faces"]
    code, out, _ = run(["selfcheck", "--samples", "5"])
    assert code == 0 and out.count("PASS") == 3


def test_threads_env_is_byte_identical():
    import os
    d = doc("random_nonnull", 2)
    env = dict(os.environ, PLSURF_THREADS="4")
    assert run(["surface-sig"], d, env)[1] == run(["surface-sig", "--threads", "1"], d)[1]
    bad = dict(os.environ, PLSURF_THREADS="many")
    assert run(["surface-sig"], d, bad)[0] == 2


# -- round trips -----------------------------------------------------------

@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_round_trips(seed):
    rng = random.Random(seed)
    X = D.random_word(rng)
    assert cli.load_kites(json.loads(cli.to_text(cli.dump_kites(X)))) == X
    w = D.random_tail(rng, 3, 5)
    assert cli.load_path(json.loads(cli.to_text(cli.dump_path(w)))) == w
    t = path_signature(w, 3)
    assert cli.load_tensor(json.loads(cli.to_text(cli.dump_tensor(t)))) == t
    s = surface_signature(X, 2, 4)
    assert cli.load_surface_sig(json.loads(cli.to_text(cli.dump_surface_sig(s, 2, 4)))) == (s, 2, 4)
    r = D.thin_equiv(X, D.scramble(X, rng, 2), 2, 3)
    text = cli.to_text(cli.dump_report(r, 3, 2, 3))
    assert cli.to_text(cli.dump_report(*cli.load_report(json.loads(text))[:1], 3, 2, 3)) == text


def test_plsc_round_trip():
    _, C, _ = D.compatible_representative(D.gen_example("random_nonnull", 4))
    text = cli.to_text(cli.dump_plsc(C, 3))
    assert cli.load_plsc(json.loads(text)) == C


def test_wide_dimension_keys():
    w = word(11, [tuple(int(i == j) for i in range(11)) for j in (10, 0)])
    d = cli.dump_tensor(path_signature(w, 2))
    assert "11,1" in d["signature"]
    assert cli.load_tensor(d) == path_signature(w, 2)
    assert isinstance(w, PLWord)
