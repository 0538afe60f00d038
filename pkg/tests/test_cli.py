import json

import pytest

from efxlab import generators
from efxlab.allocation import Allocation, Instance
from efxlab.circuits import identity
from efxlab.cli import main
from efxlab.pls_lab import FlipInstance
from efxlab.rng import SplitMix64
from efxlab.valuations import example1, example2, example3, valuation_from_json


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def ex3(tmp_path):
    return write(tmp_path / "ex3.json", Instance.identical_agents(example3(), 2).to_json())


def test_solve_greedy_example3(capsys, tmp_path, ex3):
    trace = tmp_path / "trace.log"
    code, rep = report(capsys, "solve", ex3, "--algo", "greedy", "--verify", "--trace", trace)
    assert code == 2
    assert rep["result"]["allocation"]["bundles"] == [[3], [0, 1, 2]]
    assert rep["result"]["verify"]["verdict"] == "violation"
    assert trace.read_text() == "1 0 3 16\n2 1 0 11\n3 1 1 15\n4 1 2 18\n"


def test_solve_leximin_example3(capsys, ex3):
    code, rep = report(capsys, "solve", ex3, "--algo", "leximin-local", "--verify")
    assert code == 0 and rep["result"]["verify"]["verdict"] == "ok"


def test_solve_brute_and_cut_and_choose(capsys, tmp_path):
    inst = Instance((valuation_from_json({"type": "additive", "weights": [3, 2, 1]}),
                     valuation_from_json({"type": "additive", "weights": [5, 1, 1]})))
    path = write(tmp_path / "two.json", inst.to_json())
    code, rep = report(capsys, "solve", path, "--algo", "cut-and-choose", "--verify")
    assert code == 0 and rep["result"]["allocation"]["bundles"] == [[1, 2], [0]]
    code, rep = report(capsys, "solve", path, "--algo", "cut-and-choose", "--cutter", "1", "--verify")
    assert code == 0
    code, rep = report(capsys, "solve", path, "--algo", "brute", "--verify")
    assert code == 0 and rep["efx_count"] > 0
    # greedy needs identical agents
    assert run(capsys, "solve", path, "--algo", "greedy")[0] == 4


def test_solve_empty_instance(capsys, tmp_path):
    path = write(tmp_path / "empty.json", Instance.identical_agents(valuation_from_json({"type": "additive", "weights": []}), 2).to_json())
    for algo in ("greedy", "leximin-local", "brute"):
        code, rep = report(capsys, "solve", path, "--algo", algo, "--verify")
        assert code == 0 and rep["result"]["allocation"]["bundles"] == [[], []]


def test_solve_out_and_determinism(capsys, tmp_path, ex3):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert main(["solve", ex3, "--algo", "greedy", "--random-ties", "--seed", "7", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 7
    code, rep = report(capsys, "solve", ex3, "--timing")
    assert "wall_time_s" in rep


def test_check_class_examples(capsys, tmp_path):
    e1 = write(tmp_path / "e1.json", example1().to_json())
    code, rep = report(capsys, "check-class", e1, "--property", "well-layered-at-price", "--prices", "1,1,2")
    assert code == 0 and rep["result"]["verdict"] == "fails"
    e2 = write(tmp_path / "e2.json", example2().to_json())
    code, rep = report(capsys, "check-class", e2, "--property", "submodular")
    assert rep["result"]["verdict"] == "fails"
    assert rep["result"]["witness"] == {"S": [], "T": [0], "x": 1}
    e3 = write(tmp_path / "e3.json", example3().to_json())
    code, rep = report(capsys, "check-class", e3, "--property", "wwl")
    assert rep["result"]["verdict"] == "fails"
    code, rep = report(capsys, "check-class", e3, "--property", "submodular")
    assert rep["result"]["verdict"] == "holds"
    assert run(capsys, "check-class", e1, "--property", "well-layered-at-price")[0] == 4


def test_check_class_limit(capsys, tmp_path):
    path = write(tmp_path / "big.json", {"type": "additive", "weights": [1] * 12})
    assert run(capsys, "check-class", path, "--property", "wwl", "--limit", "wwl_m=8")[0] == 3
    assert run(capsys, "--limit", "wwl_m=8", "check-class", path, "--property", "wwl")[0] == 3


def test_gen(capsys, tmp_path):
    code, first = report(capsys, "gen", "coverage-submodular", 5, "--seed", 3)
    code, again = report(capsys, "gen", "coverage-submodular", 5, "--seed", 3)
    assert code == 0 and first == again
    path = write(tmp_path / "cov.json", first)
    assert report(capsys, "check-class", path, "--property", "submodular")[1]["result"]["verdict"] == "holds"
    path = write(tmp_path / "add.json", report(capsys, "gen", "additive", 3, "--seed", 1)[1])
    assert report(capsys, "check-class", path, "--property", "wwl")[1]["result"]["verdict"] == "holds"
    code, inst = report(capsys, "gen", "oxs", 4, "--agents", 3)
    assert inst["n"] == 3
    code, flip = report(capsys, "gen", "flip-circuit", 3, "--gates", 10)
    assert flip["kind"] == "flip" and len(flip["circuit"]["gates"]) <= 10
    assert run(capsys, "gen", "nonsense", 3)[0] == 4


def test_reduce_and_eval(capsys, tmp_path):
    circ = write(tmp_path / "id3.json", identity(3).to_json())
    code, art = report(capsys, "reduce", "flip-to-kneser", circ)
    assert code == 0 and art["backmap"]["kind"] == "prefix"
    kpath = write(tmp_path / "kneser.json", art)
    # u = 101, ~u = 010, b = 0: cost 2 * C_F(u) = 2 * 5
    code, ev = report(capsys, "eval", kpath, "--x", "1010100")
    assert ev["value"] == 10 and ev["value"] % 2 == 0
    code, efx = report(capsys, "reduce", "kneser-to-efx", kpath)
    assert efx["backmap"] == {"kind": "size-k-bundle", "k": 3}
    epath = write(tmp_path / "efx.json", efx)
    code, rep = report(capsys, "check-class", epath, "--property", "submodular")
    assert rep["result"]["verdict"] == "holds"
    k2 = write(tmp_path / "k2.json", identity(5).to_json())
    code, efx2 = report(capsys, "reduce", "kneser-to-efx", k2, "--k", 2)
    assert efx2["target"]["n"] == 2
    assert run(capsys, "reduce", "kneser-to-efx", k2)[0] == 4
    assert run(capsys, "reduce", "kneser-to-efx", k2, "--k", 3)[0] == 4


def test_eval_dsl_and_bad_bits(capsys, tmp_path):
    dsl = tmp_path / "half.dsl"
    dsl.write_text("x = INPUT 0\ny = INPUT 1\ns = XOR x y\nc = AND x y\noutputs s c\n")
    assert report(capsys, "eval", dsl, "--x", "11")[1]["value"] == 2
    assert run(capsys, "eval", dsl, "--x", "1")[0] == 4
    assert run(capsys, "eval", dsl, "--x", "12")[0] == 4


def test_pipeline(capsys, tmp_path):
    circ = write(tmp_path / "id3.json", identity(3).to_json())
    code, rep = report(capsys, "pipeline", circ)
    assert code == 0 and rep["result"]["u"] == [0, 0, 0] and rep["result"]["verified"] is True
    flip = write(tmp_path / "flip.json", FlipInstance(identity(3)).to_json())
    assert report(capsys, "pipeline", flip, "--solver", "brute")[1]["result"]["verified"] is True
    wide = write(tmp_path / "wide.json", identity(8).to_json())
    assert run(capsys, "pipeline", wide)[0] == 3


def test_search(capsys, tmp_path):
    circ = write(tmp_path / "id3.json", identity(3).to_json())
    code, rep = report(capsys, "search", circ, "--start", "111")
    assert rep["result"]["trajectory"] == ["111", "110", "100", "000"]
    code, rep = report(capsys, "search", circ, "--start", "111", "--pivot", "first")
    assert rep["result"]["trajectory"][1] == "011" and rep["result"]["local_optimum"]
    k = write(tmp_path / "id5.json", identity(5).to_json())
    code, rep = report(capsys, "search", k, "--k", 2)
    assert rep["result"]["local_optimum"] and rep["result"]["point"].count("1") == 2
    assert run(capsys, "search", k, "--k", 2, "--start", "11100")[0] == 4


def test_parse_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "solve", bad)[0] == 4
    assert run(capsys, "solve", tmp_path / "missing.json")[0] == 4
    assert run(capsys, "solve")[0] == 4
    floats = write(tmp_path / "f.json", {"type": "additive", "weights": [0.5]})
    assert run(capsys, "solve", floats)[0] == 4


def test_bench(capsys, tmp_path):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    rng = SplitMix64(60)
    for i in range(50):
        v = generators.budget_additive(rng, rng.randint(1, 7))
        write(corpus / f"ba{i:02d}.json", Instance.identical_agents(v, rng.randint(2, 4)).to_json())
    out = tmp_path / "bench.csv"
    assert main(["bench", str(corpus), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "file,algo,m,n,steps,time_s,efx_verified"
    assert len(lines) == 51 and all(line.endswith(",true") for line in lines[1:])

    ex = tmp_path / "ex"
    ex.mkdir()
    write(ex / "example3.json", Instance.identical_agents(example3(), 2).to_json())
    code, out, _ = run(capsys, "bench", ex, "--algo", "greedy,leximin-local")
    rows = out.splitlines()[1:]
    assert rows[0].startswith("example3.json,greedy,4,2,") and rows[0].endswith(",false")
    assert rows[1].endswith(",true")

    empty = tmp_path / "none"
    empty.mkdir()
    code, out, _ = run(capsys, "bench", empty)
    assert code == 0 and out == "file,algo,m,n,steps,time_s,efx_verified\n"


def test_round_trips(tmp_path):
    rng = SplitMix64(61)
    for kind in generators.KINDS:
        v = generators.generate(kind, 4, rng.randint(0, 100))
        assert valuation_from_json(json.loads(json.dumps(v.to_json()))).table() == v.table()
    X = Allocation((0b01, 0b10, 0), 2)
    assert Allocation.from_json(json.loads(json.dumps(X.to_json()))) == X
