import subprocess
import sys

import pytest

from subsetdfa import format_dictionary, read_automaton, read_dictionary
from subsetdfa.cli import main


@pytest.fixture
def files(tmp_path, e1, e3):
    (tmp_path / "e1.sd").write_text(format_dictionary(e1))
    (tmp_path / "e3.sd").write_text(format_dictionary(e3))
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_shape(tmp_path, capsys):
    out = tmp_path / "d.sd"
    code, _, _ = run(capsys, "gen", "-m", 32, "-n", 10000, "-s", 2, "--dl", 2, "--dh", 2, "-f", 0.2, "--seed", 1, "-o", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "subsetdict v1 sigma=2"
    assert len(lines) == 10001
    assert read_dictionary(out).n == 10000


def test_gen_singletons_only(capsys):
    code, out, _ = run(capsys, "gen", "-m", 8, "-n", 50, "-s", 5, "--dl", 2, "--dh", 4, "-f", 0, "--seed", 3)
    body = out.splitlines()[1:]
    assert code == 0 and all("," not in l and "-" not in l and "*" not in l for l in body)


def test_gen_delta_mode(capsys):
    code, out, _ = run(capsys, "gen", "--mode", "delta", "-m", 16, "-n", 100, "-s", 12, "--delta", 1, "--seed", 7)
    assert code == 0
    for tok in (t for l in out.splitlines()[1:] for t in l.split()):
        lo, _, hi = tok.partition("-")
        assert "," not in tok and int(hi or lo) - int(lo) <= 2


def test_gen_wildcard_mode(capsys):
    code, out, _ = run(capsys, "gen", "--mode", "wildcard", "-m", 6, "-n", 10, "-s", 4, "-k", 2, "--seed", 7)
    assert code == 0
    assert all(l.split().count("*") == 2 for l in out.splitlines()[1:])


def test_build_summaries(files, capsys):
    code, out, _ = run(capsys, "build", "--in", files / "e1.sd", "--kind", "pm")
    assert code == 0
    assert out.startswith("states=6 accepting=3 build_ms=") and out.strip().endswith("dprime=3")
    _, out, _ = run(capsys, "build", "--in", files / "e3.sd", "--kind", "pm")
    assert out.startswith("states=4 ")
    _, out, _ = run(capsys, "build", "--in", files / "e3.sd", "--kind", "pm", "--pc")
    assert out.startswith("states=2 ") and out.strip().endswith("dprime=8")


def test_build_min_with_pc_is_usage_error(files, capsys):
    code, _, err = run(capsys, "build", "--in", files / "e1.sd", "--kind", "min", "--pc")
    assert code == 1 and "--pc" in err


def test_build_format_error_has_line(tmp_path, capsys):
    bad = tmp_path / "bad.sd"
    bad.write_text("subsetdict v1 sigma=2\n0 1\n0 7\n")
    code, _, err = run(capsys, "build", "--in", bad)
    assert code == 2 and "line 3" in err


def test_build_budget_exit_code(tmp_path, capsys):
    d = tmp_path / "cube.sd"
    d.write_text("subsetdict v1 sigma=2\n" + " ".join(["*"] * 12) + "\n")
    code, _, err = run(capsys, "build", "--in", d, "--kind", "trie", "--max-states", 50)
    assert code == 3 and "depth" in err


def test_query_answers(files, capsys):
    pm, mn = files / "pm.dfa", files / "min.dfa"
    run(capsys, "build", "--in", files / "e1.sd", "--kind", "pm", "--out", pm)
    run(capsys, "build", "--in", files / "e1.sd", "--kind", "min", "--out", mn)
    assert run(capsys, "query", "--index", pm, 0, 1)[1] == "0,1\n"
    assert run(capsys, "query", "--index", pm, 1, 0)[1] == "-\n"
    assert run(capsys, "query", "--index", mn, 1, 1)[1] == "yes\n"
    qf = files / "q.txt"
    qf.write_text("0 0\n1 1\n1 0\n0\n")
    assert run(capsys, "query", "--index", pm, "--queries", qf)[1] == "0\n1\n-\n-\n"
    assert run(capsys, "query", "--index", mn, "--queries", qf)[1] == "yes\nyes\nno\nno\n"
    qf.write_text("0 1\n0 2\n")
    code, _, err = run(capsys, "query", "--index", pm, "--queries", qf)
    assert code == 2 and "line 2" in err


def test_query_compressed_index_needs_dictionary(files, capsys):
    idx = files / "pc.dfa"
    run(capsys, "build", "--in", files / "e3.sd", "--kind", "pm", "--pc", "--out", idx)
    assert run(capsys, "query", "--index", idx, 0, 1, 0)[0] == 1
    assert run(capsys, "query", "--index", idx, "--dict", files / "e3.sd", 0, 1, 0)[1] == "0\n"


def test_query_file_matches_in_memory(tmp_path, capsys):
    from instances import grid_instance
    from subsetdfa import build_automaton, match_retrieve, write_dictionary
    import numpy as np

    d = grid_instance(14)
    write_dictionary(d, tmp_path / "d.sd")
    run(capsys, "build", "--in", tmp_path / "d.sd", "--out", tmp_path / "d.dfa", "--pc")
    rng = np.random.default_rng(1)
    qs = [rng.integers(0, d.sigma, size=int(rng.integers(0, d.max_length + 1))).tolist() for _ in range(100)]
    (tmp_path / "q").write_text("".join(" ".join(map(str, q)) + "\n" for q in qs))
    _, out, _ = run(capsys, "query", "--index", tmp_path / "d.dfa", "--dict", tmp_path / "d.sd", "--queries", tmp_path / "q")
    a = build_automaton(d, pc=True)
    expected = [",".join(map(str, match_retrieve(a, q))) or "-" for q in qs]
    assert out.splitlines() == expected
    assert read_automaton(tmp_path / "d.dfa", d).same_structure(a)


def test_stats(files, capsys):
    idx = files / "pm.dfa"
    run(capsys, "build", "--in", files / "e1.sd", "--out", idx)
    assert run(capsys, "stats", "--index", idx)[1] == "depth,states\n0,1\n1,2\n2,3\n"
    hist = files / "h.csv"
    code, out, _ = run(capsys, "stats", "--index", idx, "--hist", hist, "--n", 10000, "--sigma", 4, "--delta", 1.6)
    assert code == 0 and hist.read_text().startswith("depth,states\n")
    assert out.strip() == "alpha=10.05"


def test_bench_rows(capsys):
    code, out, _ = run(capsys, "bench", "-m", 10, "-n", 200, "-s", 4, "--dl", 2, "--dh", 3, "-f", 0.3, "--methods", "pm,min,pmpc", "--seed", 4)
    rows = [l.split(",") for l in out.splitlines()]
    assert code == 0 and rows[0] == ["method", "states", "time_ms", "dprime"]
    states = {r[0]: int(r[1]) for r in rows[1:]}
    assert states["min"] <= states["pm"] and states["pmpc"] <= states["pm"]
    assert len({r[3] for r in rows[1:]}) == 1


def test_bench_budget_row_continues(capsys):
    code, out, err = run(
        capsys, "bench", "-m", 16, "-n", 50, "-s", 4, "--dl", 4, "--dh", 4, "-f", 0.5,
        "--methods", "trie,pmpc", "--max-states", 5000, "--no-timing",
    )
    lines = out.splitlines()
    assert code == 0 and lines[1] == "trie,-,-,-" and lines[2].startswith("pmpc,")
    assert "budget" in err


def test_bench_unknown_method(capsys):
    code, _, _ = run(capsys, "bench", "-m", 4, "-n", 4, "-s", 2, "--methods", "dawg")
    assert code == 1


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["build"])
    assert exc.value.code == 1


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "subsetdfa", "build", "--in", str(files / "e1.sd")],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.startswith("states=6 ")
