import io
import json

from toucher_isolator.cli import EXIT_CAP, EXIT_FAIL, EXIT_OK, EXIT_QUIT, EXIT_USAGE, main

P6 = "# path on six vertices\n6 5\n0 1\n1 2\n2 3\n3 4\n4 5\n"
C5 = "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n"
P2 = "2 1\n0 1\n"
P3 = "3 2\n0 1\n1 2\n"


def run(argv, stdin=""):
    out = io.StringIO()
    code = main(argv, stdin=io.StringIO(stdin), stdout=out)
    return code, out.getvalue()


def test_solve(write_graph_file):
    for text, value in [(P6, "1"), (C5, "1"), (P2, "0")]:
        code, out = run(["solve", "--graph", write_graph_file("g.txt", text)])
        assert code == EXIT_OK and out.strip() == value


def test_solve_verbose_prints_line(write_graph_file):
    code, out = run(["solve", "--graph", write_graph_file("p6.txt", P6), "-v"])
    lines = out.splitlines()
    assert lines[0] == "1" and len(lines) == 6 and lines[1].startswith("T e")


def test_solve_family_json():
    code, out = run(["solve", "--family", "all-trees", "--n", "5", "--format", "json"])
    assert code == EXIT_OK
    assert [d["value"] for d in json.loads(out)] == [1, 1, 2]


def test_simulate():
    code, out = run(["simulate", "--family", "path", "--n", "6", "--toucher", "greedy", "--isolator", "theorem"])
    assert code == EXIT_OK and int(out.splitlines()[-1].split()[1]) >= 1
    code, out = run(["simulate", "--family", "cycle", "--n", "5", "--toucher", "optimal", "--isolator", "optimal"])
    assert out.splitlines()[-1] == "score 1"
    argv = ["simulate", "--family", "path", "--n", "9", "--toucher", "random:3", "--isolator", "random:3"]
    assert run(argv) == run(argv)


def test_verify_exit_codes(tmp_path):
    code, out = run(["verify", "paths", "--max-n", "12"])
    assert code == EXIT_OK and out.startswith("PASS path_cycle")
    code, _ = run(["verify", "surgery", "--max-m", "4", "--samples", "3", "--format", "csv",
                   "--out", str(tmp_path / "r.csv")])
    assert code == EXIT_OK
    assert (tmp_path / "r.csv").read_text().startswith("experiment,instance,expected,actual,pass")
    assert run(["verify", "paths", "--max-n", "99"])[0] == EXIT_CAP


def test_usage_errors(write_graph_file):
    assert run(["solve"])[0] == EXIT_USAGE
    assert run(["frobnicate"])[0] == EXIT_USAGE
    assert run(["solve", "--graph", "/nonexistent/g.txt"])[0] == EXIT_USAGE
    assert run(["solve", "--graph", write_graph_file("bad.txt", "2 1\n0 0\n")])[0] == EXIT_USAGE
    assert run(["verify", "nothing"])[0] == EXIT_USAGE
    assert run(["simulate", "--family", "cycle", "--n", "5", "--isolator", "theorem"])[0] == EXIT_USAGE


def test_solve_cap():
    assert run(["solve", "--family", "path", "--n", "30"])[0] == EXIT_CAP


def test_enumerate():
    code, out = run(["enumerate", "--family", "all-trees", "--max-n", "4"])
    assert code == EXIT_OK and out.count("# T4.") == 2
    code, out = run(["enumerate", "--family", "all-forests", "--max-m", "3", "--format", "csv"])
    assert len(out.splitlines()) == 1 + 4  # 3P2, P2+P3, P4, S4


def test_play_human_toucher(write_graph_file):
    code, out = run(["play", "--graph", write_graph_file("p3.txt", P3)], stdin="e1\n")
    assert code == EXIT_OK
    assert "engine claims e2" in out and "score 1" in out


def test_play_reprompts_on_claimed_edge(write_graph_file):
    path = write_graph_file("p3.txt", P3)
    code, out = run(["play", "--graph", path, "--toucher", "optimal", "--isolator", "human"], stdin="e1\nfoo\ne2\n")
    assert code == EXIT_OK
    assert out.count("not a free edge") == 2


def test_play_quit_flushes_transcript(tmp_path, write_graph_file):
    save = tmp_path / "t.txt"
    code, out = run(["play", "--graph", write_graph_file("p6.txt", P6), "--save", str(save)], stdin="e1\nquit\n")
    assert code == EXIT_QUIT and code != EXIT_FAIL
    assert save.read_text().splitlines()[0] == "T e1"
    assert "transcript:" in out
