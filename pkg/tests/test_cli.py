import csv

import pytest

from cliquemst import edge, gen_graph, msf_oracle, read_graph, write_graph
from cliquemst.cli import METRICS_COLUMNS, main


def gen_file(tmp_path, name, *args):
    path = str(tmp_path / name)
    assert main(["gen", "--out", path, *args]) == 0
    return path


def test_gen_writes_deterministic_files(tmp_path):
    a = gen_file(tmp_path, "a.txt", "--n", "4", "--model", "complete", "--seed", "3")
    b = gen_file(tmp_path, "b.txt", "--n", "4", "--model", "complete", "--seed", "3")
    data = open(a, "rb").read()
    assert data == open(b, "rb").read()
    assert data.startswith(b"4 6\n")


def test_gen_to_stdout(capsys):
    assert main(["gen", "--n", "4", "--model", "complete"]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "4 6"
    assert len(out.splitlines()) == 7


def test_gen_forest_m_picks_tree_count(tmp_path):
    path = gen_file(tmp_path, "f.txt", "--n", "20", "--model", "forest", "--m", "16")
    g = read_graph(path)
    assert len(g.edges) == 16
    assert len(msf_oracle(g).edges) == 16


def test_gen_rejects_missing_model_parameter(capsys):
    assert main(["gen", "--n", "10", "--model", "gnp"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["gen", "--n", "4"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["sparsify", "--in", "x", "--k", "1", "--mode", "psychic"])
    assert err.value.code == 2


def test_missing_input_file_exits_2(capsys):
    assert main(["mst", "--in", "no-such-file"]) == 2
    assert "error:" in capsys.readouterr().err


def test_malformed_input_reports_line(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 9 1\n")
    assert main(["sparsify", "--in", str(bad), "--k", "1"]) == 2
    assert "line 2" in capsys.readouterr().err


def test_sparsify_metrics_csv(tmp_path):
    g = gen_file(tmp_path, "g.txt", "--n", "64", "--model", "gnp", "--p", "0.4", "--seed", "5")
    metrics = str(tmp_path / "m.csv")
    out = str(tmp_path / "sparse.txt")
    assert main(["sparsify", "--in", g, "--k", "3", "--metrics", metrics, "--out", out]) == 0
    with open(metrics, newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == METRICS_COLUMNS
    assert len(rows) == 5  # header, three iterations, total
    assert [r[0] for r in rows[1:]] == ["1", "2", "3", "total"]
    assert all(r[6] == "true" for r in rows[1:])
    assert all(r[5] == "" for r in rows[1:])  # charged mode never simulates
    survivors = read_graph(out)
    assert msf_oracle(survivors) == msf_oracle(read_graph(g))
    assert len(survivors.edges) == int(rows[3][3]) == int(rows[4][3])

    again = str(tmp_path / "m2.csv")
    assert main(["sparsify", "--in", g, "--k", "3", "--metrics", again]) == 0
    assert open(metrics, "rb").read() == open(again, "rb").read()


def test_sparsify_metrics_to_stdout(tmp_path, capsys):
    g = gen_file(tmp_path, "g.txt", "--n", "16", "--model", "complete")
    assert main(["sparsify", "--in", g, "--k", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(METRICS_COLUMNS)
    assert lines[1].startswith("1,1,120,")


def test_sparsify_k0_keeps_the_graph(tmp_path):
    g = gen_file(tmp_path, "g.txt", "--n", "24", "--model", "gnm", "--m", "100")
    out = str(tmp_path / "same.txt")
    assert main(["sparsify", "--in", g, "--k", "0", "--out", out]) == 0
    assert set(read_graph(out).edges) == set(read_graph(g).edges)


def test_sparsify_explicit_mode_reports_simulated_rounds(tmp_path):
    g = gen_file(tmp_path, "g.txt", "--n", "32", "--model", "gnp", "--p", "0.5")
    metrics = str(tmp_path / "m.csv")
    assert main(["sparsify", "--in", g, "--k", "2", "--mode", "explicit", "--metrics", metrics]) == 0
    with open(metrics, newline="") as fh:
        rows = list(csv.reader(fh))[1:]
    for row in rows:
        assert int(row[5]) >= int(row[4])


def test_mst_summary_and_verify_round_trip(tmp_path, capsys):
    g = gen_file(tmp_path, "g.txt", "--n", "16", "--model", "complete", "--seed", "9")
    forest = str(tmp_path / "forest.txt")
    assert main(["mst", "--in", g, "--out", forest, "--verify"]) == 0
    summary = capsys.readouterr().out
    assert "k=2" in summary and "forest_edges=15" in summary

    assert main(["verify", g, forest]) == 0
    assert capsys.readouterr().out.startswith("ok:")


def test_verify_rejects_wrong_forests(tmp_path, capsys):
    g = gen_file(tmp_path, "g.txt", "--n", "12", "--model", "gnp", "--p", "0.6", "--seed", "2")
    graph = read_graph(g)
    msf = msf_oracle(graph)

    short = tmp_path / "short.txt"
    write_graph(type(graph)(graph.n, msf.edges[:-1]), str(short))
    assert main(["verify", g, str(short)]) == 1
    assert "mismatch" in capsys.readouterr().out

    stray = tmp_path / "stray.txt"
    write_graph(type(graph)(graph.n, (edge(0, 1, 10**9),)), str(stray))
    assert main(["verify", g, str(stray)]) == 1
    assert "not in the graph" in capsys.readouterr().out

    small = tmp_path / "small.txt"
    small.write_text("3 0\n")
    assert main(["verify", g, str(small)]) == 1
    assert "n=" in capsys.readouterr().out
