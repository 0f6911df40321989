import json

import pytest

from splitlab.cli import EXIT_BUDGET, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from splitlab.report import LINE_HEADER, MODEL_HEADER, TRACE_HEADER


def test_model_run_stdout(capsys):
    assert main(["model", "run", "--m0", "100", "--n0", "60", "--k0", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    lines = out.splitlines()
    assert lines[0] == ",".join(MODEL_HEADER)
    summary = json.loads(out[out.index("{"):])
    assert summary["class"] == "easy"


def test_model_run_files(tmp_path, capsys):
    out = tmp_path / "run.csv"
    png = tmp_path / "run.png"
    code = main(["model", "run", "--m0", "388", "--n0", "80", "--k0", "3",
                 "--out", str(out), "--plot", str(png)])
    assert code == EXIT_OK
    assert out.read_text().startswith(",".join(MODEL_HEADER))
    summary = json.loads((tmp_path / "run.summary.json").read_text())
    assert summary["class"] == "hard"
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_model_run_bad_k0(capsys):
    assert main(["model", "run", "--m0", "10", "--n0", "20", "--k0", "1.5"]) == EXIT_USAGE
    assert "k0 must be ≥ 2" in capsys.readouterr().err


def test_model_run_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        main(["model", "run", "--m0", "100", "--n0", "60", "--k0", "4", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_scan_and_fit(tmp_path, capsys):
    out = tmp_path / "line.csv"
    code = main(["model", "scan", "--k", "3", "--n-from", "50", "--n-to", "150", "--n-step", "50",
                 "--fit", "--out", str(out), "--plot", str(tmp_path / "line.png")])
    assert code == EXIT_OK
    rows = out.read_text().splitlines()
    assert rows[0] == ",".join(LINE_HEADER) and len(rows) == 4
    assert all(r.endswith(",ok") for r in rows[1:])
    fit = json.loads((tmp_path / "line.fit.json").read_text())
    capsys.readouterr()
    assert main(["model", "fit", str(out)]) == EXIT_OK
    refit = json.loads(capsys.readouterr().out)
    assert refit["exponent"] == pytest.approx(fit["exponent"], rel=1e-9)
    assert (tmp_path / "line.png").exists()


def test_scan_requires_grid(capsys):
    assert main(["model", "scan", "--k", "3"]) == EXIT_USAGE


def test_kscan(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["model", "kscan", "--n", "100", "--k", "3", "4", "--out", str(out)]) == EXIT_OK
    rows = out.read_text().splitlines()
    assert len(rows) == 3
    mcs = [float(r.split(",")[4]) for r in rows[1:]]
    assert mcs[0] < mcs[1]


def test_fit_missing_file(tmp_path):
    assert main(["model", "fit", str(tmp_path / "nope.csv")]) == EXIT_IO


def test_gen_round_trip(tmp_path, capsys):
    out = tmp_path / "f.cnf"
    assert main(["gen", "--n", "20", "--m", "40", "--k", "3", "--seed", "0x10", "--out", str(out)]) == EXIT_OK
    assert out.read_text().startswith("p cnf 20 40\n")
    assert "m=40" in capsys.readouterr().out
    again = tmp_path / "g.cnf"
    main(["gen", "--n", "20", "--m", "40", "--k", "3", "--seed", "16", "--out", str(again)])
    assert out.read_bytes() == again.read_bytes()


def test_gen_bad_k(capsys):
    assert main(["gen", "--n", "4", "--m", "3", "--k", "5"]) == EXIT_USAGE


def test_gen_bad_seed():
    with pytest.raises(SystemExit) as info:
        main(["gen", "--n", "4", "--m", "3", "--k", "2", "--seed", "-1"])
    assert info.value.code == 2


def test_split_unsat(tmp_path, capsys):
    f = tmp_path / "u.cnf"
    f.write_text("p cnf 1 2\n1 0\n-1 0\n")
    trace = tmp_path / "t.csv"
    assert main(["split", "run", str(f), "--trace", str(trace)]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "UNSAT"
    assert trace.read_text().splitlines()[0] == ",".join(TRACE_HEADER)


def test_split_budget(tmp_path, capsys):
    f = tmp_path / "big.cnf"
    main(["gen", "--n", "40", "--m", "200", "--k", "3", "--out", str(f)])
    capsys.readouterr()
    code = main(["split", "run", str(f), "--reductions", "none", "--budget", "100"])
    assert code == EXIT_BUDGET
    assert capsys.readouterr().out.strip() == "BUDGET"


def test_split_parse_error(tmp_path, caplog):
    f = tmp_path / "bad.cnf"
    f.write_text("p cnf 2 1\n1 5 0\n")
    assert main(["split", "run", str(f)]) == EXIT_USAGE
    assert "line 2" in caplog.text


def test_split_missing_file(tmp_path):
    assert main(["split", "run", str(tmp_path / "none.cnf")]) == EXIT_IO


def test_compare(tmp_path, capsys):
    out = tmp_path / "cmp.csv"
    code = main(["compare", "--n", "12", "--m", "30", "--k", "3", "--trials", "10",
                 "--out", str(out), "--plot", str(tmp_path / "cmp.png")])
    assert code == EXIT_OK
    metrics = json.loads((tmp_path / "cmp.metrics.json").read_text())
    assert metrics["trials"] == 10 and len(metrics["per_trial"]) == 10
    assert (tmp_path / "cmp.png").stat().st_size > 0


def test_jobs_must_be_positive():
    with pytest.raises(SystemExit):
        main(["model", "scan", "--k", "3", "--n", "50", "--jobs", "0"])


def test_output_to_missing_dir_is_io_error(tmp_path):
    target = tmp_path / "no" / "such" / "dir.csv"
    assert main(["model", "run", "--m0", "10", "--n0", "20", "--k0", "3", "--out", str(target)]) == EXIT_IO
    assert not target.exists()
