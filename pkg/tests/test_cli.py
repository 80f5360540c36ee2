import csv
import io
import json
import subprocess
import sys

import pytest

from mkpolar.cli import main


@pytest.fixture(scope="module")
def spec48(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "pc48.json"
    rc = main(["construct", "--n", "48", "--k", "24", "--kernels", "3,2,2,2,2",
               "--frames", "4000", "--out", str(path)])
    assert rc == 0
    return path


def read_csv(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_construct_writes_spec(spec48):
    d = json.loads(spec48.read_text())
    assert d["n"] == 48 and d["k"] == 24
    assert d["kernels"] == "3,2,2,2,2"
    assert len(d["frozen"]) == 24


def test_construct_rejects_bad_length(capsys):
    assert main(["construct", "--n", "7", "--k", "3"]) == 1
    assert "7" in capsys.readouterr().err


def test_construct_rejects_bad_k():
    assert main(["construct", "--n", "12", "--k", "12", "--kernels", "3,2,2", "--frames", "10"]) == 1


def test_construct_accepts_72(tmp_path):
    out = tmp_path / "pc72.json"
    rc = main(["construct", "--n", "72", "--k", "36", "--kernels", "3,2,2,2,3",
               "--frames", "2000", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["kernels"] == "3,2,2,2,3"


def test_construct_searches_orders(tmp_path):
    out = tmp_path / "pc12.json"
    rc = main(["construct", "--n", "12", "--k", "6", "--frames", "1000",
               "--search-frames", "500", "--out", str(out)])
    assert rc == 0
    assert json.loads(out.read_text())["n"] == 12


def test_usage_errors_exit_1():
    with pytest.raises(SystemExit) as exc:
        main(["construct", "--n", "abc"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_simulate_high_snr_is_error_free(spec48, capsys):
    assert main(["simulate", str(spec48), "--ebn0", "12", "--frames", "1000"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert rows == [{"ebn0_db": "12", "frames": "1000", "bit_errors": "0",
                     "frame_errors": "0", "ber": "0.000000e+00", "fer": "0.000000e+00"}]


def test_simulate_deterministic_across_workers(spec48, tmp_path):
    outs = []
    for workers in ("1", "2", "1"):
        out = tmp_path / f"w{workers}_{len(outs)}.csv"
        rc = main(["simulate", str(spec48), "--ebn0", "1,2", "--frames", "3000",
                   "--frame-errors", "50", "--seed", "4", "--workers", workers,
                   "--out", str(out)])
        assert rc == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    rows = read_csv(outs[0].decode())
    assert int(rows[0]["frame_errors"]) >= 50


def test_simulate_quantized_and_frames_out(spec48, tmp_path):
    out = tmp_path / "s.csv"
    frames = tmp_path / "f.csv"
    rc = main(["simulate", str(spec48), "--ebn0", "3", "--frames", "1500", "--q", "5",
               "--frame-errors", "0", "--timing", "--out", str(out),
               "--frames-out", str(frames)])
    assert rc == 0
    summary = read_csv(out.read_text())
    assert "wall_seconds" in summary[0]
    per_frame = read_csv(frames.read_text())
    assert len(per_frame) == 1500
    assert sum(int(r["frame_error"]) for r in per_frame) == int(summary[0]["frame_errors"])


def test_simulate_baseline(spec48, capsys):
    rc = main(["simulate", str(spec48), "--ebn0", "12", "--frames", "1000",
               "--baseline", "puncture", "--construct-frames", "2000"])
    assert rc == 0
    assert read_csv(capsys.readouterr().out)[0]["frame_errors"] == "0"


def test_corrupted_spec_rejected(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 6, "k": 3, "kernels": "2,3", "frozen": [0, 1, 2],
                               "info": [2, 3, 4]}))
    assert main(["roundtrip", str(bad)]) == 1
    assert main(["simulate", str(bad), "--ebn0", "1"]) == 1
    (tmp_path / "junk.json").write_text("{not json")
    assert main(["roundtrip", str(tmp_path / "junk.json")]) == 1
    assert main(["roundtrip", str(tmp_path / "missing.json")]) == 1


@pytest.mark.parametrize("kernels", ["2,3", "3,2", "2"])
def test_roundtrip_passes(kernels, capsys):
    assert main(["roundtrip", "--kernels", kernels]) == 0
    assert capsys.readouterr().out.startswith("PASS")


def test_roundtrip_spec(spec48, capsys):
    assert main(["roundtrip", str(spec48), "--samples", "500"]) == 0


def test_complexity_table(capsys):
    assert main(["complexity", "--max-terms", "10"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert list(rows[0]) == ["n", "stages", "mk_metric", "mother_metric", "gain_pct",
                             "comparators", "adders", "register_bits"]
    row768 = next(r for r in rows if r["n"] == "768")
    assert row768["gain_pct"] == "32.5"


def test_complexity_single(capsys):
    assert main(["complexity", "--n", "64", "--q", "5"]) == 0
    row = read_csv(capsys.readouterr().out)[0]
    assert row["register_bits"] == "448"
    assert main(["complexity", "--n", "48", "--kernels", "3,2,2,2,2"]) == 0
    row = read_csv(capsys.readouterr().out)[0]
    assert (row["mk_metric"], row["mother_metric"]) == ("240", "384")


def test_enumerate(capsys):
    assert main(["enumerate", "--max-terms", "2"]) == 0
    rows = read_csv(capsys.readouterr().out)
    assert [(r["M"], r["N"]) for r in rows] == [("1", "2"), ("1", "3"),
                                                ("2", "4"), ("2", "6"), ("2", "9")]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "mkpolar", "enumerate", "--max-terms", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines() == ["M,N", "1,2", "1,3"]
