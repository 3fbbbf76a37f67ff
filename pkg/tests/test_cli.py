import json

import pytest

from threeqrb.cli import main
from threeqrb.config import bundled_config, load_config, parse_config
from threeqrb.persist import read_raw_csv, results_from_csv, slug
from threeqrb.sim import ConfigError

SMALL = ["{[0],[1],[2]}", "{[0,1],[2]}", "{[0,2],[1]}", "{[1,2],[0]}", "{[0,1,2]}"]


def write_config(path, noise, device="paper-device:A", seeds=2, partitions=SMALL):
    exps = [{"partition": p, "seeds": seeds, "lengths": _lengths(p)} for p in partitions]
    cfg = {"seed": 5, "synth_samples": 100,
           "runs": [{"name": "A", "device": device, "noise": noise, "experiments": exps}]}
    path.write_text(json.dumps(cfg))
    return path


def _lengths(label):
    if label == "{[0,1,2]}":
        return [1, 2, 4, 8]
    if label == "{[0],[1],[2]}":
        return [1, 10, 50, 150]
    return [1, 5, 15, 40]


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    cfg = write_config(d / "cfg.json", {"depol_1q": 1e-3, "depol_2q": 1e-2})
    assert main(["run", "--config", str(cfg), "--out", str(d / "out")]) == 0
    return d


def test_run_writes_all_outputs(run_dir):
    a = run_dir / "out" / "A"
    assert (a / "raw.csv").read_text().splitlines()[0] == "partition,subset,m,seed,survival"
    summary = json.loads((a / "summary.json").read_text())
    assert summary["schema"] == 1 and summary["seed"] == 5
    assert summary["config"]["runs"][0]["name"] == "A"
    assert summary["prediction"]["epc"] > 0 and summary["comparison"]["label"] == "A"
    curve = a / "curves" / f"{slug('{[0,1],[2]}')}__{slug('[2]')}.csv"
    header = curve.read_text().splitlines()[0].split(",")
    assert header[:4] == ["m", "mean", "stderr", "fit"] and header[4:] == ["seed_0", "seed_1"]
    assert "coherence limit" in (a / "table1.txt").read_text()
    assert "predicted" in (a / "table2.txt").read_text()


def test_rerun_is_byte_identical(run_dir, tmp_path):
    assert main(["run", "--config", str(run_dir / "cfg.json"), "--out", str(tmp_path / "again")]) == 0
    for name in ("raw.csv", "summary.json", "table1.txt", "table2.txt"):
        assert (tmp_path / "again" / "A" / name).read_bytes() == (run_dir / "out" / "A" / name).read_bytes()


def test_threads_give_identical_raw_data(run_dir, tmp_path):
    args = ["run", "--config", str(run_dir / "cfg.json"), "--out", str(tmp_path / "t"), "--threads", "2"]
    assert main(args) == 0
    assert (tmp_path / "t" / "A" / "raw.csv").read_bytes() == (run_dir / "out" / "A" / "raw.csv").read_bytes()


def test_report_recomputes_tables_from_raw_csv(run_dir, capsys):
    a = run_dir / "out" / "A"
    capsys.readouterr()
    assert main(["report", str(a)]) == 0
    out = capsys.readouterr().out
    assert (a / "table1.txt").read_text().strip() in out
    assert (a / "table2.txt").read_text().strip() in out
    summary = json.loads((a / "summary.json").read_text())
    refit = results_from_csv(summary, a / "raw.csv")
    stored = {(e["label"], tuple(s["subset"])): s["epc"] for e in summary["experiments"] for s in e["subsets"]}
    for r in refit:
        for s in r.subsets:
            assert s.epc == stored[(r.label, s.subset)]


def test_predict_from_summary(run_dir, capsys):
    capsys.readouterr()
    assert main(["predict", str(run_dir / "out" / "A" / "summary.json")]) == 0
    out = capsys.readouterr().out
    summary = json.loads((run_dir / "out" / "A" / "summary.json").read_text())
    assert f"{summary['prediction']['epc']:.4g}" in out


def test_predict_without_2q_fits_fails(run_dir, tmp_path, capsys):
    summary = json.loads((run_dir / "out" / "A" / "summary.json").read_text())
    summary["experiments"] = [e for e in summary["experiments"] if e["label"] != "{[0,2],[1]}"]
    p = tmp_path / "partial.json"
    p.write_text(json.dumps(summary))
    assert main(["predict", str(p)]) == 2
    assert "2Q fits" in capsys.readouterr().err


def test_noiseless_device_gives_zero_epc(tmp_path):
    noise = {"enable_damping": False, "enable_zz": False}
    cfg = write_config(tmp_path / "c.json", noise, seeds=1, partitions=["{[0,1],[2]}", "{[0,1,2]}"])
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    summary = json.loads((tmp_path / "o" / "A" / "summary.json").read_text())
    for e in summary["experiments"]:
        for s in e["subsets"]:
            assert s["epc"] == 0.0 and s["fit"]["status"] == "degenerate"
    assert summary["prediction"] is None


def test_config_errors_report_field_and_exit_nonzero(tmp_path, capsys):
    bad = {"runs": [{"device": "paper-device:A", "experiments": [{"partition": "{[0,1]}", "seeds": 0}]}]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    assert main(["run", "--config", str(p)]) == 2
    assert "runs[0].experiments[0]" in capsys.readouterr().err
    p.write_text('{"runs": [\n  {"device": }]}')
    assert main(["run", "--config", str(p)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 2


def test_fit_failure_exits_nonzero(tmp_path, capsys):
    # every survival point equal to 0.25 is flat but not at 1: no decay to fit
    cfg = write_config(tmp_path / "c.json", {"depol_per_clifford": 1.0, "enable_damping": False,
                                             "enable_zz": False}, seeds=1, partitions=["{[0,1]}"])
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 3
    assert "fit error" in capsys.readouterr().err


def test_overrides_and_bundled_config():
    cfg = load_config("paper-device", observable="marginal", connectivity="omit:1-2")
    assert [r.name for r in cfg.runs] == ["A", "B"]
    assert len(cfg.runs[0].experiments) == 8
    assert all(s.observable_mode == "marginal" for s in cfg.runs[0].experiments)
    assert not cfg.runs[1].device.connectivity.coupled(1, 2)
    assert bundled_config()["runs"][1]["device"] == "paper-device:B"


def test_parse_config_rejects_unknown_fields():
    with pytest.raises(ConfigError, match=r"runs\[0\]"):
        parse_config({"runs": [{"device": "paper-device:A", "colour": 1}]})
    with pytest.raises(ConfigError, match="seed"):
        parse_config({"seed": -1, "runs": [{"device": "paper-device:A"}]})
    with pytest.raises(ConfigError, match="partition"):
        parse_config({"runs": [{"device": "paper-device:A", "experiments": [{"partition": "{[0,5]}"}]}]})


def test_synth_stats_command(capsys):
    assert main(["synth-stats", "--n", "2", "--samples", "300", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verified_fraction"] == 1.0 and data["n"] == 2
    assert main(["synth-stats", "--n", "3", "--connectivity", "omit:1-2", "--samples", "20"]) == 0
    assert "verified" in capsys.readouterr().out
    assert main(["synth-stats", "--n", "3", "--connectivity", "omit:0-0"]) == 2


def test_raw_csv_reader_reports_line(tmp_path):
    p = tmp_path / "raw.csv"
    p.write_text("partition,subset,m,seed,survival\n{[0]},[0],1,x,0.9\n")
    with pytest.raises(ValueError, match="line 2"):
        read_raw_csv(p)
