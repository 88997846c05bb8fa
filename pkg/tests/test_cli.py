import json
import subprocess
import sys

import pytest

from coldtof import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compare_csv(capsys):
    code, out, _ = run(capsys, "compare", "--points", "20")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "t_s,pi_classical,pi_quantum_derived,pi_quantum_paper"
    assert len(lines) == 21


def test_classical_and_quantum_columns(capsys):
    _, out, _ = run(capsys, "classical", "--points", "16")
    assert out.splitlines()[0] == "t_s,pi_classical"
    _, out, _ = run(capsys, "quantum", "--points", "16", "--variant", "paper")
    assert out.splitlines()[0] == "t_s,pi_quantum_paper"
    _, out, _ = run(capsys, "quantum", "--points", "16", "--format", "json")
    payload = json.loads(out)
    assert payload["metadata"]["kind"] == "derived" and len(payload["pi_quantum_derived"]) == 16


def test_mean_json(capsys):
    _, out, _ = run(capsys, "mean", "--format", "json", "--points", "16")
    data = json.loads(out)
    assert data["tc"] == pytest.approx(0.2574, abs=1e-4)
    assert data["tau_classical"] == pytest.approx(0.24744, abs=2e-5)


def test_config_file_and_precedence(tmp_path, capsys):
    cfg = tmp_path / "li.cfg"
    cfg.write_text("# lithium cloud\nmass-amu = 6.941\ntemp_k=2.5e-6\nformat=json\npoints = 16\n")
    _, out, _ = run(capsys, "compare", "--config", str(cfg))
    meta = json.loads(out)["metadata"]
    assert meta["spec"]["input_units"]["mass_amu"] == pytest.approx(6.941)
    _, out, _ = run(capsys, "compare", "--config", str(cfg), "--mass-amu", "22.99")
    assert json.loads(out)["metadata"]["spec"]["input_units"]["mass_amu"] == pytest.approx(22.99)


def test_bad_config_reports_error(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour=blue\n")
    code, _, err = run(capsys, "mean", "--config", str(cfg))
    assert code != 0
    assert json.loads(err)["error"] == "ValueError"


def test_invalid_spec_exit_code(capsys):
    code, out, err = run(capsys, "mean", "--detector-z-cm", "30")
    assert code == 2 and out == ""
    obj = json.loads(err)
    assert obj["error"] == "SpecError" and "detector_z" in obj["message"] and obj["command"] == "mean"


def test_sweep_to_file(tmp_path, capsys):
    path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "sweep", "--axis", "mass", "--values", "6.941", "85.4678", "--points", "16",
                     "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0 and len(lines) == 3 and lines[1].startswith("mass,")


def test_sweep_sigma0_in_cm(capsys):
    _, out, _ = run(capsys, "sweep", "--axis", "sigma0", "--values", "1e-5", "2e-5", "--points", "16",
                    "--format", "json")
    rows = json.loads(out)["rows"]
    assert [r["value"] for r in rows] == pytest.approx([1e-7, 2e-7])


def test_figure_json(capsys):
    _, out, _ = run(capsys, "figure", "fig3", "--points", "16", "--format", "json")
    tables = json.loads(out)
    assert len(tables) == 2 and all(len(t["rows"]) == 5 for t in tables)


def test_oracle_report(capsys):
    _, out, _ = run(capsys, "oracle", "--format", "json", "--seed", "3")
    report = json.loads(out)
    assert report["monte_carlo"]["ks_statistic"] < 0.002
    assert report["current_definition_max_relative"] < 1e-8
    assert report["variant_discrepancy"]["derived"]["max_deviation_over_max"] < 1e-8
    assert report["variant_discrepancy"]["paper"]["max_deviation_over_max"] > 0.1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "coldtof", "mean", "--points", "16"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0] == "key,value"
