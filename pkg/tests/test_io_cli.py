from __future__ import annotations

import csv
import json

import numpy as np
import pytest

from nippas.cli import EXIT_ERROR, EXIT_OK, EXIT_STALLED, main
from nippas.driver import ConvergenceRecord
from nippas.io import (ConfigError, dump_surrogate, fmt, history_rows, load_surrogate, parse_config,
                       read_points)
from nippas.surrogate import build
from nippas.geometry import BoundingBox

TOY = """
[model]
name = analytic_toy
function = constant
[run]
max_nodes = 5
[swarm]
n_particles = 20
max_iters = 20
"""

SSAD = """
[model]
name = steady_ad
profile = Re1
n_pde = 199
qoi = mid
[run]
epsilon = 1e-4
max_nodes = 60
seed = 3
[swarm]
n_particles = 40
max_iters = 60
[errors]
n_mc = 200
"""


def write(tmp_path, text, name="cfg.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize("text,key", [
    (TOY.replace("max_nodes = 5", "epsilon = -1"), "run.epsilon"),
    (TOY.replace("max_nodes = 5", "max_nodes = 0"), "run.max_nodes"),
    (TOY.replace("max_nodes = 5", "max_nodes = many"), "run.max_nodes"),
    (TOY.replace("max_nodes = 5", "bogus = 1"), "run.bogus"),
    (TOY.replace("name = analytic_toy", "name = navier_stokes"), "model.name"),
    (TOY + "[extra]\nx = 1\n", "extra"),
    (TOY.replace("max_nodes = 5", "measure = R_star"), "run.measure"),
    (TOY.replace("max_nodes = 5", "delta_dup = 0"), "run.delta_dup"),
])
def test_config_errors_name_the_key(text, key):
    with pytest.raises(ConfigError) as exc:
        parse_config(text)
    assert exc.value.key == key


def test_config_defaults_and_seed_override():
    p = parse_config(SSAD, seed=11)
    assert p.run.seed == 11 and p.seeds["run"] == 11
    assert p.run.epsilon == 1e-4 and p.run.model.n_pde == 199
    assert p.run.tracker.n_mc == 200


def test_dump_eval_round_trip(tmp_path):
    box = BoundingBox((0.0, 0.0), (1.0, 2.0))
    Z = np.random.default_rng(0).random((12, 2)) * [1.0, 2.0]
    state, samples = build(box, Z, {"u": np.column_stack([np.sin(Z.sum(1)), Z[:, 0] ** 2])})
    path = str(tmp_path / "s.json")
    dump_surrogate(state, samples, path)
    sur = load_surrogate(path)
    P = np.random.default_rng(1).random((30, 2))
    np.testing.assert_allclose(sur(P), state.eval_qoi(P), rtol=0, atol=1e-14)
    np.testing.assert_allclose(sur(samples.nodes), samples.U, atol=1e-8)
    with pytest.raises(ValueError):
        sur(np.zeros((2, 3)))


def test_csv_number_format():
    assert fmt(0.1) == "1.00000000000000006e-01"
    assert float(fmt(1 / 3)) == 1 / 3
    assert fmt(3) == "3" and fmt(None) == "" and fmt(True) == "1"
    rec = ConvergenceRecord(0, 1, 0.5, np.array([0.25]), {"e": 1e-3})
    header, rows = history_rows([rec, ConvergenceRecord(1, 2, 1e-9, None)], 1)
    assert header == ["iter", "n_nodes", "residual_max", "z_new_0", "e", "ill_conditioned"]
    assert rows[1][3] is None and rows[1][4] is None


def test_read_points_header_and_errors(tmp_path):
    p = tmp_path / "p.csv"
    p.write_text("z0,z1\n0.1,0.2\n0.3,0.4\n")
    np.testing.assert_array_equal(read_points(str(p)), [[0.1, 0.2], [0.3, 0.4]])
    p.write_text("0.1,0.2\n0.3,abc\n")
    with pytest.raises(ValueError):
        read_points(str(p))


def test_cli_run_constant_model(tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["run", "--config", write(tmp_path, TOY), "--out-dir", str(out)])
    assert code == EXIT_OK
    rows = list(csv.reader(open(out / "history.csv")))
    assert len(rows) == 2 and rows[0][:3] == ["iter", "n_nodes", "residual_max"]
    man = json.load(open(out / "manifest.json"))
    assert man["status"] == "converged" and man["config"] == TOY
    assert set(man["outputs"]) == {"history", "surrogate", "manifest"}
    assert man["seeds"]["run"] == 0

    pts = tmp_path / "pts.csv"
    pts.write_text("0.1\n0.9\n")
    assert main(["eval", str(out / "surrogate.json"), str(pts)]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-3] == "u0" and all(float(v) == 2.5 for v in lines[-2:])


def test_cli_run_steady_reaches_epsilon(tmp_path):
    out = tmp_path / "o"
    assert main(["run", "--config", write(tmp_path, SSAD), "--out-dir", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(open(out / "history.csv")))
    assert float(rows[-1]["residual_max"]) < 1e-4
    assert all(float(r["residual_max"]) >= 1e-4 for r in rows[:-1])
    assert "e" in rows[0]
    # the echoed config reproduces the run exactly
    echo = json.load(open(out / "manifest.json"))["config"]
    out2 = tmp_path / "o2"
    main(["run", "--config", write(tmp_path, echo, "echo.ini"), "--out-dir", str(out2)])
    assert (out / "history.csv").read_text() == (out2 / "history.csv").read_text()


def test_cli_exit_codes(tmp_path, capsys):
    assert main(["run", "--config", write(tmp_path, TOY.replace("max_nodes = 5", "epsilon = 0"))]) == EXIT_ERROR
    assert "run.epsilon" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "missing.ini")]) == EXIT_ERROR
    stall = TOY.replace("function = constant", "function = square").replace(
        "max_nodes = 5", "max_nodes = 5\nepsilon = 1e-14\ndelta_dup = 10")
    assert main(["run", "--config", write(tmp_path, stall, "s.ini"),
                 "--out-dir", str(tmp_path / "st")]) == EXIT_STALLED
    assert main(["experiment", "no-such-study"]) == EXIT_ERROR
    err = capsys.readouterr().err
    assert "ssad-measures" in err and "swe-dambreak" in err
    assert main(["experiment", "uad-schemes", "--pdfs", "3"]) == EXIT_ERROR


def test_cli_eval_dimension_mismatch(tmp_path):
    out = tmp_path / "out"
    main(["run", "--config", write(tmp_path, TOY), "--out-dir", str(out)])
    pts = tmp_path / "pts.csv"
    pts.write_text("0.1,0.2\n")
    assert main(["eval", str(out / "surrogate.json"), str(pts)]) == EXIT_ERROR


def test_cli_oracle_quadrature(capsys):
    assert main(["oracle", "quadrature"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") >= 5 and "FAIL" not in out


def test_cli_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert capsys.readouterr().out.strip()
