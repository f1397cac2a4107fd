import csv
import filecmp
import io
import os

import pytest

from conesobolev import cli
from conesobolev.conditions import monomial_c0, rigidity_floor
from conesobolev.config import emit_config, parse_config
from conesobolev.errors import ConfigError
from conesobolev.report import Report, TaskResult, emit_report, run_scenario

CLASSICAL = """\
[scenario]
name = classical
cone = full_space
n = 3
p = 2
tau = 0
alpha = 0
omega = 1
sigma = 1
tasks = validate, k0
"""

HEISENBERG = """\
[scenario]
name = heisenberg
cone = orthant(0, 1)
n = 2
p = 2
tau = 0
alpha = 1
omega = 1
sigma = x2^1
tasks = validate, k0, heisenberg
"""

EQUAL = """\
[scenario]
name = equal
cone = orthant
n = 2
p = 2
tau = 2
alpha = 2
omega = x1*x2
sigma = x1*x2
tasks = validate, check_c0, k0, sharp
[knobs]
samples = 20000
budget = 40
"""

NECESSITY = """\
[scenario]
name = necessity
cone = full_space
n = 2
p = 1
tau = 1
alpha = 0
omega = r
sigma = 1
tasks = validate, check_c0, k0, necessity
[knobs]
samples = 20000
"""


# -- parsing -----------------------------------------------------------------


def test_minimal_classical_config():
    s = parse_config(CLASSICAL)
    assert (s.n, s.p, s.tau, s.alpha) == (3, 2, 0, 0)
    assert s.tasks == ("validate", "k0")
    assert s.exponents().q == pytest.approx(6)


def test_heisenberg_config_derives_q():
    s = parse_config(HEISENBERG)
    assert s.exponents().q == pytest.approx(4)


def test_q_cannot_be_given():
    with pytest.raises(ConfigError) as info:
        parse_config(CLASSICAL + "q = 5\n")
    assert info.value.kind == "unknown_key"
    assert info.value.lineno == 11


@pytest.mark.parametrize("text,kind", [
    (CLASSICAL.replace("omega = 1", "omega = exp(x1)"), "invalid_family"),
    (CLASSICAL.replace("cone = full_space", "cone = ball"), "invalid_family"),
    (CLASSICAL.replace("[scenario]", "scenario"), "parse_error"),
    (CLASSICAL.replace("n = 3", "n = three"), "parse_error"),
    (CLASSICAL + "[extra]\n", "unknown_key"),
])
def test_bad_configs(text, kind):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.kind == kind


@pytest.mark.parametrize("text", [CLASSICAL, HEISENBERG, EQUAL, NECESSITY])
def test_config_round_trip(text):
    s = parse_config(text)
    assert parse_config(emit_config(s)) == s


# -- running -----------------------------------------------------------------


def _values(report, task):
    r = next(t for t in report.results if t.task == task)
    return r.status, {name: value for name, value, _ in r.values}


def test_equal_monomial_scenario_is_consistent():
    rep = run_scenario(parse_config(EQUAL))
    status, vals = _values(rep, "check_c0")
    assert status == "ok"
    e = parse_config(EQUAL).exponents()
    assert vals["c0_monomial"] == pytest.approx(monomial_c0((1, 1), (1, 1), 2), abs=1e-12)
    assert vals["c0_estimate"] == pytest.approx(vals["c0_monomial"], abs=1e-3)
    assert vals["c0_monomial"] == pytest.approx(rigidity_floor(e), abs=1e-12)
    assert _values(rep, "k0")[0] == "ok"
    assert _values(rep, "sharp")[0] == "ok"


def test_necessity_scenario_skips_the_constant():
    rep = run_scenario(parse_config(NECESSITY))
    assert _values(rep, "check_c0")[1]["verdict"] in ("refuted", "inconclusive")
    assert _values(rep, "k0")[0] == "skipped"
    status, vals = _values(rep, "necessity")
    assert status == "ok"
    assert vals["shift_slope"] == pytest.approx(1 / 3, rel=0.05)


def test_empty_task_list():
    rep = run_scenario(parse_config(CLASSICAL.replace("tasks = validate, k0", "tasks =")))
    assert rep.results == [] and rep.exponents is not None and rep.validation_error is None


# -- emitting ----------------------------------------------------------------


def test_single_constant_report(tmp_path):
    s = parse_config(CLASSICAL)
    r = TaskResult("k0")
    r.add("k0", 0.5, 1e-6)
    files = emit_report(Report(s, s.exponents(), None, [r]), tmp_path)
    assert sorted(os.path.basename(f) for f in files) == ["classical.csv", "classical.txt"]
    rows = (tmp_path / "classical.csv").read_text().splitlines()
    assert rows == ["task,parameter,value,tolerance", "k0,k0,0.5,1e-06"]


def test_probe_table_columns(tmp_path):
    emit_report(run_scenario(parse_config(NECESSITY)), tmp_path)
    with open(tmp_path / "necessity_necessity_shift.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["delta", "quotient", "fitted_slope"]
    assert len(rows) == 9


def test_reports_are_byte_identical(tmp_path):
    s = parse_config(NECESSITY)
    a, b = tmp_path / "a", tmp_path / "b"
    fa = emit_report(run_scenario(s), a)
    fb = emit_report(run_scenario(s), b)
    names = [os.path.basename(f) for f in fa]
    assert names == [os.path.basename(f) for f in fb]
    _, mismatch, errors = filecmp.cmpfiles(a, b, names, shallow=False)
    assert not mismatch and not errors


# -- command line ------------------------------------------------------------


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def _main(args, capsys):
    code = cli.main(args)
    return code, capsys.readouterr().out


def test_cli_validate(tmp_path, capsys):
    code, out = _main(["validate", "--config", _write(tmp_path, "c.ini", CLASSICAL)], capsys)
    assert code == cli.EXIT_OK and "classical: valid" in out
    code, out = _main(["validate", "--config", _write(tmp_path, "n.ini", NECESSITY)], capsys)
    assert code == cli.EXIT_INVALID and "invalid exponents" in out


def test_cli_rejects_bad_config(tmp_path, capsys):
    code, _ = _main(["run", "--config", _write(tmp_path, "q.ini", CLASSICAL + "q = 5\n"), "--out", str(tmp_path)], capsys)
    assert code == cli.EXIT_INVALID


def test_cli_task_error_exit_code(tmp_path, capsys):
    # a direction outside the cone makes the shift probe fail
    text = EQUAL.replace("tasks = validate, check_c0, k0, sharp", "tasks = validate, necessity\ndirection = -1, 1")
    code, _ = _main(["run", "--config", _write(tmp_path, "e.ini", text), "--out", str(tmp_path)], capsys)
    assert code == cli.EXIT_TASK_ERROR


def test_cli_batch_matches_run(tmp_path, capsys):
    cfg = tmp_path / "cfg"
    cfg.mkdir()
    _write(cfg, "necessity.ini", NECESSITY)
    _write(cfg, "classical.ini", CLASSICAL)
    one, many = tmp_path / "one", tmp_path / "many"
    assert _main(["run", "--config", str(cfg / "necessity.ini"), "--out", str(one)], capsys)[0] == cli.EXIT_OK
    code, _ = _main(["batch", "--config", str(cfg), "--jobs", "2", "--out", str(many)], capsys)
    assert code == cli.EXIT_OK
    assert (many / "classical.txt").exists()
    assert (one / "necessity.txt").read_bytes() == (many / "necessity.txt").read_bytes()


def test_cli_seed_override_is_recorded(tmp_path, capsys):
    path = _write(tmp_path, "n.ini", NECESSITY)
    _main(["run", "--config", path, "--seed", "0x10", "--format", "text", "--out", str(tmp_path)], capsys)
    text = (tmp_path / "necessity.txt").read_text()
    assert "seed=16" in text
    assert not (tmp_path / "necessity.csv").exists()
    assert io.StringIO(text).readline().startswith("scenario: necessity")
