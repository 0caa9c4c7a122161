import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loccoh import cli
from loccoh.checks import CheckResult
from loccoh.cli import COMMANDS, JobError, JobSpec, main, parse_job, random_instance, run, serialize_job

SKEW = {"vars": ["x1", "x2", "x3", "x4"], "field": "Q",
        "ideal": ["x1*x2", "x1*x4", "x3*x2", "x3*x4"], "cmd": "lyubeznik"}
PLANES = {"vars": ["x", "y", "z", "w"], "quotient": ["x*y*z", "x*y*w"], "ideal": ["x", "y"], "cmd": "reduce"}
MIXED = {"vars": ["x1", "x2", "x3", "x4", "x5"],
         "ideal": ["x1*x2", "x1*x3"], "cmd": "seqcm"}


def _mixed_job():
    # (x1) & (x2,x3) & (x1^2,x4,x5), written out by hand
    gens = ["x1^2*x2", "x1^2*x3", "x1*x2*x4", "x1*x3*x4", "x1*x2*x5", "x1*x3*x5"]
    return dict(MIXED, ideal=gens)


def test_parse_valid_job():
    spec = parse_job(json.dumps({"vars": ["x", "y"], "field": "Q", "ideal": ["x"], "cmd": "lyubeznik"}))
    assert spec.vars == ["x", "y"] and spec.ideal == ["x"] and spec.cmd == "lyubeznik"


def test_unknown_variable():
    with pytest.raises(JobError, match="x5"):
        parse_job(json.dumps(dict(SKEW, ideal=["x5"])))


def test_non_prime_field():
    with pytest.raises(JobError) as exc:
        parse_job(json.dumps(dict(SKEW, field="F4")))
    assert "prime" in exc.value.message


def test_syntax_error_location():
    with pytest.raises(JobError) as exc:
        parse_job('{"vars": ["x"],\n  "ideal": [x]}')
    assert exc.value.line == 2 and exc.value.column == 13


def test_errors_located_in_text():
    text = '{"vars": ["x", "y"],\n "ideal": ["z"],\n "cmd": "cd"}'
    with pytest.raises(JobError) as exc:
        parse_job(text)
    assert (exc.value.line, exc.value.column) == (2, 12)


@pytest.mark.parametrize("bad", [
    {"vars": [], "ideal": ["x"], "cmd": "cd"},
    {"vars": ["x", "x"], "ideal": ["x"], "cmd": "cd"},
    {"vars": ["x"], "ideal": ["x"], "cmd": "nope"},
    {"vars": ["x"], "ideal": "x", "cmd": "cd"},
    {"vars": ["x"], "ideal": ["x"], "cmd": "cd", "extra": 1},
    {"vars": ["x"], "cmd": "cd"},
])
def test_malformed_jobs(bad):
    with pytest.raises(JobError):
        parse_job(json.dumps(bad))


names = st.lists(st.sampled_from(["x", "y", "z", "w", "a1", "b2"]), min_size=1, max_size=4, unique=True)


@st.composite
def jobs(draw):
    vs = draw(names)
    mono = st.lists(st.tuples(st.sampled_from(vs), st.integers(1, 3)), min_size=1, max_size=3).map(
        lambda ps: "*".join(v if e == 1 else f"{v}^{e}" for v, e in ps))
    return JobSpec(vs, draw(st.lists(mono, max_size=3)), draw(st.sampled_from(COMMANDS)),
                   draw(st.sampled_from(["Q", "F2", "F3", "F101"])), draw(st.lists(mono, max_size=2)),
                   draw(st.sampled_from([{}, {"level": 1}, {"scan_box": [-3, 2]}])))


@given(jobs())
def test_round_trip(spec):
    assert parse_job(serialize_job(spec)) == spec


def test_skew_lines_table_report():
    report, status = run(parse_job(json.dumps(SKEW)))
    assert status == 0 and report["status"] == "ok"
    assert report["results"]["table"]["rows"] == [[0, 1, 0], [0, 0, 0], [0, 0, 2]]
    assert set(report) >= {"command", "job", "field", "engine_version", "seed", "results", "timing_s"}


def test_reduce_report():
    report, status = run(parse_job(json.dumps(PLANES)))
    res = report["results"]
    assert status == 0 and [s["r"] for s in res["steps"]] == ["z", "w"]
    assert res["final_variables"] == ["x", "y"] and res["final_ideal"] == ["x", "y"]


@pytest.mark.parametrize("level,expected", [(3, True), (2, False)])
def test_partial_scm_report(level, expected):
    spec = parse_job(json.dumps(dict(_mixed_job(), options={"level": level})))
    report, status = run(spec)
    assert status == 0 and report["results"]["partially_scm"] is expected


def test_other_commands():
    for cmd in ("cd", "ann", "filtration", "shapes", "verify-all"):
        report, status = run(parse_job(json.dumps(dict(SKEW, cmd=cmd))))
        assert status == 0, report
    report, _ = run(parse_job(json.dumps(dict(SKEW, cmd="cd"))))
    assert report["results"]["cd"] == 3
    report, _ = run(parse_job(json.dumps(dict(PLANES, cmd="ann"))))
    assert sorted(report["results"]["annihilator"]) == ["w", "z"]


def test_reports_are_deterministic_and_worker_independent():
    spec = parse_job(json.dumps(dict(SKEW, cmd="verify-all")))
    a, _ = run(spec, workers=1)
    b, _ = run(spec, workers=4)
    a.pop("timing_s"), b.pop("timing_s")
    assert a == b


def test_engine_error_status():
    report, status = run(parse_job(json.dumps(dict(PLANES, cmd="lyubeznik"))))
    assert status == 2 and "error" in report
    report, status = run(parse_job(json.dumps(dict(SKEW, ideal=["x1*x1"]))))
    assert status == 2


def test_verification_failure_status(monkeypatch):
    monkeypatch.setattr(cli, "verify_all", lambda *a, **k: [CheckResult("euler formula", "fail", "forced")])
    report, status = run(parse_job(json.dumps(dict(SKEW, cmd="verify-all"))))
    assert status == 3 and report["status"] == "verification failed"


def test_main_reads_file_and_prints_text(tmp_path, capsys):
    job = tmp_path / "skew.json"
    job.write_text(json.dumps(SKEW))
    assert main(["run", str(job), "--text"]) == 0
    out = capsys.readouterr().out
    assert "0 1 0" in out and "lyubeznik over Q" in out


def test_main_overrides(tmp_path, capsys):
    job = tmp_path / "mixed.json"
    job.write_text(json.dumps(_mixed_job()))
    assert main(["run", str(job), "--level", "2", "--field", "F2"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["field"] == "F2" and report["results"]["partially_scm"] is False


def test_main_bad_job(tmp_path, capsys):
    job = tmp_path / "bad.json"
    job.write_text('{"vars": ["x"], "ideal": ["y"], "cmd": "cd"}')
    assert main(["run", str(job)]) == 2
    assert json.loads(capsys.readouterr().out)["error"] == "JobError"
    assert main(["run", str(tmp_path / "missing.json")]) == 2


def test_random_subcommand(capsys):
    assert main(["random", "dim1", "5", "--seed", "1"]) == 0
    first = capsys.readouterr().out
    assert main(["random", "dim1", "5", "--seed", "1"]) == 0
    assert capsys.readouterr().out == first
    assert parse_job(first).cmd == "verify-all"
    assert main(["random", "dim1", "9"]) == 2


def test_random_instance_matches_corpus():
    spec = random_instance("pure-graph", 6, 7, cmd="shapes")
    report, status = run(spec)
    assert status == 0 and report["results"]["pure_dim2_shape"]


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "loccoh.cli", "run", "--text"], input=json.dumps(SKEW),
                         capture_output=True, text=True, check=True).stdout
    assert out.splitlines()[1:4] == ["0 1 0", "  0 0", "    2"]
