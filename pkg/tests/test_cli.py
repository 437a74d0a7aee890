import io
import json
import re
import shlex
from pathlib import Path

import pytest

from wiener_radon import cli
from wiener_radon.cli import RunConfig, main, run
from wiener_radon.errors import SchemaError
from wiener_radon.reports import CHECK_FIELDS, Check, IoError, emit, parse_json_lines, render

ROOT = Path(__file__).resolve().parent.parent


def readme_examples():
    text = (ROOT / "README.md").read_text(encoding="utf-8")
    examples = []
    for block in re.findall(r"```console\n(.*?)```", text, flags=re.S):
        current = None
        for line in block.splitlines():
            if line.startswith("$ "):
                current = [line[2:], []]
                examples.append(current)
            elif current is not None:
                current[1].append(line)
    return [(cmd, "\n".join(out)) for cmd, out in examples]


EXAMPLES = readme_examples()


def test_readme_has_examples():
    assert len(EXAMPLES) >= 8


@pytest.mark.parametrize("command,expected", EXAMPLES, ids=[c for c, _ in EXAMPLES])
def test_readme_example(command, expected, capsys, monkeypatch, tmp_path):
    argv = shlex.split(command)
    assert argv[0] == "wiener-radon"
    argv = argv[1:]
    if "--output" in argv:
        i = argv.index("--output")
        argv[i + 1] = str(tmp_path / argv[i + 1])
    monkeypatch.chdir(ROOT)
    assert main(argv) == 0
    out = capsys.readouterr().out
    if expected:
        assert out.rstrip("\n") == expected


def run_capture(**kwargs):
    buf = io.StringIO()
    code = run(RunConfig(**kwargs), stream=buf)
    return code, buf.getvalue()


class TestRunConfig:
    @pytest.mark.parametrize("kwargs", [
        {"command": "nope"}, {"command": "verify", "samples": 0}, {"command": "verify", "grid": 0},
        {"command": "verify", "format": "xml"},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(SchemaError):
            RunConfig(**kwargs)

    def test_defaults(self):
        cfg = RunConfig("verify")
        assert cfg.seed == 0 and cfg.format == "json"


class TestOutput:
    def test_csv_header(self):
        code, out = run_capture(command="verify", suite="hermite", format="csv")
        assert code == 0
        assert out.splitlines()[0] == ",".join(CHECK_FIELDS)

    def test_json_round_trip(self):
        code, out = run_capture(command="verify", suite="closest-point")
        records = parse_json_lines(out)
        assert all(list(r) == list(CHECK_FIELDS) for r in records)
        assert render(records, "json") == out

    def test_seventeen_digits(self):
        text = render([{"x": 0.1, "y": float("inf")}], "json")
        assert text == '{"x": 0.10000000000000001, "y": null}\n'
        assert float(json.loads(text)["x"]) == 0.1

    def test_check_records(self):
        rec = Check("a", 1.0, 1.0, 0.0, 0.0, True).to_record()
        assert render([rec], "csv") == "check,closed_form,estimate,std_error,z,pass\na,1,1,0,0,true\n"

    def test_emit_to_file(self, tmp_path):
        path = tmp_path / "out.json"
        emit([{"a": 1.5}], "json", str(path))
        assert path.read_text() == '{"a": 1.5}\n'

    def test_emit_bad_path(self, tmp_path):
        with pytest.raises(IoError):
            emit([{"a": 1}], "json", str(tmp_path / "missing" / "out.json"))

    def test_byte_identical(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for p in paths:
            assert main(["verify", "--suite", "bridge", "--samples", "5000", "--seed", "3",
                         "--format", "csv", "--output", str(p)]) == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_seed_matters(self):
        _, a = run_capture(command="verify", suite="bridge", samples=2000, seed=1)
        _, b = run_capture(command="verify", suite="bridge", samples=2000, seed=2)
        assert a != b


class TestExitCodes:
    def test_malformed_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"grid": 4,\n "levels": [1,]}')
        assert main(["grt-linear", "--input", str(bad)]) == 2
        assert "line 2" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["grt-linear", "--input", str(tmp_path / "none.json")]) == 2

    @pytest.mark.parametrize("spec", [
        {"grid": 4, "levels": [1]},
        {"grid": 4, "constraints": [{"kind": "kernel", "s": 0.3}], "levels": [1], "h": [{"deriv": [1]}]},
        {"grid": 4, "constraints": [{"deriv": [1, 1, 1]}], "levels": [1], "h": [{"deriv": [1]}]},
        {"grid": 4, "constraints": [{"kind": "kernel", "s": 0.5}], "levels": [1, 2], "h": [{"deriv": [1]}]},
        {"grid": 4, "constraints": [{"kind": "kernel", "s": 0.5}] * 2, "levels": [1, 1], "h": [{"deriv": [1]}]},
        {"grid": 4, "constraints": [{"kind": "kernel", "s": 0.5}], "levels": [1]},
    ])
    def test_schema_and_module_errors(self, tmp_path, spec):
        path = tmp_path / "spec.json"
        path.write_text(json.dumps(spec))
        assert main(["grt-linear", "--input", str(path)]) == 2

    def test_ito_errors(self, tmp_path):
        path = tmp_path / "ito.json"
        path.write_text(json.dumps({"factors": [{"kind": "kernel", "s": 0.5}] * 2, "T": 0.5, "c": 1, "n": 3}))
        assert main(["ito-grt", "--input", str(path)]) == 2
        path.write_text(json.dumps({"factors": [{"kind": "kernel", "s": 0.5}], "T": 0.5, "n": 3}))
        assert main(["ito-grt", "--input", str(path)]) == 2

    def test_bridge_bad_times(self):
        assert main(["multi-bridge", "--T", "0.5", "0.25", "--c", "1", "1", "--t", "0.5"]) == 2
        assert main(["bridge-stats", "--T", "0.5", "0.75", "--c", "1", "--t", "0.5"]) == 2
        assert main(["bridge-stats", "--T", "0.5", "--c", "1", "--t", "0.3", "--grid", "4"]) == 2

    @pytest.mark.parametrize("record", [
        Check("forced", 1.0, 2.0, 0.1, 10.0, False),
        Check("forced", 1.0, 2.0, 0.1, 10.0, False).to_record(),
    ])
    def test_verification_failure(self, monkeypatch, record):
        monkeypatch.setattr(cli, "run_suite", lambda name, config: [record])
        assert run(RunConfig("verify", suite="bridge"), stream=io.StringIO()) == 1

    def test_no_command(self):
        assert main([]) == 2

    def test_backend_info(self, capsys):
        assert main(["--backend-info"]) == 0
        assert capsys.readouterr().out.strip() in ("numba", "numpy")
