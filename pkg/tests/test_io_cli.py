import json
import math

import numpy as np
import pytest

from nc_orlicz.cli import main
from nc_orlicz.io import (
    InputError,
    dumps_csv,
    dumps_report,
    load_nfunction,
    matrix_from_json,
    parse_json,
    rearrangement_from_json,
    to_jsonable,
)
from nc_orlicz.nfunction import PowerLog
from nc_orlicz.spectra import DecreasingStepFunction, ParametricDecay, TracedMatrix


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


PROJ3 = {"n": 4, "trace_scale": 1.0, "entries": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]]}
LOWER = {"n": 2, "entries": [[[1, 0], [2, 0]], [[3, 0], [4, 0]]]}


class TestIO:
    def test_parse_error_position(self):
        with pytest.raises(InputError) as info:
            parse_json('{"n": 2,\n]', "m.json")
        assert info.value.line == 2 and info.value.column == 1
        assert info.value.to_json()["source"] == "m.json"

    def test_matrix_complex_entries(self):
        x = matrix_from_json(LOWER)
        assert isinstance(x, TracedMatrix)
        assert x.entries[1, 0] == 3

    def test_matrix_shape_error(self):
        with pytest.raises(InputError):
            matrix_from_json({"n": 2, "entries": [[1, 2]]})

    @pytest.mark.parametrize("obj, cls", [
        ({"steps": [[2, 1], [1, 0.5]]}, DecreasingStepFunction),
        ({"pieces": [[0, "inf", 1.0, 0.5]]}, ParametricDecay),
        (PROJ3, TracedMatrix),
    ])
    def test_rearrangement_dispatch(self, obj, cls):
        assert isinstance(rearrangement_from_json(obj), cls)

    def test_bad_steps(self):
        with pytest.raises(InputError):
            rearrangement_from_json({"steps": [[1, 1], [2, 1]]})

    def test_unknown_object(self):
        with pytest.raises(InputError):
            rearrangement_from_json({"foo": 1})

    def test_load_nfunction(self, tmp_path):
        assert load_nfunction(write(tmp_path, "f.json", {"family": "power-log", "p": 2})) == PowerLog(2.0)
        with pytest.raises(InputError):
            load_nfunction(write(tmp_path, "g.json", {"family": "power"}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            load_nfunction(str(tmp_path / "nope.json"))

    def test_jsonable(self):
        obj = to_jsonable({"a": math.inf, "b": np.float64(-math.inf), "c": math.nan, "d": 1 + 2j, "e": np.arange(2)})
        assert obj == {"a": "inf", "b": "-inf", "c": "nan", "d": [1.0, 2.0], "e": [0, 1]}

    def test_report_canonical(self):
        text = dumps_report({"b": 1, "a": [1.5]})
        assert json.loads(text)["schema_version"] == 1
        assert text == dumps_report({"a": [1.5], "b": 1})

    def test_csv(self):
        assert dumps_csv([{"x": 0.1, "y": "a"}], ["x", "y"]) == "x,y\n0.1,a\n"


class TestCLI:
    def test_norms_projection(self, tmp_path, capsys):
        code, out, _ = run(capsys, "norms", "--input", write(tmp_path, "p.json", PROJ3))
        assert code == 0
        (entry,) = json.loads(out)["inputs"].values()
        # rank 3, Phi = t^2/2: 1/Phi^{-1}(1/3) = sqrt(3/2)
        assert entry["luxemburg"]["value"] == pytest.approx(math.sqrt(1.5), rel=1e-12)
        assert entry["weak_orlicz"]["value"] == pytest.approx(math.sqrt(1.5), rel=1e-12)
        assert entry["luxemburg"]["method"] == "bisection"

    def test_bad_json_exit1(self, tmp_path, capsys):
        code, _, err = run(capsys, "norms", "--input", write(tmp_path, "bad.json", '{"n": 2,\n]'))
        assert code == 1
        rec = json.loads(err)
        assert rec["line"] == 2 and rec["column"] == 1

    def test_hardy_lower(self, tmp_path, capsys):
        code, out, _ = run(capsys, "hardy", "--input", write(tmp_path, "x.json", LOWER))
        assert code == 0
        rep = json.loads(out)
        assert rep["membership"] == {"x": False, "h": True, "z": True}

    def test_hardy_block_mismatch(self, tmp_path, capsys):
        code, _, _ = run(capsys, "hardy", "--blocks", "1,2", "--input", write(tmp_path, "x.json", LOWER))
        assert code == 1

    def test_unknown_suite(self, capsys):
        assert run(capsys, "verify", "--suite", "nosuch")[0] == 1

    def test_unknown_tol(self, capsys):
        assert run(capsys, "verify", "--suite", "spectra.modular_sup", "--tol", "nosuch=1")[0] == 1

    def test_usage_error_exit1(self, capsys):
        assert run(capsys, "verify", "--trials", "0")[0] == 1

    def test_verify_deterministic(self, capsys):
        args = ("verify", "--suite", "spectra", "--trials", "20", "--seed", "7")
        a = run(capsys, *args)
        b = run(capsys, *args)
        assert a[0] == 0 and a[1] == b[1]
        assert json.loads(a[1])["passed"] is True

    def test_forced_failure_exit2(self, capsys):
        code, out, err = run(capsys, "verify", "--suite", "spectra.modular_sup", "--trials", "5", "--tol", "modular_sup=-1")
        assert code == 2
        assert json.loads(out)["failures"]
        assert json.loads(err)["error"] == "assertion"

    def test_duality_csv(self, capsys, tmp_path):
        out_path = tmp_path / "d.csv"
        code, _, _ = run(capsys, "duality", "--trials", "4", "--sizes", "4,8", "--out", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "family,n,trials,C_emp,attained_ratio"
        assert len(lines) == 1 + 3 * 2

    def test_nfunc(self, capsys, tmp_path):
        code, out, _ = run(capsys, "nfunc", "--nfunction", write(tmp_path, "f.json", {"family": "power", "p": 3}))
        assert code == 0
        assert "index-interval-ambiguity" in out

    def test_weighted(self, capsys, tmp_path):
        d = write(tmp_path, "d.json", {"n": 2, "entries": [[2, 0], [0, 0.5]]})
        x = write(tmp_path, "x.json", LOWER)
        code, out, _ = run(capsys, "weighted", "--density", d, "--input", x, "--alpha", "0.25")
        assert code == 0
        assert json.loads(out)["schema_version"] == 1
