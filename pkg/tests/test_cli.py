import json
import subprocess
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest

try:
    import jsonschema
except ImportError:  # pragma: no cover
    jsonschema = None

from uproj.exprparse import ParseError, parse_expression
from uproj.symfield import DenominatorSet


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "uproj.cli", *argv],
        capture_output=True,
        text=True,
    )


def load_schema(name):
    with resources.files("uproj.schemas").joinpath(name).open() as fh:
        return json.load(fh)


SL2_REP = {
    "type": "A",
    "rank": 1,
    "dim": 2,
    "matrices": {
        "E_1": [["0", "1"], ["0", "0"]],
        "F_1": [["0", "0"], ["1", "0"]],
        "H1": [["1", "0"], ["0", "-1"]],
    },
    "weights": [[1], [-1]],
}


# -- expression parsing -------------------------------------------------


def test_parse_expression_arithmetic():
    dset = DenominatorSet(("E_1", "H1", "F_1"))
    a = parse_expression("F_1 + 1/4*H1^2*E_1^-1", dset)
    e = parse_expression("E_1", dset)
    h = parse_expression("H1", dset)
    f = parse_expression("F_1", dset)
    assert a == f + h * h * e.inverse() * Fraction(1, 4)
    assert parse_expression("(H1 + F_1)^2", dset) == (h + f) * (h + f)
    assert parse_expression("H1/F_1", dset) == h / f
    assert parse_expression("-2*H1 - (-H1)", dset) == -h


@pytest.mark.parametrize("bad", ["", "H1 +", "2 ** 3", "unknown_var", "(H1", "H1^x"])
def test_parse_expression_rejects_garbage(bad):
    dset = DenominatorSet(("H1",))
    with pytest.raises(ParseError):
        parse_expression(bad, dset)


# -- cascade ------------------------------------------------------------


def test_cascade_json_and_schema():
    r = run_cli("cascade", "--type", "A", "--rank", "3")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert len(data["entries"]) == 2
    if jsonschema is not None:
        jsonschema.validate(data, load_schema("cascade.schema.json"))


def test_cascade_invalid_datum_exits_2():
    r = run_cli("cascade", "--type", "G", "--rank", "3")
    assert r.returncode == 2
    assert "error" in r.stderr


def test_cascade_missing_args_exits_2():
    r = run_cli("cascade")
    assert r.returncode == 2


# -- generators ---------------------------------------------------------


def test_generators_adjoint_sl2():
    r = run_cli("generators", "adjoint", "--type", "A", "--rank", "1")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    names = {g["name"]: g["text"] for g in data["generators"]}
    assert set(names) == {"P(F_1)", "Xi1"}
    assert names["Xi1"] == "E_1"
    assert all(
        c["status"] == "pass" for c in data["verification"]["checks"]
    )
    if jsonschema is not None:
        jsonschema.validate(data, load_schema("generator_set.schema.json"))


def test_generators_conj_n2():
    r = run_cli("generators", "conj", "--n", "2")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    names = {g["name"]: g["text"] for g in data["generators"]}
    assert names == {"d1": "s_2_1", "P(c_1_2)": "s_1_1 + s_2_2"}
    if jsonschema is not None:
        jsonschema.validate(data, load_schema("generator_set.schema.json"))


def test_generators_rep_from_file(tmp_path):
    f = tmp_path / "rep.json"
    f.write_text(json.dumps(SL2_REP))
    r = run_cli("generators", "rep", "--file", str(f))
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert [g["text"] for g in data["generators"]] == ["y2"]


def test_generators_rep_bad_file_exits_2(tmp_path):
    r = run_cli("generators", "rep", "--file", str(tmp_path / "missing.json"))
    assert r.returncode == 2


def test_generators_rep_invalid_rep_exits_2(tmp_path):
    bad = dict(SL2_REP, weights=[[1], [1]])
    f = tmp_path / "rep.json"
    f.write_text(json.dumps(bad))
    r = run_cli("generators", "rep", "--file", str(f))
    assert r.returncode == 2


def test_generators_text_format():
    r = run_cli("generators", "adjoint", "--type", "A", "--rank", "1",
                "--format", "text")
    assert r.returncode == 0
    assert "generators" in r.stdout
    assert "all checks pass" in r.stdout


# -- verify -------------------------------------------------------------


def test_verify_invariant_expression_passes():
    r = run_cli("verify", "--type", "A", "--rank", "1",
                "--expr", "E_1",
                "--expr", "F_1 + 1/4*H1^2*E_1^-1")
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert all(res["status"] == "pass" for res in data["results"])


def test_verify_non_invariant_exits_3():
    r = run_cli("verify", "--type", "A", "--rank", "1", "--expr", "F_1")
    assert r.returncode == 3


def test_verify_parse_error_exits_2():
    r = run_cli("verify", "--type", "A", "--rank", "1", "--expr", "F_1 +")
    assert r.returncode == 2


def test_verify_conj_universe():
    r = run_cli("verify", "--n", "2", "--expr", "s_2_1",
                "--expr", "s_1_1 + s_2_2")
    assert r.returncode == 0


def test_verify_from_file(tmp_path):
    f = tmp_path / "exprs.txt"
    f.write_text("E_1\nH1^2 + 4*E_1*F_1\n")
    r = run_cli("verify", "--type", "A", "--rank", "1", "--file", str(f))
    assert r.returncode == 0


# -- eval ---------------------------------------------------------------


def test_eval_exact_value():
    r = run_cli("eval", "--type", "A", "--rank", "1",
                "--expr", "H1^2 + 4*E_1*F_1",
                "--point", json.dumps({"E_1": "2", "H1": "3", "F_1": "1/2"}))
    assert r.returncode == 0
    data = json.loads(r.stdout)
    assert data["value"] == {"num": "13", "den": "1"}


def test_eval_singular_point_exits_2():
    r = run_cli("eval", "--type", "A", "--rank", "1",
                "--expr", "H1*E_1^-1",
                "--point", json.dumps({"E_1": "0", "H1": "1", "F_1": "0"}))
    assert r.returncode == 2


# -- determinism --------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ("cascade", "--type", "B", "--rank", "2"),
        ("generators", "adjoint", "--type", "A", "--rank", "2"),
        ("generators", "conj", "--n", "3"),
        ("verify", "--type", "A", "--rank", "1", "--expr", "E_1"),
    ],
    ids=["cascade", "adjoint", "conj", "verify"],
)
def test_json_output_is_byte_identical_across_runs(argv):
    first = run_cli(*argv)
    second = run_cli(*argv)
    assert first.returncode == second.returncode
    assert first.stdout == second.stdout
    assert first.stdout.strip()
