import json

import pytest

from saito_free.cli import run

DISC = "y^2*z^2-4*x*z^3-4*y^3*t+18*x*y*z*t-27*x^2*t^2"


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def call_json(capsys, *argv):
    code, out, err = call(capsys, *argv, "--json")
    return code, json.loads(out), err


def test_is_free_example(capsys):
    code, rep, _ = call_json(capsys, "is-free", "--n", "3", DISC)
    assert code == 0
    assert rep["result"]["verdict"] == "free"
    assert rep["result"]["exponents"] == [1, 1, 1]
    assert rep["schema_version"] == "1.0"
    assert "saito" in rep["certificates"]


def test_mdr_example(capsys):
    code, rep, _ = call_json(capsys, "mdr", "--n", "3", "x0*x1*(x0+x1)")
    assert code == 0 and rep["result"]["mdr"] == 0


def test_derivation_det_zero(capsys):
    code, rep, _ = call_json(capsys, "derivation-det", "--n", "3", "x", "y", "x+y")
    assert code == 0 and rep["result"]["zero"] is True


def test_human_output(capsys):
    code, out, _ = call(capsys, "jacobian", "x^2*y")
    assert code == 0 and "2*x*y" in out


def test_json_is_deterministic(capsys):
    argv = ("pencil", "x*y*z+x*z*t", "x*y*t+y*z*t", "--k", "1", "--seed", "4")
    _, a, _ = call_json(capsys, *argv)
    _, b, _ = call_json(capsys, *argv)
    a.pop("timings"), b.pop("timings")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert a["result"]["exponents"] == [2, 2, 4]


def test_verify_cert_roundtrip_and_tamper(capsys, tmp_path):
    _, out, _ = call(capsys, "is-free", "x^6*z+y^7+x^5*y*t+x^4*y^3", "--json")
    path = tmp_path / "rep.json"
    path.write_text(out)
    code, rep, _ = call_json(capsys, "verify-cert", str(path))
    assert code == 0 and rep["result"]["verified"]
    data = json.loads(out)
    data["certificates"]["saito"]["constant"] = "12345"
    path.write_text(json.dumps(data))
    code, out, _ = call(capsys, "verify-cert", "@" + str(path))
    assert code == 1 and '"verified": false' in out


def test_containment_certificate_roundtrip(capsys, tmp_path):
    T1 = "(2*x^2+x*z; -x*y+y*z; -2*z^2-x*z; -x*t+z*t)"
    T2 = "(x*y-x*t; -2*y^2-y*t; y*z-z*t; y*t+2*t^2)"
    code, out, _ = call(capsys, "contains", "(x*y*z+x*z*t)*(x*y*t+y*z*t)", T1, T2, "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["contained"] and rep["result"]["codimension"] == 2
    path = tmp_path / "c.json"
    path.write_text(out)
    assert call(capsys, "verify-cert", str(path))[0] == 0


def test_at_file_input(capsys, tmp_path):
    p = tmp_path / "f.txt"
    p.write_text(DISC + "\n")
    code, rep, _ = call_json(capsys, "is-free", "@" + str(p))
    assert code == 0 and rep["result"]["exponents"] == [1, 1, 1]


@pytest.mark.parametrize("argv", [
    ("is-free", "x^2+"),
    ("is-free", "x", "--field", "fp:4"),
    ("saito-check", "x*y*z*t", "(1, 0, 0, 0)", "(0, y, -z, 0)", "(0, 0, z, -t)"),
    ("nosuch",),
    ("verify-cert", "{\"certificates\": {}}"),
])
def test_input_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = run(list(argv))
        raise SystemExit(code)
    assert exc.value.code == 1


def test_resource_limits_exit_2(capsys):
    code, rep, _ = call_json(capsys, "is-free", "x^6*z+y^7+x^5*y*t+x^4*y^3", "--timeout", "0.000001")
    assert code == 2 and rep["result"]["verdict"] == "inconclusive"
    code, _, _ = call(capsys, "scheme-report", "x^2-y*z", "x*y-z*t", "--degree-cap", "2")
    assert code == 2


def test_large_input_switches_field(capsys):
    code, rep, err = call_json(capsys, "is-free", "--n", "4", "x0*x1*x2*x3*x4")
    assert code == 0
    assert rep["field"]["label"] == "characteristic-p evidence"
    assert rep["result"]["exponents"] == [1, 1, 1, 1]


def test_eigenscheme_points(capsys):
    code, rep, _ = call_json(capsys, "eigenscheme", "grad:x^3+y^3+z^3+t^3",
                             "--point", "1,1,0,0", "--point", "1,2,0,0")
    assert code == 0
    assert rep["result"]["degree"] == 15
    assert [p["member"] for p in rep["result"]["points"]] == [True, False]


def test_preset_single(capsys):
    code, rep, _ = call_json(capsys, "preset", "example3")
    assert code == 0 and rep["result"]["exponents"] == [1, 1, 1]
    assert call(capsys, "preset", "nosuch")[0] == 1
