import json
import math
import os

import numpy as np
import pytest

from orliczgeo import Ball, Ellipsoid, HPolytope, OrliczFunction, StarBody, VPolytope, build_grid, v_phi
from orliczgeo.cli import main
from orliczgeo.errors import ParseError
from orliczgeo.io import body_from_dict, body_to_dict, dumps, load_body, parse_phi, to_csv, write_atomic


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def files(tmp_path, smooth_body):
    return {
        "ball": _write(tmp_path, "ball.json", {"kind": "ball", "r": 1.0}),
        "square": _write(tmp_path, "square.json",
                         {"kind": "vpolytope", "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]}),
        "ellipse": _write(tmp_path, "ellipse.json",
                          {"kind": "ellipsoid", "matrix": [[1.5, 0.2], [0.0, 1 / 1.5]]}),
        "smooth": _write(tmp_path, "smooth.json", body_to_dict(smooth_body)),
    }


def _bodies(smooth_body):
    g = build_grid(2, 64)
    return [
        VPolytope(np.array([[1.0, 0.2], [-0.5, 1.0], [-0.7, -0.9]])),
        HPolytope(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]), np.array([1.0, 2.0, 1.5, 0.5])),
        Ball(1.3),
        Ellipsoid(np.array([[1.2, 0.3], [0.0, 0.8]])),
        smooth_body,
        StarBody(g, np.linspace(1.0, 2.0, 64)),
    ]


def test_body_round_trip_is_bitwise(smooth_body):
    Q = Ellipsoid(np.diag([1.1, 0.7]))
    for K in _bodies(smooth_body):
        d = json.loads(dumps(body_to_dict(K)))
        K2 = body_from_dict(d)
        assert type(K2) is type(K)
        if isinstance(K, StarBody):
            assert np.array_equal(K.rho, K2.rho)
            continue
        assert v_phi(K, Q, OrliczFunction.power(2)).value == v_phi(K2, Q, OrliczFunction.power(2)).value


def test_body_parse_errors(tmp_path):
    with pytest.raises(ParseError):
        body_from_dict({"kind": "cylinder"})
    with pytest.raises(ParseError):
        body_from_dict({"kind": "vpolytope"})
    with pytest.raises(ParseError):
        load_body(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_body(str(bad))


def test_parse_phi_forms(tmp_path):
    assert parse_phi("power(2)").label == "power(2)"
    assert parse_phi(" constant( 3 ) ").a == 3.0
    assert parse_phi("arctan_inv_n", 3).dim == 3
    assert parse_phi('{"kind": "power", "p": -1}').p == -1
    path = _write(tmp_path, "phi.json", {"kind": "log1p_inv_n"})
    assert parse_phi(path).kind == "log1p_inv_n"
    for bad in ("power(x)", "power", "arctan_inv_n(2)", "wobble", "{bad"):
        with pytest.raises(ParseError):
            parse_phi(bad)


def test_csv_and_atomic_write(tmp_path):
    text = to_csv(["a", "b"], [[0.1, "x,y"], [1e-20, 2]])
    assert text == 'a,b\n0.1,"x,y"\n1e-20,2\n'
    target = tmp_path / "sub" / "out.csv"
    write_atomic(target, text)
    write_atomic(target, text)
    assert target.read_text() == text
    assert os.listdir(target.parent) == ["out.csv"]


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_affine_on_ball(capsys, files):
    code, out, _ = _run(capsys, ["compute", "--quantity", "affine", "--body", files["ball"],
                                 "--phi", "power(2)", "--grid", "1024"])
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(2 * math.pi, rel=1e-12)


def test_compute_affine_on_square_is_flagged(capsys, files):
    code, out, _ = _run(capsys, ["compute", "--quantity", "affine", "--body", files["square"],
                                 "--phi", "power(2)"])
    assert code == 2
    d = json.loads(out)
    assert d["flags"] == ["Degenerate"] and d["value"] == 0.0


def test_compute_v_phi_constant_is_volume(capsys, files, tmp_path):
    out_path = tmp_path / "r.json"
    code, _, _ = _run(capsys, ["compute", "--quantity", "v_phi", "--body", files["square"],
                               "--body", files["ellipse"], "--phi", "constant(1)", "--out", str(out_path)])
    assert code == 0
    assert json.loads(out_path.read_text())["value"] == pytest.approx(4.0)


def test_compute_other_quantities(capsys, files):
    code, out, _ = _run(capsys, ["compute", "--quantity", "s_phi", "--body", files["ball"], "--phi", "power(3)"])
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2 * math.pi)
    code, out, _ = _run(capsys, ["compute", "--quantity", "lp_closed_form", "--body", files["ellipse"],
                                 "--p", "1"])
    assert code == 0 and json.loads(out)["value"] == pytest.approx(2 * math.pi, rel=1e-9)
    code, out, _ = _run(capsys, ["compute", "--quantity", "multi", "--body", files["smooth"],
                                 "--body", files["smooth"], "--phi", "power(2)", "--restarts", "1"])
    assert code == 0 and json.loads(out)["quantity"] == "affine_multi"
    code, out, _ = _run(capsys, ["compute", "--quantity", "ith_mixed", "--i", "0", "--body", files["smooth"],
                                 "--body", files["ellipse"], "--phi", "power(-1)", "--restarts", "1"])
    assert code == 0


@pytest.mark.parametrize(
    "argv,code",
    [
        (["compute", "--quantity", "affine", "--body", "nope.json", "--phi", "power(2)"], "ParseError"),
        (["compute", "--quantity", "affine", "--phi", "power(2)"], "ParseError"),
        (["verify", "unknown-suite"], "UnknownSuite"),
        (["sweep"], "ParseError"),
    ],
)
def test_errors_print_one_coded_line(capsys, argv, code):
    rc, _, err = _run(capsys, argv)
    assert rc == 1
    lines = err.strip().splitlines()
    assert len(lines) == 1 and lines[0].startswith(f"error {code}:")


def test_power_minus_n_is_refused(capsys, files):
    rc, _, err = _run(capsys, ["compute", "--quantity", "affine", "--body", files["ball"],
                               "--phi", '{"kind": "power", "p": -2}'])
    assert rc == 1 and err.startswith("error NearDegenerate:")


def test_constant_power_zero_is_exact(capsys, files):
    rc, out, _ = _run(capsys, ["compute", "--quantity", "geominimal", "--body", files["ball"],
                               "--phi", "power(0)"])
    assert rc == 0 and json.loads(out)["flags"] == ["Exact"]


def test_dimension_mismatch_flag(capsys, files):
    rc, _, err = _run(capsys, ["compute", "--quantity", "affine", "--body", files["ball"],
                               "--phi", "power(2)", "--dim", "3"])
    assert rc == 1 and "UnsupportedDimension" in err


def test_sweep_over_p_on_the_ball(capsys, files):
    rc, out, _ = _run(capsys, ["sweep", "--body", files["ball"], "--axis", "p=0.5,1,2,4"])
    assert rc == 0
    lines = out.strip().splitlines()
    assert lines[0] == "param,value,certified_side,runtime_ms"
    for line in lines[1:]:
        assert float(line.split(",")[1]) == pytest.approx(2 * math.pi, rel=1e-12)


def test_sweep_over_grid(capsys, files):
    rc, out, _ = _run(capsys, ["sweep", "--body", files["ellipse"], "--phi", "power(2)",
                               "--axis", "grid=128,256,512,1024"])
    assert rc == 0
    rows = [r.split(",") for r in out.strip().splitlines()[1:]]
    assert [r[0] for r in rows] == ["128", "256", "512", "1024"]
    for r in rows:
        assert float(r[1]) == pytest.approx(2 * math.pi, rel=1e-12)
    assert rows[0][4] == "" and all(float(r[4]) < 1e-12 for r in rows[1:])


def test_verify_small_suite(capsys, tmp_path):
    out = tmp_path / "rep.csv"
    rc, _, err = _run(capsys, ["verify", "ellipsoid-closed-form", "--format", "csv", "--out", str(out),
                               "--phi", "power(2)", "--restarts", "2"])
    assert rc == 0
    assert "0 Violated" in err
    header = out.read_text().splitlines()[0]
    assert header == "suite,bodies,phis,claim,relation,lhs,rhs,margin,status,notes"
