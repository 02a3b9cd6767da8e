import json
from fractions import Fraction

import pytest

from flipiet.cli import main
from flipiet.io import (algebraic_from_json, algebraic_to_json, iet_from_json,
                        iet_to_json, induction_trace_csv, return_words_csv)
from flipiet.quintic import bundled_iet, bundled_theta1
from flipiet.rauzy import rauzy_run
from flipiet.selfsim import associated_matrix


def test_algebraic_roundtrip():
    th1 = bundled_theta1()
    v = th1 * th1 - th1 / 3
    obj = algebraic_to_json(v)
    back = algebraic_from_json(obj)
    assert back.coords == v.coords
    assert back.field.minpoly.coeffs == v.field.minpoly.coeffs


def test_iet_roundtrip_exact():
    E = bundled_iet()
    obj = iet_to_json(E)
    s = json.dumps(obj)
    back = iet_from_json(json.loads(s))
    assert back.sp == E.sp
    for a, b in zip(back.lengths, E.lengths):
        assert a.coords == b.coords
    assert json.dumps(iet_to_json(back)) == s      # bit-exact round trip


def test_iet_roundtrip_rational():
    from flipiet.iet import IetSpec
    E = IetSpec((Fraction(1, 3), Fraction(2, 3)), (2, 1), origin=Fraction(1, 7))
    back = iet_from_json(iet_to_json(E))
    assert back.lengths == E.lengths and back.origin == E.origin


def test_trace_csv_format():
    steps = rauzy_run(bundled_iet(), 2)
    text = induction_trace_csv(steps)
    lines = text.splitlines()
    assert lines[0] == "k,p,t"
    assert lines[1] == "0,-5 -3 2 1 -4,1"
    assert lines[2] == "1,4 -5 -3 2 1,0"
    assert lines[3] == "2,5 -2 -4 3 1,"


def test_return_words_csv_format():
    E = bundled_iet()
    th1 = bundled_theta1()
    one = E.lengths[0].field.rational(1, th1.embedding)
    _, its = associated_matrix(E, (E.origin, one / th1))
    text = return_words_csv(its)
    lines = text.splitlines()
    assert lines[0] == "i,N,I"
    assert lines[1] == "1,4,1 5 1 4"
    assert lines[5] == "5,6,1 5 2 1 5 4"


def test_cli_selfsim_exit_zero(tmp_path, capsys):
    rc = main(["selfsim", "--out", str(tmp_path)])
    assert rc == 0
    report = json.loads((tmp_path / "selfsim_report.json").read_text())
    assert report["mismatches"] == []
    assert (tmp_path / "induction_trace.csv").exists()
    assert (tmp_path / "return_words.csv").exists()


def test_cli_eval(capsys):
    rc = main(["eval", "--x", "1/10", "--digits", "6"])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "0.900000"


def test_cli_eval_inverse(capsys):
    rc = main(["eval", "--x", "0.9", "--inverse"])
    assert rc == 0
    assert abs(float(capsys.readouterr().out.strip()) - 0.1) < 1e-12


def test_cli_orbit(tmp_path):
    rc = main(["orbit", "--x", "0.1", "--steps", "5", "--out", str(tmp_path)])
    assert rc == 0
    rep = json.loads((tmp_path / "orbit.json").read_text())
    assert len(rep["points"]) == 6
    assert abs(rep["points"][1] - 0.9) < 1e-12


def test_cli_spectral(tmp_path):
    rc = main(["spectral", "--digits", "3", "--out", str(tmp_path)])
    assert rc == 0
    rep = json.loads((tmp_path / "spectral_report.json").read_text())
    assert rep["roots"] == ["7.829", "1.588", "1.000", "0.358", "0.225"]
    assert rep["perron_vector_decimal"] == ["0.380", "0.091", "0.070",
                                            "0.170", "0.289"]
    assert rep["verdict"] == "qualifies"


def test_cli_search_small(tmp_path):
    rc = main(["search", "--n", "2", "--max-len", "4", "--out", str(tmp_path)])
    assert rc == 0
    rep = json.loads((tmp_path / "search_report.json").read_text())
    assert rep["nodes"] == 3
    assert rep["cycles_checked"] == 2          # the two self loops
    assert rep["qualifying"] == []


def test_cli_wandering_small(tmp_path):
    rc = main(["wandering", "--gaps", "400", "--out", str(tmp_path)])
    rep = json.loads((tmp_path / "wandering_certificate.json").read_text())
    cert = rep["certificate"]
    assert cert["disjoint"] is True
    assert cert["affine_ok"] is True
    assert (tmp_path / "gaps.csv").exists()
    lines = (tmp_path / "gaps.csv").read_text().splitlines()
    assert lines[0] == "n,symbol,orbit_point,gap_length,position"
    assert len(lines) == 802


def test_cli_spec_file_roundtrip(tmp_path, capsys):
    from flipiet.io import save_iet
    from flipiet.iet import IetSpec
    E = IetSpec((Fraction(1, 2), Fraction(1, 2)), (2, 1))
    path = tmp_path / "spec.json"
    save_iet(E, str(path))
    rc = main(["eval", "--spec", str(path), "--x", "1/4", "--digits", "3"])
    assert rc == 0
    assert capsys.readouterr().out.strip() == "3/4"


def test_cli_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["search"])            # missing required --n
    assert exc.value.code == 2


def test_cli_construction_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"lengths": ["1/2", "1/2"],
                               "signed_permutation": [2, 1], "origin": "0"}))
    rc = main(["wandering", "--spec", str(bad), "--gaps", "100",
               "--max-len", "6"])
    assert rc == 3


def test_cli_rejects_nonpositive_settings():
    with pytest.raises(SystemExit) as exc:
        main(["wandering", "--gaps", "-5"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["search", "--n", "0"])
    assert exc.value.code == 2


def test_cli_induct_stdout(capsys):
    rc = main(["induct", "--steps", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("k,p,t\n0,-5 -3 2 1 -4,1\n")


def test_cli_reports_are_deterministic(tmp_path):
    # byte-identical output for identical settings (the embedded config echoes
    # the out directory, so mask that one field)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["wandering", "--gaps", "300", "--probe-steps", "10000",
                 "--out", str(a)]) in (0, 1)
    assert main(["wandering", "--gaps", "300", "--probe-steps", "10000",
                 "--out", str(b)]) in (0, 1)
    ja = json.loads((a / "wandering_certificate.json").read_text())
    jb = json.loads((b / "wandering_certificate.json").read_text())
    ja["config"].pop("out")
    jb["config"].pop("out")
    assert json.dumps(ja, sort_keys=True) == json.dumps(jb, sort_keys=True)
    assert (a / "gaps.csv").read_bytes() == (b / "gaps.csv").read_bytes()
