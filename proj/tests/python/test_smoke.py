import json

import pytest

import symred


def test_parse_print_round_trip():
    e = symred.parse("c*tan(x)^2", params=["c"])
    again = symred.parse(str(e), params=["c"])
    assert e.same(again)


def test_differentiate_tan_closed_form():
    e = symred.parse("tan(x)")
    d = symred.differentiate(e, "x")
    assert str(d) == "1+tan(x)^2"


def test_substitute_resolves_derivative_tags():
    claim = symred.parse("psi'(x)-psi(x)^2-1", functions=["psi"])
    inst = symred.substitute(claim, functions={"psi": (["x"], symred.parse("-cot(x)"))})
    assert str(symred.expand_collect(inst)) == "0"


def test_normalize_u_poly():
    coeffs = symred.normalize_u_poly(symred.parse("(u^2-1)/x"))
    assert set(coeffs) == {0, 2}
    assert str(coeffs[2]) == "1/x"


def test_eval_and_is_zero():
    e = symred.parse("2/x^2")
    assert symred.eval_numeric(e, x=2.0) == pytest.approx(0.5)
    r = symred.is_zero(symred.parse("(1+tan(x)^2)-1-tan(x)^2"))
    assert r["zero"]
    r2 = symred.is_zero(symred.parse("x-t"))
    assert not r2["zero"]
    assert r2["witness"] is not None


def test_catalog_and_verification():
    ids = symred.catalog_ids()
    assert len(ids) == 18
    assert "thm2.case6" in ids
    rep = symred.verify_entry("thm2.case4")
    assert rep["pass"] and rep["routes_agree"]


def test_determining_system_case4_vanishes():
    residuals = symred.determining_system(1, "c*x^2", xi="-1/x", eta="0", params=["c"])
    assert residuals == ["0", "0", "0", "0"]


def test_verify_catalog_json_overall():
    doc = json.loads(symred.verify_catalog_json(samples=60))
    assert doc["summary"]["overall"] == "pass"


def test_reduce_tau0_smoke():
    out = symred.reduce_tau0("tau0.item6", nt=41, nx=41)
    assert out["pde_residual"]["linf"] < 1e-3
    assert len(out["u"]) == 41 and len(out["u"][0]) == 41


def test_reduce_tau1_smoke():
    out = symred.reduce_tau1("thm2.case4", params={"c": 1.0}, nt=41, nx=41,
                             x_lo=1.0, x_hi=2.0)
    assert out["pde_residual"]["linf"] < 1e-3
    assert out["characteristic_residual"]["linf"] < 1e-3
