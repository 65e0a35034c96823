from __future__ import annotations

import copy
import json

import pytest

from hopflift import catalog
from hopflift.cli import main
from hopflift.expr import Expr, parse
from hopflift.lifting import LiftingSolver, _leg_nf

QUANTUM_PLANE = {
    "id": "qplane",
    "n": 3,
    "braiding": [["z3", "z3"], ["1", "z3"]],
    "strata": [[{"id": "x1^2", "rel": "x1^2"}, {"id": "x2^2", "rel": "x2^2"},
                {"id": "skew", "rel": "x1*x2 - z3*x2*x1"}]],
}


def _write(tmp_path, data, name="case.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def _run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_list(capsys):
    code, out, _ = _run(capsys, ["list"])
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == catalog.ids()


def test_show(capsys):
    code, out, _ = _run(capsys, ["show", "ufo7c"])
    assert code == 0
    assert "x1^4" in out and "realization l2" in out


def test_gb_quantum_plane(tmp_path, capsys):
    path = _write(tmp_path, QUANTUM_PLANE)
    code, out, _ = _run(capsys, ["gb", path, "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["complete"] and rep["dimension"] == 4
    assert rep["config"]["degree_cap"] >= 2


def test_gb_ufo7a_frozen_dimension(capsys):
    code, out, _ = _run(capsys, ["gb", "ufo7a", "--format", "json"])
    assert code == 0
    assert json.loads(out)["dimension"] == 144


def test_gb_bound_too_small(capsys):
    code, out, err = _run(capsys, ["gb", "ufo7a", "--bound", "1"])
    assert code != 0
    assert "incomplete at bound 1" in err


def test_gb_figure(tmp_path, capsys):
    fig = tmp_path / "h.png"
    code, _out, _err = _run(capsys, ["gb", "ufo7b", "--figure", str(fig)])
    assert code == 0
    assert fig.stat().st_size > 0


def test_verify_bad_realization(tmp_path, capsys):
    data = copy.deepcopy(QUANTUM_PLANE)
    data.update(group_orders=[3, 3], grouplikes=[[1, 0], [0, 1]],
                char_values=[["z3", "z3"], ["z3", "z3"]])
    path = _write(tmp_path, data)
    code, out, _ = _run(capsys, ["verify", path, "--format", "json"])
    assert code != 0
    rep = json.loads(out)
    assert not rep["passed"]
    assert "realization equation violated" in rep["failures"][0]["detail"]


def test_unknown_case(capsys):
    code, _out, err = _run(capsys, ["show", "nope"])
    assert code != 0 and err


def _solve_json(capsys, argv):
    code, out, _ = _run(capsys, argv)
    assert code == 0
    return json.loads(out)


def test_solve_ufo7b_stratum_1(capsys):
    rep = _solve_json(capsys, ["solve", "ufo7b", "--tag", "l2", "--stratum", "1"])
    (rel,) = rep["relations"]
    assert rel["relation"] == "bracket"
    case = catalog.load("ufo7b", "l2")
    scope = case.scope()
    ours = parse(rel["lifting_correction"], scope)
    term = parse("l2*q12*(1+zeta^7)*x112*x1^2*g2^2", scope)
    S = LiftingSolver(case)
    S.run()
    # equal modulo the ideal of the first stratum
    M = S._gb("lifting", 1, 7)
    assert not _leg_nf(Expr("add", (ours, term)), M, S.ring, case.realization)


def test_solve_br2a_n6(capsys):
    rep = _solve_json(capsys, ["solve", "br2a-N6", "--stratum", "1"])
    (rel,) = rep["relations"]
    case = catalog.load("br2a-N6")
    scope = case.scope()
    ours = parse(rel["lifting_correction"], scope)
    want = parse("l1^4*l2*g2^6*(1-g1^12)", scope)
    assert not _leg_nf(Expr("add", (ours, Expr("neg", (want,)))), None, case.ring(), case.realization)


def test_solve_without_lambdas(tmp_path, capsys):
    data = copy.deepcopy(catalog.entry("ufo7b").data)
    for stratum in data["strata"]:
        for r in stratum:
            r.pop("lambda", None)
    data.pop("expected")
    rep = _solve_json(capsys, ["solve", _write(tmp_path, data), "--tag", "l2"])
    for rel in rep["relations"]:
        assert rel["cleft_correction"] == "0"
        assert rel["lifting_correction"] == "0"


def test_solve_deterministic(capsys):
    a = _run(capsys, ["solve", "ufo8c"])[1]
    b = _run(capsys, ["solve", "ufo8c"])[1]
    assert a == b


def test_verify_ufo7b(tmp_path, capsys):
    figs = tmp_path / "figs"
    argv = ["verify", "ufo7b", "--format", "json", "--figures", str(figs)]
    code, out, _ = _run(capsys, argv)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["schema"] == 1 and not rep["failures"]
    assert rep["config"]["seed"] == 0
    assert sorted(p.name for p in figs.iterdir()) == ["ufo7b-l1.png", "ufo7b-l2.png"]


def test_verify_byte_identical(capsys):
    argv = ["verify", "ufo7c", "--format", "json"]
    first = _run(capsys, argv)
    second = _run(capsys, argv)
    assert first[0] == 0
    assert first == second


def test_verify_text(capsys):
    code, out, _ = _run(capsys, ["verify", "ufo7c", "--tag", "l1", "--format", "text"])
    assert code == 0
    assert out.rstrip().endswith("PASS")


def test_verify_lambda_override(capsys):
    code, out, _ = _run(capsys, ["verify", "ufo7b", "--tag", "l2", "--lambda", "l2=3/4", "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    (spec,) = rep["reports"][0]["specializations"]
    assert spec["lambda"] == {"l2": "3/4"}


def test_verify_rejects_inactive_lambda(capsys):
    code, _out, err = _run(capsys, ["verify", "ufo7b", "--tag", "l2", "--lambda", "l1=1"])
    assert code != 0 and "l1" in err


@pytest.mark.parametrize("argv", [["verify"], ["gb"], []])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code != 0
