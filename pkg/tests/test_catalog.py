from __future__ import annotations

import copy
import json

import pytest

from hopflift import catalog
from hopflift.bosonization import RealizationError
from hopflift.cyclotomic import order_of
from hopflift.lifting import nichols_basis, strata_primitive

IDS = ["ufo7a", "ufo7b", "ufo7c", "ufo8a", "ufo8b", "ufo8c",
       "br2a-q-1", "br2a-q-zeta", "br2a-N4", "br2a-N6", "br2a-N12"]

# undeformed dimensions from the first complete engine run
FROZEN_DIMS = {"ufo7a": 144, "ufo7b": 144, "ufo7c": 144,
               "ufo8a": 432, "ufo8b": 432, "ufo8c": 432,
               "br2a-q-1": 108, "br2a-q-zeta": 108,
               "br2a-N4": 432, "br2a-N6": 324, "br2a-N12": 432}


def test_ids():
    assert catalog.ids() == IDS


def test_unknown_id():
    with pytest.raises(KeyError):
        catalog.load("ufo7d")


@pytest.mark.parametrize("cid", IDS)
def test_load_every_realization(cid):
    e = catalog.entry(cid)
    assert e.cases
    for case in e.cases:
        assert case.relations
        assert case.id == cid


@pytest.mark.parametrize("cid", IDS)
def test_dynkin_labels_match_diagram(cid):
    for case in catalog.entry(cid).cases:
        lab = catalog.dynkin_labels(case.braiding)
        assert lab["vertices"] == case.diagram["vertices"]
        assert lab["edges"][(1, 2)] == case.diagram["edge"]


@pytest.mark.parametrize("cid", [c for c in IDS if c.startswith("br2a")])
def test_br2a_standard_b2(cid):
    B = catalog.load(cid).braiding
    assert catalog.cartan_matrix(B) == [[2, -2], [-1, 2]]


@pytest.mark.parametrize("cid", IDS)
def test_frozen_nichols_dimension(cid):
    G = nichols_basis(catalog.load(cid))
    assert G.complete
    assert G.dimension() == FROZEN_DIMS[cid]
    assert catalog.entry(cid).data["dimension"] == FROZEN_DIMS[cid]


@pytest.mark.parametrize("cid", [c for c in IDS if c.startswith("br2a")])
def test_br2a_pbw_height_product(cid):
    # positive roots of B2: a1, a2, a1+a2, 2a1+a2; height = order of q_beta,beta
    B = catalog.load(cid).braiding
    prod = 1
    for a, b in [(1, 0), (0, 1), (1, 1), (2, 1)]:
        q = B.q(1, 1) ** (a * a) * B.q(2, 2) ** (b * b) * (B.q(1, 2) * B.q(2, 1)) ** (a * b)
        prod *= order_of(q)
    assert prod == FROZEN_DIMS[cid]


@pytest.mark.parametrize("cid", IDS)
def test_strata_primitive(cid):
    for case in catalog.entry(cid).cases:
        prim = strata_primitive(case)
        assert set(prim) == {r.rid for r in case.relations}
        assert all(prim.values()), (cid, case.tag, prim)


def test_printed_ufo7a_constant_not_primitive():
    data = copy.deepcopy(catalog.entry("ufo7a").data)
    data["strata"][0][2]["rel"] = data["printed_variant"]["serre"]
    case = catalog.parse_case(data).cases[0]
    assert strata_primitive(case) == {"x1^3": True, "x2^3": True, "serre": False}
    assert nichols_basis(case).dimension() == 81


def test_relation_sets():
    assert [r.text for r in catalog.load("ufo7c").relations][:2] == ["x1^4", "x2^2"]
    assert [r.rid for r in catalog.load("ufo8c").relations] == ["x1^12", "x2^2", "x11112", "bracket"]
    assert [r.rid for r in catalog.load("br2a-q-zeta").relations] == ["x1^3", "x2^6", "x221", "x112^2"]
    strata = [[r.rid for r in s.relations] for s in catalog.load("br2a-q-1").strata]
    assert strata == [["x1^3", "x2^2"], ["bracket"], ["x112^6"]]
    strata = [[r.rid for r in s.relations] for s in catalog.load("ufo8a").strata]
    assert strata == [["x1^3", "x2^3", "serre"], ["x12^12"]]
    assert len(catalog.load("ufo7a").strata) == 1


@pytest.mark.parametrize("cid", IDS)
def test_admissibility_expectations(cid):
    rows = catalog.check_admissibility(catalog.entry(cid))
    assert rows
    assert all(r["match"] for r in rows), rows


def test_expected_outputs_have_both_sides():
    for cid in IDS:
        exp = catalog.expected_outputs(cid)
        assert exp.get("lifting")


def _minimal(**extra):
    data = {"id": "tiny", "n": 2, "braiding": [["-1", "1"], ["1", "-1"]],
            "strata": [[{"id": "a", "rel": "x1^2", "lambda": "l1"}]]}
    data.update(extra)
    return data


def test_parse_case_minimal():
    e = catalog.parse_case(_minimal())
    assert e.cases[0].relation("a").md == (2, 0)


def test_case_file_errors(tmp_path):
    bad = _minimal()
    del bad["strata"]
    with pytest.raises(catalog.CaseFileError):
        catalog.parse_case(bad)
    with pytest.raises(catalog.CaseFileError):
        catalog.parse_case({"id": "x", "strata": []})
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(catalog.CaseFileError):
        catalog.load_file(p)


def test_realization_violation():
    data = _minimal(group_orders=[2, 2], grouplikes=[[1, 0], [0, 1]],
                    char_values=[["-1", "-1"], ["1", "-1"]])
    with pytest.raises(RealizationError, match="realization equation violated"):
        catalog.parse_case(data)


def test_round_trip_file(tmp_path):
    p = tmp_path / "ufo7b.json"
    p.write_text(json.dumps(catalog.entry("ufo7b").data))
    e = catalog.load_file(p)
    assert [c.tag for c in e.cases] == ["l1", "l2"]
