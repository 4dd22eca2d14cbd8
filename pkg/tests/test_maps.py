import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import map_classes, space_of
from semihomotopy.finite_space import E1, SIERPINSKI, FiniteSpace
from semihomotopy.formats import Loader
from semihomotopy.maps import (
    CLASSES,
    MapError,
    SpaceMap,
    all_maps,
    class_table,
    classify,
    classify_at,
    classify_via_closed,
    compose,
    map_index,
    parse_query,
    search_counterexample,
)
from strategies import spaces


@st.composite
def space_maps(draw, max_points=3):
    X = draw(spaces(max_points))
    Y = draw(spaces(max_points))
    images = draw(st.lists(st.integers(0, Y.n - 1), min_size=X.n, max_size=X.n))
    return SpaceMap(X, Y, tuple(images))


def test_identity_on_e1():
    r = classify(SpaceMap.identity(E1))
    assert r.flags() == (True, True, True, False)
    w = r.witnesses["so3"]
    assert E1.fmt(w.test_set) == "{a,c}" and E1.fmt(w.preimage) == "{a,c}"


def test_report_json_shape():
    data = classify(SpaceMap.identity(E1)).to_json(SpaceMap.identity(E1))
    assert data["so3"] is False
    assert data["witnesses"]["so3"] == {"set": ["a", "c"], "preimage": ["a", "c"]}
    assert set(data["claims"]) == set(CLASSES)


def test_from_names_validation():
    with pytest.raises(MapError):
        SpaceMap.from_names(E1, SIERPINSKI, {"a": "a"})
    with pytest.raises(MapError):
        SpaceMap.from_names(E1, SIERPINSKI, {p: "z" for p in E1.points})


@given(space_maps())
def test_classify_matches_definitions(f):
    r = classify(f)
    expected = map_classes(space_of(f.domain), space_of(f.codomain), f.images)
    assert dict(zip(CLASSES, r.flags())) == expected
    for name, v in r.witnesses.items():
        assert f.preimage(v.test_set) == v.preimage


@given(space_maps())
def test_closed_set_characterisation_agrees(f):
    assert classify(f).flags() == classify_via_closed(f).flags()


@given(space_maps())
def test_pointwise_agrees_with_global(f):
    r = classify(f)
    points = [classify_at(f, p) for p in range(f.domain.n)]
    for name in ("so1", "so2", "so3"):
        assert getattr(r, name) == all(getattr(pr, name) for pr in points)


@given(space_maps())
def test_class_table_matches_classify(f):
    X, Y = f.domain, f.codomain
    table = class_table(X, Y)
    idx = map_index(f.images, Y.n)
    assert tuple(all_maps(X.n, Y.n)[idx]) == f.images
    flags = classify(f)
    for name in CLASSES:
        assert bool(table[name][idx]) == getattr(flags, name)
    assert bool(table["constant"][idx]) == f.is_constant


def test_all_maps_lex_order():
    m = all_maps(2, 3)
    assert m.shape == (9, 2)
    assert [tuple(r) for r in m] == sorted(tuple(r) for r in m)
    assert np.array_equal(m[0], [0, 0])


@given(space_maps(), st.data())
def test_compose(f, data):
    Z = data.draw(spaces(3))
    g = SpaceMap(f.codomain, Z, tuple(data.draw(st.lists(st.integers(0, Z.n - 1), min_size=f.codomain.n,
                                                          max_size=f.codomain.n))))
    h = compose(f, g)
    assert h.images == tuple(g.images[v] for v in f.images)
    if classify(f).so2 and classify(g).so2:
        assert classify(h).so2


def test_parse_query():
    assert parse_query("so1-compose-closed") == ("compose", "so1")
    assert parse_query("so2-implies-so3?") == ("implies", "so2", "so3")
    with pytest.raises(MapError):
        parse_query("so4-compose-closed")


def test_so1_composition_counterexample():
    r = search_counterexample("so1-compose-closed", max_points=3)
    assert r.found
    w = r.witness
    f, g, h = (Loader().map(w[k]) for k in ("f", "g", "composite"))
    assert classify(f).so1 and classify(g).so1 and not classify(h).so1
    assert compose(f, g) == h


@pytest.mark.parametrize("cls", ["so2", "so3", "continuous"])
def test_compose_closed_classes(cls):
    assert not search_counterexample(f"{cls}-compose-closed", max_points=3).found


def test_search_parallel_is_deterministic():
    a = search_counterexample("so1-implies-so2", max_points=3, jobs=1)
    b = search_counterexample("so1-implies-so2", max_points=3, jobs=4)
    assert a.to_json() == b.to_json()


def test_identity_query():
    r = search_counterexample("identity-so3", max_points=3)
    assert r.found
    X = FiniteSpace.from_json(r.witness["map"]["domain"])
    assert not classify(SpaceMap.identity(X)).so3
