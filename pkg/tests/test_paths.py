from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import step_path_so_i
from semihomotopy.finite_space import E1, SIERPINSKI, FiniteSpace, SpaceError
from semihomotopy.interval_sets import S, is_open
from semihomotopy.paths import (
    RHO_ASSOC,
    RHO_UNIT_LEFT,
    RHO_UNIT_RIGHT,
    PathError,
    PLMap,
    StepPath,
    compose_paths,
    find_reparameterization,
    inverse_path,
    is_so_i_path,
    path_connectivity,
    pl_continuity_class,
    reparameterize,
)
from strategies import spaces, step_paths

F = Fraction


def P(space, *pieces):
    return StepPath.parse(space, pieces)


def test_parse_merges_equal_neighbours():
    p = P(SIERPINSKI, ("[0,1/4]", "a"), ("(1/4,1/2)", "a"), ("[1/2,1]", "b"))
    assert str(p) == "[0,1/2)↦a, [1/2,1]↦b"
    assert p(F(1, 2)) == 1 and p(F(0)) == 0


@pytest.mark.parametrize(
    "pieces",
    [
        [("[0,1/2)", "a"), ("[1/2,1)", "b")],
        [("(0,1/2)", "a"), ("[1/2,1]", "b")],
        [("[0,1/2]", "a"), ("[1/2,1]", "b")],
        [("[0,1/2)", "a"), ("(1/2,1]", "b")],
        [("[0,1/2)", "z"), ("[1/2,1]", "b")],
    ],
)
def test_parse_rejects_bad_partitions(pieces):
    with pytest.raises((PathError, SpaceError)):
        StepPath.parse(SIERPINSKI, pieces)


def test_so_i_examples():
    half_open = P(SIERPINSKI, ("[0,1/2)", "a"), ("[1/2,1]", "b"))
    assert is_so_i_path(half_open, 1).holds and is_so_i_path(half_open, 3).holds
    point = P(SIERPINSKI, ("[0,1/2)", "b"), ("[1/2,1/2]", "a"), ("(1/2,1]", "b"))
    ok, (test_set, pre) = is_so_i_path(point, 1)
    assert not ok and SIERPINSKI.fmt(test_set) == "{a}" and pre == S("{1/2}")
    dip = P(SIERPINSKI, ("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a"))
    v = is_so_i_path(dip, 3)
    assert is_so_i_path(dip, 2).holds and not v.holds
    assert v.preimage == S("[0,1/2) u [3/4,1]")


@given(step_paths(), st.sampled_from([1, 2, 3]))
def test_so_i_matches_definition(p, i):
    assert is_so_i_path(p, i).holds == step_path_so_i(p, i)


@given(step_paths())
def test_so_hierarchy_on_paths(p):
    if is_so_i_path(p, 3).holds:
        assert is_so_i_path(p, 2).holds
    if is_so_i_path(p, 2).holds:
        assert is_so_i_path(p, 1).holds


@given(step_paths())
def test_inverse_is_involution(p):
    q = inverse_path(p)
    assert inverse_path(q) == p
    assert q.start == p.end and q.end == p.start
    for t in (F(0), F(1, 3), F(1, 2), F(5, 7), F(1)):
        assert q(t) == p(1 - t)


@given(st.data())
def test_compose_pointwise(data):
    X = data.draw(spaces(3))
    a = data.draw(step_paths(X))
    b = data.draw(step_paths(X, start=a.end))
    c = compose_paths(a, b)
    for t in (F(0), F(1, 5), F(1, 2), F(3, 5), F(7, 8), F(1)):
        assert c(t) == (a(2 * t) if t <= F(1, 2) else b(2 * t - 1))


def test_compose_requires_matching_endpoints():
    a = P(SIERPINSKI, ("[0,1]", "a"))
    b = P(SIERPINSKI, ("[0,1]", "b"))
    with pytest.raises(PathError, match="cannot compose"):
        compose_paths(a, b)


@given(st.data())
def test_assoc_identity(data):
    X = data.draw(spaces(3))
    a = data.draw(step_paths(X))
    b = data.draw(step_paths(X, start=a.end))
    c = data.draw(step_paths(X, start=b.end))
    lhs = compose_paths(a, compose_paths(b, c))
    assert reparameterize(lhs, RHO_ASSOC) == compose_paths(compose_paths(a, b), c)


@given(step_paths())
def test_unit_identities(p):
    X = p.space
    one_x, one_y = StepPath.constant(X, p.start), StepPath.constant(X, p.end)
    assert reparameterize(p, RHO_UNIT_LEFT) == compose_paths(one_x, p)
    assert reparameterize(p, RHO_UNIT_RIGHT) == compose_paths(p, one_y)


def test_plmap_preimage():
    assert RHO_ASSOC.preimage(S("[1/4,1/2)")) == S("[1/8,1/4)")
    assert RHO_UNIT_LEFT.preimage(S("{0}")) == S("[0,1/2]")
    assert RHO_ASSOC(F(1, 8)) == F(1, 4)


@given(st.lists(st.tuples(st.integers(1, 11), st.integers(0, 12)), max_size=3, unique_by=lambda x: x[0]),
       st.sampled_from([S("[0,1/3)"), S("(1/4,3/4]"), S("{1/2}"), S("[1/5,2/5] u (3/5,1]")]))
def test_plmap_preimage_pointwise(raw, target):
    inner = sorted((F(t, 12), F(v, 12)) for t, v in raw)
    rho = PLMap(((F(0), F(0)),) + tuple(inner) + ((F(1), F(1)),))
    pre = rho.preimage(target)
    for k in range(0, 97):
        t = F(k, 96)
        assert (t in pre) == (rho(t) in target)


def test_plmap_validation():
    with pytest.raises(PathError):
        PLMap.of((0, 0), (F(1, 2), F(3, 2)), (1, 1))
    with pytest.raises(PathError):
        PLMap.of((F(1, 4), 0), (1, 1))
    with pytest.raises(PathError):
        reparameterize(P(SIERPINSKI, ("[0,1]", "a")), PLMap.of((0, 0), (F(1, 2), 1), (1, 0)))


def test_pl_classes():
    assert pl_continuity_class(RHO_ASSOC, 1).status == "holds"
    assert pl_continuity_class(RHO_ASSOC, 2).status == "holds"
    v = pl_continuity_class(RHO_ASSOC, 3)
    assert v.status == "refuted"
    assert v.witness == S("[1/4,1/2)") and v.preimage == S("[1/8,1/4)")
    assert not is_open(v.preimage)
    bent = PLMap.of((0, 0), (F(1, 2), 1), (1, 0))
    assert pl_continuity_class(bent, 2).status == "sufficient-condition-unmet"
    assert pl_continuity_class(PLMap.constant(F(1, 3)), 3).status == "holds"


def test_find_reparameterization():
    g = P(SIERPINSKI, ("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a"))
    h = P(SIERPINSKI, ("[0,1/3)", "a"), ("[1/3,2/3)", "b"), ("[2/3,1]", "a"))
    rho = find_reparameterization(g, h)
    assert rho is not None and reparameterize(h, rho) == g
    k = P(SIERPINSKI, ("[0,1/2)", "a"), ("[1/2,3/4]", "b"), ("(3/4,1]", "a"))
    assert find_reparameterization(g, k) is None


def test_connectivity_examples():
    ok, path = path_connectivity(E1, E1.index("b"), E1.index("d"), 3)
    assert ok and path.start == E1.index("b") and path.end == E1.index("d")
    assert is_so_i_path(path, 3).holds
    discrete = FiniteSpace.discrete(2)
    assert path_connectivity(discrete, 0, 1, 3) == (False, None)
    assert path_connectivity(discrete, 0, 1, 2)[0]


@given(spaces(4), st.sampled_from([1, 2, 3]), st.data())
def test_connectivity_witnesses_verify(X, i, data):
    x = data.draw(st.integers(0, X.n - 1))
    y = data.draw(st.integers(0, X.n - 1))
    ok, path = path_connectivity(X, x, y, i)
    if ok:
        assert path.start == x and path.end == y
        assert is_so_i_path(path, i).holds
    else:
        assert i == 3
