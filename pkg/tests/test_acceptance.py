"""The thirteen acceptance criteria, one test each, at their stated bounds."""

import itertools
import random
import time
from fractions import Fraction

import numpy as np

from oracles import interval_open, interval_semi_open_witness, space_of, step_path_so_i, to_set
from semihomotopy.finite_space import E1, FiniteSpace, all_spaces, enumerate_topologies, semi_closed_family, \
    semi_open_family
from semihomotopy.formats import CertificateBundle, certificate_to_bundle
from semihomotopy.fundamental_group import (
    EMPTY,
    LoopTable,
    compose_homs,
    free_reduce,
    induced_hom,
    invert,
    multiply,
    parse_word,
    realize,
    register_loop,
)
from semihomotopy.homotopy import (
    Assoc,
    Certificate,
    CertificateError,
    InvCancelLeft,
    InvCancelRight,
    Paste,
    Refl,
    Reparam,
    Sym,
    Trans,
    UnitLeft,
    UnitRight,
    check_certificate,
)
from semihomotopy.interval_sets import Interval, S, is_semi_open
from semihomotopy.maps import CLASSES, SpaceMap, all_maps, class_table, classify, classify_via_closed, \
    search_counterexample
from semihomotopy.paths import (
    RHO_ASSOC,
    RHO_UNIT_LEFT,
    RHO_UNIT_RIGHT,
    PLMap,
    StepPath,
    compose_paths,
    inverse_path,
    is_so_i_path,
    path_connectivity,
    pl_continuity_class,
    reparameterize,
)
from strategies import (
    SPACES_5,
    random_left_closed_union,
    random_loop_table,
    random_ratset,
    random_step_path,
    random_word,
)

F = Fraction

CRITERIA = {
    "test_c01_e1_semi_open_family": "criterion 1: semi-open family of E1, exact, < 1 ms",
    "test_c02_e1_semi_closed_family": "criterion 2: semi-closed family of E1 and complement duality",
    "test_c03_union_and_pointwise_properties": "criterion 3: union closure and pointwise characterisation, 1000 trials, < 5 s",
    "test_c04_implication_lattice": "criterion 4: implication lattice over 29x29x27 maps with non-reversal witnesses, < 60 s",
    "test_c05_open_and_closed_characterisations_agree": "criterion 5: classify agrees with classify_via_closed",
    "test_c06_identity_and_composition": "criterion 6: identity on E1, so1 composition counterexample, so2 closure",
    "test_c07_interval_algebra": "criterion 7: interval semi-openness and witness search agreement",
    "test_c08_exact_path_laws": "criterion 8: associativity, unit and involution identities on 200 triples",
    "test_c09_certificate_suite": "criterion 9: certificates verify in modes 1, 2; corruptions rejected",
    "test_c10_mode3_gap": "criterion 10: rho_assoc is not so-3; mode-3 Assoc rejected on rho-so-i",
    "test_c11_group_axioms": "criterion 11: group laws on 1000 random words, certificates re-verify, < 30 s",
    "test_c12_functoriality": "criterion 12: induced homomorphisms are functorial",
    "test_c13_connectivity": "criterion 13: so1/so2 connectivity on n <= 4; so3 graph vs brute force",
}

E1_SEMI_OPEN = ["", "a", "ac", "ad", "ab", "abc", "acd", "abd", "abcd"]
E1_SEMI_CLOSED = ["abcd", "", "bcd", "bd", "bc", "b", "cd", "c", "d"]


def _masks(names):
    return {E1.mask(s) for s in names}


def test_c01_e1_semi_open_family():
    fresh = FiniteSpace.from_names("abcd", [[], ["a"], ["a", "b"], ["a", "b", "c", "d"]])
    t0 = time.perf_counter()
    fam = semi_open_family(fresh)
    elapsed = time.perf_counter() - t0
    assert set(fam) == _masks(E1_SEMI_OPEN) and len(fam) == 9
    assert elapsed < 1e-3, f"{elapsed * 1e3:.3f} ms"


def test_c02_e1_semi_closed_family():
    closed = semi_closed_family(E1)
    assert set(closed) == _masks(E1_SEMI_CLOSED) and len(closed) == 9
    assert set(closed) == {E1.full ^ m for m in semi_open_family(E1)}


def test_c03_union_and_pointwise_properties():
    rng = random.Random(3)
    oracles = {}
    violations = []
    t0 = time.perf_counter()
    for _ in range(1000):
        X = rng.choice(SPACES_5)
        A, B = rng.randint(0, X.full), rng.randint(0, X.full)
        if X not in oracles:
            oracles[X] = [m for m in range(X.full + 1) if space_of(X).semi_open(to_set(m))]
        so = oracles[X]
        a_ok, b_ok = X.is_semi_open(A)[0], X.is_semi_open(B)[0]
        if a_ok and b_ok and not X.is_semi_open(A | B)[0]:
            violations.append(("union", X, A, B))
        ca, cb = X.full ^ A, X.full ^ B
        if a_ok and b_ok and not X.is_semi_closed(ca & cb)[0]:
            violations.append(("intersection of semi-closed", X, ca, cb))
        for M, ok in ((A, a_ok), (B, b_ok)):
            pointwise = all(any(U >> p & 1 and U & ~M == 0 for U in so) for p in range(X.n) if M >> p & 1)
            if ok != pointwise:
                violations.append(("pointwise", X, M))
    elapsed = time.perf_counter() - t0
    assert not violations, violations[:3]
    assert elapsed < 5, f"{elapsed:.2f} s"


# implication figure
IMPLIES = [("so3", "so2"), ("so3", "continuous"), ("so2", "so1"), ("continuous", "so1"), ("constant", "so3")]
NON_REVERSALS = [("so2", "so3"), ("continuous", "so3"), ("so1", "so2"), ("so1", "continuous"),
                 ("so3", "constant"), ("continuous", "so2"), ("so2", "continuous")]
THREE = tuple(enumerate_topologies(3))


def test_c04_implication_lattice():
    assert len(THREE) == 29
    t0 = time.perf_counter()
    violations = 0
    witnesses = {}
    for X in THREE:
        for Y in THREE:
            tab = class_table(X, Y)
            for p, q in IMPLIES:
                violations += int(np.count_nonzero(tab[p] & ~tab[q]))
            for p, q in NON_REVERSALS:
                if (p, q) not in witnesses:
                    hits = np.flatnonzero(tab[p] & ~tab[q])
                    if hits.size:
                        witnesses[(p, q)] = SpaceMap(X, Y, tuple(int(v) for v in all_maps(3, 3)[hits[0]]))
    elapsed = time.perf_counter() - t0
    assert violations == 0
    assert set(witnesses) == set(NON_REVERSALS)
    for (p, q), f in witnesses.items():
        flags = dict(zip(CLASSES, classify(f).flags()), constant=f.is_constant)
        assert flags[p] and not flags[q]
        r = search_counterexample(f"{p}-implies-{q}", max_points=3)
        assert r.found
    assert elapsed < 60, f"{elapsed:.1f} s"


def test_c05_open_and_closed_characterisations_agree():
    maps = all_maps(3, 3)
    disagreements = 0
    for X in THREE:
        for Y in THREE:
            for images in maps:
                f = SpaceMap(X, Y, tuple(int(v) for v in images))
                disagreements += classify(f).flags() != classify_via_closed(f).flags()
    assert disagreements == 0


def test_c06_identity_and_composition():
    r = classify(SpaceMap.identity(E1))
    assert (r.so1, r.so2, r.so3) == (True, True, False)
    so1 = search_counterexample("so1-compose-closed", max_points=3)
    assert so1.found
    so2 = search_counterexample("so2-compose-closed", max_points=3)
    assert not so2.found and so2.checked > 0


def test_c07_interval_algebra():
    for text in ("(1/4,1/2)", "(1/4,1/2]", "[1/4,1/2)", "[1/4,1/2]"):
        assert is_semi_open(S(text))
    rng = random.Random(7)
    for _ in range(500):
        assert is_semi_open(random_left_closed_union(rng))
    for k in range(9):
        assert not is_semi_open(S("{%d/8}" % k))
    mismatches = []
    for _ in range(500):
        A = random_ratset(rng)
        if is_semi_open(A) != (interval_semi_open_witness(A) is not None):
            mismatches.append(A)
    assert not mismatches, [str(a) for a in mismatches[:3]]


def test_c08_exact_path_laws():
    rng = random.Random(8)
    pool = [s for s in all_spaces(3)]
    for _ in range(200):
        X = rng.choice(pool)
        a = random_step_path(rng, X)
        b = random_step_path(rng, X, start=a.end)
        c = random_step_path(rng, X, start=b.end)
        assert reparameterize(compose_paths(a, compose_paths(b, c)), RHO_ASSOC) == compose_paths(compose_paths(a, b), c)
        assert reparameterize(a, RHO_UNIT_LEFT) == compose_paths(StepPath.constant(X, a.start), a)
        assert reparameterize(a, RHO_UNIT_RIGHT) == compose_paths(a, StepPath.constant(X, a.end))
        assert inverse_path(inverse_path(a)) == a


SIERP = FiniteSpace.from_names("ab", [[], ["a"], ["a", "b"]])
A_PATH = StepPath.parse(SIERP, [("[0,1/3)", "a"), ("[1/3,1]", "b")])
B_PATH = StepPath.constant(SIERP, 1)
G_LOOP = StepPath.parse(SIERP, [("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a")])
RHO1 = PLMap.of((0, 0), (F(1, 2), F(1, 4)), (1, 1))


def test_c09_certificate_suite():
    canonical = [
        Refl(A_PATH),
        Sym(Reparam(A_PATH, RHO1)),
        Trans(Reparam(A_PATH, RHO1), Sym(Reparam(A_PATH, RHO1))),
        Reparam(G_LOOP, RHO1),
        Paste(Refl(A_PATH), Reparam(B_PATH, RHO1)),
        Assoc(A_PATH, B_PATH, B_PATH),
        UnitLeft(A_PATH),
        UnitRight(A_PATH),
        InvCancelLeft(A_PATH),
        InvCancelRight(G_LOOP),
    ]
    corrupted = [
        (Trans(Refl(A_PATH), Refl(G_LOOP)), "trans-middle"),
        (Paste(Refl(A_PATH), Refl(G_LOOP)), "paste-endpoints"),
        (Assoc(A_PATH, A_PATH, B_PATH), "composable"),
        (Reparam(A_PATH, PLMap.of((0, F(1, 4)), (1, 1))), "rho-endpoints"),
        (Reparam(A_PATH, PLMap.of((0, 0), (F(1, 4), F(3, 4)), (F(1, 2), F(1, 4)), (1, 1))), "rho-monotone"),
    ]
    for mode in (1, 2):
        for node in canonical:
            j = check_certificate(Certificate(node, mode))
            assert j.mode == mode
        for node, hyp in corrupted:
            try:
                check_certificate(Certificate(node, mode))
            except CertificateError as exc:
                assert exc.hypothesis == hyp, (node, exc.hypothesis)
            else:
                raise AssertionError(f"accepted corrupted certificate {node}")


def test_c10_mode3_gap():
    v = pl_continuity_class(RHO_ASSOC, 3)
    assert v.status == "refuted"
    assert v.witness == S("[1/4,1/2)") and v.preimage == S("[1/8,1/4)")
    assert not interval_open(v.preimage)
    back = inverse_path(A_PATH)
    try:
        check_certificate(Certificate(Assoc(A_PATH, back, A_PATH), 3))
    except CertificateError as exc:
        assert exc.hypothesis == "rho-so-i"
    else:
        raise AssertionError("mode-3 Assoc certificate was accepted")


def _reverify(product):
    """Serialize the certificate, read it back and run the kernel on the copy."""
    data = certificate_to_bundle(product.certificate)
    bundle = CertificateBundle.load(data)
    j = check_certificate(bundle.certificate(bundle.inline))
    assert j.lhs == product.judgment.lhs and j.rhs == product.judgment.rhs


def test_c11_group_axioms():
    rng = random.Random(11)
    t0 = time.perf_counter()
    for trial in range(1000):
        table = random_loop_table(rng, rng.choice((1, 2)))
        a, b, c = (random_word(rng, table) for _ in range(3))
        ab = multiply(table, a, b)
        left = multiply(table, ab.word, c)
        bc = multiply(table, b, c)
        right = multiply(table, a, bc.word)
        assert left.word == right.word == free_reduce(a + b + c)
        unit_l, unit_r = multiply(table, EMPTY, a), multiply(table, a, EMPTY)
        assert unit_l.word == unit_r.word == free_reduce(a)
        cancel = multiply(table, a, invert(a))
        assert cancel.word == EMPTY
        for p in (ab, left, bc, right, unit_l, unit_r, cancel):
            _reverify(p)
    elapsed = time.perf_counter() - t0
    assert elapsed < 30, f"{elapsed:.1f} s"


SWAPPED = FiniteSpace.from_names("abcd", [[], ["b"], ["a", "b"], ["a", "b", "c", "d"]])
RELABEL = {"a": "b", "b": "a", "c": "c", "d": "d"}


def _e1_table():
    a = E1.index("a")
    t = LoopTable(E1, a, 2)
    loops = [
        [("[0,1/4)", "a"), ("[1/4,1/2)", "b"), ("[1/2,3/4)", "c"), ("[3/4,1]", "a")],
        [("[0,1/3)", "a"), ("[1/3,2/3)", "d"), ("[2/3,1]", "a")],
        [("[0,1/2)", "a"), ("[1/2,3/4)", "b"), ("[3/4,1]", "a")],
    ]
    for name, pieces in zip("ghk", loops):
        t = register_loop(t, name, StepPath.parse(E1, pieces))
    return t


def test_c12_functoriality():
    t = _e1_table()
    words = [parse_word(w) for w in ("g", "h^-1", "g k h", "k^-1 g^-1 k")]
    ident = induced_hom(SpaceMap.identity(E1), t)
    assert ident.target.generators == t.generators
    for w in words:
        assert ident(w) == w and realize(ident.target, ident(w)) == realize(t, w)

    f = SpaceMap.from_names(E1, SWAPPED, RELABEL)
    g = SpaceMap.from_names(SWAPPED, E1, RELABEL)
    k = SpaceMap.from_names(E1, E1, {"a": "a", "b": "b", "c": "a", "d": "d"})
    assert classify(k).so2
    fs = induced_hom(f, t)
    gs = induced_hom(g, fs.target)
    gf = induced_hom(SpaceMap(E1, E1, tuple(g.images[v] for v in f.images)), t)
    for name in t.names:
        assert gf.target.path(name) == gs.target.path(name)
        assert compose_homs(fs, gs)(((name, 1),)) == gf(((name, 1),))
    ks = induced_hom(k, t)
    kfs = induced_hom(f, ks.target)
    fk = induced_hom(SpaceMap(E1, SWAPPED, tuple(f.images[v] for v in k.images)), t)
    for name in t.names:
        assert fk.target.path(name) == kfs.target.path(name)

    # relabeling back and forth returns every representative unchanged
    for w in words:
        assert realize(gs.target, compose_homs(fs, gs)(w)) == realize(t, w)
    back = induced_hom(f, gs.target)
    for name in t.names:
        assert back.target.path(name) == fs.target.path(name)
    for w in words:
        image = realize(fs.target, fs(w))
        assert image == realize(t, w).map_values(f.images, SWAPPED)


def _cells(positions):
    out = [Interval(F(0), F(0))]
    lo = F(0)
    for p in positions:
        out += [Interval(lo, p, False, False), Interval(p, p)]
        lo = p
    out += [Interval(lo, F(1), False, False), Interval(F(1), F(1))]
    return out


def _so3_reachable(X, positions):
    """Brute force: every step path constant on the cells cut out by ``positions``."""
    ox = space_of(X)
    tests = [B for B in ox.semi_opens()]
    cells = _cells(positions)
    m = len(cells)
    # a union of cells is open iff each point cell in it has its gap neighbours in it
    reach = {}
    for values in itertools.product(range(X.n), repeat=m):
        key = (values[0], values[-1])
        if key in reach:
            continue
        ok = True
        for B in tests:
            inside = [v in B for v in values]
            for j in range(0, m, 2):
                if inside[j] and ((j > 0 and not inside[j - 1]) or (j < m - 1 and not inside[j + 1])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            reach[key] = StepPath(X, tuple(zip(cells, values)))
    return reach


def test_c13_connectivity():
    for X in all_spaces(4):
        for x in range(X.n):
            for y in range(X.n):
                for i in (1, 2):
                    ok, path = path_connectivity(X, x, y, i)
                    assert ok and path.start == x and path.end == y
                    assert is_so_i_path(path, i).holds and step_path_so_i(path, i)
    grids = [(), (F(4, 8),), (F(3, 8), F(5, 8)), (F(2, 8), F(4, 8), F(6, 8))]
    for X in THREE:
        brute = {}
        for positions in grids:
            for key, p in _so3_reachable(X, positions).items():
                brute.setdefault(key, p)
        for x in range(3):
            for y in range(3):
                ok, path = path_connectivity(X, x, y, 3)
                assert ok == ((x, y) in brute), (X, x, y)
                if ok:
                    assert step_path_so_i(path, 3)
                    assert step_path_so_i(brute[(x, y)], 3)
