"""Deformations over K[t]/(t^{n+1}): lifting, obstructions, gauge, CE algebras, oracles."""

import itertools
import json
import math
import random
from fractions import Fraction as F

import pytest

from deforma.convolution import (StructureMaps, cohomology_betti, convolution_algebra,
                                 deformation_complex, load_structure, relation_defects,
                                 structure_to_mc)
from deforma.deform import (ArtinianScalars, DeformationState, GaugeCertificate, HochschildDGLA,
                            InvalidState, ObstructionClass, OracleError, brute_weight_two,
                            ce_algebra, ce_oracle, extend_scalars, gauge_equivalent,
                            hochschild_oracle, lift_order, lift_set_parametrize, lift_to,
                            mc_vs_ce_points, series)
from deforma.exactalg import SparseMatrix, kernel_basis, rank
from deforma.linfty import TableLInfty, check_linfty, gauge_act, mc_residual, parse_linfty, twist
from deforma.presentations import BUILTINS, quotient_component

from conftest import cx, fixture_path, golden_path

KC = "complex KC\nbasis a deg=0\nbasis b deg=0\nbasis e deg=0\nbasis f deg=1\nd e -> 1*f\n"
MU0 = {(0, (0, 0)): 1, (1, (0, 1)): 1, (1, (1, 0)): 1}
PSI = {(0, (1, 1)): 1}


def load_linfty(name):
    return parse_linfty(open(fixture_path(name)).read())


def golden(name):
    return json.load(open(golden_path(name)))["result"]


def add(u, v, c=1):
    out = dict(u)
    for k, x in v.items():
        out[k] = out.get(k, 0) + c * x
    return {k: x for k, x in out.items() if x}


def dual_numbers(W=6, N=8):
    s = load_structure(fixture_path("assoc_dual.st"))
    d = load_structure(fixture_path("assoc_dual_dir.st"))
    conv = convolution_algebra(s.presentation, s.X, W, N=N)
    return s, d, conv, structure_to_mc(conv, s), structure_to_mc(conv, d)


def in_span(tw, deg, v):
    """v lies in the span of the image of the twisted differential in degree deg."""
    pos = {j: r for r, j in enumerate(tw.by_degree(deg + 1))}
    d = tw.differential_matrix(deg)
    w = {pos[i]: x for i, x in v.items()}
    return rank(SparseMatrix.from_columns(d.rows, d.columns() + [w])) == rank(d)


# -- Artinian scalars ------------------------------------------------------------

def test_truncation():
    R = ArtinianScalars(3)
    assert R.product(1, 2) == (1, 3)
    assert R.product(2, 2)[0] == 0
    assert R.modulus == "t^4"


def test_trivial_ring_gives_zero_algebra():
    g = load_linfty("heisenberg.linfty")
    assert extend_scalars(g, ArtinianScalars(0)).dim == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_extension_dimensions_and_betti(n):
    s = load_structure(fixture_path("assoc_ut2.st"))
    conv = convolution_algebra(s.presentation, s.X, 3, N=5)
    tw = twist(conv, structure_to_mc(conv, s))
    ext = extend_scalars(tw, ArtinianScalars(n))
    degs = range(0, 3)
    for d in range(-1, 4):
        assert len(ext.by_degree(d)) == n * len(tw.by_degree(d))
    b, be = cohomology_betti(tw.complex(degs), degs), cohomology_betti(ext.complex(degs), degs)
    assert be == {d: n * x for d, x in b.items()}


@pytest.mark.parametrize("which", ["hochschild", "conv"])
def test_twist_commutes_with_extension(which):
    if which == "hochschild":
        g = HochschildDGLA(2, 3)
        phi = g.element(MU0)
    else:
        s = load_structure(fixture_path("assoc_dual.st"))
        g = convolution_algebra(s.presentation, s.X, 3, N=5)
        phi = structure_to_mc(g, s)
    R = ArtinianScalars(2, unital=True)
    ext = extend_scalars(g, R)
    a = twist(ext, ext.embed(phi, 0))
    b = extend_scalars(twist(g, phi), R)
    assert a.labels == b.labels and a.degrees == b.degrees
    for k in (1, 2):
        for idxs in itertools.combinations_with_replacement(range(a.dim), k):
            assert a.bracket_basis(idxs) == b.bracket_basis(idxs)


# -- lifting ---------------------------------------------------------------------

def test_dual_numbers_lift_without_corrections():
    s, d, conv, phi, psi = dual_numbers()
    st = lift_to(DeformationState(conv, phi, [psi]), 5)
    assert isinstance(st, DeformationState) and st.order == 5
    assert st.corrections[0] == psi and not any(st.corrections[1:])
    assert st.check()
    # independently: mu + c psi is associative for every c (a quadratic identity in c)
    for c in (1, 2, F(-1, 3)):
        maps = {"mu": add(s.maps["mu"], d.maps["mu"], c)}
        assert relation_defects(StructureMaps(s.presentation, s.X, maps)) == {}


def test_every_lift_is_mc_at_its_order():
    _, _, conv, phi, psi = dual_numbers(4, 6)
    st = DeformationState(conv, phi, [psi])
    for k in range(2, 5):
        st = lift_order(st)
        assert st.order == k and not st.residual()
        assert not st.residual(k)


def test_invalid_state_rejected():
    _, _, conv, phi, _ = dual_numbers(3, 5)
    s = load_structure(fixture_path("assoc_bad.st"))
    bad = structure_to_mc(conv, s)
    st = DeformationState(conv, phi, [bad])
    assert not st.check()
    with pytest.raises(InvalidState):
        lift_order(st)


def test_abelian_lifts_everything():
    g = load_linfty("abelian.linfty")
    deg1 = g.by_degree(1)
    z = [{deg1[r]: x for r, x in v.items()} for v in kernel_basis(g.differential_matrix(1))]
    rnd = random.Random(4)
    for _ in range(5):
        psi = {}
        for v in z:
            psi = add(psi, v, rnd.randint(-2, 2))
        st = lift_to(DeformationState(g, {}, [psi]), 4)
        assert isinstance(st, DeformationState) and not any(st.corrections[1:])


def test_abelian_parametrization_exhaustive():
    g = load_linfty("abelian.linfty")
    deg1 = g.by_degree(1)
    z = [{deg1[r]: x for r, x in v.items()} for v in kernel_basis(g.differential_matrix(1))]
    psi = z[0]
    st = DeformationState(g, {}, [psi])
    lift = lift_order(st)
    par = lift_set_parametrize(st, lift)
    assert par["torsor_dim"] == len(z)
    for coeffs in itertools.product(range(-1, 2), repeat=len(par["cocycles"])):
        cand = dict(par["base"])
        for c, v in zip(coeffs, par["cocycles"]):
            cand = add(cand, v, c)
        assert DeformationState(g, {}, [psi, cand]).check()
    # a non-cocycle second-order term is not a lift
    deg1_noncycle = [i for i in deg1 if g.bracket({i: 1})]
    assert not DeformationState(g, {}, [psi, {deg1_noncycle[0]: 1}]).check()


def test_torsor_dimension_is_betti():
    _, _, conv, phi, psi = dual_numbers(4, 6)
    st = DeformationState(conv, phi, [psi])
    par = lift_set_parametrize(st, lift_order(st))
    degs = range(0, 3)
    betti = cohomology_betti(deformation_complex(conv, phi, degs)[0], degs)
    assert par["modulo_gauge"] == betti[1]
    for v in par["cocycles"]:
        cand = DeformationState(conv, phi, [psi, add(par["base"], v)])
        assert cand.check()


def test_obstruction_fixture():
    base = load_structure(fixture_path("zero_k2.st"))
    d = load_structure(fixture_path("obstructed_dir.st"))
    conv = convolution_algebra(base.presentation, base.X, 3, N=5)
    ob = lift_order(DeformationState(conv, structure_to_mc(conv, base), [structure_to_mc(conv, d)]))
    assert isinstance(ob, ObstructionClass) and ob.nonzero and ob.order == 2
    tw = twist(conv, structure_to_mc(conv, base))
    assert ob.representative and tw.bracket(ob.representative) == {}
    # the squared direction is not associative, which is what obstructs it
    assert relation_defects(d)


def test_obstruction_class_is_well_defined():
    """Moving the direction by a coboundary moves the representative by a coboundary."""
    p = BUILTINS["assoc"]()
    X = cx(KC)
    conv = convolution_algebra(p, X, 2, N=4)
    psi = structure_to_mc(conv, StructureMaps(p, X, {"mu": {(("a",), ("a", "b")): 1,
                                                              (("a",), ("b", "b")): 1}}))
    ob = lift_order(DeformationState(conv, {}, [psi]))
    assert isinstance(ob, ObstructionClass) and ob.nonzero
    tw = DeformationState(conv, {}, []).twisted()
    deg0 = tw.by_degree(0)
    assert rank(tw.differential_matrix(0)) > 0
    rnd = random.Random(2)
    moved = 0
    for _ in range(6):
        lam = {i: F(rnd.randint(-2, 2)) for i in deg0 if rnd.random() < 0.3}
        psi2 = add(psi, tw.bracket(lam))
        ob2 = lift_order(DeformationState(conv, {}, [psi2]))
        assert isinstance(ob2, ObstructionClass) and ob2.nonzero
        diff = add(ob2.representative, ob.representative, -1)
        moved += bool(diff)
        assert in_span(tw, 1, diff)
    assert moved


# -- gauge -----------------------------------------------------------------------

def test_gauge_identity():
    g = load_linfty("abelian.linfty")
    ext = extend_scalars(g, ArtinianScalars(2))
    tau = series(ext, {1: {g.labels.index("c"): 1}})
    assert gauge_equivalent(ext, tau, tau) == {}


def test_abelian_gauge_is_coboundary_test():
    g = load_linfty("abelian.linfty")
    n = 2
    ext = extend_scalars(g, ArtinianScalars(n))
    deg1 = g.by_degree(1)
    z = [{deg1[r]: x for r, x in v.items()} for v in kernel_basis(g.differential_matrix(1))]
    d0 = g.differential_matrix(0)
    rnd = random.Random(9)
    seen = set()
    for _ in range(30):
        comps1, comps2 = {}, {}
        for j in range(1, n + 1):
            comps1[j] = {}
            comps2[j] = {}
            for v in z:
                comps1[j] = add(comps1[j], v, rnd.randint(-1, 1))
                comps2[j] = add(comps2[j], v, rnd.randint(-1, 1))
        t1, t2 = series(ext, comps1), series(ext, comps2)
        assert not mc_residual(ext, t1) and not mc_residual(ext, t2)
        expected = all(in_span(g, 0, add(comps2[j], comps1[j], -1)) for j in comps1)
        lam = gauge_equivalent(ext, t1, t2)
        assert isinstance(lam, dict) == expected
        if expected:
            assert gauge_act(ext, lam, t1) == t2
        seen.add(expected)
    assert seen == {True, False}


def test_hochschild_basis_change_gauge():
    """x -> (1 + t) x carries mu + t psi to mu + (1 + t)^2 t psi."""
    H = HochschildDGLA(2, 3)
    h = twist(H, H.element(MU0))
    ext = extend_scalars(h, ArtinianScalars(3))
    psi = H.element(PSI)
    t1 = series(ext, {1: psi})
    t2 = series(ext, {1: psi, 2: {i: 2 * c for i, c in psi.items()}, 3: psi})
    assert not mc_residual(ext, t1) and not mc_residual(ext, t2)
    lam = gauge_equivalent(ext, t1, t2)
    assert isinstance(lam, dict) and lam
    assert gauge_act(ext, lam, t1) == t2
    cert = gauge_equivalent(ext, t1, series(ext, {2: psi}))
    assert isinstance(cert, GaugeCertificate) and cert.order == 1


# -- Chevalley-Eilenberg ----------------------------------------------------------

def test_ce_abelian_has_zero_differential():
    g = TableLInfty.dg_lie(["a", "b"], [1, 1])
    ce = ce_algebra(g)
    assert not any(ce.dgen.values())


@pytest.mark.parametrize("name", ["abelian.linfty", "heisenberg.linfty", "twostep.linfty",
                                  "heis_lie.linfty", "corrupted.linfty"])
def test_ce_square_zero_iff_jacobi(name):
    g = load_linfty(name)
    assert (not ce_algebra(g).square_defects()) == check_linfty(g).ok


def test_ce_corrupted_flags_generators():
    g = load_linfty("corrupted.linfty")
    assert ce_algebra(g).square_defects()


def test_ce_cohomology_of_heisenberg():
    g = TableLInfty.dg_lie(["x", "y", "z"], [0, 0, 0], bracket={("x", "y"): {"z": 1}})
    cx_ = ce_algebra(g, D=3).cochain_complex()
    # Poincare duality and Euler characteristic zero for the 3-dim Heisenberg algebra
    assert cohomology_betti(cx_, range(0, 4)) == {0: 1, 1: 2, 2: 2, 3: 1}


@pytest.mark.parametrize("name,n", [("abelian.linfty", 1), ("heisenberg.linfty", 2),
                                    ("twostep.linfty", 2)])
def test_mc_points_match_cdga_maps(name, n):
    r = mc_vs_ce_points(load_linfty(name), n)
    assert r["equal"]


def test_mc_points_shuffled_identification():
    g = load_linfty("twostep.linfty")
    ones = g.by_degree(1)
    ident = {(ones[0], 1): (ones[1], 1), (ones[1], 1): (ones[0], 1), (ones[2], 1): (ones[0], 1)}
    assert not mc_vs_ce_points(g, 2, identification=ident)["equal"]


# -- oracles ---------------------------------------------------------------------

def _table(st):
    from deforma.cli import structure_table
    return structure_table(load_structure(fixture_path(st)))


@pytest.mark.parametrize("st,gold", [("assoc_k.st", "oracle_assoc_k.json"),
                                     ("assoc_dual.st", "oracle_assoc_dual.json"),
                                     ("assoc_ut2.st", "oracle_assoc_ut2.json")])
def test_hochschild_oracle_goldens(st, gold):
    table, dim = _table(st)
    want = {int(a): b for a, b in golden(gold)["betti_by_arity"].items()}
    assert hochschild_oracle(table, dim, 5).betti == want


def test_hochschild_oracle_ground_field():
    # C^p(K, K) = K with coboundary sum_{i=0}^{p+1} (-1)^i: zero for even p, identity for odd p
    rep = hochschild_oracle({(0, 0): {0: 1}}, 1, 6)
    assert rep.betti == {2: 1, 3: 0, 4: 0, 5: 0}


@pytest.mark.parametrize("st,gold", [("lie_heis.st", "oracle_lie_heis.json"),
                                     ("lie_ab2.st", "oracle_lie_ab2.json")])
def test_ce_oracle_goldens(st, gold):
    table, dim = _table(st)
    want = {int(a): b for a, b in golden(gold)["betti_by_arity"].items()}
    assert ce_oracle(table, dim, 5).betti == want


def test_ce_oracle_abelian_binomial():
    # zero differential: Betti in arity p is C(d, p) * d
    for dim in (2, 3):
        rep = ce_oracle({}, dim, dim + 2)
        assert rep.betti == {p: math.comb(dim, p) * dim for p in range(2, dim + 2)}


def test_oracles_reject_bad_input():
    with pytest.raises(OracleError):
        hochschild_oracle({(0, 1): {0: 1}, (1, 1): {0: 1}}, 2, 4)
    bad = {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {0: 1}}
    with pytest.raises(OracleError):
        ce_oracle(bad, 3, 4)


@pytest.mark.parametrize("name,m,n,G,gold", [("lie", 3, 1, None, "enum_lie_3_1_2.json"),
                                             ("assoc", 3, 1, None, "enum_assoc_3_1_2.json"),
                                             ("frob", 1, 1, 0, "enum_frob_1_1_2_g0.json")])
def test_brute_force_enumeration(name, m, n, G, gold):
    p = BUILTINS[name]()
    got = brute_weight_two(p, m, n, G)
    g = golden(gold)
    assert (got["free"], got["quotient"]) == (g["free"], g["quotient"])
    free, _, q = quotient_component(p, m, n, 2, max_genus=G)
    assert (free.dim, q) == (got["free"], got["quotient"])


@pytest.mark.parametrize("name", sorted(BUILTINS))
def test_brute_force_matches_graph_side(name):
    p = BUILTINS[name]()
    for m, n in [(3, 1), (2, 2), (1, 3), (2, 1), (1, 1)]:
        for G in range(p.max_genus + 1):
            got = brute_weight_two(p, m, n, G)
            free, _, q = quotient_component(p, m, n, 2, max_genus=G)
            assert (free.dim, q) == (got["free"], got["quotient"])
