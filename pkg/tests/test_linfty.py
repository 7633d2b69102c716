"""L-infinity engine: identities, MC residuals, twisting, gauge, BCH, forms."""

import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from deforma.deform import HochschildDGLA
from deforma.linfty import (DegreeError, NonTerminating, PolynomialDegreeOverflow, TableLInfty,
                            bch, check_filtration, check_linfty, evaluate_at_vertex, extend_forms,
                            format_linfty, gauge_act, mc_residual, parse_linfty, twist)

import oracles
from conftest import fixture_path

rats = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def load(name):
    return parse_linfty(open(fixture_path(name)).read())


def rnd_vec(rnd, idxs, lo=-2, hi=2):
    return {i: F(rnd.randint(lo, hi), rnd.choice([1, 1, 2])) for i in idxs if rnd.random() < 0.8}


def clean(v):
    return {k: x for k, x in v.items() if x}


# the associative product of K[x]/(x^2) on (e, x) and the direction x*x = e
MU0 = {(0, (0, 0)): 1, (1, (0, 1)): 1, (1, (1, 0)): 1}
PSI = {(0, (1, 1)): 1}


def hoch():
    return HochschildDGLA(2, 3)


# -- identity checks -----------------------------------------------------------------

def test_abelian_passes():
    assert check_linfty(load("abelian.linfty")).ok


def test_corrupted_jacobi_witness():
    r = check_linfty(load("corrupted.linfty"))
    assert not r.ok and r.kind == "jacobi"
    assert sorted(r.witness) == ["e1", "e2", "e3"]


@pytest.mark.parametrize("name", ["heisenberg.linfty", "twostep.linfty", "heis_lie.linfty"])
def test_fixtures_pass(name):
    assert check_linfty(load(name)).ok


def test_hochschild_is_dg_lie():
    assert check_linfty(HochschildDGLA(2, 3)).ok


def test_antisymmetry_enforced():
    g = TableLInfty(["a", "b"], [0, 0])
    g.set_bracket((0, 1), {})
    with pytest.raises(ValueError):
        g.set_bracket((0, 0), {0: 1})
    with pytest.raises(DegreeError):
        TableLInfty.dg_lie(["a", "b"], [0, 1], bracket={("a", "a"): {"b": 1}})


def test_linfty_text_round_trip():
    g = load("twostep.linfty")
    h = parse_linfty(format_linfty(g))
    assert h.tables == g.tables and h.degrees == g.degrees


def test_filtration_scan():
    g = TableLInfty.dg_lie(["a", "b", "c"], [1, 1, 2], bracket={("a", "b"): {"c": 1}},
                           weights=[1, 2, 1])
    assert check_filtration(g) == [(("a", "b"), "c")]
    g2 = TableLInfty.dg_lie(["a", "b", "c"], [1, 1, 2], bracket={("a", "b"): {"c": 1}},
                            weights=[1, 1, 2])
    assert check_filtration(g2) == []


# -- MC residual ------------------------------------------------------------------------

def test_residual_examples():
    g = load("abelian.linfty")
    assert mc_residual(g, {}) == {}
    a, c = g.index("a"), g.index("c")
    # abelian: residual is d tau
    assert mc_residual(g, {a: F(3)}) == {g.index("b"): F(3)}
    assert mc_residual(g, {c: F(2)}) == {}
    with pytest.raises(DegreeError):
        mc_residual(g, {g.index("z"): F(1)})
    with pytest.raises(DegreeError):
        mc_residual(g, {a: F(1), g.index("b"): F(1)})


@settings(max_examples=40, deadline=None)
@given(rats, rats, rats)
def test_residual_two_term_graded(al, be, ga):
    """Hand expansion on the two-step fixture: d = 0, [x,y] = z, [w,w] = z, odd x, y, w."""
    g = load("twostep.linfty")
    x, y, w, z = (g.index(s) for s in "xywz")
    tau = clean({x: al, y: be, w: ga})
    # 1/2 [tau, tau] = 1/2 (2 al be [x,y] + ga^2 [w,w])
    want = clean({z: al * be + ga * ga / 2})
    if tau:
        assert mc_residual(g, tau) == want


@settings(max_examples=30, deadline=None)
@given(st.lists(rats, min_size=8, max_size=8))
def test_residual_is_associator(cs):
    """For a binary product m on a 2-dim space, the residual is the associator."""
    H = hoch()
    keys = [(o, (i, j)) for o in range(2) for i in range(2) for j in range(2)]
    m = {k: c for k, c in zip(keys, cs) if c}
    if not m:
        return
    tau = H.element(m)

    def prod(u, v):
        out = {}
        for (o, (i, j)), c in m.items():
            if u.get(i) and v.get(j):
                out[o] = out.get(o, 0) + c * u[i] * v[j]
        return out
    want = {}
    for a, b, c in itertools.product(range(2), repeat=3):
        e = lambda k: {k: 1}
        lhs = prod(prod(e(a), e(b)), e(c))
        rhs = prod(e(a), prod(e(b), e(c)))
        for o in range(2):
            val = lhs.get(o, 0) - rhs.get(o, 0)
            if val:
                want[H.index((o, (a, b, c)))] = val
    assert mc_residual(H, tau) == want


# -- twisting --------------------------------------------------------------------------

def _tables(g, arities=(1, 2)):
    out = {}
    for k in arities:
        for t in itertools.combinations_with_replacement(range(g.dim), k):
            v = clean(g.bracket_basis(t))
            if v:
                out[t] = v
    return out


def test_twist_zero_is_identity():
    g = load("twostep.linfty")
    assert _tables(twist(g, {})) == _tables(g)


@pytest.mark.parametrize("c", [F(1), F(-2, 3)])
def test_twist_additivity(c):
    H = hoch()
    mu, psi = H.element(MU0), H.element({k: c * v for k, v in PSI.items()})
    both = {k: mu.get(k, 0) + psi.get(k, 0) for k in set(mu) | set(psi)}
    assert not mc_residual(H, mu) and not mc_residual(H, both)
    t1 = twist(H, mu)
    assert not mc_residual(t1, psi)
    assert _tables(twist(t1, psi)) == _tables(twist(H, clean(both)))


def _dmat(g):
    return {i: clean(g.bracket_basis((i,))) for i in range(g.dim)}


def _apply(dm, v):
    out = {}
    for i, x in v.items():
        for j, y in dm[i].items():
            out[j] = out.get(j, 0) + x * y
    return clean(out)


def test_twisted_differential_squares_to_zero():
    H = hoch()
    t = twist(H, H.element(MU0))
    assert not t.curved
    dm = _dmat(t)
    for i in range(t.dim):
        assert _apply(dm, dm[i]) == {}
    cx = t.complex(range(0, 3))
    assert cx.check_d2(range(-1, 3)) == []


def test_curved_twist_squares_to_residual():
    H = hoch()
    tau = H.element({(0, (0, 0)): 1, (0, (1, 1)): 1, (1, (0, 1)): 2})
    R = mc_residual(H, tau)
    assert R
    t = twist(H, tau)
    assert t.curved and t.curvature == R
    dm = _dmat(t)
    for i in range(t.dim):
        assert _apply(dm, dm[i]) == clean(H.bracket(R, {i: F(1)}))


# -- gauge action --------------------------------------------------------------------------

def two_step_dgla():
    # d l = a, [l, a] = b; ad_l^2 = 0
    return TableLInfty.dg_lie(["l", "a", "b"], [0, 1, 1], d={"l": {"a": 1}},
                              bracket={("l", "a"): {"b": 1}})


def test_gauge_examples():
    g = load("abelian.linfty")
    z, a, c = g.index("z"), g.index("a"), g.index("c")
    tau = {a: F(2)}
    assert gauge_act(g, {}, tau) == tau
    assert gauge_act(g, {z: F(5)}, tau) == {a: F(2), c: F(-5)}


@settings(max_examples=40, deadline=None)
@given(rats, rats, rats)
def test_gauge_order_two_expansion(s, al, be):
    g = two_step_dgla()
    assert check_linfty(g).ok
    l, a, b = 0, 1, 2
    tau = clean({a: al, b: be})
    lam = clean({l: s})
    # tau + [lam, tau] - d lam - 1/2 [lam, d lam]
    want = dict(tau)
    for v, c in ((g.bracket(lam, tau) if lam and tau else {}, 1), (g.bracket(lam) if lam else {}, -1),
                 (g.bracket(lam, g.bracket(lam)) if lam else {}, F(-1, 2))):
        for k, x in v.items():
            want[k] = want.get(k, 0) + c * x
    assert gauge_act(g, lam, tau) == clean(want)


def test_gauge_rejects_nonterminating_and_bad_degree():
    g = TableLInfty.dg_lie(["l", "a"], [0, 1], bracket={("l", "a"): {"a": 1}})
    with pytest.raises(NonTerminating):
        gauge_act(g, {0: F(1)}, {1: F(1)}, max_terms=10)
    with pytest.raises(DegreeError):
        gauge_act(g, {1: F(1)}, {1: F(1)})


def test_gauge_preserves_mc_on_hochschild():
    from deforma.deform import ArtinianScalars, extend_scalars, series
    H = hoch()
    ext = extend_scalars(twist(H, H.element(MU0)), ArtinianScalars(3))
    tau = series(ext, {1: H.element(PSI)})
    assert not mc_residual(ext, tau)
    rnd = random.Random(2)
    zero = ext.by_degree(0)
    for _ in range(10):
        lam = rnd_vec(rnd, rnd.sample(zero, 4))
        assert not mc_residual(ext, gauge_act(ext, clean(lam), tau))


# -- BCH ---------------------------------------------------------------------------------------

def test_bch_examples():
    g, T, pos = oracles.free_nilpotent_lie("xy", 4)
    x, y = {pos[("x",)]: F(1)}, {pos[("y",)]: F(1)}
    assert bch(g, x, {}) == x
    assert bch(g, x, {pos[("x",)]: F(3)}) == {pos[("x",)]: F(4)}
    two = bch(g, x, y, 2)
    want = {pos[("x",)]: 1, pos[("y",)]: 1, pos[("x", "y")]: F(1, 2), pos[("y", "x")]: F(-1, 2)}
    assert two == want
    with pytest.raises(ValueError):
        bch(g, x, y, 5)


@settings(max_examples=25, deadline=None)
@given(st.lists(rats, min_size=4, max_size=4))
def test_bch_vs_free_nilpotent_oracle(cs):
    g, T, pos = oracles.free_nilpotent_lie("xy", 4)
    # x, y arbitrary Lie elements of length 1 and 2
    xw = clean({("x",): cs[0], ("y",): cs[1]})
    yw = clean(T.add({("y",): cs[2]}, T.add(T.mul({("x",): 1}, {("y",): 1}), T.mul({("y",): 1}, {("x",): 1}),
                                             coeffs=[1, -1]), coeffs=[1, cs[3]]))
    got = bch(g, oracles.from_words(pos, xw), oracles.from_words(pos, yw), 4)
    assert oracles.to_words(T, pos, got) == T.bch(xw, yw)


def test_bch_associative():
    g, T, pos = oracles.free_nilpotent_lie("xyz", 4)
    x, y, z = ({pos[(s,)]: F(1)} for s in "xyz")
    assert bch(g, bch(g, x, y), z) == bch(g, x, bch(g, y, z))


# -- forms ---------------------------------------------------------------------------------------

def test_forms_level_zero_is_identity():
    g = load("heisenberg.linfty")
    assert extend_forms(g, 0) is g


@pytest.mark.parametrize("name", ["abelian.linfty", "heisenberg.linfty"])
def test_forms_extension_is_linfty(name):
    e = extend_forms(load(name), 1, 2, overflow="truncate")
    assert check_linfty(e).ok


def test_forms_overflow():
    g = load("heisenberg.linfty")
    e = extend_forms(g, 1, 1)
    x, y = g.index("x"), g.index("y")
    t = e.A.t(0)
    with pytest.raises(PolynomialDegreeOverflow):
        e.bracket(e.embed({x: F(1)}, t), e.embed({y: F(1)}, t))


def test_abelian_forms_mc_and_endpoints():
    """tau(t) + lam(t) dt is MC iff d tau = 0 and tau' = d lam; endpoints differ by d lam-integral."""
    g = load("abelian.linfty")
    e = extend_forms(g, 1, 3)
    A = e.A
    z, c, a = g.index("z"), g.index("c"), g.index("a")
    ev = g.index("e")
    t, dt = A.t(0), A.dt(0)
    one = A.unit()
    t2 = ((2,), ())
    # lam(t) = (1 + 2t) z  ->  tau(t) = tau0 + (t + t^2) c  solves tau' = d lam
    tau = {}
    for part in (e.embed({ev: F(1)}, one), e.embed({c: F(1)}, t), e.embed({c: F(1)}, t2),
                 e.embed({z: F(1)}, dt), e.embed({z: F(2)}, ((1,), (0,)))):
        for k, x in part.items():
            tau[k] = tau.get(k, 0) + x
    assert not mc_residual(e, tau)
    start, end = evaluate_at_vertex(e, tau, 0), evaluate_at_vertex(e, tau, 1)
    assert start == {ev: 1}
    diff = clean({k: end.get(k, 0) - start.get(k, 0) for k in set(end) | set(start)})
    # the difference is d of the degree-0 element 2 z = integral of lam
    assert diff == g.bracket({z: F(2)})
    # dropping the dt part breaks the MC equation
    bad = {k: x for k, x in tau.items() if e.A.degree(e.mons[e.split(k)[1]]) == 0}
    assert mc_residual(e, bad)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([0, 1]))
def test_evaluation_commutes_with_residual(seed, vertex):
    rnd = random.Random(seed)
    g = load("heisenberg.linfty")
    e = extend_forms(g, 1, 4)
    # quadratic brackets of forms of degree <= 2 stay inside the bound
    ones = [i for i in e.by_degree(1) if e.A.poly_degree(e.mons[e.split(i)[1]]) <= 2]
    tau = clean(rnd_vec(rnd, rnd.sample(ones, min(4, len(ones)))))
    if not tau:
        return
    lhs = evaluate_at_vertex(e, mc_residual(e, tau), vertex)
    ev = evaluate_at_vertex(e, tau, vertex)
    rhs = mc_residual(g, ev) if ev else {}
    assert lhs == rhs
