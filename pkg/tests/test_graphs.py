"""Decorated graphs: canonical forms, signs, grafting, enumeration."""

import itertools
import random

import pytest

from deforma.graphs import (Graph, canonicalize, collapsible_pairs, enumerate_orbits, graft,
                            labelled_basis, orbit_is_zero, pair_subgraph, perm_sign,
                            single_vertex, substitute_pair)
from deforma.linfty import koszul_sign
from deforma.presentations import BUILTINS

NAMES = sorted(BUILTINS)


def vperm(g, perm):
    """Reorder vertices: new vertex k is old vertex perm[k]."""
    inv = {o: k for k, o in enumerate(perm)}
    return Graph(tuple(g.vertices[o] for o in perm),
                 frozenset((inv[u], o, inv[v], i) for u, o, v, i in g.edges),
                 tuple((inv[v], i) for v, i in g.ins), tuple((inv[v], o) for v, o in g.outs))


def sperm(g, v, side, p):
    """Permute the input or output slots of vertex v."""
    def f(w, s, sd):
        return (w, p[s]) if (w == v and sd == side) else (w, s)
    edges = frozenset(f(a, o, "out") + f(b, i, "in") for a, o, b, i in g.edges)
    return Graph(g.vertices, edges, tuple(f(w, s, "in") for w, s in g.ins),
                 tuple(f(w, s, "out") for w, s in g.outs))


def graphs(name, shift, wmax=3):
    p = BUILTINS[name]()
    gens = p.graph_gens(shift)
    for w in range(1, wmax + 1):
        for cs in enumerate_orbits(gens, w, p.max_genus).values():
            for c in cs:
                yield gens, c


def brute_isomorphic(g, h, gens):
    """Oracle: search vertex bijections and slot permutations directly."""
    if sorted(g.vertices) != sorted(h.vertices) or g.biarity != h.biarity:
        return False
    target = (frozenset(h.edges), h.ins, h.outs)
    n = len(g.vertices)
    for perm in itertools.permutations(range(n)):
        gp = vperm(g, perm)
        if gp.vertices != h.vertices:
            continue
        choices = []
        for v, name in enumerate(gp.vertices):
            G = gens[name]
            ins = [tuple(range(G.m))] if G.sym_in == "regular" else list(itertools.permutations(range(G.m)))
            outs = [tuple(range(G.n))] if G.sym_out == "regular" else list(itertools.permutations(range(G.n)))
            choices.append(list(itertools.product(ins, outs)))
        for pick in itertools.product(*choices):
            x = gp
            for v, (pi, po) in enumerate(pick):
                x = sperm(sperm(x, v, "in", pi), v, "out", po)
            if (frozenset(x.edges), x.ins, x.outs) == target:
                return True
    return False


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("shift", [0, 1])
def test_vertex_reordering_sign(name, shift):
    rnd = random.Random(3)
    for gens, c in graphs(name, shift):
        g = c.graph
        par = [gens[v].odd for v in g.vertices]
        for labelled in (False, True):
            c0 = canonicalize(g, gens, labelled=labelled)
            for _ in range(3):
                perm = list(range(g.weight))
                rnd.shuffle(perm)
                c1 = canonicalize(vperm(g, perm), gens, labelled=labelled)
                assert c1.key == c0.key
                if labelled:
                    assert c1.sign == koszul_sign(par, perm) * c0.sign


@pytest.mark.parametrize("name", NAMES)
def test_slot_symmetry_sign(name):
    for gens, c in graphs(name, 1):
        g = c.graph
        c0 = canonicalize(g, gens, labelled=True)
        for v, vname in enumerate(g.vertices):
            G = gens[vname]
            for side, k, sym in (("in", G.m, G.sym_in), ("out", G.n, G.sym_out)):
                if sym == "regular":
                    continue
                for p in itertools.permutations(range(k)):
                    c1 = canonicalize(sperm(g, v, side, p), gens, labelled=True)
                    assert c1.key == c0.key
                    assert c1.sign == (perm_sign(p) if sym == "sign" else 1) * c0.sign


@pytest.mark.parametrize("name", NAMES)
def test_idempotent(name):
    for gens, c in graphs(name, 0):
        for labelled in (False, True):
            c0 = canonicalize(c.graph, gens, labelled=labelled)
            c1 = canonicalize(c0.graph, gens, labelled=labelled)
            assert c1.key == c0.key
            if labelled and c0.sign:
                assert c1.sign == 1


@pytest.mark.parametrize("name", ["assoc", "lie", "frob", "bilie"])
def test_equal_keys_iff_isomorphic(name):
    """Canonical keys agree exactly when a brute-force isomorphism exists."""
    p = BUILTINS[name]()
    gens = p.graph_gens(0)
    rnd = random.Random(11)
    for w in (2, 3):
        for (m, n) in sorted(enumerate_orbits(gens, w, p.max_genus)):
            if m + n > 4:
                continue
            basis = labelled_basis(gens, w, (m, n), p.max_genus)
            sample = basis if len(basis) <= 6 else rnd.sample(basis, 6)
            for a, b in itertools.combinations_with_replacement(sample, 2):
                ga, gb = a.graph, b.graph
                # scramble one side so the comparison is not syntactic
                perm = list(range(w))
                rnd.shuffle(perm)
                gb = vperm(gb, perm)
                same = canonicalize(ga, gens, labelled=True).key == canonicalize(gb, gens, labelled=True).key
                assert same == brute_isomorphic(ga, gb, gens)


def test_graft_shapes():
    p = BUILTINS["frob"]()
    gens = p.graph_gens(0)
    mu, delta = single_vertex(gens["mu"]), single_vertex(gens["delta"])
    g = graft(mu, delta, [(0, 0), (1, 1)], gens)      # delta below mu along both legs
    g.validate(gens)
    assert (g.weight, g.biarity, g.genus) == (2, (1, 1), 1)
    h = graft(delta, mu, [(0, 0)], gens)
    h.validate(gens)
    assert (h.biarity, h.genus) == ((2, 2), 0)


def test_validate_rejects_cycles_and_loose_slots():
    gens = BUILTINS["frob"]().graph_gens(0)
    bad = Graph(("mu",), frozenset(), ((0, 0),), ((0, 0),))
    with pytest.raises(ValueError):
        bad.validate(gens)


@pytest.mark.parametrize("name", NAMES)
def test_identity_substitution(name):
    """Substituting a collapsible pair by itself gives the same graph up to vertex order."""
    for gens, c in graphs(name, 0):
        g = c.graph
        for u, v in collapsible_pairs(g):
            sub = pair_subgraph(g, u, v, gens)
            h = substitute_pair(g, u, v, sub, gens)
            h.validate(gens)
            assert canonicalize(h, gens).key == canonicalize(g, gens).key


def test_odd_automorphism_kills_orbit():
    # two odd binary brackets stacked into a symmetric shape: lie with shift 1 at (3,1)
    p = BUILTINS["lie"]()
    gens = p.graph_gens(1)
    for cs in enumerate_orbits(gens, 2, 0).values():
        for c in cs:
            lc = canonicalize(c.graph, gens, labelled=True)
            assert orbit_is_zero(c) == (lc.sign == 0)


def test_enumeration_is_deterministic():
    p = BUILTINS["bilie"]()
    a = enumerate_orbits(p.graph_gens(1), 3, 1)
    b = enumerate_orbits(p.graph_gens(1), 3, 1)
    assert {k: [c.key for c in v] for k, v in a.items()} == {k: [c.key for c in v] for k, v in b.items()}
