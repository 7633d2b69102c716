"""Koszul dual coproperads, the infinitesimal coproduct and End_X.

Dual side conventions.  The Koszul dual coproperad C of F(E)/(R) lives in
the free coproperad on the suspension sE.  A vertex decorated by a
generator of degree d has parity d + 1, so the dual graphs are built with
``Presentation.graph_gens(shift=1)``.  A weight-w element has cohomological
degree (sum of generator degrees) - w; ``shift`` stores the integer w.

A weight-two relation term (lower, upper) is sent to the dual graph with
vertex order [upper, lower] and sign +1.  The weight-two component is the
span s^2 R of these images; its annihilator R^perp (for the dual-basis
pairing on canonical labelled graphs) generates the ideal whose
annihilator is the weight-w component.  Elements are therefore functionals
on the free properad, and Delta_(1) is the dual of grafting: its
coefficient on a split (lower, upper) is the value on the grafted graph.
Read as invariant tensors this is the intersection over adjacent pairs of
the spaces with s^2 R at that pair; read naively in orbit coordinates it
is not, since a pair whose legs are swapped by a symmetry is counted once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exactalg import Echelon, SparseMatrix, kernel_basis
from .graphs import Graph, canonicalize, collapsible_pairs, labelled_basis, pair_subgraph, \
    substitute_pair
from .linfty import koszul_sign
from .presentations import FreeComponent, relabel_graph

__all__ = [
    "TruncationUnderflow", "KoszulDualComponent", "suspended_relations",
    "dual_relations", "koszul_dual_component", "dual_ideal_rows",
    "infinitesimal_coproduct", "block_splittings", "EndoProperad", "end_properad",
    "dual_term_graph",
]


class TruncationUnderflow(LookupError):
    """A computation needed a component outside the declared truncation."""


def dual_term_graph(term, p):
    """The dual two-vertex graph of a relation term: vertex 0 upper, 1 lower."""
    g = term.graph(p.gens)
    sw = {0: 1, 1: 0}
    return Graph((g.vertices[1], g.vertices[0]),
                 frozenset((sw[u], o, sw[v], i) for u, o, v, i in g.edges),
                 tuple((sw[v], i) for v, i in g.ins),
                 tuple((sw[u], o) for u, o in g.outs))


@lru_cache(maxsize=None)
def _free_labelled(p, weight, biarity, G):
    gens = p.graph_gens(1)
    return FreeComponent(biarity, weight, G, labelled_basis(gens, weight, biarity, G))


@lru_cache(maxsize=None)
def suspended_relations(p, biarity, G=None):
    """Spanning vectors of s^2 R in the weight-2 labelled dual basis."""
    G = p.max_genus if G is None else G
    gens = p.graph_gens(1)
    comp = _free_labelled(p, 2, biarity, G)
    m, n = biarity
    e = Echelon()
    for rel in p.relations:
        if rel.terms[0][1].biarity(p.gens) != biarity:
            continue
        base = [(c, dual_term_graph(t, p)) for c, t in rel.terms]
        if any(g.genus > G for _, g in base):
            continue
        for pin in itertools.permutations(range(m)):
            for pout in itertools.permutations(range(n)):
                v = {}
                for c, g in base:
                    for k, x in comp.vector(relabel_graph(g, pin, pout), gens, c).items():
                        v[k] = v.get(k, 0) + x
                e.add({k: x for k, x in v.items() if x})
    return comp, tuple(sorted(e.back_substituted().items()))


@lru_cache(maxsize=None)
def dual_relations(p, biarity, G=None):
    """Basis of R^perp (annihilator of s^2 R) in the weight-2 labelled basis."""
    comp, rows = suspended_relations(p, biarity, G)
    if comp.dim == 0:
        return comp, ()
    mat = SparseMatrix(len(rows), comp.dim,
                       ((r, k, x) for r, (_, row) in enumerate(rows) for k, x in row.items()))
    return comp, tuple(tuple(sorted(v.items())) for v in kernel_basis(mat))


def dual_ideal_rows(p, weight, biarity, G=None):
    """Spanning vectors of the weight-w piece of the ideal generated by R^perp."""
    G = p.max_genus if G is None else G
    gens = p.graph_gens(1)
    comp = _free_labelled(p, weight, biarity, G)
    rows = []
    if weight < 2:
        return comp, rows
    for c in comp.basis:
        g = c.graph
        for u, v in collapsible_pairs(g):
            sub = pair_subgraph(g, u, v, gens)
            pcomp, perp = dual_relations(p, sub.biarity, G)
            for r in perp:
                vec = {}
                for k, x in r:
                    h = substitute_pair(g, u, v, pcomp.basis[k].graph, gens)
                    for kk, y in comp.vector(h, gens, x).items():
                        vec[kk] = vec.get(kk, 0) + y
                vec = {k: x for k, x in vec.items() if x}
                if vec:
                    rows.append(vec)
    return comp, rows


@dataclass
class KoszulDualComponent:
    """Weight-w, biarity (m, n) component of the Koszul dual coproperad."""

    presentation: object
    weight: int
    biarity: tuple
    max_genus: int
    free: FreeComponent
    inclusion: list                    # basis vectors in free labelled coordinates
    ideal_rows: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.inclusion)

    @property
    def shift(self):
        return self.weight

    def degrees(self):
        gens = self.presentation.gens
        return sorted({sum(gens[v].degree for v in c.graph.vertices) - self.weight
                       for c in self.free.basis})

    def contains(self, vec):
        """Membership test: annihilated by the whole ideal piece."""
        for r in self.ideal_rows:
            if sum(x * vec.get(k, 0) for k, x in r.items()):
                return False
        return True


@lru_cache(maxsize=None)
def _dual_component(p, w, biarity, G):
    comp, rows = dual_ideal_rows(p, w, biarity, G)
    if comp.dim == 0:
        return KoszulDualComponent(p, w, biarity, G, comp, [], rows)
    mat = SparseMatrix(len(rows), comp.dim,
                       ((r, k, x) for r, row in enumerate(rows) for k, x in row.items()))
    return KoszulDualComponent(p, w, biarity, G, comp, kernel_basis(mat), rows)


def koszul_dual_component(p, w, G=None, biarity=None):
    """Weight-w component(s) of the Koszul dual.

    With ``biarity`` given returns one :class:`KoszulDualComponent`, else a
    dict over all biarities reached at weight w and genus <= G.
    """
    if w < 1:
        raise ValueError("weight must be >= 1")
    G = p.max_genus if G is None else G
    if biarity is not None:
        return _dual_component(p, w, tuple(biarity), G)
    from .graphs import enumerate_orbits
    bis = sorted(enumerate_orbits(p.graph_gens(1), w, G))
    return {b: _dual_component(p, w, b, G) for b in bis}


# -- infinitesimal coproduct --------------------------------------------------

def _connected(vs, adj):
    vs = set(vs)
    if not vs:
        return False
    start = next(iter(vs))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v in vs and v not in seen:
                seen.add(v)
                stack.append(v)
    return seen == vs


def block_splittings(g):
    """Admissible (lower, upper) vertex bipartitions of a graph.

    Both blocks connected, at least one cut edge, all cut edges directed
    from the lower block to the upper block.
    """
    nv = len(g.vertices)
    adj = [set() for _ in range(nv)]
    for u, _, v, _ in g.edges:
        adj[u].add(v)
        adj[v].add(u)
    out = []
    for k in range(1, nv):
        for low in itertools.combinations(range(nv), k):
            ls = set(low)
            up = tuple(v for v in range(nv) if v not in ls)
            cut = [(u, o, v, i) for u, o, v, i in g.edges if (u in ls) != (v in ls)]
            if not cut or any(u not in ls for u, _, _, _ in cut):
                continue
            if _connected(low, adj) and _connected(up, adj):
                out.append((low, up))
    return out


def _block(g, verts, cut, side):
    """Sub-graph on ``verts``; cut edges become legs numbered by cut order."""
    idx = {v: k for k, v in enumerate(verts)}
    edges = frozenset((idx[u], o, idx[v], i) for u, o, v, i in g.edges if u in idx and v in idx)
    gins = [(leg, (v, i)) for leg, (v, i) in enumerate(g.ins) if v in idx]
    gouts = [(leg, (u, o)) for leg, (u, o) in enumerate(g.outs) if u in idx]
    if side == "lower":
        ins = [(idx[v], i) for _, (v, i) in gins]
        outs = [(idx[u], o) for _, (u, o) in gouts] + [(idx[u], o) for u, o, _, _ in cut]
        in_spec = tuple(("g", leg) for leg, _ in gins)
        out_spec = tuple(("g", leg) for leg, _ in gouts) + tuple(("c", k) for k in range(len(cut)))
    else:
        ins = [(idx[v], i) for _, _, v, i in cut] + [(idx[v], i) for _, (v, i) in gins]
        outs = [(idx[u], o) for _, (u, o) in gouts]
        in_spec = tuple(("c", k) for k in range(len(cut))) + tuple(("g", leg) for leg, _ in gins)
        out_spec = tuple(("g", leg) for leg, _ in gouts)
    names = tuple(g.vertices[v] for v in verts)
    return Graph(names, edges, tuple(ins), tuple(outs)), (in_spec, out_spec)


def infinitesimal_coproduct(comp, element, available_weights=None, verify=True):
    """Delta_(1) of an element of a Koszul dual component.

    ``element`` is a vector over ``comp.free`` (labelled coordinates).  The
    result maps (lower key, upper key, lower legs, upper legs) to a
    coefficient; block graphs are canonical labelled graphs whose legs are
    numbered global-first/cut-second (lower) and cut-first/global-second
    (upper).  The sign is the Koszul sign of reordering vertices as
    [lower block, upper block] times both canonical signs.
    """
    p, G = comp.presentation, comp.max_genus
    gens = p.graph_gens(1)
    parity = {name: gen.odd for name, gen in gens.items()}
    need = set()
    out = {}
    for k, x in element.items():
        g = comp.free.basis[k].graph
        for low, up in block_splittings(g):
            need.add(len(low))
            need.add(len(up))
            cut = sorted((u, o, v, i) for u, o, v, i in g.edges if (u in low) != (v in low))
            lg, lspec = _block(g, low, cut, "lower")
            ug, uspec = _block(g, up, cut, "upper")
            lc = canonicalize(lg, gens, labelled=True)
            uc = canonicalize(ug, gens, labelled=True)
            if not lc.sign or not uc.sign:
                continue
            order = list(low) + list(up)
            s = koszul_sign([parity[n] for n in g.vertices], order) * lc.sign * uc.sign
            key = (lc.key, uc.key, lspec, uspec)
            out[key] = out.get(key, 0) + s * x
    out = {k: v for k, v in out.items() if v}
    if available_weights is not None:
        missing = sorted(w for w in need if w not in available_weights)
        if missing:
            raise TruncationUnderflow(f"coproduct needs weights {missing}, not computed")
    if verify:
        _verify_coproduct(p, G, out)
    return out


def _verify_coproduct(p, G, terms):
    """Check that Delta_(1)(c) lies in C (x) C.

    A term is one representative of the orbit under relabelling the cut
    edges; its coefficient is the value of c on the grafted graph.  Every
    relabelling carries that same value (stabilisers do not multiply it),
    and the slices of the resulting invariant tensor must lie in the dual
    components on both sides.
    """
    gens = p.graph_gens(1)
    sym = {}
    for (lk, uk, ls, us), x in terms.items():
        lg, ug = Graph.from_key(lk), Graph.from_key(uk)
        lpos = {tag: k for k, tag in enumerate(ls[1])}
        upos = {tag: k for k, tag in enumerate(us[0])}
        ncut = sum(1 for t in ls[1] if t[0] == "c")
        for tau in itertools.permutations(range(ncut)):
            louts, uins = list(lg.outs), list(ug.ins)
            for j in range(ncut):
                louts[lpos[("c", tau[j])]] = lg.outs[lpos[("c", j)]]
                uins[upos[("c", tau[j])]] = ug.ins[upos[("c", j)]]
            lc = canonicalize(Graph(lg.vertices, lg.edges, lg.ins, tuple(louts)), gens, labelled=True)
            uc = canonicalize(Graph(ug.vertices, ug.edges, tuple(uins), ug.outs), gens, labelled=True)
            if not lc.sign or not uc.sign:
                continue
            key = (lc.key, uc.key, ls, us)
            val = x * lc.sign * uc.sign
            if sym.setdefault(key, val) != val:
                raise ArithmeticError("coproduct term is not invariant under cut relabelling")
    slices = {}
    for (lk, uk, ls, us), x in sym.items():
        if x:
            slices.setdefault(("upper", lk, ls, us), {})[uk] = x
            slices.setdefault(("lower", uk, ls, us), {})[lk] = x
    for (side, _, _, _), vec in sorted(slices.items(), key=repr):
        sample = Graph.from_key(next(iter(vec)))
        comp = koszul_dual_component(p, sample.weight, G, sample.biarity)
        coords = {}
        for key, x in vec.items():
            for kk, y in comp.free.vector(Graph.from_key(key), gens, x).items():
                coords[kk] = coords.get(kk, 0) + y
        if not comp.contains(coords):
            raise ArithmeticError(f"coproduct factor ({side}) leaves the dual component")


# -- endomorphism properad ----------------------------------------------------

class EndoProperad:
    """End_X with elementary tensor bases.

    A basis element of End_X(m, n) is q = (outs, ins), tuples of indices into
    the flattened basis of X: the map sending e_ins to e_outs and every other
    basis tensor to zero.  Its degree is deg(outs) - deg(ins).
    """

    def __init__(self, X, N):
        if N < 2:
            raise ValueError("max biarity N must be >= 2")
        self.X, self.N = X, N
        self.labels, self.deg = [], []
        pos = {}
        for d in X.space.degrees():
            for k, lab in enumerate(X.space.basis(d)):
                pos[(d, k)] = len(self.labels)
                self.labels.append(lab)
                self.deg.append(d)
        self.dim_x = len(self.labels)
        self.dX = {i: {} for i in range(self.dim_x)}
        for d in X.space.degrees():
            for j, col in enumerate(X.differential(d).columns()):
                for r, c in col.items():
                    self.dX[pos[(d, j)]][pos[(d + 1, r)]] = c
        self.graded = any(x % 2 for x in self.deg)
        self.zero_differential = not any(self.dX.values())

    def basis(self, m, n):
        r = range(self.dim_x)
        return [(o, i) for o in itertools.product(r, repeat=n) for i in itertools.product(r, repeat=m)]

    def dim(self, m, n):
        return self.dim_x ** (m + n)

    def degree(self, q):
        return sum(self.deg[k] for k in q[0]) - sum(self.deg[k] for k in q[1])

    def parity(self, q):
        return self.degree(q) % 2

    def relabel(self, q, pin, pout):
        """Leg relabelling (new leg k = old leg p[k]) with its Koszul sign."""
        o, i = q
        o2 = tuple(o[k] for k in pout)
        i2 = tuple(i[k] for k in pin)
        if not self.graded:
            return 1, (o2, i2)
        return (koszul_sign([self.deg[x] for x in o], pout) *
                koszul_sign([self.deg[x] for x in i], pin)), (o2, i2)

    def differential(self, q):
        """Hom differential d o f - (-1)^{|f|} f o d on an elementary tensor."""
        o, i = q
        out = {}
        acc = 0
        for j, x in enumerate(o):
            s = -1 if acc % 2 else 1
            for y, c in self.dX[x].items():
                key = (o[:j] + (y,) + o[j + 1:], i)
                out[key] = out.get(key, 0) + s * c
            acc += self.deg[x]
        f_sign = -1 if self.degree(q) % 2 else 1
        acc = 0
        for j, x in enumerate(i):
            s = -1 if acc % 2 else 1
            # (f o d)(e_{i'}) picks up e_i from d(e_{i'_j}) = ... + c e_{x}
            for xp in range(self.dim_x):
                c = self.dX[xp].get(x)
                if c:
                    key = (o, i[:j] + (xp,) + i[j + 1:])
                    out[key] = out.get(key, 0) - f_sign * s * c
            acc += self.deg[x]
        return {k: v for k, v in out.items() if v}

    def compose(self, q_up, q_lo, wiring):
        """mu_(1): q_lo below q_up along (lower output leg, upper input leg) pairs.

        Result legs follow :func:`graphs.graft`: inputs of q_lo then unwired
        inputs of q_up; unwired outputs of q_lo then outputs of q_up.
        Returns (sign, q) with sign 0 when the composite vanishes.
        """
        o1, i1 = q_up
        o2, i2 = q_lo
        for j, k in wiring:
            if o2[j] != i1[k]:
                return 0, None
        wired_lo = {j for j, _ in wiring}
        to_lo = {k: j for j, k in wiring}
        ins = i2 + tuple(i1[k] for k in range(len(i1)) if k not in to_lo)
        lo_free = [j for j in range(len(o2)) if j not in wired_lo]
        outs = tuple(o2[j] for j in lo_free) + o1
        if not self.graded:
            return 1, (outs, ins)
        # word after applying q_lo: o2 letters then unwired upper inputs
        b = [k for k in range(len(i1)) if k not in to_lo]
        letters = [self.deg[x] for x in o2] + [self.deg[i1[k]] for k in b]
        bpos = {k: len(o2) + n for n, k in enumerate(b)}
        perm = lo_free + [to_lo[k] if k in to_lo else bpos[k] for k in range(len(i1))]
        s = koszul_sign(letters, perm)
        if self.degree(q_up) % 2 and sum(self.deg[o2[j]] for j in lo_free) % 2:
            s = -s
        return s, (outs, ins)


def end_properad(X, N):
    return EndoProperad(X, N)
