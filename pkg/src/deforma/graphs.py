"""Connected directed acyclic graphs decorated by generators.

A graph is stored with ordered vertices, ordered slots at each vertex and
labelled global legs:

* ``vertices`` -- tuple of generator names;
* ``edges`` -- frozenset of ``(u, out_slot, v, in_slot)``, an edge leaving
  output ``out_slot`` of ``u`` and entering input ``in_slot`` of ``v``;
* ``ins`` -- global input leg ``i`` sits at ``ins[i] = (v, in_slot)``;
* ``outs`` -- global output leg ``j`` sits at ``outs[j] = (v, out_slot)``.

Inputs are at the bottom, outputs at the top.  Vertex decorations live in
one-dimensional or regular representations of the slot permutation groups,
and odd vertices anticommute, so reordering vertices or slots costs a sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "Gen", "Graph", "Canonical", "canonicalize", "perm_sign", "single_vertex",
    "graft", "collapsible_pairs", "substitute_pair", "enumerate_orbits",
    "labelled_basis", "orbit_is_zero", "pair_subgraph", "pair_legs",
    "insert_graph",
]


def perm_sign(p):
    """Sign of a permutation given as a sequence of images."""
    p = list(p)
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class Gen:
    """Graph-level view of a generator.

    ``sym_in``/``sym_out`` are 'trivial', 'sign' or 'regular' and describe
    how permuting the vertex's input/output slots acts on the decoration.
    ``odd`` is the parity of the vertex as a tensor factor.
    """

    name: str
    m: int
    n: int
    odd: bool
    sym_in: str = "regular"
    sym_out: str = "regular"

    def slot_perms(self, side):
        k, sym = (self.m, self.sym_in) if side == "in" else (self.n, self.sym_out)
        if sym == "regular" or k < 2:
            return [tuple(range(k))]
        return list(itertools.permutations(range(k)))

    def char(self, pin, pout):
        s = 1
        if self.sym_in == "sign":
            s *= perm_sign(pin)
        if self.sym_out == "sign":
            s *= perm_sign(pout)
        return s


@dataclass(frozen=True)
class Graph:
    vertices: tuple
    edges: frozenset
    ins: tuple
    outs: tuple

    @property
    def weight(self):
        return len(self.vertices)

    @property
    def biarity(self):
        return (len(self.ins), len(self.outs))

    @property
    def genus(self):
        return len(self.edges) - len(self.vertices) + 1

    def key(self):
        return (self.vertices, tuple(sorted(self.edges)), self.ins, self.outs)

    @classmethod
    def from_key(cls, key):
        names, edges, ins, outs = key
        return cls(tuple(names), frozenset(edges), tuple(ins), tuple(outs))

    def degree(self, gens, vdeg):
        return sum(vdeg(gens[v]) for v in self.vertices)

    def successors(self):
        succ = [set() for _ in self.vertices]
        for u, _, v, _ in self.edges:
            succ[u].add(v)
        return succ

    def is_acyclic(self):
        succ = self.successors()
        state = [0] * len(self.vertices)

        def visit(u):
            state[u] = 1
            for v in succ[u]:
                if state[v] == 1:
                    return False
                if state[v] == 0 and not visit(v):
                    return False
            state[u] = 2
            return True

        return all(state[u] or visit(u) for u in range(len(self.vertices)))

    def is_connected(self):
        if not self.vertices:
            return False
        adj = [set() for _ in self.vertices]
        for u, _, v, _ in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u] - seen:
                seen.add(v)
                stack.append(v)
        return len(seen) == len(self.vertices)

    def validate(self, gens):
        """Check slots are used exactly once; raise ValueError otherwise."""
        used_in, used_out = set(), set()
        for u, o, v, i in self.edges:
            used_out.add((u, o))
            used_in.add((v, i))
        for v, i in self.ins:
            used_in.add((v, i))
        for u, o in self.outs:
            used_out.add((u, o))
        need_in = {(v, i) for v, g in enumerate(self.vertices) for i in range(gens[g].m)}
        need_out = {(v, o) for v, g in enumerate(self.vertices) for o in range(gens[g].n)}
        n_in = len(self.edges) + len(self.ins)
        n_out = len(self.edges) + len(self.outs)
        if used_in != need_in or n_in != len(need_in):
            raise ValueError("input slots not used exactly once")
        if used_out != need_out or n_out != len(need_out):
            raise ValueError("output slots not used exactly once")
        if not self.is_connected():
            raise ValueError("graph is not connected")
        if not self.is_acyclic():
            raise ValueError("graph has a directed cycle")


def single_vertex(gen):
    return Graph((gen.name,), frozenset(),
                 tuple((0, i) for i in range(gen.m)),
                 tuple((0, o) for o in range(gen.n)))


# -- canonical forms -----------------------------------------------------------

@dataclass(frozen=True)
class Canonical:
    """Result of canonicalisation.

    ``graph`` is the canonical representative; the input graph equals
    ``sign * graph`` once legs are matched by ``in_order``/``out_order``:
    canonical input leg p is original input leg ``in_order[p]``.
    ``autos`` lists every (sign, in_order, out_order) reaching the same
    canonical graph (the first entry is the chosen one).  For labelled
    canonicalisation ``sign`` is 0 when an odd automorphism kills the graph.
    """

    key: tuple
    sign: int
    in_order: tuple
    out_order: tuple
    autos: tuple

    @property
    def graph(self):
        return Graph.from_key(self.key)


def _neighbour_tables(g, gens):
    nv = len(g.vertices)
    in_src = [[None] * gens[name].m for name in g.vertices]
    out_tgt = [[None] * gens[name].n for name in g.vertices]
    for u, o, v, i in g.edges:
        out_tgt[u][o] = ("v", v, i)
        in_src[v][i] = ("v", u, o)
    for leg, (v, i) in enumerate(g.ins):
        in_src[v][i] = ("in", leg)
    for leg, (u, o) in enumerate(g.outs):
        out_tgt[u][o] = ("out", leg)
    return nv, in_src, out_tgt


def _koszul_vertex_sign(order, parities):
    """Sign for moving vertices from positions 0..n-1 into ``order``."""
    odd = [v for v in order if parities[v]]
    sign = 1
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if odd[a] > odd[b]:
                sign = -sign
    return sign


def canonicalize(g, gens, labelled=False):
    """Canonical form of ``g`` under vertex reordering and slot symmetries.

    With ``labelled=False`` the global legs are unlabelled too (orbit of the
    leg relabelling action) and the leg correspondence is returned.
    """
    nv, in_src, out_tgt = _neighbour_tables(g, gens)
    vgens = [gens[name] for name in g.vertices]
    parities = [gen.odd for gen in vgens]
    choices_per_vertex = []
    for gen in vgens:
        ch = []
        for pin in gen.slot_perms("in"):
            for pout in gen.slot_perms("out"):
                ch.append((pin, pout, gen.char(pin, pout)))
        choices_per_vertex.append(ch)
    min_name = min(g.vertices)
    starts = [v for v in range(nv) if g.vertices[v] == min_name]

    best = None
    hits = []
    for combo in itertools.product(*choices_per_vertex):
        # combo[v] = (pin, pout, chi): new slot pin[k] holds old slot k
        inv_in = []
        inv_out = []
        for pin, pout, _ in combo:
            ii = [0] * len(pin)
            for k, p in enumerate(pin):
                ii[p] = k
            oo = [0] * len(pout)
            for k, p in enumerate(pout):
                oo[p] = k
            inv_in.append(ii)
            inv_out.append(oo)
        chi = 1
        for _, _, c in combo:
            chi *= c
        for s in starts:
            order = [s]
            pos = {s: 0}
            qi = 0
            while qi < len(order):
                v = order[qi]
                qi += 1
                for new_slot in range(len(inv_in[v])):
                    src = in_src[v][inv_in[v][new_slot]]
                    if src[0] == "v" and src[1] not in pos:
                        pos[src[1]] = len(order)
                        order.append(src[1])
                for new_slot in range(len(inv_out[v])):
                    tgt = out_tgt[v][inv_out[v][new_slot]]
                    if tgt[0] == "v" and tgt[1] not in pos:
                        pos[tgt[1]] = len(order)
                        order.append(tgt[1])
            names = tuple(g.vertices[v] for v in order)
            edges = tuple(sorted((pos[u], combo[u][1][o], pos[v], combo[v][0][i])
                                 for u, o, v, i in g.edges))
            ins = [(pos[v], combo[v][0][i]) for v, i in g.ins]
            outs = [(pos[u], combo[u][1][o]) for u, o in g.outs]
            if labelled:
                in_order = tuple(range(len(ins)))
                out_order = tuple(range(len(outs)))
                ins_t, outs_t = tuple(ins), tuple(outs)
            else:
                in_order = tuple(sorted(range(len(ins)), key=ins.__getitem__))
                out_order = tuple(sorted(range(len(outs)), key=outs.__getitem__))
                ins_t = tuple(ins[k] for k in in_order)
                outs_t = tuple(outs[k] for k in out_order)
            key = (names, edges, ins_t, outs_t)
            sign = chi * _koszul_vertex_sign(order, parities)
            if best is None or key < best:
                best = key
                hits = [(sign, in_order, out_order)]
            elif key == best:
                hits.append((sign, in_order, out_order))
    # deduplicate identical hits (same choice reached through different starts)
    uniq = []
    for h in hits:
        if h not in uniq:
            uniq.append(h)
    sign, in_order, out_order = uniq[0]
    if labelled and any(h[0] != sign for h in uniq):
        sign = 0
    return Canonical(best, sign, in_order, out_order, tuple(uniq))


# -- graph surgery -----------------------------------------------------------

def graft(upper, lower, wiring, gens):
    """Infinitesimal composite: ``lower`` below ``upper``.

    ``wiring`` is a sequence of (lower output leg, upper input leg) pairs.
    Vertices of ``upper`` come first.  Inputs of the result: inputs of
    ``lower`` then unwired inputs of ``upper``; outputs: unwired outputs of
    ``lower`` then outputs of ``upper``.
    """
    shift = len(upper.vertices)
    wired_lo = {j for j, _ in wiring}
    wired_up = {i for _, i in wiring}
    edges = set(upper.edges)
    for u, o, v, i in lower.edges:
        edges.add((u + shift, o, v + shift, i))
    for j, i in wiring:
        u, o = lower.outs[j]
        v, s = upper.ins[i]
        edges.add((u + shift, o, v, s))
    ins = tuple((v + shift, s) for v, s in lower.ins) + tuple(
        upper.ins[i] for i in range(len(upper.ins)) if i not in wired_up)
    outs = tuple((u + shift, o) for j, (u, o) in enumerate(lower.outs) if j not in wired_lo) + upper.outs
    return Graph(upper.vertices + lower.vertices, frozenset(edges), ins, outs)


def collapsible_pairs(g):
    """Pairs (u, v) joined by an edge u -> v with no longer path u ~> v.

    These are exactly the two-vertex subgraphs that can be contracted to a
    single vertex without creating a directed cycle.
    """
    succ = g.successors()
    pairs = []
    for u in range(len(g.vertices)):
        for v in sorted(succ[u]):
            # is there a path u -> w ~> v with w != v?
            stack = [w for w in succ[u] if w != v]
            seen = set(stack)
            bad = False
            while stack:
                w = stack.pop()
                if w == v:
                    bad = True
                    break
                for x in succ[w]:
                    if x not in seen:
                        seen.add(x)
                        stack.append(x)
            if not bad:
                pairs.append((u, v))
    return pairs


def pair_legs(g, u, v, gens):
    """Legs of the two-vertex subgraph {u, v} in a fixed order.

    Returns (in_legs, out_legs) as lists of (vertex, slot) inside the pair,
    ordered u's slots first, then v's.
    """
    internal_in = set()
    internal_out = set()
    for a, o, b, i in g.edges:
        if {a, b} == {u, v}:
            internal_out.add((a, o))
            internal_in.add((b, i))
    in_legs = [(w, i) for w in (u, v) for i in range(gens[g.vertices[w]].m) if (w, i) not in internal_in]
    out_legs = [(w, o) for w in (u, v) for o in range(gens[g.vertices[w]].n) if (w, o) not in internal_out]
    return in_legs, out_legs


def pair_subgraph(g, u, v, gens):
    """The pair {u, v} as a labelled two-vertex graph (u first)."""
    in_legs, out_legs = pair_legs(g, u, v, gens)
    idx = {u: 0, v: 1}
    edges = frozenset((idx[a], o, idx[b], i) for a, o, b, i in g.edges if {a, b} == {u, v})
    return Graph((g.vertices[u], g.vertices[v]), edges,
                 tuple((idx[w], i) for w, i in in_legs),
                 tuple((idx[w], o) for w, o in out_legs))


def substitute_pair(g, u, v, sub, gens):
    """Replace the pair {u, v} of ``g`` by the two-vertex graph ``sub``.

    Leg k of ``sub`` is attached where leg k of ``pair_subgraph(g, u, v)``
    was.  The vertices of ``sub`` are appended after the remaining vertices
    of ``g`` (in order).
    """
    in_legs, out_legs = pair_legs(g, u, v, gens)
    keep = [w for w in range(len(g.vertices)) if w not in (u, v)]
    ren = {w: k for k, w in enumerate(keep)}
    base = len(keep)
    in_pos = {leg: k for k, leg in enumerate(in_legs)}
    out_pos = {leg: k for k, leg in enumerate(out_legs)}

    def sub_in(k):
        w, i = sub.ins[k]
        return (base + w, i)

    def sub_out(k):
        w, o = sub.outs[k]
        return (base + w, o)

    edges = set()
    for a, o, b, i in g.edges:
        a_in = a in (u, v)
        b_in = b in (u, v)
        if a_in and b_in:
            continue
        if not a_in and not b_in:
            edges.add((ren[a], o, ren[b], i))
        elif a_in:
            w, oo = sub_out(out_pos[(a, o)])
            edges.add((w, oo, ren[b], i))
        else:
            w, ii = sub_in(in_pos[(b, i)])
            edges.add((ren[a], o, w, ii))
    for a, o, b, i in sub.edges:
        edges.add((base + a, o, base + b, i))
    ins = tuple(sub_in(in_pos[(w, i)]) if w in (u, v) else (ren[w], i) for w, i in g.ins)
    outs = tuple(sub_out(out_pos[(w, o)]) if w in (u, v) else (ren[w], o) for w, o in g.outs)
    names = tuple(g.vertices[w] for w in keep) + sub.vertices
    return Graph(names, frozenset(edges), ins, outs)


def insert_graph(g, v, h):
    """Replace vertex ``v`` of ``g`` by the graph ``h`` of the same biarity.

    Input slot i of ``v`` becomes input leg i of ``h``, likewise for
    outputs.  Vertex order: vertices of ``g`` before ``v``, then those of
    ``h``, then the rest of ``g``.  No sign is attached.
    """
    nh = len(h.vertices)
    if len(h.ins) != sum(1 for _ in _slots(g, v, "in")) or len(h.outs) != sum(1 for _ in _slots(g, v, "out")):
        raise ValueError("inserted graph has the wrong biarity")

    def ren(w):
        return w if w < v else w + nh - 1

    def hin(i):
        w, s = h.ins[i]
        return (v + w, s)

    def hout(o):
        w, s = h.outs[o]
        return (v + w, s)

    edges = set()
    for a, o, b, i in g.edges:
        src = hout(o) if a == v else (ren(a), o)
        dst = hin(i) if b == v else (ren(b), i)
        edges.add(src + dst)
    for a, o, b, i in h.edges:
        edges.add((v + a, o, v + b, i))
    ins = tuple(hin(i) if w == v else (ren(w), i) for w, i in g.ins)
    outs = tuple(hout(o) if w == v else (ren(w), o) for w, o in g.outs)
    names = g.vertices[:v] + h.vertices + g.vertices[v + 1:]
    return Graph(names, frozenset(edges), ins, outs)


def _slots(g, v, side):
    if side == "in":
        seen = {i for a, o, b, i in g.edges if b == v} | {i for w, i in g.ins if w == v}
    else:
        seen = {o for a, o, b, i in g.edges if a == v} | {o for w, o in g.outs if w == v}
    return sorted(seen)


# -- enumeration -------------------------------------------------------------

def _attachments(h, gen):
    """All ways of adding one vertex decorated by ``gen`` to ``h``.

    The new vertex takes index len(h.vertices); its inputs may be fed by
    distinct outputs of ``h`` and its outputs may feed distinct inputs of ``h``.
    """
    new = len(h.vertices)
    n_out, n_in = len(h.outs), len(h.ins)
    # in-slot k of new vertex: None (global) or an output leg of h
    in_options = [None] + list(range(n_out))
    out_options = [None] + list(range(n_in))
    for in_assign in itertools.product(in_options, repeat=gen.m):
        used = [x for x in in_assign if x is not None]
        if len(set(used)) != len(used):
            continue
        for out_assign in itertools.product(out_options, repeat=gen.n):
            used2 = [x for x in out_assign if x is not None]
            if len(set(used2)) != len(used2):
                continue
            if not used and not used2:
                continue
            edges = set(h.edges)
            for k, leg in enumerate(in_assign):
                if leg is not None:
                    u, o = h.outs[leg]
                    edges.add((u, o, new, k))
            for k, leg in enumerate(out_assign):
                if leg is not None:
                    v, i = h.ins[leg]
                    edges.add((new, k, v, i))
            ins = tuple(h.ins[i] for i in range(n_in) if i not in used2) + tuple(
                (new, k) for k, leg in enumerate(in_assign) if leg is None)
            outs = tuple(h.outs[j] for j in range(n_out) if j not in used) + tuple(
                (new, k) for k, leg in enumerate(out_assign) if leg is None)
            g = Graph(h.vertices + (gen.name,), frozenset(edges), ins, outs)
            if g.is_acyclic():
                yield g


def enumerate_orbits(gens, weight, max_genus, allowed=None):
    """Canonical orbit representatives of connected graphs of a given weight.

    ``gens`` maps names to :class:`Gen`; ``allowed`` optionally restricts the
    multiset of decorations (a predicate on the names tuple, applied at the
    end).  Returns {(m, n): [Canonical, ...]}.  Orbits killed by an odd
    automorphism fixing the legs are kept; see :func:`orbit_is_zero`.
    """
    return _enumerate(tuple(sorted(gens.items())), weight, max_genus, allowed)


@lru_cache(maxsize=None)
def _enumerate_keys(gens_items, weight, max_genus):
    gens = dict(gens_items)
    if weight == 1:
        layer = {}
        for name in sorted(gens):
            c = canonicalize(single_vertex(gens[name]), gens)
            layer[c.key] = c
        return layer
    prev = _enumerate_keys(gens_items, weight - 1, max_genus)
    layer = {}
    for key in sorted(prev):
        h = Graph.from_key(key)
        for name in sorted(gens):
            for g in _attachments(h, gens[name]):
                if g.genus > max_genus:
                    continue
                c = canonicalize(g, gens)
                if c.key not in layer:
                    layer[c.key] = canonicalize(Graph.from_key(c.key), gens)
    return layer


def _enumerate(gens_items, weight, max_genus, allowed):
    layer = _enumerate_keys(gens_items, weight, max_genus)
    out = {}
    for key in sorted(layer):
        c = layer[key]
        g = c.graph
        if allowed is not None and not allowed(g.vertices):
            continue
        out.setdefault(g.biarity, []).append(c)
    return out


def labelled_basis(gens, weight, biarity, max_genus):
    """Canonical labelled graphs (nonzero ones) of given weight and biarity."""
    m, n = biarity
    orbits = enumerate_orbits(gens, weight, max_genus).get(biarity, [])
    seen = {}
    for c in orbits:
        g = c.graph
        for pin in itertools.permutations(range(m)):
            for pout in itertools.permutations(range(n)):
                h = Graph(g.vertices, g.edges,
                          tuple(g.ins[pin[k]] for k in range(m)),
                          tuple(g.outs[pout[k]] for k in range(n)))
                lc = canonicalize(h, gens, labelled=True)
                if lc.sign and lc.key not in seen:
                    seen[lc.key] = lc
    return [seen[k] for k in sorted(seen)]


def orbit_is_zero(c):
    """True if an automorphism fixing every leg acts by -1."""
    ref = c.autos[0]
    return any(a[1] == ref[1] and a[2] == ref[2] and a[0] != ref[0] for a in c.autos)
