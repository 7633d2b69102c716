"""Convolution algebras Hom_S(C, End_X) for Koszul dual coproperads.

Model.  Equivariant maps C -> End_X are identified with the coinvariants
(C^* (x) End_X)_S, which is isomorphic over Q.  A spanning set of columns is
(orbit graph c, elementary tensor q); relations are

  * automorphisms:  (c, q) = sign * kappa * (c, q relabelled),
  * the ideal:      R^perp substituted at every collapsible pair of c,

and the quotient is cut out block by block (weight, biarity).  Most rows have
one or two entries and go to a union-find with rational ratios; the rest go
to an :class:`Echelon` over the surviving roots.

Degrees.  The column (c, q) has degree |q| - |c| with |c| = sum of generator
degrees - w; structure maps of a strict algebra land in degree 1.

Product.  (c1 q1) . (c2 q2) = (-1)^{|q1||c2|} sum over wirings of
[graft(c1 over c2), mu(q1 over q2)], one edge for operads and every nonempty
partial matching for properads.  The bracket is the graded commutator, the
differential is (c q) -> (-1)^{|c|} c (x) d_End q.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import Echelon, _iadd, fmt_rational, parse_rational
from .graphs import Graph, canonicalize, collapsible_pairs, enumerate_orbits, graft, \
    pair_subgraph, single_vertex, substitute_pair
from .graphcal import EndoProperad, TruncationUnderflow, dual_relations
from .linfty import LInftyAlgebra, antisym_sort, mc_residual, twist
from .presentations import PresentationError, load_presentation

__all__ = [
    "ConvolutionAlgebra", "convolution_algebra", "StructureMaps", "parse_structure",
    "format_structure", "load_structure", "structure_to_mc", "relation_defects",
    "residual_support", "deformation_complex", "moduli_homotopy_groups",
    "calibrate_shift", "SHIFT", "StructureError", "convolution_linfty", "Cell",
    "ConvolutionLInfty", "InvalidDifferential", "ainfty_cells",
]

SHIFT = 0    # calibrated: convolution degree k <-> Hochschild/CE arity k + 1


class StructureError(ValueError):
    pass


def _small(x):
    """Integers stay ints: most ratios here are +-1 and Fraction is slow."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return _small(Fraction(a) / b)


class _RatioUF:
    """Union-find where x = ratio * parent; components may be forced to zero."""

    def __init__(self):
        self.parent = {}
        self.zero = set()

    def find(self, x):
        parent = self.parent
        if x not in parent:
            return x, 1
        path = []
        while x in parent:
            p, c = parent[x]
            path.append((x, c))
            x = p
        # compress
        acc = 1
        for y, c in reversed(path):
            acc = acc * c
            parent[y] = (x, acc)
        return x, acc

    def kill(self, x):
        self.zero.add(self.find(x)[0])

    def relate(self, a, ca, b, cb):
        """Impose ca*a + cb*b = 0."""
        ra, sa = self.find(a)
        rb, sb = self.find(b)
        u, v = ca * sa, cb * sb          # u*ra + v*rb = 0
        if ra == rb:
            if u + v:
                self.zero.add(ra)
            return
        za, zb = ra in self.zero, rb in self.zero
        if ra < rb:
            self.parent[rb] = (ra, _div(-u, v))
        else:
            self.parent[ra] = (rb, _div(-v, u))
        root = min(ra, rb)
        if za or zb:
            self.zero.add(root)


class _Block:
    """One (weight, biarity) block of the coinvariant quotient."""

    def __init__(self, alg, w, b, orbits):
        self.alg, self.w, self.b = alg, w, b
        self.orbits = orbits
        self.okey = {c.key: k for k, c in enumerate(orbits)}
        gens = alg.presentation.gens
        self.odeg = [sum(gens[v].degree for v in c.graph.vertices) - w for c in orbits]
        self.qs = alg.E.basis(*b)
        self._build()

    def _templates(self):
        """Ideal templates: lists of (coeff, orbit, in_order, out_order)."""
        alg = self.alg
        out = []
        for oi, c in enumerate(self.orbits):
            g = c.graph
            for u, v in collapsible_pairs(g):
                sub = pair_subgraph(g, u, v, alg.gens)
                pcomp, perp = dual_relations(alg.presentation, sub.biarity, alg.G)
                for r in perp:
                    t = []
                    for k, x in r:
                        h = substitute_pair(g, u, v, pcomp.basis[k].graph, alg.gens)
                        hc = canonicalize(h, alg.gens)
                        if hc.key not in self.okey:
                            raise TruncationUnderflow("ideal term outside the enumerated block")
                        t.append((_small(x * hc.sign), self.okey[hc.key], hc.in_order, hc.out_order))
                    out.append(t)
        return out

    def _build(self):
        E = self.alg.E
        uf = _RatioUF()
        big = []

        def feed(row):
            row = {k: x for k, x in row.items() if x}
            if len(row) == 1:
                uf.kill(next(iter(row)))
            elif len(row) == 2:
                (a, ca), (b, cb) = sorted(row.items())
                uf.relate(a, ca, b, cb)
            elif row:
                big.append(row)

        for oi, c in enumerate(self.orbits):
            for s, pin, pout in c.autos:
                ident = pin == tuple(range(len(pin))) and pout == tuple(range(len(pout)))
                if ident and s == 1:
                    continue
                for q in self.qs:
                    k, q2 = E.relabel(q, pin, pout)
                    row = {(oi, q): 1}
                    row[(oi, q2)] = row.get((oi, q2), 0) - s * k
                    feed(row)
        for t in self._templates():
            for q in self.qs:
                row = {}
                for x, oi, pin, pout in t:
                    k, q2 = E.relabel(q, pin, pout)
                    row[(oi, q2)] = row.get((oi, q2), 0) + x * k
                feed(row)
        ech = Echelon()
        for row in big:
            v = {}
            for col, x in row.items():
                r, s = uf.find(col)
                if r not in uf.zero:
                    v[r] = v.get(r, 0) + x * s
            v = {k: x for k, x in v.items() if x}
            if v:
                ech.add(v)
        self.uf = uf
        self.red = ech.back_substituted()
        roots = set()
        for oi in range(len(self.orbits)):
            for q in self.qs:
                r, _ = uf.find((oi, q))
                if r not in uf.zero and r not in self.red:
                    roots.add(r)
        self.reps = sorted(roots)
        self.rep_index = {r: k for k, r in enumerate(self.reps)}

    def nf(self, col):
        """Local normal form {rep position: coeff} of a column."""
        r, s = self.uf.find(col)
        if r in self.uf.zero:
            return {}
        if r in self.red:
            return {self.rep_index[k]: -s * x for k, x in self.red[r].items() if k != r}
        return {self.rep_index[r]: s}

    def degree(self, col):
        oi, q = col
        return self.alg.E.degree(q) - self.odeg[oi]


class ConvolutionAlgebra(LInftyAlgebra):
    """Truncated convolution dg Lie algebra of a Koszul dual with End_X.

    Truncation: weight <= W, genus <= G, and for operads total biarity
    m + n <= N.  Properads are truncated by weight and genus only, because
    grafting along several edges can lower the biarity.
    """

    def __init__(self, p, X, W, N=None, G=None):
        if W < 1:
            raise ValueError("max weight must be >= 1")
        self.presentation, self.X, self.W = p, X, W
        self.G = p.max_genus if G is None else G
        self.N = N
        self.operadic = p.kind == "operad"
        if self.operadic and N is not None:
            for g in p.generators:
                if g.m + g.n < 3:
                    raise PresentationError(
                        f"generator {g.name} has total biarity {g.m + g.n}; "
                        "biarity truncation needs m + n >= 3")
        self.E = EndoProperad(X, N if N is not None else max(2, 2 * W + 2))
        self.gens = p.graph_gens(1)
        self.blocks = {}
        for w in range(1, W + 1):
            for b, orbits in sorted(enumerate_orbits(self.gens, w, self.G).items()):
                if self.operadic and N is not None and sum(b) > N:
                    continue
                self.blocks[(w, b)] = _Block(self, w, b, orbits)
        labels, degrees, weights = [], [], []
        self.offset = {}
        for key in sorted(self.blocks):
            blk = self.blocks[key]
            self.offset[key] = len(labels)
            for col in blk.reps:
                labels.append((key[0], key[1], col[0], col[1]))
                degrees.append(blk.degree(col))
                weights.append(key[0])
        super().__init__(labels, degrees, weights, 2, f"Conv({p.name}, X)",
                         weight_graded=True, max_weight=W)
        self._graft_cache = {}
        self._cache = {}

    # -- columns -----------------------------------------------------------

    def column(self, w, b, oi, q, coeff=1):
        """Global vector of the column (orbit oi, q) in block (w, b)."""
        blk = self.blocks.get((w, b))
        if blk is None:
            return {}
        off = self.offset[(w, b)]
        return {off + k: coeff * x for k, x in blk.nf((oi, q)).items()}

    def labelled(self, graph, q, coeff=1):
        """Vector of a labelled graph with tensor q (legs as in ``graph``)."""
        key = (graph.weight, graph.biarity)
        blk = self.blocks.get(key)
        if blk is None:
            return {}
        c = canonicalize(graph, self.gens)
        k, q2 = self.E.relabel(q, c.in_order, c.out_order)
        return self.column(key[0], key[1], blk.okey[c.key], q2, coeff * c.sign * k)

    def orbit_parity(self, w, b, oi):
        return self.blocks[(w, b)].odeg[oi] % 2

    def describe(self, i):
        w, b, oi, q = self.labels[i]
        g = self.blocks[(w, b)].orbits[oi].graph
        xl = self.E.labels
        return (f"w{w}{b}#{oi}[{'.'.join(g.vertices)}]"
                f"({','.join(map(str, (xl[k] for k in q[0])))}<-{','.join(map(str, (xl[k] for k in q[1])))})")

    # -- structure maps ----------------------------------------------------

    def _wirings(self, n_lo, m_up):
        if self.operadic:
            return [((0, i),) for i in range(m_up)]
        out = []
        for k in range(1, min(n_lo, m_up) + 1):
            for outs in itertools.combinations(range(n_lo), k):
                for ins in itertools.permutations(range(m_up), k):
                    out.append(tuple(zip(outs, ins)))
        return out

    def _graft(self, k1, k2, wiring):
        key = (k1, k2, wiring)
        hit = self._graft_cache.get(key)
        if hit is None:
            h = graft(Graph.from_key(k1), Graph.from_key(k2), wiring, self.gens)
            bkey = (h.weight, h.biarity)
            if h.genus > self.G or bkey not in self.blocks:
                hit = False
            else:
                c = canonicalize(h, self.gens)
                hit = (bkey, self.blocks[bkey].okey[c.key], c.sign, c.in_order, c.out_order)
            self._graft_cache[key] = hit
        return hit

    def pre_lie(self, i, j):
        """x_i . x_j: x_i grafted above x_j."""
        w1, b1, o1, q1 = self.labels[i]
        w2, b2, o2, q2 = self.labels[j]
        if w1 + w2 > self.W:
            return {}
        c1 = self.blocks[(w1, b1)].orbits[o1]
        c2 = self.blocks[(w2, b2)].orbits[o2]
        s0 = -1 if (self.E.parity(q1) and self.orbit_parity(w2, b2, o2)) else 1
        out = {}
        for wiring in self._wirings(b2[1], b1[0]):
            hit = self._graft(c1.key, c2.key, wiring)
            if not hit:
                continue
            sq, q = self.E.compose(q1, q2, wiring)
            if not sq:
                continue
            bkey, oi, sg, pin, pout = hit
            k, q3 = self.E.relabel(q, pin, pout)
            _iadd(out, self.column(bkey[0], bkey[1], oi, q3), s0 * sq * sg * k)
        return out

    def bracket_basis(self, idxs):
        v = self._cache.get(idxs)
        if v is not None:
            return v
        if len(idxs) == 1:
            (i,) = idxs
            w, b, oi, q = self.labels[i]
            s = -1 if self.orbit_parity(w, b, oi) else 1
            v = {}
            for q2, x in self.E.differential(q).items():
                _iadd(v, self.column(w, b, oi, q2), s * x)
        elif len(idxs) == 2:
            i, j = idxs
            sign, key = antisym_sort(idxs, self.degrees)
            if not sign:
                v = {}
            elif key != tuple(idxs):
                v = {k: sign * x for k, x in self.bracket_basis(key).items()}
            else:
                v = dict(self.pre_lie(i, j))
                eps = -1 if (self.degrees[i] * self.degrees[j]) % 2 else 1
                _iadd(v, self.pre_lie(j, i), -eps)
        else:
            v = {}
        self._cache[idxs] = v
        return v

    def stamp(self):
        return {"W": self.W, "N": self.N, "G": self.G}


def convolution_algebra(p, X, W, N=None, G=None):
    if isinstance(p, str):
        p = load_presentation(p)
    return ConvolutionAlgebra(p, X, W, N, G)


# -- structure maps -------------------------------------------------------------

@dataclass
class StructureMaps:
    """Tensors of a strict algebra: maps[gen][(outs, ins)] = coefficient.

    ``outs``/``ins`` are tuples of basis labels of X.
    """

    presentation: object
    X: object
    maps: dict = field(default_factory=dict)
    presentation_ref: str = ""
    complex_ref: str = ""

    def tensor(self, name):
        return self.maps.get(name, {})


_MAP_RE = re.compile(r"^map\s+(?P<gen>\w+)\s*:\s*\[(?P<out>[^\]]*)\]\s*<-\s*\[(?P<inp>[^\]]*)\]\s*=\s*(?P<c>\S+)\s*$")


def _labels(s):
    return tuple(x.strip() for x in s.split(",") if x.strip())


def parse_structure(text, presentation=None, X=None, base_dir="."):
    """Parse a StructureMaps file; header ``struct <presentation> on <complex>``."""
    import os
    from .exactalg import parse_complex
    pres_ref = cx_ref = ""
    maps = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("struct "):
            m = re.match(r"^struct\s+(\S+)\s+on\s+(\S+)$", line)
            if not m:
                raise StructureError(f"line {lineno}: malformed header")
            pres_ref, cx_ref = m.group(1), m.group(2)
            if presentation is None:
                presentation = load_presentation(pres_ref if not os.path.exists(
                    os.path.join(base_dir, pres_ref)) else os.path.join(base_dir, pres_ref))
            if X is None:
                with open(os.path.join(base_dir, cx_ref)) as fh:
                    X = parse_complex(fh.read())[0]
            continue
        m = _MAP_RE.match(line)
        if not m:
            raise StructureError(f"line {lineno}: cannot parse {raw!r}")
        if presentation is None or X is None:
            raise StructureError(f"line {lineno}: map before the struct header")
        gen = m.group("gen")
        if gen not in presentation.gens:
            raise StructureError(f"line {lineno}: unknown generator {gen!r}")
        key = (_labels(m.group("out")), _labels(m.group("inp")))
        c = parse_rational(m.group("c"))
        if c:
            t = maps.setdefault(gen, {})
            t[key] = t.get(key, 0) + c
    if presentation is None or X is None:
        raise StructureError("missing struct header")
    s = StructureMaps(presentation, X, maps, pres_ref, cx_ref)
    validate_structure(s)
    return s


def load_structure(path):
    import os
    with open(path) as fh:
        return parse_structure(fh.read(), base_dir=os.path.dirname(os.path.abspath(path)))


def format_structure(s):
    lines = [f"struct {s.presentation_ref or s.presentation.name} on {s.complex_ref or 'X'}"]
    for gen in sorted(s.maps):
        for (o, i), c in sorted(s.maps[gen].items()):
            if c:
                lines.append(f"map {gen}: [{','.join(o)}] <- [{','.join(i)}] = {fmt_rational(c)}")
    return "\n".join(lines) + "\n"


def _x_index(X):
    deg, labs = {}, []
    for d in X.space.degrees():
        for lab in X.space.basis(d):
            deg[lab] = d
            labs.append(lab)
    return labs, deg


def validate_structure(s):
    """Shape, degree and symmetry checks of the supplied tensors."""
    labs, deg = _x_index(s.X)
    from .linfty import koszul_sign
    for name, t in s.maps.items():
        gen = s.presentation.gens[name]
        for (o, i), c in t.items():
            if len(o) != gen.n or len(i) != gen.m:
                raise StructureError(f"{name}: entry {o}<-{i} has the wrong shape")
            for lab in o + i:
                if lab not in deg:
                    raise StructureError(f"{name}: unknown basis label {lab!r}")
            if sum(deg[x] for x in o) - sum(deg[x] for x in i) != gen.degree:
                raise StructureError(f"{name}: entry {o}<-{i} has the wrong degree")
        for pin in itertools.permutations(range(gen.m)):
            for pout in itertools.permutations(range(gen.n)):
                chi = gen.character(pin, pout)
                if chi is None:
                    continue
                for (o, i), c in t.items():
                    k = (koszul_sign([deg[x] for x in o], pout) *
                         koszul_sign([deg[x] for x in i], pin))
                    o2 = tuple(o[a] for a in pout)
                    i2 = tuple(i[a] for a in pin)
                    if t.get((o2, i2), 0) != chi * k * c:
                        raise StructureError(f"{name}: tensor violates its declared symmetry")


def structure_to_mc(conv, s):
    """The weight-one element carrying the structure tensors.

    A tensor t respecting the symmetry group H of its generator is the image
    of (1/|H|) sum_q t_q [g x q] under the norm map, so the entries are summed
    into coinvariant columns and divided by |H|.
    """
    validate_structure(s)
    pos = {lab: k for k, lab in enumerate(conv.E.labels)}
    out = {}
    for name, t in sorted(s.maps.items()):
        gen = s.presentation.gens[name]
        H = sum(1 for a in itertools.permutations(range(gen.m))
                for b in itertools.permutations(range(gen.n)) if gen.character(a, b) is not None)
        g = single_vertex(conv.gens[name])
        for (o, i), c in sorted(t.items()):
            q = (tuple(pos[x] for x in o), tuple(pos[x] for x in i))
            _iadd(out, conv.labelled(g, q), Fraction(c, H))
    return out


def relation_defects(s):
    """Direct evaluation of every relation on the tensors (X in degree 0).

    Returns {relation name: {(outs, ins): value}} with zero entries dropped.
    Shares no code with the graph machinery.
    """
    labs, deg = _x_index(s.X)
    if any(deg.values()):
        raise StructureError("direct relation checking needs X in degree 0")
    p = s.presentation
    out = {}
    for rel in p.relations:
        acc = {}
        for coeff, t in rel.terms:
            lo, up = p.gens[t.lower], p.gens[t.upper]
            Tlo, Tup = s.tensor(t.lower), s.tensor(t.upper)
            wired_out = {o: i for o, i in t.edges}
            wired_in = {i: o for o, i in t.edges}
            in_slots = [("lo", k) for k in range(lo.m)] + [("up", k) for k in range(up.m) if k not in wired_in]
            out_slots = [("lo", k) for k in range(lo.n) if k not in wired_out] + [("up", k) for k in range(up.n)]
            for (olo, ilo), a in Tlo.items():
                for (oup, iup), b in Tup.items():
                    if any(olo[o] != iup[i] for o, i in t.edges):
                        continue
                    val = {("lo", k): ilo[k] for k in range(lo.m)}
                    val.update({("up", k): iup[k] for k in range(up.m)})
                    oval = {("lo", k): olo[k] for k in range(lo.n)}
                    oval.update({("up", k): oup[k] for k in range(up.n)})
                    gi = [None] * len(in_slots)
                    for slot, lab in zip(in_slots, t.ins):
                        gi[lab - 1] = val[slot]
                    go = [None] * len(out_slots)
                    for slot, lab in zip(out_slots, t.outs):
                        go[lab - 1] = oval[slot]
                    key = (tuple(go), tuple(gi))
                    acc[key] = acc.get(key, 0) + coeff * a * b
        acc = {k: v for k, v in acc.items() if v}
        if acc:
            out[rel.name] = acc
    return out


def _parallel_factor(t, p):
    """k! for a term whose k >= 2 edges join a symmetric side to another vertex.

    The bracket composes coinvariant representatives, so of the k! wirings
    of such parallel edges only one matches; the column therefore carries
    1/k! of one composition and the pairing scales it back.
    """
    k = len(t.edges)
    if k < 2:
        return 1
    lo, up = p.gens[t.lower], p.gens[t.upper]
    return math.factorial(k) if (lo.sym_out != "regular" or up.sym_in != "regular") else 1


def residual_support(conv, residual):
    """Relations of the presentation on which a weight-two residual is nonzero.

    Pairs the residual with s^2 R: for a relation r of biarity b the value on
    an output/input tensor q* is sum over leg relabellings of the orbit
    columns of <relabelled graph, s^2 r> * <relabelled q, q*>.
    """
    from .graphcal import dual_term_graph
    p = conv.presentation
    res = {}
    for rel in p.relations:
        b = rel.terms[0][1].biarity(p.gens)
        blk = conv.blocks.get((2, b))
        if blk is None:
            continue
        target = {}
        for c, t in rel.terms:
            lc = canonicalize(dual_term_graph(t, p), conv.gens, labelled=True)
            if lc.sign:
                target[lc.key] = target.get(lc.key, 0) + c * lc.sign * _parallel_factor(t, p)
        off = conv.offset[(2, b)]
        D = {}
        for pos, col in enumerate(blk.reps):
            x = residual.get(off + pos)
            if not x:
                continue
            oi, q = col
            g = blk.orbits[oi].graph
            for pin in itertools.permutations(range(b[0])):
                for pout in itertools.permutations(range(b[1])):
                    h = Graph(g.vertices, g.edges, tuple(g.ins[k] for k in pin),
                              tuple(g.outs[k] for k in pout))
                    lc = canonicalize(h, conv.gens, labelled=True)
                    r = target.get(lc.key)
                    if not r or not lc.sign:
                        continue
                    k, q2 = conv.E.relabel(q, pin, pout)
                    D[q2] = D.get(q2, 0) + x * r * lc.sign * k
        D = {k: v for k, v in D.items() if v}
        if D:
            res[rel.name] = D
    return res


# -- deformation complexes ------------------------------------------------------

def deformation_complex(conv, phi, degrees=None):
    """(cochain complex, twisted algebra) at an MC element phi."""
    tw = twist(conv, phi)
    if tw.curved:
        raise ArithmeticError("twisting element is not Maurer-Cartan")
    return tw.complex(degrees), tw


def moduli_homotopy_groups(conv, phi, degrees, rebuild=None):
    """Betti numbers of the twisted complex, keyed by cohomological degree.

    ``rebuild`` optionally maps (conv, phi) to a larger truncation; the
    report then flags each degree as stable when both agree.  Under the
    calibrated shift, degree -n gives dim pi_{n+1}.
    """
    cx, _ = deformation_complex(conv, phi, degrees)
    betti = cohomology_betti(cx, degrees)
    report = {"betti": betti, "truncation": conv.stamp(), "shift": SHIFT,
              "pi": {-d + 1 + SHIFT: betti[d] for d in degrees if d <= 0}}
    if rebuild is not None:
        conv2, phi2 = rebuild(conv, phi)
        cx2, _ = deformation_complex(conv2, phi2, degrees)
        b2 = cohomology_betti(cx2, degrees)
        report["stable"] = {d: betti[d] == b2[d] for d in degrees}
        report["truncation_next"] = conv2.stamp()
    return report


def cohomology_betti(cx, degrees):
    from .exactalg import cohomology
    return dict(cohomology(cx, degrees).betti)


def calibrate_shift(conv_betti, oracle_betti, candidates=range(-3, 4)):
    """Shifts s with conv degree k <-> oracle arity k + 1 + s on the overlap."""
    good = []
    for s in candidates:
        pairs = [(k, k + 1 + s) for k in conv_betti if (k + 1 + s) in oracle_betti]
        if pairs and all(conv_betti[k] == oracle_betti[a] for k, a in pairs):
            good.append(s)
    return good


# -- L-infinity convolution from differential data ------------------------------

class InvalidDifferential(ValueError):
    def __init__(self, weight, msg=""):
        self.weight = weight
        super().__init__(f"differential data squares to nonzero in weight {weight}"
                         + (f": {msg}" if msg else ""))


@dataclass(frozen=True)
class Cell:
    """A Sigma-free generator of a quasi-free resolution.

    ``degree`` is its homological degree; a map out of it into End_X (X in
    degree 0) has cohomological degree ``degree + 1``.
    """

    name: str
    m: int
    n: int
    degree: int


class ConvolutionLInfty(LInftyAlgebra):
    """Hom(cells, End_X) with brackets read off from a differential.

    ``partials[c]`` lists (coefficient, Graph over cell names) with the legs
    of the graph matching those of c; the n-vertex terms form the part
    d^(n).  In the shifted picture (cell c has parity ``degree``) the
    brackets are

        Q_n(f_1..f_n)(c) = sum over terms, sum over assignments of the f's
                           to the vertices, eps * mu_G(values),

    eps the Koszul sign of moving the f's into vertex order; l_n is obtained
    from Q_n by the sign of the module :mod:`linfty`.  The squared
    differential is computed by inserting terms into vertices, with the sign
    of moving the degree -1 operator past earlier vertices.
    """

    def __init__(self, cells, partials, X, check=True, name="ConvLInfty"):
        self.cells = {c.name: c for c in cells}
        self.partials = {k: [(Fraction(c), g) for c, g in v] for k, v in partials.items()}
        for name_, terms in self.partials.items():
            c0 = self.cells[name_]
            for _, g in terms:
                if g.biarity != (c0.m, c0.n) or any(v not in self.cells for v in g.vertices):
                    raise ValueError(f"term of d({name_}) does not match the cell")
        self.E = EndoProperad(X, 2)
        if any(self.E.deg):
            raise ValueError("L-infinity convolution needs X concentrated in degree 0")
        arity = max([len(g.vertices) for ts in self.partials.values() for _, g in ts] + [2])
        labels, degrees, weights = [], [], []
        for nm in sorted(self.cells):
            c = self.cells[nm]
            for q in self.E.basis(c.m, c.n):
                labels.append((nm, q))
                degrees.append(c.degree + 1)
                weights.append(c.m + c.n - 2)
        super().__init__(labels, degrees, weights, arity, name)
        self._by_cell = {}
        for i, (nm, q) in enumerate(labels):
            self._by_cell.setdefault(nm, {})[q] = i
        self._cache = {}
        if check:
            self.check_square()

    def _gens(self):
        from .graphs import Gen
        return {n: Gen(n, c.m, c.n, c.degree % 2 == 1, "regular", "regular")
                for n, c in self.cells.items()}

    def square(self, name):
        """d^2(name) as {labelled canonical key: coeff}."""
        from .graphs import insert_graph
        gens = self._gens()
        acc = {}
        for c1, g in self.partials.get(name, []):
            pre = 0
            for v in range(len(g.vertices)):
                s = -1 if pre % 2 else 1
                for c2, h in self.partials.get(g.vertices[v], []):
                    cc = canonicalize(insert_graph(g, v, h), gens, labelled=True)
                    if cc.sign:
                        acc[cc.key] = acc.get(cc.key, 0) + c1 * c2 * s * cc.sign
                pre += self.cells[g.vertices[v]].degree
        return {k: x for k, x in acc.items() if x}

    def check_square(self):
        for name in sorted(self.cells):
            bad = self.square(name)
            if bad:
                w = min(len(Graph.from_key(k).vertices) for k in bad)
                raise InvalidDifferential(w, f"cell {name}")

    def _evaluate(self, g, tensors):
        """mu_G on elementary tensors (None when an edge label mismatches)."""
        in_val, out_val = {}, {}
        for k, (o, i) in enumerate(tensors):
            for a, x in enumerate(i):
                in_val[(k, a)] = x
            for a, x in enumerate(o):
                out_val[(k, a)] = x
        for u, o, v, i in g.edges:
            if out_val[(u, o)] != in_val[(v, i)]:
                return None
        return (tuple(out_val[s] for s in g.outs), tuple(in_val[s] for s in g.ins))

    def Qbasis(self, idxs):
        n = len(idxs)
        args = [self.labels[i] for i in idxs]
        shifted = [self.degrees[i] - 1 for i in idxs]
        v = {}
        for name, terms in self.partials.items():
            for c, g in terms:
                if len(g.vertices) != n:
                    continue
                for perm in itertools.permutations(range(n)):
                    # vertex k receives argument perm[k]
                    if any(g.vertices[k] != args[perm[k]][0] for k in range(n)):
                        continue
                    q = self._evaluate(g, [args[perm[k]][1] for k in range(n)])
                    if q is None:
                        continue
                    from .linfty import koszul_sign
                    eps = koszul_sign(shifted, list(perm))
                    j = self._by_cell[name][q]
                    v[j] = v.get(j, 0) + c * eps
        return {k: x for k, x in v.items() if x}

    def bracket_basis(self, idxs):
        v = self._cache.get(idxs)
        if v is None:
            from .linfty import _qsign
            s = _qsign([self.degrees[i] for i in idxs])
            v = {k: s * x for k, x in self.Qbasis(idxs).items()}
            self._cache[idxs] = v
        return v


def convolution_linfty(cells, partials, X, check=True):
    return ConvolutionLInfty(cells, partials, X, check=check)


def ainfty_cells(max_arity):
    """Cells mu_n (n = 2..max_arity) and their quadratic differential.

    d mu_n = sum_{r+s+t=n} (-1)^{r+st} mu_{r+1+t} o_{r} mu_s, the usual
    A-infinity signs; the two-vertex graph lists the outer cell first.
    """
    cells = [Cell(f"mu{n}", n, 1, n - 2) for n in range(2, max_arity + 1)]
    partials = {}
    for n in range(3, max_arity + 1):
        terms = []
        for s in range(2, n):
            for r in range(0, n - s + 1):
                t = n - r - s
                p = r + 1 + t
                g = Graph((f"mu{p}", f"mu{s}"), frozenset({(1, 0, 0, r)}),
                          tuple((0, k) for k in range(r)) + tuple((1, k) for k in range(s))
                          + tuple((0, k) for k in range(r + 1, p)), ((0, 0),))
                terms.append((-1 if (r + s * t) % 2 else 1, g))
        partials[f"mu{n}"] = terms
    return cells, partials
