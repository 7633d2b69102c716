"""Quadratic (pr)operad presentations by generators and relations.

Conventions: inputs at the bottom, outputs at the top; a generator of
biarity (m, n) has m inputs and n outputs, like End_X(m, n) = Hom(X^m, X^n).
A relation term is a two-vertex graph: ``lower`` feeds ``upper`` along
``edges``.  Free input slots are listed as the inputs of ``lower`` followed by
the unwired inputs of ``upper``; free output slots as the unwired outputs of
``lower`` followed by the outputs of ``upper``.  ``in``/``out`` assign a
global leg label (1-based) to each free slot in that order.  Slot indices in
``edges`` are 1-based in the text format and 0-based in memory.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import Echelon, fmt_rational, parse_rational
from .graphs import Gen, Graph, canonicalize, collapsible_pairs, labelled_basis, \
    perm_sign, single_vertex, substitute_pair

__all__ = [
    "PresentationError", "ParseError", "RelationBiarityMismatch",
    "NonQuadraticRelation", "SymmetryError", "Generator", "RelationTerm",
    "Relation", "Presentation", "parse_presentation", "format_presentation",
    "load_presentation", "BUILTINS", "free_component", "quotient_component",
    "FreeComponent", "relation_space", "action_matrix",
]


class PresentationError(ValueError):
    code = "PresentationError"

    def __init__(self, msg, line=None, col=None):
        self.line, self.col = line, col
        where = f"line {line}" + (f", column {col}" if col else "") + ": " if line else ""
        super().__init__(f"{self.code}: {where}{msg}")


class ParseError(PresentationError):
    code = "ParseError"


class RelationBiarityMismatch(PresentationError):
    code = "RelationBiarityMismatch"


class NonQuadraticRelation(PresentationError):
    code = "NonQuadraticRelation"


class SymmetryError(PresentationError):
    code = "SymmetryError"


_SYMS = ("trivial", "sign", "regular")


@dataclass(frozen=True)
class Generator:
    name: str
    m: int
    n: int
    degree: int = 0
    sym_in: str = "regular"
    sym_out: str = "regular"

    def __post_init__(self):
        if self.m + self.n < 1 or self.m < 0 or self.n < 0:
            raise PresentationError(f"generator {self.name}: bad biarity ({self.m},{self.n})")
        for s in (self.sym_in, self.sym_out):
            if s not in _SYMS:
                raise SymmetryError(f"generator {self.name}: unknown symmetry {s!r}")

    @property
    def sym(self):
        if self.sym_in == self.sym_out:
            return self.sym_in
        return f"in:{self.sym_in},out:{self.sym_out}"

    def as_gen(self, shift=0):
        """Graph decoration with vertex degree ``degree + shift``."""
        return Gen(self.name, self.m, self.n, (self.degree + shift) % 2 == 1,
                   self.sym_in, self.sym_out)

    def character(self, pin, pout):
        """Scalar by which slot permutations act (None for regular sides)."""
        s = 1
        for side, p in (("in", pin), ("out", pout)):
            sym = self.sym_in if side == "in" else self.sym_out
            if sym == "regular":
                if tuple(p) != tuple(range(len(p))):
                    return None
            elif sym == "sign":
                s *= perm_sign(p)
        return s


def check_symmetry_action(gen):
    """Verify the declared symmetry is a group action (identity and products)."""
    pins = list(itertools.permutations(range(gen.m)))
    pouts = list(itertools.permutations(range(gen.n)))
    ident = (tuple(range(gen.m)), tuple(range(gen.n)))
    if gen.character(*ident) != 1:
        raise SymmetryError(f"{gen.name}: identity does not act trivially")
    for a, b in itertools.product(pins, repeat=2):
        ab = tuple(a[b[k]] for k in range(gen.m))
        ca, cb, cab = (gen.character(x, ident[1]) for x in (a, b, ab))
        if None not in (ca, cb, cab) and ca * cb != cab:
            raise SymmetryError(f"{gen.name}: input action is not multiplicative")
    for a, b in itertools.product(pouts, repeat=2):
        ab = tuple(a[b[k]] for k in range(gen.n))
        ca, cb, cab = (gen.character(ident[0], x) for x in (a, b, ab))
        if None not in (ca, cb, cab) and ca * cb != cab:
            raise SymmetryError(f"{gen.name}: output action is not multiplicative")


@dataclass(frozen=True)
class RelationTerm:
    lower: str
    upper: str
    edges: tuple          # ((lower out slot, upper in slot), ...) 0-based
    ins: tuple            # global label (1-based) of each free input slot
    outs: tuple           # global label (1-based) of each free output slot

    def free_slots(self, gens):
        lo, up = gens[self.lower], gens[self.upper]
        wired_out = {o for o, _ in self.edges}
        wired_in = {i for _, i in self.edges}
        in_slots = [(0, i) for i in range(lo.m)] + [(1, i) for i in range(up.m) if i not in wired_in]
        out_slots = [(0, o) for o in range(lo.n) if o not in wired_out] + [(1, o) for o in range(up.n)]
        return in_slots, out_slots

    def biarity(self, gens):
        in_slots, out_slots = self.free_slots(gens)
        return (len(in_slots), len(out_slots))

    def graph(self, gens):
        """Two-vertex graph, vertex 0 = lower, vertex 1 = upper."""
        in_slots, out_slots = self.free_slots(gens)
        ins = [None] * len(in_slots)
        for slot, lab in zip(in_slots, self.ins):
            ins[lab - 1] = slot
        outs = [None] * len(out_slots)
        for slot, lab in zip(out_slots, self.outs):
            outs[lab - 1] = slot
        edges = frozenset((0, o, 1, i) for o, i in self.edges)
        return Graph((self.lower, self.upper), edges, tuple(ins), tuple(outs))


@dataclass(frozen=True)
class Relation:
    name: str
    terms: tuple          # ((Fraction, RelationTerm), ...)


@dataclass(frozen=True)
class Presentation:
    name: str
    kind: str             # 'operad' or 'properad'
    generators: tuple
    relations: tuple
    max_genus: int = 0

    @property
    def gens(self):
        return {g.name: g for g in self.generators}

    def graph_gens(self, shift=0):
        return {g.name: g.as_gen(shift) for g in self.generators}

    def generator(self, name):
        return self.gens[name]


# -- DSL ----------------------------------------------------------------------

_GEN_RE = re.compile(
    r"^gen\s+(?P<name>[A-Za-z_][\w]*)\s*:\s*in\s*=\s*(?P<m>\d+)\s+out\s*=\s*(?P<n>\d+)"
    r"(?:\s+deg\s*=\s*(?P<deg>-?\d+))?(?:\s+sym\s*=\s*(?P<sym>\S+))?\s*$")
_TERM_START = re.compile(r"\s*(?P<sign>[+-])?\s*(?P<coeff>\d+(?:/\d+)?)\s*\*\s*term\s*\(")
_KV = re.compile(r"\s*(\w+)\s*=\s*")


def _parse_sym(text, lineno):
    if text is None:
        return "regular", "regular"
    if text in _SYMS:
        return text, text
    m = re.match(r"^in:(\w+),out:(\w+)$", text)
    if m and m.group(1) in _SYMS and m.group(2) in _SYMS:
        return m.group(1), m.group(2)
    raise SymmetryError(f"unknown symmetry {text!r}", lineno)


def _parse_list(s, pos, lineno, col0):
    """Parse ``[a, b, ...]`` or ``[(a,b), ...]`` of integers starting at pos."""
    if pos >= len(s) or s[pos] != "[":
        raise ParseError("expected '['", lineno, col0 + pos + 1)
    depth, end = 0, pos
    for end in range(pos, len(s)):
        if s[end] == "[":
            depth += 1
        elif s[end] == "]":
            depth -= 1
            if depth == 0:
                break
    else:
        raise ParseError("unterminated list", lineno, col0 + pos + 1)
    body = s[pos + 1:end].strip()
    items = []
    if body:
        if body.startswith("("):
            for m in re.finditer(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", body):
                items.append((int(m.group(1)), int(m.group(2))))
            if re.sub(r"\(\s*\d+\s*,\s*\d+\s*\)|[\s,]", "", body):
                raise ParseError(f"bad pair list [{body}]", lineno, col0 + pos + 1)
        else:
            try:
                items = [int(x) for x in body.split(",")]
            except ValueError:
                raise ParseError(f"bad integer list [{body}]", lineno, col0 + pos + 1) from None
    return items, end + 1


def _parse_term_body(s, pos, lineno, col0):
    args = {}
    while True:
        m = _KV.match(s, pos)
        if not m:
            raise ParseError("expected key=value in term(...)", lineno, col0 + pos + 1)
        key = m.group(1)
        pos = m.end()
        if key in ("lower", "upper", "vertex"):
            m2 = re.compile(r"([A-Za-z_]\w*)").match(s, pos)
            if not m2:
                raise ParseError(f"expected generator name after {key}=", lineno, col0 + pos + 1)
            args[key] = m2.group(1)
            pos = m2.end()
        elif key in ("edges", "in", "out"):
            args[key], pos = _parse_list(s, pos, lineno, col0)
        else:
            raise ParseError(f"unknown term field {key!r}", lineno, col0 + pos + 1)
        while pos < len(s) and s[pos] == " ":
            pos += 1
        if pos < len(s) and s[pos] == ",":
            pos += 1
            continue
        if pos < len(s) and s[pos] == ")":
            return args, pos + 1
        raise ParseError("expected ',' or ')' in term(...)", lineno, col0 + pos + 1)


def _build_term(args, gens, lineno, col):
    if "vertex" in args or "lower" not in args or "upper" not in args:
        raise NonQuadraticRelation("every relation term must have exactly two vertices", lineno, col)
    for k in ("lower", "upper"):
        if args[k] not in gens:
            raise ParseError(f"unknown generator {args[k]!r}", lineno, col)
    lo, up = gens[args["lower"]], gens[args["upper"]]
    edges = tuple((o - 1, i - 1) for o, i in args.get("edges", []))
    if not edges:
        raise ParseError("a relation term needs at least one internal edge", lineno, col)
    outs_used = [o for o, _ in edges]
    ins_used = [i for _, i in edges]
    if len(set(outs_used)) != len(outs_used) or len(set(ins_used)) != len(ins_used):
        raise ParseError("edge slots used twice", lineno, col)
    for o, i in edges:
        if not (0 <= o < lo.n and 0 <= i < up.m):
            raise ParseError(f"edge ({o + 1},{i + 1}) out of range", lineno, col)
    term = RelationTerm(lo.name, up.name, edges, tuple(args.get("in", [])), tuple(args.get("out", [])))
    in_slots, out_slots = term.free_slots(gens)
    if sorted(term.ins) != list(range(1, len(in_slots) + 1)):
        raise ParseError(f"in= must be a permutation of 1..{len(in_slots)}", lineno, col)
    if sorted(term.outs) != list(range(1, len(out_slots) + 1)):
        raise ParseError(f"out= must be a permutation of 1..{len(out_slots)}", lineno, col)
    return term


def _parse_relation(line, lineno, gens):
    m = re.match(r"^rel\s+([A-Za-z_][\w-]*)\s*=\s*", line)
    if not m:
        raise ParseError("expected 'rel <name> = ...'", lineno, 1)
    name = m.group(1)
    pos = m.end()
    terms = []
    while pos < len(line):
        tm = _TERM_START.match(line, pos)
        if not tm:
            rest = line[pos:].strip()
            if not rest:
                break
            if re.match(r"[+-]?\s*\d+(/\d+)?\s*\*\s*\w+\s*\(", line[pos:].lstrip()):
                raise NonQuadraticRelation("only term(...) summands are allowed", lineno, pos + 1)
            raise ParseError(f"unexpected text {rest[:20]!r}", lineno, pos + 1)
        if terms and tm.group("sign") is None:
            raise ParseError("missing '+' or '-' between terms", lineno, pos + 1)
        coeff = parse_rational(tm.group("coeff"))
        if tm.group("sign") == "-":
            coeff = -coeff
        col = pos + 1
        args, pos = _parse_term_body(line, tm.end(), lineno, 0)
        terms.append((coeff, _build_term(args, gens, lineno, col)))
    if not terms:
        raise ParseError("relation without terms", lineno, 1)
    biar = {t.biarity(gens) for _, t in terms}
    if len(biar) != 1:
        raise RelationBiarityMismatch(f"relation {name} mixes biarities {sorted(biar)}", lineno, 1)
    return Relation(name, tuple(terms))


def parse_presentation(text):
    """Parse the presentation DSL, or return a bundled presentation by name."""
    if text.strip() in BUILTINS:
        return BUILTINS[text.strip()]()
    kind = name = None
    gens = {}
    rels = []
    max_genus = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        line = line.strip()
        head = line.split(None, 1)[0]
        if head in ("operad", "properad"):
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"expected '{head} <name>'", lineno, 1)
            kind, name = head, parts[1]
        elif head == "gen":
            m = _GEN_RE.match(line)
            if not m:
                raise ParseError("expected 'gen <name> : in=<m> out=<n> deg=<d> sym=<...>'", lineno, 1)
            si, so = _parse_sym(m.group("sym"), lineno)
            g = Generator(m.group("name"), int(m.group("m")), int(m.group("n")),
                          int(m.group("deg") or 0), si, so)
            if g.name in gens:
                raise ParseError(f"duplicate generator {g.name}", lineno, 1)
            check_symmetry_action(g)
            gens[g.name] = g
        elif head == "rel":
            rels.append(_parse_relation(line, lineno, gens))
        elif head == "maxgenus":
            try:
                max_genus = int(line.split()[1])
            except (IndexError, ValueError):
                raise ParseError("expected 'maxgenus <int>'", lineno, 1) from None
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, 1)
    if kind is None:
        raise ParseError("missing 'operad <name>' or 'properad <name>' header", 1, 1)
    if kind == "operad":
        for g in gens.values():
            if g.n != 1:
                raise PresentationError(f"operad generator {g.name} must have one output")
        if max_genus not in (None, 0):
            raise PresentationError("operads have genus 0")
        max_genus = 0
    elif max_genus is None:
        max_genus = 1
    return Presentation(name, kind, tuple(gens.values()), tuple(rels), max_genus)


def _fmt_term(t):
    edges = ",".join(f"({o + 1},{i + 1})" for o, i in t.edges)
    ins = ",".join(map(str, t.ins))
    outs = ",".join(map(str, t.outs))
    return f"term(lower={t.lower}, upper={t.upper}, edges=[{edges}], in=[{ins}], out=[{outs}])"


def format_presentation(p):
    lines = [f"{p.kind} {p.name}"]
    if p.kind == "properad":
        lines.append(f"maxgenus {p.max_genus}")
    for g in p.generators:
        lines.append(f"gen {g.name} : in={g.m} out={g.n} deg={g.degree} sym={g.sym}")
    for r in p.relations:
        parts = []
        for k, (c, t) in enumerate(r.terms):
            sign = "-" if c < 0 else "+"
            body = f"{fmt_rational(abs(c))} * {_fmt_term(t)}"
            parts.append(("-" if c < 0 else "") + body if k == 0 else f"{sign} {body}")
        lines.append(f"rel {r.name} = " + " ".join(parts))
    return "\n".join(lines) + "\n"


def load_presentation(name_or_path):
    if name_or_path in BUILTINS:
        return BUILTINS[name_or_path]()
    with open(name_or_path, encoding="utf-8") as fh:
        return parse_presentation(fh.read())


# -- bundled presentations ----------------------------------------------------

_ASSOC = """
operad assoc
gen mu : in=2 out=1 deg=0 sym=regular
rel assoc = 1 * term(lower=mu, upper=mu, edges=[(1,1)], in=[1,2,3], out=[1]) - 1 * term(lower=mu, upper=mu, edges=[(1,2)], in=[2,3,1], out=[1])
"""

_LIE = """
operad lie
gen br : in=2 out=1 deg=0 sym=sign
rel jacobi = 1 * term(lower=br, upper=br, edges=[(1,1)], in=[1,2,3], out=[1]) + 1 * term(lower=br, upper=br, edges=[(1,1)], in=[2,3,1], out=[1]) + 1 * term(lower=br, upper=br, edges=[(1,1)], in=[3,1,2], out=[1])
"""

_FROB = """
properad frob
maxgenus 1
gen mu : in=2 out=1 deg=0 sym=trivial
gen delta : in=1 out=2 deg=0 sym=trivial
rel assoc = 1 * term(lower=mu, upper=mu, edges=[(1,1)], in=[1,2,3], out=[1]) - 1 * term(lower=mu, upper=mu, edges=[(1,2)], in=[2,3,1], out=[1])
rel coassoc = 1 * term(lower=delta, upper=delta, edges=[(1,1)], in=[1], out=[3,1,2]) - 1 * term(lower=delta, upper=delta, edges=[(2,1)], in=[1], out=[1,2,3])
rel frobenius_left = 1 * term(lower=mu, upper=delta, edges=[(1,1)], in=[1,2], out=[1,2]) - 1 * term(lower=delta, upper=mu, edges=[(1,2)], in=[2,1], out=[2,1])
rel frobenius_right = 1 * term(lower=mu, upper=delta, edges=[(1,1)], in=[1,2], out=[1,2]) - 1 * term(lower=delta, upper=mu, edges=[(2,1)], in=[1,2], out=[1,2])
"""

_BILIE = """
properad bilie
maxgenus 1
gen br : in=2 out=1 deg=0 sym=sign
gen cobr : in=1 out=2 deg=0 sym=sign
rel jacobi = 1 * term(lower=br, upper=br, edges=[(1,1)], in=[1,2,3], out=[1]) + 1 * term(lower=br, upper=br, edges=[(1,1)], in=[2,3,1], out=[1]) + 1 * term(lower=br, upper=br, edges=[(1,1)], in=[3,1,2], out=[1])
rel cojacobi = 1 * term(lower=cobr, upper=cobr, edges=[(1,1)], in=[1], out=[3,1,2]) + 1 * term(lower=cobr, upper=cobr, edges=[(1,1)], in=[1], out=[1,2,3]) + 1 * term(lower=cobr, upper=cobr, edges=[(1,1)], in=[1], out=[2,3,1])
rel cocycle = 1 * term(lower=br, upper=cobr, edges=[(1,1)], in=[1,2], out=[1,2]) - 1 * term(lower=cobr, upper=br, edges=[(1,2)], in=[2,1], out=[2,1]) - 1 * term(lower=cobr, upper=br, edges=[(2,2)], in=[2,1], out=[1,2]) + 1 * term(lower=cobr, upper=br, edges=[(1,2)], in=[1,2], out=[2,1]) + 1 * term(lower=cobr, upper=br, edges=[(2,2)], in=[1,2], out=[1,2])
"""

_INVOLUTIVE = "rel involutive = 1 * term(lower=cobr, upper=br, edges=[(1,1),(2,2)], in=[1], out=[1])\n"


def _builtin(text):
    return lambda: parse_presentation(text)


BUILTINS = {
    "assoc": _builtin(_ASSOC),
    "lie": _builtin(_LIE),
    "frob": _builtin(_FROB),
    "bilie": _builtin(_BILIE),
    "bilie-diamond": _builtin(_BILIE.replace("properad bilie", "properad bilie-diamond") + _INVOLUTIVE),
}


# -- components ---------------------------------------------------------------

@dataclass
class FreeComponent:
    """Labelled graph basis of a free component, with its dimension."""

    biarity: tuple
    weight: int
    max_genus: int
    basis: list                       # Canonical (labelled) graphs
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {c.key: k for k, c in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def vector(self, graph, gens, coeff=1):
        """Coordinates of a labelled graph (with sign) in this basis."""
        c = canonicalize(graph, gens, labelled=True)
        if not c.sign:
            return {}
        return {self.index[c.key]: Fraction(coeff * c.sign)}


def _generator_component(gens_list, m, n):
    """Weight-one part: one basis graph per generator decoration."""
    return [g for g in gens_list if (g.m, g.n) == (m, n)]


def free_component(generators, m, n, w, max_genus=0, shift=0):
    """Weight-w, genus <= G part of the free properad in biarity (m, n).

    ``shift`` is added to generator degrees to get vertex parities (1 for the
    suspension sE).
    """
    if w < 1:
        raise ValueError("weight must be >= 1")
    gens = {g.name: g.as_gen(shift) for g in generators}
    basis = labelled_basis(gens, w, (m, n), max_genus)
    return FreeComponent((m, n), w, max_genus, basis)


def relabel_graph(graph, pin, pout):
    """Leg relabelling: new input leg k is old input leg pin[k]."""
    return Graph(graph.vertices, graph.edges,
                 tuple(graph.ins[pin[k]] for k in range(len(pin))),
                 tuple(graph.outs[pout[k]] for k in range(len(pout))))


def action_matrix(comp, gens, pin, pout):
    """Matrix (dict of columns) of a leg relabelling on a labelled component."""
    cols = []
    for c in comp.basis:
        cols.append(comp.vector(relabel_graph(c.graph, pin, pout), gens))
    return cols


def relation_space(p, biarity, shift=0, max_genus=None):
    """Span of all leg-relabellings of the relations, in the weight-2 basis.

    Returns (FreeComponent, list of sparse vectors spanning the space).
    """
    G = p.max_genus if max_genus is None else max_genus
    gens = p.graph_gens(shift)
    comp = free_component(p.generators, biarity[0], biarity[1], 2, G, shift)
    e = Echelon()
    m, n = biarity
    for rel in p.relations:
        if rel.terms[0][1].biarity(p.gens) != biarity:
            continue
        base = []
        for coeff, term in rel.terms:
            base.append((coeff, term.graph(p.gens)))
        if any(g.genus > G for _, g in base):
            continue
        for pin in itertools.permutations(range(m)):
            for pout in itertools.permutations(range(n)):
                v = {}
                for coeff, g in base:
                    for k, x in comp.vector(relabel_graph(g, pin, pout), gens, coeff).items():
                        v[k] = v.get(k, 0) + x
                e.add({k: x for k, x in v.items() if x})
    basis = [dict(row) for _, row in sorted(e.pivots.items())]
    return comp, basis


def ideal_component(p, m, n, w, max_genus=None, shift=0):
    """Spanning vectors of the weight-w piece of the relation ideal."""
    G = p.max_genus if max_genus is None else max_genus
    gens = p.graph_gens(shift)
    comp = free_component(p.generators, m, n, w, G, shift)
    rel_cache = {}
    rows = []
    for c in comp.basis:
        g = c.graph
        for u, v in collapsible_pairs(g):
            from .graphs import pair_subgraph
            sub = pair_subgraph(g, u, v, gens)
            b = sub.biarity
            if b not in rel_cache:
                rel_cache[b] = relation_space(p, b, shift, G)
            rcomp, rbasis = rel_cache[b]
            for r in rbasis:
                vec = {}
                for k, x in r.items():
                    h = substitute_pair(g, u, v, rcomp.basis[k].graph, gens)
                    if h.genus > G:
                        continue
                    for kk, y in comp.vector(h, gens, x).items():
                        vec[kk] = vec.get(kk, 0) + y
                vec = {k: x for k, x in vec.items() if x}
                if vec:
                    rows.append(vec)
    return comp, rows


def quotient_component(p, m, n, w, max_genus=None):
    """Basis (free-basis indices) and dimension of F(E)^(w)(m,n) / (R)^(w)."""
    if w == 1:
        comp = free_component(p.generators, m, n, 1, 0)
        return comp, list(range(comp.dim)), comp.dim
    comp, rows = ideal_component(p, m, n, w, max_genus)
    e = Echelon()
    for r in rows:
        e.add(r)
    basis = [k for k in range(comp.dim) if k not in e.pivots]
    return comp, basis, len(basis)
