"""Deformations over K[t]/(t^{n+1}), obstructions, gauge, CE algebras, oracles.

An order-k deformation of an MC element phi of g is xi = sum_{i=1..k} phi_i t^i
in g^phi (x) m_R, Maurer-Cartan modulo t^{k+1}.  The next coefficient solves

    l^phi_1(phi_{k+1}) = o,   o = - sum_{j>=2} 1/j! sum l^phi_j(phi_{i_1}, .., phi_{i_j})

over i_1 + .. + i_j = k + 1.  The right-hand side o is a twisted cocycle and
its class is the obstruction.

The Hochschild and Chevalley-Eilenberg oracles at the end work on structure
constants directly and share no code with the graph side.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import CohomologyReport, Echelon, SparseMatrix, _iadd, kernel_basis, rank, solve
from .linfty import CdgaExtension, LInftyAlgebra, element_degree, gauge_act, koszul_sign, \
    mc_residual, twist

__all__ = [
    "ArtinianScalars", "extend_scalars", "series", "coefficients", "DeformationState",
    "ObstructionClass", "lift_order", "lift_to", "lift_set_parametrize", "gauge_equivalent",
    "GaugeCertificate", "HochschildDGLA", "CEAlgebra", "ce_algebra", "mc_vs_ce_points",
    "hochschild_oracle", "ce_oracle", "OracleError", "InvalidState", "brute_weight_two",
]


class OracleError(ValueError):
    pass


class InvalidState(ValueError):
    pass


# -- Artinian scalars -----------------------------------------------------------

class ArtinianScalars:
    """K[t]/(t^{n+1}) (``unital=True``) or its maximal ideal m_R = (t).

    Satisfies the cdga protocol of :class:`linfty.CdgaExtension`; monomials
    are exponents of t, all in degree 0.
    """

    def __init__(self, n, unital=False):
        if n < 0:
            raise ValueError("modulus exponent must be >= 1")
        self.n, self.unital = n, unital
        self.D = n
        self.monomials = list(range(0 if unital else 1, n + 1))

    @property
    def modulus(self):
        return f"t^{self.n + 1}"

    @staticmethod
    def degree(m):
        return 0

    @staticmethod
    def poly_degree(m):
        return m

    def product(self, a, b):
        if a + b > self.n:
            return 0, None
        return 1, a + b

    @staticmethod
    def d(m):
        return {}


def extend_scalars(g, R):
    """g (x) R with R-multilinear brackets (R given as :class:`ArtinianScalars`)."""
    return CdgaExtension(g, R, overflow="truncate")


def series(ext, comps):
    """sum_i comps[i] t^i as an element of the extension."""
    out = {}
    for i, v in comps.items():
        if v:
            _iadd(out, ext.embed(v, i))
    return out


def coefficients(ext, v):
    out = {}
    for idx, c in v.items():
        i, k = ext.split(idx)
        out.setdefault(ext.mons[k], {})[i] = c
    return out


# -- lifting ----------------------------------------------------------------------

@dataclass
class DeformationState:
    """phi plus corrections phi_1..phi_k (elements of g), valid mod t^{k+1}."""

    g: LInftyAlgebra
    phi: dict
    corrections: list = field(default_factory=list)

    @property
    def order(self):
        return len(self.corrections)

    def twisted(self):
        if not hasattr(self, "_tw"):
            self._tw = twist(self.g, self.phi)
            if self._tw.curved:
                raise InvalidState("base element is not Maurer-Cartan")
        return self._tw

    def residual(self, order=None):
        """MC residual of the deformation in g^phi (x) m_R, R = K[t]/(t^{order+1})."""
        order = self.order if order is None else order
        if order == 0:
            return {}
        ext = extend_scalars(self.twisted(), ArtinianScalars(order))
        xi = series(ext, {i + 1: v for i, v in enumerate(self.corrections[:order])})
        return mc_residual(ext, xi) if xi else {}

    def check(self):
        return not self.residual()

    def total(self, R=None):
        """phi (x) 1 + sum phi_i t^i in g (x) R (unital)."""
        R = R or ArtinianScalars(self.order, unital=True)
        ext = extend_scalars(self.g, R)
        comps = {0: self.phi}
        comps.update({i + 1: v for i, v in enumerate(self.corrections) if i + 1 <= R.n})
        return ext, series(ext, comps)


@dataclass
class ObstructionClass:
    """Twisted degree-2 cocycle with a rank certificate of its class."""

    order: int
    representative: dict
    rank_boundaries: int
    rank_with: int

    @property
    def nonzero(self):
        return self.rank_with > self.rank_boundaries


def _obstruction(state):
    tw = state.twisted()
    k = state.order
    phis = {i + 1: v for i, v in enumerate(state.corrections)}
    o = {}
    for j in range(2, tw.max_arity + 1):
        for parts in _compositions(k + 1, j):
            vecs = [phis.get(i, {}) for i in parts]
            if all(vecs):
                _iadd(o, tw.bracket(*vecs), Fraction(-1, math.factorial(j)))
    return {i: x for i, x in o.items() if x}


def _compositions(total, parts):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _local(tw, deg, v):
    pos = {j: r for r, j in enumerate(tw.by_degree(deg))}
    return {pos[j]: x for j, x in v.items()}


def _global(tw, deg, v):
    idx = tw.by_degree(deg)
    return {idx[r]: x for r, x in v.items()}


def lift_order(state):
    """Extend a valid order-k state to order k+1, or return its obstruction."""
    if not state.check():
        raise InvalidState(f"state does not satisfy MC modulo t^{state.order + 1}")
    tw = state.twisted()
    o = _obstruction(state)
    if o and element_degree(tw, o) != 2:
        raise ArithmeticError("obstruction has the wrong degree")
    d2 = tw.differential_matrix(2) if tw.by_degree(2) and tw.by_degree(3) else None
    if o and d2 is not None:
        do = d2.apply(_local(tw, 2, o)) if o else {}
        if any(do.values()):
            raise ArithmeticError("obstruction is not a twisted cocycle")
    d1 = tw.differential_matrix(1) if tw.by_degree(1) and tw.by_degree(2) else \
        SparseMatrix(len(tw.by_degree(2)), len(tw.by_degree(1)), [])
    x = solve(d1, _local(tw, 2, o)) if o else {}
    if x is None:
        r0 = rank(d1)
        cols = d1.columns() + [_local(tw, 2, o)]
        r1 = rank(SparseMatrix.from_columns(d1.rows, cols))
        return ObstructionClass(state.order + 1, o, r0, r1)
    nxt = DeformationState(state.g, state.phi, state.corrections + [_global(tw, 1, x)])
    nxt._tw = tw
    if not nxt.check():
        raise ArithmeticError("lifted state fails the MC equation")
    return nxt


def lift_to(state, order):
    """Lift repeatedly; stops at the first obstruction."""
    while state.order < order:
        nxt = lift_order(state)
        if isinstance(nxt, ObstructionClass):
            return nxt
        state = nxt
    return state


def lift_set_parametrize(state, lift):
    """All lifts of ``state`` to the order of ``lift``: lift + Z^1 of g^phi.

    Returns a dict with the cocycle basis, the coboundary rank (gauge by
    degree-0 elements at the top order) and the dimensions.
    """
    tw = state.twisted()
    if lift.order != state.order + 1 or lift.corrections[:-1] != state.corrections:
        raise ValueError("lift does not extend the given state")
    n1 = len(tw.by_degree(1))
    d1 = tw.differential_matrix(1) if n1 and tw.by_degree(2) else SparseMatrix(0, n1, [])
    z = [_global(tw, 1, v) for v in kernel_basis(d1)] if n1 else []
    d0 = tw.differential_matrix(0) if tw.by_degree(0) and n1 else None
    b = rank(d0) if d0 is not None else 0
    return {"base": lift.corrections[-1], "cocycles": z, "torsor_dim": len(z),
            "coboundary_rank": b, "modulo_gauge": len(z) - b}


# -- gauge equivalence -----------------------------------------------------------

@dataclass
class GaugeCertificate:
    """Failure of the order-by-order gauge solve."""

    order: int
    residual: dict


def gauge_equivalent(ext, tau1, tau2):
    """Gauge element lam in (g (x) m_R)^0 with exp(lam).tau1 = tau2.

    ``ext`` is ``extend_scalars(h, ArtinianScalars(n))`` for a dg Lie h.
    At order j the unknowns are lam_j and the d-closed part of lam_{j-1}:
    lam_j enters the t^j coefficient through -d lam_j and a closed z t^{j-1}
    through [z, tau1_1]; every other term has order > j, so each step is a
    linear system.  Free variables are set to zero and earlier orders are
    not revisited.
    """
    h = ext.g
    n = ext.A.n
    deg0, deg1 = h.by_degree(0), h.by_degree(1)
    d0 = h.differential_matrix(0) if deg0 and deg1 else SparseMatrix(len(deg1), len(deg0), [])
    closed = [_global(h, 0, v) for v in kernel_basis(d0)] if deg0 else []
    row = {j: r for r, j in enumerate(deg1)}

    def coeff(v, j):
        return coefficients(ext, v).get(j, {})

    lam = {}
    for j in range(1, n + 1):
        base = gauge_act(ext, lam, tau1)
        rhs = dict(coeff(tau2, j))
        _iadd(rhs, coeff(base, j), -1)
        rhs = {i: x for i, x in rhs.items() if x}
        if not rhs:
            continue
        cols = [{r: -x for r, x in c.items()} for c in d0.columns()]
        if j >= 2:
            for z in closed:
                var = gauge_act(ext, _add(lam, ext.embed(z, j - 1)), tau1)
                delta = dict(coeff(var, j))
                _iadd(delta, coeff(base, j), -1)
                cols.append({row[i]: x for i, x in delta.items() if x})
        mat = SparseMatrix.from_columns(len(deg1), cols)
        x = solve(mat, {row[i]: c for i, c in rhs.items()})
        if x is None:
            return GaugeCertificate(j, rhs)
        nl = len(deg0)
        lam_j = {deg0[k]: c for k, c in x.items() if k < nl}
        _iadd(lam, ext.embed(lam_j, j))
        for k, c in x.items():
            if k >= nl:
                _iadd(lam, ext.embed(closed[k - nl], j - 1), c)
    if gauge_act(ext, lam, tau1) != {i: x for i, x in tau2.items() if x}:
        return GaugeCertificate(n, {})
    return lam


def _add(u, v):
    out = dict(u)
    _iadd(out, v)
    return out


# -- Hochschild dg Lie algebra ---------------------------------------------------

class HochschildDGLA(LInftyAlgebra):
    """Hom(A^{(x)p}, A) for p = 1..P with the Gerstenhaber bracket.

    X sits in degree 0; a p-ary map has degree p - 1.  The partial
    composition is f o g = sum_i (-1)^{i(|g|)} f(1^i (x) g (x) 1^{p-1-i})
    and [f, g] = f o g - (-1)^{|f||g|} g o f.  The differential is zero;
    twisting by an associative product gives the Hochschild differential.
    Basis elements are (output, inputs) elementary tensors.
    """

    def __init__(self, dim, max_arity):
        labels, degrees = [], []
        for p in range(1, max_arity + 1):
            for o in range(dim):
                for ins in itertools.product(range(dim), repeat=p):
                    labels.append((o, ins))
                    degrees.append(p - 1)
        super().__init__(labels, degrees, [d for d in degrees], 2, "Hoch")
        self.dim_x, self.P = dim, max_arity
        self._cache = {}

    def element(self, table):
        """{(o, ins): c} -> vector."""
        return {self.index(k): Fraction(c) for k, c in table.items() if c}

    def _circ(self, i, j):
        (of, insf), (og, insg) = self.labels[i], self.labels[j]
        p, q = len(insf), len(insg)
        if p + q - 1 > self.P:
            return {}
        out = {}
        for k in range(p):
            if insf[k] != og:
                continue
            s = -1 if (k * (q - 1)) % 2 else 1
            key = (of, insf[:k] + insg + insf[k + 1:])
            idx = self.index(key)
            out[idx] = out.get(idx, 0) + s
        return out

    def bracket_basis(self, idxs):
        if len(idxs) != 2:
            return {}
        v = self._cache.get(idxs)
        if v is None:
            i, j = idxs
            v = self._circ(i, j)
            s = -1 if (self.degrees[i] * self.degrees[j]) % 2 else 1
            _iadd(v, self._circ(j, i), -s)
            v = {k: Fraction(x) for k, x in v.items() if x}
            self._cache[idxs] = v
        return v


# -- Chevalley-Eilenberg algebra -------------------------------------------------

class CEAlgebra:
    """Free graded-commutative algebra on xi_a (degree 1 - |x_a|), word length <= D.

    Monomials are sorted tuples of generator indices (odd ones at most once).
    ``dgen[a]`` is d xi_a as {monomial: coeff}.
    """

    def __init__(self, degrees, D):
        self.degrees = list(degrees)
        self.D = D
        self.dgen = {}

    def mul(self, m1, m2):
        word = m1 + m2
        if len(word) > self.D:
            return 0, None
        perm = sorted(range(len(word)), key=lambda k: word[k])
        s = koszul_sign([self.degrees[a] for a in word], perm)
        m = tuple(word[k] for k in perm)
        for a, b in zip(m, m[1:]):
            if a == b and self.degrees[a] % 2:
                return 0, None
        return s, m

    def mono_degree(self, m):
        return sum(self.degrees[a] for a in m)

    def d(self, poly):
        """Derivation extension of ``dgen``."""
        out = {}
        for m, c in poly.items():
            pre = 0
            for k, a in enumerate(m):
                s = -1 if pre % 2 else 1
                for dm, x in self.dgen.get(a, {}).items():
                    s1, m1 = self.mul(m[:k], dm)
                    if not s1:
                        continue
                    s2, m2 = self.mul(m1, m[k + 1:])
                    if s2:
                        out[m2] = out.get(m2, 0) + c * s * s1 * s2 * x
                pre += self.degrees[a]
        return {m: x for m, x in out.items() if x}

    def monomials(self):
        """All monomials of word length <= D (odd generators at most once)."""
        out = [()]
        n = len(self.degrees)
        for k in range(1, self.D + 1):
            for m in itertools.combinations_with_replacement(range(n), k):
                if all(not (a == b and self.degrees[a] % 2) for a, b in zip(m, m[1:])):
                    out.append(m)
        return out

    def cochain_complex(self):
        """The algebra as a cochain complex, graded by monomial degree."""
        from .exactalg import CochainComplex, GradedVectorSpace
        comps = {}
        for m in self.monomials():
            comps.setdefault(self.mono_degree(m), []).append(m)
        space = GradedVectorSpace(comps)
        pos = {m: k for d in comps for k, m in enumerate(comps[d])}
        diffs = {}
        for d, ms in comps.items():
            if d + 1 not in comps:
                continue
            cols = []
            for m in ms:
                v = self.d({m: 1})
                if any(len(mm) > self.D for mm in v):
                    raise ArithmeticError("differential leaves the word-length bound")
                cols.append({pos[mm]: x for mm, x in v.items()})
            diffs[d] = SparseMatrix.from_columns(len(comps[d + 1]), cols)
        return CochainComplex(space, diffs, name="CE")

    def square_defects(self):
        """Generators with d^2 xi != 0."""
        bad = {}
        for a in range(len(self.degrees)):
            v = self.d(self.dgen.get(a, {}))
            if v:
                bad[a] = v
        return bad


def ce_algebra(g, D=None):
    """C*(g): d xi_a read off from the universal element U = sum x_i (x) xi_i.

    sum_a (-1)^{|x_a|} x_a (x) d xi_a = - sum_k 1/k! l_k(U, .., U), where
    l_k(x_1 a_1, .., x_k a_k) = eps l_k(x_1..x_k) a_1...a_k and eps is the
    Koszul sign of moving each a_j past the later x's.
    """
    K = g.max_arity
    D = D if D is not None else 2 * K
    degs = [1 - d for d in g.degrees]
    ce = CEAlgebra(degs, D)
    dgen = {}
    for k in range(1, K + 1):
        for idxs in itertools.product(range(g.dim), repeat=k):
            v = g.bracket_basis(idxs)
            if not v:
                continue
            eps = 0
            for j in range(k):
                for l in range(j + 1, k):
                    eps += degs[idxs[j]] * g.degrees[idxs[l]]
            s, m = ce.mul((), ())
            coeff, mono = 1, ()
            for a in idxs:
                c, mono = ce.mul(mono, (a,))
                coeff *= c
                if not coeff:
                    break
            if not coeff:
                continue
            for a, x in v.items():
                sa = -1 if g.degrees[a] % 2 else 1
                val = -sa * (-1 if eps % 2 else 1) * Fraction(coeff * x, math.factorial(k))
                t = dgen.setdefault(a, {})
                t[mono] = t.get(mono, 0) + val
    ce.dgen = {a: {m: x for m, x in t.items() if x} for a, t in dgen.items()}
    return ce


def mc_vs_ce_points(g, n=2, identification=None):
    """Compare MC(g (x) m_R) with Hom_cdga(C*(g), R), R = K[t]/(t^{n+1}).

    Variables c_{a,j} are the t^j-coefficients of the degree-one basis
    element x_a (respectively of f(xi_a)).  Returns a report with both
    equation systems and whether their reduced Groebner bases agree.
    ``identification`` optionally maps variable keys (a, j) to other keys on
    the CE side (negative control).
    """
    import sympy
    ones = g.by_degree(1)
    twos = g.by_degree(2)
    var = {(a, j): sympy.Symbol(f"c_{a}_{j}") for a in ones for j in range(1, n + 1)}
    ident = identification or {}

    def trunc(poly):
        return {j: e for j, e in poly.items() if j <= n}

    # MC side: coefficient of x_b t^j in sum_k 1/k! l_k(tau^k)
    mc = {(b, j): sympy.Integer(0) for b in twos for j in range(1, n + 1)}
    for k in range(1, g.max_arity + 1):
        for idxs in itertools.product(ones, repeat=k):
            v = g.bracket_basis(idxs)
            if not v:
                continue
            for js in itertools.product(range(1, n + 1), repeat=k):
                if sum(js) > n:
                    continue
                mon = sympy.Integer(1)
                for a, j in zip(idxs, js):
                    mon *= var[(a, j)]
                for b, x in v.items():
                    mc[(b, sum(js))] += sympy.Rational(x.numerator, x.denominator) * mon / math.factorial(k)
    # CE side: f(d xi_b) for |x_b| = 2 with f(xi_a) = sum_j c_{ident(a), j} t^j
    ce = ce_algebra(g)
    ceq = {(b, j): sympy.Integer(0) for b in twos for j in range(1, n + 1)}
    for b in twos:
        for mono, x in ce.dgen.get(b, {}).items():
            if any(a not in ones for a in mono):
                continue
            poly = {0: sympy.Integer(1)}
            for a in mono:
                new = {}
                for e, c in poly.items():
                    for j in range(1, n + 1):
                        if e + j <= n:
                            new[e + j] = new.get(e + j, 0) + c * var[ident.get((a, j), (a, j))]
                poly = new
            for e, c in trunc(poly).items():
                if e >= 1:
                    ceq[(b, e)] += sympy.Rational(x.numerator, x.denominator) * c
    eqs_mc = [sympy.expand(e) for _, e in sorted(mc.items()) if sympy.expand(e) != 0]
    eqs_ce = [sympy.expand(e) for _, e in sorted(ceq.items()) if sympy.expand(e) != 0]
    gens = [var[k] for k in sorted(var)]
    gb_mc = _groebner(eqs_mc, gens)
    gb_ce = _groebner(eqs_ce, gens)
    return {"variables": [str(v) for v in gens], "mc_equations": [str(e) for e in eqs_mc],
            "ce_equations": [str(e) for e in eqs_ce], "groebner_mc": gb_mc,
            "groebner_ce": gb_ce, "equal": gb_mc == gb_ce}


def _groebner(eqs, gens):
    import sympy
    if not eqs:
        return []
    if not gens:
        return ["1"] if any(eqs) else []
    gb = sympy.groebner(eqs, *gens, order="grevlex", domain="QQ")
    return sorted(str(p.as_expr()) for p in gb.polys)


# -- independent oracles ---------------------------------------------------------

def _mult(table, dim):
    """Structure constants as mu[i][j] = {k: c}."""
    mu = [[{} for _ in range(dim)] for _ in range(dim)]
    for (i, j), v in table.items():
        mu[i][j] = {k: Fraction(c) for k, c in v.items() if c}
    return mu


def _prod(mu, u, v):
    out = {}
    for i, a in u.items():
        for j, b in v.items():
            for k, c in mu[i][j].items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: x for k, x in out.items() if x}


def hochschild_oracle(table, dim, max_arity, min_arity=2):
    """Hochschild cohomology of an ungraded associative algebra with coefficients in itself.

    ``table[(i, j)] = {k: c}`` gives e_i e_j.  Cochains of arity p are maps
    A^{(x)p} -> A; the complex starts at ``min_arity`` (lower arities are
    dropped).  Betti numbers are returned for arities min_arity ..
    max_arity - 1, keyed by arity.
    """
    mu = _mult(table, dim)
    for i, j, k in itertools.product(range(dim), repeat=3):
        e = lambda a: {a: Fraction(1)}
        l = _prod(mu, _prod(mu, e(i), e(j)), e(k))
        r = _prod(mu, e(i), _prod(mu, e(j), e(k)))
        if l != r:
            raise OracleError(f"not associative on ({i},{j},{k})")

    def basis(p):
        return [(o, ins) for ins in itertools.product(range(dim), repeat=p) for o in range(dim)]

    def delta(p):
        src = basis(p)
        tgt = {b: r for r, b in enumerate(basis(p + 1))}
        cols = []
        for o, ins in src:
            # f = e_o (x) (e_ins)^*; (df)(a_0..a_p) on basis inputs
            col = {}

            def put(out_vec, args, s):
                for k, c in out_vec.items():
                    r = tgt[(k, args)]
                    col[r] = col.get(r, 0) + s * c
            for a0 in range(dim):          # a_0 f(a_1..a_p)
                put(_prod(mu, {a0: Fraction(1)}, {o: Fraction(1)}), (a0,) + ins, 1)
            for ap in range(dim):          # (-1)^{p+1} f(a_0..a_{p-1}) a_p
                put(_prod(mu, {o: Fraction(1)}, {ap: Fraction(1)}), ins + (ap,), (-1) ** (p + 1))
            for i in range(p):             # (-1)^{i+1} f(.., a_i a_{i+1}, ..)
                target = ins[i]
                for x, y in itertools.product(range(dim), repeat=2):
                    c = mu[x][y].get(target)
                    if c:
                        args = ins[:i] + (x, y) + ins[i + 1:]
                        put({o: c}, args, (-1) ** (i + 1))
            cols.append({r: x for r, x in col.items() if x})
        return SparseMatrix.from_columns(len(tgt), cols)

    return _betti_by_arity(delta, lambda p: len(basis(p)), min_arity, max_arity)


def _betti_by_arity(delta, dim, lo, hi):
    ranks = {p: rank(delta(p)) for p in range(lo, hi)}
    betti = {}
    for p in range(lo, hi):
        betti[p] = dim(p) - ranks[p] - ranks.get(p - 1, 0)
    return CohomologyReport(betti=betti, ranks=ranks)


def ce_oracle(table, dim, max_arity, min_arity=2):
    """Chevalley-Eilenberg cohomology of an ungraded Lie algebra, adjoint coefficients.

    ``table[(i, j)] = {k: c}`` gives [e_i, e_j] for i < j.  Cochains of
    arity p are alternating maps, basis (o, i_1 < .. < i_p).
    """
    br = [[{} for _ in range(dim)] for _ in range(dim)]
    for (i, j), v in table.items():
        v = {k: Fraction(c) for k, c in v.items() if c}
        br[i][j] = v
        br[j][i] = {k: -c for k, c in v.items()}
    for i, j, k in itertools.combinations(range(dim), 3):
        tot = {}
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for x, y in br[b][c].items():
                for z, w in br[a][x].items():
                    tot[z] = tot.get(z, 0) + y * w
        if any(tot.values()):
            raise OracleError(f"Jacobi fails on ({i},{j},{k})")

    def basis(p):
        return [(o, ins) for ins in itertools.combinations(range(dim), p) for o in range(dim)]

    def alt(vec_args):
        """Sort an argument tuple: (sign, sorted) or (0, None)."""
        args = list(vec_args)
        if len(set(args)) < len(args):
            return 0, None
        perm = sorted(range(len(args)), key=lambda k: args[k])
        s = koszul_sign([1] * len(args), perm)
        return s, tuple(args[k] for k in perm)

    def delta(p):
        src = basis(p)
        tgt = {b: r for r, b in enumerate(basis(p + 1))}
        cols = []
        for o, ins in src:
            col = {}
            for args in itertools.combinations(range(dim), p + 1):
                # sum_i (-1)^i [x_i, f(.. x_i hat ..)]
                for i in range(p + 1):
                    rest = args[:i] + args[i + 1:]
                    if rest == ins:
                        for k, c in br[args[i]][o].items():
                            r = tgt[(k, args)]
                            col[r] = col.get(r, 0) + (-1) ** i * c
                # sum_{i<j} (-1)^{i+j} f([x_i, x_j], ..)
                for i, j in itertools.combinations(range(p + 1), 2):
                    rest = args[:i] + args[i + 1:j] + args[j + 1:]
                    for k, c in br[args[i]][args[j]].items():
                        s, srt = alt((k,) + rest)
                        if s and srt == ins:
                            r = tgt[(o, args)]
                            col[r] = col.get(r, 0) + (-1) ** (i + j) * s * c
            cols.append({r: x for r, x in col.items() if x})
        return SparseMatrix.from_columns(len(tgt), cols)

    return _betti_by_arity(delta, lambda p: len(basis(p)), min_arity, max_arity)


# -- brute-force weight-two enumeration -------------------------------------------

def _brute_char(gen, p, side):
    sym = gen.sym_in if side == "in" else gen.sym_out
    if sym == "sign":
        s = 1
        for a, b in itertools.combinations(range(len(p)), 2):
            if p[a] > p[b]:
                s = -s
        return s
    return 1


def _brute_orbit(gl, gu, config):
    """Minimal encoding of a two-vertex configuration under slot symmetries.

    ``config`` is (edges, ins, outs): edges are (lower out, upper in), ins
    and outs list the (vertex, slot) of each global leg.  Returns (key,
    sign), or (key, 0) when a symmetry fixes the configuration with sign -1.
    """
    def perms(gen, side):
        k = gen.m if side == "in" else gen.n
        sym = gen.sym_in if side == "in" else gen.sym_out
        return [tuple(range(k))] if sym == "regular" else list(itertools.permutations(range(k)))

    edges, ins, outs = config
    best, signs = None, set()
    for li, lo, ui, uo in itertools.product(perms(gl, "in"), perms(gl, "out"),
                                            perms(gu, "in"), perms(gu, "out")):
        s = (_brute_char(gl, li, "in") * _brute_char(gl, lo, "out") *
             _brute_char(gu, ui, "in") * _brute_char(gu, uo, "out"))
        e2 = tuple(sorted((lo[o], ui[i]) for o, i in edges))
        i2 = tuple((v, (li if v == 0 else ui)[k]) for v, k in ins)
        o2 = tuple((v, (lo if v == 0 else uo)[k]) for v, k in outs)
        key = (e2, i2, o2)
        if best is None or key < best[0]:
            best, signs = (key, s), {s}
        elif key == best[0]:
            signs.add(s)
    return best[0], (best[1] if len(signs) == 1 else 0)


def _brute_configs(gl, gu, m, n, max_genus):
    for k in range(1, min(gl.n, gu.m) + 1):
        if k - 1 > max_genus:
            break
        for outs_used in itertools.combinations(range(gl.n), k):
            for ins_used in itertools.permutations(range(gu.m), k):
                edges = tuple(zip(outs_used, ins_used))
                free_in = [(0, i) for i in range(gl.m)] + [(1, i) for i in range(gu.m) if i not in ins_used]
                free_out = [(0, o) for o in range(gl.n) if o not in outs_used] + [(1, o) for o in range(gu.n)]
                if (len(free_in), len(free_out)) != (m, n):
                    continue
                for ins in itertools.permutations(free_in):
                    for outs in itertools.permutations(free_out):
                        yield edges, ins, outs


def brute_weight_two(p, m, n, max_genus=None):
    """Free and quotient dimensions of weight two in biarity (m, n), by brute force.

    Enumerates every lower/upper generator pair, every wiring and every
    labelling of the free legs, and reduces modulo slot symmetries by
    direct orbit computation; the quotient is taken by a dense rank of all
    leg relabellings of the relations.  Shares no code with the graph side.
    """
    G = p.max_genus if max_genus is None else max_genus
    gens = p.gens
    basis = {}
    for gl in p.generators:
        for gu in p.generators:
            for cfg in _brute_configs(gl, gu, m, n, G):
                key, s = _brute_orbit(gl, gu, cfg)
                if s:
                    basis.setdefault((gl.name, gu.name) + key, len(basis))
    index = {k: r for r, k in enumerate(sorted(basis))}
    rows = []
    for rel in p.relations:
        for pin in itertools.permutations(range(m)):
            for pout in itertools.permutations(range(n)):
                vec = {}
                ok = True
                for coeff, t in rel.terms:
                    gl, gu = gens[t.lower], gens[t.upper]
                    if len(t.edges) - 1 > G:
                        ok = False
                        break
                    free_in = [(0, i) for i in range(gl.m)] + \
                        [(1, i) for i in range(gu.m) if i not in {b for _, b in t.edges}]
                    free_out = [(0, o) for o in range(gl.n) if o not in {a for a, _ in t.edges}] + \
                        [(1, o) for o in range(gu.n)]
                    if (len(free_in), len(free_out)) != (m, n):
                        ok = False
                        break
                    ins = [None] * m
                    for slot, lab in zip(free_in, t.ins):
                        ins[pin.index(lab - 1)] = slot
                    outs = [None] * n
                    for slot, lab in zip(free_out, t.outs):
                        outs[pout.index(lab - 1)] = slot
                    key, s = _brute_orbit(gl, gu, (t.edges, tuple(ins), tuple(outs)))
                    if s:
                        r = index[(gl.name, gu.name) + key]
                        vec[r] = vec.get(r, 0) + coeff * s
                if ok:
                    rows.append({k: x for k, x in vec.items() if x})
    rows = [r for r in rows if r]
    rk = rank(SparseMatrix(len(rows), len(index), ((i, k, x) for i, r in enumerate(rows)
                                                  for k, x in r.items()))) if rows else 0
    return {"free": len(index), "quotient": len(index) - rk}
