"""Finite L-infinity algebras, Maurer-Cartan theory and polynomial forms.

Brackets l_k have degree 2 - k and are graded antisymmetric:
    l(.., x, y, ..) = -(-1)^{|x||y|} l(.., y, x, ..).
They are normalised so that the Maurer-Cartan series is sum_k l_k(tau^k)/k!
and twisting is l^tau_k(x) = sum_i l_{k+i}(tau^i, x)/i!.  Internally the
higher Jacobi identities are checked in the shifted picture: with
e_j = |x_j| - 1,

    Q_k(x_1..x_k) = (-1)^{k(k-1)/2 + sum_j (k-j)|x_j|} l_k(x_1..x_k)

is graded symmetric for the e-degrees and Q o Q = 0.  A dg Lie algebra is
the case l_1 = d, l_2 = [ , ], l_k = 0 for k > 2.

Elements are sparse dicts {basis index: Fraction}.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import CochainComplex, GradedVectorSpace, SparseMatrix, _iadd, \
    cohomology, format_terms, parse_complex, _split_terms

__all__ = [
    "LInftyAlgebra", "TableLInfty", "TwistedLInfty", "CdgaExtension",
    "LInftyCheck", "check_linfty", "check_filtration", "mc_residual", "twist",
    "gauge_act", "bch", "PolynomialForms", "extend_forms", "parse_linfty",
    "format_linfty", "DegreeError", "NonTerminating", "PolynomialDegreeOverflow",
    "koszul_sign", "antisym_sort", "element_degree",
]


class DegreeError(ValueError):
    pass


class NonTerminating(ArithmeticError):
    pass


class PolynomialDegreeOverflow(ArithmeticError):
    pass


def koszul_sign(parities, perm):
    """Sign of rearranging graded letters: new position k holds old perm[k]."""
    odd = [perm[k] for k in range(len(perm)) if parities[perm[k]] % 2]
    s = 1
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            if odd[a] > odd[b]:
                s = -s
    return s


def antisym_sort(idxs, degs):
    """Sort basis indices under graded antisymmetry.

    Returns (sign, sorted tuple); sign 0 when a repeated even element forces
    the bracket to vanish.
    """
    a = list(idxs)
    sign = 1
    for i in range(1, len(a)):
        j = i
        while j > 0 and a[j - 1] > a[j]:
            x, y = a[j - 1], a[j]
            sign = -sign * (-1 if degs[x] % 2 and degs[y] % 2 else 1)
            a[j - 1], a[j] = y, x
            j -= 1
    for i in range(1, len(a)):
        if a[i] == a[i - 1] and degs[a[i]] % 2 == 0:
            return 0, tuple(a)
    return sign, tuple(a)


def _qsign(degs_of_args):
    k = len(degs_of_args)
    e = k * (k - 1) // 2 + sum((k - 1 - j) * d for j, d in enumerate(degs_of_args))
    return -1 if e % 2 else 1


def element_degree(g, v):
    """Degree of a nonzero homogeneous element, else raise DegreeError."""
    ds = {g.degrees[i] for i in v}
    if len(ds) != 1:
        raise DegreeError("element is not homogeneous" if ds else "zero element has no degree")
    return ds.pop()


class LInftyAlgebra:
    """A finite-dimensional L-infinity algebra on the basis 0..dim-1.

    Subclasses implement :meth:`bracket_basis`.  ``weights`` give the
    filtration F_r = span{weight >= r}; when ``weight_graded`` is set the
    brackets are additive in weight and vanish above ``max_weight``.
    """

    def __init__(self, labels, degrees, weights=None, max_arity=2, name="",
                 weight_graded=False, max_weight=None):
        self.labels = list(labels)
        self.degrees = list(degrees)
        self.weights = list(weights) if weights is not None else [1] * len(self.labels)
        self.max_arity = max_arity
        self.name = name
        self.weight_graded = weight_graded
        self.max_weight = max_weight
        self._by_degree = {}
        for i, d in enumerate(self.degrees):
            self._by_degree.setdefault(d, []).append(i)
        self._index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def dim(self):
        return len(self.labels)

    def by_degree(self, d):
        return self._by_degree.get(d, [])

    def index(self, label):
        return self._index[label]

    def bracket_basis(self, idxs):
        raise NotImplementedError

    def bracket(self, *vecs):
        """l_k on arbitrary elements by multilinear expansion."""
        k = len(vecs)
        if k == 0 or k > self.max_arity:
            return {}
        out = {}
        items = [list(v.items()) for v in vecs]
        for combo in itertools.product(*items):
            idxs = tuple(i for i, _ in combo)
            if self.weight_graded and self.max_weight is not None and \
                    sum(self.weights[i] for i in idxs) > self.max_weight and k > 1:
                continue
            c = 1
            for _, x in combo:
                c *= x
            _iadd(out, self.bracket_basis(idxs), c)
        return out

    def Q(self, *vecs):
        """Shifted symmetric bracket Q_k (see module docstring)."""
        k = len(vecs)
        out = {}
        items = [list(v.items()) for v in vecs]
        for combo in itertools.product(*items):
            idxs = tuple(i for i, _ in combo)
            c = _qsign([self.degrees[i] for i in idxs])
            for _, x in combo:
                c *= x
            _iadd(out, self.bracket_basis(idxs), c)
        return out

    def differential_matrix(self, d):
        """Matrix of l_1 from degree d to degree d + 1."""
        src = self.by_degree(d)
        tgt = {j: r for r, j in enumerate(self.by_degree(d + 1))}
        cols = []
        for i in src:
            v = self.bracket_basis((i,))
            col = {}
            for j, x in v.items():
                if j not in tgt:
                    raise DegreeError(f"l_1 of basis {self.labels[i]!r} leaves degree {d + 1}")
                col[tgt[j]] = x
            cols.append(col)
        return SparseMatrix.from_columns(len(tgt), cols)

    def complex(self, degrees=None):
        if degrees is None:
            degrees = sorted(self._by_degree)
        degrees = sorted(set(degrees))
        comps = {d: [self.labels[i] for i in self.by_degree(d)] for d in
                 range(min(degrees) - 1, max(degrees) + 2)}
        space = GradedVectorSpace(comps)
        diffs = {}
        for d in range(min(degrees) - 1, max(degrees) + 1):
            if space.dim(d) and space.dim(d + 1):
                diffs[d] = self.differential_matrix(d)
        return CochainComplex(space, diffs, name=self.name)

    def cohomology(self, degrees, representatives=False):
        return cohomology(self.complex(degrees), degrees, representatives)


class TableLInfty(LInftyAlgebra):
    """L-infinity algebra given by bracket tables on sorted basis tuples."""

    def __init__(self, labels, degrees, weights=None, max_arity=2, name="",
                 weight_graded=False, max_weight=None):
        super().__init__(labels, degrees, weights, max_arity, name, weight_graded, max_weight)
        self.tables = {k: {} for k in range(1, max_arity + 1)}

    def set_bracket(self, idxs, vec):
        k = len(idxs)
        if k not in self.tables:
            raise ValueError(f"bracket arity {k} exceeds the declared maximum {self.max_arity}")
        vec = {j: Fraction(x) for j, x in vec.items() if x}
        want = sum(self.degrees[i] for i in idxs) + 2 - k
        for j in vec:
            if self.degrees[j] != want:
                raise DegreeError(
                    f"l_{k}{tuple(self.labels[i] for i in idxs)} has a term of degree "
                    f"{self.degrees[j]}, expected {want}")
        sign, key = antisym_sort(idxs, self.degrees)
        if sign == 0:
            if vec:
                raise ValueError(f"l_{k}{tuple(self.labels[i] for i in idxs)} must vanish by antisymmetry")
            return
        vec = {j: sign * x for j, x in vec.items()}
        old = self.tables[k].get(key)
        if old is not None and old != vec:
            raise ValueError(f"conflicting values for l_{k}{tuple(self.labels[i] for i in key)}")
        if vec:
            self.tables[k][key] = vec

    def bracket_basis(self, idxs):
        k = len(idxs)
        t = self.tables.get(k)
        if not t:
            return {}
        sign, key = antisym_sort(idxs, self.degrees)
        if not sign:
            return {}
        v = t.get(key)
        if not v:
            return {}
        return v if sign == 1 else {j: -x for j, x in v.items()}

    @classmethod
    def dg_lie(cls, labels, degrees, d=None, bracket=None, weights=None, name=""):
        """Build from {label: {label: c}} differential and {(a, b): {label: c}} bracket."""
        g = cls(labels, degrees, weights, 2, name)
        ix = g._index
        for a, v in (d or {}).items():
            g.set_bracket((ix[a],), {ix[b]: c for b, c in v.items()})
        for (a, b), v in (bracket or {}).items():
            g.set_bracket((ix[a], ix[b]), {ix[c]: x for c, x in v.items()})
        return g


class TwistedLInfty(LInftyAlgebra):
    """g^tau: l^tau_k(x) = sum_i l_{k+i}(tau^i, x) / i!.

    ``curved`` is set when tau is not Maurer-Cartan; then l^tau_0 is the
    residual and the l^tau_k no longer satisfy the uncurved identities.
    """

    def __init__(self, base, tau):
        super().__init__(base.labels, base.degrees, base.weights, base.max_arity,
                         f"{base.name}^tau", base.weight_graded, base.max_weight)
        self.base = base
        self.tau = dict(tau)
        self.curvature = mc_residual(base, tau) if tau else {}
        self.curved = bool(self.curvature)
        self._cache = {}

    def bracket_basis(self, idxs):
        v = self._cache.get(idxs)
        if v is None:
            k = len(idxs)
            v = {}
            basis_args = [{i: Fraction(1)} for i in idxs]
            for i in range(0, self.base.max_arity - k + 1):
                if i and not self.tau:
                    break
                term = self.base.bracket(*([self.tau] * i + basis_args))
                _iadd(v, term, Fraction(1, math.factorial(i)))
            self._cache[idxs] = v
        return v


def twist(g, tau):
    """Twisted algebra; check ``.curved`` before relying on its identities."""
    if tau:
        element_degree(g, tau) == 1 or _raise(DegreeError("twisting element must have degree 1"))
    return TwistedLInfty(g, tau)


def _raise(e):
    raise e


def mc_residual(g, tau):
    """sum_{k>=1} l_k(tau^k)/k!, exact."""
    if not tau:
        return {}
    if element_degree(g, tau) != 1:
        raise DegreeError("Maurer-Cartan elements have degree 1")
    out = {}
    for k in range(1, g.max_arity + 1):
        _iadd(out, g.bracket(*([tau] * k)), Fraction(1, math.factorial(k)))
    return out


# -- identity checks ----------------------------------------------------------

@dataclass
class LInftyCheck:
    ok: bool
    kind: str = ""
    arity: int = 0
    witness: tuple = ()
    value: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _unshuffles(n, i):
    for first in itertools.combinations(range(n), i):
        rest = tuple(k for k in range(n) if k not in first)
        yield first + rest


def jacobiator(g, idxs):
    """J_n on basis elements in the shifted picture; zero iff the identity holds."""
    n = len(idxs)
    e = [g.degrees[i] - 1 for i in idxs]
    args = [{i: Fraction(1)} for i in idxs]
    out = {}
    for i in range(1, n + 1):
        j = n - i + 1
        if i > g.max_arity or j > g.max_arity:
            continue
        for perm in _unshuffles(n, i):
            s = koszul_sign(e, perm)
            inner = g.Q(*[args[p] for p in perm[:i]])
            if not inner:
                continue
            _iadd(out, g.Q(inner, *[args[p] for p in perm[i:]]), s)
    return out


def check_linfty(g, max_arity=None, indices=None):
    """Exact check of antisymmetry and the generalized Jacobi identities.

    Runs over all basis tuples (or those drawn from ``indices``).  Returns an
    :class:`LInftyCheck`; the first failure carries a witness.
    """
    K = g.max_arity if max_arity is None else max_arity
    idx = list(range(g.dim)) if indices is None else sorted(indices)
    degs = g.degrees
    present = set(g._by_degree)
    W = g.max_weight if g.weight_graded else None

    def too_heavy(t):
        return W is not None and len(t) > 1 and sum(g.weights[i] for i in t) > W

    # antisymmetry on adjacent swaps
    for k in range(2, K + 1):
        for t in itertools.combinations_with_replacement(idx, k):
            if too_heavy(t) or (sum(degs[i] for i in t) + 2 - k) not in present:
                continue
            base = g.bracket_basis(t)
            for p in range(k - 1):
                if t[p] == t[p + 1]:
                    if degs[t[p]] % 2 == 0 and base:
                        return LInftyCheck(False, "antisymmetry", k, tuple(g.labels[i] for i in t), base)
                    continue
                s = list(t)
                s[p], s[p + 1] = s[p + 1], s[p]
                other = g.bracket_basis(tuple(s))
                sign = -1 if degs[t[p]] % 2 and degs[t[p + 1]] % 2 else 1
                want = {j: -sign * x for j, x in base.items()}
                if other != want:
                    return LInftyCheck(False, "antisymmetry", k, tuple(g.labels[i] for i in s),
                                       _diff(other, want))
    for n in range(1, K + 2):
        for t in itertools.combinations_with_replacement(idx, n):
            if too_heavy(t) or (sum(degs[i] for i in t) + 3 - n) not in present:
                continue
            v = jacobiator(g, t)
            if v:
                return LInftyCheck(False, "jacobi", n, tuple(g.labels[i] for i in t), v)
    return LInftyCheck(True)


def _diff(a, b):
    out = dict(a)
    _iadd(out, b, -1)
    return out


def check_filtration(g, max_arity=None):
    """Scan brackets: output weight >= max input weight.  Returns violations."""
    K = g.max_arity if max_arity is None else max_arity
    bad = []
    if isinstance(g, TableLInfty):
        entries = [(t, v) for k in g.tables for t, v in g.tables[k].items() if k <= K]
    else:
        entries = []
        for k in range(1, K + 1):
            for t in itertools.combinations_with_replacement(range(g.dim), k):
                v = g.bracket_basis(t)
                if v:
                    entries.append((t, v))
    for t, v in entries:
        w = max(g.weights[i] for i in t)
        for j in v:
            if g.weights[j] < w:
                bad.append((tuple(g.labels[i] for i in t), g.labels[j]))
    return bad


# -- gauge action and BCH -----------------------------------------------------

def gauge_act(g, lam, tau, max_terms=64):
    """exp(lam) . tau = tau + sum_k ad_lam^k([lam, tau] - d lam)/(k+1)!.

    Requires l_k = 0 for k > 2.  The series must terminate (nilpotency)
    within ``max_terms`` iterations, otherwise NonTerminating is raised.
    """
    if g.max_arity > 2:
        raise ValueError("gauge action is implemented for dg Lie algebras")
    if not lam:
        return dict(tau)
    if element_degree(g, lam) != 0:
        raise DegreeError("gauge parameters have degree 0")
    term = g.bracket(lam, tau) if tau else {}
    _iadd(term, g.bracket(lam), -1)
    out = dict(tau)
    k = 0
    while term:
        if k >= max_terms:
            raise NonTerminating(f"gauge series did not terminate after {max_terms} terms")
        _iadd(out, term, Fraction(1, math.factorial(k + 1)))
        term = g.bracket(lam, term)
        k += 1
    return out


_BCH_MAX = 4


def bch(g, x, y, order=_BCH_MAX):
    """Truncated Baker-Campbell-Hausdorff product of degree-0 elements."""
    if order < 1 or order > _BCH_MAX:
        raise ValueError(f"BCH order must be between 1 and {_BCH_MAX}")
    nil = getattr(g, "nilpotency", None)
    if nil is not None and order > nil + 1:
        raise ValueError(f"order {order} exceeds the nilpotency depth {nil}")
    for v in (x, y):
        if v and element_degree(g, v) != 0:
            raise DegreeError("BCH needs degree-0 elements")
    br = g.bracket
    out = dict(x)
    _iadd(out, y)
    if order >= 2:
        xy = br(x, y)
        _iadd(out, xy, Fraction(1, 2))
        if order >= 3:
            _iadd(out, br(x, xy), Fraction(1, 12))
            _iadd(out, br(y, xy), Fraction(-1, 12))
            if order >= 4:
                _iadd(out, br(y, br(x, xy)), Fraction(-1, 24))
    return out


# -- cdga extensions ----------------------------------------------------------

class PolynomialForms:
    """Polynomial de Rham forms on the n-simplex, polynomial degree <= D.

    Monomials are (exponents, dts) with dts a sorted tuple of indices of the
    dt_i present.  Coordinates t_1..t_n (vertex 0 is the origin, vertex k
    has t_k = 1).  The polynomial degree counts each t and each dt once.
    """

    def __init__(self, n, D=8):
        if n < 0:
            raise ValueError("simplicial level must be >= 0")
        self.n, self.D = n, D
        mons = []
        for tot in range(D + 1):
            for k in range(min(n, tot) + 1):
                for dts in itertools.combinations(range(n), k):
                    for exps in _compositions(tot - k, n):
                        mons.append((exps, dts))
        self.monomials = sorted(mons, key=lambda m: (self.poly_degree(m), len(m[1]), m[1], m[0]))

    @staticmethod
    def poly_degree(m):
        return sum(m[0]) + len(m[1])

    @staticmethod
    def degree(m):
        return len(m[1])

    def unit(self):
        return ((0,) * self.n, ())

    def t(self, i):
        e = [0] * self.n
        e[i] = 1
        return (tuple(e), ())

    def dt(self, i):
        return ((0,) * self.n, (i,))

    def product(self, a, b):
        """(coefficient, monomial) or (0, None)."""
        dts = a[1] + b[1]
        if len(set(dts)) != len(dts):
            return 0, None
        perm = sorted(range(len(dts)), key=lambda k: dts[k])
        s = koszul_sign([1] * len(dts), perm)
        m = (tuple(x + y for x, y in zip(a[0], b[0])), tuple(sorted(dts)))
        return s, m

    def d(self, a):
        out = {}
        for i in range(self.n):
            e = a[0][i]
            if e == 0 or i in a[1]:
                continue
            exps = list(a[0])
            exps[i] -= 1
            s, m = self.product(((0,) * self.n, (i,)), (tuple(exps), a[1]))
            out[m] = out.get(m, 0) + s * e
        return {m: c for m, c in out.items() if c}

    def evaluate(self, a, vertex):
        """Value of a monomial at a vertex of the simplex (dt's vanish)."""
        if a[1]:
            return 0
        pt = [0] * self.n
        if vertex:
            pt[vertex - 1] = 1
        v = 1
        for x, e in zip(pt, a[0]):
            v *= x ** e
        return v


def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class CdgaExtension(LInftyAlgebra):
    """g (x) A for a finite cdga A given by a monomial basis.

    The cdga protocol: ``monomials``, ``degree(m)``, ``product(a, b)`` ->
    (coeff, m) with m None for zero, ``d(m)`` -> dict, ``poly_degree(m)`` and
    ``D`` for overflow detection.  Brackets:
        l_k(x_1 a_1, ..., x_k a_k) = +-l_k(x_1..x_k) a_1...a_k
        l_1(x a) = l_1(x) a + (-1)^{|x|} x da
    with the Koszul sign of moving each a_j past the later x's.
    """

    def __init__(self, g, cdga, monomials=None, overflow="raise"):
        mons = list(cdga.monomials if monomials is None else monomials)
        labels, degs, wts = [], [], []
        for i in range(g.dim):
            for m in mons:
                labels.append((g.labels[i], m))
                degs.append(g.degrees[i] + cdga.degree(m))
                wts.append(g.weights[i])
        super().__init__(labels, degs, wts, g.max_arity, f"{g.name}(x)A",
                         g.weight_graded, g.max_weight)
        self.g, self.A = g, cdga
        self.mons = mons
        self.mon_index = {m: k for k, m in enumerate(mons)}
        self.overflow = overflow
        self._cache = {}

    def split(self, idx):
        return divmod(idx, len(self.mons))

    def join(self, i, m):
        k = self.mon_index.get(m)
        if k is None:
            if self.overflow == "raise":
                raise PolynomialDegreeOverflow(f"monomial {m!r} is outside the truncation")
            return None
        return i * len(self.mons) + k

    def embed(self, v, m):
        """x (x) m for an element x of g."""
        out = {}
        for i, c in v.items():
            j = self.join(i, m)
            if j is not None:
                out[j] = c
        return out

    def component(self, v, m):
        """Coefficient of the monomial m: an element of g."""
        k = self.mon_index[m]
        n = len(self.mons)
        return {i // n: c for i, c in v.items() if i % n == k}

    def bracket_basis(self, idxs):
        v = self._cache.get(idxs)
        if v is not None:
            return v
        parts = [self.split(i) for i in idxs]
        xs = [p[0] for p in parts]
        ms = [self.mons[p[1]] for p in parts]
        A = self.A
        out = {}
        sign = 1
        for j in range(len(xs)):
            if A.degree(ms[j]) % 2:
                for l in range(j + 1, len(xs)):
                    if self.g.degrees[xs[l]] % 2:
                        sign = -sign
        coeff, prod = 1, ms[0]
        for m in ms[1:]:
            c, prod = A.product(prod, m)
            coeff *= c
            if not coeff:
                break
        if coeff:
            inner = self.g.bracket_basis(tuple(xs))
            if inner:
                if A.poly_degree(prod) > A.D and self.overflow == "raise":
                    raise PolynomialDegreeOverflow(f"product exceeds polynomial degree {A.D}")
                for i, c in inner.items():
                    j = self.join(i, prod)
                    if j is not None:
                        out[j] = out.get(j, 0) + sign * coeff * c
        if len(idxs) == 1:
            x, m = xs[0], ms[0]
            s = -1 if self.g.degrees[x] % 2 else 1
            for dm, c in A.d(m).items():
                j = self.join(x, dm)
                if j is not None:
                    out[j] = out.get(j, 0) + s * c
        out = {j: Fraction(c) for j, c in out.items() if c}
        self._cache[idxs] = out
        return out


def extend_forms(g, n, D=8, overflow="raise"):
    """g (x) Omega_n with polynomial degree <= D."""
    if n == 0:
        return g
    return CdgaExtension(g, PolynomialForms(n, D), overflow=overflow)


def evaluate_at_vertex(ext, v, vertex):
    """Image of an element of g (x) Omega_n under evaluation at a vertex."""
    out = {}
    for idx, c in v.items():
        i, k = ext.split(idx)
        val = ext.A.evaluate(ext.mons[k], vertex)
        if val:
            out[i] = out.get(i, 0) + c * val
    return {i: c for i, c in out.items() if c}


# -- text format --------------------------------------------------------------

_BRACKET = re.compile(r"^bracket\s+(\d+)\s*:\s*\(([^)]*)\)\s*->\s*(.*)$")


def parse_linfty(text, name=None):
    """Parse a complex block plus ``bracket k: (a,b,..) -> ...`` lines."""
    cx, extra = parse_complex(text)
    labels, degs, wts = [], [], []
    weights = getattr(cx, "weights", {})
    for d in cx.space.degrees():
        for lab in cx.space.basis(d):
            labels.append(lab)
            degs.append(d)
            wts.append(weights.get(lab, 1))
    brackets = []
    K = 1
    for lineno, line in extra:
        m = _BRACKET.match(line)
        if not m:
            raise ValueError(f"line {lineno}: unrecognised line {line!r}")
        k = int(m.group(1))
        args = tuple(a.strip() for a in m.group(2).split(",") if a.strip())
        if len(args) != k or k < 2:
            raise ValueError(f"line {lineno}: bracket {k} needs {k} arguments (k >= 2)")
        brackets.append((lineno, args, _split_terms(m.group(3))))
        K = max(K, k)
    g = TableLInfty(labels, degs, wts, max(K, 2), name or cx.name)
    ix = g._index
    for d in cx.space.degrees():
        dm = cx.differential(d)
        src = cx.space.basis(d)
        tgt = cx.space.basis(d + 1)
        for j, col in enumerate(dm.columns()):
            if col:
                g.set_bracket((ix[src[j]],), {ix[tgt[r]]: c for r, c in col.items()})
    for lineno, args, terms in brackets:
        for a in args:
            if a not in ix:
                raise ValueError(f"line {lineno}: unknown basis label {a!r}")
        vec = {}
        for c, lab in terms:
            if lab not in ix:
                raise ValueError(f"line {lineno}: unknown basis label {lab!r}")
            vec[ix[lab]] = vec.get(ix[lab], 0) + c
        try:
            g.set_bracket(tuple(ix[a] for a in args), vec)
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return g


def format_linfty(g):
    lines = [f"complex {g.name or 'g'}"]
    for i, lab in enumerate(g.labels):
        lines.append(f"basis {lab} deg={g.degrees[i]} wt={g.weights[i]}")
    for k in sorted(g.tables):
        for t, v in sorted(g.tables[k].items()):
            rhs = format_terms((c, g.labels[j]) for j, c in sorted(v.items()))
            if k == 1:
                lines.append(f"d {g.labels[t[0]]} -> {rhs}")
            else:
                lines.append(f"bracket {k}: ({','.join(g.labels[i] for i in t)}) -> {rhs}")
    return "\n".join(lines) + "\n"
