"""Exact rational linear algebra, graded spaces and cochain complexes.

Everything here works over the rationals with ``fractions.Fraction``; there
is no tolerance parameter anywhere.  Sparse vectors are plain dicts mapping an
index (or any hashable label) to a nonzero coefficient.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = [
    "Q", "parse_rational", "fmt_rational", "SparseMatrix", "Echelon",
    "rank", "kernel_basis", "solve", "GradedVectorSpace", "CochainComplex",
    "CohomologyReport", "cohomology", "ComplexError", "parse_complex",
    "format_complex", "format_terms", "vadd", "vscale", "vsub",
]

Q = Fraction

_RAT = re.compile(r"^[+-]?\d+(/\d+)?$")


def parse_rational(s):
    """Parse ``p`` or ``p/q``; floats and exponents are refused."""
    s = s.strip()
    if not _RAT.match(s):
        raise ValueError(f"not an exact rational: {s!r}")
    r = Fraction(s)
    return r


def fmt_rational(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- sparse vectors -----------------------------------------------------------

def vadd(u, v, c=1):
    """Return u + c*v (new dict)."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vsub(u, v):
    return vadd(u, v, -1)


def vscale(u, c):
    if not c:
        return {}
    return {k: c * x for k, x in u.items()}


def _iadd(out, v, c=1):
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)


# -- matrices -----------------------------------------------------------------

class SparseMatrix:
    """Immutable sparse matrix stored as row -> {col: value}, zeros dropped."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows, cols, entries=()):
        self.rows = rows
        self.cols = cols
        data = {}
        if isinstance(entries, dict):
            entries = ((i, j, x) for i, row in entries.items() for j, x in row.items())
        for i, j, x in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            x = Fraction(x)
            if not x:
                continue
            row = data.setdefault(i, {})
            if j in row:
                raise ValueError(f"duplicate entry ({i},{j})")
            row[j] = x
        self._data = data

    @classmethod
    def from_dense(cls, rows):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        return cls(len(rows), ncols,
                   ((i, j, x) for i, r in enumerate(rows) for j, x in enumerate(r) if x))

    @classmethod
    def from_columns(cls, nrows, columns):
        """Build from a list of sparse column vectors {row: value}."""
        return cls(nrows, len(columns),
                   ((i, j, x) for j, col in enumerate(columns) for i, x in col.items()))

    @classmethod
    def identity(cls, n):
        return cls(n, n, ((i, i, 1) for i in range(n)))

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    def entries(self):
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield i, j, row[j]

    def row(self, i):
        return dict(self._data.get(i, {}))

    def row_dicts(self):
        return {i: dict(r) for i, r in self._data.items()}

    def columns(self):
        cols = [dict() for _ in range(self.cols)]
        for i, row in self._data.items():
            for j, x in row.items():
                cols[j][i] = x
        return cols

    @property
    def shape(self):
        return (self.rows, self.cols)

    def nnz(self):
        return sum(len(r) for r in self._data.values())

    def is_zero(self):
        return not self._data

    def to_dense(self):
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for i, j, x in self.entries():
            out[i][j] = x
        return out

    def transpose(self):
        return SparseMatrix(self.cols, self.rows, ((j, i, x) for i, j, x in self.entries()))

    def apply(self, v):
        """Matrix times sparse column vector {col: value}."""
        out = {}
        for i, row in self._data.items():
            s = 0
            for j, x in row.items():
                y = v.get(j)
                if y:
                    s += x * y
            if s:
                out[i] = s
        return out

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        odata = other._data
        out = {}
        for i, row in self._data.items():
            acc = {}
            for k, x in row.items():
                orow = odata.get(k)
                if orow:
                    _iadd(acc, orow, x)
            if acc:
                out[i] = acc
        return SparseMatrix(self.rows, other.cols, out)

    def __add__(self, other):
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        out = {i: dict(r) for i, r in self._data.items()}
        for i, r in other._data.items():
            acc = out.setdefault(i, {})
            _iadd(acc, r)
            if not acc:
                del out[i]
        return SparseMatrix(self.rows, self.cols, out)

    def __neg__(self):
        return SparseMatrix(self.rows, self.cols, ((i, j, -x) for i, j, x in self.entries()))

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.shape == other.shape
                and self._data == other._data)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.entries())))

    def permute(self, row_perm=None, col_perm=None):
        """Return P A Q^-1 where row i goes to row_perm[i], col j to col_perm[j]."""
        rp = row_perm or list(range(self.rows))
        cp = col_perm or list(range(self.cols))
        return SparseMatrix(self.rows, self.cols, ((rp[i], cp[j], x) for i, j, x in self.entries()))

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={self.nnz()})"


class Echelon:
    """Incremental row echelon form over Q.

    Pivot of a row is its smallest column key; pivot rows are normalised to 1
    at the pivot.  ``reduce`` returns the unique normal form of a vector modulo
    the span of the inserted rows (no pivot column survives), which is what
    quotient-space computations need.  Column keys only need to be comparable.
    """

    def __init__(self):
        self.pivots = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self):
        return len(self.pivots)

    def reduce(self, vec):
        v = dict(vec)
        piv = self.pivots
        heap = [k for k in v if k in piv]
        heapq.heapify(heap)
        # reduction only creates columns larger than the pivot being removed
        while heap:
            c = heapq.heappop(heap)
            x = v.get(c)
            if not x:
                continue
            for k, y in piv[c].items():
                old = v.get(k)
                if old is None:
                    v[k] = -x * y
                    if k in piv:
                        heapq.heappush(heap, k)
                else:
                    z = old - x * y
                    if z:
                        v[k] = z
                    else:
                        del v[k]
        return v

    def add(self, vec):
        """Insert a row; return True if it increased the rank."""
        v = self.reduce(vec)
        if not v:
            return False
        c = min(v)
        x = v[c]
        if x != 1:
            x = Fraction(x)
            v = {k: y / x for k, y in v.items()}
        self.pivots[c] = v
        return True

    def contains(self, vec):
        return not self.reduce(vec)

    def back_substituted(self):
        """Fully reduced rows: pivot col -> row with no other pivot columns."""
        out = {}
        for c in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[c])
            for k in sorted([k for k in row if k != c and k in out]):
                x = row.get(k)
                if x:
                    _iadd(row, out[k], -x)
            out[c] = row
        return out


def _matrix_echelon(m):
    e = Echelon()
    for i in sorted(m._data):
        e.add(m._data[i])
    return e


def rank(m):
    """Exact rank over Q."""
    if m.rows > m.cols:
        m = m.transpose()
    return _matrix_echelon(m).rank


def kernel_basis(m):
    """Basis of {v : m v = 0} as sparse dicts, one per free column."""
    e = _matrix_echelon(m)
    red = e.back_substituted()
    free = [j for j in range(m.cols) if j not in red]
    basis = []
    for f in free:
        v = {f: Fraction(1)}
        for c, row in red.items():
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def solve(m, b):
    """A particular solution of m x = b, or None if inconsistent.

    Deterministic: free variables are set to zero.
    """
    aug_cols = m.cols
    e = Echelon()
    for i in range(m.rows):
        row = dict(m._data.get(i, {}))
        bi = b.get(i)
        if bi:
            row[aug_cols] = bi
        if row:
            e.add(row)
    if aug_cols in e.pivots:
        return None
    red = e.back_substituted()
    x = {}
    for c, row in red.items():
        y = row.get(aug_cols)
        if y:
            x[c] = y
    return x


# -- graded spaces and complexes ----------------------------------------------

class ComplexError(ValueError):
    pass


@dataclass(frozen=True)
class GradedVectorSpace:
    """Degree -> ordered list of basis labels."""

    components: dict

    def __post_init__(self):
        for d, labels in self.components.items():
            if len(set(labels)) != len(labels):
                raise ValueError(f"duplicate basis labels in degree {d}")

    def dim(self, d):
        return len(self.components.get(d, ()))

    def degrees(self):
        return sorted(d for d, b in self.components.items() if b)

    def basis(self, d):
        return list(self.components.get(d, ()))

    def index(self, d, label):
        return self.components[d].index(label)

    def total_dim(self):
        return sum(len(b) for b in self.components.values())


class CochainComplex:
    """A graded space with differentials d_n : C^n -> C^{n+1}.

    Missing differentials are zero maps.
    """

    def __init__(self, space, differentials=None, name=""):
        self.space = space
        self.name = name
        self.d = {}
        for n, mat in (differentials or {}).items():
            if mat.shape != (space.dim(n + 1), space.dim(n)):
                raise ComplexError(
                    f"d_{n} has shape {mat.shape}, expected {(space.dim(n + 1), space.dim(n))}")
            self.d[n] = mat

    def differential(self, n):
        m = self.d.get(n)
        if m is None:
            return SparseMatrix.zero(self.space.dim(n + 1), self.space.dim(n))
        return m

    def check_d2(self, degrees=None):
        """Return the list of degrees n where d_{n+1} d_n != 0."""
        if degrees is None:
            degrees = sorted(self.d)
        bad = []
        for n in degrees:
            if n in self.d and n + 1 in self.d:
                if not (self.d[n + 1] @ self.d[n]).is_zero():
                    bad.append(n)
        return bad


@dataclass
class CohomologyReport:
    betti: dict
    representatives: dict = field(default_factory=dict)
    ranks: dict = field(default_factory=dict)
    kernel_dims: dict = field(default_factory=dict)

    def as_table(self):
        return {n: self.betti[n] for n in sorted(self.betti)}


def cohomology(c, degrees, representatives=False):
    """Exact Betti numbers of ``c`` on ``degrees``.

    Checks d^2 = 0 with one degree of margin on both sides first.
    Representatives, when requested, are cocycles spanning a complement of
    the coboundaries.
    """
    degrees = list(degrees)
    lo, hi = min(degrees), max(degrees)
    bad = c.check_d2(range(lo - 1, hi + 1))
    if bad:
        raise ComplexError(f"d^2 != 0 in degrees {bad}")
    rk = {}

    def r(n):
        if n not in rk:
            rk[n] = rank(c.differential(n)) if c.space.dim(n) and c.space.dim(n + 1) else 0
        return rk[n]

    betti, kdims, reps = {}, {}, {}
    for n in degrees:
        dim = c.space.dim(n)
        kd = dim - r(n)
        kdims[n] = kd
        betti[n] = kd - r(n - 1)
        if representatives and betti[n]:
            reps[n] = cocycle_representatives(c, n)
    return CohomologyReport(betti=betti, representatives=reps,
                            ranks={n: rk[n] for n in sorted(rk)}, kernel_dims=kdims)


def cocycle_representatives(c, n):
    """Cocycles whose classes form a basis of H^n."""
    z = kernel_basis(c.differential(n))
    e = Echelon()
    for v in c.differential(n - 1).columns():
        e.add(v)
    reps = []
    for v in z:
        if e.add(v):
            reps.append(v)
    return reps


# -- text format --------------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)\s*\*\s*([^\s+*]+)\s*")


def _split_terms(rhs):
    """Parse ``<coeff>*<label> [+ ...]``; a leading sign is allowed per term."""
    rhs = rhs.strip()
    if rhs in ("", "0"):
        return []
    out, pos = [], 0
    while pos < len(rhs):
        m = _TERM.match(rhs, pos)
        if not m or (out and m.group(1) is None):
            raise ComplexError(f"bad term list {rhs!r} at column {pos + 1}")
        coeff = parse_rational(m.group(2))
        if m.group(1) == "-":
            coeff = -coeff
        out.append((coeff, m.group(3)))
        pos = m.end()
    return out


def parse_complex(text):
    """Parse the ``complex``/``basis``/``d`` text format.

    Returns (CochainComplex, extra) where ``extra`` collects any other
    directive lines (used by the L-infinity file format).
    """
    name = None
    labels = {}
    order = []
    dlines = []
    extra = []
    weights = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split(None, 1)[0]
        if head == "complex":
            name = line.split(None, 1)[1].strip() if " " in line else ""
        elif head == "basis":
            toks = line.split()
            if len(toks) < 3:
                raise ComplexError(f"line {lineno}: basis needs label and deg=")
            lab = toks[1]
            kv = dict(t.split("=", 1) for t in toks[2:])
            if "deg" not in kv:
                raise ComplexError(f"line {lineno}: missing deg=")
            if lab in labels:
                raise ComplexError(f"line {lineno}: duplicate label {lab}")
            labels[lab] = int(kv["deg"])
            if "wt" in kv:
                weights[lab] = int(kv["wt"])
            order.append(lab)
        elif head == "d":
            m = re.match(r"^d\s+(\S+)\s*->\s*(.*)$", line)
            if not m:
                raise ComplexError(f"line {lineno}: bad differential line")
            try:
                dlines.append((lineno, m.group(1), _split_terms(m.group(2))))
            except ValueError as exc:
                raise ComplexError(f"line {lineno}: {exc}") from None
        else:
            extra.append((lineno, line))
    if name is None:
        raise ComplexError("missing 'complex <name>' header")
    comps = {}
    for lab in order:
        comps.setdefault(labels[lab], []).append(lab)
    space = GradedVectorSpace(comps)
    entries = {}
    for lineno, src, terms in dlines:
        if src not in labels:
            raise ComplexError(f"line {lineno}: unknown label {src}")
        n = labels[src]
        for coeff, tgt in terms:
            if tgt not in labels:
                raise ComplexError(f"line {lineno}: unknown label {tgt}")
            if labels[tgt] != n + 1:
                raise ComplexError(f"line {lineno}: d must raise degree by 1 ({src} -> {tgt})")
            key = (space.index(n + 1, tgt), space.index(n, src))
            e = entries.setdefault(n, {})
            e[key] = e.get(key, 0) + coeff
    diffs = {n: SparseMatrix(space.dim(n + 1), space.dim(n),
                             ((i, j, x) for (i, j), x in e.items()))
             for n, e in entries.items()}
    cx = CochainComplex(space, diffs, name=name)
    cx.weights = weights
    return cx, extra


def format_terms(pairs):
    """Inverse of the term parser: ``c*label`` summands with explicit signs."""
    parts = []
    for c, lab in pairs:
        c = Fraction(c)
        if not parts:
            parts.append(f"{fmt_rational(c)}*{lab}")
        else:
            parts.append(f"{'-' if c < 0 else '+'} {fmt_rational(abs(c))}*{lab}")
    return " ".join(parts) if parts else "0"


def format_complex(c):
    lines = [f"complex {c.name or 'unnamed'}"]
    for n in c.space.degrees():
        for lab in c.space.basis(n):
            lines.append(f"basis {lab} deg={n}")
    for n in c.space.degrees():
        cols = c.differential(n).columns()
        tgt = c.space.basis(n + 1)
        for j, lab in enumerate(c.space.basis(n)):
            col = cols[j] if j < len(cols) else {}
            if col:
                terms = format_terms((col[i], tgt[i]) for i in sorted(col))
                lines.append(f"d {lab} -> {terms}")
    return "\n".join(lines) + "\n"
