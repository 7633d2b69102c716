"""Independent oracles shared by the unit and acceptance suites.

The free nilpotent Lie algebra on a few degree-0 letters is realised inside
the truncated tensor algebra T(V)/T^{>L}: words of length <= L with the
commutator bracket.  Every Lie polynomial of length > L vanishes there, so a
BCH truncation at order L is exact and can be compared against
log(exp x exp y) computed by power series in the associative algebra.
"""

import itertools
import math
from fractions import Fraction as F

from deforma.linfty import TableLInfty


class TruncatedTensor:
    def __init__(self, letters, L):
        self.letters, self.L = tuple(letters), L
        self.words = [w for k in range(1, L + 1) for w in itertools.product(self.letters, repeat=k)]

    def mul(self, a, b):
        out = {}
        for u, x in a.items():
            for v, y in b.items():
                w = u + v
                if len(w) <= self.L:
                    out[w] = out.get(w, 0) + x * y
        return {w: c for w, c in out.items() if c}

    def add(self, *vs, coeffs=None):
        out = {}
        for k, v in enumerate(vs):
            c = 1 if coeffs is None else coeffs[k]
            for w, x in v.items():
                out[w] = out.get(w, 0) + c * x
        return {w: x for w, x in out.items() if x}

    def exp(self, a):
        """exp(a) - 1 (a has no constant term, so the series stops at L)."""
        out, p = {}, dict(a)
        for k in range(1, self.L + 1):
            out = self.add(out, p, coeffs=[1, F(1, math.factorial(k))])
            p = self.mul(p, a)
        return out

    def log1p(self, a):
        """log(1 + a) for a without constant term."""
        out, p = {}, dict(a)
        for k in range(1, self.L + 1):
            out = self.add(out, p, coeffs=[1, F((-1) ** (k + 1), k)])
            p = self.mul(p, a)
        return out

    def bch(self, x, y):
        ex, ey = self.exp(x), self.exp(y)
        # (1 + ex)(1 + ey) - 1
        return self.log1p(self.add(ex, ey, self.mul(ex, ey)))


def free_nilpotent_lie(letters, L):
    """The commutator Lie algebra of T(V)/T^{>L} as a table algebra, plus its tensor model."""
    T = TruncatedTensor(letters, L)
    labels = ["".join(w) for w in T.words]
    g = TableLInfty(labels, [0] * len(labels), name="free-nilpotent")
    g.nilpotency = L - 1
    pos = {w: k for k, w in enumerate(T.words)}
    for i, u in enumerate(T.words):
        for j in range(i + 1, len(T.words)):
            v = T.words[j]
            if len(u) + len(v) > L:
                continue
            c = T.add(T.mul({u: 1}, {v: 1}), T.mul({v: 1}, {u: 1}), coeffs=[1, -1])
            if c:
                g.set_bracket((i, j), {pos[w]: x for w, x in c.items()})
    return g, T, pos


def to_words(T, pos, v):
    inv = {k: w for w, k in pos.items()}
    return {inv[k]: x for k, x in v.items() if x}


def from_words(pos, v):
    return {pos[w]: x for w, x in v.items() if x}
