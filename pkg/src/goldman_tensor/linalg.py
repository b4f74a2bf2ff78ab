"""Exact sparse elimination over Q on vectors indexed by words.

Each input vector is reduced against the pivots found so far, processing support
words in increasing word order; a surviving vector pivots on its minimal word.
Free variables are set to zero, so solutions are the minimal-pivot ones.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from gmpy2 import mpq

from .tensor import Tensor, word_key


class InconsistentSystemError(ValueError):
    """The target is not in the span of the rows."""


# elimination runs on gmpy2 rationals (exact, much cheaper than Fraction);
# results are handed back as Fraction


def _as_map(v) -> dict:
    items = v.terms.items() if isinstance(v, Tensor) else v.items()
    return {k: mpq(c.numerator, c.denominator) if isinstance(c, Fraction) else mpq(c) for k, c in items if c}


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _key(k):
    return word_key(k) if isinstance(k, tuple) and all(isinstance(x, int) for x in k) else _generic_key(k)


def _generic_key(k):
    # pair-words and other keys: order by total length then lexicographic
    if isinstance(k, tuple) and all(isinstance(x, tuple) for x in k):
        return (sum(len(x) for x in k), tuple(len(x) for x in k), k)
    return (0, k)


class Eliminator:
    """Incremental row reduction that remembers how each pivot row was built."""

    def __init__(self):
        self.pivots: dict[Hashable, tuple[dict, dict]] = {}
        self.kernel: list[dict] = []
        self.count = 0

    def reduce(self, vec: Mapping, combo: dict | None = None) -> tuple[dict, dict]:
        vec = dict(vec)
        combo = dict(combo or {})
        done = set()
        while True:
            cands = [w for w in vec if w in self.pivots and w not in done]
            if not cands:
                return vec, combo
            w = min(cands, key=_key)
            c = vec[w]
            row, rcombo = self.pivots[w]
            for x, cx in row.items():
                nv = vec.get(x, 0) - c * cx
                if nv:
                    vec[x] = nv
                else:
                    vec.pop(x, None)
            for i, ci in rcombo.items():
                nv = combo.get(i, 0) - c * ci
                if nv:
                    combo[i] = nv
                else:
                    combo.pop(i, None)
            done.add(w)

    def add(self, vec) -> bool:
        """Insert the next row; return False if it was dependent."""
        idx = self.count
        self.count += 1
        rem, combo = self.reduce(_as_map(vec), {idx: mpq(1)})
        if not rem:
            self.kernel.append(combo)
            return False
        p = min(rem, key=_key)
        inv = 1 / rem[p]
        self.pivots[p] = ({w: c * inv for w, c in rem.items()}, {i: c * inv for i, c in combo.items()})
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def solve_linear(rows: Sequence, target) -> list[Fraction]:
    """Coefficients x with sum x_i rows_i = target; raises InconsistentSystemError."""
    el = Eliminator()
    for r in rows:
        el.add(r)
    rem, combo = el.reduce(_as_map(target))
    if rem:
        raise InconsistentSystemError("target is not in the span of the rows")
    # target - sum c_k r_k = 0 where combo holds -c expressed in original rows
    return [_frac(-combo.get(i, mpq(0))) for i in range(len(rows))]


def kernel_basis(rows: Sequence) -> list[list[Fraction]]:
    """Deterministic basis of {x : sum x_i rows_i = 0}; one vector per dependent row."""
    el = Eliminator()
    for r in rows:
        el.add(r)
    n = len(rows)
    return [[_frac(k.get(i, mpq(0))) for i in range(n)] for k in el.kernel]


def rank(rows: Sequence) -> int:
    el = Eliminator()
    for r in rows:
        el.add(r)
    return el.rank


def combine(coeffs: Sequence, vectors: Sequence[Tensor]) -> Tensor:
    out = None
    for c, v in zip(coeffs, vectors):
        if c:
            out = v.scale(c) if out is None else out + v.scale(c)
    if out is None:
        raise ValueError("empty combination needs at least one vector for its signature")
    return out
