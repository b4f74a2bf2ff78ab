"""Labeled linear and circular chord diagrams, the map to invariant tensors,
and the amalgamation and surgery brackets.

A combination of diagrams is a dict {standard pairs: coefficient}; the sign of a
non-standard label is folded into the coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .tensor import DomainError, SurfaceSignature, Tensor, _acc


@dataclass(frozen=True)
class LinearChord:
    m: int
    pairs: tuple
    sign: int = 1

    def to_json(self) -> dict:
        return {"m": self.m, "pairs": [list(p) for p in self.pairs], "sign": self.sign}

    @classmethod
    def from_json(cls, d) -> "LinearChord":
        c = lc_normalize([tuple(p) for p in d["pairs"]])
        if c.m != d["m"]:
            raise ValueError("chord count does not match pairs")
        return LinearChord(c.m, c.pairs, c.sign * int(d.get("sign", 1)))


def lc_normalize(raw: Iterable) -> LinearChord:
    """Standard label (i < j in every pair), pairs sorted; each swap flips the sign."""
    raw = [tuple(p) for p in raw]
    m = len(raw)
    pts = sorted(x for p in raw for x in p)
    if pts != list(range(1, 2 * m + 1)) or any(len(p) != 2 for p in raw):
        raise ValueError("pairs must partition {1..2m}")
    sign = 1
    out = []
    for i, j in raw:
        if i > j:
            i, j = j, i
            sign = -sign
        out.append((i, j))
    return LinearChord(m, tuple(sorted(out)), sign)


def standard_diagrams(m: int) -> list[tuple]:
    """All standard-label diagrams with m chords, as sorted pair tuples."""

    def rec(rest):
        if not rest:
            yield ()
            return
        a = rest[0]
        for k in range(1, len(rest)):
            b = rest[k]
            for tail in rec(rest[1:k] + rest[k + 1:]):
                yield ((a, b),) + tail

    return sorted(rec(list(range(1, 2 * m + 1))))


def _partner(pairs) -> dict:
    d = {}
    for i, j in pairs:
        d[i], d[j] = j, i
    return d


def _comb_add(out: dict, raw, c):
    if not c:
        return
    d = lc_normalize(raw)
    _acc(out, d.pairs, c * d.sign)


def a_map(sig: SurfaceSignature, C) -> Tensor:
    """Place omega's two slots at (i_k, j_k) for every chord; sign of the label applied."""
    if isinstance(C, LinearChord):
        pairs, sign = C.pairs, C.sign
    else:
        d = lc_normalize(C)
        pairs, sign = d.pairs, d.sign
    m = len(pairs)
    if 2 * m > sig.trunc:
        raise DomainError(f"{m} chords exceed truncation {sig.trunc}")
    if sig.boundary_extra:
        raise DomainError("chord diagrams live over a single boundary component")
    out: dict = {}
    g = sig.genus
    slots = [(i, j) for i, j in pairs]
    # each chord contributes A_l (x) B_l - B_l (x) A_l at its (start, end) slots
    for picks in product(range(2 * g), repeat=m):
        word = [None] * (2 * m)
        c = sign
        for (i, j), p in zip(slots, picks):
            l, flip = divmod(p, 2)
            a, b = 2 * l, 2 * l + 1
            if flip:
                word[i - 1], word[j - 1] = b, a
                c = -c
            else:
                word[i - 1], word[j - 1] = a, b
        _acc(out, tuple(word), Fraction(c))
    return Tensor(sig, out)


def a_map_comb(sig: SurfaceSignature, comb: Mapping) -> Tensor:
    out = Tensor.zero(sig)
    for pairs, c in comb.items():
        out = out + a_map(sig, pairs).scale(c)
    return out


def amalgamate(C: tuple, Cp: tuple, t: int) -> dict:
    """C *_t C': cut C' at vertex t and C at vertex 1, insert C into the hole and
    join the two chords that lost an end."""
    m, l = len(C), len(Cp)
    if not 2 <= t <= 2 * l:
        raise ValueError("t out of range")
    pc, pcp = _partner(C), _partner(Cp)

    def pos_p(v):
        return v if v < t else v + 2 * m - 2

    def pos_c(u):
        return t + u - 2

    raw = []
    for i, j in Cp:
        if t not in (i, j):
            raw.append((pos_p(i), pos_p(j)))
    for i, j in C:
        if 1 not in (i, j):
            raw.append((pos_c(i), pos_c(j)))
    a, b = sorted((pos_c(pc[1]), pos_p(pcp[t])))
    raw.append((a, b))
    out: dict = {}
    _comb_add(out, raw, Fraction(1))
    return out


def lc_bracket(C, Cp) -> dict:
    """-sum_t C *_t C' + sum_s C' *_s C."""
    C = _std(C)
    Cp = _std(Cp)
    out: dict = {}
    for t in range(2, 2 * len(Cp) + 1):
        for k, c in amalgamate(C, Cp, t).items():
            _acc(out, k, -c)
    for s in range(2, 2 * len(C) + 1):
        for k, c in amalgamate(Cp, C, s).items():
            _acc(out, k, c)
    return out


def lc_bracket_comb(u: Mapping, v: Mapping) -> dict:
    out: dict = {}
    for p, a in u.items():
        for q, b in v.items():
            for k, c in lc_bracket(p, q).items():
                _acc(out, k, a * b * c)
    return out


def _std(C) -> tuple:
    if isinstance(C, LinearChord):
        if C.sign != 1:
            raise ValueError("expected a standard diagram with sign +1")
        return C.pairs
    d = lc_normalize(C)
    if d.sign != 1:
        raise ValueError("expected a standard label")
    return d.pairs


def rotate(pairs: tuple, s: int = 1) -> dict:
    """nu^s: vertex i -> i - 1, with 1 -> 2m."""
    n = 2 * len(pairs)

    def r(i):
        return (i - 1 - s) % n + 1

    out: dict = {}
    _comb_add(out, [(r(i), r(j)) for i, j in pairs], Fraction(1))
    return out


def circular_sum(pairs) -> dict:
    """N(C) = sum_s nu^s(C)."""
    pairs = _std(pairs)
    out: dict = {}
    for s in range(2 * len(pairs)):
        for k, c in rotate(pairs, s).items():
            _acc(out, k, c)
    return out


def is_rotation_invariant(comb: Mapping) -> bool:
    rot: dict = {}
    for p, c in comb.items():
        for k, x in rotate(p, 1).items():
            _acc(rot, k, c * x)
    return rot == {k: v for k, v in comb.items() if v}


def omega_diagram(m: int) -> dict:
    """Omega_m = N({(1,2), (3,4), ...})."""
    return circular_sum(tuple((2 * k + 1, 2 * k + 2) for k in range(m)))


def _surgery(C: tuple, p: int, Cp: tuple, q: int) -> tuple:
    """Linear word: C after p, then C' after q; chord pbar - qbar joins them."""
    n, npr = 2 * len(C), 2 * len(Cp)
    order = [("c", (p - 1 + k) % n + 1) for k in range(1, n)]
    order += [("d", (q - 1 + k) % npr + 1) for k in range(1, npr)]
    pos = {v: i + 1 for i, v in enumerate(order)}
    pc, pd = _partner(C), _partner(Cp)
    raw = []
    for i, j in C:
        if p not in (i, j):
            raw.append((pos[("c", i)], pos[("c", j)]))
    for i, j in Cp:
        if q not in (i, j):
            raw.append((pos[("d", i)], pos[("d", j)]))
    p_start = p < pc[p]
    q_start = q < pd[q]
    sign = -1 if p_start == q_start else 1
    raw.append((pos[("c", pc[p])], pos[("d", pd[q])]))
    return raw, sign


def cc_bracket(u: Mapping, v: Mapping) -> dict:
    """Bracket of rotation-invariant combinations by surgery over all vertex pairs.

    An invariant E with m chords equals (1/2m) sum_C c_C N(C); each N(C), N(C')
    pair contributes sum_{p,q} N(surgery).  The sign of the joining chord is -1
    when p and q play the same role (both chord starts or both ends), else +1.
    """
    for x in (u, v):
        if not is_rotation_invariant(x):
            raise DomainError("cc_bracket needs rotation-invariant inputs")
    out: dict = {}
    for C, a in u.items():
        for Cp, b in v.items():
            w = a * b / (2 * len(C) * 2 * len(Cp))
            if len(C) + len(Cp) < 2:
                continue
            for p in range(1, 2 * len(C) + 1):
                for q in range(1, 2 * len(Cp) + 1):
                    raw, sign = _surgery(C, p, Cp, q)
                    if not raw:
                        continue
                    lin = lc_normalize(raw)
                    for k, c in circular_sum(lin.pairs).items():
                        _acc(out, k, w * sign * lin.sign * c)
    return out


def comb_to_json(comb: Mapping) -> list:
    return [{"pairs": [list(p) for p in k], "coeff": str(c)} for k, c in sorted(comb.items())]


def double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out
