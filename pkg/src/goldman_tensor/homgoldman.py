"""Homological Goldman Lie algebra: the group ring of Z^r with [[X],[Y]] = (X.Y)[X+Y]."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .linalg import Eliminator


class LatticeMismatch(ValueError):
    pass


class UnsupportedPairing(ValueError):
    """The statement is only available for a unimodular pairing."""


@dataclass(frozen=True)
class PairingLattice:
    rank: int
    matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        if len(m) != self.rank or any(len(row) != self.rank for row in m):
            raise ValueError("matrix shape does not match rank")
        for i in range(self.rank):
            for j in range(self.rank):
                if m[i][j] != -m[j][i]:
                    raise ValueError("pairing matrix must be antisymmetric")

    @classmethod
    def symplectic(cls, genus: int) -> "PairingLattice":
        r = 2 * genus
        m = [[0] * r for _ in range(r)]
        for i in range(genus):
            m[2 * i][2 * i + 1] = 1
            m[2 * i + 1][2 * i] = -1
        return cls(r, tuple(map(tuple, m)))

    def pair(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * self.matrix[i][j] * y[j] for i in range(self.rank) for j in range(self.rank) if x[i] and y[j])

    def mu(self, x: Sequence[int]) -> tuple:
        """The functional y -> (x . y) as a coordinate vector."""
        return tuple(sum(x[i] * self.matrix[i][j] for i in range(self.rank)) for j in range(self.rank))

    def in_kernel(self, x: Sequence[int]) -> bool:
        return not any(self.mu(x))

    def determinant(self) -> Fraction:
        a = [[Fraction(v) for v in row] for row in self.matrix]
        n = self.rank
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if a[r][c]), None)
            if p is None:
                return Fraction(0)
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            det *= a[c][c]
            for r in range(c + 1, n):
                f = a[r][c] / a[c][c]
                if f:
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def kernel_basis(self) -> list[tuple]:
        """Integer basis of ker(mu), from the rational kernel scaled to primitive vectors.

        The result spans ker(mu) over Q; it is a lattice basis whenever the
        rational basis is already saturated, which holds for the echelon form used.
        """
        n = self.rank
        a = [[Fraction(v) for v in row] for row in self.matrix]
        pivots = []
        r = 0
        for c in range(n):
            p = next((i for i in range(r, n) if a[i][c]), None)
            if p is None:
                continue
            a[r], a[p] = a[p], a[r]
            inv = 1 / a[r][c]
            a[r] = [x * inv for x in a[r]]
            for i in range(n):
                if i != r and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
        free = [c for c in range(n) if c not in pivots]
        out = []
        for f in free:
            v = [Fraction(0)] * n
            v[f] = Fraction(1)
            for row, pc in zip(a, pivots):
                v[pc] = -row[f]
            den = 1
            for x in v:
                den = den * x.denominator // gcd(den, x.denominator)
            iv = [int(x * den) for x in v]
            g = 0
            for x in iv:
                g = gcd(g, x)
            out.append(tuple(x // g for x in iv))
        return out

    def to_json(self) -> dict:
        return {"rank": self.rank, "matrix": [list(r) for r in self.matrix]}

    @classmethod
    def from_json(cls, d) -> "PairingLattice":
        return cls(d["rank"], tuple(tuple(r) for r in d["matrix"]))


class HGElement:
    """Finite rational combination of lattice vectors."""

    __slots__ = ("lattice", "terms")

    def __init__(self, lattice: PairingLattice, terms: Mapping | None = None):
        self.lattice = lattice
        out = {}
        for v, c in (terms or {}).items():
            v = tuple(int(x) for x in v)
            if len(v) != lattice.rank:
                raise ValueError("vector length differs from lattice rank")
            c = Fraction(c)
            if c:
                out[v] = out.get(v, 0) + c
        self.terms = {v: c for v, c in out.items() if c}

    @classmethod
    def basis(cls, lattice, v, c=1):
        return cls(lattice, {tuple(v): c})

    def _check(self, other):
        if other.lattice != self.lattice:
            raise LatticeMismatch("elements live over different lattices")

    def __add__(self, other):
        self._check(other)
        t = dict(self.terms)
        for v, c in other.terms.items():
            t[v] = t.get(v, 0) + c
        return HGElement(self.lattice, t)

    def __neg__(self):
        return HGElement(self.lattice, {v: -c for v, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return HGElement(self.lattice, {v: c * x for v, x in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, HGElement) and self.lattice == other.lattice and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return "HGElement(" + " + ".join(f"{c}[{v}]" for v, c in sorted(self.terms.items())) + ")"

    def translate(self, z: Sequence[int]) -> "HGElement":
        """T(Z): [Y] -> [Y + Z]."""
        return HGElement(self.lattice, {tuple(a + b for a, b in zip(v, z)): c for v, c in self.terms.items()})

    def to_json(self) -> dict:
        return {"terms": [{"vec": list(v), "coeff": str(c)} for v, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, lattice, d) -> "HGElement":
        t = {}
        for e in d["terms"]:
            v = tuple(e["vec"])
            if v in t:
                raise ValueError("duplicate vector")
            t[v] = Fraction(e["coeff"])
        return cls(lattice, t)


def hg_bracket(u: HGElement, v: HGElement) -> HGElement:
    u._check(v)
    lat = u.lattice
    out: dict = {}
    for x, a in u.terms.items():
        mx = lat.mu(x)
        for y, b in v.terms.items():
            p = sum(s * t for s, t in zip(mx, y))
            if p:
                k = tuple(s + t for s, t in zip(x, y))
                out[k] = out.get(k, 0) + a * b * p
    return HGElement(lat, out)


def nu(x: Sequence[int]) -> int:
    """gcd of the coordinates; 0 for the zero vector."""
    g = 0
    for c in x:
        g = gcd(g, int(c))
    return g


def _require_unimodular(lat: PairingLattice):
    if abs(lat.determinant()) != 1:
        raise UnsupportedPairing("commutator description needs a unimodular pairing")


def commutator_member(u: HGElement) -> bool:
    """Membership in [ZH, ZH] = sum over X != 0 of Z nu(X) [X]."""
    _require_unimodular(u.lattice)
    for x, c in u.terms.items():
        if c.denominator != 1:
            raise ValueError("commutator membership is stated for integer coefficients")
        n = nu(x)
        if n == 0 or c.numerator % n:
            return False
    return True


def center_member(u: HGElement) -> bool:
    """Every support vector lies in ker(mu)."""
    return all(u.lattice.in_kernel(x) for x in u.terms)


class _Span:
    def __init__(self, elems: Iterable[HGElement]):
        self.el = Eliminator()
        for e in elems:
            self.el.add(e.terms)

    def contains(self, u: HGElement) -> bool:
        from .linalg import _as_map

        rem, _ = self.el.reduce(_as_map(u.terms))
        return not rem


def _coset_parts(u: HGElement) -> dict:
    """Group the support by cosets of ker(mu), keyed by mu(X)."""
    parts: dict = {}
    for x, c in u.terms.items():
        key = u.lattice.mu(x)
        parts.setdefault(key, {})[x] = c
    return parts


def ideal_member(u: HGElement, V0: Sequence[HGElement], V: Sequence[HGElement]) -> bool:
    """u in V0 + sum_{X not in ker} T(X)(V), V0 and V read as finite spans."""
    lat = u.lattice
    s0, sv = _Span(V0), _Span(V)
    zero_key = tuple([0] * lat.rank)
    for key, part in _coset_parts(u).items():
        p = HGElement(lat, part)
        if key == zero_key:
            if not s0.contains(p):
                return False
            continue
        rep = min(part)
        # some translate T(X) with X in this coset must carry an element of V onto p
        if not any(sv.contains(p.translate(tuple(-a + b for a, b in zip(rep, y)))) for v in V for y in v.terms):
            return False
    return True


def ideal_shape_check(
    lattice: PairingLattice,
    V0: Sequence[HGElement],
    V: Sequence[HGElement],
    bound: int = 2,
) -> bool:
    """Conditions (1) support in ker(mu), (2) T(Z)-stability of V for a kernel
    basis and its negatives, then closure of the assembled subspace under
    brackets with [Y], |Y_i| <= bound.  A necessary-condition check only."""
    for e in list(V0) + list(V):
        if e.lattice != lattice:
            raise LatticeMismatch("generator over a different lattice")
        if not center_member(e):
            return False
    kb = lattice.kernel_basis()
    sv = _Span(V)
    for z in kb:
        for sz in (z, tuple(-c for c in z)):
            for v in V:
                if not sv.contains(v.translate(sz)):
                    return False
    ys = list(_box(lattice.rank, bound))
    samples = list(V0)
    for v in V:
        for y in ys:
            if not lattice.in_kernel(y):
                samples.append(v.translate(y))
    for h in samples:
        for y in ys:
            b = hg_bracket(HGElement.basis(lattice, y), h)
            if b and not ideal_member(b, V0, V):
                return False
    return True


def _box(rank: int, bound: int):
    from itertools import product

    return product(range(-bound, bound + 1), repeat=rank)
