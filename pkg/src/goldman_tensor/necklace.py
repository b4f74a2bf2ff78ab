"""Necklaces: cyclically invariant tensors with the symplectic-derivation brackets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .expansion import Expansion, FreeWord, eval_theta
from .maps import TensorDerivation
from .tensor import (
    DomainError,
    SignatureMismatch,
    SurfaceSignature,
    Tensor,
    _acc,
    cyclicize,
    is_cyclic_invariant,
    mul,
)


def min_rotation(w: tuple) -> tuple:
    return min((w[i:] + w[:i] for i in range(len(w))), default=w)


def orbit_size(w: tuple) -> int:
    return len({w[i:] + w[:i] for i in range(len(w))})


class Necklace:
    """Cyclically invariant tensor with no degree-0 part."""

    __slots__ = ("value",)

    def __init__(self, value: Tensor):
        if value.coeff(()):
            raise DomainError("necklace has a degree-0 component")
        if not is_cyclic_invariant(value):
            raise DomainError("tensor is not cyclically invariant")
        self.value = value

    @classmethod
    def of_word(cls, sig: SurfaceSignature, w, c=1) -> "Necklace":
        return cls(cyclicize(Tensor.word(sig, w, c)))

    @classmethod
    def of_tensor(cls, t: Tensor) -> "Necklace":
        return cls(cyclicize(t))

    @property
    def sig(self) -> SurfaceSignature:
        return self.value.sig

    def orbits(self) -> dict:
        """{minimal rotation r: a} with self = sum a N(r)."""
        out: dict = {}
        for w, c in self.value.items():
            r = min_rotation(w)
            if r == w:
                out[r] = c * Fraction(orbit_size(w), len(w))
        return out

    def __add__(self, other):
        return Necklace(self.value + _val(other))

    def __sub__(self, other):
        return Necklace(self.value - _val(other))

    def __neg__(self):
        return Necklace(-self.value)

    def scale(self, c):
        return Necklace(self.value.scale(c))

    def __bool__(self):
        return bool(self.value)

    def __eq__(self, other):
        if isinstance(other, Necklace):
            return self.value == other.value
        if isinstance(other, Tensor):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"Necklace({self.value.pretty()})"

    def degree_part(self, k):
        return Necklace(self.value.degree_part(k))

    def to_json(self) -> dict:
        d = self.value.to_json()
        d["necklace"] = True
        return d

    @classmethod
    def from_json(cls, d) -> "Necklace":
        if not d.get("necklace"):
            raise ValueError("missing necklace marker")
        return cls(Tensor.from_json(d))


def _val(x) -> Tensor:
    return x.value if isinstance(x, Necklace) else x


def _cyclicize_word(w: tuple) -> list:
    return [w[i:] + w[:i] for i in range(len(w))]


def bracket_necklace(u: Necklace, v: Necklace) -> Necklace:
    """-sum_{i,j} (X_i . Y_j) N(X_{i+1}..X_{i-1} Y_{j+1}..Y_{j-1}), over orbit representatives."""
    sig = u.sig
    if v.sig != sig:
        raise SignatureMismatch(f"{u.sig} vs {v.sig}")
    if sig.boundary_extra:
        raise DomainError("the genus-only bracket needs n = 0; use bracket_s")
    D = sig.trunc
    out: dict = {}
    vo = v.orbits()
    for x, a in u.orbits().items():
        m = len(x)
        for y, b in vo.items():
            n = len(y)
            if m + n - 2 > D or m + n == 2:
                continue
            for i in range(m):
                for j in range(n):
                    p = sig.pairing(x[i], y[j])
                    if not p:
                        continue
                    w = x[i + 1:] + x[:i] + y[j + 1:] + y[:j]
                    c = -a * b * p
                    for r in _cyclicize_word(w):
                        _acc(out, r, c)
    return Necklace(Tensor(sig, out))


def split_leading(t: Tensor) -> list[Tensor]:
    """t = sum_k X_k t_k by first letter; returns [t_k] indexed by symbol."""
    sig = t.sig
    parts: list[dict] = [dict() for _ in range(sig.rank)]
    for w, c in t.items():
        if not w:
            raise DomainError("degree-0 term has no leading symbol")
        parts[w[0]][w[1:]] = c
    return [Tensor(sig, p) for p in parts]


def bracket_s(u: Necklace, v: Necklace) -> Necklace:
    """-N(sum_i u'_i v''_i - u''_i v'_i + sum_j C_j (u0_j v0_j - v0_j u0_j))."""
    sig = u.sig
    if v.sig != sig:
        raise SignatureMismatch(f"{u.sig} vs {v.sig}")
    su, sv = split_leading(u.value), split_leading(v.value)
    acc = Tensor.zero(sig)
    for i in range(sig.genus):
        a, b = 2 * i, 2 * i + 1
        acc = acc + mul(su[a], sv[b]) - mul(su[b], sv[a])
    g2 = 2 * sig.genus
    for j in range(sig.boundary_extra):
        c = Tensor.symbol(sig, g2 + j)
        k = g2 + j
        acc = acc + c * (mul(su[k], sv[k]) - mul(sv[k], su[k]))
    return Necklace(-cyclicize(acc))


def derivation_of(u: Necklace) -> TensorDerivation:
    """A_i -> u''_i, B_i -> -u'_i, C_j -> u0_j C_j - C_j u0_j."""
    sig = u.sig
    parts = split_leading(u.value)
    images = []
    for i in range(sig.rank):
        kind = sig.kind(i)
        if kind == "A":
            images.append(parts[i + 1])
        elif kind == "B":
            images.append(-parts[i - 1])
        else:
            c = Tensor.symbol(sig, i)
            images.append(parts[i] * c - c * parts[i])
    return TensorDerivation(sig, images)


def act_derivation(u: Necklace, t: Tensor) -> Tensor:
    if u.sig != t.sig:
        raise SignatureMismatch(f"{u.sig} vs {t.sig}")
    return derivation_of(u)(t)


@dataclass(frozen=True)
class FreeLoop:
    """Free homotopy class of an oriented loop: cyclically reduced, minimal rotation."""

    letters: tuple

    @classmethod
    def of(cls, w: FreeWord) -> "FreeLoop":
        r = w.cyclic_reduce().letters
        return cls(min_rotation(r))

    @property
    def word(self) -> FreeWord:
        return FreeWord(self.letters)


def lambda_theta(theta: Expansion, x) -> Necklace:
    """N theta(x) for a loop given by any based representative."""
    if isinstance(x, FreeLoop):
        x = x.word
    return Necklace(cyclicize(eval_theta(theta, x)))


def omega_power_necklace(sig: SurfaceSignature, k: int) -> Necklace:
    if 2 * k > sig.trunc:
        raise DomainError(f"omega^{k} exceeds truncation {sig.trunc}")
    return Necklace(cyclicize(Tensor.omega(sig) ** k))


def center_probe(k: int, u: Necklace) -> Necklace:
    """[N(omega^k), u]; vanishes because boundary powers are central."""
    return bracket_necklace(omega_power_necklace(u.sig, k), u)
