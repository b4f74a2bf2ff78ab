"""Sparse exact arithmetic in the truncated completed tensor algebra of H_1.

Words are tuples of symbol indices.  For a surface of genus g with n extra
boundary components the symbols are ordered

    A1 < B1 < A2 < B2 < ... < Ag < Bg < C1 < ... < Cn

so ``A_i`` has index ``2(i-1)``, ``B_i`` has index ``2(i-1)+1`` and ``C_j`` has
index ``2g + j - 1``.  Words compare by length first, then lexicographically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Union

Word = tuple
Scalar = Union[int, Fraction]

_SYMBOL_RE = re.compile(r"^([ABC])(\d+)$")


class SignatureMismatch(ValueError):
    """Raised when two values built over different signatures meet."""


class DomainError(ValueError):
    """Raised when an operation is applied outside its domain."""


def word_key(w: Word) -> tuple:
    return (len(w), w)


def to_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"not an exact rational: {c!r}")


def format_fraction(c: Fraction) -> str:
    return str(c)


@dataclass(frozen=True)
class SurfaceSignature:
    """Surface Sigma_{g, n+1} together with the truncation degree D."""

    genus: int
    boundary_extra: int = 0
    trunc: int = 4

    def __post_init__(self):
        for name in ("genus", "boundary_extra", "trunc"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")
        if self.genus + self.boundary_extra < 1:
            raise ValueError("need genus + boundary_extra >= 1")
        if self.trunc < 2:
            raise ValueError("truncation degree must be at least 2")

    @property
    def rank(self) -> int:
        return 2 * self.genus + self.boundary_extra

    def with_trunc(self, trunc: int) -> "SurfaceSignature":
        return SurfaceSignature(self.genus, self.boundary_extra, trunc)

    def symbol_name(self, i: int) -> str:
        self._check_index(i)
        if i < 2 * self.genus:
            return ("A" if i % 2 == 0 else "B") + str(i // 2 + 1)
        return "C" + str(i - 2 * self.genus + 1)

    def symbol(self, name: str) -> int:
        m = _SYMBOL_RE.match(name.strip())
        if not m:
            raise ValueError(f"bad symbol {name!r}")
        kind, idx = m.group(1), int(m.group(2))
        if idx < 1:
            raise ValueError(f"symbol index out of range: {name}")
        if kind in "AB":
            if idx > self.genus:
                raise ValueError(f"symbol index out of range: {name}")
            return 2 * (idx - 1) + (0 if kind == "A" else 1)
        if idx > self.boundary_extra:
            raise ValueError(f"symbol index out of range: {name}")
        return 2 * self.genus + idx - 1

    def symbols(self) -> list[str]:
        return [self.symbol_name(i) for i in range(self.rank)]

    def parse_word(self, text) -> Word:
        """``"A1 B1"``, ``"A1B1"`` or a list of names -> tuple of indices."""
        if isinstance(text, (list, tuple)):
            return tuple(self.symbol(s) if isinstance(s, str) else self._check_index(s) for s in text)
        names = re.findall(r"[ABC]\d+", text)
        if "".join(names) != re.sub(r"\s+", "", text):
            raise ValueError(f"cannot parse word {text!r}")
        return tuple(self.symbol(s) for s in names)

    def word_names(self, w: Word) -> list[str]:
        return [self.symbol_name(i) for i in w]

    def _check_index(self, i: int) -> int:
        if not 0 <= i < self.rank:
            raise ValueError(f"symbol index {i} out of range for rank {self.rank}")
        return i

    def kind(self, i: int) -> str:
        self._check_index(i)
        if i < 2 * self.genus:
            return "A" if i % 2 == 0 else "B"
        return "C"

    def pairing(self, x: int, y: int) -> int:
        """Intersection pairing of two basis symbols; C classes are radical."""
        self._check_index(x)
        self._check_index(y)
        g2 = 2 * self.genus
        if x >= g2 or y >= g2 or x // 2 != y // 2 or x == y:
            return 0
        return 1 if x % 2 == 0 else -1

    def to_json(self) -> dict:
        return {"genus": self.genus, "boundary_extra": self.boundary_extra, "trunc": self.trunc}


def pairing(sig: SurfaceSignature, x, y) -> int:
    """(x . y) for symbols given by index or name."""
    if isinstance(x, str):
        x = sig.symbol(x)
    if isinstance(y, str):
        y = sig.symbol(y)
    return sig.pairing(x, y)


def _clean(terms: Mapping, trunc: int) -> dict:
    out = {}
    for w, c in terms.items():
        c = to_fraction(c)
        if c and len(w) <= trunc:
            out[tuple(w)] = c
    return out


class Tensor:
    """Element of T^(H) modulo words longer than ``sig.trunc``.

    Values are treated as immutable; all operations return new tensors.
    """

    __slots__ = ("sig", "_terms", "_hash")

    def __init__(self, sig: SurfaceSignature, terms: Mapping | None = None, *, _trusted: bool = False):
        self.sig = sig
        if terms is None:
            self._terms = {}
        elif _trusted:
            self._terms = terms
        else:
            self._terms = _clean(terms, sig.trunc)
            for w in self._terms:
                for s in w:
                    sig._check_index(s)
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, sig):
        return cls(sig)

    @classmethod
    def one(cls, sig, c: Scalar = 1):
        return cls(sig, {(): c})

    @classmethod
    def symbol(cls, sig, name, c: Scalar = 1):
        i = sig.symbol(name) if isinstance(name, str) else sig._check_index(name)
        return cls(sig, {(i,): c})

    @classmethod
    def word(cls, sig, w, c: Scalar = 1):
        if isinstance(w, str) or (w and isinstance(w[0], str)):
            w = sig.parse_word(w)
        return cls(sig, {tuple(w): c})

    @classmethod
    def omega(cls, sig):
        """Symplectic form sum_i A_i B_i - B_i A_i."""
        terms = {}
        for i in range(sig.genus):
            a, b = 2 * i, 2 * i + 1
            terms[(a, b)] = Fraction(1)
            terms[(b, a)] = Fraction(-1)
        return cls(sig, terms, _trusted=True)

    # access -------------------------------------------------------------
    @property
    def terms(self) -> Mapping:
        return self._terms

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator:
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coeff(self, w) -> Fraction:
        if isinstance(w, str):
            w = self.sig.parse_word(w)
        return self._terms.get(tuple(w), Fraction(0))

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: word_key(kv[0]))

    def degree_part(self, k: int) -> "Tensor":
        return Tensor(self.sig, {w: c for w, c in self._terms.items() if len(w) == k}, _trusted=True)

    def degrees(self) -> list[int]:
        return sorted({len(w) for w in self._terms})

    def min_degree(self) -> int | None:
        return min((len(w) for w in self._terms), default=None)

    def truncate(self, k: int) -> "Tensor":
        """Drop words longer than ``k`` (the signature is kept)."""
        return Tensor(self.sig, {w: c for w, c in self._terms.items() if len(w) <= k}, _trusted=True)

    def retrunc(self, trunc: int) -> "Tensor":
        sig = self.sig.with_trunc(trunc)
        return Tensor(sig, {w: c for w, c in self._terms.items() if len(w) <= trunc}, _trusted=True)

    # arithmetic ---------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, Tensor):
            raise TypeError(f"expected Tensor, got {type(other).__name__}")
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Tensor.one(self.sig, other)
        self._check(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return Tensor(self.sig, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Tensor(self.sig, {w: -c for w, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Tensor.one(self.sig, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Tensor":
        c = to_fraction(c)
        if not c:
            return Tensor(self.sig)
        return Tensor(self.sig, {w: c * v for w, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        return self.scale(1 / to_fraction(other))

    def __pow__(self, n: int):
        out = Tensor.one(self.sig)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Tensor.one(self.sig, other)
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.sig == other.sig and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.sig, frozenset(self._terms.items())))
        return self._hash

    def map_words(self, f) -> "Tensor":
        """Linear extension of ``word -> Tensor-like dict`` or ``word -> word``."""
        out: dict = {}
        for w, c in self._terms.items():
            r = f(w)
            if isinstance(r, tuple):
                _acc(out, r, c)
            else:
                for w2, c2 in r.items():
                    _acc(out, w2, c * c2)
        return Tensor(self.sig, _purge(out, self.sig.trunc), _trusted=True)

    def __repr__(self):
        return f"Tensor({self.pretty()})"

    def pretty(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for w, c in self.sorted_items():
            name = "".join(self.sig.word_names(w)) or "1"
            if c == 1:
                parts.append(f"+{name}")
            elif c == -1:
                parts.append(f"-{name}")
            else:
                s = f"({c})" if c.denominator != 1 else str(c)
                parts.append(f"{'+' if c > 0 else ''}{s}*{name}" if c > 0 else f"{s}*{name}")
        return " ".join(parts).lstrip("+")

    # JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        d = self.sig.to_json()
        d["terms"] = [
            {"word": self.sig.word_names(w), "coeff": format_fraction(c)} for w, c in self.sorted_items()
        ]
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Tensor":
        sig = SurfaceSignature(d["genus"], d.get("boundary_extra", 0), d["trunc"])
        terms: dict = {}
        for t in d["terms"]:
            w = tuple(sig.symbol(s) for s in t["word"])
            if len(w) > sig.trunc:
                raise ValueError(f"word longer than trunc: {t['word']}")
            if w in terms:
                raise ValueError(f"duplicate word {t['word']}")
            terms[w] = Fraction(t["coeff"])
        return cls(sig, terms)


def _acc(d: dict, w, c):
    v = d.get(w, 0) + c
    if v:
        d[w] = v
    else:
        d.pop(w, None)


def _purge(d: dict, trunc: int) -> dict:
    return {w: c for w, c in d.items() if c and len(w) <= trunc}


def _by_length(t: Tensor) -> dict:
    buckets: dict = {}
    for w, c in t._terms.items():
        buckets.setdefault(len(w), []).append((w, c))
    return buckets


def mul(u: Tensor, v: Tensor) -> Tensor:
    """Concatenation product, dropping words longer than the truncation."""
    u._check(v)
    D = u.sig.trunc
    vb = _by_length(v)
    lengths = sorted(vb)
    out: dict = {}
    for w1, c1 in u._terms.items():
        room = D - len(w1)
        for L in lengths:
            if L > room:
                break
            for w2, c2 in vb[L]:
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
    return Tensor(u.sig, _purge(out, D), _trusted=True)


def aug(u: Tensor) -> Fraction:
    """Constant (empty word) coefficient."""
    return u._terms.get((), Fraction(0))


def antipode(u: Tensor) -> Tensor:
    return Tensor(
        u.sig,
        {w[::-1]: (-c if len(w) % 2 else c) for w, c in u._terms.items()},
        _trusted=True,
    )


def cyclicize(u: Tensor) -> Tensor:
    """N(X1...Xm) = sum of the m rotations; N kills degree 0."""
    out: dict = {}
    for w, c in u._terms.items():
        for i in range(len(w)):
            r = w[i:] + w[:i]
            out[r] = out.get(r, 0) + c
    return Tensor(u.sig, _purge(out, u.sig.trunc), _trusted=True)


def is_cyclic_invariant(u: Tensor) -> bool:
    for w, c in u._terms.items():
        if w and u._terms.get(w[1:] + w[:1]) != c:
            return False
    return True


def contract_c12(u: Tensor) -> Tensor:
    """X1 X2 w -> (X1 . X2) w."""
    sig = u.sig
    out: dict = {}
    for w, c in u._terms.items():
        if len(w) < 2:
            raise DomainError("contract_c12 needs every word to have length >= 2")
        p = sig.pairing(w[0], w[1])
        if p:
            _acc(out, w[2:], c * p)
    return Tensor(sig, out, _trusted=True)


def sym_project(u: Tensor) -> Tensor:
    """Image in the symmetric algebra, words written in sorted normal form."""
    out: dict = {}
    for w, c in u._terms.items():
        _acc(out, tuple(sorted(w)), c)
    return Tensor(u.sig, out, _trusted=True)


def exp_t(u: Tensor) -> Tensor:
    if aug(u):
        raise DomainError("exp_t needs zero constant term")
    out = Tensor.one(u.sig)
    term = Tensor.one(u.sig)
    k = 0
    while True:
        k += 1
        term = (term * u).scale(Fraction(1, k))
        if not term:
            return out
        out = out + term


def log_t(u: Tensor) -> Tensor:
    if aug(u) != 1:
        raise DomainError("log_t needs constant term 1")
    x = u - 1
    out = Tensor.zero(u.sig)
    power = Tensor.one(u.sig)
    k = 0
    while True:
        k += 1
        power = power * x
        if not power:
            return out
        out = out + power.scale(Fraction((-1) ** (k - 1), k))


def bracket(u: Tensor, v: Tensor) -> Tensor:
    """Commutator uv - vu in the tensor algebra."""
    return u * v - v * u


def power_series(coeffs: Iterable, x: Tensor) -> Tensor:
    """sum_k coeffs[k] x^k for x with zero constant term."""
    if aug(x):
        raise DomainError("series argument needs zero constant term")
    out = Tensor.zero(x.sig)
    p = Tensor.one(x.sig)
    for k, c in enumerate(coeffs):
        if k:
            p = p * x
            if not p:
                break
        c = to_fraction(c)
        if c:
            out = out + p.scale(c)
    return out


# ---------------------------------------------------------------------------
# pair tensors


class PairTensor:
    """Element of T^ (x) T^ truncated by total degree."""

    __slots__ = ("sig", "_terms")

    def __init__(self, sig: SurfaceSignature, terms: Mapping | None = None, *, _trusted: bool = False):
        self.sig = sig
        if terms is None:
            self._terms = {}
        elif _trusted:
            self._terms = terms
        else:
            self._terms = {
                (tuple(a), tuple(b)): to_fraction(c)
                for (a, b), c in terms.items()
                if to_fraction(c) and len(a) + len(b) <= sig.trunc
            }

    @classmethod
    def from_tensors(cls, left: Tensor, right: Tensor) -> "PairTensor":
        left._check(right)
        D = left.sig.trunc
        out = {}
        for a, ca in left.items():
            for b, cb in right.items():
                if len(a) + len(b) <= D:
                    out[(a, b)] = ca * cb
        return cls(left.sig, out, _trusted=True)

    @property
    def terms(self) -> Mapping:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def coeff(self, a, b) -> Fraction:
        return self._terms.get((tuple(a), tuple(b)), Fraction(0))

    def _check(self, other):
        if not isinstance(other, PairTensor):
            raise TypeError(f"expected PairTensor, got {type(other).__name__}")
        if other.sig != self.sig:
            raise SignatureMismatch(f"{self.sig} vs {other.sig}")

    def __add__(self, other):
        self._check(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            _acc(out, k, c)
        return PairTensor(self.sig, out, _trusted=True)

    def __neg__(self):
        return PairTensor(self.sig, {k: -c for k, c in self._terms.items()}, _trusted=True)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PairTensor":
        c = to_fraction(c)
        if not c:
            return PairTensor(self.sig)
        return PairTensor(self.sig, {k: c * v for k, v in self._terms.items()}, _trusted=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        D = self.sig.trunc
        out: dict = {}
        for (a1, b1), c1 in self._terms.items():
            d1 = len(a1) + len(b1)
            for (a2, b2), c2 in other._terms.items():
                if d1 + len(a2) + len(b2) <= D:
                    k = (a1 + a2, b1 + b2)
                    out[k] = out.get(k, 0) + c1 * c2
        return PairTensor(self.sig, _purge_pairs(out), _trusted=True)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, PairTensor):
            return NotImplemented
        return self.sig == other.sig and self._terms == other._terms

    def __hash__(self):
        return hash((self.sig, frozenset(self._terms.items())))

    def swap(self) -> "PairTensor":
        return PairTensor(self.sig, {(b, a): c for (a, b), c in self._terms.items()}, _trusted=True)

    def map_left(self, f) -> "PairTensor":
        """Apply a linear map ``Tensor -> Tensor`` (given on words) to the left factor."""
        return self._map(f, left=True)

    def map_right(self, f) -> "PairTensor":
        return self._map(f, left=False)

    def _map(self, f, left):
        out: dict = {}
        for (a, b), c in self._terms.items():
            src = a if left else b
            for w, cw in f(src).items():
                k = (w, b) if left else (a, w)
                if len(k[0]) + len(k[1]) <= self.sig.trunc:
                    _acc(out, k, c * cw)
        return PairTensor(self.sig, out, _trusted=True)

    def left_degree_part(self, k: int) -> "PairTensor":
        return PairTensor(self.sig, {key: c for key, c in self._terms.items() if len(key[0]) == k}, _trusted=True)

    def total_degrees(self) -> list[int]:
        return sorted({len(a) + len(b) for (a, b) in self._terms})

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1])))

    def __repr__(self):
        parts = []
        for (a, b), c in self.sorted_items():
            la = "".join(self.sig.word_names(a)) or "1"
            lb = "".join(self.sig.word_names(b)) or "1"
            parts.append(f"{c}*{la}(x){lb}")
        return "PairTensor(" + (" + ".join(parts) or "0") + ")"

    def to_json(self) -> dict:
        d = self.sig.to_json()
        d["terms"] = [
            {"left": self.sig.word_names(a), "right": self.sig.word_names(b), "coeff": format_fraction(c)}
            for (a, b), c in self.sorted_items()
        ]
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "PairTensor":
        sig = SurfaceSignature(d["genus"], d.get("boundary_extra", 0), d["trunc"])
        terms = {}
        for t in d["terms"]:
            k = (tuple(sig.symbol(s) for s in t["left"]), tuple(sig.symbol(s) for s in t["right"]))
            if k in terms:
                raise ValueError("duplicate pair term")
            terms[k] = Fraction(t["coeff"])
        return cls(sig, terms)


def _purge_pairs(d: dict) -> dict:
    return {k: c for k, c in d.items() if c}


@lru_cache(maxsize=65536)
def _word_coproduct(w: Word) -> tuple:
    """All (subword, complementary subword) splittings, with multiplicity."""
    if not w:
        return (((), (), 1),)
    x = w[0]
    acc: dict = {}
    for a, b, c in _word_coproduct(w[1:]):
        for k in ((x,) + a, b), (a, (x,) + b):
            acc[k] = acc.get(k, 0) + c
    return tuple((a, b, c) for (a, b), c in acc.items())


def coproduct(u: Tensor) -> PairTensor:
    out: dict = {}
    for w, c in u.items():
        for a, b, m in _word_coproduct(w):
            k = (a, b)
            out[k] = out.get(k, 0) + c * m
    return PairTensor(u.sig, _purge_pairs(out), _trusted=True)


def is_primitive_by_coproduct(u: Tensor) -> bool:
    one = Tensor.one(u.sig)
    return coproduct(u) == PairTensor.from_tensors(u, one) + PairTensor.from_tensors(one, u)


def right_normed(u: Tensor) -> Tensor:
    """Linear map X1 X2 .. Xm -> [X1, [X2, .. [X(m-1), Xm]..]]."""
    out: dict = {}
    for w, c in u.items():
        if not w:
            continue
        poly = {w[-1:]: 1}
        for x in reversed(w[:-1]):
            nxt: dict = {}
            for v, cv in poly.items():
                _acc(nxt, (x,) + v, cv)
                _acc(nxt, v + (x,), -cv)
            poly = nxt
        for v, cv in poly.items():
            _acc(out, v, c * cv)
    return Tensor(u.sig, out, _trusted=True)


def is_primitive(u: Tensor) -> bool:
    """Dynkin criterion: each degree-m part e satisfies r(e) = m e (over Q this
    characterises the free Lie algebra, i.e. the primitives)."""
    if aug(u):
        return False
    for k in u.degrees():
        e = u.degree_part(k)
        if right_normed(e) != e.scale(k):
            return False
    return True


def is_grouplike(u: Tensor) -> bool:
    return coproduct(u) == PairTensor.from_tensors(u, u)


def tensor_from_json(d) -> Tensor:
    return Tensor.from_json(d)
