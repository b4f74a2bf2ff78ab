"""Filtered algebra endomorphisms and derivations of the truncated tensor algebra,
both determined by their values on the degree-1 symbols."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .tensor import DomainError, SignatureMismatch, SurfaceSignature, Tensor, _acc


def _check_images(sig: SurfaceSignature, images: Sequence[Tensor]):
    if len(images) != sig.rank:
        raise ValueError(f"need {sig.rank} symbol images, got {len(images)}")
    for t in images:
        if t.sig != sig:
            raise SignatureMismatch(f"{t.sig} vs {sig}")


class TensorEndo:
    """Algebra map sending symbol i to ``images[i]``; images must have no constant term."""

    def __init__(self, sig: SurfaceSignature, images: Sequence[Tensor]):
        _check_images(sig, images)
        for t in images:
            if t.coeff(()):
                raise DomainError("symbol image with constant term is not filtered")
        self.sig = sig
        self.images = tuple(images)

    @classmethod
    def identity(cls, sig):
        return cls(sig, [Tensor.symbol(sig, i) for i in range(sig.rank)])

    def __call__(self, t: Tensor) -> Tensor:
        if t.sig != self.sig:
            raise SignatureMismatch(f"{t.sig} vs {self.sig}")
        cache: dict = {(): Tensor.one(self.sig)}

        def img(w):
            # prefix products are shared between words
            r = cache.get(w)
            if r is None:
                r = img(w[:-1]) * self.images[w[-1]]
                cache[w] = r
            return r

        out: dict = {}
        for w, c in t.items():
            for w2, c2 in img(w).items():
                _acc(out, w2, c * c2)
        return Tensor(self.sig, out)

    def compose(self, other: "TensorEndo") -> "TensorEndo":
        """self o other."""
        return TensorEndo(self.sig, [self(t) for t in other.images])

    def __eq__(self, other):
        return isinstance(other, TensorEndo) and self.sig == other.sig and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def linear_part(self) -> list[list[Fraction]]:
        """Matrix M with M[j][i] = coefficient of symbol j in images[i]."""
        r = self.sig.rank
        return [[self.images[i].coeff((j,)) for i in range(r)] for j in range(r)]

    def degree_part(self, k: int) -> list[Tensor]:
        return [t.degree_part(k) for t in self.images]

    def truncate(self, k: int) -> "TensorEndo":
        return TensorEndo(self.sig, [t.truncate(k) for t in self.images])

    def inverse_linear(self) -> "TensorEndo":
        """Inverse of the degree-1 part, as an endomorphism."""
        inv = invert_matrix(self.linear_part())
        r = self.sig.rank
        return TensorEndo(
            self.sig,
            [Tensor(self.sig, {(j,): inv[j][i] for j in range(r)}) for i in range(r)],
        )

    def is_coproduct_preserving(self) -> bool:
        from .tensor import is_primitive

        return all(is_primitive(t) for t in self.images)

    def to_json(self) -> dict:
        return {
            "sig": self.sig.to_json(),
            "images": {self.sig.symbol_name(i): t.to_json() for i, t in enumerate(self.images)},
        }


class TensorDerivation:
    """Derivation sending symbol i to ``images[i]``, extended by the Leibniz rule."""

    def __init__(self, sig: SurfaceSignature, images: Sequence[Tensor]):
        _check_images(sig, images)
        self.sig = sig
        self.images = tuple(images)

    def __call__(self, t: Tensor) -> Tensor:
        if t.sig != self.sig:
            raise SignatureMismatch(f"{t.sig} vs {self.sig}")
        D = self.sig.trunc
        out: dict = {}
        for w, c in t.items():
            for i, x in enumerate(w):
                pre, post = w[:i], w[i + 1:]
                room = D - len(pre) - len(post)
                for mid, cm in self.images[x].items():
                    if len(mid) <= room:
                        _acc(out, pre + mid + post, c * cm)
        return Tensor(self.sig, out)

    def commutator(self, other: "TensorDerivation") -> "TensorDerivation":
        """[self, other] = self o other - other o self."""
        return TensorDerivation(
            self.sig, [self(b) - other(a) for a, b in zip(self.images, other.images)]
        )

    def __eq__(self, other):
        return isinstance(other, TensorDerivation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def exponential(self) -> TensorEndo:
        """exp of the derivation, summed until the series terminates by truncation."""
        imgs = []
        for i in range(self.sig.rank):
            x = Tensor.symbol(self.sig, i)
            total, term, r = x, x, 0
            while True:
                r += 1
                term = self(term).scale(Fraction(1, r))
                if not term:
                    break
                if r > 10 * (self.sig.trunc + 2) ** 2:
                    raise DomainError("derivation is not nilpotent at this truncation")
                total = total + term
            imgs.append(total)
        return TensorEndo(self.sig, imgs)


def invert_matrix(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise DomainError("degree-1 part is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def endo_log(U: TensorEndo) -> TensorDerivation:
    """log U = sum (-1)^{r-1}/r (U - id)^r on symbols; U must be the identity on H."""
    sig = U.sig
    r = sig.rank
    for i, t in enumerate(U.images):
        if t.degree_part(1) != Tensor.symbol(sig, i):
            raise DomainError("logarithm needs an automorphism acting trivially on H")
    imgs = []
    for i in range(r):
        x = Tensor.symbol(sig, i)
        term = U(x) - x
        total = Tensor.zero(sig)
        k = 1
        while term:
            total = total + term.scale(Fraction((-1) ** (k - 1), k))
            term = U(term) - term
            k += 1
        imgs.append(total)
    return TensorDerivation(sig, imgs)
