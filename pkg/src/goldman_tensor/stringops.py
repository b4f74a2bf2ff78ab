"""Tensorial intersection operations: the pairing rho, kappa, mu^alg and
Schedler's cobracket."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .necklace import Necklace, min_rotation
from .tensor import (
    DomainError,
    PairTensor,
    SurfaceSignature,
    Tensor,
    _acc,
    antipode,
    aug,
    coproduct,
    cyclicize,
    power_series,
    sym_project,
)


@lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple:
    """B_0..B_n with B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        binom = 1
        for k in range(m):
            acc += binom * B[k]
            binom = binom * (m + 1 - k) // (k + 1)
        B.append(-acc / (m + 1))
    return tuple(B)


@lru_cache(maxsize=None)
def s_series(order: int) -> tuple:
    """Coefficients of s(z) = 1/(e^{-z}-1) + 1/z through z^order."""
    B = bernoulli_numbers(order + 1)
    coeffs = [Fraction(-1, 2)]
    fact = 1
    for n in range(2, order + 2):
        fact *= n
        coeffs.append(-B[n] / fact)
    return tuple(coeffs[: order + 1])


@lru_cache(maxsize=None)
def s_of_omega(sig: SurfaceSignature) -> Tensor:
    # omega has degree 2, so s(omega) needs z^k only for 2k <= trunc
    return power_series(s_series(sig.trunc // 2), Tensor.omega(sig))


def _require_closed(sig):
    if sig.boundary_extra:
        raise DomainError("this operation is defined for one boundary component (n = 0)")


def _arrow(a: Tensor, b: Tensor) -> Tensor:
    # X1..Xm ~> Y1..Yn = (Xm . Y1) X1..X(m-1) Y2..Yn
    sig = a.sig
    out: dict = {}
    for x, cx in a.items():
        for y, cy in b.items():
            if not x or not y:
                continue
            p = sig.pairing(x[-1], y[0])
            if p:
                _acc(out, x[:-1] + y[1:], cx * cy * p)
    return Tensor(sig, out)


def rho(a: Tensor, b: Tensor) -> Tensor:
    """(a - aug a) ~> (b - aug b) + (a - aug a) s(omega) (b - aug b)."""
    a._check(b)
    _require_closed(a.sig)
    a0 = a - aug(a)
    b0 = b - aug(b)
    return _arrow(a0, b0) + a0 * s_of_omega(a.sig) * b0


def _antipode_right(p: PairTensor) -> PairTensor:
    def iota(w):
        return {w[::-1]: (-1 if len(w) % 2 else 1)}

    return p.map_right(iota)


def _symbol_tensor(sig, x) -> Tensor:
    if isinstance(x, Tensor):
        if x.degrees() != [1] or len(x) != 1:
            raise DomainError("kappa is implemented on single degree-1 symbols")
        return x
    return Tensor.symbol(sig, x)


def kappa_direct(sig: SurfaceSignature, x, y) -> PairTensor:
    """-(X . Y) 1 (x) 1 - (1 (x) iota) Delta(X s(omega) Y)."""
    _require_closed(sig)
    X, Y = _symbol_tensor(sig, x), _symbol_tensor(sig, y)
    xi = next(iter(X.terms))[0]
    yi = next(iter(Y.terms))[0]
    c = sig.pairing(xi, yi) * next(iter(X.terms.values())) * next(iter(Y.terms.values()))
    const = PairTensor(sig, {((), ()): -c})
    return const - _antipode_right(coproduct(X * s_of_omega(sig) * Y))


def kappa_from_eta(sig: SurfaceSignature, x, y) -> PairTensor:
    """-(1 (x) m)(1 (x) 1 (x) m) P_2431 (1 (x) (1 (x) iota)Delta eta (x) 1)(Delta (x) Delta), eta = rho.

    On a (x) b this is -sum eta(a'', b')_(1) (x) b'' iota(eta(a'', b')_(2)) a'.
    """
    _require_closed(sig)
    X, Y = _symbol_tensor(sig, x), _symbol_tensor(sig, y)
    D = sig.trunc
    out: dict = {}
    da, db = coproduct(X), coproduct(Y)
    for (a1, a2), ca in da.items():
        for (b1, b2), cb in db.items():
            eta = rho(Tensor.word(sig, a2), Tensor.word(sig, b1))
            if not eta:
                continue
            for (e1, e2), ce in coproduct(eta).items():
                s = -1 if len(e2) % 2 else 1
                right = b2 + e2[::-1] + a1
                if len(e1) + len(right) <= D:
                    _acc(out, (e1, right), -ca * cb * ce * s)
    return PairTensor(sig, out)


def minus_one_aug(p: PairTensor) -> Tensor:
    """(-1 (x) aug): keep terms with empty right factor, negated."""
    out = {a: -c for (a, b), c in p.items() if not b}
    return Tensor(p.sig, out)


def _as_word(sig, w) -> tuple:
    if isinstance(w, str) or (w and isinstance(w[0], str)):
        return sig.parse_word(w)
    return tuple(w)


def mu_alg_word(sig: SurfaceSignature, w) -> PairTensor:
    """sum_{i<j} (X_i . X_j) X_1..X_{i-1} X_{j+1}..X_m (x) N(X_{i+1}..X_{j-1})."""
    _require_closed(sig)
    w = _as_word(sig, w)
    out: dict = {}
    m = len(w)
    for i in range(m):
        for j in range(i + 1, m):
            p = sig.pairing(w[i], w[j])
            if not p:
                continue
            left = w[:i] + w[j + 1:]
            inner = w[i + 1:j]
            for k in range(len(inner)):
                _acc(out, (left, inner[k:] + inner[:k]), Fraction(p))
    return PairTensor(sig, out)


def mu_alg(u: Tensor) -> PairTensor:
    out = PairTensor(u.sig)
    for w, c in u.items():
        out = out + mu_alg_word(u.sig, w).scale(c)
    return out


def mu_theta_low(u) -> PairTensor:
    """mu^alg(u) - 1/2 (1 (x) N(u)): the expansion-independent low-degree part."""
    if isinstance(u, tuple):
        raise TypeError("pass a Tensor")
    n = cyclicize(u)
    half = PairTensor(u.sig, {((), w): c / 2 for w, c in n.items()})
    return mu_alg(u) - half


def delta_word(sig: SurfaceSignature, w) -> PairTensor:
    """Schedler's formula evaluated on the representative w of N(w)."""
    _require_closed(sig)
    w = _as_word(sig, w)
    out: dict = {}
    m = len(w)
    for i in range(m):
        for j in range(i + 1, m):
            p = sig.pairing(w[i], w[j])
            if not p:
                continue
            inner = w[i + 1:j]
            outer = w[j + 1:] + w[:i]
            if not inner or not outer:
                continue
            for a in range(len(inner)):
                ri = inner[a:] + inner[:a]
                for b in range(len(outer)):
                    ro = outer[b:] + outer[:b]
                    _acc(out, (ri, ro), Fraction(-p))
                    _acc(out, (ro, ri), Fraction(p))
    return PairTensor(sig, out)


def delta_alg(u: Necklace) -> PairTensor:
    """Cobracket of a necklace, evaluated on minimal-rotation orbit representatives."""
    if not isinstance(u, Necklace):
        raise DomainError("delta_alg needs a Necklace")
    out = PairTensor(u.sig)
    for r, a in u.orbits().items():
        out = out + delta_word(u.sig, r).scale(a)
    return out


def necklace_left(p: PairTensor) -> PairTensor:
    """(N (x) id)."""
    return p.map_left(lambda w: _cyc_dict(w))


def _cyc_dict(w):
    out: dict = {}
    for i in range(len(w)):
        r = w[i:] + w[:i]
        out[r] = out.get(r, 0) + 1
    return out


def one_minus_swap(p: PairTensor) -> PairTensor:
    return p - p.swap()


def s_map(p: PairTensor) -> Tensor:
    """Symmetric image of (projection to degree 1) (x) inclusion, multiplied out."""
    out: dict = {}
    for (a, b), c in p.items():
        if len(a) == 1:
            _acc(out, tuple(sorted(a + b)), c)
    return Tensor(p.sig, out)


def is_coantisymmetric(p: PairTensor) -> bool:
    return p.swap() == -p


__all__ = [
    "bernoulli_numbers",
    "s_series",
    "s_of_omega",
    "rho",
    "kappa_direct",
    "kappa_from_eta",
    "minus_one_aug",
    "mu_alg",
    "mu_alg_word",
    "mu_theta_low",
    "delta_word",
    "delta_alg",
    "necklace_left",
    "one_minus_swap",
    "s_map",
    "is_coantisymmetric",
    "min_rotation",
    "sym_project",
    "antipode",
]
