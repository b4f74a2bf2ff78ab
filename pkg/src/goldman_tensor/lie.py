"""Free Lie algebra on H: Lyndon words, standard bracketing, Witt dimensions."""

from __future__ import annotations

from functools import lru_cache

from .tensor import SurfaceSignature, Tensor, word_key


def lyndon_words(rank: int, k: int) -> list[tuple]:
    """Lyndon words of length exactly k over {0..rank-1}, in word order (Duval)."""
    if k < 1 or rank < 1:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == k:
            out.append(tuple(w))
        while len(w) < k:
            w.append(w[len(w) - m])
        while w and w[-1] == rank - 1:
            w.pop()
    return sorted(out, key=word_key)


def is_lyndon(w: tuple) -> bool:
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


def standard_factorization(w: tuple) -> tuple[tuple, tuple]:
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


@lru_cache(maxsize=None)
def _bracketed(w: tuple) -> tuple:
    # polynomial of the standard bracketing, as sorted (word, int) pairs
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    pu, pv = dict(_bracketed(u)), dict(_bracketed(v))
    acc: dict = {}
    for a, ca in pu.items():
        for b, cb in pv.items():
            acc[a + b] = acc.get(a + b, 0) + ca * cb
            acc[b + a] = acc.get(b + a, 0) - ca * cb
    return tuple(sorted((x, c) for x, c in acc.items() if c))


def lyndon_bracket(sig: SurfaceSignature, w: tuple) -> Tensor:
    if len(w) > sig.trunc:
        raise ValueError("word longer than truncation")
    return Tensor(sig, dict(_bracketed(tuple(w))))


def lie_basis(sig: SurfaceSignature, k: int) -> list[Tensor]:
    """Basis of L(k) inside H^{(x)k}, one element per Lyndon word."""
    if not 1 <= k <= sig.trunc:
        raise ValueError(f"degree {k} outside 1..{sig.trunc}")
    return [lyndon_bracket(sig, w) for w in lyndon_words(sig.rank, k)]


def mobius(n: int) -> int:
    res, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            res = -res
        p += 1
    return -res if n > 1 else res


def witt_dimension(rank: int, k: int) -> int:
    total = sum(mobius(d) * rank ** (k // d) for d in range(1, k + 1) if k % d == 0)
    return total // k
