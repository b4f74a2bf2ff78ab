"""Free-group words of the surface group and group-like expansions.

Generators share their index with the homology symbol they map to: alpha_i is
``A_i``, beta_i is ``B_i`` and gamma_j is ``C_j``.  Text names are ``a1``,
``b1``, ``c1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .lie import lie_basis
from .linalg import InconsistentSystemError, solve_linear
from .maps import TensorEndo
from .tensor import (
    SurfaceSignature,
    Tensor,
    bracket,
    exp_t,
    is_primitive,
    log_t,
)


class ExpansionError(RuntimeError):
    """The degree-by-degree construction hit a defect it cannot correct."""


def generator_name(sig: SurfaceSignature, i: int) -> str:
    return sig.symbol_name(i).lower()


def generator_index(sig: SurfaceSignature, name: str) -> int:
    return sig.symbol(name.upper())


@dataclass(frozen=True)
class FreeWord:
    """Freely reduced word; letters are (generator index, +1 or -1)."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(tuple(self.letters)))

    @classmethod
    def gen(cls, i: int, e: int = 1) -> "FreeWord":
        if e == 0:
            return cls()
        s = 1 if e > 0 else -1
        return cls(((i, s),) * abs(e))

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return FreeWord(self.letters + other.letters)

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple((i, -e) for i, e in reversed(self.letters)))

    def __pow__(self, n: int) -> "FreeWord":
        base = self if n >= 0 else self.inverse()
        out = FreeWord()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self):
        return len(self.letters)

    def homology(self, sig: SurfaceSignature) -> dict:
        out: dict = {}
        for i, e in self.letters:
            out[i] = out.get(i, 0) + e
        return {i: c for i, c in out.items() if c}

    def format(self, sig: SurfaceSignature) -> str:
        return " ".join(generator_name(sig, i) + ("" if e == 1 else "^-1") for i, e in self.letters)

    def cyclic_reduce(self) -> "FreeWord":
        w = list(self.letters)
        while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
            w = w[1:-1]
        return FreeWord(tuple(w))


def _reduce(letters: tuple) -> tuple:
    out: list = []
    for x in letters:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def reduce(w: FreeWord) -> FreeWord:
    return FreeWord(w.letters)


def commutator(x: FreeWord, y: FreeWord) -> FreeWord:
    """x y x^-1 y^-1."""
    return x * y * x.inverse() * y.inverse()


_TOKEN = re.compile(r"\s*(\[|\]|\(|\)|,|\^-?\d+|[abc]\d+)")


def parse_word(sig: SurfaceSignature, text: str) -> FreeWord:
    """Parse ``"a1 b1^-1"``, ``"a1^2"``, ``"[a1,b1]"`` or ``"([a1,b1] a2)^-1"``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse word at {text[pos:]!r}")
        toks.append(m.group(1))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    toks.append(None)
    i = 0

    def word():
        nonlocal i
        out = FreeWord()
        while toks[i] not in (None, "]", ")", ","):
            out = out * factor()
        return out

    def factor():
        nonlocal i
        t = toks[i]
        if t == "[":
            i += 1
            x = word()
            expect(",")
            y = word()
            expect("]")
            base = commutator(x, y)
        elif t == "(":
            i += 1
            base = word()
            expect(")")
        elif t is not None and t[0] in "abc":
            i += 1
            base = FreeWord.gen(generator_index(sig, t))
        else:
            raise ValueError(f"unexpected token {t!r}")
        if toks[i] is not None and toks[i].startswith("^"):
            base = base ** int(toks[i][1:])
            i += 1
        return base

    def expect(t):
        nonlocal i
        if toks[i] != t:
            raise ValueError(f"expected {t!r}, got {toks[i]!r}")
        i += 1

    w = word()
    if toks[i] is not None:
        raise ValueError(f"trailing input at token {toks[i]!r}")
    return w


def surface_relator(sig: SurfaceSignature) -> FreeWord:
    """Product of commutators [alpha_i, beta_i] over the genus."""
    out = FreeWord()
    for i in range(sig.genus):
        out = out * commutator(FreeWord.gen(2 * i), FreeWord.gen(2 * i + 1))
    return out


def boundary_words(sig: SurfaceSignature) -> list[FreeWord]:
    """[zeta] for one boundary component, else [xi_0, gamma_1, ..., gamma_n].

    xi_0 = gamma_n^-1 ... gamma_1^-1 (prod [alpha_i, beta_i])^-1, so that
    zeta gamma_1 ... gamma_n xi_0 = 1 and xi_0 has class -sum C_j.
    """
    zeta = surface_relator(sig)
    n = sig.boundary_extra
    if n == 0:
        return [zeta]
    g2 = 2 * sig.genus
    gammas = [FreeWord.gen(g2 + j) for j in range(n)]
    xi0 = FreeWord()
    for c in reversed(gammas):
        xi0 = xi0 * c.inverse()
    xi0 = xi0 * zeta.inverse()
    return [xi0] + gammas


class Expansion:
    """Group-like expansion given by primitive log values on the generators."""

    def __init__(self, sig: SurfaceSignature, log_values: Sequence[Tensor], path_logs: Sequence[Tensor] | None = None):
        if path_logs is None:
            path_logs = [Tensor.zero(sig) for _ in range(sig.boundary_extra)]
        if len(path_logs) != sig.boundary_extra:
            raise ValueError(f"need {sig.boundary_extra} path logs")
        if any(t.coeff(()) or t.sig != sig for t in path_logs):
            raise ValueError("path logs must have no constant term")
        if len(log_values) != sig.rank:
            raise ValueError(f"need {sig.rank} log values")
        for i, t in enumerate(log_values):
            if t.sig != sig:
                raise ValueError("log value over a different signature")
            if t.degree_part(1) != Tensor.symbol(sig, i) or t.coeff(()):
                raise ValueError(f"log value of {generator_name(sig, i)} must be its class plus higher terms")
        self.sig = sig
        self.log_values = tuple(log_values)
        self.path_logs = tuple(path_logs)
        self._exp = [exp_t(t) for t in log_values]
        self._exp_inv = [exp_t(-t) for t in log_values]

    @classmethod
    def trivial(cls, sig):
        return cls(sig, [Tensor.symbol(sig, i) for i in range(sig.rank)])

    def transform(self, endo: TensorEndo) -> "Expansion":
        """U o theta for a filtered automorphism U fixing every degree-1 symbol
        modulo higher terms; symplectic when U fixes omega."""
        if endo.sig != self.sig:
            raise ValueError("automorphism over a different signature")
        return Expansion(self.sig, [endo(t) for t in self.log_values], [endo(t) for t in self.path_logs])

    def is_grouplike(self) -> bool:
        return all(is_primitive(t) for t in self.log_values + self.path_logs)

    def factor(self, i: int, e: int) -> Tensor:
        return self._exp[i] if e > 0 else self._exp_inv[i]

    def to_json(self) -> dict:
        d = {
            "sig": self.sig.to_json(),
            "log_values": {generator_name(self.sig, i): t.to_json() for i, t in enumerate(self.log_values)},
        }
        if self.sig.boundary_extra:
            d["path_logs"] = {f"p{j + 1}": t.to_json() for j, t in enumerate(self.path_logs)}
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Expansion":
        s = d["sig"]
        sig = SurfaceSignature(s["genus"], s.get("boundary_extra", 0), s["trunc"])
        vals = []
        for i in range(sig.rank):
            t = Tensor.from_json(d["log_values"][generator_name(sig, i)])
            if t.sig != sig:
                raise ValueError("log value signature differs from expansion signature")
            vals.append(t)
        paths = None
        if sig.boundary_extra:
            paths = [Tensor.from_json(d["path_logs"][f"p{j + 1}"]) for j in range(sig.boundary_extra)]
        return cls(sig, vals, paths)

    def __eq__(self, other):
        return (
            isinstance(other, Expansion)
            and self.log_values == other.log_values
            and self.path_logs == other.path_logs
        )


def eval_theta(theta: Expansion, w: FreeWord) -> Tensor:
    out = Tensor.one(theta.sig)
    for i, e in w.letters:
        if not 0 <= i < theta.sig.rank:
            raise ValueError(f"unknown generator index {i}")
        out = out * theta.factor(i, e)
    return out


def log_theta(theta: Expansion, w: FreeWord) -> Tensor:
    return log_t(eval_theta(theta, w))


def conjugate_symbol(sig: SurfaceSignature, path_log: Tensor, j: int) -> Tensor:
    """exp(w) C_j exp(-w): log of theta(gamma_j) when the path to the j-th base point is exp(w)."""
    c = Tensor.symbol(sig, 2 * sig.genus + j)
    return exp_t(path_log) * c * exp_t(-path_log)


def _correct(sig, boundary, target, orientation):
    """Raise log values degree by degree until log theta(boundary) == target.

    Unknowns in degree d are Lie elements added to log theta(alpha_i),
    log theta(beta_i) (d >= 2) and to the path logs w_j (d >= 1).  Their
    effect on log theta(boundary) in degree d+1 is linear; ``orientation`` is
    -1 when the boundary word contains the inverse commutator product.
    """
    # work one degree higher: the top-degree log components are only pinned
    # down by the defect one degree above the truncation
    final = sig
    sig = sig.with_trunc(sig.trunc + 1)
    target = target.retrunc(sig.trunc)
    g2 = 2 * sig.genus
    n = sig.boundary_extra
    values = [Tensor.symbol(sig, i) for i in range(sig.rank)]
    paths = [Tensor.zero(sig) for _ in range(n)]
    for d in range(1, sig.trunc):
        theta = Expansion(sig, values, paths)
        defect = log_theta(theta, boundary) - target
        low = defect.truncate(d)
        if low:
            raise ExpansionError(f"defect in degree <= {d} cannot be corrected: {low.pretty()}")
        e = defect.degree_part(d + 1)
        if not e:
            continue
        if not is_primitive(e):
            raise ExpansionError("defect is not primitive; expansion is not group-like")
        basis = lie_basis(sig, d)
        rows, slots = [], []
        if d >= 2:
            for x in range(g2):
                effect = _partner_effect(sig, x)
                for b in basis:
                    rows.append(effect(b).scale(orientation))
                    slots.append((x, b))
        for j in range(n):
            c = Tensor.symbol(sig, g2 + j)
            # log theta(gamma_j) enters the boundary word inverted
            for b in basis:
                rows.append(-bracket(b, c))
                slots.append((g2 + j, b))
        try:
            coeffs = solve_linear(rows, -e)
        except InconsistentSystemError as exc:
            raise ExpansionError(
                f"degree {d + 1} defect is outside the image of the correction map"
            ) from exc
        for c, (x, b) in zip(coeffs, slots):
            if not c:
                continue
            if x < g2:
                values[x] = values[x] + b.scale(c)
            else:
                paths[x - g2] = paths[x - g2] + b.scale(c)
        for j in range(n):
            values[g2 + j] = conjugate_symbol(sig, paths[j], j)
    theta = Expansion(sig, values, paths)
    if log_theta(theta, boundary) != target:
        raise ExpansionError("construction did not converge")
    return Expansion(
        final,
        [t.retrunc(final.trunc) for t in values],
        [t.retrunc(final.trunc) for t in paths],
    )


def _partner_effect(sig, x):
    # adding u to log(alpha_i) shifts log prod[alpha, beta] by [u, B_i];
    # adding v to log(beta_i) shifts it by [A_i, v]
    i = x // 2
    if x % 2 == 0:
        B = Tensor.symbol(sig, 2 * i + 1)
        return lambda u: bracket(u, B)
    A = Tensor.symbol(sig, 2 * i)
    return lambda v: bracket(A, v)


def build_symplectic(sig: SurfaceSignature) -> Expansion:
    """Canonical expansion with log theta(zeta) = omega up to the truncation."""
    if sig.boundary_extra != 0:
        raise ValueError("symplectic expansions need a single boundary component")
    return _correct(sig, surface_relator(sig), Tensor.omega(sig), 1)


def boundary_target(sig: SurfaceSignature) -> Tensor:
    """-omega - sum C_j, the required log of theta(xi_0)."""
    out = -Tensor.omega(sig)
    for j in range(sig.boundary_extra):
        out = out - Tensor.symbol(sig, 2 * sig.genus + j)
    return out


def build_boundary_normalized(sig: SurfaceSignature) -> Expansion:
    """Expansion with log theta(xi_0) = -omega - sum C_j and, at each extra
    boundary, log(p_j^-1 theta(gamma_j) p_j) = C_j for the stored path value p_j.

    Path logs are only switched on where the alpha/beta corrections alone
    cannot absorb the defect (minimal-pivot order puts them last).
    """
    if sig.boundary_extra < 1:
        raise ValueError("boundary-normalized expansions need at least one extra boundary")
    return _correct(sig, boundary_words(sig)[0], boundary_target(sig), -1)


def build_expansion(sig: SurfaceSignature) -> Expansion:
    return build_symplectic(sig) if sig.boundary_extra == 0 else build_boundary_normalized(sig)


def boundary_loop_logs(theta: Expansion) -> list[Tensor]:
    """log theta(xi_j) at each boundary's own base point: [xi_0, xi_1, ..., xi_n]."""
    sig = theta.sig
    words = boundary_words(sig)
    if sig.boundary_extra == 0:
        return [log_theta(theta, words[0])]
    out = [log_theta(theta, words[0])]
    for j in range(sig.boundary_extra):
        p = exp_t(theta.path_logs[j])
        q = exp_t(-theta.path_logs[j])
        out.append(log_t(q * eval_theta(theta, words[j + 1]) * p))
    return out


@dataclass(frozen=True)
class FreeEndo:
    """Endomorphism of the free group given by generator images."""

    images: tuple

    @classmethod
    def identity(cls, sig):
        return cls(tuple(FreeWord.gen(i) for i in range(sig.rank)))

    @classmethod
    def from_map(cls, sig, mapping: Mapping[int, FreeWord]):
        return cls(tuple(mapping.get(i, FreeWord.gen(i)) for i in range(sig.rank)))

    def apply(self, w: FreeWord) -> FreeWord:
        out = FreeWord()
        for i, e in w.letters:
            out = out * (self.images[i] if e > 0 else self.images[i].inverse())
        return out

    def compose(self, other: "FreeEndo") -> "FreeEndo":
        """self o other."""
        return FreeEndo(tuple(self.apply(w) for w in other.images))


def theta_conjugate(theta: Expansion, phi: FreeEndo) -> TensorEndo:
    """The filtered algebra map U with U(theta(x)) = theta(phi(x)) for every generator x.

    Solved degree by degree: U([x]) = log theta(phi x) - U(log theta(x) - [x]),
    where the right side only sees components of U already fixed.
    """
    sig = theta.sig
    r = sig.rank
    if len(phi.images) != r:
        raise ValueError("endomorphism has the wrong number of generators")
    targets = [log_theta(theta, phi.images[i]) for i in range(r)]
    tails = [theta.log_values[i] - Tensor.symbol(sig, i) for i in range(r)]
    images = [Tensor.zero(sig) for _ in range(r)]
    for d in range(1, sig.trunc + 1):
        U = TensorEndo(sig, images)
        new = []
        for i in range(r):
            part = (targets[i] - U(tails[i])).degree_part(d)
            new.append(images[i] + part)
        images = new
    return TensorEndo(sig, images)
