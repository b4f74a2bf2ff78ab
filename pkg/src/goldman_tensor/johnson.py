"""h(k), Morita and Satoh traces, generalized Dehn twists and Johnson maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .expansion import Expansion, FreeWord, eval_theta, log_theta
from .lie import lie_basis
from .linalg import kernel_basis, rank
from .maps import TensorDerivation, TensorEndo, endo_log
from .necklace import Necklace, derivation_of, min_rotation, split_leading
from .stringops import delta_alg, s_map
from .tensor import (
    DomainError,
    SurfaceSignature,
    Tensor,
    _acc,
    contract_c12,
    cyclicize,
    is_primitive,
    log_t,
    sym_project,
)


def _require_closed(sig):
    if sig.boundary_extra:
        raise DomainError("this operation is defined for one boundary component (n = 0)")


def bracket_map_rows(sig: SurfaceSignature, k: int) -> tuple[list[Tensor], list[Tensor]]:
    """Spanning set X l of H (x) L(k+1) and the images X l - l X."""
    _require_closed(sig)
    if k < 1 or k + 2 > sig.trunc:
        raise DomainError(f"h({k}) needs 1 <= k and k + 2 <= {sig.trunc}")
    elems, images = [], []
    for x in range(sig.rank):
        X = Tensor.symbol(sig, x)
        for l in lie_basis(sig, k + 1):
            elems.append(X * l)
            images.append(X * l - l * X)
    return elems, images


def hk_basis(sig: SurfaceSignature, k: int) -> list[Tensor]:
    """Deterministic basis of ker(H (x) L(k+1) -> L(k+2))."""
    elems, images = bracket_map_rows(sig, k)
    out = []
    for vec in kernel_basis(images):
        t = Tensor.zero(sig)
        for c, e in zip(vec, elems):
            if c:
                t = t + e.scale(c)
        out.append(t)
    return out


def in_hk(u: Tensor, k: int) -> bool:
    """u lies in H (x) L(k+1) and is killed by the bracket map."""
    if u.degrees() not in ([], [k + 2]):
        return False
    parts = split_leading(u) if u else []
    for p in parts:
        if p and (p.degrees() != [k + 1] or not is_primitive(p)):
            return False
    acc = Tensor.zero(u.sig)
    for x, p in enumerate(parts):
        X = Tensor.symbol(u.sig, x)
        acc = acc + X * p - p * X
    return not acc


def morita_trace(k: int, u: Tensor) -> Tensor:
    """sym_project(C12(u)) on h(k)."""
    if not in_hk(u, k):
        raise DomainError(f"tensor is not in h({k})")
    return sym_project(contract_c12(u))


def satoh_trace(k: int, u: Tensor) -> Tensor:
    """C12 followed by the quotient to cyclic coinvariants; keys are minimal rotations."""
    if u.degrees() not in ([], [k + 2]):
        raise DomainError(f"expected a homogeneous degree-{k + 2} tensor")
    out: dict = {}
    for w, c in contract_c12(u).items():
        _acc(out, min_rotation(w), c)
    return Tensor(u.sig, out)


def L_theta(theta: Expansion, x: FreeWord, extra: int = 0) -> Necklace:
    """1/2 N(l l) with l = log theta(x).

    ``extra`` raises the truncation of the result; degrees up to trunc + 1
    are exact because l l in degree trunc + 1 only uses l below trunc + 1.
    """
    if extra not in (0, 1):
        raise ValueError("only one extra degree is determined by the expansion")
    l = log_theta(theta, x)
    if extra:
        l = l.retrunc(theta.sig.trunc + extra)
    return Necklace(cyclicize(l * l).scale(Fraction(1, 2)))


def twist_derivation(theta: Expansion, x: FreeWord) -> TensorDerivation:
    """Derivation of -L_theta(x) on symbols, exact through the truncation.

    A necklace of degree m sends symbols to degree m - 1, so the top degree
    of each image needs L one degree beyond the truncation.
    """
    sig = theta.sig
    d = derivation_of(-L_theta(theta, x, extra=1))
    return TensorDerivation(sig, [t.retrunc(sig.trunc) for t in d.images])


def twist_auto(theta: Expansion, x: FreeWord) -> TensorEndo:
    """exp of the derivation attached to -L_theta(x)."""
    return twist_derivation(theta, x).exponential()


def map_to_tensor(sig: SurfaceSignature, images) -> Tensor:
    """f: H -> T as sum_i B_i f(A_i) - A_i f(B_i), so that f(X) = C12(X u)."""
    _require_closed(sig)
    out = Tensor.zero(sig)
    for i in range(sig.genus):
        A, B = Tensor.symbol(sig, 2 * i), Tensor.symbol(sig, 2 * i + 1)
        out = out + B * images[2 * i] - A * images[2 * i + 1]
    return out


def tensor_to_map(u: Tensor) -> list[Tensor]:
    sig = u.sig
    return [contract_c12(Tensor.symbol(sig, i) * u) for i in range(sig.rank)]


def tau_extract(U: TensorEndo, k: int) -> Tensor:
    """Degree-(k+1) part of U o |U|^{-1} on H, as a tensor in H (x) H^{(x)k+1}."""
    if k + 2 > U.sig.trunc:
        raise DomainError(f"tau_{k} needs truncation >= {k + 2}")
    V = U.compose(U.inverse_linear())
    return map_to_tensor(U.sig, V.degree_part(k + 1))


def log_automorphism(U: TensorEndo) -> TensorDerivation:
    """log of an automorphism acting trivially on H."""
    return endo_log(U)


def derivation_to_tensor(d: TensorDerivation, degree: int) -> Tensor:
    """Degree-shift component of a derivation restricted to H, as a tensor."""
    return map_to_tensor(d.sig, [t.degree_part(degree + 1) for t in d.images])


def tau2_closed_form(L: Necklace) -> Tensor:
    """-L4 + 1/2 [L2, L4] + 1/2 (L3)^2, with the bracket and square read as
    compositions of the associated derivations on H."""
    sig = L.sig
    L2, L3, L4 = (L.degree_part(d) for d in (2, 3, 4))
    d2, d3, d4 = derivation_of(L2), derivation_of(L3), derivation_of(L4)
    comm = [d2(d4.images[i]) - d4(d2.images[i]) for i in range(sig.rank)]
    sq = [d3(d3.images[i]) for i in range(sig.rank)]
    part = [
        (c.scale(Fraction(1, 2)) + s.scale(Fraction(1, 2))).degree_part(3) for c, s in zip(comm, sq)
    ]
    return -L4.value + map_to_tensor(sig, part)


@dataclass
class CheckReport:
    check: str
    params: dict
    passed: bool
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        d = {"check": self.check}
        d.update(self.params)
        d["pass"] = self.passed
        d["witnesses"] = self.witnesses
        return d


def trace_cobracket_check(sig: SurfaceSignature, k: int) -> CheckReport:
    """s(delta^alg(u)) == -k Tr_k(u) for every u in the h(k) basis."""
    if k < 3:
        raise DomainError("the trace-cobracket identity is stated for k >= 3")
    wit = []
    basis = hk_basis(sig, k)
    for idx, u in enumerate(basis):
        lhs = s_map(delta_alg(Necklace(u)))
        rhs = morita_trace(k, u).scale(-k)
        if lhs != rhs:
            wit.append({"index": idx, "lhs": lhs.to_json()["terms"], "rhs": rhs.to_json()["terms"]})
    return CheckReport(
        "trace_cobracket",
        {"k": k, "genus": sig.genus, "basis_size": len(basis)},
        not wit,
        wit,
    )


class MalformedWitness(ValueError):
    """The supplied commutator witness does not relate the two loops."""


def nilpotent_agreement(theta: Expansion, x1: FreeWord, x2: FreeWord, k: int, c: FreeWord) -> bool:
    """Twists along x1 and x2 = x1 c agree on H modulo degree > k, or > k+1
    when both loops are null-homologous.  c must satisfy theta(c) - 1 in T_{k+1}."""
    sig = theta.sig
    if x1 * c != x2:
        raise MalformedWitness("x2 is not x1 * c")
    dev = eval_theta(theta, c) - 1
    if dev and dev.min_degree() < k + 1:
        raise MalformedWitness(f"theta(c) - 1 is not in filtration degree {k + 1}")
    depth = k
    if not x1.homology(sig) and not x2.homology(sig):
        depth = k + 1
    if depth > sig.trunc:
        raise DomainError("truncation too low for the requested agreement depth")
    U1, U2 = twist_auto(theta, x1), twist_auto(theta, x2)
    return all(a.truncate(depth) == b.truncate(depth) for a, b in zip(U1.images, U2.images))


def nested_commutator(words: list[FreeWord]) -> FreeWord:
    """[[..[w1, w2], w3], ..]."""
    from .expansion import commutator

    out = words[0]
    for w in words[1:]:
        out = commutator(out, w)
    return out


def rank_of(tensors) -> int:
    return rank(tensors)
