"""Batch invariant suites.  Every check returns a CheckReport; ordering is fixed
so the JSON report is byte-stable for a given configuration and seed."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations_with_replacement, product

from .chord import (
    a_map,
    a_map_comb,
    cc_bracket,
    circular_sum,
    double_factorial,
    lc_bracket,
    omega_diagram,
    standard_diagrams,
)
from .expansion import (
    boundary_loop_logs,
    boundary_target,
    build_expansion,
    commutator,
    log_theta,
    parse_word,
    surface_relator,
)
from .homgoldman import (
    HGElement,
    PairingLattice,
    center_member,
    commutator_member,
    hg_bracket,
    nu,
)
from .johnson import (
    CheckReport,
    L_theta,
    map_to_tensor,
    tensor_to_map,
    hk_basis,
    morita_trace,
    nested_commutator,
    nilpotent_agreement,
    tau2_closed_form,
    tau_extract,
    trace_cobracket_check,
    twist_auto,
)
from .lie import lie_basis, witt_dimension
from .linalg import rank
from .maps import TensorDerivation
from .necklace import Necklace, bracket_necklace, bracket_s, center_probe, derivation_of
from .stringops import (
    delta_alg,
    delta_word,
    is_coantisymmetric,
    kappa_direct,
    kappa_from_eta,
    minus_one_aug,
    mu_alg_word,
    necklace_left,
    one_minus_swap,
    rho,
)
from .tensor import (
    SurfaceSignature,
    Tensor,
    antipode,
    coproduct,
    cyclicize,
    exp_t,
    is_primitive,
    is_primitive_by_coproduct,
    log_t,
)

DEFAULT_SEED = 20240917
SUITE_NAMES = ("hopf", "expansion", "necklace", "stringops", "johnson", "homgoldman", "chord")


def _report(name, params, failures):
    return CheckReport(name, params, not failures, failures[:5])


def random_tensor(sig, rng, degrees, nterms=3, zero_const=True):
    terms = {}
    for _ in range(nterms):
        d = rng.choice(list(degrees))
        w = tuple(rng.randrange(sig.rank) for _ in range(d))
        terms[w] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    if zero_const:
        terms.pop((), None)
    return Tensor(sig, terms)


def words(rank, k):
    return list(product(range(rank), repeat=k))


# -- hopf --------------------------------------------------------------------


def suite_hopf(sig, seed):
    rng = random.Random(seed)
    out = []
    fail = []
    for _ in range(20):
        u = random_tensor(sig, rng, range(1, sig.trunc + 1))
        if log_t(exp_t(u)) != u:
            fail.append(u.pretty())
    out.append(_report("exp_log_roundtrip", {"samples": 20}, fail))
    fail = []
    for _ in range(20):
        u = random_tensor(sig, rng, range(0, 4), zero_const=False)
        v = random_tensor(sig, rng, range(0, 4), zero_const=False)
        if coproduct(u * v) != coproduct(u) * coproduct(v):
            fail.append([u.pretty(), v.pretty()])
        if antipode(u * v) != antipode(v) * antipode(u):
            fail.append(["antipode", u.pretty(), v.pretty()])
        a, b = u.truncate(2), v.truncate(2)
        if cyclicize(a * b) != cyclicize(b * a):
            fail.append(["cyclic", a.pretty(), b.pretty()])
    out.append(_report("bialgebra_axioms", {"samples": 20}, fail))
    fail = []
    for k in range(1, min(sig.trunc, 4) + 1):
        for l in lie_basis(sig, k):
            if not (is_primitive(l) and is_primitive_by_coproduct(l)):
                fail.append(l.pretty())
        for _ in range(5):
            u = random_tensor(sig, rng, [k], 2)
            if is_primitive(u) != is_primitive_by_coproduct(u):
                fail.append(["disagree", u.pretty()])
    out.append(_report("primitive_criteria", {"max_degree": min(sig.trunc, 4)}, fail))
    return out


# -- expansion ----------------------------------------------------------------


def suite_expansion(sig, seed):
    theta = build_expansion(sig)
    fail = []
    logs = boundary_loop_logs(theta)
    if sig.boundary_extra and logs[0] != boundary_target(sig):
        fail.append({"boundary": 0, "log": logs[0].pretty()})
    if not sig.boundary_extra and log_theta(theta, surface_relator(sig)) != Tensor.omega(sig):
        fail.append({"relator": "log theta(zeta) != omega"})
    for j, l in enumerate(logs[1:]):
        c = Tensor.symbol(sig, 2 * sig.genus + j)
        if l != c:
            fail.append({"boundary": j + 1, "log": l.pretty()})
    out = [_report("boundary_condition", {"genus": sig.genus, "boundaries": sig.boundary_extra, "degree": sig.trunc}, fail)]
    out.append(_report("grouplike", {}, [] if theta.is_grouplike() else ["log values not primitive"]))
    again = type(theta).from_json(theta.to_json())
    out.append(_report("json_roundtrip", {}, [] if again.to_json() == theta.to_json() else ["mismatch"]))
    return out


# -- necklace -----------------------------------------------------------------


def necklace_grid(sig, max_total):
    reps = {}
    for k in range(1, max_total):
        for w in words(sig.rank, k):
            n = Necklace.of_word(sig, w)
            reps.setdefault(tuple(sorted(n.orbits())), n)
    return list(reps.values())


def suite_necklace(sig, seed):
    if sig.boundary_extra:
        return [_report("necklace_skipped", {"reason": "needs n = 0"}, [])]
    max_total = min(sig.trunc, 6 if sig.genus == 1 else 5)
    grid = necklace_grid(sig, max_total)
    deg = lambda n: n.value.degrees()[0]
    fail_s, fail_d = [], []
    for u in grid:
        for v in grid:
            if deg(u) + deg(v) > max_total:
                continue
            b = bracket_necklace(u, v)
            if b != bracket_s(u, v):
                fail_s.append([u.value.pretty(), v.value.pretty()])
            du, dv, db = derivation_of(u), derivation_of(v), derivation_of(b)
            comm = du.commutator(dv)
            if any(x != y for x, y in zip(comm.images, db.images)):
                fail_d.append([u.value.pretty(), v.value.pretty()])
    params = {"max_total_degree": max_total, "grid": len(grid)}
    out = [_report("bracket_equals_bracket_s", params, fail_s), _report("bracket_is_derivation_commutator", params, fail_d)]
    rng = random.Random(seed)
    fail = []
    small = [n for n in grid if deg(n) <= 3]
    for _ in range(30):
        a, b, c = (rng.choice(small) for _ in range(3))
        if deg(a) + deg(b) + deg(c) - 4 > sig.trunc:
            continue
        j = bracket_necklace(a, bracket_necklace(b, c))
        j = j + bracket_necklace(b, bracket_necklace(c, a)) + bracket_necklace(c, bracket_necklace(a, b))
        if j:
            fail.append([a.value.pretty(), b.value.pretty(), c.value.pretty()])
    out.append(_report("jacobi", {"samples": 30}, fail))
    fail = []
    for k in range(1, sig.trunc // 2 + 1):
        for u in grid:
            if 2 * k + deg(u) - 2 <= sig.trunc and center_probe(k, u):
                fail.append({"k": k, "u": u.value.pretty()})
    out.append(_report("omega_power_central", {}, fail))
    return out


# -- string operations --------------------------------------------------------


def suite_stringops(sig, seed):
    if sig.boundary_extra:
        return [_report("stringops_skipped", {"reason": "needs n = 0"}, [])]
    out = []
    fail = []
    for x in range(sig.rank):
        for y in range(sig.rank):
            kd, ke = kappa_direct(sig, x, y), kappa_from_eta(sig, x, y)
            if kd != ke:
                fail.append([sig.symbol_name(x), sig.symbol_name(y)])
            r = rho(Tensor.symbol(sig, x), Tensor.symbol(sig, y))
            if minus_one_aug(kd) != r:
                fail.append(["aug", sig.symbol_name(x), sig.symbol_name(y)])
    out.append(_report("kappa_two_forms", {"degree": sig.trunc}, fail))
    max_len = min(sig.trunc, 7 if sig.genus == 1 else 5)
    fail_d, fail_a, fail_h = [], [], []
    for k in range(1, max_len + 1):
        for w in words(sig.rank, k):
            d = delta_word(sig, w)
            if d != one_minus_swap(necklace_left(mu_alg_word(sig, w))):
                fail_d.append(sig.word_names(w))
            if not is_coantisymmetric(d):
                fail_a.append(sig.word_names(w))
            if d and d.total_degrees() != [k - 2]:
                fail_h.append(sig.word_names(w))
    p = {"max_word_length": max_len}
    out.append(_report("cobracket_from_mu", p, fail_d))
    out.append(_report("cobracket_coantisymmetric", p, fail_a))
    out.append(_report("cobracket_degree_minus_two", p, fail_h))
    return out


# -- johnson ------------------------------------------------------------------


def suite_johnson(sig, seed):
    if sig.boundary_extra:
        return [_report("johnson_skipped", {"reason": "needs n = 0"}, [])]
    out = []
    g, D = sig.genus, sig.trunc
    fail = []
    for k in range(1, min(D, 6) + 1):
        got = len(lie_basis(sig, k))
        if got != witt_dimension(sig.rank, k):
            fail.append({"k": k, "basis": got})
    out.append(_report("witt_dimension", {"max_k": min(D, 6)}, fail))
    if D >= 3:
        d1 = len(hk_basis(sig, 1))
        exp = (2 * g) * (2 * g - 1) * (2 * g - 2) // 6
        out.append(_report("dim_h1", {"dim": d1, "expected": exp}, [] if d1 == exp else [d1]))
    for k in (2, 4):
        if k + 2 <= D:
            fail = [i for i, u in enumerate(hk_basis(sig, k)) if morita_trace(k, u)]
            out.append(_report("morita_trace_even_vanishes", {"k": k}, fail))
    for k in range(3, D - 1):
        out.append(trace_cobracket_check(sig, k))
    theta = build_expansion(sig)
    curves = ["a1"] + (["[a1,b1]"] if g >= 2 else [])
    for text in curves:
        if D < 4:
            break
        x = parse_word(sig, text)
        U, L = twist_auto(theta, x), L_theta(theta, x)
        t1_ok = tau_extract(U, 1) == -L.degree_part(3).value
        t2_ok = tau_extract(U, 2) == tau2_closed_form(L)
        out.append(_report("johnson_tau_formulas", {"curve": text}, [] if t1_ok and t2_ok else [{"tau1": t1_ok, "tau2": t2_ok}]))
    if g >= 2 and D >= 4:
        a1, b1, a2, b2 = (parse_word(sig, s) for s in ("a1", "b1", "a2", "b2"))
        fail = []
        for k in range(1, min(3, D - 1) + 1):
            c = nested_commutator([a2, b2, a1, b1][: k + 1])
            for x1 in (a1, commutator(a1, b1)):
                if x1.homology(sig) and k + 1 > D:
                    continue
                if not x1.homology(sig) and k + 2 > D:
                    continue
                if not nilpotent_agreement(theta, x1, x1 * c, k, c):
                    fail.append({"k": k, "x1": x1.format(sig)})
        out.append(_report("nilpotent_agreement", {}, fail))
    return out


# -- homological Goldman ------------------------------------------------------


def random_lattice(rng, r):
    m = [[0] * r for _ in range(r)]
    for i in range(r):
        for j in range(i + 1, r):
            v = rng.randint(-2, 2)
            m[i][j], m[j][i] = v, -v
    return PairingLattice(r, tuple(map(tuple, m)))


def random_hg(rng, lat, nterms=2, bound=2):
    return HGElement(
        lat,
        {tuple(rng.randint(-bound, bound) for _ in range(lat.rank)): rng.randint(-3, 3) for _ in range(nterms)},
    )


def hg_jacobi_failures(rng, samples):
    fail = []
    for _ in range(samples):
        lat = random_lattice(rng, rng.randint(1, 6))
        x, y, z = (random_hg(rng, lat) for _ in range(3))
        j = hg_bracket(x, hg_bracket(y, z)) + hg_bracket(y, hg_bracket(z, x)) + hg_bracket(z, hg_bracket(x, y))
        if j:
            fail.append(lat.to_json())
    return fail


def commutator_oracle(lat, v, bound):
    """gcd of (X . Y) over X + Y = v with X, Y in the coordinate box."""
    from math import gcd

    g = 0
    for y in product(range(-bound, bound + 1), repeat=lat.rank):
        x = tuple(a - b for a, b in zip(v, y))
        if all(abs(c) <= bound for c in x):
            g = gcd(g, lat.pair(x, y))
    return g


def suite_homgoldman(sig, seed, samples=10000):
    rng = random.Random(seed)
    out = [_report("jacobi", {"samples": samples}, hg_jacobi_failures(rng, samples))]
    lat = PairingLattice.symplectic(1)
    bound = 3
    fail = []
    for v in product(range(-bound, bound + 1), repeat=2):
        g = commutator_oracle(lat, v, bound)
        if g != nu(v):
            fail.append({"vec": list(v), "oracle": g})
        for c in range(1, 7):
            expect = g != 0 and c % g == 0
            if commutator_member(HGElement.basis(lat, v, c)) != expect:
                fail.append({"vec": list(v), "coeff": c})
    out.append(_report("commutator_ideal", {"bound": bound}, fail))
    fail = []
    for _ in range(50):
        lat = random_lattice(rng, rng.randint(1, 4))
        u = random_hg(rng, lat, 3, 2)
        for kv in lat.kernel_basis()[:1]:
            u = u + HGElement.basis(lat, kv, 1)
        central = all(not hg_bracket(HGElement.basis(lat, y), u) for y in product(range(-2, 3), repeat=lat.rank))
        # the box contains the coordinate vectors, which already detect a nonzero mu
        if central != center_member(u):
            fail.append({"lattice": lat.to_json(), "u": u.to_json()})
    out.append(_report("center_is_kernel_span", {"samples": 50}, fail))
    return out


# -- chord diagrams -----------------------------------------------------------


def linear_commutator(u: Tensor, v: Tensor) -> Tensor:
    """Tensor of [D_u, D_v] on H, where D_u(X) = C12(X u) extended as a derivation."""
    du, dv = tensor_to_map(u), tensor_to_map(v)
    Du, Dv = TensorDerivation(u.sig, du), TensorDerivation(u.sig, dv)
    return map_to_tensor(u.sig, [Du(b) - Dv(a) for a, b in zip(du, dv)])


def suite_chord(sig, seed):
    out = []
    fail = [m for m in range(1, 5) if len(standard_diagrams(m)) != double_factorial(2 * m - 1)]
    out.append(_report("linear_count", {"max_m": 4}, fail))
    g = sig.genus
    ranks = {}
    for m in range(1, 4):
        if 2 * m > sig.trunc:
            break
        s = SurfaceSignature(g, 0, 2 * m)
        r = rank([a_map(s, C) for C in standard_diagrams(m)])
        ranks[m] = r
    out.append(_report("a_map_rank", {"genus": g, "ranks": {str(k): v for k, v in ranks.items()}}, []))
    fail = []
    for m in range(1, 3):
        for l in range(1, 4 - m):
            s = SurfaceSignature(g, 0, 2 * (m + l))
            for C in standard_diagrams(m):
                for Cp in standard_diagrams(l):
                    lhs = a_map_comb(s, lc_bracket(C, Cp))
                    if lhs != linear_commutator(a_map(s, C), a_map(s, Cp)):
                        fail.append([list(C), list(Cp)])
    out.append(_report("a_map_homomorphism", {"max_chords": 3}, fail))
    om = omega_diagram(2)
    fail = []
    for m in range(1, 4):
        for C in standard_diagrams(m):
            e = circular_sum(C)
            if cc_bracket(om, e):
                fail.append([list(p) for p in C])
    out.append(_report("omega2_central", {"max_chords": 3}, fail))
    return out


SUITES = {
    "hopf": suite_hopf,
    "expansion": suite_expansion,
    "necklace": suite_necklace,
    "stringops": suite_stringops,
    "johnson": suite_johnson,
    "homgoldman": suite_homgoldman,
    "chord": suite_chord,
}


def run(name: str, sig: SurfaceSignature, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    if name == "all":
        return [r for n in SUITE_NAMES for r in SUITES[n](sig, seed)]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](sig, seed)
