"""Command-line entry point.  Every command prints one JSON document.

Exit codes: 0 success, 1 a verification failed, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import verify
from .chord import a_map, comb_to_json, double_factorial, lc_bracket, lc_normalize, standard_diagrams
from .expansion import FreeWord, build_expansion, parse_word
from .homgoldman import HGElement, PairingLattice, UnsupportedPairing, center_member, commutator_member, hg_bracket
from .johnson import L_theta, hk_basis, morita_trace, satoh_trace, tau2_closed_form, tau_extract, trace_cobracket_check, twist_auto
from .linalg import rank
from .necklace import Necklace, bracket_necklace, bracket_s
from .stringops import delta_alg
from .tensor import SurfaceSignature, Tensor, cyclicize


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    genus: int
    boundary_extra: int
    trunc: int
    seed: int = verify.DEFAULT_SEED

    @property
    def sig(self) -> SurfaceSignature:
        return SurfaceSignature(self.genus, self.boundary_extra, self.trunc)

    def to_json(self) -> dict:
        return {"genus": self.genus, "boundary_extra": self.boundary_extra, "trunc": self.trunc, "seed": self.seed}


def parse_necklace(sig: SurfaceSignature, text: str) -> Necklace:
    """A necklace JSON object, or a word such as ``A1A1B1`` read as N(word)."""
    text = text.strip()
    if text.startswith("{"):
        n = Necklace.from_json(json.loads(text))
        if n.sig != sig:
            raise UsageError("necklace signature differs from the command configuration")
        return n
    return Necklace(cyclicize(Tensor.word(sig, text)))


def parse_chord(text: str):
    """``1-2,3-4`` -> LinearChord in standard label with its sign."""
    try:
        raw = [tuple(int(x) for x in p.split("-")) for p in text.split(",") if p.strip()]
    except ValueError as e:
        raise UsageError(f"bad chord diagram {text!r}") from e
    return lc_normalize(raw)


def parse_vector(text: str, r: int) -> tuple:
    try:
        v = tuple(int(x) for x in text.split(","))
    except ValueError as e:
        raise UsageError(f"bad vector {text!r}") from e
    if len(v) != r:
        raise UsageError(f"vector {text!r} needs {r} coordinates")
    return v


def _power_root(w: FreeWord) -> tuple[FreeWord, int]:
    letters = w.letters
    n = len(letters)
    for p in range(1, n + 1):
        if n % p == 0 and letters == letters[:p] * (n // p):
            return FreeWord(letters[:p]), n // p
    return w, 1


# -- commands -----------------------------------------------------------------


def cmd_expand(cfg: RunConfig, args) -> tuple[dict, int]:
    theta = build_expansion(cfg.sig)
    return theta.to_json(), 0


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, int]:
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    reports = verify.run(args.suite, cfg.sig, cfg.seed)
    ok = all(r.passed for r in reports)
    return {"suite": args.suite, "config": cfg.to_json(), "pass": ok, "checks": [r.to_json() for r in reports]}, 0 if ok else 1


def cmd_twist(cfg: RunConfig, args) -> tuple[dict, int]:
    sig = cfg.sig
    if sig.boundary_extra:
        raise UsageError("twist needs --boundaries 0")
    x = parse_word(sig, args.word)
    k = args.k
    if k < 1 or k + 2 > sig.trunc:
        raise UsageError(f"--k must satisfy 1 <= k <= degree - 2 = {sig.trunc - 2}")
    theta = build_expansion(sig)
    U = twist_auto(theta, x)
    L = L_theta(theta, x)
    taus = {f"tau{i}": tau_extract(U, i).to_json()["terms"] for i in range(1, k + 1)}
    out = {"config": cfg.to_json(), "word": x.format(sig), "tau": taus, "checks": []}
    ok = True
    t1 = tau_extract(U, 1) == -L.degree_part(3).value
    out["checks"].append({"check": "tau1_equals_minus_L3", "pass": t1})
    ok &= t1
    if k >= 2:
        t2 = tau_extract(U, 2) == tau2_closed_form(L)
        out["checks"].append({"check": "tau2_closed_form", "pass": t2})
        ok &= t2
    root, n = _power_root(x.cyclic_reduce())
    if n > 1:
        V = twist_auto(theta, root)
        P = V
        for _ in range(n * n - 1):
            P = P.compose(V)
        same = all(a == b for a, b in zip(P.images, U.images))
        out["checks"].append({"check": "power_relation", "root": root.format(sig), "exponent": n * n, "pass": same})
        ok &= same
    return out, 0 if ok else 1


def cmd_bracket(cfg: RunConfig, args) -> tuple[dict, int]:
    sig = cfg.sig
    u, v = parse_necklace(sig, args.u), parse_necklace(sig, args.v)
    b = bracket_s(u, v) if sig.boundary_extra else bracket_necklace(u, v)
    return {"config": cfg.to_json(), "bracket": b.to_json()}, 0


def cmd_cobracket(cfg: RunConfig, args) -> tuple[dict, int]:
    sig = cfg.sig
    if sig.boundary_extra:
        raise UsageError("cobracket needs --boundaries 0")
    d = delta_alg(parse_necklace(sig, args.u))
    return {"config": cfg.to_json(), "cobracket": d.to_json()}, 0


def cmd_trace(cfg: RunConfig, args) -> tuple[dict, int]:
    sig = cfg.sig
    k = args.k
    if sig.boundary_extra or k < 1 or k + 2 > sig.trunc:
        raise UsageError(f"trace needs --boundaries 0 and 1 <= k <= degree - 2 = {sig.trunc - 2}")
    basis = hk_basis(sig, k)
    tr = [morita_trace(k, u) for u in basis]
    st = [satoh_trace(k, u) for u in basis]
    out = {
        "config": cfg.to_json(),
        "k": k,
        "dim_h": len(basis),
        "morita_rank": rank(tr),
        "satoh_rank": rank(st),
    }
    code = 0
    if k >= 3:
        rep = trace_cobracket_check(sig, k)
        out["trace_cobracket"] = rep.to_json()
        code = 0 if rep.passed else 1
    return out, code


def cmd_chord(cfg: RunConfig, args) -> tuple[dict, int]:
    sig = cfg.sig
    if args.bracket:
        c1, c2 = (parse_chord(t) for t in args.bracket)
        if c1.sign != 1 or c2.sign != 1:
            raise UsageError("bracket inputs must be written in standard label (i < j)")
        return {"bracket": comb_to_json(lc_bracket(c1, c2))}, 0
    m = args.m
    if 2 * m > sig.trunc or sig.boundary_extra:
        raise UsageError("chord needs --boundaries 0 and 2m <= degree")
    diagrams = standard_diagrams(m)
    r = rank([a_map(sig.with_trunc(2 * m), C) for C in diagrams])
    return {
        "config": cfg.to_json(),
        "m": m,
        "count": len(diagrams),
        "double_factorial": double_factorial(2 * m - 1),
        "a_map_rank": r,
        "diagrams": [[list(p) for p in C] for C in diagrams],
    }, 0


def cmd_homgoldman(cfg: RunConfig, args) -> tuple[dict, int]:
    if args.matrix:
        lat = PairingLattice.from_json(json.loads(args.matrix))
    else:
        lat = PairingLattice.symplectic(cfg.genus)
    vecs = [parse_vector(t, lat.rank) for t in args.vectors]
    out = {"lattice": lat.to_json(), "op": args.op}
    if args.op == "bracket":
        if len(vecs) != 2:
            raise UsageError("bracket takes two vectors")
        out["result"] = hg_bracket(HGElement.basis(lat, vecs[0]), HGElement.basis(lat, vecs[1])).to_json()
    elif args.op in ("commutator", "center"):
        if len(vecs) != 1:
            raise UsageError(f"{args.op} takes one vector")
        u = HGElement.basis(lat, vecs[0], args.coeff)
        try:
            out["member"] = commutator_member(u) if args.op == "commutator" else center_member(u)
        except UnsupportedPairing as e:
            raise UsageError(str(e)) from e
    return out, 0


COMMANDS = {
    "expand": cmd_expand,
    "verify": cmd_verify,
    "twist": cmd_twist,
    "bracket": cmd_bracket,
    "cobracket": cmd_cobracket,
    "trace": cmd_trace,
    "chord": cmd_chord,
    "homgoldman": cmd_homgoldman,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--genus", type=int, default=1)
    common.add_argument("--boundaries", type=int, default=0, help="number of extra boundary components")
    common.add_argument("--degree", type=int, default=6, help="truncation degree")
    common.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    common.add_argument("--out", default="-", help="output file, '-' for stdout")
    common.add_argument("--format", choices=["json"], default="json")

    p = _Parser(prog="goldman-tensor", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("expand", parents=[common], help="build a symplectic or boundary-normalized expansion")
    s = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    s.add_argument("suite", help="|".join(verify.SUITE_NAMES + ("all",)))
    s = sub.add_parser("twist", parents=[common], help="Johnson maps of the generalized twist along a word")
    s.add_argument("word")
    s.add_argument("--k", type=int, default=2)
    s = sub.add_parser("bracket", parents=[common], help="bracket of two necklaces")
    s.add_argument("u")
    s.add_argument("v")
    s = sub.add_parser("cobracket", parents=[common], help="Schedler cobracket of a necklace")
    s.add_argument("u")
    s = sub.add_parser("trace", parents=[common], help="h(k), its traces and the cobracket comparison")
    s.add_argument("--k", type=int, default=3)
    s = sub.add_parser("chord", parents=[common], help="linear chord diagrams and the a-map")
    s.add_argument("--m", type=int, default=2)
    s.add_argument("--bracket", nargs=2, metavar="DIAGRAM", help="two diagrams written as 1-2,3-4")
    s = sub.add_parser("homgoldman", parents=[common], help="homological Goldman Lie algebra")
    s.add_argument("op", choices=["bracket", "commutator", "center"])
    s.add_argument("vectors", nargs="+", help="comma-separated integer coordinates")
    s.add_argument("--coeff", type=int, default=1)
    s.add_argument("--matrix", help='pairing as JSON {"rank": r, "matrix": [[...]]}')
    return p


def _emit(doc: dict, dest: str):
    text = json.dumps(doc, indent=2) + "\n"
    if dest == "-":
        sys.stdout.write(text)
    else:
        with open(dest, "w") as fh:
            fh.write(text)


def main(argv=None) -> int:
    out_dest = "-"
    try:
        args = build_parser().parse_args(argv)
        out_dest = args.out
        try:
            cfg = RunConfig(args.genus, args.boundaries, args.degree, args.seed)
            cfg.sig
        except ValueError as e:
            raise UsageError(str(e)) from e
        doc, code = COMMANDS[args.command](cfg, args)
    except UsageError as e:
        _emit({"error": str(e)}, out_dest)
        return 2
    except (ValueError, KeyError) as e:
        _emit({"error": f"{type(e).__name__}: {e}"}, out_dest)
        return 2
    _emit(doc, out_dest)
    return code


if __name__ == "__main__":
    sys.exit(main())
