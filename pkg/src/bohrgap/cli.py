"""Command-line front end.

Every subcommand writes a report stream in ``jsonl`` (default) or ``tsv``.
Exit codes: 0 success, 1 negative verdict or module failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import almostinv, duality, groups, markov, reps, zconj
from .errors import BohrgapError, NotIntertwining

EPILOG = """exit codes:
  amenable      0 always; an Inconclusive verdict is flagged in the report
  spectral      0
  orthogonalize 0 if every step inequality holds, else 1
  witness       0 if <w, w_n> = 1/2 for every n, else 1
  sparsify      0 if every recorded bound re-verifies, else 1
  duality       0 if fixed counts agree (and transport verifies), else 1
  ergodic       0 Ergodic, 1 NotErgodic
  zconj         0 conjugate, 1 not conjugate
  audit         0 audit passed, 1 failed
  any           1 on a module failure, 2 on invalid input; typed errors print their name
"""


class UsageError(Exception):
    pass


def _read(arg: str) -> str:
    """Inline text, or a file when prefixed by @ or naming an existing path."""
    if arg.startswith("@"):
        return Path(arg[1:]).read_text()
    p = Path(arg)
    if "\n" not in arg and len(arg) < 4096 and p.is_file():
        return p.read_text()
    return arg


def _cap(args, default: int) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("BOHRGAP_CAP")
    return int(env) if env else default


def parse_radii(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        a, b = text.split("..", 1)
        radii = list(range(int(a), int(b) + 1))
    else:
        radii = [int(r) for r in text.split(",") if r.strip()]
    if not radii or any(r < 0 for r in radii):
        raise UsageError("radius schedule must be nonempty and nonnegative")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise UsageError("radius schedule must be strictly increasing")
    return radii


def _group(args) -> groups.GroupSpec:
    if not args.group:
        raise UsageError("--group is required")
    try:
        return groups.parse_group(args.group)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad --group: {exc}") from exc


def _measure(args, group) -> groups.GenMeasure:
    if args.measure in (None, "lazy-uniform"):
        mu = groups.lazy_uniform(group)
    else:
        mu = groups.parse_measure(_read(args.measure), group)
    return groups.validate_measure(group, mu)


def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, (list, tuple)):
        return [_plain(c) for c in x]
    return x


class Writer:
    def __init__(self, fmt: str, out=None):
        self.fmt = fmt
        self.out = out or sys.stdout
        self.rows: list[dict] = []

    def emit(self, record: dict):
        record = {k: _plain(v) for k, v in record.items()}
        if self.fmt == "jsonl":
            self.out.write(json.dumps(record) + "\n")
        else:
            self.rows.append(record)

    def close(self):
        if self.fmt != "tsv":
            return
        keys: list[str] = []
        for r in self.rows:
            for k in r:
                if k not in keys:
                    keys.append(k)
        self.out.write("\t".join(keys) + "\n")
        for r in self.rows:
            cells = []
            for k in keys:
                v = r.get(k, "")
                cells.append(json.dumps(v) if isinstance(v, (list, dict, bool)) else str(v))
            self.out.write("\t".join(cells) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_amenable(args, w: Writer) -> int:
    group = _group(args)
    mu = _measure(args, group)
    report = markov.kesten_verdict(group, mu, parse_radii(args.radii), theta=args.theta, tol=args.tol,
                                   method=args.method, cap=_cap(args, groups.BALL_CAP))
    for r, x in zip(report.radii, report.estimates):
        w.emit({"radius": r, "estimate": x})
    w.emit({"verdict": report.verdict, "margin": report.margin,
            "flagged": report.verdict == markov.INCONCLUSIVE})
    return 0


def cmd_spectral(args, w: Writer) -> int:
    group = _group(args)
    mu = _measure(args, group)
    rep = reps.Regular(group)
    for r in parse_radii(args.radii):
        x = markov.spectral_radius_truncated(rep, mu, r, tol=args.tol, method=args.method,
                                             cap=_cap(args, groups.BALL_CAP))
        w.emit({"radius": r, "estimate": x})
    return 0


def _sequence(args):
    text = args.sequence
    name, _, arg = text.partition(":")
    if name == "dyadic" and arg.isdigit():
        rep, mu, vecs = almostinv.dyadic_family(int(arg))
        return rep, mu, vecs
    if name in ("windows", "basis") and arg.isdigit():
        rep, vecs = almostinv.parse_sequence(text)
        return rep, groups.lazy_uniform(rep.group), vecs
    group = _group(args)
    body = _read(text)
    blocks = [b for b in body.split("\n\n") if b.strip()]
    vecs = [reps.parse_vector(b, group, exact=args.exact) for b in blocks]
    return reps.Regular(group), _measure(args, group), vecs


def cmd_orthogonalize(args, w: Writer) -> int:
    rep, mu, vecs = _sequence(args)
    res = almostinv.orthogonalize(almostinv.AlmostInvSeq(rep, mu, vecs))
    ok = True
    for s in res.steps:
        for g in s.defects:
            holds = s.defects[g] <= s.bounds[g]
            ok &= holds
            w.emit({"k": s.k, "m": s.m, "g": rep.group.format(g), "defect": s.defects[g],
                    "bound": s.bounds[g], "holds": holds})
    out = res.seq.vectors
    gram = max((abs(float(reps.inner(a, b)) - (1.0 if i == j else 0.0))
                for i, a in enumerate(out) for j, b in enumerate(out)), default=0.0)
    w.emit({"outputs": len(out), "max_gram_error": gram, "all_hold": ok})
    return 0 if ok else 1


def cmd_witness(args, w: Writer) -> int:
    rep, mu, vecs = _sequence(args)
    seq = almostinv.AlmostInvSeq(rep, mu, vecs)
    bundle = almostinv.scale_and_witness(seq, args.N)
    if bundle.invariant is not None:
        w.emit({"invariant_index": bundle.indices[0]})
        return 0
    for n, (eps, p) in enumerate(zip(bundle.epsilons, bundle.pairings()), start=1):
        w.emit({"n": n, "index": bundle.indices[n - 1], "epsilon": eps, "pairing": p})
    ok = bundle.check()
    w.emit({"all_half": ok, "exact": isinstance(bundle.epsilons[0], Fraction) if bundle.epsilons else True})
    return 0 if ok else 1


def cmd_sparsify(args, w: Writer) -> int:
    rep, _, vecs = _sequence(args)
    elems = [e for e in (args.elems or "").split(",") if e.strip()]
    res = almostinv.sparsify_weak_null(vecs, elems, rep, args.N)
    for n, j, g, val in res.checks:
        w.emit({"n": n, "j": j, "g": rep.group.format(g), "value": val, "log2_bound": -(n * n)})
    ok = res.verify()
    w.emit({"indices": res.indices, "verified": ok})
    return 0 if ok else 1


def _matrices(text: str) -> list:
    mats = []
    for block in _read(text).replace("\n", "/").split("--"):
        rows = [r for r in block.split("/") if r.strip()]
        if rows:
            mats.append([[int(c) for c in r.split()] for r in rows])
    return mats


def cmd_duality(args, w: Writer) -> int:
    if not args.abelian or not args.action:
        raise UsageError("duality needs --abelian and --action")
    cap = _cap(args, duality.ORDER_CAP)
    A = duality.FiniteAbelian.parse(args.abelian, cap)
    act = duality.AutoAction(A, _matrices(args.action))
    fe, fc = duality.fixed_counts(A, act)
    w.emit({"order": A.order, "fixed_elements": fe, "fixed_characters": fc})
    ok = fe == fc
    if args.xi:
        A2 = duality.FiniteAbelian.parse(args.abelian2 or args.abelian, cap)
        act2 = duality.AutoAction(A2, _matrices(args.action2 or args.action))
        xi = _matrices(args.xi)[0]
        try:
            dual = duality.dual_conjugacy_transport(xi, act, act2)
            w.emit({"transport": "verified", "characters": len(dual.table)})
        except NotIntertwining as exc:
            w.emit({"transport": "NotIntertwining", "witness": list(exc.witness[1]) if exc.witness else None,
                    "message": str(exc)})
            ok = False
    return 0 if ok else 1


def cmd_ergodic(args, w: Writer) -> int:
    v = duality.toral_ergodicity(duality.parse_matrix(_read(args.matrix)))
    w.emit(json.loads(v.to_json()))
    return 0 if v.ergodic else 1


def cmd_zconj(args, w: Writer) -> int:
    z = zconj.UnitAlgebraic.parse(args.z)
    wv = zconj.UnitAlgebraic.parse(args.w)
    verdict = zconj.decide_conjugacy(z, wv)
    w.emit(json.loads(verdict.to_json()))
    if args.trace and verdict.conjugate and z.is_algebraic:
        xi = zconj.build_xi(z, wv)
        gen = xi.z()
        for label, elem in (("z", gen), ("z^-1", gen.inverse()), ("z+z^-1", gen + gen.inverse())):
            img = xi(elem)
            w.emit({"element": label, "residue": [str(c) for c in img.residue],
                    "at_z": _cstr(elem.evaluate(z.numeric())), "image_at_w": _cstr(img.evaluate(wv.numeric()))})
    return 0 if verdict.conjugate else 1


def _cstr(c: complex) -> str:
    return f"{c.real:.12g}{c.imag:+.12g}i"


def cmd_audit(args, w: Writer) -> int:
    group = _group(args)
    mu = _measure(args, group)
    if not args.rep:
        raise UsageError("audit needs --rep (matrix representation file)")
    rep = reps.parse_matrix_rep(_read(args.rep), group)
    audit = markov.gap_bound_audit(rep, mu, samples=args.samples, seed=args.seed)
    w.emit(json.loads(audit.to_json()))
    return 0 if audit.passed else 1


COMMANDS = {
    "amenable": cmd_amenable,
    "spectral": cmd_spectral,
    "orthogonalize": cmd_orthogonalize,
    "witness": cmd_witness,
    "sparsify": cmd_sparsify,
    "duality": cmd_duality,
    "ergodic": cmd_ergodic,
    "zconj": cmd_zconj,
    "audit": cmd_audit,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--group", help="free:k | z:d | perm:n:<cycles>;<cycles>")
    common.add_argument("--measure", default="lazy-uniform", help="lazy-uniform or a measure file")
    common.add_argument("--radii", default="2..8", help="a..b or a comma list")
    common.add_argument("--tol", type=float, default=1e-12)
    common.add_argument("--samples", type=int, default=10_000)
    common.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None, help="ball/order cap (env BOHRGAP_CAP)")

    p = _Parser(prog="bohrgap", description=__doc__, epilog=EPILOG,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)
    a = sub.add_parser("amenable", parents=[common], help="Kesten verdict over a radius schedule")
    a.add_argument("--theta", type=float, default=0.95)
    a.add_argument("--method", choices=("power", "radial"), default="power")
    s = sub.add_parser("spectral", parents=[common], help="truncated spectral radius sweep")
    s.add_argument("--method", choices=("power", "radial"), default="power")
    for name, hlp in (("orthogonalize", "orthogonalize an almost invariant sequence"),
                      ("witness", "scale an orthonormal sequence and build the witness"),
                      ("sparsify", "weak-null sparsification")):
        q = sub.add_parser(name, parents=[common], help=hlp)
        q.add_argument("--sequence", required=True, help="windows:N | basis:N | dyadic:N | file")
        q.add_argument("--exact", action="store_true", help="read vector files as exact rationals")
        if name != "orthogonalize":
            q.add_argument("--N", type=int, default=5)
        if name == "sparsify":
            q.add_argument("--elems", default="", help="comma-separated words g_1,...,g_m")
    d = sub.add_parser("duality", parents=[common], help="fixed counts and dual transport")
    d.add_argument("--abelian", help="invariant factors, e.g. 2,4,8")
    d.add_argument("--action", help="matrices: rows split by '/' or newlines, generators by '--'")
    d.add_argument("--xi", help="isomorphism matrix for transport")
    d.add_argument("--abelian2")
    d.add_argument("--action2")
    e = sub.add_parser("ergodic", parents=[common], help="toral automorphism ergodicity")
    e.add_argument("--matrix", required=True, help='e.g. "2 1 / 1 1"')
    z = sub.add_parser("zconj", parents=[common], help="additive conjugacy of z^n and w^n")
    z.add_argument("z")
    z.add_argument("w")
    z.add_argument("--trace", action="store_true", help="print images under the field isomorphism")
    u = sub.add_parser("audit", parents=[common], help="gap bound audit for a matrix representation")
    u.add_argument("--rep", help="matrix representation file")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if args.tol <= 0:
        print("usage error: --tol must be positive", file=sys.stderr)
        return 2
    w = Writer(args.format)
    try:
        code = COMMANDS[args.command](args, w)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except BohrgapError as exc:
        # invalid input (ValueError/KeyError family) is a usage error; the rest are module failures
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, (ValueError, KeyError)) else 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    w.close()
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
