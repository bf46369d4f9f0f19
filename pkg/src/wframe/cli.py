"""Command-line front end.

Examples::

    wframe gen-mask --p 2 --n 1 --b "1,0" --out haar.json
    wframe extend haar.json --r 1 --out family_haar.json
    wframe parseval family_haar.json --signal u1.json
    wframe approx-order family_haar.json --signal u1.json --csv tail.csv
    wframe vc --forward --p 2 --n 1 --in "1,0"

Exit codes: 0 success, 1 mathematical rejection (inadmissible mask, failed
unitarity check, impossible extension, failed Parseval check), 2 I/O or
schema errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import io
from .extension import ExtensionImpossible, extend_algorithm_a, extend_theorem2, random_unitary_e1, verify_uep
from .frames import analyze, approx_order_report, parseval_check, refinable_hat
from .masks import AdmissibilityError, generate_mask, random_boundary, validate_mask
from .walsh import log_p, vc_forward, vc_inverse

EXIT_OK, EXIT_REJECT, EXIT_IO = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    out: str | None = None
    p: int | None = None
    n: int | None = None
    r: int | None = None
    b: list[list[float]] | None = None
    seed: int = 0
    tol: float | None = None
    j_min: int = 0
    slack: str = "deterministic"


def _parse_vector(text: str) -> np.ndarray:
    path = Path(text)
    if path.suffix == ".json" or (path.exists() and path.is_file()):
        data = io.load_json(path)
        if not isinstance(data, list):
            raise io.SchemaError(f"{text}: expected a JSON array")
        return np.array([complex(*x) if isinstance(x, list) else complex(x) for x in data])
    try:
        return np.array([complex(x.strip().replace(" ", "")) for x in text.split(",") if x.strip()])
    except ValueError as exc:
        raise io.SchemaError(f"cannot parse vector {text!r}: {exc}") from None


def _fmt_vector(v: np.ndarray) -> str:
    if np.all(v.imag == 0):
        return ",".join(repr(float(x)) for x in v.real)
    return ",".join(f"{x.real!r}{x.imag:+.17g}j" for x in v)


def _emit(obj) -> None:
    print(io.dumps(obj))


def _write(path, obj) -> None:
    Path(path).write_text(io.dumps(obj) + "\n", encoding="utf-8")


def cmd_gen_mask(args) -> int:
    cfg = RunConfig("gen-mask", out=args.out, p=args.p, n=args.n, seed=args.seed)
    if args.random:
        if args.n is None:
            raise io.SchemaError("--random needs --n")
        b = random_boundary(args.p, args.n, np.random.default_rng(args.seed), tight=args.tight)
    elif args.b is not None:
        b = _parse_vector(args.b)
    else:
        raise io.SchemaError("give boundary values with --b or use --random")
    try:
        n = log_p(b.size, args.p)
    except ValueError as exc:
        raise io.SchemaError(str(exc)) from None
    if args.n is not None and n != args.n:
        raise io.SchemaError(f"--b has {b.size} entries but p^n = {args.p ** args.n}")
    cfg.n = n
    cfg.b = io.complex_pairs(b)
    try:
        m = generate_mask(b, args.p)
    except AdmissibilityError as exc:
        bad = generate_mask(b, args.p, check=False)
        report = validate_mask(bad).to_json()
        report["error"] = str(exc)
        report["config"] = asdict(cfg)
        _emit(report)
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    report = validate_mask(m).to_json()
    report["config"] = asdict(cfg)
    report["coeffs"] = io.complex_pairs(m.coeffs)
    if args.out:
        _write(args.out, io.mask_to_json(m))
    _emit(report)
    return EXIT_OK if report["admissible"] else EXIT_REJECT


def cmd_extend(args) -> int:
    cfg = RunConfig("extend", [args.mask], args.out, r=args.r, seed=args.seed, slack=args.slack, tol=args.tol)
    m0 = io.mask_from_json(io.load_json(args.mask))
    cfg.p, cfg.n = m0.p, m0.n
    rng = np.random.default_rng(args.seed)
    try:
        if args.random_V:
            V = [random_unitary_e1(args.r, rng) for _ in range(m0.p ** (m0.n - 1))]
            fam = extend_theorem2(m0, args.r, V, args.slack, rng)
        else:
            fam = extend_algorithm_a(m0, args.r, args.slack, rng)
    except ExtensionImpossible as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        _emit({"error": str(exc), "l": exc.l, "deficiency": exc.deficiency, "config": asdict(cfg)})
        return EXIT_REJECT
    except ValueError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        _emit({"error": str(exc), "config": asdict(cfg)})
        return EXIT_REJECT
    rep = verify_uep(fam, args.tol)
    out = {"uep": rep.to_json(), "config": asdict(cfg)}
    if args.out:
        _write(args.out, io.family_to_json(fam))
    else:
        out["family"] = io.family_to_json(fam)
    _emit(out)
    return EXIT_OK if rep.passed else EXIT_REJECT


def cmd_verify(args) -> int:
    fam = io.family_from_json(io.load_json(args.family))
    rep = verify_uep(fam, args.tol)
    out = rep.to_json()
    out["mask"] = validate_mask(fam.m0).to_json()
    _emit(out)
    return EXIT_OK if rep.passed and out["mask"]["admissible"] else EXIT_REJECT


def _family_and_signal(args):
    fam = io.family_from_json(io.load_json(args.family))
    sig = io.signal_from_json(io.load_json(args.signal))
    if sig.p != fam.p:
        raise io.SchemaError(f"signal base {sig.p} does not match family base {fam.p}")
    rep = verify_uep(fam)
    if not rep.passed:
        print(f"rejected: family fails the unitarity check (max_dev {rep.max_dev:.3g})", file=sys.stderr)
        _emit({"uep": rep.to_json()})
        return fam, sig, None
    return fam, sig, analyze(sig, fam, args.j_min, check=False)


def cmd_parseval(args) -> int:
    fam, sig, table = _family_and_signal(args)
    if table is None:
        return EXIT_REJECT
    rep = parseval_check(sig, fam, args.j_min, args.tol, table=table)
    if args.csv:
        io.write_csv(
            args.csv,
            ["nu", "j", "k", "re", "im"],
            ((nu, j, k, c.real, c.imag) for nu, j, k, c in table.rows()),
        )
    _emit(rep.to_json())
    return EXIT_OK if rep.passed else EXIT_REJECT


def cmd_approx_order(args) -> int:
    fam, sig, table = _family_and_signal(args)
    if table is None:
        return EXIT_REJECT
    rows = approx_order_report(sig, fam, args.j_min, table=table)
    if args.csv:
        io.write_csv(args.csv, ["j", "E_j", "bound"], rows)
    _emit({"J": table.J, "j_min": args.j_min, "rows": [{"j": j, "E_j": e, "bound": b} for j, e, b in rows]})
    return EXIT_OK


def cmd_refinable(args) -> int:
    m0 = io.mask_from_json(io.load_json(args.mask))
    try:
        g = refinable_hat(m0, args.M)
    except ValueError as exc:
        print(f"rejected: {exc}", file=sys.stderr)
        return EXIT_REJECT
    if args.out:
        _write(args.out, g.to_json())
    _emit({"M": g.M, "N": g.N, "ghat_theta": io.complex_pairs([g.values[0]])[0], "window_energy": g.energy()})
    return EXIT_OK


def cmd_vc(args) -> int:
    v = _parse_vector(args.input)
    try:
        n = log_p(v.size, args.p)
    except ValueError as exc:
        raise io.SchemaError(str(exc)) from None
    if args.n is not None and n != args.n:
        raise io.SchemaError(f"input has {v.size} entries but p^n = {args.p ** args.n}")
    method = "naive" if args.naive else "fast"
    out = vc_inverse(v, args.p, method) if args.inverse else vc_forward(v, args.p, method)
    print(_fmt_vector(out))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wframe", description="Tight wavelet frames on Vilenkin groups")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-mask", help="scaling mask from boundary values")
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--b", help='comma-separated values, e.g. "1,0.5,0,0.5"')
    g.add_argument("--random", action="store_true")
    g.add_argument("--tight", action="store_true", help="with --random: every partition mass 1")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen_mask)

    e = sub.add_parser("extend", help="wavelet masks for a scaling mask")
    e.add_argument("mask")
    e.add_argument("--r", type=int, required=True)
    e.add_argument("--slack", choices=["deterministic", "random"], default="deterministic")
    e.add_argument("--random-V", dest="random_V", action="store_true")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--tol", type=float, default=1e-10)
    e.add_argument("--out")
    e.set_defaults(func=cmd_extend)

    v = sub.add_parser("verify", help="unitarity check of a mask family")
    v.add_argument("family")
    v.add_argument("--tol", type=float, default=1e-10)
    v.set_defaults(func=cmd_verify)

    for name, func, help_ in (
        ("parseval", cmd_parseval, "exact frame energy of a signal"),
        ("approx-order", cmd_approx_order, "tail energies E_j"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("family")
        s.add_argument("--signal", required=True)
        s.add_argument("--j-min", dest="j_min", type=int, default=0)
        s.add_argument("--tol", type=float, default=1e-8)
        s.add_argument("--csv")
        s.set_defaults(func=func)

    rf = sub.add_parser("refinable", help="export ghat on a window")
    rf.add_argument("mask")
    rf.add_argument("--M", type=int, default=2)
    rf.add_argument("--out")
    rf.set_defaults(func=cmd_refinable)

    t = sub.add_parser("vc", help="discrete Vilenkin-Chrestenson transform")
    d = t.add_mutually_exclusive_group(required=True)
    d.add_argument("--forward", action="store_true")
    d.add_argument("--inverse", action="store_true")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--n", type=int)
    t.add_argument("--in", dest="input", required=True, help="comma list or JSON file")
    t.add_argument("--naive", action="store_true")
    t.set_defaults(func=cmd_vc)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (io.SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
